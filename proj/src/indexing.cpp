#include "dendro/indexing.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

namespace dendro {

namespace {

Perm compose(const Perm& a, const Perm& b) {
    Perm out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
    return out;
}

Perm inverse(const Perm& p) {
    Perm out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<int>(i);
    return out;
}

Perm identity_perm(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

std::vector<int> greedy_generators(const FiniteGroup& g, ElemSet h) {
    std::vector<int> gens;
    ElemSet span = bit(g.identity());
    for (int x : bits(h))
        if (!has(span, x)) {
            gens.push_back(x);
            span = g.generated(span | bit(x));
        }
    return gens;
}

// Splits [0, n) across threads; body(i) must only write to slot i.
template <class F>
void parallel_for(int n, int jobs, F body) {
    if (jobs <= 1 || n < 2) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(jobs, n); ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

ElemSet GTreeClass::subgroup() const {
    ElemSet h = 0;
    for (const auto& [g, p] : graph) h |= bit(g);
    return h;
}

GTreeClasses::GTreeClasses(Truncation tr) : tr_(std::move(tr)), trees_(tr_.trees()) {
    const FiniteGroup& grp = tr_.group;
    for (int u = 0; u < static_cast<int>(trees_.size()); ++u) {
        auts_.push_back(automorphisms(trees_[u]));
        shapes_[trees_[u].shape_code()] = u;
    }
    std::set<GTreeClass> found;
    for (ElemSet h : grp.subgroups()) {
        auto gens = greedy_generators(grp, h);
        for (int u = 0; u < static_cast<int>(trees_.size()); ++u) {
            const auto& auts = auts_[u];
            std::vector<std::size_t> pick(gens.size(), 0);
            while (true) {
                std::vector<std::pair<int, Perm>> assign;
                for (std::size_t i = 0; i < gens.size(); ++i) assign.emplace_back(gens[i], auts[pick[i]]);
                try {
                    auto act = derive_action(grp, trees_[u].size(), assign, h);
                    std::vector<std::pair<int, Perm>> graph;
                    for (int x : bits(h)) graph.emplace_back(x, act[x]);
                    found.insert(canonical(u, graph));
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NotAnAction) throw;
                }
                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == auts.size()) pick[i++] = 0;
                if (i == pick.size()) break;
            }
        }
    }
    classes_.assign(found.begin(), found.end());
    for (int i = 0; i < size(); ++i) index_[classes_[i]] = i;
    maps_.resize(trees_.size());
    for (std::size_t u = 0; u < trees_.size(); ++u)
        for (std::size_t v = 0; v < trees_.size(); ++v) maps_[u].push_back(monotone_maps(trees_[u], trees_[v]));
}

GTreeClass GTreeClasses::canonical(int tree, std::vector<std::pair<int, Perm>> graph) const {
    const FiniteGroup& grp = tr_.group;
    std::sort(graph.begin(), graph.end());
    GTreeClass best{tree, graph};
    for (int g = 0; g < grp.order(); ++g)
        for (const Perm& s : auts_[tree]) {
            Perm si = inverse(s);
            std::vector<std::pair<int, Perm>> conj;
            for (const auto& [h, p] : graph) conj.emplace_back(grp.mul(grp.mul(g, h), grp.inv(g)), compose(s, compose(p, si)));
            std::sort(conj.begin(), conj.end());
            if (conj < best.graph) best.graph = conj;
        }
    return best;
}

int GTreeClasses::find(int tree, std::vector<std::pair<int, Perm>> graph) const {
    if (tree < 0 || tree >= static_cast<int>(trees_.size())) return -1;
    for (const auto& [g, p] : graph)
        if (g < 0 || g >= tr_.group.order() || static_cast<int>(p.size()) != trees_[tree].size()) return -1;
    auto it = index_.find(canonical(tree, std::move(graph)));
    return it == index_.end() ? -1 : it->second;
}

int GTreeClasses::tree_index(const Tree& t) const {
    auto it = shapes_.find(t.shape_code());
    return it == shapes_.end() ? -1 : it->second;
}

int GTreeClasses::unit() const {
    std::vector<std::pair<int, Perm>> graph;
    for (int g = 0; g < tr_.group.order(); ++g) graph.emplace_back(g, Perm{0});
    return find(tree_index(stick()), graph);
}

std::vector<int> GTreeClasses::vertex_corollas(int c) const {
    const GTreeClass& cls = classes_[c];
    const Tree& u = trees_[cls.tree];
    std::vector<int> out;
    EdgeSet seen = 0;
    for (int e = 0; e < u.size(); ++e) {
        if (u.is_leaf(e) || has(seen, e)) continue;
        for (const auto& [h, p] : cls.graph) seen |= bit(p[e]);
        const auto& kids = u.children(e);
        const int n = static_cast<int>(kids.size());
        std::vector<std::pair<int, Perm>> graph;
        for (const auto& [h, p] : cls.graph) {
            if (p[e] != e) continue;
            Perm rho(n + 1, 0);
            for (int i = 0; i < n; ++i)
                rho[1 + i] = 1 + static_cast<int>(std::find(kids.begin(), kids.end(), p[kids[i]]) - kids.begin());
            graph.emplace_back(h, rho);
        }
        int idx = find(tree_index(corolla(n)), graph);
        if (idx < 0) throw Error(ErrorKind::TruncationTooSmall, "vertex corolla of arity " + std::to_string(n));
        out.push_back(idx);
    }
    return out;
}

bool GTreeClasses::maps_to(int a, int b) const {
    const FiniteGroup& grp = tr_.group;
    const GTreeClass& ca = classes_[a];
    const GTreeClass& cb = classes_[b];
    for (int g = 0; g < grp.order(); ++g) {
        // The graph of B seen from the component g . B_*.
        std::vector<const Perm*> beta(grp.order(), nullptr);
        for (const auto& [h, p] : cb.graph) beta[grp.mul(grp.mul(g, h), grp.inv(g))] = &p;
        bool contained = std::all_of(ca.graph.begin(), ca.graph.end(), [&](const auto& x) { return beta[x.first]; });
        if (!contained) continue;
        for (const auto& f : maps_[ca.tree][cb.tree]) {
            bool ok = true;
            for (const auto& [h, alpha] : ca.graph) {
                const Perm& bt = *beta[h];
                for (std::size_t i = 0; i < f.size() && ok; ++i) ok = f[alpha[i]] == bt[f[i]];
                if (!ok) break;
            }
            if (ok) return true;
        }
    }
    return false;
}

GForest GTreeClasses::forest(int c) const {
    const GTreeClass& cls = classes_[c];
    return induce(tr_.group, cls.subgroup(), trees_[cls.tree], cls.graph);
}

std::string GTreeClasses::describe(int c) const {
    const GTreeClass& cls = classes_[c];
    const Tree& u = trees_[cls.tree];
    std::string out = tr_.group.format(cls.subgroup()) + "." + format_tree(u);
    std::vector<std::string> acts;
    for (const auto& [h, p] : cls.graph) {
        std::string moved;
        for (int e = 0; e < u.size(); ++e)
            if (p[e] != e) moved += (moved.empty() ? "" : ",") + u.name(e) + "->" + u.name(p[e]);
        if (!moved.empty()) acts.push_back(tr_.group.name(h) + ":" + moved);
    }
    if (!acts.empty()) {
        out += " [";
        for (std::size_t i = 0; i < acts.size(); ++i) out += (i ? "; " : "") + acts[i];
        out += "]";
    }
    return out;
}

SieveSpec SieveSpec::full(const Truncation& tr) {
    SieveSpec s;
    s.classes = std::make_shared<GTreeClasses>(tr);
    s.member.assign(s.classes->size(), true);
    return s;
}

int SieveSpec::count() const { return static_cast<int>(std::count(member.begin(), member.end(), true)); }

SieveSpec SieveSpec::from_corollas(const Truncation& tr, const std::vector<GTreeClass>& corollas) {
    SieveSpec s;
    auto cls = std::make_shared<GTreeClasses>(tr);
    s.classes = cls;
    const int n = cls->size();
    std::vector<bool> accepted(n, false);
    for (const auto& c : corollas) {
        int idx = cls->find(c.tree, c.graph);
        if (idx < 0) throw Error(ErrorKind::InvalidInput, "not a G-corolla of the truncation");
        accepted[idx] = true;
    }
    std::vector<std::vector<int>> vertices(n);
    for (int c = 0; c < n; ++c) vertices[c] = cls->vertex_corollas(c);
    auto all_accepted = [&](int c) {
        return std::all_of(vertices[c].begin(), vertices[c].end(), [&](int v) { return accepted[v]; });
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int b = 0; b < n; ++b) {
            if (!all_accepted(b)) continue;
            for (int a = 0; a < n; ++a) {
                if (all_accepted(a) || !cls->maps_to(a, b)) continue;
                for (int v : vertices[a])
                    if (!accepted[v]) accepted[v] = changed = true;
            }
        }
    }
    s.member.resize(n);
    for (int c = 0; c < n; ++c) s.member[c] = all_accepted(c);
    return s;
}

GTreeClass corolla_class(const GTreeClasses& cls, int arity, ElemSet h,
                         const std::vector<std::pair<int, Perm>>& input_gens) {
    const FiniteGroup& grp = cls.truncation().group;
    if (!grp.is_subgroup(h)) throw Error(ErrorKind::InvalidInput, "not a subgroup: " + grp.format(h));
    std::vector<std::pair<int, Perm>> gens;
    for (int x : greedy_generators(grp, h))
        if (std::none_of(input_gens.begin(), input_gens.end(), [&](const auto& y) { return y.first == x; }))
            gens.emplace_back(x, identity_perm(arity + 1));
    for (const auto& [g, p] : input_gens) {
        if (static_cast<int>(p.size()) != arity) throw Error(ErrorKind::InvalidInput, "permutation of the wrong arity");
        Perm rho(arity + 1, 0);
        for (int i = 0; i < arity; ++i) rho[1 + i] = 1 + p[i];
        gens.emplace_back(g, rho);
    }
    auto act = derive_action(grp, arity + 1, gens, h);
    std::vector<std::pair<int, Perm>> graph;
    for (int x : bits(h)) graph.emplace_back(x, act[x]);
    int tree = cls.tree_index(corolla(arity));
    int idx = cls.find(tree, graph);
    if (idx < 0) throw Error(ErrorKind::InvalidInput, "corolla outside the truncation");
    return cls[idx];
}

IndexingCheck validate_weak_indexing(const SieveSpec& s, bool require_trivial_corollas, int jobs) {
    const GTreeClasses& cls = *s.classes;
    const int n = cls.size();
    if (static_cast<int>(s.member.size()) != n) throw Error(ErrorKind::InvalidInput, "membership table has the wrong size");
    IndexingCheck out;
    auto fail = [&](std::string axiom, std::string witness) {
        out.pass = false;
        out.failures.push_back({std::move(axiom), std::move(witness)});
    };
    const int unit = cls.unit();
    if (!s.member[unit]) fail("unit", cls.describe(unit) + " is not in the sieve");

    // First non-member mapping into each member.
    std::vector<int> bad_source(n, -1);
    parallel_for(n, jobs, [&](int b) {
        if (!s.member[b]) return;
        for (int a = 0; a < n; ++a)
            if (!s.member[a] && cls.maps_to(a, b)) {
                bad_source[b] = a;
                return;
            }
    });
    for (int b = 0; b < n; ++b)
        if (bad_source[b] >= 0) {
            fail("sieve", cls.describe(bad_source[b]) + " maps to " + cls.describe(b) + " but is not in the sieve");
            break;
        }

    std::vector<std::vector<int>> vertices(n);
    parallel_for(n, jobs, [&](int c) { vertices[c] = cls.vertex_corollas(c); });
    for (int c = 0; c < n; ++c) {
        int missing = -1;
        for (int v : vertices[c])
            if (!s.member[v]) missing = v;
        if (s.member[c] && missing >= 0) {
            fail("segal", cls.describe(c) + " is in the sieve but its vertex " + cls.describe(missing) + " is not");
            break;
        }
        if (!s.member[c] && missing < 0) {
            fail("segal", cls.describe(c) + " is not in the sieve but all its vertices are");
            break;
        }
    }

    if (require_trivial_corollas) {
        const FiniteGroup& grp = cls.truncation().group;
        for (int a = 0; a <= cls.truncation().arity; ++a) {
            std::vector<std::pair<int, Perm>> graph;
            for (int g = 0; g < grp.order(); ++g) graph.emplace_back(g, identity_perm(a + 1));
            int idx = cls.find(cls.tree_index(corolla(a)), graph);
            if (idx >= 0 && !s.member[idx]) {
                fail("trivial-corollas", cls.describe(idx) + " is not in the sieve");
                break;
            }
        }
    }
    return out;
}

namespace {

GenReedyCat omega_op(const Truncation& tr) { return opposite(omega(tr.degree, tr.arity)); }

}  // namespace

GraphFamilies to_graph_families(const SieveSpec& s) {
    const GTreeClasses& cls = *s.classes;
    const Truncation& tr = cls.truncation();
    GenReedyCat op = omega_op(tr);
    const int mb = op.arrow_count();
    GraphFamilies out;
    out.category = product(group_category(tr.group), op);
    for (int u = 0; u < out.category.object_count(); ++u) {
        Family f;
        for (const auto& gamma : graph_family(out.category, u)) {
            std::vector<std::pair<int, Perm>> graph;
            for (int x : gamma) graph.emplace_back(x / mb, inverse(op.edge_maps[x % mb]));
            int idx = cls.find(u, graph);
            if (idx >= 0 && s.member[idx]) f.push_back(gamma);
        }
        out.families.push_back(std::move(f));
    }
    return out;
}

SieveSpec from_graph_families(const Truncation& tr, const GraphFamilies& f) {
    SieveSpec s;
    auto cls = std::make_shared<GTreeClasses>(tr);
    s.classes = cls;
    GenReedyCat op = omega_op(tr);
    const int mb = op.arrow_count();
    if (static_cast<int>(f.families.size()) != op.object_count())
        throw Error(ErrorKind::InvalidInput, "families do not match the truncation");
    std::vector<std::set<ArrowGroup>> fams(f.families.size());
    for (std::size_t u = 0; u < f.families.size(); ++u)
        for (auto h : f.families[u]) {
            std::sort(h.begin(), h.end());
            fams[u].insert(h);
        }
    for (const auto& c : cls->classes()) {
        ArrowGroup gamma;
        for (const auto& [h, p] : c.graph) {
            Perm sigma = inverse(p);
            for (int ib = 0; ib < mb; ++ib)
                if (op.arrows[ib].src == c.tree && op.arrows[ib].dst == c.tree && op.edge_maps[ib] == sigma)
                    gamma.push_back(h * mb + ib);
        }
        std::sort(gamma.begin(), gamma.end());
        s.member.push_back(fams[c.tree].count(gamma) > 0);
    }
    return s;
}

}  // namespace dendro

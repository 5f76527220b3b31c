#include "dendro/anodyne.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace dendro {

bool CharReport::ok() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

const ConditionResult& CharReport::get(std::string_view name) const {
    for (const auto& c : conditions)
        if (c.name == name) return c;
    throw Error(ErrorKind::InvalidInput, "no condition named " + std::string(name));
}

std::vector<std::vector<int>> collection_action(const CharCollection& c) {
    const Ambient& amb = c.a.ambient();
    std::map<Subtree, int> index;
    for (int i = 0; i < c.size(); ++i) index[c.u[i]] = i;
    std::vector<std::vector<int>> act(amb.group.order(), std::vector<int>(c.size(), -1));
    for (int g = 0; g < amb.group.order(); ++g)
        for (int i = 0; i < c.size(); ++i)
            if (auto it = index.find(amb.act_on(g, c.u[i])); it != index.end()) act[g][i] = it->second;
    return act;
}

namespace {

std::string label(const CharCollection& c, int i) {
    return i < static_cast<int>(c.labels.size()) && !c.labels[i].empty() ? c.labels[i] : std::to_string(i);
}

void check_well_formed(const CharCollection& c) {
    const Ambient& amb = c.a.ambient();
    if (static_cast<int>(c.xi.size()) != c.size() || static_cast<int>(c.below.size()) != c.size())
        throw Error(ErrorKind::MalformedPoset, "collection arrays differ in length");
    std::set<Subtree> seen;
    for (int i = 0; i < c.size(); ++i) {
        if (!amb.is_subtree(c.u[i])) throw Error(ErrorKind::MalformedPoset, "U_" + label(c, i) + " is not a subtree");
        if (!seen.insert(c.u[i]).second) throw Error(ErrorKind::MalformedPoset, "U_" + label(c, i) + " is repeated");
        if (!subset(c.xi[i], subtree_inner(amb.down, c.u[i])))
            throw Error(ErrorKind::MalformedPoset, "xi_" + label(c, i) + " contains non-inner edges");
    }
    std::vector<std::vector<bool>> lt(c.size(), std::vector<bool>(c.size(), false));
    for (int i = 0; i < c.size(); ++i)
        for (int j : c.below[i]) {
            if (j < 0 || j >= c.size() || j == i) throw Error(ErrorKind::MalformedPoset, "order is not irreflexive");
            lt[i][j] = true;
        }
    for (int i = 0; i < c.size(); ++i)
        for (int j = 0; j < c.size(); ++j)
            if (lt[i][j])
                for (int k = 0; k < c.size(); ++k)
                    if (lt[j][k] && !lt[i][k]) throw Error(ErrorKind::MalformedPoset, "order is not transitive");
}

bool in_lower(const CharCollection& c, int i, const Subtree& v) {
    if (c.a.contains(v)) return true;
    for (int j : c.below[i])
        if (is_face_of(c.a.ambient().down, v, c.u[j])) return true;
    return false;
}

Subtree strip(Down down, const Subtree& v, EdgeSet xi) { return remove_edges(v, xi & subtree_inner(down, v)); }

}  // namespace

CharReport verify_characteristic(const CharCollection& c) {
    check_well_formed(c);
    const Ambient& amb = c.a.ambient();
    Down down = amb.down;
    auto act = collection_action(c);
    auto fmt = [&](const Subtree& v) { return format_face(amb.names, v); };
    CharReport report;

    ConditionResult ch0{"Ch0", true, {}};
    auto fail0 = [&](std::string w) {
        if (ch0.pass) ch0 = {"Ch0", false, std::move(w)};
    };
    for (const auto& m : c.a.members())
        for (int g = 0; g < amb.group.order(); ++g)
            if (!c.a.contains(amb.act_on(g, m))) fail0("g=" + amb.group.name(g) + " moves " + fmt(m) + " out of A");
    for (int g = 0; g < amb.group.order(); ++g)
        for (int i = 0; i < c.size(); ++i) {
            int gi = act[g][i];
            if (gi < 0) {
                fail0("g=" + amb.group.name(g) + ": g U_" + label(c, i) + " is not in the collection");
                continue;
            }
            if (amb.act_on(g, c.xi[i]) != c.xi[gi])
                fail0("g=" + amb.group.name(g) + ": g xi_" + label(c, i) + " != xi_" + label(c, gi));
            for (int j : c.below[i])
                if (act[g][j] < 0 || std::find(c.below[gi].begin(), c.below[gi].end(), act[g][j]) == c.below[gi].end())
                    fail0("g=" + amb.group.name(g) + " does not preserve " + label(c, j) + " < " + label(c, i));
        }
    report.conditions.push_back(ch0);

    ConditionResult ch1{"Ch1", true, {}};
    for (int i = 0; i < c.size() && ch1.pass; ++i)
        for (const auto& v : outer_faces_of(down, c.u[i]))
            if ((c.xi[i] & subtree_inner(down, v)) == 0 && !in_lower(c, i, v)) {
                ch1 = {"Ch1", false, "outer face " + fmt(v) + " of U_" + label(c, i) + " has no xi edges and is not in A_<i"};
                break;
            }
    report.conditions.push_back(ch1);

    ConditionResult ch2{"Ch2", true, {}};
    for (int i = 0; i < c.size() && ch2.pass; ++i)
        for (const auto& v : faces_of(down, c.u[i]))
            if (c.a.contains(strip(down, v, c.xi[i])) && !in_lower(c, i, v)) {
                ch2 = {"Ch2", false, "face " + fmt(v) + " of U_" + label(c, i) + " has V - xi_V in A but is not in A_<i"};
                break;
            }
    report.conditions.push_back(ch2);

    ConditionResult ch3{"Ch3", true, {}};
    for (int i = 0; i < c.size() && ch3.pass; ++i)
        for (int j = 0; j < c.size() && ch3.pass; ++j) {
            bool j_geq_i = j == i || std::find(c.below[j].begin(), c.below[j].end(), i) != c.below[j].end();
            if (j_geq_i) continue;
            for (const auto& v : faces_of(down, c.u[i]))
                if (is_face_of(down, strip(down, v, c.xi[i]), c.u[j]) && !in_lower(c, i, v)) {
                    ch3 = {"Ch3", false,
                           "face " + fmt(v) + " of U_" + label(c, i) + " has V - xi_V in U_" + label(c, j) +
                               " but is not in A_<i"};
                    break;
                }
        }
    report.conditions.push_back(ch3);
    return report;
}

Complex replay(const Certificate& c) {
    Complex cur(c.ambient, c.source);
    for (std::size_t k = 0; k < c.steps.size(); ++k) cur = attach_horn(cur, c.steps[k], static_cast<int>(k));
    if (cur.members() != c.target)
        throw Error(ErrorKind::VerificationFailed, "replay does not reach the target complex");
    return cur;
}

namespace {

std::vector<std::vector<int>> orbits_in_order(const CharCollection& c, const std::vector<std::vector<int>>& act) {
    std::vector<int> orbit_of(c.size(), -1);
    std::vector<std::vector<int>> orbits;
    for (int i = 0; i < c.size(); ++i) {
        if (orbit_of[i] >= 0) continue;
        std::vector<int> o;
        for (const auto& p : act)
            if (orbit_of[p[i]] < 0) {
                orbit_of[p[i]] = static_cast<int>(orbits.size());
                o.push_back(p[i]);
            }
        std::sort(o.begin(), o.end());
        orbits.push_back(o);
    }
    std::vector<std::vector<int>> out;
    std::vector<bool> done(orbits.size(), false);
    while (out.size() < orbits.size()) {
        bool progressed = false;
        for (std::size_t k = 0; k < orbits.size() && !progressed; ++k) {
            if (done[k]) continue;
            bool ready = true;
            for (int i : orbits[k])
                for (int j : c.below[i]) ready = ready && done[orbit_of[j]];
            if (ready) {
                done[k] = true;
                out.push_back(orbits[k]);
                progressed = true;
            }
        }
        if (!progressed) throw Error(ErrorKind::MalformedPoset, "order has a cycle between orbits");
    }
    return out;
}

std::set<Subtree> expected_target(const CharCollection& c) {
    std::set<Subtree> out = c.a.members();
    for (const auto& u : c.u)
        for (const auto& f : faces_of(c.a.ambient().down, u)) out.insert(f);
    return out;
}

}  // namespace

Certificate build_filtration(const CharCollection& c) {
    CharReport report = verify_characteristic(c);
    for (const auto& r : report.conditions)
        if (!r.pass) throw Error(ErrorKind::VerificationFailed, r.name + " fails: " + r.witness);
    const Ambient& amb = c.a.ambient();
    Down down = amb.down;
    auto act = collection_action(c);

    Certificate cert{c.a.ambient_ptr(), c.a.members(), expected_target(c), {}};
    Complex cur = c.a;
    for (const auto& orbit : orbits_in_order(c, act)) {
        int i = orbit.front();
        ElemSet h = 0;
        for (int g = 0; g < amb.group.order(); ++g)
            if (act[g][i] == i) h |= bit(g);
        const Subtree& u = c.u[i];
        EdgeSet xi = c.xi[i];

        struct Entry {
            int closure_degree;
            Subtree closure;
            int degree;
            Subtree face;
        };
        std::vector<Entry> lex;
        for (const auto& v : faces_of(down, u)) {
            EdgeSet xv = xi & subtree_inner(down, v);
            if (xv == 0) continue;
            Subtree vbar = outer_closure_in(down, u, v);
            if (xv != (xi & subtree_inner(down, vbar))) continue;
            lex.push_back({subtree_degree(down, vbar), vbar, subtree_degree(down, v), v});
        }
        std::sort(lex.begin(), lex.end(), [](const Entry& a, const Entry& b) {
            return std::tie(a.closure_degree, a.closure, a.degree, a.face) <
                   std::tie(b.closure_degree, b.closure, b.degree, b.face);
        });
        for (const auto& entry : lex) {
            const Subtree& w = entry.face;
            if (cur.contains(w)) continue;
            ElemSet k = 0;
            for (int g : bits(h))
                if (amb.act_on(g, w) == w) k |= bit(g);
            HornStep step{w, k, xi & subtree_inner(down, w)};
            try {
                cur = attach_horn(cur, step, static_cast<int>(cert.steps.size()));
            } catch (const Error& e) {
                throw Error(ErrorKind::VerificationFailed, std::string("filtration step rejected: ") + e.what());
            }
            cert.steps.push_back(step);
        }
    }
    if (cur.members() != cert.target)
        throw Error(ErrorKind::VerificationFailed, "filtration does not reach A u U_i");
    return cert;
}

namespace {

struct ComponentInfo {
    Subtree tree;
    EdgeSet inner;
};

std::vector<ComponentInfo> component_info(const GForest& t) {
    std::vector<ComponentInfo> out;
    for (int c = 0; c < t.components(); ++c) {
        Subtree s = t.component_subtree(c);
        out.push_back({s, subtree_inner(t.down(), s)});
    }
    return out;
}

std::string edge_list(const GForest& t, EdgeSet s) {
    std::string out = "{";
    for (int e : bits(s)) out += (out.size() > 1 ? "," : "") + t.name(e);
    return out + "}";
}

void check_sub_horn(const GForest& t, EdgeSet e, EdgeSet f) {
    check_horn_edges(t, e);
    check_horn_edges(t, f);
    if (!subset(f, e)) throw Error(ErrorKind::InvalidInput, "F is not contained in E");
}

}  // namespace

CharCollection segal_core_collection(const GForest& t) {
    CharCollection c{segal_core(t), {}, {}, {}, {}};
    for (const auto& comp : component_info(t)) {
        c.u.push_back(comp.tree);
        c.xi.push_back(comp.inner);
        c.below.emplace_back();
        c.labels.push_back(t.name(subtree_root(t.down(), comp.tree)));
    }
    return c;
}

CharCollection orbital_horn_collection(const GForest& t, EdgeSet e) {
    CharCollection c{orbital_horn(t, e), {}, {}, {}, {}};
    for (const auto& comp : component_info(t)) {
        c.u.push_back(comp.tree);
        c.xi.push_back(e & comp.inner);
        c.below.emplace_back();
        c.labels.push_back(t.name(subtree_root(t.down(), comp.tree)));
    }
    return c;
}

CharCollection horn_to_horn_collection(const GForest& t, EdgeSet e, EdgeSet f, HornVariant v) {
    check_sub_horn(t, e, f);
    CharCollection c{horn(t, e), {}, {}, {}, {}};
    std::vector<std::pair<int, EdgeSet>> keys;
    auto comps = component_info(t);
    for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci) {
        EdgeSet d = (e & ~f) & comps[ci].inner;
        auto add = [&](EdgeSet removed) {
            c.u.push_back(remove_edges(comps[ci].tree, removed));
            c.xi.push_back(f & comps[ci].inner);
            c.labels.push_back("T-" + edge_list(t, removed));
            keys.push_back({ci, removed});
        };
        if (v == HornVariant::Subsets) {
            for_each_subset(d, [&](EdgeSet s) {
                if (s != 0) add(s);
            });
        } else {
            for (int x : bits(d)) add(bit(x));
        }
    }
    c.below.resize(c.u.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = 0; j < keys.size(); ++j) {
            if (i == j || keys[i].first != keys[j].first) continue;
            bool lower = v == HornVariant::Subsets
                             ? keys[j].second != keys[i].second && subset(keys[i].second, keys[j].second)
                             : lowest(keys[j].second) < lowest(keys[i].second);
            if (lower) c.below[i].push_back(static_cast<int>(j));
        }
    return c;
}

CharCollection orbital_to_orbital_collection(const GForest& t, EdgeSet e, EdgeSet f) {
    check_sub_horn(t, e, f);
    CharCollection c{orbital_horn(t, e), {}, {}, {}, {}};
    std::vector<std::pair<int, int>> keys;
    std::vector<EdgeSet> orbits;
    for (EdgeSet o : t.edge_orbits())
        if (subset(o, e & ~f)) orbits.push_back(o);
    auto comps = component_info(t);
    for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci)
        for (int k = 0; k < static_cast<int>(orbits.size()); ++k) {
            EdgeSet here = orbits[k] & comps[ci].tree.edges;
            if (here == 0) continue;
            c.u.push_back(remove_edges(comps[ci].tree, here));
            c.xi.push_back(f & comps[ci].inner);
            c.labels.push_back("T-" + edge_list(t, here));
            keys.push_back({ci, k});
        }
    c.below.resize(c.u.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = 0; j < keys.size(); ++j)
            if (keys[i].first == keys[j].first && keys[j].second < keys[i].second)
                c.below[i].push_back(static_cast<int>(j));
    return c;
}

bool is_cover(const GForest& t, const Complex& a) {
    Complex core = segal_core(t);
    for (const auto& s : core.members())
        if (!a.contains(s)) return false;
    for (const auto& v : a.members()) {
        Subtree comp = t.component_subtree(t.component_of(subtree_root(t.down(), v)));
        if (!a.contains(outer_closure_in(t.down(), comp, v))) return false;
    }
    return a.is_face_closed() && a.is_g_stable();
}

CharCollection cover_collection(const GForest& t, const Complex& a, const Complex& b) {
    if (!is_cover(t, a) || !is_cover(t, b)) throw Error(ErrorKind::InvalidInput, "complex is not a G-stable cover");
    if (!std::includes(b.members().begin(), b.members().end(), a.members().begin(), a.members().end()))
        throw Error(ErrorKind::InvalidInput, "source cover is not contained in the target cover");
    CharCollection c{a, {}, {}, {}, {}};
    for (const auto& comp : component_info(t))
        for (const auto& v : outer_faces_of(t.down(), comp.tree))
            if (b.contains(v)) {
                c.u.push_back(v);
                c.xi.push_back(subtree_inner(t.down(), v));
                c.labels.push_back(format_face(t.names(), v));
            }
    c.below.resize(c.u.size());
    for (int i = 0; i < c.size(); ++i)
        for (int j = 0; j < c.size(); ++j)
            if (i != j && is_face_of(t.down(), c.u[j], c.u[i])) c.below[i].push_back(j);
    return c;
}

std::string_view to_string(CertifyKind k) {
    switch (k) {
        case CertifyKind::SegalCore: return "segal_core";
        case CertifyKind::OrbitalHornToFull: return "orbital_horn_to_full";
        case CertifyKind::HornToHorn: return "horn_to_horn";
        case CertifyKind::OrbitalToOrbital: return "orbital_to_orbital";
        case CertifyKind::CoverInclusion: return "cover_inclusion";
        case CertifyKind::GeneratingReduction: return "generating_reduction";
    }
    return "?";
}

CertifyKind parse_certify_kind(std::string_view s) {
    for (auto k : {CertifyKind::SegalCore, CertifyKind::OrbitalHornToFull, CertifyKind::HornToHorn,
                   CertifyKind::OrbitalToOrbital, CertifyKind::CoverInclusion, CertifyKind::GeneratingReduction})
        if (to_string(k) == s) return k;
    throw Error(ErrorKind::InvalidInput, "unknown certificate kind '" + std::string(s) + "'");
}

namespace {

Certificate certified(const CharCollection& c, const Complex& expected) {
    Certificate cert = build_filtration(c);
    if (cert.target != expected.members())
        throw Error(ErrorKind::VerificationFailed, "instantiation does not reach the expected complex");
    return cert;
}

}  // namespace

Certificate certify_segal_core(const GForest& t) {
    return certified(segal_core_collection(t), Complex::full(ambient_of(t)));
}

Certificate certify_orbital_horn(const GForest& t, EdgeSet e) {
    return certified(orbital_horn_collection(t, e), Complex::full(ambient_of(t)));
}

Certificate certify_horn_to_horn(const GForest& t, EdgeSet e, EdgeSet f, HornVariant v) {
    return certified(horn_to_horn_collection(t, e, f, v), horn(t, f));
}

Certificate certify_orbital_to_orbital(const GForest& t, EdgeSet e, EdgeSet f) {
    return certified(orbital_to_orbital_collection(t, e, f), orbital_horn(t, f));
}

Certificate certify_cover(const GForest& t, const Complex& a, const Complex& b) {
    return certified(cover_collection(t, a, b), b);
}

bool is_single_orbit(const Ambient& amb, const HornStep& s) {
    if (s.xi == 0) return false;
    EdgeSet orbit = 0;
    for (int k : bits(s.isotropy)) orbit |= bit(amb.act[k][lowest(s.xi)]);
    return orbit == s.xi;
}

namespace {

// Λ^Ξ[W] -> Λ^F[W] for one K-orbit F in Ξ, spread over the G-translates of W, then the
// single-orbit horn Λ^F[W] -> Ω[W]. Sub-steps have strictly smaller trees.
std::vector<HornStep> reduce_step(const Complex& a, const HornStep& s) {
    const Ambient& amb = a.ambient();
    if (is_single_orbit(amb, s)) return {s};
    EdgeSet f = 0;
    for (int k : bits(s.isotropy)) f |= bit(amb.act[k][lowest(s.xi)]);

    CharCollection c{a, {}, {}, {}, {}};
    std::vector<std::pair<int, EdgeSet>> keys;
    for (int g : amb.group.coset_reps(s.isotropy))
        for_each_subset(s.xi & ~f, [&](EdgeSet d) {
            if (d == 0) return;
            c.u.push_back(amb.act_on(g, remove_edges(s.tree, d)));
            c.xi.push_back(amb.act_on(g, f));
            keys.push_back({g, d});
        });
    c.below.resize(c.u.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = 0; j < keys.size(); ++j)
            if (i != j && keys[i].first == keys[j].first && subset(keys[i].second, keys[j].second))
                c.below[i].push_back(static_cast<int>(j));

    std::vector<HornStep> out;
    Complex cur = a;
    for (const auto& sub : build_filtration(c).steps)
        for (const auto& piece : reduce_step(cur, sub)) {
            cur = attach_horn(cur, piece);
            out.push_back(piece);
        }
    out.push_back({s.tree, s.isotropy, f});
    return out;
}

}  // namespace

Certificate generating_reduction(const Certificate& c) {
    Certificate out{c.ambient, c.source, c.target, {}};
    Complex cur(c.ambient, c.source);
    for (std::size_t k = 0; k < c.steps.size(); ++k) {
        for (const auto& piece : reduce_step(cur, c.steps[k])) {
            cur = attach_horn(cur, piece, static_cast<int>(out.steps.size()));
            out.steps.push_back(piece);
        }
    }
    return out;
}

}  // namespace dendro

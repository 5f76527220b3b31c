#include "dendro/equivariance.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace dendro {

// ---- FiniteGroup ----

FiniteGroup::FiniteGroup() : names_{"1"}, table_{{0}}, inv_{0} {}

FiniteGroup FiniteGroup::from_table(std::vector<std::string> names, std::vector<std::vector<int>> table) {
    const int n = static_cast<int>(names.size());
    if (n == 0 || n > 64) throw Error(ErrorKind::InvalidInput, "group order must be between 1 and 64");
    if (static_cast<int>(table.size()) != n) throw Error(ErrorKind::InvalidInput, "table has wrong row count");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n) throw Error(ErrorKind::InvalidInput, "table has wrong column count");
        for (int x : row)
            if (x < 0 || x >= n) throw Error(ErrorKind::InvalidInput, "table entry out of range");
    }
    for (int a = 0; a < n; ++a)
        if (table[0][a] != a || table[a][0] != a)
            throw Error(ErrorKind::InvalidInput, "element 0 must be the identity");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw Error(ErrorKind::InvalidInput, "table is not associative at (" + names[a] + ", " +
                                                             names[b] + ", " + names[c] + ")");
    FiniteGroup g;
    g.inv_.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (table[a][b] == 0 && table[b][a] == 0) g.inv_[a] = b;
    for (int a = 0; a < n; ++a)
        if (g.inv_[a] < 0) throw Error(ErrorKind::InvalidInput, "element " + names[a] + " has no inverse");
    std::set<std::string> seen(names.begin(), names.end());
    if (static_cast<int>(seen.size()) != n) throw Error(ErrorKind::InvalidInput, "duplicate element names");
    g.names_ = std::move(names);
    g.table_ = std::move(table);
    return g;
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup(); }

FiniteGroup FiniteGroup::cyclic(int n) {
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int k = 0; k < n; ++k) {
        if (k == 0) names.push_back("1");
        else if (n == 2) names.push_back("-1");
        else if (k == 1) names.push_back("g");
        else names.push_back("g^" + std::to_string(k));
        for (int l = 0; l < n; ++l) table[k][l] = (k + l) % n;
    }
    return from_table(std::move(names), std::move(table));
}

FiniteGroup FiniteGroup::quaternion() {
    // Element 2u + s is (-1)^s times unit u, with units 1, i, j, k.
    static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    std::vector<std::string> names{"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
    std::vector<std::vector<int>> table(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            int ua = a / 2, ub = b / 2;
            int sign = (a % 2 + b % 2 + unit_sign[ua][ub]) % 2;
            table[a][b] = 2 * unit_mul[ua][ub] + sign;
        }
    return from_table(std::move(names), std::move(table));
}

FiniteGroup FiniteGroup::symmetric(int n) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
    std::vector<std::string> names;
    for (const auto& q : perms) {
        std::string s;
        for (int x : q) s += std::to_string(x);
        names.push_back(n == 0 ? "1" : s);
    }
    std::vector<std::vector<int>> table(perms.size(), std::vector<int>(perms.size()));
    for (std::size_t a = 0; a < perms.size(); ++a)
        for (std::size_t b = 0; b < perms.size(); ++b) {
            std::vector<int> c(n);
            for (int x = 0; x < n; ++x) c[x] = perms[a][perms[b][x]];
            table[a][b] = index[c];
        }
    return from_table(std::move(names), std::move(table));
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
    const int na = a.order(), nb = b.order();
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(na * nb, std::vector<int>(na * nb));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) names.push_back("(" + a.name(x) + "," + b.name(y) + ")");
    for (int p = 0; p < na * nb; ++p)
        for (int q = 0; q < na * nb; ++q)
            table[p][q] = a.mul(p / nb, q / nb) * nb + b.mul(p % nb, q % nb);
    return from_table(std::move(names), std::move(table));
}

int FiniteGroup::find(const std::string& name) const {
    for (int g = 0; g < order(); ++g)
        if (names_[g] == name) return g;
    return -1;
}

ElemSet FiniteGroup::all() const { return order() == 64 ? ~ElemSet{0} : (ElemSet{1} << order()) - 1; }

ElemSet FiniteGroup::generated(ElemSet gens) const {
    ElemSet s = bit(0) | gens;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int a : bits(s))
            for (int b : bits(s)) {
                int c = mul(a, b);
                if (!has(s, c)) {
                    s |= bit(c);
                    grew = true;
                }
            }
    }
    return s;
}

bool FiniteGroup::is_subgroup(ElemSet s) const {
    if (!has(s, 0) || !subset(s, all())) return false;
    for (int a : bits(s))
        for (int b : bits(s))
            if (!has(s, mul(a, inv(b)))) return false;
    return true;
}

ElemSet FiniteGroup::conjugate(ElemSet s, int g) const {
    ElemSet out = 0;
    for_each_bit(s, [&](int h) { out |= bit(mul(mul(g, h), inv(g))); });
    return out;
}

std::vector<ElemSet> FiniteGroup::subgroups() const {
    std::set<ElemSet> found{bit(0)};
    std::vector<ElemSet> frontier{bit(0)};
    while (!frontier.empty()) {
        std::vector<ElemSet> next;
        for (ElemSet s : frontier)
            for (int g = 0; g < order(); ++g) {
                if (has(s, g)) continue;
                ElemSet t = generated(s | bit(g));
                if (found.insert(t).second) next.push_back(t);
            }
        frontier = std::move(next);
    }
    std::vector<ElemSet> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), [](ElemSet a, ElemSet b) {
        return count(a) != count(b) ? count(a) < count(b) : a < b;
    });
    return out;
}

std::vector<int> FiniteGroup::coset_reps(ElemSet h) const {
    std::vector<int> reps;
    ElemSet covered = 0;
    for (int g = 0; g < order(); ++g) {
        if (has(covered, g)) continue;
        reps.push_back(g);
        for_each_bit(h, [&](int x) { covered |= bit(mul(g, x)); });
    }
    return reps;
}

int FiniteGroup::coset_index(ElemSet h, int g) const {
    auto reps = coset_reps(h);
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (has(h, mul(inv(reps[i]), g))) return static_cast<int>(i);
    return -1;
}

std::string FiniteGroup::format(ElemSet s) const {
    std::string out = "{";
    for (int g : bits(s)) {
        if (out.size() > 1) out += ',';
        out += names_[g];
    }
    return out + "}";
}

// ---- actions ----

std::vector<Perm> derive_action(const FiniteGroup& g, int n, const std::vector<std::pair<int, Perm>>& gens,
                                ElemSet within) {
    within &= g.all();
    std::vector<std::optional<Perm>> act(g.order());
    Perm id(n);
    std::iota(id.begin(), id.end(), 0);
    act[0] = id;
    for (const auto& [x, p] : gens) {
        if (x < 0 || x >= g.order() || !has(within, x))
            throw Error(ErrorKind::InvalidInput, "generator outside the acting group");
        if (static_cast<int>(p.size()) != n)
            throw Error(ErrorKind::NotAnAction, "generator permutation has the wrong length");
        std::vector<bool> hit(n, false);
        for (int e : p) {
            if (e < 0 || e >= n || hit[e]) throw Error(ErrorKind::NotAnAction, "generator is not a permutation");
            hit[e] = true;
        }
    }
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const auto& [x, p] : gens) {
            int t = g.mul(s, x);
            Perm q(n);
            for (int e = 0; e < n; ++e) q[e] = (*act[s])[p[e]];
            if (!act[t]) {
                act[t] = std::move(q);
                queue.push_back(t);
            } else if (*act[t] != q) {
                throw Error(ErrorKind::NotAnAction, "generators violate a relation of the group at " + g.name(t));
            }
        }
    }
    std::vector<Perm> out(g.order());
    for (int h = 0; h < g.order(); ++h) {
        if (!has(within, h)) continue;
        if (!act[h]) throw Error(ErrorKind::InvalidInput, "generators do not generate the acting group");
        out[h] = std::move(*act[h]);
    }
    for (int a : bits(within))
        for (int b : bits(within))
            for (int e = 0; e < n; ++e)
                if (out[g.mul(a, b)][e] != out[a][out[b][e]])
                    throw Error(ErrorKind::NotAnAction, "action is not a homomorphism");
    return out;
}

bool is_homomorphism(const FiniteGroup& g, const std::vector<Perm>& act) {
    if (static_cast<int>(act.size()) != g.order()) return false;
    const std::size_t n = act[0].size();
    for (std::size_t e = 0; e < n; ++e)
        if (act[0][e] != static_cast<int>(e)) return false;
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b)
            for (std::size_t e = 0; e < n; ++e)
                if (act[g.mul(a, b)][e] != act[a][act[b][e]]) return false;
    return true;
}

// ---- GForest ----

namespace {

bool preserves_structure(const GForest& t, const Perm& p) {
    for (int e = 0; e < t.size(); ++e) {
        int c = t.component_of(e), d = t.component_of(p[e]);
        const Tree& a = t.component(c);
        const Tree& b = t.component(d);
        int le = t.local(e), lf = t.local(p[e]);
        if (a.is_leaf(le) != b.is_leaf(lf)) return false;
        if ((le == 0) != (lf == 0)) return false;
        if (a.is_leaf(le)) continue;
        std::vector<int> img, kids;
        for (int k : a.children(le)) img.push_back(p[t.global(c, k)]);
        for (int k : b.children(lf)) kids.push_back(t.global(d, k));
        std::sort(img.begin(), img.end());
        std::sort(kids.begin(), kids.end());
        if (img != kids) return false;
    }
    return true;
}

}  // namespace

GForest::GForest(FiniteGroup group, Forest forest, std::vector<Perm> act)
    : group_(std::move(group)), forest_(std::move(forest)), act_(std::move(act)) {
    int total = 0;
    for (const auto& c : forest_.components) {
        offset_.push_back(total);
        total += c.size();
    }
    if (total > kMaxEdges) throw Error(ErrorKind::InvalidInput, "forest has more than 64 edges");
    std::set<std::string> seen;
    for (int c = 0; c < components(); ++c) {
        const Tree& t = forest_.components[c];
        for (int e = 0; e < t.size(); ++e) {
            comp_.push_back(c);
            names_.push_back(t.name(e));
            down_.push_back(t.down(e) << offset_[c]);
            if (!seen.insert(t.name(e)).second)
                throw Error(ErrorKind::InvalidInput, "edge name '" + t.name(e) + "' is not unique");
        }
    }
    if (static_cast<int>(act_.size()) != group_.order())
        throw Error(ErrorKind::NotAnAction, "action must list one permutation per group element");
    for (const auto& p : act_) {
        if (static_cast<int>(p.size()) != total) throw Error(ErrorKind::NotAnAction, "permutation has the wrong length");
        std::vector<bool> hit(total, false);
        for (int e : p) {
            if (e < 0 || e >= total || hit[e]) throw Error(ErrorKind::NotAnAction, "not a permutation");
            hit[e] = true;
        }
    }
    if (!is_homomorphism(group_, act_)) throw Error(ErrorKind::NotAnAction, "action is not a homomorphism");
    for (int g = 0; g < group_.order(); ++g)
        if (!preserves_structure(*this, act_[g]))
            throw Error(ErrorKind::NotAnAction, "element " + group_.name(g) + " does not preserve vertices");
}

GForest GForest::with_generators(FiniteGroup group, Forest forest, const std::vector<std::pair<int, Perm>>& gens) {
    int total = 0;
    for (const auto& c : forest.components) total += c.size();
    auto act = derive_action(group, total, gens);
    return GForest(std::move(group), std::move(forest), std::move(act));
}

GForest GForest::trivial(const Tree& t) {
    Perm id(t.size());
    std::iota(id.begin(), id.end(), 0);
    return GForest(FiniteGroup(), Forest{{t}}, {id});
}

int GForest::find(const std::string& name) const {
    for (int e = 0; e < size(); ++e)
        if (names_[e] == name) return e;
    return -1;
}

EdgeSet GForest::act(int g, EdgeSet s) const {
    EdgeSet out = 0;
    for_each_bit(s, [&](int e) { out |= bit(act_[g][e]); });
    return out;
}

Subtree GForest::act(int g, const Subtree& s) const { return {act(g, s.edges), act(g, s.leaves)}; }

EdgeSet GForest::orbit(int e) const {
    EdgeSet out = 0;
    for (int g = 0; g < group_.order(); ++g) out |= bit(act_[g][e]);
    return out;
}

EdgeSet GForest::saturate(EdgeSet s) const {
    EdgeSet out = 0;
    for (int g = 0; g < group_.order(); ++g) out |= act(g, s);
    return out;
}

ElemSet GForest::isotropy(int e) const {
    ElemSet out = 0;
    for (int g = 0; g < group_.order(); ++g)
        if (act_[g][e] == e) out |= bit(g);
    return out;
}

ElemSet GForest::isotropy(const Subtree& s) const {
    ElemSet out = 0;
    for (int g = 0; g < group_.order(); ++g)
        if (act(g, s) == s) out |= bit(g);
    return out;
}

bool GForest::is_stable(EdgeSet s) const { return saturate(s) == s; }

std::vector<EdgeSet> GForest::edge_orbits() const {
    std::vector<EdgeSet> out;
    EdgeSet seen = 0;
    for (int e = 0; e < size(); ++e) {
        if (has(seen, e)) continue;
        out.push_back(orbit(e));
        seen |= out.back();
    }
    return out;
}

Subtree GForest::component_subtree(int c) const {
    const Tree& t = component(c);
    return {t.all() << offset_[c], t.leaves() << offset_[c]};
}

EdgeSet GForest::leaves() const {
    EdgeSet s = 0;
    for (int c = 0; c < components(); ++c) s |= component(c).leaves() << offset_[c];
    return s;
}

EdgeSet GForest::inner() const {
    EdgeSet s = 0;
    for (int c = 0; c < components(); ++c) s |= component(c).inner() << offset_[c];
    return s;
}

EdgeSet GForest::roots() const {
    EdgeSet s = 0;
    for (int c = 0; c < components(); ++c) s |= bit(offset_[c]);
    return s;
}

bool GForest::is_gtree() const { return components() > 0 && orbit(0) == roots(); }

bool same_labeled(const GForest& a, const GForest& b) {
    if (a.components() != b.components() || a.group().table() != b.group().table()) return false;
    for (int c = 0; c < a.components(); ++c)
        if (!(a.component(c) == b.component(c))) return false;
    return a.action() == b.action();
}

GForest induce(const FiniteGroup& g, ElemSet h, const Tree& t, const std::vector<std::pair<int, Perm>>& h_gens) {
    if (!g.is_subgroup(h)) throw Error(ErrorKind::InvalidInput, "not a subgroup");
    auto hact = derive_action(g, t.size(), h_gens, h);
    GForest check(FiniteGroup(), Forest{{t}}, {hact[0]});
    for (int x : bits(h))
        if (!preserves_structure(check, hact[x]))
            throw Error(ErrorKind::NotAnAction, "element " + g.name(x) + " is not a tree automorphism");
    auto reps = g.coset_reps(h);
    const int n = t.size();
    Forest forest;
    for (int rep : reps) {
        std::vector<std::string> names;
        std::vector<std::optional<std::vector<int>>> kids(n);
        for (int e = 0; e < n; ++e) {
            names.push_back(rep == 0 ? t.name(e) : g.name(rep) + "." + t.name(e));
            if (!t.is_leaf(e)) kids[e] = t.children(e);
        }
        forest.components.push_back(Tree::from_children(names, kids, 0));
    }
    std::vector<Perm> act(g.order(), Perm(n * reps.size()));
    for (int x = 0; x < g.order(); ++x)
        for (std::size_t i = 0; i < reps.size(); ++i) {
            int y = g.mul(x, reps[i]);
            int j = g.coset_index(h, y);
            int k = g.mul(g.inv(reps[j]), y);
            for (int e = 0; e < n; ++e) act[x][i * n + e] = static_cast<int>(j) * n + hact[k][e];
        }
    return GForest(g, std::move(forest), std::move(act));
}

// ---- orbital faces ----

std::vector<Subtree> orbital_pieces(const GForest& t, const Subtree& s) {
    std::vector<Subtree> out;
    const auto& down = t.down();
    for (int e : bits(s.edges)) {
        bool top = true;
        for (int f : bits(s.edges))
            if (f != e && has(down[f], e)) top = false;
        if (top) out.push_back({s.edges & down[e], s.leaves & down[e]});
    }
    return out;
}

bool is_orbital_face(const GForest& t, const Subtree& s) {
    if (s.edges == 0 || t.isotropy(s) != t.group().all()) return false;
    auto pieces = orbital_pieces(t, s);
    EdgeSet e = 0, l = 0;
    for (const auto& p : pieces) {
        int c = t.component_of(subtree_root(t.down(), p));
        if (!is_face_of(t.down(), p, t.component_subtree(c))) return false;
        if (e & p.edges) return false;
        e |= p.edges;
        l |= p.leaves;
    }
    if (e != s.edges || l != s.leaves) return false;
    std::set<Subtree> orbit;
    for (int g = 0; g < t.group().order(); ++g) orbit.insert(t.act(g, pieces.front()));
    return orbit == std::set<Subtree>(pieces.begin(), pieces.end());
}

Subtree minimal_orbital_face(const GForest& t, const Subtree& u) {
    const auto& down = t.down();
    int r = subtree_root(down, u);
    if (r < 0) throw Error(ErrorKind::InvalidInput, "face has no root");
    Subtree comp = t.component_subtree(t.component_of(r));
    if (!is_face_of(down, u, comp)) throw Error(ErrorKind::InvalidInput, "not a planar face of a component");
    Subtree ubar = outer_closure_in(down, comp, u);
    std::vector<Subtree> conj;
    for (int h : bits(t.isotropy(r))) conj.push_back(t.act(h, ubar));
    Subtree hu = outer_cup_cap(down, comp, conj).first;
    Subtree gu;
    for (int g = 0; g < t.group().order(); ++g) {
        gu.edges |= t.act(g, hu.edges);
        gu.leaves |= t.act(g, hu.leaves);
    }
    EdgeSet removed = gu.edges & ~t.saturate(u.edges);
    return remove_edges(gu, removed);
}

Subtree orbital_outer_closure(const GForest& t, const Subtree& s) {
    Subtree out;
    for (const auto& p : orbital_pieces(t, s)) {
        int c = t.component_of(subtree_root(t.down(), p));
        Subtree o = outer_closure_in(t.down(), t.component_subtree(c), p);
        out.edges |= o.edges;
        out.leaves |= o.leaves;
    }
    return out;
}

std::vector<Subtree> orbital_faces(const GForest& t) {
    std::set<Subtree> out;
    for (int c = 0; c < t.components(); ++c) {
        for (const auto& w : faces_of(t.down(), t.component_subtree(c))) {
            Subtree s;
            bool disjoint = true;
            for (int g = 0; g < t.group().order(); ++g) {
                Subtree gw = t.act(g, w);
                if (gw != w && (gw.edges & w.edges)) disjoint = false;
                s.edges |= gw.edges;
                s.leaves |= gw.leaves;
            }
            if (disjoint) out.insert(s);
        }
    }
    return {out.begin(), out.end()};
}

OrbitalFactorization orbital_factorize(const GForest& s, const GForest& t, const std::vector<int>& f) {
    if (static_cast<int>(f.size()) != s.size()) throw Error(ErrorKind::InvalidInput, "edge map has the wrong length");
    if (s.group().table() != t.group().table()) throw Error(ErrorKind::InvalidInput, "groups differ");
    EdgeSet img = 0;
    for (int x : f) {
        if (x < 0 || x >= t.size()) throw Error(ErrorKind::InvalidInput, "edge map out of range");
        if (has(img, x)) throw Error(ErrorKind::NotInjective, "two edges map to " + t.name(x));
        img |= bit(x);
    }
    for (int g = 0; g < s.group().order(); ++g)
        for (int e = 0; e < s.size(); ++e)
            if (f[s.act(g, e)] != t.act(g, f[e]))
                throw Error(ErrorKind::NotEquivariant, "edge " + s.name(e) + " under " + s.group().name(g));
    for (int c = 0; c < s.components(); ++c) {
        const Tree& src = s.component(c);
        int tc = t.component_of(f[s.offset(c)]);
        TreeMap m{src, t.component(tc), {}};
        for (int e = 0; e < src.size(); ++e) {
            int x = f[s.global(c, e)];
            if (t.component_of(x) != tc) throw Error(ErrorKind::NotMonotone, "component is split");
            m.edge_fn.push_back(t.local(x));
        }
        if (!is_monotone(m)) throw Error(ErrorKind::NotMonotone, "component map is not monotone");
    }
    OrbitalFactorization out;
    out.image.edges = img;
    for (int e = 0; e < s.size(); ++e)
        if (has(s.leaves(), e)) out.image.leaves |= bit(f[e]);
    out.outer = orbital_outer_closure(t, out.image);
    out.removed = out.outer.edges & ~out.image.edges;
    return out;
}

FaceAction face_action(const GForest& t, int g, const Subtree& u) {
    FaceAction out{t.act(g, u), {}};
    for (int e : bits(u.edges)) out.witness.push_back(t.act(g, e));
    return out;
}

Quotient quotient(const GForest& t) {
    if (!t.is_gtree()) throw Error(ErrorKind::InvalidInput, "quotient needs a G-tree");
    auto orbits = t.edge_orbits();
    std::vector<int> orbit_index(t.size());
    for (std::size_t i = 0; i < orbits.size(); ++i)
        for_each_bit(orbits[i], [&](int e) { orbit_index[e] = static_cast<int>(i); });
    std::vector<std::string> names;
    std::vector<std::optional<std::vector<int>>> kids(orbits.size());
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        int rep = lowest(orbits[i]);
        names.push_back("G" + t.name(rep));
        int c = t.component_of(rep);
        const Tree& comp = t.component(c);
        int le = t.local(rep);
        if (comp.is_leaf(le)) continue;
        std::set<int> ch;
        for (int k : comp.children(le)) ch.insert(orbit_index[t.global(c, k)]);
        kids[i] = std::vector<int>(ch.begin(), ch.end());
    }
    Quotient q;
    q.tree = Tree::from_children(names, kids, orbit_index[0]);
    // from_children renumbers in preorder; follow the names back to the orbits.
    for (int e = 0; e < q.tree.size(); ++e) {
        for (std::size_t i = 0; i < orbits.size(); ++i)
            if (names[i] == q.tree.name(e)) q.orbit_of_edge.push_back(orbits[i]);
    }
    return q;
}

GForest graft(const GForest& r, const GForest& s, int leaf, int s_root) {
    if (r.group().table() != s.group().table()) throw Error(ErrorKind::InvalidInput, "groups differ");
    if (leaf < 0 || leaf >= r.size() || !has(r.leaves(), leaf))
        throw Error(ErrorKind::InvalidInput, "graft position is not a leaf");
    if (s_root < 0 || s_root >= s.size() || !has(s.roots(), s_root))
        throw Error(ErrorKind::InvalidInput, "graft target is not a component root");
    if (r.isotropy(leaf) != s.isotropy(s_root))
        throw Error(ErrorKind::OrbitMismatch, "isotropy of " + r.name(leaf) + " differs from " + s.name(s_root));
    if (s.orbit(s_root) != s.roots()) throw Error(ErrorKind::OrbitMismatch, "roots of the grafted forest are not one orbit");
    const FiniteGroup& g = r.group();
    // New edge ids: r edges first, then non-root edges of s.
    std::vector<int> s_new(s.size(), -1), root_to_leaf(s.size(), -1), leaf_to_root(r.size(), -1);
    for (int x = 0; x < g.order(); ++x) {
        root_to_leaf[s.act(x, s_root)] = r.act(x, leaf);
        leaf_to_root[r.act(x, leaf)] = s.act(x, s_root);
    }
    int next = r.size();
    for (int e = 0; e < s.size(); ++e) {
        if (has(s.roots(), e)) s_new[e] = root_to_leaf[e];
        else s_new[e] = next++;
    }
    const int total = next;
    std::vector<std::string> names(total);
    std::vector<std::optional<std::vector<int>>> kids(total);
    for (int e = 0; e < r.size(); ++e) {
        names[e] = r.name(e);
        const Tree& c = r.component(r.component_of(e));
        int le = r.local(e);
        if (leaf_to_root[e] >= 0) continue;
        if (!c.is_leaf(le)) {
            kids[e] = std::vector<int>{};
            for (int k : c.children(le)) kids[e]->push_back(r.global(r.component_of(e), k));
        }
    }
    for (int e = 0; e < s.size(); ++e) {
        int ne = s_new[e];
        if (!has(s.roots(), e)) names[ne] = s.name(e);
        const Tree& c = s.component(s.component_of(e));
        int le = s.local(e);
        if (!c.is_leaf(le)) {
            kids[ne] = std::vector<int>{};
            for (int k : c.children(le)) kids[ne]->push_back(s_new[s.global(s.component_of(e), k)]);
        }
    }
    // Split into components in r's order, each in preorder.
    Forest forest;
    std::vector<int> final_id(total, -1);
    int base = 0;
    for (int c = 0; c < r.components(); ++c) {
        std::vector<int> order;
        std::vector<int> stack{r.offset(c)};
        while (!stack.empty()) {
            int e = stack.back();
            stack.pop_back();
            order.push_back(e);
            if (kids[e])
                for (auto it = kids[e]->rbegin(); it != kids[e]->rend(); ++it) stack.push_back(*it);
        }
        std::vector<int> pos(total, -1);
        for (std::size_t i = 0; i < order.size(); ++i) {
            pos[order[i]] = static_cast<int>(i);
            final_id[order[i]] = base + static_cast<int>(i);
        }
        std::vector<std::string> cn;
        std::vector<std::optional<std::vector<int>>> ck;
        for (int e : order) {
            cn.push_back(names[e]);
            if (!kids[e]) {
                ck.emplace_back(std::nullopt);
            } else {
                std::vector<int> k;
                for (int x : *kids[e]) k.push_back(pos[x]);
                ck.emplace_back(std::move(k));
            }
        }
        forest.components.push_back(Tree::from_children(cn, ck, 0));
        base += static_cast<int>(order.size());
    }
    if (base != total) throw Error(ErrorKind::OrbitMismatch, "grafted forest has unreachable edges");
    std::vector<Perm> act(g.order(), Perm(total));
    for (int x = 0; x < g.order(); ++x) {
        for (int e = 0; e < r.size(); ++e) act[x][final_id[e]] = final_id[r.act(x, e)];
        for (int e = 0; e < s.size(); ++e)
            if (!has(s.roots(), e)) act[x][final_id[s_new[e]]] = final_id[s_new[s.act(x, e)]];
    }
    return GForest(g, std::move(forest), std::move(act));
}

OrbitalTree orbital_subforest(const GForest& t, const Subtree& s) {
    OrbitalTree out;
    Forest forest;
    std::vector<int> new_id(t.size(), -1);
    for (const auto& p : orbital_pieces(t, s)) {
        auto st = subtree_tree(t.down(), t.names(), p);
        for (int a : st.to_ambient) {
            new_id[a] = static_cast<int>(out.to_ambient.size());
            out.to_ambient.push_back(a);
        }
        forest.components.push_back(std::move(st.tree));
    }
    const int n = static_cast<int>(out.to_ambient.size());
    std::vector<Perm> act(t.group().order(), Perm(n));
    for (int g = 0; g < t.group().order(); ++g)
        for (int e = 0; e < n; ++e) {
            int img = new_id[t.act(g, out.to_ambient[e])];
            if (img < 0) throw Error(ErrorKind::NotGStable, "face is not G-stable");
            act[g][e] = img;
        }
    out.forest = GForest(t.group(), std::move(forest), std::move(act));
    return out;
}

std::vector<GForest> small_gforests(int max_degree, int max_arity) {
    auto z2 = FiniteGroup::cyclic(2);
    std::vector<GForest> out;
    for (const auto& t : enumerate_trees(max_degree, max_arity)) {
        out.push_back(GForest::trivial(t));
        Perm id(t.size());
        for (int e = 0; e < t.size(); ++e) id[e] = e;
        for (const auto& s : automorphisms(t)) {
            bool involution = s != id;
            for (int e = 0; e < t.size() && involution; ++e) involution = s[s[e]] == e;
            if (involution) out.push_back(GForest::with_generators(z2, Forest{{t}}, {{1, s}}));
        }
        RawTree raw = t.raw();
        auto neg = [](const std::string& n) { return "-" + n; };
        for (auto& e : raw.edges) e = neg(e);
        raw.root = neg(raw.root);
        for (auto& [v, kids] : raw.vertices) {
            v = neg(v);
            for (auto& k : kids) k = neg(k);
        }
        int n = t.size();
        Perm swap(2 * n);
        for (int e = 0; e < n; ++e) {
            swap[e] = e + n;
            swap[e + n] = e;
        }
        out.push_back(GForest::with_generators(z2, Forest{{t, validate_tree(raw)}}, {{1, swap}}));
    }
    return out;
}

}  // namespace dendro

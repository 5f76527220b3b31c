#include "dendro/tensor.hpp"

#include <algorithm>
#include <map>

namespace dendro {

namespace {

struct Partial {
    std::vector<std::pair<int, int>> pending;
    RawPercolation out;
};

void expand(const Tree& a, const Tree& b, Partial p, std::vector<RawPercolation>& acc) {
    if (p.pending.empty()) {
        acc.push_back(std::move(p.out));
        return;
    }
    auto [s, t] = p.pending.back();
    p.pending.pop_back();
    p.out.edges.push_back({s, t});
    bool s_leaf = a.is_leaf(s), t_leaf = b.is_leaf(t);
    if (s_leaf && t_leaf) {
        p.out.leaves.push_back({s, t});
        expand(a, b, std::move(p), acc);
        return;
    }
    if (!s_leaf) {
        Partial q = p;
        for (int c : a.children(s)) q.pending.push_back({c, t});
        expand(a, b, std::move(q), acc);
    }
    if (!t_leaf) {
        Partial q = std::move(p);
        q.out.t_vertices.push_back({s, t});
        for (int c : b.children(t)) q.pending.push_back({s, c});
        expand(a, b, std::move(q), acc);
    }
}

std::vector<int> kids(const GForest& f, int e) {
    int c = f.component_of(e);
    std::vector<int> out;
    for (int k : f.component(c).children(f.local(e))) out.push_back(f.global(c, k));
    return out;
}

int parent(const GForest& f, int e) {
    int c = f.component_of(e);
    int p = f.component(c).parent(f.local(e));
    return p < 0 ? -1 : f.global(c, p);
}

bool same_group(const FiniteGroup& a, const FiniteGroup& b) { return a.names() == b.names() && a.table() == b.table(); }

}  // namespace

std::vector<RawPercolation> percolations(const Tree& a, const Tree& b) {
    std::vector<RawPercolation> acc;
    Partial start;
    start.pending.push_back({a.root(), b.root()});
    expand(a, b, std::move(start), acc);
    for (auto& r : acc) {
        std::sort(r.edges.begin(), r.edges.end());
        std::sort(r.leaves.begin(), r.leaves.end());
        std::sort(r.t_vertices.begin(), r.t_vertices.end());
    }
    std::sort(acc.begin(), acc.end(), [](const auto& x, const auto& y) {
        return std::tie(x.edges, x.leaves, x.t_vertices) < std::tie(y.edges, y.leaves, y.t_vertices);
    });
    return acc;
}

TensorProduct::TensorProduct(GForest s, GForest t) : s_(std::move(s)), t_(std::move(t)) {
    if (!same_group(s_.group(), t_.group())) throw Error(ErrorKind::InvalidInput, "tensor factors use different groups");
    if (s_.size() * t_.size() > 64) throw Error(ErrorKind::InvalidInput, "tensor product has more than 64 edges");
    amb_ = std::make_shared<Ambient>();
    int n = size();
    amb_->group = s_.group();
    amb_->names.resize(n);
    amb_->down.assign(n, 0);
    for (int a = 0; a < s_.size(); ++a)
        for (int b = 0; b < t_.size(); ++b) {
            amb_->names[edge(a, b)] = "(" + s_.name(a) + "," + t_.name(b) + ")";
            for (int a2 : bits(s_.down()[a]))
                for (int b2 : bits(t_.down()[b])) amb_->down[edge(a, b)] |= bit(edge(a2, b2));
        }
    amb_->act.assign(amb_->group.order(), Perm(n));
    for (int g = 0; g < amb_->group.order(); ++g)
        for (int e = 0; e < n; ++e) {
            auto [a, b] = coords(e);
            amb_->act[g][e] = edge(s_.act(g, a), t_.act(g, b));
        }
    for (int cs = 0; cs < s_.components(); ++cs)
        for (int ct = 0; ct < t_.components(); ++ct)
            for (const auto& u : embedded(s_.component_subtree(cs), t_.component_subtree(ct))) amb_->tops.push_back(u);
}

bool TensorProduct::has_s_vertex(int e) const { return !has(s_.leaves(), coords(e).first); }
bool TensorProduct::has_t_vertex(int e) const { return !has(t_.leaves(), coords(e).second); }

std::vector<Subtree> TensorProduct::embedded(const Subtree& s_face, const Subtree& t_face) const {
    SubtreeTree a = subtree_tree(s_.down(), s_.names(), s_face);
    SubtreeTree b = subtree_tree(t_.down(), t_.names(), t_face);
    std::vector<Subtree> out;
    for (const auto& r : percolations(a.tree, b.tree)) {
        Subtree u;
        for (auto [x, y] : r.edges) u.edges |= bit(edge(a.to_ambient[x], b.to_ambient[y]));
        for (auto [x, y] : r.leaves) u.leaves |= bit(edge(a.to_ambient[x], b.to_ambient[y]));
        out.push_back(u);
    }
    return out;
}

PercolationPoset maximal_subtrees(const TensorProduct& p, TensorMode mode) {
    PercolationPoset out;
    const GForest& s = p.s();
    const GForest& t = p.t();
    std::map<Subtree, int> index;
    for (int cs = 0; cs < s.components(); ++cs)
        for (int ct = 0; ct < t.components(); ++ct) {
            SubtreeTree a = subtree_tree(s.down(), s.names(), s.component_subtree(cs));
            SubtreeTree b = subtree_tree(t.down(), t.names(), t.component_subtree(ct));
            for (const auto& r : percolations(a.tree, b.tree)) {
                auto at = [&](std::pair<int, int> xy) { return bit(p.edge(a.to_ambient[xy.first], b.to_ambient[xy.second])); };
                Percolation u;
                for (auto xy : r.edges) u.tree.edges |= at(xy);
                for (auto xy : r.leaves) u.tree.leaves |= at(xy);
                for (auto xy : r.t_vertices) u.t_vertices |= at(xy);
                if (index.emplace(u.tree, static_cast<int>(out.elements.size())).second) out.elements.push_back(u);
            }
        }
    int n = static_cast<int>(out.elements.size());
    const Ambient& amb = *p.ambient();
    out.act.assign(amb.group.order(), std::vector<int>(n, -1));
    for (int g = 0; g < amb.group.order(); ++g)
        for (int i = 0; i < n; ++i) out.act[g][i] = index.at(amb.act_on(g, out.elements[i].tree));

    // U < U' when an S-vertex at (s,t) followed by T-vertices at every (s_i,t) is traded
    // for a T-vertex at (s,t) followed by S-vertices at every (s,t_j).
    for (int i = 0; i < n; ++i) {
        const Percolation& u = out.elements[i];
        for (int x : bits(u.tree.edges & ~u.tree.leaves & ~u.t_vertices)) {
            if (!p.has_t_vertex(x)) continue;
            auto [sx, tx] = p.coords(x);
            EdgeSet upper = 0, lower = 0;
            for (int si : kids(s, sx)) upper |= bit(p.edge(si, tx));
            for (int tj : kids(t, tx)) lower |= bit(p.edge(sx, tj));
            if (!subset(upper, u.t_vertices)) continue;
            Subtree v{(u.tree.edges & ~upper) | lower, u.tree.leaves};
            auto it = index.find(v);
            if (it == index.end())
                throw Error(ErrorKind::VerificationFailed, "vertex exchange does not give a maximal subtree");
            if (mode == TensorMode::Standard) out.generating.push_back({i, it->second});
            else out.generating.push_back({it->second, i});
        }
    }
    out.less.assign(n, std::vector<bool>(n, false));
    for (auto [a, b] : out.generating) out.less[a][b] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (out.less[i][k])
                for (int j = 0; j < n; ++j)
                    if (out.less[k][j]) out.less[i][j] = true;
    for (int i = 0; i < n; ++i)
        if (out.less[i][i]) throw Error(ErrorKind::OrderNotAntisymmetric, "percolation order has a cycle");
    return out;
}

Complex tensor_horn(const TensorProduct& p, EdgeSet g_xi) {
    const GForest& s = p.s();
    const GForest& t = p.t();
    std::vector<Subtree> gens;
    auto add = [&](const Subtree& a, const Subtree& b) {
        for (const auto& u : p.embedded(a, b)) gens.push_back(u);
    };
    std::vector<Subtree> s_gens = horn_generators(s, 0);
    std::vector<Subtree> t_gens = horn_generators(t, g_xi);
    for (int cs = 0; cs < s.components(); ++cs)
        for (int ct = 0; ct < t.components(); ++ct) {
            Subtree ws = s.component_subtree(cs), wt = t.component_subtree(ct);
            for (const auto& a : s_gens)
                if (subset(a.edges, ws.edges)) add(a, wt);
            for (const auto& b : t_gens)
                if (subset(b.edges, wt.edges)) add(ws, b);
        }
    return Complex::generated(p.ambient(), gens);
}

Complex tensor_horn_by_edges(const TensorProduct& p, EdgeSet g_xi) {
    const GForest& s = p.s();
    const GForest& t = p.t();
    std::vector<EdgeSet> s_faces, t_faces;
    for (int cs = 0; cs < s.components(); ++cs) {
        Subtree w = s.component_subtree(cs);
        for (const auto& f : faces_of(s.down(), w))
            if (f != w) s_faces.push_back(f.edges);
    }
    for (int ct = 0; ct < t.components(); ++ct)
        for (const auto& f : faces_of(t.down(), t.component_subtree(ct)))
            if (in_horn(t, g_xi, f)) t_faces.push_back(f.edges);
    auto inside = [](EdgeSet x, const std::vector<EdgeSet>& fs) {
        return std::any_of(fs.begin(), fs.end(), [&](EdgeSet f) { return subset(x, f); });
    };
    std::set<Subtree> m;
    for (const auto& v : p.ambient()->subtrees()) {
        EdgeSet ps = 0, pt = 0;
        for (int e : bits(v.edges)) {
            auto [a, b] = p.coords(e);
            ps |= bit(a);
            pt |= bit(b);
        }
        if (inside(ps, s_faces) || inside(pt, t_faces)) m.insert(v);
    }
    return Complex(p.ambient(), std::move(m));
}

EdgeSet characteristic_edges(const TensorProduct& p, const Percolation& u, EdgeSet g_xi, TensorMode mode) {
    EdgeSet out = 0;
    for (int x : bits(subtree_inner(p.ambient()->down, u.tree))) {
        auto [sx, tx] = p.coords(x);
        if (!has(g_xi, tx)) continue;
        if (mode == TensorMode::Standard) {
            if (has(u.t_vertices, x)) out |= bit(x);
        } else {
            int up = parent(p.t(), tx);
            if (up >= 0 && has(u.t_vertices, p.edge(sx, up)) && has(u.tree.edges, p.edge(sx, up))) out |= bit(x);
        }
    }
    return out;
}

bool is_open(const GForest& t) {
    for (int c = 0; c < t.components(); ++c)
        if (t.component(c).stumps() != 0) return false;
    return true;
}

bool is_linear(const GForest& t) {
    for (int c = 0; c < t.components(); ++c) {
        const Tree& tr = t.component(c);
        for (int e = 0; e < tr.size(); ++e)
            if (!tr.is_leaf(e) && tr.children(e).size() != 1) return false;
    }
    return true;
}

TensorCheck verify_tensor_characteristic(const GForest& s, const GForest& t, EdgeSet g_xi, TensorMode mode, bool build) {
    check_horn_edges(t, g_xi);
    if (g_xi != t.orbit(lowest(g_xi))) throw Error(ErrorKind::InvalidInput, "characteristic edges are not one orbit");
    bool fits = mode == TensorMode::Standard ? (is_open(s) && is_open(t)) || is_linear(t) : is_linear(s);
    if (!fits)
        throw Error(ErrorKind::FactorsNotOpen, mode == TensorMode::Standard
                                                   ? "factors must be open, or T linear"
                                                   : "reversed mode needs a linear S");
    TensorProduct p(s, t);
    PercolationPoset poset = maximal_subtrees(p, mode);
    TensorCheck out{CharCollection{tensor_horn(p, g_xi), {}, {}, {}, {}}, {}, std::nullopt};
    int n = static_cast<int>(poset.elements.size());
    for (int i = 0; i < n; ++i) {
        out.collection.u.push_back(poset.elements[i].tree);
        out.collection.xi.push_back(characteristic_edges(p, poset.elements[i], g_xi, mode));
        out.collection.labels.push_back("U" + std::to_string(i));
        std::vector<int> below;
        for (int j = 0; j < n; ++j)
            if (poset.less[j][i]) below.push_back(j);
        out.collection.below.push_back(below);
    }
    out.report = verify_characteristic(out.collection);
    if (build && out.report.ok()) {
        out.certificate = build_filtration(out.collection);
        replay(*out.certificate);
    }
    return out;
}

}  // namespace dendro

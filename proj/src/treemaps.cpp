#include "dendro/treemaps.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace dendro {

Subtree whole(const Tree& t) { return {t.all(), t.leaves()}; }

int subtree_root(Down down, const Subtree& u) {
    for (int e : bits(u.edges))
        if (subset(u.edges, down[e])) return e;
    return -1;
}

EdgeSet subtree_inner(Down down, const Subtree& u) {
    int r = subtree_root(down, u);
    return u.edges & ~u.leaves & ~(r >= 0 ? bit(r) : EdgeSet{0});
}

std::vector<int> subtree_children(Down down, const Subtree& u, int e) {
    if (has(u.leaves, e)) return {};
    EdgeSet below = u.edges & down[e] & ~bit(e);
    EdgeSet covered = 0;
    for_each_bit(below, [&](int y) { covered |= down[y] & ~bit(y); });
    return bits(below & ~covered);
}

int subtree_degree(Down down, const Subtree& u) {
    (void)down;
    return count(u.edges) - count(u.leaves);
}

namespace {

bool is_antichain(Down down, EdgeSet s) {
    for (int a : bits(s))
        if ((down[a] & s) != bit(a)) return false;
    return true;
}

EdgeSet union_down(Down down, EdgeSet s) {
    EdgeSet out = 0;
    for_each_bit(s, [&](int e) { out |= down[e]; });
    return out;
}

std::optional<Subtree> try_outer(Down down, const Subtree& u, int root, EdgeSet leaves) {
    if (root < 0 || !has(u.edges, root)) return std::nullopt;
    if (!subset(leaves, u.edges & down[root])) return std::nullopt;
    if (!is_antichain(down, leaves)) return std::nullopt;
    EdgeSet covering = union_down(down, leaves);
    if (!subset(u.leaves & down[root], covering)) return std::nullopt;
    EdgeSet strictly = covering & ~leaves;
    return Subtree{u.edges & down[root] & ~strictly, leaves};
}

}  // namespace

Subtree outer_face_of(Down down, const Subtree& u, int root, EdgeSet leaves) {
    auto o = try_outer(down, u, root, leaves);
    if (!o) throw Error(ErrorKind::RelationNotInClosure, "leaf set is not a broad relation below the root");
    return *o;
}

bool is_face_of(Down down, const Subtree& v, const Subtree& u) {
    if (v.edges == 0 || !subset(v.edges, u.edges) || !subset(v.leaves, v.edges)) return false;
    int r = subtree_root(down, v);
    if (r < 0 || has(v.leaves, r) && v.leaves != bit(r)) return false;
    auto o = try_outer(down, u, r, v.leaves);
    return o && subset(v.edges, o->edges);
}

Subtree outer_closure_in(Down down, const Subtree& u, const Subtree& v) {
    return outer_face_of(down, u, subtree_root(down, v), v.leaves);
}

bool is_outer_in(Down down, const Subtree& u, const Subtree& v) {
    auto o = try_outer(down, u, subtree_root(down, v), v.leaves);
    return o && *o == v;
}

namespace {

struct Option {
    EdgeSet leaves;
    EdgeSet edges;
};

// Every outer face rooted at e, as (leaves, edges).
const std::vector<Option>& outer_options(Down down, const Subtree& u, int e,
                                         std::map<int, std::vector<Option>>& memo) {
    if (auto it = memo.find(e); it != memo.end()) return it->second;
    std::vector<Option> out{{bit(e), bit(e)}};
    if (!has(u.leaves, e)) {
        std::vector<Option> acc{{0, bit(e)}};
        for (int c : subtree_children(down, u, e)) {
            const auto& sub = outer_options(down, u, c, memo);
            std::vector<Option> next;
            next.reserve(acc.size() * sub.size());
            for (const auto& a : acc)
                for (const auto& b : sub) next.push_back({a.leaves | b.leaves, a.edges | b.edges});
            acc = std::move(next);
        }
        out.insert(out.end(), acc.begin(), acc.end());
    }
    return memo.emplace(e, std::move(out)).first->second;
}

}  // namespace

std::vector<Subtree> faces_of(Down down, const Subtree& u) {
    std::map<int, std::vector<Option>> memo;
    std::vector<Subtree> out;
    for (int t : bits(u.edges)) {
        for (const auto& o : outer_options(down, u, t, memo)) {
            EdgeSet removable = o.edges & ~o.leaves & ~bit(t);
            for_each_subset(removable, [&](EdgeSet d) { out.push_back({o.edges & ~d, o.leaves}); });
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Subtree> outer_faces_of(Down down, const Subtree& u) {
    std::map<int, std::vector<Option>> memo;
    std::vector<Subtree> out;
    for (int t : bits(u.edges))
        for (const auto& o : outer_options(down, u, t, memo)) out.push_back({o.edges, o.leaves});
    std::sort(out.begin(), out.end());
    return out;
}

int SubtreeTree::local(int ambient_edge) const {
    auto it = std::find(to_ambient.begin(), to_ambient.end(), ambient_edge);
    return it == to_ambient.end() ? -1 : static_cast<int>(it - to_ambient.begin());
}

SubtreeTree subtree_tree(Down down, const std::vector<std::string>& names, const Subtree& u) {
    int r = subtree_root(down, u);
    if (r < 0) throw Error(ErrorKind::InvalidInput, "subtree has no root");
    SubtreeTree out;
    std::vector<std::optional<std::vector<int>>> kids;
    std::vector<std::string> local_names;
    // Preorder numbering, so Tree::from_children keeps the indices.
    std::vector<int> pos(down.size(), -1);
    std::vector<int> stack{r};
    while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        pos[e] = static_cast<int>(out.to_ambient.size());
        out.to_ambient.push_back(e);
        auto ch = subtree_children(down, u, e);
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    for (int e : out.to_ambient) {
        local_names.push_back(names[e]);
        if (has(u.leaves, e)) {
            kids.emplace_back(std::nullopt);
        } else {
            std::vector<int> ch;
            for (int c : subtree_children(down, u, e)) ch.push_back(pos[c]);
            kids.emplace_back(std::move(ch));
        }
    }
    if (static_cast<EdgeSet>(count(u.edges)) != out.to_ambient.size())
        throw Error(ErrorKind::InvalidInput, "edge set is not connected below its root");
    out.tree = Tree::from_children(local_names, kids, 0);
    return out;
}

FaceDescriptor describe(Down down, const Subtree& ambient, const Subtree& v) {
    FaceDescriptor f;
    f.root = subtree_root(down, v);
    f.leaves = bits(v.leaves);
    Subtree o = outer_face_of(down, ambient, f.root, v.leaves);
    f.removed = o.edges & ~v.edges;
    return f;
}

Subtree realize(Down down, const Subtree& ambient, const FaceDescriptor& f) {
    EdgeSet l = 0;
    for (int e : f.leaves) {
        if (e < 0 || e >= static_cast<int>(down.size()) || has(l, e))
            throw Error(ErrorKind::RelationNotInClosure, "leaf tuple has repeats or unknown edges");
        l |= bit(e);
    }
    Subtree o = outer_face_of(down, ambient, f.root, l);
    if (!subset(f.removed, subtree_inner(down, o)))
        throw Error(ErrorKind::NotInnerEdge, "removed edges are not inner in the outer face");
    return remove_edges(o, f.removed);
}

std::string format_face(const std::vector<std::string>& names, const Subtree& v) {
    auto join = [&](EdgeSet s) {
        std::string out;
        for (int e : bits(s)) {
            if (!out.empty()) out += ',';
            out += names[e];
        }
        return out;
    };
    return "{" + join(v.edges) + "|" + join(v.leaves) + "}";
}

FaceDescriptor describe(const Tree& t, const Subtree& v) { return describe(t.down_sets(), whole(t), v); }

Subtree realize(const Tree& t, const FaceDescriptor& f) { return realize(t.down_sets(), whole(t), f); }

Tree inner_face(const Tree& t, EdgeSet e) {
    if (!subset(e, t.inner())) throw Error(ErrorKind::NotInnerEdge, "edge set contains a non-inner edge");
    return subtree_tree(t.down_sets(), t.names(), remove_edges(whole(t), e)).tree;
}

Tree outer_face(const Tree& t, const BroadRelation& rel) {
    if (!is_broad_relation(t, rel.source, rel.target))
        throw Error(ErrorKind::RelationNotInClosure, format_relation(t, rel));
    EdgeSet l = 0;
    for (int e : rel.source) l |= bit(e);
    return subtree_tree(t.down_sets(), t.names(), outer_face_of(t.down_sets(), whole(t), rel.target, l)).tree;
}

FaceDescriptor outer_closure(const Tree& t, const FaceDescriptor& f) {
    Subtree v = realize(t, f);
    return describe(t, outer_closure_in(t.down_sets(), whole(t), v));
}

std::pair<Subtree, Subtree> outer_cup_cap(Down down, const Subtree& ambient, const std::vector<Subtree>& faces) {
    if (faces.empty()) throw Error(ErrorKind::InvalidInput, "no faces given");
    int root = subtree_root(down, faces.front());
    EdgeSet all_e = 0, common_e = ~EdgeSet{0}, any_nl = 0, every_nl = ~EdgeSet{0};
    for (const auto& f : faces) {
        if (!is_outer_in(down, ambient, f)) throw Error(ErrorKind::InvalidInput, "face is not an outer face");
        if (subtree_root(down, f) != root) throw Error(ErrorKind::RootMismatch, "outer faces have different roots");
        EdgeSet nl = f.edges & ~f.leaves;
        all_e |= f.edges;
        common_e &= f.edges;
        any_nl |= nl;
        every_nl &= nl;
    }
    Subtree cup{all_e, all_e & ~any_nl};
    Subtree cap{common_e, common_e & ~every_nl};
    return {cup, cap};
}

std::pair<FaceDescriptor, FaceDescriptor> outer_union_intersection(const Tree& t,
                                                                   const std::vector<FaceDescriptor>& faces) {
    std::vector<Subtree> subs;
    for (const auto& f : faces) subs.push_back(realize(t, f));
    auto [cup, cap] = outer_cup_cap(t.down_sets(), whole(t), subs);
    return {describe(t, cup), describe(t, cap)};
}

std::vector<FaceDescriptor> enumerate_faces(const Tree& t) {
    std::vector<FaceDescriptor> out;
    for (const auto& v : faces_of(t.down_sets(), whole(t))) out.push_back(describe(t, v));
    std::sort(out.begin(), out.end());
    return out;
}

std::string_view to_string(MapKind k) {
    switch (k) {
        case MapKind::Iso: return "iso";
        case MapKind::Degeneracy: return "degeneracy";
        case MapKind::InnerFace: return "inner_face";
        case MapKind::OuterFace: return "outer_face";
        case MapKind::Face: return "face";
        case MapKind::General: return "general";
    }
    return "general";
}

bool is_monotone(const TreeMap& m) {
    const Tree& s = m.source;
    const Tree& t = m.target;
    if (static_cast<int>(m.edge_fn.size()) != s.size()) return false;
    for (int x : m.edge_fn)
        if (x < 0 || x >= t.size()) return false;
    for (int e = 0; e < s.size(); ++e) {
        if (s.is_leaf(e)) continue;
        std::vector<int> img;
        for (int c : s.children(e)) img.push_back(m.edge_fn[c]);
        if (!is_broad_relation(t, img, m.edge_fn[e])) return false;
    }
    return true;
}

namespace {

Subtree image_of(const TreeMap& m) {
    Subtree v;
    for (int e = 0; e < m.source.size(); ++e) {
        v.edges |= bit(m.edge_fn[e]);
        if (m.source.is_leaf(e)) v.leaves |= bit(m.edge_fn[e]);
    }
    return v;
}

}  // namespace

MapKind classify(const TreeMap& m) {
    if (!is_monotone(m)) throw Error(ErrorKind::NotMonotone, "edge map does not preserve broad relations");
    Subtree v = image_of(m);
    bool injective = count(v.edges) == m.source.size();
    Subtree w = whole(m.target);
    if (!injective) return v == w ? MapKind::Degeneracy : MapKind::General;
    if (v == w) return MapKind::Iso;
    Down down = m.target.down_sets();
    if (subtree_root(down, v) == 0 && v.leaves == w.leaves) return MapKind::InnerFace;
    if (is_outer_in(down, w, v)) return MapKind::OuterFace;
    return MapKind::Face;
}

TreeMap compose(const TreeMap& g, const TreeMap& f) {
    TreeMap out{f.source, g.target, {}};
    for (int x : f.edge_fn) out.edge_fn.push_back(g.edge_fn[x]);
    return out;
}

TreeMap identity_map(const Tree& t) {
    TreeMap out{t, t, {}};
    for (int e = 0; e < t.size(); ++e) out.edge_fn.push_back(e);
    return out;
}

TreeMap face_inclusion(const Tree& t, const Subtree& v) {
    auto st = subtree_tree(t.down_sets(), t.names(), v);
    return {st.tree, t, st.to_ambient};
}

Factorization factorize(const TreeMap& m) {
    if (!is_monotone(m)) throw Error(ErrorKind::NotMonotone, "edge map does not preserve broad relations");
    Down down = m.target.down_sets();
    Subtree w = whole(m.target);
    Subtree v = image_of(m);
    if (!is_face_of(down, v, w)) throw Error(ErrorKind::VerificationFailed, "image is not a face");
    Subtree vbar = outer_closure_in(down, w, v);
    auto tv = subtree_tree(down, m.target.names(), v);
    auto tbar = subtree_tree(down, m.target.names(), vbar);

    Factorization f;
    f.degeneracy = {m.source, tv.tree, {}};
    for (int x : m.edge_fn) f.degeneracy.edge_fn.push_back(tv.local(x));
    f.inner = {tv.tree, tbar.tree, {}};
    for (int x : tv.to_ambient) f.inner.edge_fn.push_back(tbar.local(x));
    f.outer = {tbar.tree, m.target, tbar.to_ambient};
    return f;
}

std::vector<std::vector<int>> monotone_maps(const Tree& s, const Tree& t) {
    std::vector<std::vector<int>> out;
    std::vector<int> f(s.size(), -1);
    const int n = s.size();
    auto vertex_ok = [&](int p) {
        std::vector<int> img;
        for (int c : s.children(p)) img.push_back(f[c]);
        return is_broad_relation(t, img, f[p]);
    };
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            out.push_back(f);
            return;
        }
        EdgeSet cand = i == 0 ? t.all() : t.down(f[s.parent(i)]);
        for (int x : bits(cand)) {
            f[i] = x;
            if (s.is_stump(i) && !vertex_ok(i)) continue;
            int p = s.parent(i);
            if (p >= 0 && s.children(p).back() == i && !vertex_ok(p)) continue;
            self(self, i + 1);
        }
        f[i] = -1;
    };
    rec(rec, 0);
    return out;
}

}  // namespace dendro

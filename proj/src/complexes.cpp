#include "dendro/complexes.hpp"

#include <algorithm>

namespace dendro {

EdgeSet Ambient::act_on(int g, EdgeSet s) const {
    EdgeSet out = 0;
    for_each_bit(s, [&](int e) { out |= bit(act[g][e]); });
    return out;
}

Subtree Ambient::act_on(int g, const Subtree& s) const { return {act_on(g, s.edges), act_on(g, s.leaves)}; }

ElemSet Ambient::isotropy(const Subtree& s) const {
    ElemSet out = 0;
    for (int g = 0; g < group.order(); ++g)
        if (act_on(g, s) == s) out |= bit(g);
    return out;
}

EdgeSet Ambient::saturate(EdgeSet s) const {
    EdgeSet out = 0;
    for (int g = 0; g < group.order(); ++g) out |= act_on(g, s);
    return out;
}

bool Ambient::is_subtree(const Subtree& s) const {
    for (const auto& t : tops)
        if (is_face_of(down, s, t)) return true;
    return false;
}

std::vector<Subtree> Ambient::subtrees() const {
    std::set<Subtree> out;
    for (const auto& t : tops)
        for (const auto& f : faces_of(down, t)) out.insert(f);
    return {out.begin(), out.end()};
}

std::shared_ptr<const Ambient> ambient_of(const GForest& t) {
    auto a = std::make_shared<Ambient>();
    a->names = t.names();
    a->down = t.down();
    a->group = t.group();
    a->act = t.action();
    for (int c = 0; c < t.components(); ++c) a->tops.push_back(t.component_subtree(c));
    return a;
}

Complex::Complex(std::shared_ptr<const Ambient> amb, std::set<Subtree> members)
    : amb_(std::move(amb)), members_(std::move(members)) {}

Complex Complex::generated(std::shared_ptr<const Ambient> amb, const std::vector<Subtree>& gens) {
    std::set<Subtree> m;
    for (const auto& g : gens)
        for (const auto& f : faces_of(amb->down, g)) m.insert(f);
    return Complex(std::move(amb), std::move(m));
}

Complex Complex::full(std::shared_ptr<const Ambient> amb) { return generated(amb, amb->tops); }

bool Complex::is_face_closed() const {
    for (const auto& m : members_)
        for (const auto& f : faces_of(amb_->down, m))
            if (!contains(f)) return false;
    return true;
}

bool Complex::is_g_stable() const {
    for (const auto& m : members_)
        for (int g = 0; g < amb_->group.order(); ++g)
            if (!contains(amb_->act_on(g, m))) return false;
    return true;
}

std::vector<Subtree> Complex::complement() const {
    std::vector<Subtree> out;
    for (const auto& s : amb_->subtrees())
        if (!contains(s)) out.push_back(s);
    return out;
}

std::vector<Subtree> Complex::maximal() const {
    std::vector<Subtree> out;
    for (const auto& m : members_) {
        bool top = true;
        for (const auto& o : members_)
            if (o != m && subset(m.edges, o.edges) && is_face_of(amb_->down, m, o)) {
                top = false;
                break;
            }
        if (top) out.push_back(m);
    }
    return out;
}

namespace {

Subtree component_of_face(const GForest& t, const Subtree& v) {
    return t.component_subtree(t.component_of(subtree_root(t.down(), v)));
}

Subtree all_of(const GForest& t) {
    EdgeSet all = t.size() == 64 ? ~EdgeSet{0} : (EdgeSet{1} << t.size()) - 1;
    return {all, t.leaves()};
}

std::vector<Subtree> all_faces(const GForest& t) {
    std::vector<Subtree> out;
    for (int c = 0; c < t.components(); ++c) {
        auto f = faces_of(t.down(), t.component_subtree(c));
        out.insert(out.end(), f.begin(), f.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <class Pred>
Complex filtered(const GForest& t, Pred&& keep) {
    std::set<Subtree> m;
    for (const auto& v : all_faces(t))
        if (keep(v)) m.insert(v);
    return Complex(ambient_of(t), std::move(m));
}

}  // namespace

bool in_boundary(const GForest& t, const Subtree& v) { return v != component_of_face(t, v); }

bool in_horn(const GForest& t, EdgeSet e, const Subtree& v) {
    Subtree comp = component_of_face(t, v);
    bool inner_face = subtree_root(t.down(), v) == subtree_root(t.down(), comp) && v.leaves == comp.leaves;
    return !(inner_face && subset(comp.edges & ~v.edges, e));
}

bool in_orbital_horn(const GForest& t, EdgeSet e, const Subtree& v) {
    Subtree gv = minimal_orbital_face(t, v);
    Subtree all = all_of(t);
    bool inner_face = subset(t.roots(), gv.edges) && gv.leaves == all.leaves;
    return !(inner_face && subset(all.edges & ~gv.edges, e));
}

bool in_segal_core(const GForest& t, const Subtree& v) {
    if (count(v.edges) == 1 && v.leaves == v.edges) return true;
    int r = subtree_root(t.down(), v);
    int c = t.component_of(r);
    const Tree& comp = t.component(c);
    int lr = t.local(r);
    if (comp.is_leaf(lr)) return false;
    EdgeSet kids = 0;
    for (int k : comp.children(lr)) kids |= bit(t.global(c, k));
    return v == Subtree{bit(r) | kids, kids};
}

void check_horn_edges(const GForest& t, EdgeSet e) {
    if (e == 0) throw Error(ErrorKind::EmptyE, "horn edge set is empty");
    if (!subset(e, t.inner())) throw Error(ErrorKind::NotInner, "horn edge set contains a non-inner edge");
    if (!t.is_stable(e)) throw Error(ErrorKind::NotGStable, "horn edge set is not G-stable");
}

Complex boundary(const GForest& t) {
    return filtered(t, [&](const Subtree& v) { return in_boundary(t, v); });
}

Complex horn(const GForest& t, EdgeSet e) {
    check_horn_edges(t, e);
    return filtered(t, [&](const Subtree& v) { return in_horn(t, e, v); });
}

Complex orbital_horn(const GForest& t, EdgeSet e) {
    check_horn_edges(t, e);
    return filtered(t, [&](const Subtree& v) { return in_orbital_horn(t, e, v); });
}

Complex segal_core(const GForest& t) {
    return filtered(t, [&](const Subtree& v) { return in_segal_core(t, v); });
}

std::vector<Subtree> horn_generators(const GForest& t, EdgeSet e) {
    std::vector<Subtree> out;
    for (int c = 0; c < t.components(); ++c) {
        Subtree comp = t.component_subtree(c);
        for (int x : bits(subtree_inner(t.down(), comp) & ~e)) out.push_back(remove_edges(comp, bit(x)));
        for (const auto& o : outer_faces_of(t.down(), comp))
            if (o != comp) out.push_back(o);
    }
    return out;
}

std::vector<Subtree> orbital_horn_generators(const GForest& t, EdgeSet e) {
    auto pieces_inside = [&](const Subtree& a, const Subtree& b) {
        for (const auto& p : orbital_pieces(t, a)) {
            bool any = false;
            for (const auto& q : orbital_pieces(t, b)) any = any || is_face_of(t.down(), p, q);
            if (!any) return false;
        }
        return true;
    };
    Subtree removed = remove_edges(all_of(t), e);
    std::vector<Subtree> out;
    for (const auto& s : orbital_faces(t)) {
        if (pieces_inside(removed, s)) continue;
        for (const auto& p : orbital_pieces(t, s)) out.push_back(p);
    }
    return out;
}

std::vector<Subtree> segal_core_generators(const GForest& t) {
    std::vector<Subtree> out;
    for (int c = 0; c < t.components(); ++c) {
        const Tree& comp = t.component(c);
        for (int e = 0; e < comp.size(); ++e) {
            int g = t.global(c, e);
            out.push_back({bit(g), bit(g)});
            if (comp.is_leaf(e)) continue;
            EdgeSet kids = 0;
            for (int k : comp.children(e)) kids |= bit(t.global(c, k));
            out.push_back({bit(g) | kids, kids});
        }
    }
    return out;
}

bool in_subtree_horn(Down down, const Subtree& w, EdgeSet xi, const Subtree& v) {
    if (!is_face_of(down, v, w)) return false;
    bool inner_face = subtree_root(down, v) == subtree_root(down, w) && v.leaves == w.leaves;
    return !(inner_face && subset(w.edges & ~v.edges, xi));
}

Complex attach_horn(const Complex& a, const HornStep& s, int step) {
    const Ambient& amb = a.ambient();
    auto fail = [&](const std::string& why) {
        throw Error(ErrorKind::NotAPushout, "step " + std::to_string(step) + ": " + why);
    };
    if (!amb.is_subtree(s.tree)) fail("attached tree is not a subtree of the ambient");
    if (amb.isotropy(s.tree) != s.isotropy) fail("isotropy does not match the stabilizer of the attached tree");
    if (s.xi == 0) fail("empty horn edge set");
    if (!subset(s.xi, subtree_inner(amb.down, s.tree))) fail("horn edges are not inner in the attached tree");
    for (int k : bits(s.isotropy))
        if (amb.act_on(k, s.xi) != s.xi) fail("horn edges are not stable under the isotropy");
    // (a) the horn is already present.
    for (const auto& v : faces_of(amb.down, s.tree))
        if (in_subtree_horn(amb.down, s.tree, s.xi, v) && !a.contains(v))
            fail("horn face " + format_face(amb.names, v) + " is missing");
    // (b), (c): the new faces are absent and the translates are distinct.
    std::set<Subtree> added;
    for (int g : amb.group.coset_reps(s.isotropy)) {
        for_each_subset(s.xi, [&](EdgeSet d) {
            Subtree v = amb.act_on(g, remove_edges(s.tree, d));
            if (a.contains(v)) fail("face " + format_face(amb.names, v) + " is already present");
            added.insert(v);
        });
    }
    std::size_t expected = amb.group.coset_reps(s.isotropy).size() * (std::size_t{1} << count(s.xi));
    if (added.size() != expected) fail("translates of the attached faces collide");
    std::set<Subtree> m = a.members();
    m.insert(added.begin(), added.end());
    return Complex(a.ambient_ptr(), std::move(m));
}

}  // namespace dendro

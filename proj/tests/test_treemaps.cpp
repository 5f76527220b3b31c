#include <algorithm>
#include <set>

#include "doctest.h"
#include "dendro/treemaps.hpp"
#include "fixtures.hpp"

using namespace dendro;
using fixtures::first_tree;
using fixtures::ids;
using fixtures::make_tree;
using fixtures::mask;

namespace {

// A pair (E, L) is a face iff it has a top element, nothing of E lies strictly below a
// member of L, and each remaining edge together with its maximal predecessors in E forms
// a broad relation of the ambient tree.
std::set<Subtree> brute_faces(const Tree& t) {
    std::set<Subtree> out;
    const int n = t.size();
    for (EdgeSet e = 1; e < (EdgeSet{1} << n); ++e) {
        int top = -1;
        for (int x : bits(e)) {
            bool is_top = true;
            for (int y : bits(e))
                if (!t.leq(y, x)) is_top = false;
            if (is_top) top = x;
        }
        if (top < 0) continue;
        for_each_subset(e, [&](EdgeSet l) {
            for (int x : bits(l))
                for (int y : bits(e))
                    if (y != x && t.leq(y, x)) return;
            for (int x : bits(e & ~l)) {
                std::vector<int> kids;
                for (int y : bits(e)) {
                    if (y == x || !t.leq(y, x)) continue;
                    bool maximal = true;
                    for (int z : bits(e))
                        if (z != x && z != y && t.leq(y, z) && t.leq(z, x)) maximal = false;
                    if (maximal) kids.push_back(y);
                }
                if (!is_broad_relation(t, kids, x)) return;
            }
            out.insert({e, l});
        });
    }
    return out;
}


}  // namespace

TEST_CASE("inner face of the first tree") {
    Tree t = first_tree();
    Tree f = inner_face(t, mask(t, {"d"}));
    std::set<std::string> gens;
    for (const auto& g : f.generators()) gens.insert(format_relation(f, g));
    CHECK(gens == std::set<std::string>{"a b e f <= r", "c <= f", "ε <= b"});
    CHECK(f.size() == 6);
    CHECK(inner_face(t, 0) == t);
    CHECK_THROWS_AS(inner_face(t, mask(t, {"a"})), Error);
    try {
        inner_face(t, mask(t, {"a"}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotInnerEdge);
    }
}

TEST_CASE("inner faces keep every relation among retained edges") {
    Tree t = first_tree();
    for_each_subset(t.inner(), [&](EdgeSet d) {
        Tree f = inner_face(t, d);
        std::set<std::string> restricted;
        for (const auto& r : broad_closure(t)) {
            bool keep = !has(d, r.target);
            for (int x : r.source) keep = keep && !has(d, x);
            if (keep) restricted.insert(format_relation(t, r));
        }
        std::set<std::string> got;
        for (const auto& r : broad_closure(f)) got.insert(format_relation(f, r));
        CHECK(got == restricted);
    });
}

TEST_CASE("outer faces of the first tree") {
    Tree t = first_tree();
    Tree f = outer_face(t, {ids(t, {"a", "b"}), t.find("d")});
    CHECK(f.size() == 3);
    CHECK(f.generators().size() == 1);
    CHECK(format_relation(f, f.generators()[0]) == "a b <= d");

    Tree g = outer_face(t, {ids(t, {"d", "e", "f"}), t.find("r")});
    CHECK(isomorphic(g, corolla(3)));

    Tree c = corolla(3);
    CHECK(outer_face(c, c.generators()[0]) == c);
    CHECK_THROWS_AS(outer_face(t, {ids(t, {"a", "e"}), t.find("r")}), Error);
}

TEST_CASE("face enumeration matches brute force") {
    Tree eta = stick();
    CHECK(enumerate_faces(eta).size() == 1);
    CHECK(enumerate_faces(corolla(2)).size() == 4);
    Tree t = first_tree();
    auto fast = faces_of(t.down_sets(), whole(t));
    CHECK(std::set<Subtree>(fast.begin(), fast.end()) == brute_faces(t));
    CHECK(fast.size() == 33);
    for (const Tree& s : enumerate_trees(3, 3)) {
        auto f = faces_of(s.down_sets(), whole(s));
        CHECK(std::set<Subtree>(f.begin(), f.end()) == brute_faces(s));
        CHECK(std::set<Subtree>(f.begin(), f.end()).size() == f.size());
    }
}

TEST_CASE("descriptors round trip") {
    Tree t = first_tree();
    for (const auto& d : enumerate_faces(t)) {
        Subtree v = realize(t, d);
        CHECK(describe(t, v) == d);
        CHECK((d.removed & bit(d.root)) == 0);
        for (int l : d.leaves) CHECK_FALSE(has(d.removed, l));
        auto closure = outer_closure(t, d);
        CHECK(closure.removed == 0);
        CHECK(closure.root == d.root);
        CHECK(closure.leaves == d.leaves);
    }
}

TEST_CASE("cup and cap of outer faces") {
    Tree t = make_tree({"r", "x", "y", "u", "v"}, "r", {{"r", {"x", "y"}}, {"x", {"u"}}, {"y", {"v"}}});
    FaceDescriptor u1{t.root(), ids(t, {"u", "y"}), 0};
    FaceDescriptor u2{t.root(), ids(t, {"x", "v"}), 0};
    std::sort(u1.leaves.begin(), u1.leaves.end());
    std::sort(u2.leaves.begin(), u2.leaves.end());
    auto [cup, cap] = outer_union_intersection(t, {u1, u2});
    CHECK(realize(t, cup) == whole(t));
    CHECK(realize(t, cap) == Subtree{mask(t, {"r", "x", "y"}), mask(t, {"x", "y"})});

    auto [c2, k2] = outer_union_intersection(t, {u1, u1});
    CHECK(c2 == u1);
    CHECK(k2 == u1);

    FaceDescriptor w = describe(t, whole(t));
    auto [c3, k3] = outer_union_intersection(t, {u1, w});
    CHECK(c3 == w);
    CHECK(k3 == u1);

    FaceDescriptor other{t.find("x"), ids(t, {"u"}), 0};
    CHECK_THROWS_AS(outer_union_intersection(t, {u1, other}), Error);
}

TEST_CASE("cup and cap are extremal among outer faces") {
    for (const Tree& s : enumerate_trees(3, 3)) {
        auto down = s.down_sets();
        auto outer = outer_faces_of(down, whole(s));
        for (const auto& a : outer)
            for (const auto& b : outer) {
                if (subtree_root(down, a) != subtree_root(down, b)) continue;
                auto [cup, cap] = outer_cup_cap(down, whole(s), {a, b});
                CHECK(is_outer_in(down, whole(s), cup));
                CHECK(is_outer_in(down, whole(s), cap));
                for (const auto& c : outer) {
                    if (subtree_root(down, c) != subtree_root(down, a)) continue;
                    bool above = is_face_of(down, a, c) && is_face_of(down, b, c);
                    bool below = is_face_of(down, c, a) && is_face_of(down, c, b);
                    if (above) CHECK(is_face_of(down, cup, c));
                    if (below) CHECK(is_face_of(down, c, cap));
                }
            }
    }
}

TEST_CASE("map classification") {
    Tree t = first_tree();
    CHECK(classify(identity_map(t)) == MapKind::Iso);
    CHECK(classify({stick(), t, {t.find("a")}}) == MapKind::OuterFace);
    Tree l2 = linear(2), l1 = linear(1);
    CHECK(classify({l2, l1, {0, 0, 1}}) == MapKind::Degeneracy);
    CHECK(classify(face_inclusion(t, remove_edges(whole(t), mask(t, {"d"})))) == MapKind::InnerFace);
    CHECK_THROWS_AS(classify({l1, l2, {2, 0}}), Error);
}

TEST_CASE("degeneracy followed by an edge face") {
    Tree t = first_tree();
    Tree l2 = linear(2), l1 = linear(1);
    TreeMap deg{l2, l1, {0, 0, 1}};
    TreeMap face{l1, t, {t.find("f"), t.find("c")}};
    TreeMap m = compose(face, deg);
    auto f = factorize(m);
    CHECK(f.degeneracy.edge_fn == deg.edge_fn);
    CHECK(f.inner.edge_fn == std::vector<int>{0, 1});
    CHECK(f.outer.edge_fn == face.edge_fn);
}

TEST_CASE("factorization round trips on small trees") {
    auto trees = enumerate_trees(2, 2);
    trees.push_back(first_tree());
    int maps = 0;
    for (const Tree& s : trees) {
        for (const Tree& t : trees) {
            if (s.size() > 5 || t.size() > 7) continue;
            for (const auto& fn : monotone_maps(s, t)) {
                TreeMap m{s, t, fn};
                auto f = factorize(m);
                CHECK(compose(f.outer, compose(f.inner, f.degeneracy)).edge_fn == fn);
                MapKind d = classify(f.degeneracy);
                CHECK((d == MapKind::Iso || d == MapKind::Degeneracy));
                MapKind i = classify(f.inner);
                CHECK((i == MapKind::Iso || i == MapKind::InnerFace));
                MapKind o = classify(f.outer);
                CHECK((o == MapKind::Iso || o == MapKind::OuterFace));
                MapKind k = classify(m);
                if (k == MapKind::Face || k == MapKind::InnerFace || k == MapKind::OuterFace)
                    CHECK(f.degeneracy.source.size() == f.degeneracy.target.size());
                if (k != MapKind::Iso && k != MapKind::Degeneracy && k != MapKind::General)
                    CHECK(degree(s) < degree(t));
                if (k == MapKind::Degeneracy) CHECK(degree(s) > degree(t));
                ++maps;
            }
        }
    }
    CHECK(maps > 100);
}

TEST_CASE("monotone maps into a corolla") {
    // C2 -> C2: the identity and the swap.
    CHECK(monotone_maps(corolla(2), corolla(2)).size() == 2);
    // eta -> T picks any edge.
    CHECK(monotone_maps(stick(), first_tree()).size() == 7);
}

TEST_CASE("nested outer faces and inner edges") {
    Tree t = first_tree();
    auto down = t.down_sets();
    auto faces = faces_of(down, whole(t));
    for (const auto& u : outer_faces_of(down, whole(t)))
        for (const auto& v : faces) {
            if (!is_face_of(down, v, u)) continue;
            Subtree vbar = outer_closure_in(down, whole(t), v);
            if (!is_outer_in(down, u, v)) continue;
            CHECK(subtree_inner(down, v) == (subtree_inner(down, u) & subtree_inner(down, vbar)));
        }
}

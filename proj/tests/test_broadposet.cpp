#include <algorithm>
#include <set>

#include "doctest.h"
#include "dendro/broadposet.hpp"
#include "fixtures.hpp"

using namespace dendro;
using fixtures::first_tree;
using fixtures::ids;
using fixtures::make_tree;
using fixtures::mask;

namespace {

std::set<std::string> composites(const Tree& t) {
    std::set<std::string> gens;
    for (const auto& g : t.generators()) gens.insert(format_relation(t, g));
    std::set<std::string> out;
    for (const auto& r : broad_closure(t)) {
        if (r.source.size() == 1 && r.source[0] == r.target) continue;
        auto s = format_relation(t, r);
        if (!gens.count(s)) out.insert(s);
    }
    return out;
}

ErrorKind kind_of(const RawTree& raw) {
    try {
        validate_tree(raw);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a validation error");
    return ErrorKind::InvalidInput;
}

// Closure by naive saturation over all pairs (relation, relation), independent of the
// frontier algorithm.
std::set<BroadRelation> naive_closure(const Tree& t) {
    std::set<BroadRelation> rel;
    for (int e = 0; e < t.size(); ++e) rel.insert({{e}, e});
    for (const auto& g : t.generators()) rel.insert(g);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<BroadRelation> cur(rel.begin(), rel.end());
        for (const auto& a : cur)
            for (const auto& b : cur)
                for (std::size_t i = 0; i < a.source.size(); ++i) {
                    if (a.source[i] != b.target) continue;
                    BroadRelation n{{}, a.target};
                    n.source.assign(a.source.begin(), a.source.begin() + i);
                    n.source.insert(n.source.end(), b.source.begin(), b.source.end());
                    n.source.insert(n.source.end(), a.source.begin() + i + 1, a.source.end());
                    grew |= rel.insert(n).second;
                }
    }
    return rel;
}

}  // namespace

TEST_CASE("first tree classification") {
    Tree t = first_tree();
    CHECK(t.name(t.root()) == "r");
    CHECK(t.leaves() == mask(t, {"a", "e", "c"}));
    CHECK(t.inner() == mask(t, {"b", "d", "f"}));
    CHECK(t.stumps() == mask(t, {"b"}));
    CHECK(t.nodes() == mask(t, {"r", "d", "f"}));
    CHECK(degree(t) == 4);
}

TEST_CASE("first tree composites") {
    Tree t = first_tree();
    std::set<std::string> expected{"a b e f <= r", "a e f <= r", "d e c <= r",
                                   "a b e c <= r", "a e c <= r", "a <= d"};
    CHECK(composites(t) == expected);
    CHECK(broad_closure(t).size() == 17);
}

TEST_CASE("stick and corollas") {
    Tree eta = stick();
    CHECK(degree(eta) == 0);
    CHECK(eta.inner() == 0);
    CHECK(eta.leaves() == 1);
    CHECK(broad_closure(eta).size() == 1);

    Tree c2 = corolla(2);
    CHECK(broad_closure(c2).size() == 4);
    CHECK(degree(c2) == 1);

    Tree c0 = corolla(0);
    CHECK(c0.stumps() == 1);
    CHECK(c0.leaves() == 0);
    CHECK(degree(c0) == 1);
}

TEST_CASE("validation errors") {
    CHECK(kind_of({{"x", "y"}, "", {{"x", {"y"}}, {"y", {"x"}}}}) == ErrorKind::CycleDetected);
    CHECK(kind_of({{"r", "a"}, "", {{"r", {"a", "a"}}}}) == ErrorKind::DuplicateChild);
    CHECK(kind_of({{"r", "a", "s"}, "", {{"r", {"a"}}}}) == ErrorKind::MultipleRoots);
    CHECK(kind_of({{"r", "a"}, "", {{"r", {"a", "z"}}}}) == ErrorKind::OrphanEdge);
    CHECK(kind_of({{"r", "a", "b"}, "", {{"r", {"a"}}, {"b", {"a"}}}}) == ErrorKind::DuplicateChild);
}

TEST_CASE("canonical form ignores declaration order") {
    Tree a = first_tree();
    Tree b = make_tree({"c", "b", "a", "f", "e", "d", "r"}, "",
                       {{"b", {}}, {"f", {"c"}}, {"d", {"a", "b"}}, {"r", {"d", "e", "f"}}});
    CHECK(a == b);
    CHECK(a.planar_code() == "((|())|(|))");
}

TEST_CASE("closure agrees with naive saturation on all small trees") {
    for (const Tree& t : enumerate_trees(3, 3)) {
        auto fast = broad_closure(t);
        auto slow = naive_closure(t);
        CHECK(std::set<BroadRelation>(fast.begin(), fast.end()) == slow);
        for (const auto& r : slow) CHECK(is_broad_relation(t, r.source, r.target));
    }
}

TEST_CASE("edge partition identities") {
    for (const Tree& t : enumerate_trees(3, 3)) {
        CHECK(t.size() == count(t.leaves()) + count(t.inner()) + (t.is_leaf(0) ? 0 : 1));
        CHECK(count(t.nodes() | t.stumps()) == degree(t));
        CHECK((t.nodes() & t.stumps()) == 0);
    }
}

TEST_CASE("closure is idempotent") {
    Tree t = first_tree();
    auto c = broad_closure(t);
    for (const auto& r : c) {
        std::vector<int> s = r.source;
        std::reverse(s.begin(), s.end());
        CHECK(is_broad_relation(t, s, r.target));
    }
    CHECK_FALSE(is_broad_relation(t, ids(t, {"a", "e"}), t.find("r")));
    CHECK_FALSE(is_broad_relation(t, ids(t, {"a", "a"}), t.find("d")));
    CHECK_FALSE(is_broad_relation(t, ids(t, {"d", "a", "e", "c"}), t.find("r")));
}

TEST_CASE("tree enumeration counts") {
    // Planted trees with stumps allowed, counted up to isomorphism.
    CHECK(enumerate_trees(0, 3).size() == 1);
    CHECK(enumerate_trees(1, 2).size() == 4);
    for (const Tree& t : enumerate_trees(3, 3)) {
        CHECK(degree(t) <= 3);
        auto nf = normal_form(t).first;
        CHECK(nf == t);
    }
}

TEST_CASE("automorphisms of a corolla") {
    CHECK(automorphisms(corolla(3)).size() == 6);
    CHECK(automorphisms(first_tree()).size() == 1);
    Tree t = make_tree({"r", "x", "y", "u", "v"}, "r", {{"r", {"x", "y"}}, {"x", {"u"}}, {"y", {"v"}}});
    CHECK(automorphisms(t).size() == 2);
}

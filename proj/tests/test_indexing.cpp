#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "dendro/indexing.hpp"

using namespace dendro;

namespace {

bool trivial_action(const GTreeClass& c) {
    return std::all_of(c.graph.begin(), c.graph.end(), [](const auto& x) {
        for (std::size_t i = 0; i < x.second.size(); ++i)
            if (x.second[i] != static_cast<int>(i)) return false;
        return true;
    });
}

std::vector<GTreeClass> trivial_corollas(const GTreeClasses& cls) {
    std::vector<GTreeClass> out;
    const auto& g = cls.truncation().group;
    for (int n = 0; n <= cls.truncation().arity; ++n)
        for (ElemSet h : g.subgroups()) out.push_back(corolla_class(cls, n, h, {}));
    return out;
}

Perm conj(const Perm& s, const Perm& p) {
    Perm si(s.size()), out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) si[s[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[p[si[i]]];
    return out;
}

}  // namespace

TEST_CASE("G-tree classes") {
    GTreeClasses plain(Truncation{2, 2, {}});
    CHECK(plain.size() == static_cast<int>(plain.trees().size()));
    // Oracle for Z/2: per tree, the free class plus one class per conjugacy class of
    // automorphisms of order at most 2.
    Truncation tr{2, 3, FiniteGroup::cyclic(2)};
    GTreeClasses cls(tr);
    int expected = 0;
    for (const auto& t : cls.trees()) {
        auto auts = automorphisms(t);
        std::set<Perm> seen;
        for (const auto& p : auts) {
            bool involution = true;
            for (std::size_t i = 0; i < p.size(); ++i) involution = involution && p[p[i]] == static_cast<int>(i);
            if (!involution || seen.count(p)) continue;
            ++expected;
            for (const auto& s : auts) seen.insert(conj(s, p));
        }
        ++expected;
    }
    CHECK(cls.size() == expected);
    for (int c = 0; c < cls.size(); ++c) {
        CHECK(cls.maps_to(c, c));
        CHECK(cls.forest(c).is_gtree());
        CHECK(cls.find(cls[c].tree, cls[c].graph) == c);
    }
    // G/1 . eta maps everywhere; G/G . eta only into trees with a fixed edge.
    int free_eta = -1;
    for (int c = 0; c < cls.size(); ++c)
        if (cls.trees()[cls[c].tree].degree() == 0 && cls[c].graph.size() == 1) free_eta = c;
    REQUIRE(free_eta >= 0);
    for (int c = 0; c < cls.size(); ++c) {
        CHECK(cls.maps_to(free_eta, c));
        CHECK(cls.maps_to(cls.unit(), c) == (cls[c].graph.size() == 2));
    }
    CHECK(cls.describe(cls.unit()) == "{1,-1}." + cls.trees()[cls[cls.unit()].tree].name(0));
}

TEST_CASE("full sieve") {
    for (const auto& g : {FiniteGroup::trivial(), FiniteGroup::cyclic(2)}) {
        SieveSpec s = SieveSpec::full(Truncation{2, 3, g});
        IndexingCheck r = validate_weak_indexing(s, true);
        CHECK(r.pass);
        CHECK(r.failures.empty());
        GraphFamilies f = to_graph_families(s);
        for (int u = 0; u < f.category.object_count(); ++u) CHECK(f.families[u] == graph_family(f.category, u));
        CHECK(check_admissible(f.category, f.families).pass);
    }
}

TEST_CASE("dropping the unit") {
    SieveSpec s = SieveSpec::full(Truncation{2, 2, FiniteGroup::cyclic(2)});
    s.member[s.classes->unit()] = false;
    IndexingCheck r = validate_weak_indexing(s);
    CHECK_FALSE(r.pass);
    REQUIRE_FALSE(r.failures.empty());
    CHECK(r.failures[0].axiom == "unit");
    CHECK(r.failures[0].witness.find("{1,-1}.") == 0);
}

TEST_CASE("Z/2 trivial-graph system") {
    Truncation tr{2, 3, FiniteGroup::cyclic(2)};
    GTreeClasses probe(tr);
    SieveSpec s = SieveSpec::from_corollas(tr, trivial_corollas(probe));
    IndexingCheck r = validate_weak_indexing(s, true, 4);
    CHECK(r.pass);
    // Oracle: exactly the classes whose graph is trivial.
    for (int c = 0; c < s.classes->size(); ++c) CHECK(s.member[c] == trivial_action((*s.classes)[c]));
    GraphFamilies f = to_graph_families(s);
    CHECK(check_admissible(f.category, f.families).pass);
    for (int u = 0; u < f.category.object_count(); ++u)
        for (const auto& gamma : f.families[u]) CHECK(gamma.size() <= 2);
    SieveSpec back = from_graph_families(tr, f);
    CHECK(back.member == s.member);
}

TEST_CASE("sticks and units only") {
    auto z2 = FiniteGroup::cyclic(2);
    Truncation tr{2, 3, z2};
    GTreeClasses probe(tr);
    std::vector<GTreeClass> units;
    for (ElemSet h : z2.subgroups()) units.push_back(corolla_class(probe, 1, h, {}));
    SieveSpec s = SieveSpec::from_corollas(tr, units);
    CHECK(validate_weak_indexing(s).pass);
    CHECK_FALSE(validate_weak_indexing(s, true).pass);
    GraphFamilies f = to_graph_families(s);
    for (int n = 0; n <= 3; ++n) {
        int u = s.classes->tree_index(corolla(n));
        // Only the unary corolla has graphs, and those are the two trivial ones.
        CHECK(f.families[u].size() == (n == 1 ? 2u : 0u));
    }
    CHECK(check_admissible(f.category, f.families).pass);
    CHECK(from_graph_families(tr, f).member == s.member);
    // Members are the linear trees.
    for (int c = 0; c < s.classes->size(); ++c) {
        const Tree& t = s.classes->trees()[(*s.classes)[c].tree];
        bool linear_tree = true;
        for (int e = 0; e < t.size(); ++e) linear_tree = linear_tree && (t.is_leaf(e) || t.children(e).size() == 1);
        CHECK(s.member[c] == linear_tree);
    }
}

TEST_CASE("corolla completions are weak indexing systems") {
    auto z2 = FiniteGroup::cyclic(2);
    Truncation tr{2, 2, z2};
    GTreeClasses probe(tr);
    std::vector<int> corollas;
    for (int c = 0; c < probe.size(); ++c)
        if (probe.trees()[probe[c].tree].degree() == 1) corollas.push_back(c);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<GTreeClass> pick;
        for (int c : corollas)
            if (rng() % 2) pick.push_back(probe[c]);
        SieveSpec s = SieveSpec::from_corollas(tr, pick);
        IndexingCheck r = validate_weak_indexing(s);
        CHECK_MESSAGE(r.pass, (r.failures.empty() ? "" : r.failures[0].witness));
        // Membership is the conjunction over vertex corollas.
        for (int c = 0; c < s.classes->size(); ++c) {
            bool all = true;
            for (int v : s.classes->vertex_corollas(c)) all = all && s.member[v];
            CHECK(s.member[c] == all);
        }
        GraphFamilies f = to_graph_families(s);
        CHECK(check_admissible(f.category, f.families).pass);
        CHECK(from_graph_families(tr, f).member == s.member);
        // Removing a tree with two vertices breaks the vertex condition.
        for (int c = 0; c < s.classes->size(); ++c)
            if (s.member[c] && s.classes->trees()[(*s.classes)[c].tree].degree() == 2) {
                SieveSpec broken = s;
                broken.member[c] = false;
                IndexingCheck b = validate_weak_indexing(broken);
                CHECK_FALSE(b.pass);
                CHECK(std::any_of(b.failures.begin(), b.failures.end(),
                                  [](const IndexingFailure& x) { return x.axiom == "segal"; }));
                break;
            }
    }
}

TEST_CASE("a sieve that is not Segal") {
    Truncation tr{2, 2, {}};
    SieveSpec s = SieveSpec::full(tr);
    // At most one vertex of arity other than one.
    for (int c = 0; c < s.classes->size(); ++c) {
        const Tree& t = s.classes->trees()[(*s.classes)[c].tree];
        int branching = 0;
        for (int e = 0; e < t.size(); ++e) branching += !t.is_leaf(e) && t.children(e).size() != 1;
        s.member[c] = branching <= 1;
    }
    IndexingCheck r = validate_weak_indexing(s);
    CHECK_FALSE(r.pass);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].axiom == "segal");
    CHECK(r.failures[0].witness.find("all its vertices") != std::string::npos);
    // Admissibility only sees the sieve condition.
    GraphFamilies f = to_graph_families(s);
    CHECK(check_admissible(f.category, f.families).pass);

    // Not downward closed: a tree without its corolla faces.
    SieveSpec up = SieveSpec::full(tr);
    for (int c = 0; c < up.classes->size(); ++c) up.member[c] = up.classes->trees()[(*up.classes)[c].tree].degree() != 1;
    IndexingCheck ru = validate_weak_indexing(up);
    CHECK(std::any_of(ru.failures.begin(), ru.failures.end(), [](const IndexingFailure& x) { return x.axiom == "sieve"; }));
    GraphFamilies fu = to_graph_families(up);
    CHECK_FALSE(check_admissible(fu.category, fu.families).pass);
}

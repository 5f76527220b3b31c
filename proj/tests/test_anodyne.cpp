#include <algorithm>

#include "doctest.h"
#include "dendro/anodyne.hpp"
#include "fixtures.hpp"

using namespace dendro;
using fixtures::face;
using fixtures::gmask;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidInput;
}

std::vector<EdgeSet> horn_edge_sets(const GForest& t) {
    std::vector<EdgeSet> out;
    for_each_subset(t.inner(), [&](EdgeSet e) {
        if (e != 0 && t.is_stable(e)) out.push_back(e);
    });
    return out;
}

// Independent replay: adds the faces g(W - D) one step at a time and checks the pushout
// counts by direct enumeration, without attach_horn.
bool independent_replay(const Certificate& c) {
    const Ambient& amb = *c.ambient;
    std::set<Subtree> cur = c.source;
    for (const auto& s : c.steps) {
        for (const auto& v : faces_of(amb.down, s.tree)) {
            bool horn_face = !(subtree_root(amb.down, v) == subtree_root(amb.down, s.tree) && v.leaves == s.tree.leaves &&
                               subset(s.tree.edges & ~v.edges, s.xi));
            if (horn_face && !cur.count(v)) return false;
        }
        std::set<Subtree> fresh;
        for (int g = 0; g < amb.group.order(); ++g)
            for_each_subset(s.xi, [&](EdgeSet d) { fresh.insert(amb.act_on(g, remove_edges(s.tree, d))); });
        int index = 0;
        for (int g = 0; g < amb.group.order(); ++g) index += amb.act_on(g, s.tree) == s.tree;
        std::size_t expected = (amb.group.order() / index) << count(s.xi);
        if (fresh.size() != expected) return false;
        for (const auto& v : fresh)
            if (!cur.insert(v).second) return false;
    }
    return cur == c.target;
}

}  // namespace

TEST_CASE("orbital horn filtration on the Z/2 horn tree") {
    GForest t = fixtures::z2_horn_tree();
    EdgeSet gb = gmask(t, {"b", "-b"});
    CHECK(verify_characteristic(orbital_horn_collection(t, gb)).ok());
    Certificate cert = certify_orbital_horn(t, gb);
    REQUIRE(cert.steps.size() == 2);
    // First a free orbit of the outer face S with leaves (-b, a), along b.
    Subtree s = face(t, {"d", "c", "-b", "b", "a"}, {"-b", "a"});
    Subtree minus_s = t.act(1, s);
    CHECK((cert.steps[0].tree == s || cert.steps[0].tree == minus_s));
    CHECK(cert.steps[0].isotropy == 1);
    CHECK(count(cert.steps[0].xi) == 1);
    CHECK(cert.steps[1].tree == t.component_subtree(0));
    CHECK(cert.steps[1].isotropy == t.group().all());
    CHECK(cert.steps[1].xi == gb);
    CHECK(replay(cert) == Complex::full(ambient_of(t)));
    CHECK(independent_replay(cert));
}

TEST_CASE("characteristic conditions and their witnesses") {
    GForest t = fixtures::z2_horn_tree();
    EdgeSet gb = gmask(t, {"b", "-b"});
    CharCollection c = orbital_horn_collection(t, gb);
    c.xi[0] = gmask(t, {"b"});
    CharReport r = verify_characteristic(c);
    CHECK_FALSE(r.get("Ch0").pass);
    CHECK(r.get("Ch0").witness.find("g=-1") != std::string::npos);
    CHECK(kind_of([&] { build_filtration(c); }) == ErrorKind::VerificationFailed);

    GForest first = GForest::trivial(fixtures::first_tree());
    CHECK(verify_characteristic(segal_core_collection(first)).ok());

    // Without the Segal core, Ch1 finds a vertex corolla outside A.
    CharCollection bare = segal_core_collection(first);
    bare.a = Complex(ambient_of(first));
    CharReport rb = verify_characteristic(bare);
    CHECK_FALSE(rb.get("Ch1").pass);
    CHECK_FALSE(rb.get("Ch1").witness.empty());

    CharCollection cyclic = segal_core_collection(first);
    cyclic.u.push_back(cyclic.u[0]);
    cyclic.xi.push_back(cyclic.xi[0]);
    cyclic.below = {{}, {}};
    CHECK(kind_of([&] { verify_characteristic(cyclic); }) == ErrorKind::MalformedPoset);
    CharCollection self = segal_core_collection(first);
    self.below = {{0}};
    CHECK(kind_of([&] { verify_characteristic(self); }) == ErrorKind::MalformedPoset);
}

TEST_CASE("Segal core certificates") {
    GForest first = GForest::trivial(fixtures::first_tree());
    Certificate cert = certify_segal_core(first);
    CHECK(replay(cert) == Complex::full(ambient_of(first)));
    CHECK(independent_replay(cert));
    CHECK(cert.steps.back().tree == first.component_subtree(0));

    GForest c3 = GForest::trivial(corolla(3));
    CHECK(certify_segal_core(c3).steps.empty());
}

TEST_CASE("lex order within an orbit") {
    GForest first = GForest::trivial(fixtures::first_tree());
    Certificate cert = certify_segal_core(first);
    Down down = first.down();
    Subtree u = first.component_subtree(0);
    for (std::size_t k = 1; k < cert.steps.size(); ++k) {
        Subtree a = outer_closure_in(down, u, cert.steps[k - 1].tree);
        Subtree b = outer_closure_in(down, u, cert.steps[k].tree);
        CHECK(subtree_degree(down, a) <= subtree_degree(down, b));
        CHECK_FALSE((is_face_of(down, b, a) && a != b));
    }
    // Every attached tree other than the last is strictly smaller.
    for (std::size_t k = 0; k + 1 < cert.steps.size(); ++k)
        CHECK(subtree_degree(down, cert.steps[k].tree) < subtree_degree(down, u));
}

TEST_CASE("horn to horn variants") {
    GForest t = fixtures::z2_horn_tree();
    EdgeSet gb = gmask(t, {"b", "-b"});
    EdgeSet all = t.inner();
    CHECK(certify_horn_to_horn(t, gb, gb).steps.empty());

    Certificate sub = certify_horn_to_horn(t, all, gb);
    CHECK(replay(sub) == horn(t, gb));
    CHECK(independent_replay(sub));

    // The chain instantiation misses the intersection T - {b,-b}, so Ch3 must fail here.
    EdgeSet c = gmask(t, {"c"});
    CharReport chain = verify_characteristic(horn_to_horn_collection(t, all, c, HornVariant::Chain));
    CHECK_FALSE(chain.ok());
    CHECK(verify_characteristic(horn_to_horn_collection(t, all, c)).ok());
    CHECK(replay(certify_horn_to_horn(t, all, c)) == horn(t, c));

    // Without a group both variants work.
    GForest first = GForest::trivial(fixtures::first_tree());
    EdgeSet e = first.inner();
    EdgeSet f = gmask(first, {"d"});
    for (auto v : {HornVariant::Subsets, HornVariant::Chain}) {
        Certificate h = certify_horn_to_horn(first, e, f, v);
        CHECK(replay(h) == horn(first, f));
    }
    CHECK(kind_of([&] { certify_horn_to_horn(first, f, e); }) == ErrorKind::InvalidInput);
}

TEST_CASE("orbital to orbital and covers") {
    GForest t = fixtures::z2_horn_tree();
    EdgeSet gb = gmask(t, {"b", "-b"});
    Certificate o = certify_orbital_to_orbital(t, t.inner(), gb);
    CHECK(replay(o) == orbital_horn(t, gb));

    // The grafting cover of the quaternion tree along the c-orbit.
    GForest q = fixtures::quaternion_tree();
    EdgeSet gc = q.orbit(q.find("c"));
    std::vector<Subtree> gens;
    for (int comp = 0; comp < q.components(); ++comp) {
        Subtree whole = q.component_subtree(comp);
        int root = subtree_root(q.down(), whole);
        gens.push_back(outer_face_of(q.down(), whole, root, gc & whole.edges));
        for (int x : bits(gc & whole.edges)) gens.push_back(outer_face_of(q.down(), whole, x, whole.leaves & q.down()[x]));
    }
    auto amb = ambient_of(q);
    Complex cover = Complex::generated(amb, gens);
    CHECK(is_cover(q, cover));
    Certificate cc = certify_cover(q, cover, Complex::full(amb));
    CHECK(replay(cc) == Complex::full(amb));
    CHECK(independent_replay(cc));
    CHECK(kind_of([&] { certify_cover(q, Complex(amb), cover); }) == ErrorKind::InvalidInput);
}

TEST_CASE("generating reduction") {
    GForest first = GForest::trivial(fixtures::first_tree());
    Certificate g = generating_reduction(certify_segal_core(first));
    for (const auto& s : g.steps) CHECK(count(s.xi) == 1);
    CHECK(replay(g) == Complex::full(ambient_of(first)));

    GForest t = fixtures::z2_horn_tree();
    Certificate h = generating_reduction(certify_segal_core(t));
    for (const auto& s : h.steps) CHECK(is_single_orbit(*h.ambient, s));
    CHECK(independent_replay(h));
}

TEST_CASE("certificates over small G-forests") {
    int certified = 0;
    for (const auto& t : small_gforests(3, 3)) {
        auto full = Complex::full(ambient_of(t));
        Certificate sc = certify_segal_core(t);
        CHECK(replay(sc) == full);
        CHECK(independent_replay(sc));
        for (const auto& s : generating_reduction(sc).steps) CHECK(is_single_orbit(*sc.ambient, s));
        auto edge_sets = horn_edge_sets(t);
        for (EdgeSet e : edge_sets) {
            Certificate oh = certify_orbital_horn(t, e);
            CHECK(independent_replay(oh));
            for (EdgeSet f : edge_sets) {
                if (!subset(f, e)) continue;
                Certificate hh = certify_horn_to_horn(t, e, f);
                CHECK(independent_replay(hh));
                CHECK(replay(certify_orbital_to_orbital(t, e, f)) == orbital_horn(t, f));
                ++certified;
            }
        }
    }
    CHECK(certified > 50);
}

TEST_CASE("certificate kind names") {
    for (auto k : {CertifyKind::SegalCore, CertifyKind::OrbitalHornToFull, CertifyKind::HornToHorn,
                   CertifyKind::OrbitalToOrbital, CertifyKind::CoverInclusion, CertifyKind::GeneratingReduction})
        CHECK(parse_certify_kind(to_string(k)) == k);
    CHECK(kind_of([] { parse_certify_kind("bogus"); }) == ErrorKind::InvalidInput);
}

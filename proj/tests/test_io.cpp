#include <filesystem>

#include "doctest.h"
#include "dendro/io.hpp"
#include "fixtures.hpp"

using namespace dendro;
using io::json;

namespace {

std::string data(const std::string& name) { return std::string(DENDRO_DATA_DIR) + "/" + name; }

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("named groups") {
    CHECK(io::parse_group("trivial").order() == 1);
    CHECK(io::parse_group("Z/4").order() == 4);
    CHECK(io::parse_group("Q8").order() == 8);
    CHECK(io::parse_group("S3").order() == 6);
    FiniteGroup v = io::parse_group("Z/2 x Z/2");
    CHECK(v.order() == 4);
    for (int g = 0; g < 4; ++g) CHECK(v.mul(g, g) == v.identity());
    FiniteGroup back = io::parse_group(io::group_json(io::parse_group("S3")));
    CHECK(back.table() == io::parse_group("S3").table());
    CHECK(kind_of([] { io::parse_group("Z/x"); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { io::parse_group(json{{"elements", {"e", "x"}}, {"table", {{"e", "x"}, {"x", "x"}}}}); }) ==
          ErrorKind::InvalidInput);
}

TEST_CASE("trees and G-forests round trip") {
    Tree first = fixtures::first_tree();
    CHECK(io::parse_tree(io::tree_json(first)) == first);
    CHECK(io::parse_tree(io::load(data("first_tree.json"))) == first);

    for (const GForest& t : {fixtures::z2_horn_tree(), fixtures::z2_stump_tree(), fixtures::quaternion_tree()}) {
        GForest back = io::parse_gforest(io::gforest_json(t));
        CHECK(same_labeled(back, t));
    }
    CHECK(same_labeled(io::parse_gforest(io::load(data("z2_horn.json"))), fixtures::z2_horn_tree()));
    CHECK(same_labeled(io::parse_gforest(io::load(data("z2_stump.json"))), fixtures::z2_stump_tree()));
    CHECK(same_labeled(io::parse_gforest(io::load(data("quaternion_tree.json"))), fixtures::quaternion_tree()));

    json broken = io::load(data("z2_horn.json"));
    broken["generators"]["-1"]["a"] = "b";
    CHECK_THROWS_AS(io::parse_gforest(broken), Error);
    broken["generators"]["-1"]["a"] = "zz";
    CHECK(kind_of([&] { io::parse_gforest(broken); }) == ErrorKind::InvalidInput);
}

TEST_CASE("edge lists expand orbits") {
    GForest t = fixtures::z2_horn_tree();
    CHECK(io::parse_edges(t, "Gb") == fixtures::gmask(t, {"b", "-b"}));
    CHECK(io::parse_edges(t, "b, c") == fixtures::gmask(t, {"b", "c"}));
    CHECK(io::parse_edges(t, "G-a") == fixtures::gmask(t, {"a", "-a"}));
    CHECK(kind_of([&] { io::parse_edges(t, "Gq"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("faces round trip through descriptors") {
    GForest t = fixtures::quaternion_tree();
    for (int c = 0; c < t.components(); ++c)
        for (const auto& f : faces_of(t.down(), t.component_subtree(c))) {
            CHECK(io::parse_face(t, io::face_json(t, f)) == f);
            json raw{{"edges", io::edge_names(t.names(), f.edges)}, {"leaves", io::edge_names(t.names(), f.leaves)}};
            CHECK(io::parse_face(t, raw) == f);
        }
    json not_face{{"edges", {"d", "a"}}, {"leaves", {"a"}}};
    CHECK(kind_of([&] { io::parse_face(t, not_face); }) == ErrorKind::InvalidInput);
}

TEST_CASE("certificates round trip and replay") {
    GForest t = fixtures::z2_stump_tree();
    Certificate c = certify_segal_core(t);
    json j = io::certificate_json(c, "segal_core");
    Certificate back = io::parse_certificate(j);
    CHECK(back.source == c.source);
    CHECK(back.target == c.target);
    CHECK(back.steps == c.steps);
    CHECK(io::certificate_json(back, "segal_core") == j);
    CHECK(replay(back).members() == c.target);

    std::reverse(j["steps"].begin(), j["steps"].end());
    CHECK(kind_of([&] { replay(io::parse_certificate(j)); }) == ErrorKind::NotAPushout);
}

TEST_CASE("complex files close under faces") {
    json j{{"ambient", io::load(data("z2_horn.json"))},
           {"maximal", {{{"root", "d"}, {"leaves", {"-b", "b"}}, {"removed", json::array()}}}}};
    Complex c = io::parse_complex(j);
    // d(c(-b,b)): four sticks, d(c), c(-b,b), d(-b,b) and itself.
    CHECK(c.maximal().size() == 1);
    CHECK(c.size() == 8);
    j["maximal"] = {{{"root", "c"}, {"leaves", {"-a", "b"}}, {"removed", json::array()}}};
    CHECK(kind_of([&] { io::parse_complex(j); }) == ErrorKind::InvalidInput);
}

TEST_CASE("sieve signatures transport to canonical trees") {
    json full = io::load(data("sieve_full.json"));
    SieveSpec s = io::parse_sieve(full);
    CHECK(s.count() == s.classes->size());
    // The same corolla class whichever labels the file uses.
    json a{{"arity", 2}, {"action", {{"-1", {1, 0}}}}};
    json b{{"tree", {{"edges", {"x", "p", "q"}}, {"root", "x"}, {"vertices", {{"x", {"p", "q"}}}}}},
           {"action", {{"-1", {{"p", "q"}, {"q", "p"}}}}}};
    CHECK(io::parse_gtree_class(*s.classes, a) == io::parse_gtree_class(*s.classes, b));
    json fixed{{"arity", 2}};
    CHECK(io::parse_gtree_class(*s.classes, a) != io::parse_gtree_class(*s.classes, fixed));
    json free_stick{{"stick", true}, {"subgroup", {"1"}}};
    CHECK(s.classes->describe(io::parse_gtree_class(*s.classes, free_stick)).rfind("{1}.", 0) == 0);
    CHECK(io::parse_gtree_class(*s.classes, json{{"stick", true}}) == s.classes->unit());
    CHECK(kind_of([&] { io::parse_gtree_class(*s.classes, json{{"arity", 5}}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("presheaf and category descriptors") {
    auto y = io::parse_presheaf(io::load(data("constant_q8.json")));
    CHECK(y->group().order() == 8);
    CHECK(y->cardinality(corolla(2)) == 2);
    auto nerve_ass = io::parse_presheaf(io::load(data("nerve_ass_z2.json")));
    // Orderings of the inputs of a binary corolla.
    CHECK(nerve_ass->cardinality(corolla(2)) == 2);
    CHECK(nerve_ass->cardinality(corolla(3)) == 6);
    CHECK(kind_of([] { io::parse_presheaf(json{{"presheaf", "nope"}}); }) == ErrorKind::InvalidInput);

    GenReedyCat c = io::parse_category(json{{"builtin", "delta"}, {"n", 2}});
    CHECK(c.object_count() == 3);
    json explicit_cat{{"objects", {{{"name", "a"}, {"degree", 0}}, {{"name", "b"}, {"degree", 1}}}},
                      {"arrows", {{{"name", "f"}, {"src", "a"}, {"dst", "b"}, {"plus", true}}}}};
    GenReedyCat small = io::parse_category(explicit_cat);
    CHECK(small.arrow_count() == 3);
    CHECK(validate_gen_reedy(small).ok());
    auto fams = io::parse_families(small, json("all"));
    CHECK(check_admissible(small, fams).pass);
}

TEST_CASE("hasse diagrams keep only covers") {
    std::vector<std::vector<bool>> less{{false, true, true}, {false, false, true}, {false, false, false}};
    CHECK(io::hasse(less) == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    std::string dot = io::poset_dot("p", {"x", "y", "z"}, io::hasse(less));
    CHECK(dot.find("n0 -> n1") != std::string::npos);
    CHECK(dot.find("n0 -> n2") == std::string::npos);
    CHECK(io::tree_dot(fixtures::first_tree()).find("\"b/stump\"") != std::string::npos);
}

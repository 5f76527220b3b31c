#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "dendro/cli.hpp"
#include "dendro/io.hpp"

using dendro::io::json;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(DENDRO_DATA_DIR) + "/" + name; }

struct Run {
    int code = 0;
    std::string out;
    std::string err;
    json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = dendro::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "dendro_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("validate reports the degree and composite relations") {
    Run r = run({"validate", data("first_tree.json")});
    REQUIRE(r.code == 0);
    json rep = r.report();
    CHECK(rep["command"] == "validate");
    CHECK(rep["pass"] == true);
    CHECK(rep["result"]["degree"] == 4);
    std::set<std::string> composites(rep["result"]["composites"].begin(), rep["result"]["composites"].end());
    CHECK(composites == std::set<std::string>{"a b e f <= r", "a e f <= r", "d e c <= r", "a b e c <= r", "a e c <= r",
                                              "a <= d"});
    CHECK(rep["result"]["stumps"] == json{"b"});
}

TEST_CASE("horn complement on the Z/2 example") {
    Run r = run({"horn", data("z2_horn.json"), "--edges", "Gb", "--complement"});
    REQUIRE(r.code == 0);
    json res = r.report()["result"];
    CHECK(res["complement"].size() == 4);
    CHECK(res["complement_count"] == 4);
    CHECK(res["oracle_agrees"] == true);
    // A square: the full tree over two faces over their common face.
    CHECK(res["hasse"].size() == 4);

    Run o = run({"orbital-horn", data("z2_horn.json"), "--edges", "Gb", "--complement"});
    REQUIRE(o.code == 0);
    CHECK(o.report()["result"]["complement"].size() == 8);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate", data("first_tree.json")}).code == 2);
    CHECK(run({"validate"}).code == 2);
    CHECK(run({"validate", data("no_such_file.json")}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"horn", data("z2_horn.json")}).code == 2);               // --edges missing
    CHECK(run({"horn", data("z2_horn.json"), "--edges", "zz"}).code == 2);
    CHECK(run({"certify", data("z2_horn.json"), "--kind", "bogus"}).code == 2);

    Run bad = run({"validate", data("bad_tree.json")});
    CHECK(bad.code == 1);
    CHECK(bad.report()["result"]["error"]["kind"] == "DuplicateChild");

    // A horn at a non-inner edge is a checked failure, not an input error.
    Run leaf = run({"horn", data("z2_horn.json"), "--edges", "Ga"});
    CHECK(leaf.code == 1);
    CHECK(leaf.report()["result"]["error"]["kind"] == "NotInner");

    fs::path garbage = scratch("garbage.json");
    std::ofstream(garbage) << "{ not json";
    Run g = run({"validate", garbage.string()});
    CHECK(g.code == 2);
    CHECK(g.out.empty());
    CHECK_FALSE(g.err.empty());
}

TEST_CASE("certify writes a certificate that replays, and corruption is caught") {
    fs::path cert = scratch("orbital.json");
    Run c = run({"certify", data("z2_horn.json"), "--kind", "orbital_horn_to_full", "--edges", "Gb", "--out", cert.string()});
    REQUIRE(c.code == 0);
    CHECK(c.report()["result"]["step_count"] == 2);
    Run ok = run({"replay", cert.string()});
    CHECK(ok.code == 0);

    json j = dendro::io::load(cert.string());
    j["steps"].erase(j["steps"].begin());
    fs::path broken = scratch("broken.json");
    std::ofstream(broken) << j.dump(2);
    Run bad = run({"replay", broken.string()});
    CHECK(bad.code == 1);
    json rep = bad.report();
    CHECK(rep["result"]["error"]["kind"] == "NotAPushout");
    CHECK(rep["result"]["failed_step"] == 0);

    Run reduced = run({"certify", data("z2_stump.json"), "--kind", "segal_core", "--reduce"});
    CHECK(reduced.code == 0);
    CHECK(reduced.report()["result"]["single_orbit"] == true);
    json embedded = reduced.report()["result"]["certificate"];
    fs::path again = scratch("reduced.json");
    std::ofstream(again) << embedded.dump();
    CHECK(run({"replay", again.string()}).code == 0);
}

TEST_CASE("reports are deterministic") {
    std::vector<std::vector<std::string>> cmds{
        {"validate", data("quaternion_tree.json")},
        {"orbital-horn", data("z2_stump.json"), "--edges", "Gc", "--complement"},
        {"tensor-max", data("tensor_figure.json"), "--edges", "Gxi"},
        {"certify", data("z2_stump.json"), "--kind", "segal_core"},
        {"indexing-validate", data("sieve_trivial_graph.json")},
    };
    for (const auto& c : cmds) {
        Run a = run(c), b = run(c);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
    Run one = run({"lifting-suite", data("perturbed.json"), "--truncation", "2,2", "--jobs", "1"});
    Run four = run({"lifting-suite", data("perturbed.json"), "--truncation", "2,2", "--jobs", "4"});
    CHECK(one.out == four.out);
}

TEST_CASE("golden files round trip through parse and serialize") {
    for (const char* name : {"first_tree.json", "z2_horn.json", "z2_stump.json", "quaternion_tree.json"}) {
        json j = dendro::io::load(data(name));
        auto t = dendro::io::parse_gforest(j);
        auto again = dendro::io::parse_gforest(dendro::io::gforest_json(t));
        CHECK(dendro::same_labeled(t, again));
        CHECK(run({"validate", data(name)}).code == 0);
    }
    json g = dendro::io::load(data("quaternion_graft.json"));
    for (const char* k : {"r", "s", "expect"}) {
        auto t = dendro::io::parse_gforest(g[k]);
        CHECK(dendro::same_labeled(t, dendro::io::parse_gforest(dendro::io::gforest_json(t))));
    }
    // gu writes a forest that validate accepts and that reproduces the quaternion orbits.
    fs::path induced = scratch("induced.json");
    REQUIRE(run({"gu", data("gu_quaternion.json"), "--out", induced.string()}).code == 0);
    Run v = run({"quotient", induced.string()});
    CHECK(v.report()["result"]["edge_orbits"] == 4);
    CHECK(v.report()["result"]["vertices"] == 2);
}

TEST_CASE("one command per module operation") {
    CHECK(run({"faces", data("first_tree.json")}).code == 0);
    CHECK(run({"boundary", data("z2_stump.json")}).code == 0);
    CHECK(run({"segal-core", data("quaternion_tree.json")}).code == 0);

    Run f = run({"factorize", data("factorize_example.json")});
    CHECK(f.code == 0);
    CHECK(f.report()["result"]["degeneracy"]["target"] == "f(c)");

    Run q = run({"quotient", data("quaternion_tree.json")});
    CHECK(q.report()["result"]["edge_orbits"] == 4);
    CHECK(q.report()["result"]["vertices"] == 2);

    Run g = run({"graft", data("quaternion_graft.json")});
    CHECK(g.code == 0);
    CHECK(g.report()["result"]["matches_expected"] == true);

    Run t = run({"tensor-max", data("tensor_figure.json")});
    CHECK(t.report()["result"]["count"] == 5);
    CHECK(t.report()["result"]["fixed"] == 3);

    Run gen = run({"genuine-check", data("constant_q8.json"), "--truncation", "2,2"});
    CHECK(gen.code == 0);
    Run pert = run({"genuine-check", data("perturbed.json"), "--truncation", "2,2"});
    CHECK(pert.code == 1);
    CHECK_FALSE(pert.report()["witnesses"].empty());

    Run reedy = run({"reedy-check", data("z2_omega_op.json")});
    CHECK(reedy.code == 0);
    Run counter = run({"reedy-check", data("arrow_counterexample.json")});
    CHECK(counter.code == 1);
    CHECK(counter.report()["result"]["admissible"] == false);

    Run full = run({"indexing-validate", data("sieve_full.json")});
    CHECK(full.code == 0);
    Run unit = run({"indexing-validate", data("sieve_missing_unit.json")});
    CHECK(unit.code == 1);
    CHECK(unit.report()["result"]["failures"][0]["axiom"] == "unit");

    Run dot = run({"export-dot", data("first_tree.json")});
    CHECK(dot.code == 0);
    CHECK(dot.out.rfind("digraph", 0) == 0);
    CHECK(run({"export-dot", data("tensor_figure.json"), "--kind", "percolation"}).out.find("->") != std::string::npos);
    CHECK(run({"export-dot", data("z2_horn.json"), "--kind", "poset"}).code == 0);
}

TEST_CASE("human output renders tables") {
    Run r = run({"certify", data("z2_horn.json"), "--kind", "orbital_horn_to_full", "--edges", "Gb", "--human"});
    CHECK(r.code == 0);
    CHECK(r.out.find("pass: yes") != std::string::npos);
    CHECK(r.out.find("tree ") != std::string::npos);
    CHECK(r.out.find("----") != std::string::npos);
    CHECK(r.out.find('{') != std::string::npos);  // faces, not JSON
    CHECK(r.out.find("\"command\"") == std::string::npos);
}

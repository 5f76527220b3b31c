#include "dendro/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <regex>

#include "CLI11.hpp"
#include "dendro/io.hpp"

namespace dendro::cli {

namespace {

using io::json;

struct Options {
    std::string input;
    std::string group;
    std::string edges;
    std::string truncation;
    std::string out;
    int jobs = 1;
    bool human = false;

    bool complement = false;
    std::string to;
    std::string kind;
    std::string variant = "subsets";
    std::string mode = "standard";
    bool reduce = false;
    std::string dot;
    std::string adjacency;
    std::string leaf;
    std::string root;
    bool trivial_corollas = false;
};

struct Outcome {
    json result = json::object();
    bool pass = true;
    json witnesses = json::array();
    std::optional<std::string> raw;  // emitted verbatim instead of a report
};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

// Any failure while reading inputs is an input error.
template <class F>
auto parsing(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidInput) throw;
        throw Error(ErrorKind::InvalidInput, e.what());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, e.what());
    }
}

json with_group(json j, const Options& o) {
    if (o.group.empty() || !j.is_object() || j.contains("group")) return j;
    if (j.contains("edges")) return json{{"group", o.group}, {"tree", j}};
    j["group"] = o.group;
    return j;
}

json input(const Options& o) { return with_group(io::load(o.input), o); }

GForest input_gforest(const Options& o) {
    return parsing([&] { return io::parse_gforest(input(o)); });
}

const json& key(const json& j, const char* k) {
    if (!j.is_object() || !j.contains(k)) bad(std::string("missing field '") + k + "'");
    return j.at(k);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) bad("cannot write " + path);
    f << text;
}

std::pair<int, int> truncation(const Options& o, const json& j) {
    if (!o.truncation.empty()) {
        auto comma = o.truncation.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("");
            return {std::stoi(o.truncation.substr(0, comma)), std::stoi(o.truncation.substr(comma + 1))};
        } catch (const std::logic_error&) {
            bad("--truncation expects d,k");
        }
    }
    if (j.is_object() && j.contains("truncation")) {
        const json& t = j.at("truncation");
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_number_integer())
            bad("truncation must be [degree, arity]");
        return {t[0].get<int>(), t[1].get<int>()};
    }
    return {2, 2};
}

json faces_json(const std::vector<std::string>& names, const std::vector<Subtree>& fs) {
    json out = json::array();
    for (const auto& f : fs) out.push_back(format_face(names, f));
    return out;
}

// Largest faces first, then set order.
std::vector<Subtree> sorted_faces(std::vector<Subtree> fs) {
    std::stable_sort(fs.begin(), fs.end(), [](const Subtree& a, const Subtree& b) { return count(a.edges) > count(b.edges); });
    return fs;
}

std::vector<std::pair<int, int>> face_covers(Down down, const std::vector<Subtree>& fs) {
    const int n = static_cast<int>(fs.size());
    std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) less[i][j] = i != j && is_face_of(down, fs[i], fs[j]);
    return io::hasse(less);
}

json pairs_json(const std::vector<std::pair<int, int>>& ps) {
    json out = json::array();
    for (auto [a, b] : ps) out.push_back(json::array({a, b}));
    return out;
}

json error_json(const Error& e) {
    std::string msg = e.what();
    std::string kind(to_string(e.kind()));
    if (msg.rfind(kind + ": ", 0) == 0) msg = msg.substr(kind.size() + 2);
    return json{{"kind", kind}, {"message", msg}};
}

json map_json(const TreeMap& m) {
    json f = json::object();
    for (int e = 0; e < m.source.size(); ++e) f[m.source.name(e)] = m.target.name(m.edge_fn[e]);
    return json{{"source", format_tree(m.source)}, {"target", format_tree(m.target)}, {"map", f}};
}

// Commands

Outcome cmd_validate(const Options& o) {
    Outcome r;
    json j = parsing([&] { return input(o); });
    GForest t;
    try {
        t = io::parse_gforest(j);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidInput) throw;
        r.pass = false;
        r.result["error"] = error_json(e);
        r.witnesses.push_back(e.what());
        return r;
    }
    int total = 0;
    json comps = json::array();
    for (int c = 0; c < t.components(); ++c) {
        const Tree& tree = t.component(c);
        total += degree(tree);
        comps.push_back(json{{"root", tree.name(0)}, {"edges", tree.size()}, {"degree", degree(tree)}});
    }
    r.result["group_order"] = t.group().order();
    r.result["degree"] = total;
    r.result["components"] = comps;
    json orbits = json::array();
    for (EdgeSet o : t.edge_orbits()) orbits.push_back(io::edge_names(t.names(), o));
    r.result["orbits"] = orbits;
    r.result["is_gtree"] = t.is_gtree();
    if (t.components() == 1) {
        const Tree& tree = t.component(0);
        EdgeClasses ec = classify_edges(tree);
        r.result["root"] = tree.name(ec.root);
        r.result["leaves"] = io::edge_names(tree.names(), ec.leaves);
        r.result["inner"] = io::edge_names(tree.names(), ec.inner);
        r.result["stumps"] = io::edge_names(tree.names(), ec.stumps);
        std::set<std::string> gens;
        json gen_list = json::array();
        for (const auto& g : tree.generators()) {
            gens.insert(format_relation(tree, g));
            gen_list.push_back(format_relation(tree, g));
        }
        auto closure = broad_closure(tree);
        std::vector<std::string> composites;
        for (const auto& rel : closure) {
            if (rel.source.size() == 1 && rel.source[0] == rel.target) continue;
            auto s = format_relation(tree, rel);
            if (!gens.count(s)) composites.push_back(s);
        }
        std::sort(composites.begin(), composites.end());
        r.result["generators"] = gen_list;
        r.result["composites"] = composites;
        r.result["closure_size"] = closure.size();
    }
    return r;
}

Outcome cmd_faces(const Options& o) {
    Outcome r;
    GForest t = input_gforest(o);
    std::vector<Subtree> fs;
    if (t.group().order() == 1 && t.components() == 1) {
        for (const auto& fd : enumerate_faces(t.component(0))) fs.push_back(realize(t.component(0), fd));
    } else {
        fs = orbital_faces(t);
    }
    json list = json::array();
    for (const auto& f : fs)
        list.push_back(json{{"face", format_face(t.names(), f)}, {"isotropy", t.group().format(t.isotropy(f))}});
    r.result["count"] = fs.size();
    r.result["faces"] = list;
    return r;
}

enum class Sub { Boundary, Horn, OrbitalHorn, SegalCore };

Outcome cmd_complex(const Options& o, Sub which) {
    Outcome r;
    GForest t = input_gforest(o);
    EdgeSet e = 0;
    if (which == Sub::Horn || which == Sub::OrbitalHorn) {
        if (o.edges.empty()) bad("--edges is required");
        e = parsing([&] { return io::parse_edges(t, o.edges); });
        r.result["edges"] = io::edge_names(t.names(), e);
    }
    Complex c;
    std::vector<Subtree> gens;
    switch (which) {
        case Sub::Boundary: {
            c = boundary(t);
            for (int k = 0; k < t.components(); ++k)
                for (const auto& f : faces_of(t.down(), t.component_subtree(k)))
                    if (f != t.component_subtree(k)) gens.push_back(f);
            break;
        }
        case Sub::Horn:
            c = horn(t, e);
            gens = horn_generators(t, e);
            break;
        case Sub::OrbitalHorn:
            c = orbital_horn(t, e);
            gens = orbital_horn_generators(t, e);
            break;
        case Sub::SegalCore:
            c = segal_core(t);
            gens = segal_core_generators(t);
            break;
    }
    bool agrees = Complex::generated(c.ambient_ptr(), gens) == c;
    r.result["members"] = c.size();
    r.result["maximal"] = faces_json(t.names(), sorted_faces(c.maximal()));
    r.result["oracle_agrees"] = agrees;
    if (o.complement) {
        auto comp = sorted_faces(c.complement());
        r.result["complement_count"] = comp.size();
        r.result["complement"] = faces_json(t.names(), comp);
        r.result["hasse"] = pairs_json(face_covers(t.down(), comp));
    }
    r.pass = agrees;
    if (!agrees) r.witnesses.push_back("closed-form membership differs from the union of generators");
    return r;
}

Outcome cmd_factorize(const Options& o) {
    Outcome r;
    TreeMap m = parsing([&] {
        json j = input(o);
        TreeMap m;
        m.source = io::parse_tree(key(j, "source"));
        m.target = io::parse_tree(key(j, "target"));
        const json& f = key(j, "map");
        m.edge_fn.assign(m.source.size(), -1);
        for (const auto& [a, b] : f.items()) {
            int s = m.source.find(a), t = b.is_string() ? m.target.find(b.get<std::string>()) : -1;
            if (s < 0 || t < 0) bad("map refers to unknown edges");
            m.edge_fn[s] = t;
        }
        if (std::count(m.edge_fn.begin(), m.edge_fn.end(), -1)) bad("map must send every source edge");
        return m;
    });
    r.result["kind"] = std::string(to_string(classify(m)));
    Factorization f = factorize(m);
    r.result["degeneracy"] = map_json(f.degeneracy);
    r.result["inner"] = map_json(f.inner);
    r.result["outer"] = map_json(f.outer);
    bool agrees = compose(f.outer, compose(f.inner, f.degeneracy)).edge_fn == m.edge_fn;
    r.result["composite_agrees"] = agrees;
    r.pass = agrees;
    return r;
}

Outcome cmd_gu(const Options& o) {
    Outcome r;
    struct In {
        FiniteGroup g;
        ElemSet h;
        Tree t;
        std::vector<std::pair<int, Perm>> gens;
    };
    In in = parsing([&] {
        json j = input(o);
        In in;
        in.g = io::parse_group(key(j, "group"));
        in.h = j.contains("subgroup") ? io::parse_elements(in.g, j.at("subgroup")) : in.g.all();
        if (!in.g.is_subgroup(in.h)) bad("not a subgroup: " + in.g.format(in.h));
        in.t = io::parse_tree(key(j, "tree"));
        if (j.contains("generators"))
            for (const auto& [x, m] : j.at("generators").items()) {
                int e = in.g.find(x);
                if (e < 0) bad("unknown group element '" + x + "'");
                in.gens.emplace_back(e, io::parse_edge_map(in.t, m));
            }
        return in;
    });
    GForest f = induce(in.g, in.h, in.t, in.gens);
    r.result["components"] = f.components();
    r.result["edge_orbits"] = f.edge_orbits().size();
    r.result["is_gtree"] = f.is_gtree();
    if (!o.out.empty()) write_file(o.out, io::gforest_json(f).dump(2) + "\n");
    else r.result["forest"] = io::gforest_json(f);
    return r;
}

Outcome cmd_quotient(const Options& o) {
    Outcome r;
    GForest t = input_gforest(o);
    Quotient q = quotient(t);
    r.result["edge_orbits"] = q.tree.size();
    r.result["vertices"] = count(q.tree.all() & ~q.tree.leaves());
    r.result["degree"] = degree(q.tree);
    r.result["tree"] = io::tree_json(q.tree);
    json orbits = json::object();
    for (int e = 0; e < q.tree.size(); ++e) orbits[q.tree.name(e)] = io::edge_names(t.names(), q.orbit_of_edge[e]);
    r.result["orbits"] = orbits;
    return r;
}

Outcome cmd_graft(const Options& o) {
    Outcome r;
    json j = parsing([&] { return input(o); });
    GForest a, b;
    std::optional<GForest> expect;
    int leaf = -1, root = -1;
    parsing([&] {
        a = io::parse_gforest(with_group(key(j, "r"), o));
        b = io::parse_gforest(with_group(key(j, "s"), o));
        if (j.contains("expect")) expect = io::parse_gforest(with_group(j.at("expect"), o));
        std::string l = !o.leaf.empty() ? o.leaf : key(j, "leaf").get<std::string>();
        std::string s = !o.root.empty() ? o.root : key(j, "root").get<std::string>();
        leaf = a.find(l);
        root = b.find(s);
        if (leaf < 0 || root < 0) bad("unknown grafting edge");
        return 0;
    });
    GForest g = graft(a, b, leaf, root);
    r.result["components"] = g.components();
    r.result["edges"] = g.size();
    if (expect) {
        bool same = same_labeled(g, *expect);
        r.result["matches_expected"] = same;
        r.pass = same;
        if (!same) r.witnesses.push_back("grafted forest differs from the expected one");
    }
    if (!o.out.empty()) write_file(o.out, io::gforest_json(g).dump(2) + "\n");
    else r.result["forest"] = io::gforest_json(g);
    return r;
}

TensorMode tensor_mode(const Options& o) {
    if (o.mode == "standard") return TensorMode::Standard;
    if (o.mode == "reversed") return TensorMode::Reversed;
    bad("--mode is standard or reversed");
}

std::pair<GForest, GForest> tensor_factors(const Options& o) {
    return parsing([&] {
        json j = input(o);
        return std::pair{io::parse_gforest(with_group(key(j, "s"), o)), io::parse_gforest(with_group(key(j, "t"), o))};
    });
}

json conditions_json(const CharReport& rep, Outcome& r) {
    json out = json::array();
    for (const auto& c : rep.conditions) {
        out.push_back(json{{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
        if (!c.pass) {
            r.pass = false;
            r.witnesses.push_back(c.name + ": " + c.witness);
        }
    }
    return out;
}

Outcome cmd_tensor_max(const Options& o) {
    Outcome r;
    auto [s, t] = tensor_factors(o);
    TensorMode mode = tensor_mode(o);
    TensorProduct p(s, t);
    PercolationPoset poset = maximal_subtrees(p, mode);
    const auto& names = p.ambient()->names;
    json elems = json::array();
    int fixed = 0;
    for (std::size_t i = 0; i < poset.elements.size(); ++i) {
        const auto& el = poset.elements[i];
        elems.push_back(json{{"edges", io::edge_names(names, el.tree.edges)},
                             {"leaves", io::edge_names(names, el.tree.leaves)},
                             {"t_vertices", io::edge_names(names, el.t_vertices)}});
        bool is_fixed = true;
        for (const auto& g : poset.act) is_fixed = is_fixed && g[i] == static_cast<int>(i);
        fixed += is_fixed;
    }
    json action = json::object();
    for (int g = 0; g < p.ambient()->group.order(); ++g) action[p.ambient()->group.name(g)] = poset.act[g];
    json order = json::array();
    for (std::size_t i = 0; i < poset.less.size(); ++i)
        for (std::size_t k = 0; k < poset.less.size(); ++k)
            if (poset.less[i][k]) order.push_back(json::array({i, k}));
    auto covers = io::hasse(poset.less);
    r.result["count"] = poset.elements.size();
    r.result["fixed"] = fixed;
    r.result["elements"] = elems;
    r.result["action"] = action;
    r.result["generating"] = pairs_json(poset.generating);
    r.result["order"] = order;
    r.result["hasse"] = pairs_json(covers);
    if (!o.edges.empty()) {
        EdgeSet g_xi = parsing([&] { return io::parse_edges(t, o.edges); });
        TensorCheck check = verify_tensor_characteristic(s, t, g_xi, mode, true);
        r.result["conditions"] = conditions_json(check.report, r);
        if (check.certificate) {
            bool replays = true;
            try {
                replay(*check.certificate);
            } catch (const Error& e) {
                replays = false;
                r.witnesses.push_back(e.what());
            }
            r.result["filtration_steps"] = check.certificate->steps.size();
            r.result["replays"] = replays;
            r.pass = r.pass && replays;
        }
    }
    if (!o.dot.empty()) write_file(o.dot, io::percolation_dot(p, poset));
    if (!o.adjacency.empty()) {
        std::string adj;
        for (std::size_t i = 0; i < poset.elements.size(); ++i) {
            adj += std::to_string(i) + ":";
            for (auto [a, b] : covers)
                if (a == static_cast<int>(i)) adj += " " + std::to_string(b);
            adj += "\n";
        }
        write_file(o.adjacency, adj);
    }
    return r;
}

HornVariant horn_variant(const Options& o) {
    if (o.variant == "subsets") return HornVariant::Subsets;
    if (o.variant == "chain") return HornVariant::Chain;
    bad("--variant is subsets or chain");
}

json steps_json(const Certificate& c) {
    const Ambient& a = *c.ambient;
    json out = json::array();
    for (const auto& st : c.steps)
        out.push_back(json{{"tree", format_face(a.names, st.tree)},
                           {"K", a.group.format(st.isotropy)},
                           {"xi", io::edge_names(a.names, st.xi)}});
    return out;
}

Outcome cmd_certify(const Options& o) {
    Outcome r;
    if (o.kind.empty()) bad("--kind is required");
    CertifyKind kind = parse_certify_kind(o.kind);
    Certificate cert;
    auto edges = [&](const GForest& t, const std::string& spec, const char* flag) {
        if (spec.empty()) bad(std::string(flag) + " is required for " + o.kind);
        return parsing([&] { return io::parse_edges(t, spec); });
    };
    switch (kind) {
        case CertifyKind::GeneratingReduction:
            cert = generating_reduction(parsing([&] { return io::parse_certificate(io::load(o.input)); }));
            break;
        case CertifyKind::CoverInclusion: {
            GForest t;
            std::vector<Subtree> a, b;
            parsing([&] {
                json j = input(o);
                t = io::parse_gforest(with_group(key(j, "ambient"), o));
                for (const auto& f : key(j, "a")) a.push_back(io::parse_face(t, f));
                for (const auto& f : key(j, "b")) b.push_back(io::parse_face(t, f));
                return 0;
            });
            auto amb = ambient_of(t);
            cert = certify_cover(t, Complex::generated(amb, a), Complex::generated(amb, b));
            break;
        }
        default: {
            GForest t = input_gforest(o);
            if (kind == CertifyKind::SegalCore) cert = certify_segal_core(t);
            else if (kind == CertifyKind::OrbitalHornToFull) cert = certify_orbital_horn(t, edges(t, o.edges, "--edges"));
            else if (kind == CertifyKind::HornToHorn)
                cert = certify_horn_to_horn(t, edges(t, o.edges, "--edges"), edges(t, o.to, "--to"), horn_variant(o));
            else cert = certify_orbital_to_orbital(t, edges(t, o.edges, "--edges"), edges(t, o.to, "--to"));
        }
    }
    if (o.reduce) cert = generating_reduction(cert);
    bool replays = true;
    try {
        replay(cert);
    } catch (const Error& e) {
        replays = false;
        r.witnesses.push_back(e.what());
    }
    bool single = std::all_of(cert.steps.begin(), cert.steps.end(),
                              [&](const HornStep& s) { return is_single_orbit(*cert.ambient, s); });
    r.result["kind"] = o.kind;
    r.result["source"] = cert.source.size();
    r.result["target"] = cert.target.size();
    r.result["step_count"] = cert.steps.size();
    r.result["steps"] = steps_json(cert);
    r.result["single_orbit"] = single;
    r.result["replays"] = replays;
    r.pass = replays;
    json cj = io::certificate_json(cert, o.kind);
    if (!o.out.empty()) write_file(o.out, cj.dump(2) + "\n");
    else r.result["certificate"] = cj;
    return r;
}

Outcome cmd_replay(const Options& o) {
    Outcome r;
    Certificate cert = parsing([&] { return io::parse_certificate(io::load(o.input)); });
    r.result["step_count"] = cert.steps.size();
    try {
        Complex done = replay(cert);
        r.result["target"] = done.size();
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotAPushout && e.kind() != ErrorKind::VerificationFailed) throw;
        r.pass = false;
        r.result["error"] = error_json(e);
        std::smatch m;
        std::string msg = e.what();
        if (e.kind() == ErrorKind::NotAPushout && std::regex_search(msg, m, std::regex("step (\\d+)")))
            r.result["failed_step"] = std::stoi(m[1]);
        r.witnesses.push_back(msg);
    }
    return r;
}

struct PresheafInput {
    std::shared_ptr<const Presheaf> y;
    Truncation tr;
};

PresheafInput presheaf_input(const Options& o) {
    return parsing([&] {
        json j = input(o);
        PresheafInput in;
        in.y = io::parse_presheaf(j);
        auto [d, k] = truncation(o, j);
        in.tr = Truncation{d, k, in.y->group()};
        return in;
    });
}

Outcome cmd_genuine(const Options& o) {
    Outcome r;
    auto in = presheaf_input(o);
    SegalReport rep = strict_segal_check(*in.y, in.tr, o.jobs);
    r.result["truncation"] = json::array({in.tr.degree, in.tr.arity});
    r.result["checked"] = rep.checked;
    json fails = json::array();
    for (const auto& f : rep.failures) {
        fails.push_back(json{{"tree", f.tree}, {"witness", f.witness}});
        r.witnesses.push_back(f.tree + ": " + f.witness);
    }
    r.result["failures"] = fails;
    r.pass = rep.pass;
    return r;
}

Outcome cmd_lifting(const Options& o) {
    Outcome r;
    auto in = presheaf_input(o);
    LiftingSuite s = lifting_equivalence_suite(*in.y, in.tr, o.jobs);
    r.result["truncation"] = json::array({in.tr.degree, in.tr.arity});
    r.result["trees"] = s.trees;
    r.result["segal"] = s.segal;
    r.result["generating"] = s.generating;
    r.result["horns"] = s.horns;
    r.result["orbital"] = s.orbital;
    r.result["all_equal"] = s.all_equal();
    for (const auto& w : s.witnesses) r.witnesses.push_back(w);
    r.pass = s.all_equal();
    return r;
}

Outcome cmd_reedy(const Options& o) {
    Outcome r;
    json j = parsing([&] { return io::load(o.input); });
    GenReedyCat c = parsing([&] { return io::parse_category(with_group(j.contains("category") ? j.at("category") : j, o)); });
    r.result["objects"] = c.object_count();
    r.result["arrows"] = c.arrow_count();
    ReedyReport rep = validate_gen_reedy(c);
    json axioms = json::array();
    for (const auto& a : rep.axioms) {
        axioms.push_back(json{{"name", a.name}, {"pass", a.pass}, {"witness", a.witness}});
        if (!a.pass) r.witnesses.push_back("axiom " + a.name + ": " + a.witness);
    }
    r.result["axioms"] = axioms;
    r.pass = rep.ok();
    if (j.contains("families")) {
        auto fams = parsing([&] { return io::parse_families(c, j.at("families")); });
        AdmissibleCheck adm = check_admissible(c, fams);
        r.result["admissible"] = adm.pass;
        r.result["admissible_witness"] = adm.witness;
        if (!adm.pass) r.witnesses.push_back(adm.witness);
        r.pass = r.pass && adm.pass;
    }
    if (j.contains("generator")) {
        int obj = -1;
        ArrowGroup h;
        parsing([&] {
            const json& g = j.at("generator");
            obj = c.find_object(key(g, "object").get<std::string>());
            if (obj < 0) bad("unknown object");
            if (g.contains("subgroup"))
                for (const auto& a : g.at("subgroup")) {
                    int f = c.find_arrow(a.get<std::string>());
                    if (f < 0) bad("unknown arrow " + a.get<std::string>());
                    h.push_back(f);
                }
            if (h.empty()) h.push_back(c.identity[obj]);
            std::sort(h.begin(), h.end());
            return 0;
        });
        NatTrans m = generator_object(c, obj, h);
        json sizes = json::array();
        for (int x = 0; x < c.object_count(); ++x)
            sizes.push_back(json{{"object", c.objects[x]}, {"source", m.source.size[x]}, {"target", m.target.size[x]}});
        bool inj = is_injective(m);
        r.result["generator"] = json{{"object", c.objects[obj]}, {"injective", inj}, {"sizes", sizes}};
        r.pass = r.pass && inj;
    }
    return r;
}

Outcome cmd_indexing(const Options& o) {
    Outcome r;
    bool trivial = o.trivial_corollas;
    SieveSpec s = parsing([&] {
        json j = input(o);
        trivial = trivial || j.value("require_trivial_corollas", false);
        std::optional<std::pair<int, int>> tr;
        if (!o.truncation.empty()) tr = truncation(o, json::object());
        return io::parse_sieve(j, tr);
    });
    IndexingCheck check = validate_weak_indexing(s, trivial, o.jobs);
    json members = json::array();
    for (int c = 0; c < s.classes->size(); ++c)
        if (s.member[c]) members.push_back(s.classes->describe(c));
    json fails = json::array();
    for (const auto& f : check.failures) {
        fails.push_back(json{{"axiom", f.axiom}, {"witness", f.witness}});
        r.witnesses.push_back(f.axiom + ": " + f.witness);
    }
    GraphFamilies gf = to_graph_families(s);
    AdmissibleCheck adm = check_admissible(gf.category, gf.families);
    bool round_trip = from_graph_families(s.classes->truncation(), gf).member == s.member;
    const Truncation& tr = s.classes->truncation();
    r.result["truncation"] = json::array({tr.degree, tr.arity});
    r.result["classes"] = s.classes->size();
    r.result["members"] = s.count();
    r.result["member_classes"] = members;
    r.result["failures"] = fails;
    r.result["admissible"] = adm.pass;
    r.result["admissible_witness"] = adm.witness;
    r.result["round_trip"] = round_trip;
    r.pass = check.pass && adm.pass && round_trip;
    if (check.pass && !adm.pass) r.witnesses.push_back(adm.witness);
    if (!round_trip) r.witnesses.push_back("graph families do not recover the sieve");
    return r;
}

Outcome cmd_export_dot(const Options& o) {
    Outcome r;
    std::string kind = o.kind.empty() ? "tree" : o.kind;
    std::string dot;
    if (kind == "tree") {
        GForest t = input_gforest(o);
        dot = t.components() == 1 && t.group().order() == 1 ? io::tree_dot(t.component(0)) : io::gforest_dot(t);
    } else if (kind == "poset") {
        Complex c = parsing([&] {
            json j = input(o);
            if (j.contains("maximal")) return io::parse_complex(j);
            return Complex::full(ambient_of(io::parse_gforest(j)));
        });
        std::vector<Subtree> fs(c.members().begin(), c.members().end());
        std::vector<std::string> labels;
        for (const auto& f : fs) labels.push_back(format_face(c.ambient().names, f));
        dot = io::poset_dot("faces", labels, face_covers(c.ambient().down, fs));
    } else if (kind == "percolation") {
        auto [s, t] = tensor_factors(o);
        TensorProduct p(s, t);
        dot = io::percolation_dot(p, maximal_subtrees(p, tensor_mode(o)));
    } else {
        bad("--kind is tree, poset or percolation");
    }
    if (!o.out.empty()) {
        write_file(o.out, dot);
        r.result["written"] = o.out;
    } else {
        r.raw = dot;
    }
    return r;
}

// Human rendering

std::string cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); })) {
        std::string out;
        for (const auto& x : v) out += (out.empty() ? "" : ", ") + cell(x);
        return out.empty() ? "-" : out;
    }
    return v.dump();
}

bool flat(const json& v) { return v.is_primitive() || (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); })); }

void render(const json& j, std::ostream& out, const std::string& indent) {
    for (const auto& [k, v] : j.items()) {
        if (flat(v) && (v.is_primitive() || cell(v).size() <= 100)) {
            out << indent << k << ": " << cell(v) << "\n";
        } else if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& x) {
                       return x.is_object() && std::all_of(x.begin(), x.end(), [](const json& y) { return flat(y); });
                   })) {
            std::vector<std::string> cols;
            for (const auto& [c, _] : v[0].items()) cols.push_back(c);
            std::vector<std::size_t> width;
            for (const auto& c : cols) width.push_back(c.size());
            for (const auto& row : v)
                for (std::size_t i = 0; i < cols.size(); ++i)
                    width[i] = std::max(width[i], cell(row.value(cols[i], json())).size());
            out << indent << k << ":\n";
            auto line = [&](const std::vector<std::string>& cells) {
                out << indent << "  ";
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    out << cells[i];
                    if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size() + 2, ' ');
                }
                out << "\n";
            };
            line(cols);
            std::vector<std::string> rule;
            for (auto w : width) rule.push_back(std::string(w, '-'));
            line(rule);
            for (const auto& row : v) {
                std::vector<std::string> cells;
                for (const auto& c : cols) cells.push_back(cell(row.value(c, json())));
                line(cells);
            }
        } else if (v.is_object()) {
            out << indent << k << ":\n";
            render(v, out, indent + "  ");
        } else {
            out << indent << k << ":\n";
            for (const auto& x : v) out << indent << "  " << cell(x) << "\n";
        }
    }
}

void emit(const json& report, bool human, std::ostream& out) {
    if (!human) {
        out << report.dump(2) << "\n";
        return;
    }
    out << "command: " << report["command"].get<std::string>() << "\n";
    out << "input: " << report["input"].get<std::string>() << "\n";
    render(report["result"], out, "  ");
    out << "pass: " << (report["pass"].get<bool>() ? "yes" : "no") << "\n";
    for (const auto& w : report["witnesses"]) out << "witness: " << w.get<std::string>() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Equivariant dendroidal combinatorics", "dendro"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--group", o.group, "Group for inputs that do not name one");
    app.add_option("--edges", o.edges, "Edge names, with Gx for the orbit of x");
    app.add_option("--truncation", o.truncation, "Degree and arity bound d,k");
    app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--human", o.human, "Render tables instead of JSON");
    app.add_option("--out", o.out, "Write the produced artifact to this file");

    using Cmd = std::function<Outcome(const Options&)>;
    std::map<std::string, Cmd> cmds;
    auto sub = [&](const std::string& name, const std::string& help, Cmd cmd) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("input", o.input, "Input file")->required();
        cmds[name] = std::move(cmd);
        return s;
    };
    sub("validate", "Validate a tree or G-forest and list its broad relations", cmd_validate);
    sub("faces", "List the faces of a tree or the orbital faces of a G-tree", cmd_faces);
    sub("boundary", "Boundary subcomplex", [](const Options& o) { return cmd_complex(o, Sub::Boundary); })
        ->add_flag("--complement", o.complement, "List the missing faces");
    sub("horn", "Horn at --edges", [](const Options& o) { return cmd_complex(o, Sub::Horn); })
        ->add_flag("--complement", o.complement, "List the missing faces");
    sub("orbital-horn", "Orbital horn at --edges", [](const Options& o) { return cmd_complex(o, Sub::OrbitalHorn); })
        ->add_flag("--complement", o.complement, "List the missing faces");
    sub("segal-core", "Segal core", [](const Options& o) { return cmd_complex(o, Sub::SegalCore); })
        ->add_flag("--complement", o.complement, "List the missing faces");
    sub("factorize", "Classify and factor a tree map", cmd_factorize);
    sub("gu", "Induce a G-tree from an H-tree", cmd_gu);
    sub("quotient", "Orbital representation of a G-forest", cmd_quotient);
    auto* graft_cmd = sub("graft", "Graft two G-forests along a leaf orbit", cmd_graft);
    graft_cmd->add_option("--leaf", o.leaf, "Leaf of r");
    graft_cmd->add_option("--root", o.root, "Component root of s");
    auto* tensor_cmd = sub("tensor-max", "Percolation poset of a tensor product", cmd_tensor_max);
    tensor_cmd->add_option("--mode", o.mode, "standard or reversed");
    tensor_cmd->add_option("--dot", o.dot, "Write the Hasse diagram as DOT");
    tensor_cmd->add_option("--adjacency", o.adjacency, "Write the covering relation as an adjacency list");
    auto* certify_cmd = sub("certify", "Build a horn filtration certificate", cmd_certify);
    certify_cmd->add_option("--kind", o.kind, "Certificate kind")->required();
    certify_cmd->add_option("--to", o.to, "Target horn edges");
    certify_cmd->add_option("--variant", o.variant, "subsets or chain");
    certify_cmd->add_flag("--reduce", o.reduce, "Split steps into single-orbit horns");
    sub("replay", "Check a certificate step by step", cmd_replay);
    sub("genuine-check", "Strict Segal condition on a truncation", cmd_genuine);
    sub("lifting-suite", "Compare the four strict lifting conditions", cmd_lifting);
    sub("reedy-check", "Generalized Reedy axioms, admissibility and generators", cmd_reedy);
    sub("indexing-validate", "Weak indexing system axioms", cmd_indexing)
        ->add_flag("--require-trivial-corollas", o.trivial_corollas, "Also require every G/G . C_n");
    sub("export-dot", "Graphviz export of trees, face posets and percolation posets", cmd_export_dot)
        ->add_option("--kind", o.kind, "tree, poset or percolation");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    json report{{"command", name}, {"input", o.input}};
    Outcome r;
    try {
        r = cmds.at(name)(o);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidInput) {
            err << "dendro " << name << ": " << e.what() << "\n";
            return 2;
        }
        r = Outcome{};
        r.pass = false;
        r.result["error"] = error_json(e);
        r.witnesses.push_back(e.what());
    } catch (const std::exception& e) {
        err << "dendro " << name << ": " << e.what() << "\n";
        return 2;
    }
    if (r.raw) {
        out << *r.raw;
        return 0;
    }
    report["result"] = r.result;
    report["pass"] = r.pass;
    report["witnesses"] = r.witnesses;
    emit(report, o.human, out);
    return r.pass ? 0 : 1;
}

}  // namespace dendro::cli

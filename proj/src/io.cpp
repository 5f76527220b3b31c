#include "dendro/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace dendro::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string str(const json& j, const char* what) {
    if (!j.is_string()) bad(std::string(what) + " must be a string");
    return j.get<std::string>();
}

int integer(const json& j, const char* what) {
    if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
    return j.get<int>();
}

std::vector<std::string> strings(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be a list");
    std::vector<std::string> out;
    for (const auto& x : j) out.push_back(str(x, what));
    return out;
}

int edge_index(const std::vector<std::string>& names, const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) bad("unknown edge '" + n + "'");
    return static_cast<int>(it - names.begin());
}

EdgeSet edge_set(const std::vector<std::string>& names, const json& j, const char* what) {
    EdgeSet s = 0;
    for (const auto& n : strings(j, what)) s |= bit(edge_index(names, n));
    return s;
}

int element(const FiniteGroup& g, const json& j) {
    std::string n = str(j, "group element");
    auto it = std::find(g.names().begin(), g.names().end(), n);
    if (it == g.names().end()) bad("unknown group element '" + n + "'");
    return static_cast<int>(it - g.names().begin());
}

ElemSet elements(const FiniteGroup& g, const json& j) {
    if (!j.is_array()) bad("subgroup must be a list of elements");
    ElemSet s = 0;
    for (const auto& x : j) s |= bit(element(g, x));
    return s;
}

Perm identity_perm(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

json subtree_raw(const std::vector<std::string>& names, const Subtree& s) {
    return json{{"edges", edge_names(names, s.edges)}, {"leaves", edge_names(names, s.leaves)}};
}

Subtree parse_subtree_raw(const std::vector<std::string>& names, const json& j) {
    return {edge_set(names, field(j, "edges"), "edges"), edge_set(names, field(j, "leaves"), "leaves")};
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        bad(path + ": " + e.what());
    }
}

FiniteGroup parse_group(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto cross = s.find(" x ");
        if (cross != std::string::npos)
            return FiniteGroup::product(parse_group(json(s.substr(0, cross))), parse_group(json(s.substr(cross + 3))));
        if (s == "trivial" || s == "1") return FiniteGroup::trivial();
        if (s == "Q8") return FiniteGroup::quaternion();
        try {
            if (s.rfind("Z/", 0) == 0) return FiniteGroup::cyclic(std::stoi(s.substr(2)));
            if (s.rfind("S", 0) == 0 && s.size() > 1) return FiniteGroup::symmetric(std::stoi(s.substr(1)));
        } catch (const std::logic_error&) {
        }
        bad("unknown group '" + s + "'");
    }
    auto names = strings(field(j, "elements"), "elements");
    const json& rows = field(j, "table");
    if (!rows.is_array()) bad("table must be a list of rows");
    std::vector<std::vector<int>> table;
    for (const auto& row : rows) {
        if (!row.is_array()) bad("table rows must be lists");
        std::vector<int> r;
        for (const auto& x : row) r.push_back(x.is_string() ? edge_index(names, x.get<std::string>()) : integer(x, "entry"));
        table.push_back(std::move(r));
    }
    return FiniteGroup::from_table(std::move(names), std::move(table));
}

json group_json(const FiniteGroup& g) {
    json rows = json::array();
    for (int a = 0; a < g.order(); ++a) {
        json row = json::array();
        for (int b = 0; b < g.order(); ++b) row.push_back(g.name(g.mul(a, b)));
        rows.push_back(row);
    }
    return json{{"elements", g.names()}, {"table", rows}};
}

ElemSet parse_elements(const FiniteGroup& g, const json& j) { return elements(g, j); }

Perm parse_edge_map(const Tree& t, const json& j) {
    if (!j.is_object()) bad("edge map must map edges to edges");
    Perm p = identity_perm(t.size());
    for (const auto& [from, to] : j.items()) {
        int a = t.find(from), b = t.find(str(to, "edge"));
        if (a < 0 || b < 0) bad("unknown edge in edge map");
        p[a] = b;
    }
    return p;
}

Tree parse_tree(const json& j) {
    RawTree raw;
    raw.edges = strings(field(j, "edges"), "edges");
    if (j.contains("root")) raw.root = str(j.at("root"), "root");
    const json& v = field(j, "vertices");
    if (!v.is_object()) bad("vertices must map edges to child lists");
    for (const auto& [k, kids] : v.items()) raw.vertices.emplace_back(k, strings(kids, "children"));
    return validate_tree(raw);
}

json tree_json(const Tree& t) {
    RawTree raw = t.raw();
    json v = json::object();
    for (const auto& [k, kids] : raw.vertices) v[k] = kids;
    return json{{"edges", raw.edges}, {"root", raw.root}, {"vertices", v}};
}

GForest parse_gforest(const json& j) {
    if (j.contains("edges")) return GForest::trivial(parse_tree(j));
    FiniteGroup g = parse_group(j.contains("group") ? j.at("group") : json("trivial"));
    std::vector<RawTree> raws;
    if (j.contains("tree")) raws.push_back(parse_tree(j.at("tree")).raw());
    else {
        const json& comps = field(j, "components");
        if (!comps.is_array() || comps.empty()) bad("components must be a nonempty list");
        for (const auto& c : comps) raws.push_back(parse_tree(c).raw());
    }
    Forest forest = Forest::validate(raws);
    std::vector<std::string> names;
    for (const auto& c : forest.components)
        for (const auto& n : c.names()) names.push_back(n);
    std::vector<std::pair<int, Perm>> gens;
    if (j.contains("generators")) {
        const json& gj = j.at("generators");
        if (!gj.is_object()) bad("generators must map group elements to edge maps");
        for (const auto& [x, m] : gj.items()) {
            Perm p = identity_perm(static_cast<int>(names.size()));
            if (!m.is_object()) bad("generator action must map edges to edges");
            for (const auto& [from, to] : m.items()) p[edge_index(names, from)] = edge_index(names, str(to, "edge"));
            gens.emplace_back(element(g, json(x)), p);
        }
    }
    if (gens.empty()) {
        std::vector<Perm> act(g.order(), identity_perm(static_cast<int>(names.size())));
        return GForest(g, forest, act);
    }
    return GForest::with_generators(g, forest, gens);
}

json gforest_json(const GForest& t) {
    const FiniteGroup& g = t.group();
    json comps = json::array();
    for (int c = 0; c < t.components(); ++c) comps.push_back(tree_json(t.component(c)));
    json gens = json::object();
    ElemSet span = bit(g.identity());
    for (int x = 0; x < g.order(); ++x) {
        if (has(span, x)) continue;
        span = g.generated(span | bit(x));
        json m = json::object();
        for (int e = 0; e < t.size(); ++e)
            if (t.act(x, e) != e) m[t.name(e)] = t.name(t.act(x, e));
        gens[g.name(x)] = m;
    }
    return json{{"group", group_json(g)}, {"components", comps}, {"generators", gens}};
}

EdgeSet parse_edges(const GForest& t, const std::string& spec) {
    EdgeSet out = 0;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (item.empty()) continue;
        auto it = std::find(t.names().begin(), t.names().end(), item);
        if (it != t.names().end()) {
            out |= bit(static_cast<int>(it - t.names().begin()));
        } else if (item.size() > 1 && item[0] == 'G') {
            out |= t.orbit(edge_index(t.names(), item.substr(1)));
        } else {
            bad("unknown edge '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> edge_names(const std::vector<std::string>& names, EdgeSet s) {
    std::vector<std::string> out;
    for (int e : bits(s)) out.push_back(names[e]);
    return out;
}

Subtree parse_face(const GForest& t, const json& j) {
    if (j.contains("edges")) {
        Subtree s = parse_subtree_raw(t.names(), j);
        if (!is_face_of(t.down(), s, t.component_subtree(t.component_of(lowest(s.edges)))))
            bad("not a face of a component");
        return s;
    }
    int root = edge_index(t.names(), str(field(j, "root"), "root"));
    FaceDescriptor fd;
    fd.root = root;
    for (const auto& n : strings(field(j, "leaves"), "leaves")) fd.leaves.push_back(edge_index(t.names(), n));
    if (j.contains("removed")) fd.removed = edge_set(t.names(), j.at("removed"), "removed");
    return realize(t.down(), t.component_subtree(t.component_of(root)), fd);
}

json face_json(const GForest& t, const Subtree& s) {
    int root = subtree_root(t.down(), s);
    FaceDescriptor fd = describe(t.down(), t.component_subtree(t.component_of(root)), s);
    std::vector<std::string> leaves;
    for (int e : fd.leaves) leaves.push_back(t.name(e));
    return json{{"root", t.name(fd.root)}, {"leaves", leaves}, {"removed", edge_names(t.names(), fd.removed)}};
}

Complex parse_complex(const json& j) {
    GForest t = parse_gforest(field(j, "ambient"));
    std::vector<Subtree> gens;
    const json& m = field(j, "maximal");
    if (!m.is_array()) bad("maximal must be a list of faces");
    for (const auto& f : m) gens.push_back(parse_face(t, f));
    Complex c = Complex::generated(ambient_of(t), gens);
    if (!c.is_g_stable()) bad("complex is not G-stable");
    return c;
}

json ambient_json(const Ambient& a) {
    json down = json::object();
    for (int e = 0; e < a.size(); ++e) down[a.names[e]] = edge_names(a.names, a.down[e]);
    json act = json::object();
    for (int g = 0; g < a.group.order(); ++g) {
        std::vector<std::string> img;
        for (int e = 0; e < a.size(); ++e) img.push_back(a.names[a.act[g][e]]);
        act[a.group.name(g)] = img;
    }
    json tops = json::array();
    for (const auto& s : a.tops) tops.push_back(subtree_raw(a.names, s));
    return json{{"group", group_json(a.group)}, {"edges", a.names}, {"down", down}, {"action", act}, {"tops", tops}};
}

std::shared_ptr<const Ambient> parse_ambient(const json& j) {
    auto a = std::make_shared<Ambient>();
    a->group = parse_group(field(j, "group"));
    a->names = strings(field(j, "edges"), "edges");
    if (a->size() > kMaxEdges) bad("ambient has more than 64 edges");
    const json& down = field(j, "down");
    a->down.assign(a->size(), 0);
    for (int e = 0; e < a->size(); ++e) a->down[e] = edge_set(a->names, field(down, a->names[e].c_str()), "down");
    const json& act = field(j, "action");
    for (int g = 0; g < a->group.order(); ++g) {
        Perm p;
        for (const auto& n : strings(field(act, a->group.name(g).c_str()), "action")) p.push_back(edge_index(a->names, n));
        if (static_cast<int>(p.size()) != a->size()) bad("action of " + a->group.name(g) + " has the wrong length");
        a->act.push_back(std::move(p));
    }
    if (!is_homomorphism(a->group, a->act)) bad("ambient action is not a group action");
    for (const auto& s : field(j, "tops")) a->tops.push_back(parse_subtree_raw(a->names, s));
    return a;
}

json certificate_json(const Certificate& c, const std::string& kind) {
    const Ambient& a = *c.ambient;
    auto maximal = [&](const std::set<Subtree>& s) {
        json out = json::array();
        for (const auto& m : Complex(c.ambient, s).maximal()) out.push_back(subtree_raw(a.names, m));
        return out;
    };
    json steps = json::array();
    for (const auto& st : c.steps) {
        std::vector<std::string> k;
        for (int g : bits(st.isotropy)) k.push_back(a.group.name(g));
        auto local = subtree_tree(a.down, a.names, st.tree);
        std::vector<std::string> embedding;
        for (int e : local.to_ambient) embedding.push_back(a.names[e]);
        json step = subtree_raw(a.names, st.tree);
        steps.push_back(json{{"tree", step}, {"K", k}, {"xi", edge_names(a.names, st.xi)}, {"embedding", embedding}});
    }
    return json{{"kind", kind},
                {"ambient", ambient_json(a)},
                {"source", maximal(c.source)},
                {"target", maximal(c.target)},
                {"steps", steps}};
}

Certificate parse_certificate(const json& j) {
    Certificate c;
    c.ambient = parse_ambient(field(j, "ambient"));
    const auto& names = c.ambient->names;
    auto closure = [&](const json& list) {
        std::vector<Subtree> gens;
        for (const auto& s : list) gens.push_back(parse_subtree_raw(names, s));
        return Complex::generated(c.ambient, gens).members();
    };
    c.source = closure(field(j, "source"));
    c.target = closure(field(j, "target"));
    for (const auto& s : field(j, "steps")) {
        HornStep st;
        st.tree = parse_subtree_raw(names, field(s, "tree"));
        st.isotropy = elements(c.ambient->group, field(s, "K"));
        st.xi = edge_set(names, field(s, "xi"), "xi");
        c.steps.push_back(st);
    }
    return c;
}

std::shared_ptr<const SetOperad> parse_operad(const json& j) {
    std::string kind = str(field(j, "operad"), "operad");
    if (kind == "tree") {
        GForest t = parse_gforest(field(j, "tree"));
        return std::make_shared<TreeOperad>(t);
    }
    FiniteGroup g = parse_group(j.contains("group") ? j.at("group") : json("trivial"));
    auto flags = [&](const char* key) {
        std::vector<bool> out(g.order(), false);
        if (j.contains(key))
            for (const auto& x : j.at(key)) out[element(g, x)] = true;
        return out;
    };
    if (kind == "com") return std::make_shared<CommutativeOperad>(g);
    if (kind == "ass") return std::make_shared<AssociativeOperad>(g, flags("reverses"));
    if (kind == "cyclic") return std::make_shared<CyclicMonoidOperad>(integer(field(j, "n"), "n"), g, flags("negates"));
    if (kind == "max") return std::make_shared<MaxOperad>(g);
    bad("unknown operad '" + kind + "'");
}

std::shared_ptr<const Presheaf> parse_presheaf(const json& j) {
    if (j.contains("operad") && !j.contains("presheaf")) return nerve(parse_operad(j));
    std::string kind = str(field(j, "presheaf"), "presheaf");
    FiniteGroup g = parse_group(j.contains("group") ? j.at("group") : json("trivial"));
    if (kind == "constant") return std::make_shared<ConstantPresheaf>(integer(field(j, "n"), "n"), g);
    if (kind == "perturbed")
        return std::make_shared<PerturbedPresheaf>(integer(field(j, "n"), "n"), parse_tree(field(j, "at")), g);
    if (kind == "nerve") return nerve(parse_operad(field(j, "operad")));
    bad("unknown presheaf '" + kind + "'");
}

GenReedyCat parse_category(const json& j) {
    if (j.contains("builtin")) {
        std::string b = str(j.at("builtin"), "builtin");
        auto num = [&](const char* key, int dflt) { return j.contains(key) ? integer(j.at(key), key) : dflt; };
        FiniteGroup g = parse_group(j.contains("group") ? j.at("group") : json("trivial"));
        if (b == "delta") return delta(num("n", 3));
        if (b == "delta_op") return opposite(delta(num("n", 3)));
        if (b == "omega") return omega(num("degree", 2), num("arity", 2));
        if (b == "omega_op") return opposite(omega(num("degree", 2), num("arity", 2)));
        if (b == "g_times_omega_op") return product(group_category(g), opposite(omega(num("degree", 2), num("arity", 2))));
        if (b == "g_times_arrow") return g_times_arrow(g);
        bad("unknown builtin category '" + b + "'");
    }
    GenReedyCat c;
    for (const auto& o : field(j, "objects")) {
        c.objects.push_back(str(field(o, "name"), "object name"));
        c.degree.push_back(integer(field(o, "degree"), "degree"));
    }
    for (int r = 0; r < c.object_count(); ++r) {
        c.identity.push_back(r);
        c.arrows.push_back({r, r, "id" + c.objects[r], true, true});
    }
    auto object = [&](const json& x) {
        std::string n = str(x, "object");
        auto it = std::find(c.objects.begin(), c.objects.end(), n);
        if (it == c.objects.end()) bad("unknown object '" + n + "'");
        return static_cast<int>(it - c.objects.begin());
    };
    if (j.contains("arrows"))
        for (const auto& a : j.at("arrows"))
            c.arrows.push_back({object(field(a, "src")), object(field(a, "dst")), str(field(a, "name"), "arrow name"),
                                a.value("plus", false), a.value("minus", false)});
    const int n = c.arrow_count();
    c.comp.assign(n, std::vector<int>(n, -1));
    for (int f = 0; f < n; ++f) {
        c.comp[f][c.identity[c.arrows[f].src]] = f;
        c.comp[c.identity[c.arrows[f].dst]][f] = f;
    }
    auto arrow = [&](const json& x) {
        std::string name = str(x, "arrow");
        for (int f = 0; f < n; ++f)
            if (c.arrows[f].name == name) return f;
        bad("unknown arrow '" + name + "'");
    };
    if (j.contains("composites"))
        for (const auto& t : j.at("composites")) {
            if (!t.is_array() || t.size() != 3) bad("composites are [g, f, g o f] triples");
            c.comp[arrow(t[0])][arrow(t[1])] = arrow(t[2]);
        }
    check_category(c);
    return c;
}

std::vector<Family> parse_families(const GenReedyCat& c, const json& j) {
    std::vector<Family> out;
    if (j.is_string()) {
        std::string kind = j.get<std::string>();
        for (int r = 0; r < c.object_count(); ++r) {
            if (kind == "graph") out.push_back(graph_family(c, r));
            else if (kind == "all") out.push_back(all_subgroups_family(c, r));
            else if (kind == "trivial") out.push_back(trivial_family(c, r));
            else bad("unknown family kind '" + kind + "'");
        }
        return out;
    }
    if (!j.is_object()) bad("families must be a kind or a map from objects to subgroup lists");
    for (int r = 0; r < c.object_count(); ++r) {
        if (!j.contains(c.objects[r])) {
            out.push_back(trivial_family(c, r));
            continue;
        }
        Family f;
        for (const auto& sub : j.at(c.objects[r])) {
            ArrowGroup h;
            for (const auto& a : strings(sub, "subgroup")) h.push_back(c.find_arrow(a));
            std::sort(h.begin(), h.end());
            f.push_back(h);
        }
        out.push_back(f);
    }
    return out;
}

int parse_gtree_class(const GTreeClasses& cls, const json& j) {
    const FiniteGroup& g = cls.truncation().group;
    Tree user;
    bool corolla_form = false;
    if (j.value("stick", false)) user = stick();
    else if (j.contains("arity")) {
        user = corolla(integer(j.at("arity"), "arity"));
        corolla_form = true;
    } else user = parse_tree(field(j, "tree"));
    ElemSet h = j.contains("subgroup") ? elements(g, j.at("subgroup")) : g.all();
    if (!g.is_subgroup(h)) bad("not a subgroup: " + g.format(h));
    int u = cls.tree_index(user);
    if (u < 0) bad("tree outside the truncation: " + format_tree(user));
    auto isos = isomorphisms(user, cls.trees()[u]);
    const Perm& phi = isos.front();
    std::vector<std::pair<int, Perm>> gens;
    if (j.contains("action")) {
        for (const auto& [x, m] : j.at("action").items()) {
            Perm p = identity_perm(user.size());
            if (corolla_form) {
                if (!m.is_array() || static_cast<int>(m.size()) != user.size() - 1) bad("corolla action needs one entry per input");
                for (int i = 0; i + 1 < user.size(); ++i) p[1 + i] = 1 + integer(m[i], "input");
            } else {
                p = parse_edge_map(user, m);
            }
            Perm q(p.size());
            for (std::size_t e = 0; e < p.size(); ++e) q[phi[e]] = phi[p[e]];
            gens.emplace_back(element(g, json(x)), q);
        }
    }
    // Generators of h not listed act trivially.
    ElemSet span = bit(g.identity());
    for (const auto& [x, p] : gens) span = g.generated(span | bit(x));
    for (int x : bits(h))
        if (!has(span, x)) {
            gens.emplace_back(x, identity_perm(user.size()));
            span = g.generated(span | bit(x));
        }
    auto act = derive_action(g, user.size(), gens, h);
    std::vector<std::pair<int, Perm>> graph;
    for (int x : bits(h)) graph.emplace_back(x, act[x]);
    int idx = cls.find(u, graph);
    if (idx < 0) bad("not a G-tree of the truncation");
    return idx;
}

SieveSpec parse_sieve(const json& j, std::optional<std::pair<int, int>> truncation) {
    Truncation tr;
    tr.group = parse_group(j.contains("group") ? j.at("group") : json("trivial"));
    if (truncation) {
        tr.degree = truncation->first;
        tr.arity = truncation->second;
    } else {
        const json& t = field(j, "truncation");
        if (!t.is_array() || t.size() != 2) bad("truncation must be [degree, arity]");
        tr.degree = integer(t[0], "degree");
        tr.arity = integer(t[1], "arity");
    }
    SieveSpec s;
    if (j.value("full", false)) {
        s = SieveSpec::full(tr);
    } else {
        GTreeClasses probe(tr);
        std::vector<GTreeClass> corollas;
        for (const auto& c : field(j, "corollas")) {
            int idx = parse_gtree_class(probe, c);
            if (probe.trees()[probe[idx].tree].degree() != 1) bad("accepted signatures must be corollas");
            corollas.push_back(probe[idx]);
        }
        s = SieveSpec::from_corollas(tr, corollas);
    }
    if (j.contains("exclude"))
        for (const auto& x : j.at("exclude")) s.member[parse_gtree_class(*s.classes, x)] = false;
    return s;
}

std::string tree_dot(const Tree& t) {
    std::string out = "digraph tree {\n  rankdir=BT;\n  node [shape=plaintext];\n";
    for (int e = 0; e < t.size(); ++e) out += "  " + quote(t.name(e)) + ";\n";
    for (int e = 0; e < t.size(); ++e) {
        for (int k : t.children(e)) out += "  " + quote(t.name(k)) + " -> " + quote(t.name(e)) + ";\n";
        if (t.is_stump(e)) {
            std::string dot = quote(t.name(e) + "/stump");
            out += "  " + dot + " [shape=point, label=\"\"];\n  " + dot + " -> " + quote(t.name(e)) + " [arrowhead=none];\n";
        }
    }
    return out + "}\n";
}

std::string gforest_dot(const GForest& t) {
    std::string out = "digraph gforest {\n  rankdir=BT;\n  node [shape=plaintext];\n";
    for (int c = 0; c < t.components(); ++c) {
        const Tree& comp = t.component(c);
        out += "  subgraph cluster_" + std::to_string(c) + " {\n";
        for (int e = 0; e < comp.size(); ++e) out += "    " + quote(comp.name(e)) + ";\n";
        for (int e = 0; e < comp.size(); ++e)
            for (int k : comp.children(e)) out += "    " + quote(comp.name(k)) + " -> " + quote(comp.name(e)) + ";\n";
        out += "  }\n";
    }
    return out + "}\n";
}

std::string poset_dot(const std::string& name, const std::vector<std::string>& nodes,
                      const std::vector<std::pair<int, int>>& covers) {
    std::string out = "digraph " + quote(name) + " {\n  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) out += "  n" + std::to_string(i) + " [label=" + quote(nodes[i]) + "];\n";
    for (auto [a, b] : covers) out += "  n" + std::to_string(a) + " -> n" + std::to_string(b) + ";\n";
    return out + "}\n";
}

std::string percolation_dot(const TensorProduct& p, const PercolationPoset& poset) {
    std::vector<std::string> labels;
    for (const auto& el : poset.elements) {
        std::string l;
        for (int e : bits(el.t_vertices)) l += (l.empty() ? "" : " ") + p.ambient()->names[e];
        labels.push_back("T-vertices: " + (l.empty() ? std::string("none") : l));
    }
    return poset_dot("percolation", labels, hasse(poset.less));
}

std::vector<std::pair<int, int>> hasse(const std::vector<std::vector<bool>>& less) {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(less.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!less[i][j]) continue;
            bool cover = true;
            for (int k = 0; k < n && cover; ++k) cover = !(less[i][k] && less[k][j]);
            if (cover) out.emplace_back(i, j);
        }
    return out;
}

}  // namespace dendro::io

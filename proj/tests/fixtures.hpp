#pragma once

#include <string>
#include <vector>

#include "dendro/broadposet.hpp"

namespace fixtures {

inline dendro::Tree make_tree(std::vector<std::string> edges, std::string root,
                              std::vector<std::pair<std::string, std::vector<std::string>>> vertices) {
    return dendro::validate_tree({std::move(edges), std::move(root), std::move(vertices)});
}

// r -> d e f, d -> a b, f -> c, b a stump.
inline dendro::Tree first_tree() {
    return make_tree({"r", "d", "e", "f", "a", "b", "c"}, "r",
                     {{"r", {"d", "e", "f"}}, {"d", {"a", "b"}}, {"f", {"c"}}, {"b", {}}});
}

inline std::vector<int> ids(const dendro::Tree& t, const std::vector<std::string>& names) {
    std::vector<int> out;
    for (const auto& n : names) out.push_back(t.find(n));
    return out;
}

inline dendro::EdgeSet mask(const dendro::Tree& t, const std::vector<std::string>& names) {
    dendro::EdgeSet m = 0;
    for (const auto& n : names) m |= dendro::bit(t.find(n));
    return m;
}

}  // namespace fixtures

#include <map>

#include "dendro/equivariance.hpp"

namespace fixtures {

// A G-forest whose edges are labeled g.x for orbit representatives x; the action is
// g'.(g.x) = (g'g).x, where g.x names the edge up to the isotropy of x.
inline dendro::GForest labeled_gforest(const dendro::FiniteGroup& g, const std::vector<dendro::Tree>& comps,
                                       const std::map<std::string, std::pair<std::string, std::string>>& labels,
                                       const std::map<std::string, dendro::ElemSet>& iso) {
    dendro::Forest forest{comps};
    std::vector<std::string> names;
    for (const auto& c : comps)
        for (const auto& n : c.names()) names.push_back(n);
    auto find_edge = [&](int elem, const std::string& base) {
        for (std::size_t e = 0; e < names.size(); ++e) {
            const auto& [h, b] = labels.at(names[e]);
            if (b != base) continue;
            int he = g.find(h);
            if (dendro::has(iso.at(base), g.mul(g.inv(he), elem))) return static_cast<int>(e);
        }
        return -1;
    };
    std::vector<dendro::Perm> act(g.order(), dendro::Perm(names.size()));
    for (int x = 0; x < g.order(); ++x)
        for (std::size_t e = 0; e < names.size(); ++e) {
            const auto& [h, b] = labels.at(names[e]);
            act[x][e] = find_edge(g.mul(x, g.find(h)), b);
        }
    return dendro::GForest(g, forest, act);
}

inline dendro::ElemSet elems(const dendro::FiniteGroup& g, const std::vector<std::string>& names) {
    dendro::ElemSet s = 0;
    for (const auto& n : names) s |= dendro::bit(g.find(n));
    return s;
}

// The quaternion G-tree: two components d and i.d with isotropies a:1, b,c:<-1>, d:<j>.
inline dendro::GForest quaternion_tree() {
    auto q = dendro::FiniteGroup::quaternion();
    auto comp = [](const std::string& g, const std::string& h) {
        auto p = [](const std::string& pre, const std::string& x) { return pre + x; };
        std::string neg_g = g.empty() ? "-" : "-" + g;
        std::string neg_h = "-" + h;
        return make_tree({p(g, "d"), p(h, "c"), p(neg_h, "a"), p(h, "b"), p(h, "a"), p(g, "c"), p(neg_g, "a"),
                          p(g, "b"), p(g, "a")},
                         p(g, "d"),
                         {{p(g, "d"), {p(h, "c"), p(g, "c")}},
                          {p(h, "c"), {p(neg_h, "a"), p(h, "b"), p(h, "a")}},
                          {p(g, "c"), {p(neg_g, "a"), p(g, "b"), p(g, "a")}}});
    };
    // Component of d: d -> (jc, c). Component of id: id -> (kc, ic).
    dendro::Tree t0 = comp("", "j");
    dendro::Tree t1 = comp("i", "k");
    std::map<std::string, std::pair<std::string, std::string>> labels;
    for (const auto& t : {t0, t1})
        for (const auto& n : t.names()) {
            std::string base(1, n.back());
            std::string pre = n.substr(0, n.size() - 1);
            std::string elem = pre.empty() ? "1" : pre == "-" ? "-1" : pre;
            labels[n] = {elem, base};
        }
    return labeled_gforest(q, {t0, t1}, labels,
                           {{"a", elems(q, {"1"})},
                            {"b", elems(q, {"1", "-1"})},
                            {"c", elems(q, {"1", "-1"})},
                            {"d", elems(q, {"1", "-1", "j", "-j"})}});
}

inline std::map<std::string, std::pair<std::string, std::string>> sign_labels(const dendro::Tree& t) {
    std::map<std::string, std::pair<std::string, std::string>> labels;
    for (const auto& n : t.names()) {
        if (n[0] == '-') labels[n] = {"-1", n.substr(1)};
        else labels[n] = {"1", n};
    }
    return labels;
}

inline dendro::GForest sign_tree(const dendro::Tree& t, const std::vector<std::string>& fixed) {
    auto z2 = dendro::FiniteGroup::cyclic(2);
    std::map<std::string, dendro::ElemSet> iso;
    for (const auto& n : t.names()) iso[n[0] == '-' ? n.substr(1) : n] = dendro::bit(0);
    for (const auto& f : fixed) iso[f] = z2.all();
    return labeled_gforest(z2, {t}, sign_labels(t), iso);
}

// d -> c -> (-b, b), -b -> -a, b -> a; the sign swaps +-a and +-b.
inline dendro::GForest z2_horn_tree() {
    return sign_tree(make_tree({"d", "c", "-b", "b", "-a", "a"}, "d",
                               {{"d", {"c"}}, {"c", {"-b", "b"}}, {"-b", {"-a"}}, {"b", {"a"}}}),
                     {"d", "c"});
}

// r -> (-c, d, c), -c -> -a, c -> a, d -> (-b, b), with stumps -a and a.
inline dendro::GForest z2_stump_tree() {
    return sign_tree(make_tree({"r", "-c", "d", "c", "-a", "a", "-b", "b"}, "r",
                               {{"r", {"-c", "d", "c"}},
                                {"-c", {"-a"}},
                                {"c", {"a"}},
                                {"d", {"-b", "b"}},
                                {"-a", {}},
                                {"a", {}}}),
                     {"r", "d"});
}

inline dendro::Subtree face(const dendro::GForest& t, const std::vector<std::string>& edges,
                            const std::vector<std::string>& leaves) {
    dendro::Subtree s;
    for (const auto& n : edges) s.edges |= dendro::bit(t.find(n));
    for (const auto& n : leaves) s.leaves |= dendro::bit(t.find(n));
    return s;
}

inline dendro::EdgeSet gmask(const dendro::GForest& t, const std::vector<std::string>& names) {
    dendro::EdgeSet m = 0;
    for (const auto& n : names) m |= dendro::bit(t.find(n));
    return m;
}

}  // namespace fixtures

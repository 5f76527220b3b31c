#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dendro/indexing.hpp"
#include "dendro/tensor.hpp"
#include "json.hpp"

namespace dendro::io {

using json = nlohmann::ordered_json;

// Reads and parses a JSON file; InvalidInput on failure.
json load(const std::string& path);

// "trivial", "Z/n", "Q8", "S<n>", "A x B", or {"elements": [...], "table": [[...]]}.
FiniteGroup parse_group(const json& j);
json group_json(const FiniteGroup& g);
// A list of element names.
ElemSet parse_elements(const FiniteGroup& g, const json& j);

// {"edges": [...], "root": "...", "vertices": {"r": ["a", "b"], "b": []}}
Tree parse_tree(const json& j);
json tree_json(const Tree& t);
// {"e": "e'"} on the edges of t; unlisted edges are fixed.
Perm parse_edge_map(const Tree& t, const json& j);

// A tree, or {"group": ..., "components": [tree, ...], "generators": {"g": {"e": "e'"}}}
// with unlisted edges fixed by each generator.
GForest parse_gforest(const json& j);
json gforest_json(const GForest& t);

// Comma-separated edge names; "Gx" stands for the orbit of x when x names an edge.
EdgeSet parse_edges(const GForest& t, const std::string& spec);
std::vector<std::string> edge_names(const std::vector<std::string>& names, EdgeSet s);

// {"root", "leaves", "removed"} within the component of the root, or {"edges", "leaves"}.
Subtree parse_face(const GForest& t, const json& j);
json face_json(const GForest& t, const Subtree& s);

// {"ambient": gforest, "maximal": [face, ...]}; the complex is their face closure.
Complex parse_complex(const json& j);

json ambient_json(const Ambient& a);
std::shared_ptr<const Ambient> parse_ambient(const json& j);

json certificate_json(const Certificate& c, const std::string& kind);
Certificate parse_certificate(const json& j);

// {"presheaf": "constant" | "perturbed" | "nerve", ...} or {"operad": "com" | "ass" |
// "cyclic" | "max" | "tree", ...}.
std::shared_ptr<const Presheaf> parse_presheaf(const json& j);
std::shared_ptr<const SetOperad> parse_operad(const json& j);

// {"builtin": "delta" | "delta_op" | "omega" | "omega_op" | "g_times_omega_op" |
// "g_times_arrow", ...} or explicit objects, arrows and composites.
GenReedyCat parse_category(const json& j);
// "graph" | "all" | "trivial" or {object: [[arrow names], ...]}.
std::vector<Family> parse_families(const GenReedyCat& c, const json& j);

// {"group", "truncation": [d, k], "full" | "corollas", "exclude"}.
SieveSpec parse_sieve(const json& j, std::optional<std::pair<int, int>> truncation = std::nullopt);
// A G-tree class from {"tree" | "arity" | "stick", "subgroup", "action"}.
int parse_gtree_class(const GTreeClasses& cls, const json& j);

std::string tree_dot(const Tree& t);
std::string gforest_dot(const GForest& t);
// Hasse diagram of a finite poset.
std::string poset_dot(const std::string& name, const std::vector<std::string>& nodes,
                      const std::vector<std::pair<int, int>>& covers);
std::string percolation_dot(const TensorProduct& p, const PercolationPoset& poset);

// Covering pairs (i, j), i < j, of a strict order given as a relation matrix.
std::vector<std::pair<int, int>> hasse(const std::vector<std::vector<bool>>& less);

}  // namespace dendro::io

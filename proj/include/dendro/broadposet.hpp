#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dendro/common.hpp"

namespace dendro {

// Unvalidated tree data as read from a file. Leaves have no entry in `vertices`;
// a stump has an entry with an empty child list.
struct RawTree {
    std::vector<std::string> edges;
    std::string root;  // empty: infer the unique parentless edge
    std::vector<std::pair<std::string, std::vector<std::string>>> vertices;
};

struct BroadRelation {
    std::vector<int> source;
    int target = 0;
    auto operator<=>(const BroadRelation&) const = default;
};

// A planar tree. Edges are renumbered in depth-first planar order, so the root is
// edge 0 and the subtree above an edge is a contiguous index range.
class Tree {
public:
    Tree();

    static Tree validate(const RawTree& raw);
    // kids[e] == nullopt marks a leaf. Indices are arbitrary; the result is renumbered.
    static Tree from_children(const std::vector<std::string>& names,
                              const std::vector<std::optional<std::vector<int>>>& kids, int root);

    int size() const { return static_cast<int>(names_.size()); }
    int root() const { return 0; }
    const std::string& name(int e) const { return names_[e]; }
    const std::vector<std::string>& names() const { return names_; }
    int find(std::string_view name) const;

    int parent(int e) const { return parent_[e]; }
    bool is_leaf(int e) const { return leaf_[e]; }
    bool is_stump(int e) const { return !leaf_[e] && kids_[e].empty(); }
    const std::vector<int>& children(int e) const { return kids_[e]; }

    EdgeSet down(int e) const { return down_[e]; }
    const std::vector<EdgeSet>& down_sets() const { return down_; }
    bool leq(int s, int t) const { return has(down_[t], s); }

    EdgeSet all() const;
    EdgeSet leaves() const;
    EdgeSet inner() const;
    EdgeSet stumps() const;
    EdgeSet nodes() const;
    std::vector<int> leaf_tuple() const;
    int degree() const;

    std::vector<BroadRelation> generators() const;
    RawTree raw() const;

    std::string planar_code() const;
    std::string shape_code() const;
    std::string shape_code(int e) const;

    bool operator==(const Tree& o) const;

private:
    std::vector<std::string> names_;
    std::vector<int> parent_;
    std::vector<bool> leaf_;
    std::vector<std::vector<int>> kids_;
    std::vector<EdgeSet> down_;
};

struct Forest {
    std::vector<Tree> components;
    static Forest validate(const std::vector<RawTree>& raws);
};

struct EdgeClasses {
    int root = 0;
    EdgeSet leaves = 0;
    EdgeSet inner = 0;
    EdgeSet nodes = 0;
    EdgeSet stumps = 0;
};

Tree validate_tree(const RawTree& raw);
std::vector<BroadRelation> broad_closure(const Tree& t);
// True iff the tuple (in any order, without repeats) is related to target in the closure.
bool is_broad_relation(const Tree& t, const std::vector<int>& tuple, int target);
EdgeClasses classify_edges(const Tree& t);
int degree(const Tree& t);
std::string format_relation(const Tree& t, const BroadRelation& r);

Tree stick(const std::string& name = "x");
Tree corolla(int n, const std::string& root = "r", const std::string& leaf_prefix = "l");
// Linear tree [n]: n vertices, n+1 edges named 0 (root) .. n (leaf).
Tree linear(int n);

// Non-isomorphic trees with at most max_degree vertices of arity at most max_arity.
std::vector<Tree> enumerate_trees(int max_degree, int max_arity);

bool isomorphic(const Tree& a, const Tree& b);
// All edge permutations of t that preserve vertices as unordered data.
std::vector<std::vector<int>> automorphisms(const Tree& t);
// Non-planar isomorphisms a -> b as edge maps.
std::vector<std::vector<int>> isomorphisms(const Tree& a, const Tree& b);
// The planar normal form (children sorted by shape) and the edge map t -> normal form.
std::pair<Tree, std::vector<int>> normal_form(const Tree& t);

}  // namespace dendro

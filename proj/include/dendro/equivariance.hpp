#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dendro/broadposet.hpp"
#include "dendro/treemaps.hpp"

namespace dendro {

// Subsets of group elements, used for subgroups and cosets.
using ElemSet = std::uint64_t;

class FiniteGroup {
public:
    FiniteGroup();  // trivial group
    // Validates closure, identity, associativity and inverses; throws InvalidInput.
    static FiniteGroup from_table(std::vector<std::string> names, std::vector<std::vector<int>> table);

    static FiniteGroup trivial();
    static FiniteGroup cyclic(int n);
    static FiniteGroup quaternion();  // 1, -1, i, -i, j, -j, k, -k
    static FiniteGroup symmetric(int n);
    static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);

    int order() const { return static_cast<int>(names_.size()); }
    int identity() const { return 0; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    const std::string& name(int g) const { return names_[g]; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::vector<int>>& table() const { return table_; }
    int find(const std::string& name) const;

    ElemSet all() const;
    ElemSet generated(ElemSet gens) const;
    bool is_subgroup(ElemSet s) const;
    ElemSet conjugate(ElemSet s, int g) const;
    // Every subgroup, ordered by (size, mask).
    std::vector<ElemSet> subgroups() const;
    // First element of each left coset gH, in element order.
    std::vector<int> coset_reps(ElemSet h) const;
    int coset_index(ElemSet h, int g) const;
    std::string format(ElemSet s) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inv_;
};

using Perm = std::vector<int>;

// Derives the full action g -> permutation from generator permutations by
// breadth-first search on the Cayley graph, with act(g*x) = act(g) o act(x). Throws
// NotAnAction when the generators do not define a homomorphism.
// When `within` is a proper subgroup the result is indexed by all elements but only
// filled on the subgroup.
std::vector<Perm> derive_action(const FiniteGroup& g, int n, const std::vector<std::pair<int, Perm>>& gens,
                                ElemSet within = ~ElemSet{0});
bool is_homomorphism(const FiniteGroup& g, const std::vector<Perm>& act);

// A forest with a group action by edge permutations. Edges of all components share one
// global index space: component c occupies [offset(c), offset(c) + size).
class GForest {
public:
    GForest() = default;
    // act[g][e] for every group element; validated (NotAnAction).
    GForest(FiniteGroup group, Forest forest, std::vector<Perm> act);
    static GForest with_generators(FiniteGroup group, Forest forest, const std::vector<std::pair<int, Perm>>& gens);
    static GForest trivial(const Tree& t);

    const FiniteGroup& group() const { return group_; }
    const Forest& forest() const { return forest_; }
    int components() const { return static_cast<int>(forest_.components.size()); }
    const Tree& component(int c) const { return forest_.components[c]; }
    int offset(int c) const { return offset_[c]; }
    int component_of(int e) const { return comp_[e]; }
    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int e) const { return names_[e]; }
    int find(const std::string& name) const;
    const std::vector<EdgeSet>& down() const { return down_; }
    const std::vector<Perm>& action() const { return act_; }

    int act(int g, int e) const { return act_[g][e]; }
    EdgeSet act(int g, EdgeSet s) const;
    Subtree act(int g, const Subtree& s) const;
    EdgeSet orbit(int e) const;
    EdgeSet saturate(EdgeSet s) const;  // G-orbit closure of a set of edges
    ElemSet isotropy(int e) const;
    ElemSet isotropy(const Subtree& s) const;
    bool is_stable(EdgeSet s) const;
    std::vector<EdgeSet> edge_orbits() const;  // ordered by least edge

    Subtree component_subtree(int c) const;
    EdgeSet leaves() const;
    EdgeSet inner() const;
    EdgeSet roots() const;
    bool is_gtree() const;  // transitive on components

    int local(int e) const { return e - offset_[comp_[e]]; }
    int global(int c, int local_edge) const { return offset_[c] + local_edge; }

private:
    FiniteGroup group_;
    Forest forest_;
    std::vector<Perm> act_;
    std::vector<int> offset_;
    std::vector<int> comp_;
    std::vector<std::string> names_;
    std::vector<EdgeSet> down_;
};

// Labeled equality: same planar components with the same names and the same action on names.
bool same_labeled(const GForest& a, const GForest& b);

// G .(H) t, where H acts on t through generator permutations of t's edges.
// Components follow the coset representatives; edges are named "g.e" off the identity coset.
GForest induce(const FiniteGroup& g, ElemSet h, const Tree& t, const std::vector<std::pair<int, Perm>>& h_gens);

// Planar faces of a G-forest are subtrees of single components. An orbital face is a
// G-stable union of pairwise disjoint planar faces forming one orbit.
std::vector<Subtree> orbital_pieces(const GForest& t, const Subtree& s);
bool is_orbital_face(const GForest& t, const Subtree& s);
Subtree minimal_orbital_face(const GForest& t, const Subtree& u);
// Per-piece outer closure of an orbital face.
Subtree orbital_outer_closure(const GForest& t, const Subtree& s);
std::vector<Subtree> orbital_faces(const GForest& t);

struct OrbitalFactorization {
    Subtree image;
    Subtree outer;     // planar orbital outer face containing the image
    EdgeSet removed;   // inner orbits removed from the outer part
};
// f: s -> t given on global edges; checks injectivity, equivariance and monotonicity.
OrbitalFactorization orbital_factorize(const GForest& s, const GForest& t, const std::vector<int>& f);

struct FaceAction {
    Subtree face;
    std::vector<int> witness;  // edge of the input face -> edge of its image
};
FaceAction face_action(const GForest& t, int g, const Subtree& u);

struct Quotient {
    Tree tree;
    std::vector<EdgeSet> orbit_of_edge;  // quotient edge -> orbit in the forest
};
Quotient quotient(const GForest& t);

// Grafts s onto r along the leaf orbit of `leaf`, matched with the component root
// `s_root` of s. Throws OrbitMismatch when the isotropies differ.
GForest graft(const GForest& r, const GForest& s, int leaf, int s_root);

// An orbital face as a G-forest of its own; to_ambient maps its edges into t.
struct OrbitalTree {
    GForest forest;
    std::vector<int> to_ambient;
};
OrbitalTree orbital_subforest(const GForest& t, const Subtree& s);

// Small G-forests with |G| in {1, 2}: every tree from enumerate_trees with the trivial
// action, with each involutive automorphism, and as the free doubled forest t + (-t).
std::vector<GForest> small_gforests(int max_degree, int max_arity);

}  // namespace dendro

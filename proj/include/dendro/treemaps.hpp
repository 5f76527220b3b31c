#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dendro/broadposet.hpp"

namespace dendro {

// A subtree of an ambient broad poset, given by its edge set and its leaf set. The
// ambient is only seen through its descendancy sets: down[e] = { s : s <=_d e }.
// Vertices are derived: the children of a non-leaf edge e are the maximal edges of
// the subtree strictly below e, in index order.
struct Subtree {
    EdgeSet edges = 0;
    EdgeSet leaves = 0;
    auto operator<=>(const Subtree&) const = default;
};

struct SubtreeHash {
    std::size_t operator()(const Subtree& s) const noexcept {
        return std::hash<EdgeSet>{}(s.edges * 0x9E3779B97F4A7C15ULL ^ s.leaves);
    }
};

using Down = std::span<const EdgeSet>;

Subtree whole(const Tree& t);
int subtree_root(Down down, const Subtree& u);
EdgeSet subtree_inner(Down down, const Subtree& u);
std::vector<int> subtree_children(Down down, const Subtree& u, int e);
int subtree_degree(Down down, const Subtree& u);
bool is_face_of(Down down, const Subtree& v, const Subtree& u);
// Outer face of u at (root, leaves); throws RelationNotInClosure when the leaves do not
// form a broad relation below root in u.
Subtree outer_face_of(Down down, const Subtree& u, int root, EdgeSet leaves);
Subtree outer_closure_in(Down down, const Subtree& u, const Subtree& v);
bool is_outer_in(Down down, const Subtree& u, const Subtree& v);
inline Subtree remove_edges(const Subtree& v, EdgeSet d) { return {v.edges & ~d, v.leaves}; }
std::vector<Subtree> faces_of(Down down, const Subtree& u);
std::vector<Subtree> outer_faces_of(Down down, const Subtree& u);

struct SubtreeTree {
    Tree tree;
    std::vector<int> to_ambient;  // tree edge -> ambient edge
    int local(int ambient_edge) const;
};
SubtreeTree subtree_tree(Down down, const std::vector<std::string>& names, const Subtree& u);

// Canonical description of a planar face: an inner face of an outer face.
struct FaceDescriptor {
    int root = 0;
    std::vector<int> leaves;
    EdgeSet removed = 0;
    auto operator<=>(const FaceDescriptor&) const = default;
};

FaceDescriptor describe(Down down, const Subtree& ambient, const Subtree& v);
Subtree realize(Down down, const Subtree& ambient, const FaceDescriptor& f);
std::string format_face(const std::vector<std::string>& names, const Subtree& v);

FaceDescriptor describe(const Tree& t, const Subtree& v);
Subtree realize(const Tree& t, const FaceDescriptor& f);

Tree inner_face(const Tree& t, EdgeSet e);
Tree outer_face(const Tree& t, const BroadRelation& rel);
FaceDescriptor outer_closure(const Tree& t, const FaceDescriptor& f);
std::pair<FaceDescriptor, FaceDescriptor> outer_union_intersection(const Tree& t,
                                                                   const std::vector<FaceDescriptor>& faces);
// Cup and cap of outer subtrees with a common root inside an arbitrary ambient.
std::pair<Subtree, Subtree> outer_cup_cap(Down down, const Subtree& ambient, const std::vector<Subtree>& faces);
std::vector<FaceDescriptor> enumerate_faces(const Tree& t);

struct TreeMap {
    Tree source;
    Tree target;
    std::vector<int> edge_fn;
};

enum class MapKind { Iso, Degeneracy, InnerFace, OuterFace, Face, General };
std::string_view to_string(MapKind k);

bool is_monotone(const TreeMap& m);
MapKind classify(const TreeMap& m);
TreeMap compose(const TreeMap& g, const TreeMap& f);
TreeMap identity_map(const Tree& t);
TreeMap face_inclusion(const Tree& t, const Subtree& v);

struct Factorization {
    TreeMap degeneracy;
    TreeMap inner;
    TreeMap outer;
};
Factorization factorize(const TreeMap& m);

// Every monotone map s -> t, as edge functions.
std::vector<std::vector<int>> monotone_maps(const Tree& s, const Tree& t);

}  // namespace dendro

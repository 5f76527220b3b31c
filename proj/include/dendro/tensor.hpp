#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dendro/anodyne.hpp"

namespace dendro {

// One maximal subtree of a tensor product of two trees, in factor coordinates.
struct RawPercolation {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, int>> leaves;
    std::vector<std::pair<int, int>> t_vertices;  // edges topped by their T-vertex
};

// Maximal subtrees of a (x) b: from the double root, each edge (s,t) takes its S-vertex
// (s_i, t) or its T-vertex (s, t_j) until double leaves are reached.
std::vector<RawPercolation> percolations(const Tree& a, const Tree& b);

// S (x) T for G-forests over the same group. Edge (s,t) has index s * |T| + t and the
// group acts diagonally. Its broad poset order is the product order.
class TensorProduct {
public:
    TensorProduct(GForest s, GForest t);

    const GForest& s() const { return s_; }
    const GForest& t() const { return t_; }
    int edge(int s, int t) const { return s * t_.size() + t; }
    std::pair<int, int> coords(int e) const { return {e / t_.size(), e % t_.size()}; }
    bool has_s_vertex(int e) const;
    bool has_t_vertex(int e) const;
    std::shared_ptr<const Ambient> ambient() const { return amb_; }
    int size() const { return s_.size() * t_.size(); }

    // Images of the maximal subtrees of S' (x) T' for faces S' of S and T' of T.
    std::vector<Subtree> embedded(const Subtree& s_face, const Subtree& t_face) const;

private:
    GForest s_, t_;
    std::shared_ptr<Ambient> amb_;
};

struct Percolation {
    Subtree tree;
    EdgeSet t_vertices = 0;
};

enum class TensorMode {
    Standard,  // both factors open, or S with stumps and T linear
    Reversed,  // S linear and T with stumps: reversed order, lowermost characteristic edges
};

struct PercolationPoset {
    std::vector<Percolation> elements;
    std::vector<std::pair<int, int>> generating;  // (lower, upper)
    std::vector<std::vector<bool>> less;          // less[i][j]: i < j
    std::vector<std::vector<int>> act;            // act[g][i]
};

// Throws OrderNotAntisymmetric when the generated order has a cycle.
PercolationPoset maximal_subtrees(const TensorProduct& p, TensorMode mode = TensorMode::Standard);

// dS (x) T u S (x) Λ^{Gξ}[T], generated by the images of the generating faces.
Complex tensor_horn(const TensorProduct& p, EdgeSet g_xi);
// The same complex from the edge criterion for open factors: V lies in S' (x) T' iff its
// edges lie in E(S') x E(T').
Complex tensor_horn_by_edges(const TensorProduct& p, EdgeSet g_xi);

EdgeSet characteristic_edges(const TensorProduct& p, const Percolation& u, EdgeSet g_xi, TensorMode mode);

struct TensorCheck {
    CharCollection collection;
    CharReport report;
    std::optional<Certificate> certificate;
};

// Throws FactorsNotOpen when the factors do not fit the mode, InvalidInput when g_xi is
// not a single inner edge orbit of t.
TensorCheck verify_tensor_characteristic(const GForest& s, const GForest& t, EdgeSet g_xi,
                                         TensorMode mode = TensorMode::Standard, bool build = false);

bool is_open(const GForest& t);
bool is_linear(const GForest& t);

}  // namespace dendro

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dendro/genuine.hpp"
#include "dendro/reedy.hpp"

namespace dendro {

// The isomorphism class of the G-tree G .(H) U: a tree of the truncation and the graph
// {(h, phi_h)} of an action H -> Aut(U), stored in its canonical conjugate under G x Aut(U).
struct GTreeClass {
    int tree = 0;                           // index into Truncation::trees()
    std::vector<std::pair<int, Perm>> graph;  // sorted by group element
    ElemSet subgroup() const;
    auto operator<=>(const GTreeClass&) const = default;
};

// Every isomorphism class of G-trees over a truncation, with lookup and the vertex
// corollas T_v.
class GTreeClasses {
public:
    explicit GTreeClasses(Truncation tr);

    const Truncation& truncation() const { return tr_; }
    const std::vector<Tree>& trees() const { return trees_; }
    const std::vector<GTreeClass>& classes() const { return classes_; }
    int size() const { return static_cast<int>(classes_.size()); }
    const GTreeClass& operator[](int i) const { return classes_[i]; }

    // Index of the class of (tree, graph) for any graph subgroup; -1 when not one.
    int find(int tree, std::vector<std::pair<int, Perm>> graph) const;
    int unit() const;      // G/G . eta
    int tree_index(const Tree& t) const;  // index of the shape of t, -1 if outside
    // One class per G-vertex: the orbital outer face with that G-vertex alone.
    std::vector<int> vertex_corollas(int c) const;
    // Whether some G-map A -> B exists.
    bool maps_to(int a, int b) const;
    GForest forest(int c) const;
    std::string describe(int c) const;

private:
    Truncation tr_;
    std::vector<Tree> trees_;
    std::vector<std::vector<Perm>> auts_;
    std::vector<GTreeClass> classes_;
    std::map<GTreeClass, int> index_;
    std::map<std::string, int> shapes_;
    std::vector<std::vector<std::vector<std::vector<int>>>> maps_;  // maps_[u][v]
    GTreeClass canonical(int tree, std::vector<std::pair<int, Perm>> graph) const;
};

// A subcategory of G-trees over a truncation, given by membership of each class.
struct SieveSpec {
    std::shared_ptr<const GTreeClasses> classes;
    std::vector<bool> member;

    static SieveSpec full(const Truncation& tr);
    // The smallest sieve containing the given corolla classes and satisfying the vertex
    // condition: T belongs iff all its vertex corollas do, closed under maps.
    static SieveSpec from_corollas(const Truncation& tr, const std::vector<GTreeClass>& corollas);
    int count() const;
};

// A G-corolla G .(H) C_n from input permutations of elements of H; unlisted generators act
// trivially.
GTreeClass corolla_class(const GTreeClasses& cls, int arity, ElemSet h,
                         const std::vector<std::pair<int, Perm>>& input_gens);

struct IndexingFailure {
    std::string axiom;  // "unit", "sieve", "segal", "trivial-corollas"
    std::string witness;
};
struct IndexingCheck {
    bool pass = true;
    std::vector<IndexingFailure> failures;
};
// Unit G/G . eta, closure under maps into members, and T in the sieve iff every T_v is.
// With require_trivial_corollas every G/G . C_n must belong as well.
IndexingCheck validate_weak_indexing(const SieveSpec& s, bool require_trivial_corollas = false, int jobs = 1);

// Families over G x Omega^op: F_U = graph subgroups Gamma <= G x Aut(U)^op whose G-tree
// lies in the sieve. Gamma holds (h, phi_h^-1) as arrows of the product.
struct GraphFamilies {
    GenReedyCat category;
    std::vector<Family> families;
};
GraphFamilies to_graph_families(const SieveSpec& s);
SieveSpec from_graph_families(const Truncation& tr, const GraphFamilies& f);

}  // namespace dendro

#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dendro/equivariance.hpp"
#include "dendro/treemaps.hpp"

namespace dendro {

// An ambient broad poset whose subtrees form a finite G-poset: the faces of its maximal
// subtrees. G-forests have their components as maximal subtrees; tensor products have
// their percolation schemes.
struct Ambient {
    std::vector<std::string> names;
    std::vector<EdgeSet> down;
    FiniteGroup group;
    std::vector<Perm> act;
    std::vector<Subtree> tops;

    int size() const { return static_cast<int>(names.size()); }
    EdgeSet act_on(int g, EdgeSet s) const;
    Subtree act_on(int g, const Subtree& s) const;
    ElemSet isotropy(const Subtree& s) const;
    EdgeSet saturate(EdgeSet s) const;
    bool is_subtree(const Subtree& s) const;
    std::vector<Subtree> subtrees() const;
};

std::shared_ptr<const Ambient> ambient_of(const GForest& t);

// A face-closed set of subtrees of an ambient.
class Complex {
public:
    Complex() = default;
    explicit Complex(std::shared_ptr<const Ambient> amb, std::set<Subtree> members = {});
    // All faces of the given subtrees.
    static Complex generated(std::shared_ptr<const Ambient> amb, const std::vector<Subtree>& gens);
    static Complex full(std::shared_ptr<const Ambient> amb);

    const Ambient& ambient() const { return *amb_; }
    std::shared_ptr<const Ambient> ambient_ptr() const { return amb_; }
    const std::set<Subtree>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool contains(const Subtree& s) const { return members_.count(s) > 0; }
    void insert(const Subtree& s) { members_.insert(s); }

    bool is_face_closed() const;
    bool is_g_stable() const;
    // Members not in the complex among all subtrees of the ambient.
    std::vector<Subtree> complement() const;
    // Members that are not faces of another member.
    std::vector<Subtree> maximal() const;
    bool operator==(const Complex& o) const { return members_ == o.members_; }

private:
    std::shared_ptr<const Ambient> amb_;
    std::set<Subtree> members_;
};

// Closed-form membership tests. V is a planar face of some component of t.
bool in_boundary(const GForest& t, const Subtree& v);
bool in_horn(const GForest& t, EdgeSet e, const Subtree& v);
bool in_orbital_horn(const GForest& t, EdgeSet e, const Subtree& v);
bool in_segal_core(const GForest& t, const Subtree& v);

// Validates a horn edge set: nonempty (EmptyE), inner (NotInner), G-stable (NotGStable).
void check_horn_edges(const GForest& t, EdgeSet e);

Complex boundary(const GForest& t);
Complex horn(const GForest& t, EdgeSet e);
Complex orbital_horn(const GForest& t, EdgeSet e);
Complex segal_core(const GForest& t);

// Union-of-generators descriptions, used as an independent check on the closed forms.
std::vector<Subtree> horn_generators(const GForest& t, EdgeSet e);
std::vector<Subtree> orbital_horn_generators(const GForest& t, EdgeSet e);
std::vector<Subtree> segal_core_generators(const GForest& t);

// Attaches the orbit G .(K) W along the horn of W at xi. Requires K = Stab(W), xi a
// nonempty K-stable set of inner edges of W, every face of the horn already present,
// and the [G:K] 2^|xi| faces g(W - D) all new and distinct. Throws NotAPushout naming
// `step` on failure.
struct HornStep {
    Subtree tree;
    ElemSet isotropy = 1;
    EdgeSet xi = 0;
    auto operator<=>(const HornStep&) const = default;
};
Complex attach_horn(const Complex& a, const HornStep& s, int step = 0);

// Faces of w in the horn at xi: all faces except w - D for D a subset of xi.
bool in_subtree_horn(Down down, const Subtree& w, EdgeSet xi, const Subtree& v);

}  // namespace dendro

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dendro/complexes.hpp"

namespace dendro {

// Trees with at most `degree` vertices of arity at most `arity`, and the G-trees
// G .(H) t built from them for every subgroup H and every H-action on t.
struct Truncation {
    int degree = 2;
    int arity = 2;
    FiniteGroup group;

    std::vector<Tree> trees() const;
    std::vector<GForest> gtrees() const;
    bool contains(const Tree& t) const;
};

// A G-presheaf on trees and injective tree maps. Values at a tree are 0 .. cardinality-1;
// they depend only on the planar shape. Restriction along f: v -> u (edge function) and
// the G-action commute. Throws TruncationTooSmall outside its domain.
class Presheaf {
public:
    virtual ~Presheaf() = default;
    virtual const FiniteGroup& group() const = 0;
    virtual int cardinality(const Tree& u) const = 0;
    virtual int restrict(const Tree& u, const Tree& v, const std::vector<int>& f, int x) const = 0;
    virtual int act(int g, const Tree& u, int x) const = 0;
    virtual std::string show(const Tree& u, int x) const;
};

class ConstantPresheaf : public Presheaf {
public:
    explicit ConstantPresheaf(int n, FiniteGroup g = {});
    const FiniteGroup& group() const override { return group_; }
    int cardinality(const Tree&) const override { return n_; }
    int restrict(const Tree&, const Tree&, const std::vector<int>&, int x) const override { return x; }
    int act(int, const Tree&, int x) const override { return x; }

private:
    int n_;
    FiniteGroup group_;
};

// The constant presheaf with one extra value at trees of the given shape. The extra value
// restricts to 0 along proper faces and to itself along isomorphisms.
class PerturbedPresheaf : public Presheaf {
public:
    PerturbedPresheaf(int n, const Tree& at, FiniteGroup g = {});
    const FiniteGroup& group() const override { return group_; }
    int cardinality(const Tree& u) const override;
    int restrict(const Tree& u, const Tree& v, const std::vector<int>& f, int x) const override;
    int act(int, const Tree&, int x) const override { return x; }

private:
    int n_;
    std::string shape_;
    FiniteGroup group_;
};

// Restricts a presheaf to a truncation: values outside it throw TruncationTooSmall.
class TruncatedPresheaf : public Presheaf {
public:
    TruncatedPresheaf(std::shared_ptr<const Presheaf> base, int degree, int arity);
    const FiniteGroup& group() const override { return base_->group(); }
    int cardinality(const Tree& u) const override;
    int restrict(const Tree& u, const Tree& v, const std::vector<int>& f, int x) const override;
    int act(int g, const Tree& u, int x) const override;
    std::string show(const Tree& u, int x) const override { return base_->show(u, x); }

private:
    void check(const Tree& u) const;
    std::shared_ptr<const Presheaf> base_;
    int degree_, arity_;
};

struct Signature {
    std::vector<int> ins;
    int out = 0;
    auto operator<=>(const Signature&) const = default;
};

// p o_i q: the inputs of q replace input i of p.
Signature compose_signature(const Signature& p, int i, const Signature& q);
// The signature whose j-th input is the sigma[j]-th input of s.
Signature permute_signature(const Signature& s, const std::vector<int>& sigma);

// A colored operad in sets with finitely many operations per signature, numbered from 0,
// and a G-action by operad automorphisms.
class SetOperad {
public:
    virtual ~SetOperad() = default;
    virtual std::string name() const = 0;
    virtual const FiniteGroup& group() const = 0;
    virtual int colors() const = 0;
    virtual int ops(const Signature& s) const = 0;
    virtual int compose(const Signature& ps, int p, int i, const Signature& qs, int q) const = 0;
    virtual int unit(int c) const = 0;
    // The operation whose j-th input is the sigma[j]-th input of p.
    virtual int permute(const Signature& s, int p, const std::vector<int>& sigma) const = 0;
    virtual int act_color(int g, int c) const = 0;
    virtual int act_op(int g, const Signature& s, int p) const = 0;
    virtual std::string show_op(const Signature& s, int p) const;
    virtual std::string show_color(int c) const { return std::to_string(c); }
};

// The terminal one-colored operad.
class CommutativeOperad : public SetOperad {
public:
    explicit CommutativeOperad(FiniteGroup g = {}) : group_(std::move(g)) {}
    std::string name() const override { return "com"; }
    const FiniteGroup& group() const override { return group_; }
    int colors() const override { return 1; }
    int ops(const Signature&) const override { return 1; }
    int compose(const Signature&, int, int, const Signature&, int) const override { return 0; }
    int unit(int) const override { return 0; }
    int permute(const Signature&, int, const std::vector<int>&) const override { return 0; }
    int act_color(int, int c) const override { return c; }
    int act_op(int, const Signature&, int p) const override { return p; }

private:
    FiniteGroup group_;
};

// Ass(n) = orderings of the n inputs. Elements with reverses[g] act by reversing them.
class AssociativeOperad : public SetOperad {
public:
    explicit AssociativeOperad(FiniteGroup g = {}, std::vector<bool> reverses = {});
    std::string name() const override { return "ass"; }
    const FiniteGroup& group() const override { return group_; }
    int colors() const override { return 1; }
    int ops(const Signature& s) const override;
    int compose(const Signature& ps, int p, int i, const Signature& qs, int q) const override;
    int unit(int) const override { return 0; }
    int permute(const Signature& s, int p, const std::vector<int>& sigma) const override;
    int act_color(int, int c) const override { return c; }
    int act_op(int g, const Signature& s, int p) const override;
    std::string show_op(const Signature& s, int p) const override;

    static std::vector<int> word(int n, int p);
    static int index(const std::vector<int>& word);

private:
    FiniteGroup group_;
    std::vector<bool> reverses_;
};

// The operad of the commutative monoid Z/n: every arity has n operations, composition
// adds. Elements with negates[g] act by negation.
class CyclicMonoidOperad : public SetOperad {
public:
    explicit CyclicMonoidOperad(int n, FiniteGroup g = {}, std::vector<bool> negates = {});
    std::string name() const override { return "cyclic" + std::to_string(n_); }
    const FiniteGroup& group() const override { return group_; }
    int colors() const override { return 1; }
    int ops(const Signature&) const override { return n_; }
    int compose(const Signature&, int p, int, const Signature&, int q) const override { return (p + q) % n_; }
    int unit(int) const override { return 0; }
    int permute(const Signature&, int p, const std::vector<int>&) const override { return p; }
    int act_color(int, int c) const override { return c; }
    int act_op(int g, const Signature&, int p) const override;

private:
    int n_;
    FiniteGroup group_;
    std::vector<bool> negates_;
};

// Two colors 0 < 1 and one operation (c_1..c_n; c) exactly when c = max(c_i), with the
// constant landing in color 0.
class MaxOperad : public SetOperad {
public:
    explicit MaxOperad(FiniteGroup g = {}) : group_(std::move(g)) {}
    std::string name() const override { return "max2"; }
    const FiniteGroup& group() const override { return group_; }
    int colors() const override { return 2; }
    int ops(const Signature& s) const override;
    int compose(const Signature&, int, int, const Signature&, int) const override { return 0; }
    int unit(int) const override { return 0; }
    int permute(const Signature&, int, const std::vector<int>&) const override { return 0; }
    int act_color(int, int c) const override { return c; }
    int act_op(int, const Signature&, int p) const override { return p; }

private:
    FiniteGroup group_;
};

// The operad Omega(F) of a G-forest: colors are edges, and (e_1..e_n; e) has one operation
// when the e_i are distinct and form a broad relation below e in one component.
class TreeOperad : public SetOperad {
public:
    explicit TreeOperad(GForest f);
    std::string name() const override { return "tree"; }
    const FiniteGroup& group() const override { return forest_.group(); }
    int colors() const override { return forest_.size(); }
    int ops(const Signature& s) const override;
    int compose(const Signature&, int, int, const Signature&, int) const override { return 0; }
    int unit(int) const override { return 0; }
    int permute(const Signature&, int, const std::vector<int>&) const override { return 0; }
    int act_color(int g, int c) const override { return forest_.act(g, c); }
    int act_op(int, const Signature&, int p) const override { return p; }
    std::string show_color(int c) const override { return forest_.name(c); }
    const GForest& forest() const { return forest_; }

private:
    GForest forest_;
};

// Brute-force check of units, associativity, permutation compatibility and the G-action on
// every signature of arity at most max_arity. Throws AxiomViolation.
void verify_operad(const SetOperad& o, int max_arity = 2);

// N O(U) = color-consistent assignments of operations to the vertices of U.
class NervePresheaf : public Presheaf {
public:
    explicit NervePresheaf(std::shared_ptr<const SetOperad> o);
    const FiniteGroup& group() const override { return op_->group(); }
    int cardinality(const Tree& u) const override;
    int restrict(const Tree& u, const Tree& v, const std::vector<int>& f, int x) const override;
    int act(int g, const Tree& u, int x) const override;
    std::string show(const Tree& u, int x) const override;

    struct Dendrex {
        std::vector<int> colors;  // per edge
        std::vector<int> ops;     // per edge, -1 at leaves
        auto operator<=>(const Dendrex&) const = default;
    };
    Dendrex decode(const Tree& u, int x) const;
    int encode(const Tree& u, const Dendrex& d) const;
    const SetOperad& operad() const { return *op_; }

private:
    struct Level {
        std::vector<Dendrex> elems;
        std::map<Dendrex, int> index;
    };
    const Level& level(const Tree& u) const;
    Signature vertex_signature(const Tree& u, const Dendrex& d, int e) const;

    std::shared_ptr<const SetOperad> op_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::unique_ptr<Level>> cache_;
};

// Verifies the operad axioms first (AxiomViolation).
std::shared_ptr<const NervePresheaf> nerve(std::shared_ptr<const SetOperad> o, int verify_arity = 2);

// hom_G(A, Y) for a complex A over a G-forest: families x_V in Y(V) over the members of A,
// compatible with face restrictions and with the G-action.
struct Sections {
    std::vector<Subtree> members;
    std::vector<std::vector<int>> families;
};
Sections sections(const Presheaf& y, const Complex& a);

struct LiftCheck {
    bool pass = true;
    std::string witness;
};
// Strict lifting against A -> full: restriction of sections is a bijection.
LiftCheck strict_lift(const Presheaf& y, const Complex& a);

struct SegalFailure {
    std::string tree;
    std::string witness;
};
struct SegalReport {
    bool pass = true;
    int checked = 0;
    std::vector<SegalFailure> failures;
};
// Strict lifting against Sc[T] -> Omega[T] for every G-tree T of the truncation, i.e.
// Z(T) is the limit of Z over the Segal core, for Z = upsilon_* Y.
SegalReport strict_segal_check(const Presheaf& y, const Truncation& tr, int jobs = 1);

// (upsilon_* Y)(T) = Y(T_*)^H for T = G .(H) T_*, with T_* the first component.
std::vector<int> upsilon_star(const Presheaf& y, const GForest& t);

struct LiftingSuite {
    bool segal = true;
    bool generating = true;  // single-orbit horns
    bool horns = true;
    bool orbital = true;
    int trees = 0;
    std::vector<std::string> witnesses;
    bool all_equal() const { return segal == generating && generating == horns && horns == orbital; }
};
LiftingSuite lifting_equivalence_suite(const Presheaf& y, const Truncation& tr, int jobs = 1);

// Aut(U) acts freely on Y(U) minus X(U) for every tree U of the truncation.
struct NormalCheck {
    bool pass = true;
    std::string witness;
};
NormalCheck is_normal(const Presheaf& y, const std::function<bool(const Tree&, int)>& in_x, const Truncation& tr);

std::string format_tree(const Tree& t);
std::string format_gforest(const GForest& t);

}  // namespace dendro

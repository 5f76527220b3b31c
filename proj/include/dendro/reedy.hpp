#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dendro/equivariance.hpp"

namespace dendro {

// A finite category with generalized Reedy data. Arrow g o f is comp[g][f], or -1 when
// dst(f) != src(g).
struct GenReedyCat {
    struct Arrow {
        int src = 0;
        int dst = 0;
        std::string name;
        bool plus = false;
        bool minus = false;
    };
    std::vector<std::string> objects;
    std::vector<int> degree;
    std::vector<Arrow> arrows;
    std::vector<std::vector<int>> comp;
    std::vector<int> identity;
    // Set by product(): whether the left component of each arrow is an identity.
    std::vector<bool> left_identity;
    // Set by delta() and omega(), kept by opposite(): the edge function of each arrow.
    std::vector<std::vector<int>> edge_maps;

    int object_count() const { return static_cast<int>(objects.size()); }
    int arrow_count() const { return static_cast<int>(arrows.size()); }
    int find_object(std::string_view name) const;
    int find_arrow(std::string_view name) const;
    std::vector<int> hom(int a, int b) const;
    bool is_iso(int f) const;
    std::vector<int> automorphisms(int r) const;
};

// Composition laws (identities, associativity, closure of R+ and R- under composition
// and identities). Throws InvalidInput with the first failure.
void check_category(const GenReedyCat& c);

struct AxiomResult {
    std::string name;
    bool pass = true;
    std::string witness;
};

struct ReedyReport {
    std::vector<AxiomResult> axioms;  // "i", "ii", "iii"
    bool ok() const;
    const AxiomResult& get(std::string_view name) const;
};
// Axioms (i) degrees, (ii) R+ and R- meet in the isomorphisms, (iii) factorizations
// f = f+ o f- exist and are unique up to isomorphism.
ReedyReport validate_gen_reedy(const GenReedyCat& c);

// Every factorization f = p o q with p in R+ and q in R-, as (p, q).
std::vector<std::pair<int, int>> factorizations(const GenReedyCat& c, int f);

// Builders.
GenReedyCat delta(int n);                 // Delta on [0..n], + injective, - surjective
GenReedyCat omega(int degree, int arity); // + injective, - onto and leaf preserving
GenReedyCat group_category(const FiniteGroup& g);
GenReedyCat opposite(const GenReedyCat& c);  // R+ and R- swap
GenReedyCat product(const GenReedyCat& a, const GenReedyCat& b);
// G x (0 <- 1) with every arrow in R-.
GenReedyCat g_times_arrow(const FiniteGroup& g);

// Subgroups of Aut(r) as sorted arrow lists.
using ArrowGroup = std::vector<int>;
using Family = std::vector<ArrowGroup>;

std::vector<ArrowGroup> subgroups(const GenReedyCat& c, int r);
// Closed under subgroups and conjugation in Aut(r).
bool is_family(const GenReedyCat& c, int r, const Family& f);
Family all_subgroups_family(const GenReedyCat& c, int r);
Family trivial_family(const GenReedyCat& c, int r);
// For a product G x S: subgroups of G x Aut(s) meeting {e} x Aut(s) trivially.
Family graph_family(const GenReedyCat& c, int r);

// Aut(f) as commuting pairs (alpha in Aut(src), beta in Aut(dst)) with beta f = f alpha.
std::vector<std::pair<int, int>> arrow_automorphisms(const GenReedyCat& c, int f);

struct AdmissibleCheck {
    bool pass = true;
    std::string witness;
};
// For every f in R- and H in F_src: pi_dst(pi_src^-1(H)) lies in F_dst. Throws InvalidInput
// when some F_r is not a family.
AdmissibleCheck check_admissible(const GenReedyCat& c, const std::vector<Family>& families);

// A set-valued functor on the category: map[f][x] = X(f)(x).
struct SetFunctor {
    std::vector<int> size;
    std::vector<std::vector<int>> map;
};
void check_functor(const GenReedyCat& c, const SetFunctor& x);  // throws InvalidInput

struct NatTrans {
    SetFunctor source;
    SetFunctor target;
    std::vector<std::vector<int>> at;  // at[r][x]
};

SetFunctor constant_functor(const GenReedyCat& c, int n);
// R(r, -), with values the arrows out of r in arrow order.
SetFunctor representable(const GenReedyCat& c, int r);

// sk_n X -> X: colimits over arrows s -> r with |s| <= n.
NatTrans skeleton(const GenReedyCat& c, const SetFunctor& x, int n);
// L_r X = (sk_{|r|-1} X)_r and M_r X = (csk_{|r|-1} X)_r with their maps to and from X_r.
struct LatchingMatching {
    int latching = 0;
    std::vector<int> latching_map;  // L_r X -> X_r
    int matching = 0;
    std::vector<int> matching_map;  // X_r -> M_r X
};
LatchingMatching latching_matching(const GenReedyCat& c, const SetFunctor& x, int r);

// (sk_{|r|-1} R(r,-) -> R(r,-)) / H for H <= Aut(r) acting by precomposition.
NatTrans generator_object(const GenReedyCat& c, int r, const ArrowGroup& h);

bool is_injective(const NatTrans& m);

}  // namespace dendro

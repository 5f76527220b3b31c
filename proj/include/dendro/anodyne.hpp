#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dendro/complexes.hpp"

namespace dendro {

// A characteristic inner edge collection candidate: a G-stable complex A, subtrees U_i
// indexed by a finite poset I, and inner edge sets xi[i] of U_i. The G-action on I is
// read off from the U_i, which must be pairwise distinct.
struct CharCollection {
    Complex a;
    std::vector<Subtree> u;
    std::vector<EdgeSet> xi;
    // below[i] = indices j with j < i.
    std::vector<std::vector<int>> below;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(u.size()); }
};

struct ConditionResult {
    std::string name;  // "Ch0" .. "Ch3"
    bool pass = true;
    std::string witness;
};

struct CharReport {
    std::vector<ConditionResult> conditions;
    bool ok() const;
    const ConditionResult& get(std::string_view name) const;
};

// Checks Ch0 .. Ch3, with a witness for the first failure of each. Throws MalformedPoset
// when `below` is not a strict partial order or the U_i are not distinct.
CharReport verify_characteristic(const CharCollection& c);
// g . i for every g, or -1 where g U_i is not one of the U_j.
std::vector<std::vector<int>> collection_action(const CharCollection& c);

struct Certificate {
    std::shared_ptr<const Ambient> ambient;
    std::set<Subtree> source;
    std::set<Subtree> target;
    std::vector<HornStep> steps;
};

// Replays every step through attach_horn from the source. Throws NotAPushout at the first
// failing step and VerificationFailed when the result differs from the target.
Complex replay(const Certificate& c);

// The cellular filtration of A -> A u U_i from a collection that verifies: orbits of I in
// a linear extension, and within each orbit the lex order on (outer closure, face).
// Throws VerificationFailed when the collection does not verify.
Certificate build_filtration(const CharCollection& c);

enum class HornVariant { Subsets, Chain };

// Standard instantiations. Components of t play the role of the orbit G/H of a fixed
// component, so each is indexed separately and the pieces are incomparable.
CharCollection segal_core_collection(const GForest& t);
CharCollection orbital_horn_collection(const GForest& t, EdgeSet e);
CharCollection horn_to_horn_collection(const GForest& t, EdgeSet e, EdgeSet f, HornVariant v = HornVariant::Subsets);
CharCollection orbital_to_orbital_collection(const GForest& t, EdgeSet e, EdgeSet f);
// Inclusion of covers a <= b: both contain Sc[t] and are generated by outer faces.
CharCollection cover_collection(const GForest& t, const Complex& a, const Complex& b);
bool is_cover(const GForest& t, const Complex& a);

enum class CertifyKind { SegalCore, OrbitalHornToFull, HornToHorn, OrbitalToOrbital, CoverInclusion, GeneratingReduction };
std::string_view to_string(CertifyKind k);
CertifyKind parse_certify_kind(std::string_view s);  // throws InvalidInput

Certificate certify_segal_core(const GForest& t);
Certificate certify_orbital_horn(const GForest& t, EdgeSet e);
Certificate certify_horn_to_horn(const GForest& t, EdgeSet e, EdgeSet f, HornVariant v = HornVariant::Subsets);
Certificate certify_orbital_to_orbital(const GForest& t, EdgeSet e, EdgeSet f);
Certificate certify_cover(const GForest& t, const Complex& a, const Complex& b);
// Splits every step into horns whose edge set is a single orbit of the step's isotropy.
Certificate generating_reduction(const Certificate& c);

// True iff the step's horn edges form one orbit of its isotropy group.
bool is_single_orbit(const Ambient& amb, const HornStep& s);

}  // namespace dendro

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dendro {

// Edge subsets of an ambient with at most 64 edges.
using EdgeSet = std::uint64_t;
inline constexpr int kMaxEdges = 64;

inline constexpr EdgeSet bit(int i) { return EdgeSet{1} << i; }
inline constexpr bool has(EdgeSet s, int i) { return (s >> i) & 1U; }
inline int count(EdgeSet s) { return std::popcount(s); }
inline int lowest(EdgeSet s) { return std::countr_zero(s); }
inline int highest(EdgeSet s) { return 63 - std::countl_zero(s); }
inline bool subset(EdgeSet a, EdgeSet b) { return (a & ~b) == 0; }

template <class F>
void for_each_bit(EdgeSet s, F&& f) {
    while (s) {
        f(std::countr_zero(s));
        s &= s - 1;
    }
}

inline std::vector<int> bits(EdgeSet s) {
    std::vector<int> out;
    for_each_bit(s, [&](int i) { out.push_back(i); });
    return out;
}

// Calls f on every subset of s, including the empty set and s itself.
template <class F>
void for_each_subset(EdgeSet s, F&& f) {
    EdgeSet sub = 0;
    while (true) {
        f(sub);
        if (sub == s) break;
        sub = (sub - s) & s;
    }
}

enum class ErrorKind {
    InvalidInput,
    DuplicateChild,
    MultipleRoots,
    CycleDetected,
    OrphanEdge,
    NotInnerEdge,
    RelationNotInClosure,
    RootMismatch,
    NotMonotone,
    NotAnAction,
    NotInjective,
    NotEquivariant,
    OrbitMismatch,
    EmptyE,
    NotGStable,
    NotInner,
    NotAPushout,
    MalformedPoset,
    VerificationFailed,
    FactorsNotOpen,
    OrderNotAntisymmetric,
    AxiomViolation,
    TruncationTooSmall,
};

std::string_view to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace dendro

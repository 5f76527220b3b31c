#include "dendro/common.hpp"

namespace dendro {

std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::DuplicateChild: return "DuplicateChild";
        case ErrorKind::MultipleRoots: return "MultipleRoots";
        case ErrorKind::CycleDetected: return "CycleDetected";
        case ErrorKind::OrphanEdge: return "OrphanEdge";
        case ErrorKind::NotInnerEdge: return "NotInnerEdge";
        case ErrorKind::RelationNotInClosure: return "RelationNotInClosure";
        case ErrorKind::RootMismatch: return "RootMismatch";
        case ErrorKind::NotMonotone: return "NotMonotone";
        case ErrorKind::NotAnAction: return "NotAnAction";
        case ErrorKind::NotInjective: return "NotInjective";
        case ErrorKind::NotEquivariant: return "NotEquivariant";
        case ErrorKind::OrbitMismatch: return "OrbitMismatch";
        case ErrorKind::EmptyE: return "EmptyE";
        case ErrorKind::NotGStable: return "NotGStable";
        case ErrorKind::NotInner: return "NotInner";
        case ErrorKind::NotAPushout: return "NotAPushout";
        case ErrorKind::MalformedPoset: return "MalformedPoset";
        case ErrorKind::VerificationFailed: return "VerificationFailed";
        case ErrorKind::FactorsNotOpen: return "FactorsNotOpen";
        case ErrorKind::OrderNotAntisymmetric: return "OrderNotAntisymmetric";
        case ErrorKind::AxiomViolation: return "AxiomViolation";
        case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    }
    return "Unknown";
}

}  // namespace dendro

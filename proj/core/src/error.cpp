#include "morita/error.hpp"

namespace morita {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::NotInRing: return "NotInRing";
        case ErrorKind::DenominatorVanishesAtZero: return "DenominatorVanishesAtZero";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotPsd: return "NotPsd";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::BadParams: return "BadParams";
        case ErrorKind::InvalidWitness: return "InvalidWitness";
        case ErrorKind::NotPositiveFunctional: return "NotPositiveFunctional";
        case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
        case ErrorKind::DegenerateModule: return "DegenerateModule";
        case ErrorKind::MissingInnerB: return "MissingInnerB";
        case ErrorKind::NoIdentityStructure: return "NoIdentityStructure";
        case ErrorKind::MiddleAlgebraMismatch: return "MiddleAlgebraMismatch";
        case ErrorKind::MissingCyclicWitness: return "MissingCyclicWitness";
        case ErrorKind::DegenerateRiggedModule: return "DegenerateRiggedModule";
        case ErrorKind::NotStarHomomorphism: return "NotStarHomomorphism";
        case ErrorKind::NotProjection: return "NotProjection";
        case ErrorKind::NotFull: return "NotFull";
        case ErrorKind::PositivityViolated: return "PositivityViolated";
        case ErrorKind::InvalidBimodule: return "InvalidBimodule";
        case ErrorKind::NotIntertwiner: return "NotIntertwiner";
        case ErrorKind::NotInCommutant: return "NotInCommutant";
        case ErrorKind::NotStronglyNonDegenerate: return "NotStronglyNonDegenerate";
        case ErrorKind::NotUnital: return "NotUnital";
        case ErrorKind::ContextConditionFailed: return "ContextConditionFailed";
        case ErrorKind::NotAdjointable: return "NotAdjointable";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnresolvedReference: return "UnresolvedReference";
        case ErrorKind::MalformedScalar: return "MalformedScalar";
        case ErrorKind::UnknownCommand: return "UnknownCommand";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace morita

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace morita {

enum class ErrorKind {
    DivisionByZero,
    NotInRing,
    DenominatorVanishesAtZero,
    NotHermitian,
    NotPsd,
    ShapeMismatch,
    BadParams,
    InvalidWitness,
    NotPositiveFunctional,
    AlgebraMismatch,
    DegenerateModule,
    MissingInnerB,
    NoIdentityStructure,
    MiddleAlgebraMismatch,
    MissingCyclicWitness,
    DegenerateRiggedModule,
    NotStarHomomorphism,
    NotProjection,
    NotFull,
    PositivityViolated,
    InvalidBimodule,
    NotIntertwiner,
    NotInCommutant,
    NotStronglyNonDegenerate,
    NotUnital,
    ContextConditionFailed,
    NotAdjointable,
    SyntaxError,
    UnresolvedReference,
    MalformedScalar,
    UnknownCommand,
};

std::string_view to_string(ErrorKind kind);

/// All library failures are reported through this exception; `kind()` is the
/// stable discriminator, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace morita

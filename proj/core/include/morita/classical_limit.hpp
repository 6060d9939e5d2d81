#pragma once

// The classical limit lambda -> 0 for modules, operators, representations
// and bimodules over the deformation ring. Deformed data must have entries
// whose denominators do not vanish at lambda = 0.

#include <optional>
#include <string_view>
#include <vector>

#include "morita/rieffel.hpp"

namespace morita {

FracScalar limit_of(const FracScalar& z);
Vector limit_of(const Vector& v);
Matrix limit_of(const Matrix& m);
/// Lowest power of lambda in the Laurent expansion; nullopt for zero.
std::optional<long> lambda_order(const FracScalar& z);

/// H -> H_0 = (H at lambda = 0) / H_L, where H_L is the kernel of the
/// classical Gram G(0).
struct LimitMap {
    Matrix source_gram;
    InnerProductModule target;
    QuotientMap map;  // projection implements phi -> c(phi) on lambda = 0 coordinates

    std::size_t dim() const { return target.dim(); }
    /// c(phi); throws DenominatorVanishesAtZero.
    Vector apply(const Vector& phi) const { return map.projection * limit_of(phi); }
};

/// Throws NotPsd.
LimitMap cl_prehilbert(const InnerProductModule& h);

/// <c phi, c psi> = c<phi, psi> for every pair drawn from `vectors`.
Report check_limit_map(const LimitMap& m, const std::vector<Vector>& vectors);

/// c(T) between two limits. Throws NotAdjointable when T(0) does not map the
/// classical radical of the source into that of the target.
Matrix cl_map(const LimitMap& source, const LimitMap& target, const Matrix& t);
/// Throws NotAdjointable, also when the operator has no adjoint on H.
Matrix cl_operator(const LimitMap& m, const Matrix& a);

/// The limit algebra, sharing `a` when it is already lambda-free.
AlgebraRef limit_algebra(const AlgebraRef& a);

struct ClassicalRepresentation {
    Representation rep;  // of the limit algebra on H_0
    LimitMap limit;
    RepresentationReport validation;
};

/// Throws NotAdjointable, including for a representation that fails validation.
ClassicalRepresentation cl_representation(const Representation& pi);

struct ClassicalBimodule {
    Bimodule at_zero;                   // all tables evaluated at lambda = 0
    Bimodule bimodule;                  // at_zero modulo X_L
    QuotientMap map;
    std::vector<Vector> radical_a;      // X_L
    std::vector<Vector> radical_b;      // _L X, when the B-valued product exists
    std::optional<bool> radicals_agree;
    Report validation;                  // equivalence level when both products exist
};

/// Throws InvalidBimodule when the deformed bimodule is not rigged.
ClassicalBimodule cl_bimodule(const Bimodule& x);

struct Naturality {
    InductionResult deformed;           // R_X(pi)
    ClassicalRepresentation induced_limit;  // c(R_X(pi))
    ClassicalBimodule bimodule;         // cX
    ClassicalRepresentation base_limit; // c(pi)
    InductionResult classical;          // R_cX(c pi)
    Matrix map;                         // U: c[x (x) phi] -> [cx (x) c phi]
    bool well_defined = false;          // the defining formula holds on every plain tensor
    bool intertwines = false;
    Intertwiner unitary;
};

/// Throws PositivityViolated from either induction.
Naturality naturality_check(const Bimodule& x, const Representation& pi);

struct DeformedHomomorphism {
    Bimodule deformed;
    ClassicalBimodule limit;
    Bimodule reference;    // homomorphism bimodule of the limit of phi
    Matrix identification; // limit coordinates -> reference coordinates
    Report comparison;
};

/// phi is dim(A) x dim(B) over the deformation ring. Throws
/// NotStarHomomorphism naming the lowest failing order in lambda.
DeformedHomomorphism deformed_homomorphism_bimodule(const AlgebraRef& b, const AlgebraRef& a, const Matrix& phi);

/// Conjugation x -> u x u^* on matrix(n), as a dim x dim matrix.
Matrix conjugation_map(const Matrix& u);
/// ((1 - lambda^2) I + 2 lambda g) / (1 + lambda^2) for g = [[0,1],[-1,0]],
/// unitary over the deformation ring with limit I.
Matrix cayley_rotation();

enum class LiftStatus { Lifted, ConstantLiftFails, PreconditionFailed };
std::string_view to_string(LiftStatus s);

struct PositiveLift {
    LiftStatus status = LiftStatus::PreconditionFailed;
    PsdCertificate classical;
    std::optional<PsdCertificate> deformed;
};

/// Whether omega0, positive on the limit algebra, stays positive as a
/// lambda-constant functional on the deformed algebra. No higher-order
/// corrections are searched for.
PositiveLift positive_lift_check(const StarAlgebra& deformed, const LinearFunctional& omega0);

/// Basis {1, e} with e e = c 1 and e^* = e.
StarAlgebra square_root_algebra(const FracScalar& c);

/// Elementwise limit of an approximate identity witness.
ApproxIdentityWitness limit_witness(const ApproxIdentityWitness& w);

}  // namespace morita

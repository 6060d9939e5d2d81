#pragma once

// Rieffel induction: X (x)_A H modulo the balancing relations, the induced
// product <x (x) psi, y (x) phi> = <psi, pi(<x,y>_A) phi>, its null quotient
// and the induced representation of B.

#include <optional>
#include <vector>

#include "morita/bimodule.hpp"

namespace morita {

struct InductionResult {
    Representation base;        // the induced-from representation of A
    std::size_t tensor_dim = 0; // dim X (x) H, index p * dim(H) + s
    QuotientMap balanced;       // X (x) H -> K~
    Matrix induced_gram;        // on K~
    PsdCertificate certificate;
    QuotientMap null_map;       // K~ -> K
    Matrix to_k;                // X (x) H -> K
    Matrix from_k;              // K -> X (x) H, a section of to_k
    Representation rep;         // pi_B on K
    RepresentationReport validation;

    /// Class of x (x) psi in K.
    Vector elementary(const Vector& x, const Vector& psi) const;
};

/// Throws AlgebraMismatch, InvalidBimodule (structural axioms fail, or the
/// representation is invalid) and PositivityViolated with the witness vector.
InductionResult induce(const Bimodule& x, const Representation& pi);

/// x (x) psi -> x (x) T psi on the quotients. Throws NotIntertwiner, also when
/// the map does not descend to the null quotients.
Intertwiner induce_intertwiner(const Bimodule& x, const InductionResult& source, const InductionResult& target,
                               const Matrix& t);

/// x (x) psi -> x (x) C psi for C in the commutant of the base representation.
/// Throws NotInCommutant.
Matrix commutant_map(const Bimodule& x, const InductionResult& ind, const Matrix& c);

/// Checks that C -> commutant_map(C) lands in the commutant of pi_B and is
/// multiplicative and star-preserving on the commutant basis.
Report commutant_homomorphism_check(const Bimodule& x, const InductionResult& ind);

/// The canonical unitary from the induction of pi1 + pi2 to the sum of the
/// two inductions.
Intertwiner direct_sum_unitary(const Bimodule& x, const Representation& pi1, const Representation& pi2);

/// The (A-scalars)-bimodule A with <a, b> = omega(a^* b).
Bimodule functional_bimodule(const AlgebraRef& a, const LinearFunctional& omega);

struct GnsComparison {
    GnsResult gns;
    InductionResult induction;
    Intertwiner unitary;              // gns.rep -> induction.rep, [a] -> [a (x) 1]
    bool kernels_agree = false;       // null space of the induced product equals J_omega
    std::optional<bool> vacuum_maps_to_unit;  // psi_1 -> [1 (x) 1], unital algebras only
};

/// Throws NotPositiveFunctional.
GnsComparison gns_via_induction_compare(const AlgebraRef& a, const LinearFunctional& omega);

struct RoundTrip {
    InductionResult first;   // R_X(pi), a representation of B
    InductionResult second;  // R_Xbar(R_X(pi)), a representation of A
    Matrix plain_map;        // xbar_p (x) k -> pi(<x_p, y>_A) psi before quotienting
    Intertwiner unitary;     // second.rep -> pi
};

/// Throws NotStronglyNonDegenerate, MissingInnerB.
RoundTrip roundtrip_unitary(const Bimodule& x, const Representation& pi);

/// f(xbar (x) y) = <x,y>_A and g(x (x) ybar) = _B<x,y> as equivalence data:
/// surjectivity, balancing, bimodule maps and the two compatibility
/// conditions on basis triples. Throws NotUnital, MissingInnerB.
Report morita_context_check(const Bimodule& x);

struct CenterIsomorphism {
    std::vector<Vector> center_a;
    std::vector<Vector> center_b;
    Matrix phi;         // dim(B) x |center_a|: phi(z_i) in B coordinates
    Matrix coordinates; // |center_b| x |center_a|
    Report checks;
};

/// phi(a) is the b with x . a = b . x for all x. Throws NotUnital and
/// ContextConditionFailed when the context check or any check on phi fails.
CenterIsomorphism center_isomorphism(const Bimodule& x);

}  // namespace morita

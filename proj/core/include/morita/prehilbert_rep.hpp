#pragma once

// Inner-product modules presented as free modules with a Gram matrix, their
// *-representations, the GNS construction, commutants and intertwiners.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morita/exact_linalg.hpp"
#include "morita/report.hpp"
#include "morita/star_algebra.hpp"

namespace morita {

using AlgebraRef = std::shared_ptr<const StarAlgebra>;

inline AlgebraRef share(StarAlgebra a) { return std::make_shared<const StarAlgebra>(std::move(a)); }

/// Same pointer, or identical structure constants.
bool same_algebra(const AlgebraRef& a, const AlgebraRef& b);

/// <e_p, e_q> = gram(p, q); the product is antilinear in the first slot.
struct InnerProductModule {
    Matrix gram;

    std::size_t dim() const { return gram.rows(); }
    bool non_degenerate() const { return kernel_basis(gram).empty(); }
    FracScalar inner(const Vector& x, const Vector& y) const { return morita::inner(x, gram, y); }
};

/// Throws NotHermitian or NotPsd.
InnerProductModule make_module(Matrix gram);

struct NullQuotient {
    InnerProductModule module;  // non-degenerate
    QuotientMap map;            // projection: H -> H', section: H' -> H
};

/// Throws NotPsd.
NullQuotient quotient_by_null(const InnerProductModule& h);

/// Adjoint G^-1 A^dagger G in a non-degenerate module; throws DegenerateModule.
Matrix adjoint_in(const InnerProductModule& h, const Matrix& a);

struct Representation {
    AlgebraRef algebra;
    InnerProductModule module;
    std::vector<Matrix> ops;     // pi(e_k)
    std::vector<Vector> cyclic;  // known cyclic or pseudo-cyclic vectors

    std::size_t dim() const { return module.dim(); }
    Matrix image(const Vector& a) const;
};

struct RepresentationReport {
    Report checks;
    bool strongly_non_degenerate = false;
};

RepresentationReport validate_representation(const Representation& pi);
/// span{pi(e_k) e_p} is the whole module.
bool is_strongly_non_degenerate(const Representation& pi);
/// Whether `v` generates the module under the action.
bool is_cyclic_vector(const Representation& pi, const Vector& v);
/// Scans basis vectors for a cyclic vector.
std::optional<Vector> find_cyclic_vector(const Representation& pi);

/// The defining representation of matrix(n) on C^n with the standard product.
Representation defining_representation(const AlgebraRef& matrix_algebra);
/// The representation on the zero module.
Representation zero_representation(const AlgebraRef& a);

struct GnsResult {
    Representation rep;
    Matrix class_map;              // A -> H_omega, psi_A = class_map * A
    std::vector<Vector> gelfand;   // basis of J_omega
    PsdCertificate certificate;    // positivity of omega
    std::optional<Vector> vacuum;  // psi_1 for unital algebras
};

/// Throws NotPositiveFunctional.
GnsResult gns(const AlgebraRef& a, const LinearFunctional& omega);

/// Throws AlgebraMismatch.
Representation direct_sum(const std::vector<Representation>& reps);
Representation direct_sum(const Representation& a, const Representation& b);

/// Basis of {C : C pi(e_k) = pi(e_k) C}; throws DegenerateModule.
std::vector<Matrix> commutant_basis(const Representation& pi);
bool closed_under_adjoint(const InnerProductModule& h, const std::vector<Matrix>& basis);

struct Intertwiner {
    Matrix map;  // target.dim() x source.dim()
    bool adjointable = false;
    bool isometric = false;
    bool unitary = false;
};

/// T pi1(e_k) = pi2(e_k) T on every basis element.
bool is_intertwiner(const Representation& source, const Representation& target, const Matrix& t);
/// Classifies t exactly; throws NotIntertwiner.
Intertwiner classify_intertwiner(const Representation& source, const Representation& target, const Matrix& t);

enum class UnitaryStatus { Found, NoUnitary, Inconclusive };
std::string_view to_string(UnitaryStatus s);

struct IntertwinerSpace {
    std::vector<Matrix> basis;
    UnitaryStatus status = UnitaryStatus::Inconclusive;
    std::optional<Intertwiner> unitary;
    std::string detail;
};

/// Exact intertwiner space plus a bounded search for a unitary element:
/// combinations of basis elements with coefficients in {1, -1, i, -i}, then
/// seeded random integer combinations, each rescaled when T^dagger G2 T is a
/// rational multiple s G1 with 1/s a sum of two rational squares.
/// Throws AlgebraMismatch.
IntertwinerSpace intertwiners(const Representation& source, const Representation& target, std::uint64_t seed = 0,
                              std::size_t random_tries = 200);

/// Rescales t so that t^dagger G2 t = G1, if t^dagger G2 t = s G1 for a
/// positive rational s whose inverse is a sum of two rational squares.
std::optional<Matrix> normalize_isometry(const Matrix& t, const Matrix& g1, const Matrix& g2);

}  // namespace morita

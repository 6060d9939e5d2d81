#pragma once

// Finite-dimensional *-algebras over C given by structure constants.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morita/exact_linalg.hpp"
#include "morita/report.hpp"

namespace morita {

/// Coefficient vector stored as (index, value) pairs, sorted, zero-free.
using SparseVector = std::vector<std::pair<std::size_t, FracScalar>>;
SparseVector to_sparse(const Vector& v);
Vector to_dense(const SparseVector& v, std::size_t n);

enum class AlgebraKind { Generic, Matrix, Grassmann, Tensor, Corner };
std::string_view to_string(AlgebraKind kind);

/// A faithful *-representation rho on a module with positive definite Gram W.
/// Then a in A+ exactly when W rho(a) is positive semi-definite, which turns
/// element positivity into a matrix decision.
struct Realization {
    std::vector<Matrix> images;  // rho(e_k)
    Matrix weight;

    Matrix image(const Vector& a) const;
};

class StarAlgebra {
public:
    StarAlgebra() = default;
    /// mul[i][j] holds e_i e_j; star[i] holds e_i^*. Throws ShapeMismatch on
    /// inconsistent tables; the algebra axioms are checked by validate_algebra.
    StarAlgebra(std::vector<std::vector<SparseVector>> mul, std::vector<SparseVector> star,
                std::vector<std::string> labels = {}, AlgebraKind kind = AlgebraKind::Generic,
                std::size_t kind_param = 0);

    std::size_t dim() const noexcept { return star_.size(); }
    const SparseVector& product(std::size_t i, std::size_t j) const { return mul_[i][j]; }
    const SparseVector& star_of(std::size_t i) const { return star_[i]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    AlgebraKind kind() const noexcept { return kind_; }
    /// n for matrix(n) and grassmann(n); 0 otherwise.
    std::size_t kind_param() const noexcept { return kind_param_; }

    Vector basis(std::size_t i) const { return unit_vector(dim(), i); }
    Vector zero() const { return zero_vector(dim()); }
    Vector multiply(const Vector& a, const Vector& b) const;
    Vector star(const Vector& a) const;
    bool is_hermitian(const Vector& a) const { return star(a) == a; }
    bool is_normal(const Vector& a) const;
    /// Matrix of x -> a x, respectively x -> x a, on coefficient columns.
    Matrix left_multiplication(const Vector& a) const;
    Matrix right_multiplication(const Vector& a) const;

    const std::optional<Realization>& realization() const noexcept { return realization_; }
    void set_realization(Realization r);

    StarAlgebra map_coefficients(const std::function<FracScalar(const FracScalar&)>& f) const;
    StarAlgebra with_kind(AlgebraKind kind, std::size_t param = 0) const;
    StarAlgebra with_labels(std::vector<std::string> labels) const;

    /// Equality of structure constants and involution tables.
    friend bool same_structure(const StarAlgebra& a, const StarAlgebra& b);

private:
    std::vector<std::vector<SparseVector>> mul_;
    std::vector<SparseVector> star_;
    std::vector<std::string> labels_;
    AlgebraKind kind_ = AlgebraKind::Generic;
    std::size_t kind_param_ = 0;
    std::optional<Realization> realization_;
};

Report validate_algebra(const StarAlgebra& a);

// Built-in families.
StarAlgebra matrix_algebra(std::size_t n);
StarAlgebra grassmann_algebra(std::size_t n);
StarAlgebra scalars_algebra();
/// dim 1, e e = 0, e^* = e: no unit and no approximate identity.
StarAlgebra null_square_algebra();
StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b);
/// Basis e_i (x) f_j at index i * dim(b) + j.
StarAlgebra tensor_product(const StarAlgebra& a, const StarAlgebra& b);
/// The algebra spanned by `basis` inside `a`, which must be closed under
/// product and star (throws NotFull otherwise, naming the failing pair).
StarAlgebra subalgebra(const StarAlgebra& a, const std::vector<Vector>& basis, AlgebraKind kind = AlgebraKind::Generic);

/// Left inverse of a full-column-rank basis: coordinates(v) returns c with
/// B c = v, or nullopt when v is outside the span.
class Coordinates {
public:
    Coordinates() = default;
    Coordinates(const std::vector<Vector>& basis, std::size_t ambient_dim);
    std::optional<Vector> operator()(const Vector& v) const;
    std::size_t size() const noexcept { return basis_.cols(); }

private:
    Matrix basis_;
    Matrix left_inverse_;
};

struct LinearFunctional {
    Vector values;  // omega(e_k)
    FracScalar operator()(const Vector& a) const { return dot(conjugate(values), a); }
};

/// G_ij = omega(e_i^* e_j), so omega(a^* a) = v^dagger G v for a = sum v_i e_i.
Matrix functional_gram(const StarAlgebra& a, const LinearFunctional& omega);
PsdCertificate functional_positivity(const StarAlgebra& a, const LinearFunctional& omega);
/// A -> tr(rho A) on matrix(n).
LinearFunctional density_functional(const StarAlgebra& a, const Matrix& rho);
/// omega_1 (x) omega_2 on tensor_product(a1, a2).
LinearFunctional tensor_functional(const LinearFunctional& w1, const LinearFunctional& w2);
/// A -> omega(c^* A c).
LinearFunctional compressed_functional(const StarAlgebra& a, const LinearFunctional& omega, const Vector& c);
/// Vector state A -> <v, W rho(A) v> of a realization.
LinearFunctional vector_state(const Realization& r, const Vector& v);
bool is_real_functional(const StarAlgebra& a, const LinearFunctional& omega);

struct PositiveWitness {
    FracScalar weight;  // b_i > 0
    Vector element;     // B_i
};

enum class PositivityVerdict { PositiveCertified, AlgebraicallyPositiveCertified, NegativeCertified, Unknown };
std::string_view to_string(PositivityVerdict v);

struct ElementPositivity {
    PositivityVerdict verdict = PositivityVerdict::Unknown;
    std::optional<LinearFunctional> functional;  // set for NegativeCertified
    std::optional<Vector> state_vector;          // vector defining that functional
    std::optional<PsdCertificate> certificate;   // matrix decision, when one ran
};

/// Checks a = sum b_i B_i^* B_i exactly with all b_i > 0.
bool verify_positive_witnesses(const StarAlgebra& a, const Vector& element, const std::vector<PositiveWitness>& w);
/// Throws NotHermitian. `faithful` overrides the algebra's own realization.
ElementPositivity element_positivity(const StarAlgebra& a, const Vector& element,
                                     const std::vector<PositiveWitness>& witnesses = {},
                                     const std::optional<Realization>& faithful = std::nullopt);

struct NilpotentCertificate {
    Vector element;
    std::size_t exponent = 0;  // smallest k with h^k = 0
};
std::optional<NilpotentCertificate> nilpotent_normal_scan(const StarAlgebra& a);
bool verify_nilpotent(const StarAlgebra& a, const NilpotentCertificate& c);

struct ApproxIdentityWitness {
    std::vector<Vector> elements;                      // E_alpha in index order
    std::vector<std::vector<std::size_t>> filtration;  // basis indices spanning A_alpha
};

struct IdentityStructure {
    std::optional<Vector> unit;
    bool witness_valid = false;
    bool has_structure() const { return unit.has_value() || witness_valid; }
};

std::optional<Vector> find_unit(const StarAlgebra& a);
/// Throws InvalidWitness naming the first failing identity.
void validate_approx_identity(const StarAlgebra& a, const ApproxIdentityWitness& w);
IdentityStructure identity_structure(const StarAlgebra& a, const ApproxIdentityWitness* witness = nullptr);

/// Basis of the center, as a kernel of the commutator maps.
std::vector<Vector> center_basis(const StarAlgebra& a);

/// phi is dim(target) x dim(source), acting on coefficient columns.
Report check_star_homomorphism(const StarAlgebra& source, const StarAlgebra& target, const Matrix& phi);

/// Entrywise lambda -> 0 on structure constants and involution.
StarAlgebra classical_limit_algebra(const StarAlgebra& a);
LinearFunctional classical_limit_functional(const LinearFunctional& omega);

}  // namespace morita

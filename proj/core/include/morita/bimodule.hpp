#pragma once

// Rigged (B-A)-bimodules presented on a finite basis x_1..x_m.
//
// Conventions: left[b] and right[a] act on coordinate columns, so the right
// action is anti-multiplicative as a matrix map, R(a a') = R(a') R(a).
// inner_a(p, q) = <x_p, x_q>_A is antilinear in p, while the B-valued
// product inner_b(p, q) = _B<x_p, x_q> is linear in p.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morita/prehilbert_rep.hpp"

namespace morita {

using InnerTable = std::vector<std::vector<Vector>>;

/// One orthogonal summand X^(i) together with its pseudo-cyclic vectors.
/// The filtration is X^(i)_k = Omega_k . algebra, in index order, and must
/// exhaust span(basis) at the last vector.
struct PseudoCyclicPiece {
    std::vector<Vector> basis;
    std::vector<Vector> vectors;
};

struct CyclicStructure {
    std::vector<PseudoCyclicPiece> pieces;
};

struct Bimodule {
    AlgebraRef algebra_b;  // acts from the left
    AlgebraRef algebra_a;  // acts from the right
    std::size_t dim = 0;
    std::vector<Matrix> left;   // L(e_b), one per basis element of B
    std::vector<Matrix> right;  // R(e_a), one per basis element of A
    InnerTable inner_a;
    std::optional<InnerTable> inner_b;
    std::optional<CyclicStructure> p_structure;  // for the right A-action
    std::optional<CyclicStructure> q_structure;  // for the left B-action

    Matrix act_left(const Vector& b) const;
    Matrix act_right(const Vector& a) const;
    Vector product_a(const Vector& x, const Vector& y) const;
    /// Throws MissingInnerB.
    Vector product_b(const Vector& x, const Vector& y) const;
};

enum class ValidationLevel { Rigged, Equivalence };
std::string_view to_string(ValidationLevel level);

struct ValidationOptions {
    /// Positive functionals used for X4/Y4 when the algebra has no faithful
    /// realization. When empty a default family is generated from the
    /// coordinate functionals and their pairwise sums, keeping only the ones
    /// certified positive.
    std::vector<LinearFunctional> functionals_a;
    std::vector<LinearFunctional> functionals_b;
    /// Search for cyclic structures when the bimodule carries none.
    bool search_cyclic = true;
};

/// Report with checks named after the axioms; details name the first
/// failing basis tuple (1-based) and, for X4/Y4, the regime that decided it.
Report validate_bimodule(const Bimodule& x, ValidationLevel level, const ValidationOptions& options = {});

/// Validates a claimed cyclic structure for the right action (right_side) or
/// the left action. Checks are named P1..P3 or Q1..Q3.
Report validate_cyclic_structure(const Bimodule& x, const CyclicStructure& s, bool right_side);

/// Scans basis vectors for an orthogonal decomposition into cyclic pieces,
/// then falls back to a single cyclic basis vector for the whole module.
std::optional<CyclicStructure> find_cyclic_structure(const Bimodule& x, bool right_side);

/// Whether sum conj(c_p) c_q h(p, q) lies in A+ for every coefficient vector.
/// With a realization the block matrix [W rho(h(p,q))] is decided (a
/// sufficient test) and small combinations are tried for a refutation;
/// otherwise every functional's pairing matrix [omega(h(p,q))] is decided.
struct TablePositivity {
    bool positive = false;
    bool certified = false;  // proven either way; false for the functional-family regime
    std::string regime;
    std::optional<Vector> refuting_vector;
};
TablePositivity table_positivity(const StarAlgebra& a, const InnerTable& h,
                                 const std::vector<LinearFunctional>& functionals = {});

/// The (A-B)-bimodule with actions a.xbar = conj(x.a^*), xbar.b = conj(b^*.x)
/// and the two products swapped. Throws MissingInnerB.
Bimodule conjugate(const Bimodule& x);

struct BimoduleQuotient {
    Bimodule bimodule;
    QuotientMap map;
    std::vector<Vector> radical_a;  // {x : <x, .>_A = 0}
    std::vector<Vector> radical_b;  // {x : _B<x, .> = 0}
    bool radicals_agree = false;
    bool definite = false;  // <x,x> = 0 implies x = 0 on the quotient, when decided
};

/// Quotient by the joint radical. Throws NoIdentityStructure or MissingInnerB.
BimoduleQuotient quotient_by_null(const Bimodule& x);
/// Quotient by the radical of <.,.>_A alone; radical_b and radicals_agree are
/// filled in only when the B-valued product exists.
BimoduleQuotient quotient_by_radical(const Bimodule& x);

/// T: X -> Y (dim Y x dim X) is a bijection intertwining both actions and
/// preserving the products. Checks: shape, bijective, left-action,
/// right-action, inner-A and, when both modules carry one, inner-B.
Report bimodule_isomorphism_check(const Bimodule& x, const Bimodule& y, const Matrix& t);

/// Balanced tensor X (x)_A Y of a (B-A) and an (A-C) bimodule, with
/// <<x1(x)y1, x2(x)y2>>_C = <y1, <x1,x2>_A . y2>_C and, when both B-valued
/// products exist, _B<<x1(x)y1, x2(x)y2>> = _B<x1 . _A<y1,y2>, x2>; null
/// vectors of the C-valued product are divided out. Throws
/// MiddleAlgebraMismatch, MissingCyclicWitness.
struct BalancedTensor {
    Bimodule bimodule;
    QuotientMap relations;     // plain tensor -> balanced tensor, index p * dim(Y) + s
    QuotientMap null_quotient; // balanced tensor -> its non-degenerate quotient
};
BalancedTensor tensor_bimodules(const Bimodule& x, const Bimodule& y);

/// (B1 (x) B2)-(A1 (x) A2) bimodule on X1 (x) X2, index p * dim(X2) + s.
Bimodule external_tensor(const Bimodule& x1, const Bimodule& x2);

/// Theta_{x,y}(z) = x . <y,z>_A as a matrix on coordinates.
Matrix theta(const Bimodule& x, const Vector& u, const Vector& v);

struct FiniteRankAlgebra {
    AlgebraRef algebra;                  // span of the Theta_{e_p,e_q}
    std::vector<Matrix> operators;       // basis operators
    std::vector<std::pair<std::size_t, std::size_t>> basis_pairs;  // (p, q) of each basis Theta
    std::optional<Matrix> left_map;      // L_B: B -> K, dim K x dim B
    Report isomorphism;                  // checks on L_B, empty when no inner_b
    /// Coordinates of an operator in K, if it lies there.
    std::optional<Vector> coordinates(const Matrix& op) const;
};

/// Throws DegenerateRiggedModule when the span of the Theta is not closed
/// or the involution Theta_{x,y}^* = Theta_{y,x} is inconsistent.
FiniteRankAlgebra finite_rank_algebra(const Bimodule& x);

/// The (M_n(A)-A)-bimodule A^n, index i * dim(A) + a; M_n(A) is matrix(n)
/// when A is the scalars and tensor_product(matrix(n), A) otherwise.
/// Throws BadParams for n = 0 and NoIdentityStructure.
Bimodule free_module_bimodule(const AlgebraRef& a, std::size_t n,
                              const ApproxIdentityWitness* witness = nullptr);

/// The algebra M_n(A) used by free_module_bimodule.
AlgebraRef matrix_over(const AlgebraRef& a, std::size_t n);

/// Module A, left action through phi, right multiplication, <a,a'> = a^* a'.
/// When phi is invertible the B-valued product phi^-1(a1 a2^*) is added.
/// phi is dim(A) x dim(B). Throws NotStarHomomorphism.
Bimodule homomorphism_bimodule(const AlgebraRef& b, const AlgebraRef& a, const Matrix& phi);

struct CornerBimodule {
    Bimodule bimodule;      // K Q as a (K - QKQ)-bimodule
    AlgebraRef corner;      // Q K Q
    std::size_t fullness_rank = 0;
    std::vector<Vector> module_basis;  // elements of K spanning K Q
    std::optional<Vector> z;           // vector with <Qz, Qz> invertible
    Report validation;
};

/// q is an element of K = matrix_over(a, size). Throws NotProjection,
/// NotFull (with the deficient rank), NoIdentityStructure.
CornerBimodule corner_bimodule(const AlgebraRef& a, std::size_t size, const Vector& q);
/// Convenience for a = scalars: q is a size x size matrix.
CornerBimodule corner_bimodule(const Matrix& q);

}  // namespace morita

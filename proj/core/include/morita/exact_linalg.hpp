#pragma once

// Exact matrices over the fraction field C^, together with the
// square-root-free Hermitian congruence diagonalization that decides
// positive semi-definiteness with a replayable certificate.

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "morita/rings.hpp"

namespace morita {

using Vector = std::vector<FracScalar>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);
    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diagonal(const Vector& d);
    static Matrix from_rows(const std::vector<Vector>& rows);
    static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows);
    static Matrix column_vector(const Vector& v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    FracScalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const FracScalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector row(std::size_t r) const;
    Vector column(std::size_t c) const;

    Matrix adjoint() const;
    Matrix transpose() const;
    Matrix conjugate() const;

    bool is_zero() const;
    bool is_hermitian() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(const FracScalar& s);
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const FracScalar& s, Matrix m) { return m *= s; }
    friend Vector operator*(const Matrix& m, const Vector& v);
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    /// Entrywise map, used for classical limits and conjugations.
    template <typename F>
    Matrix map(F&& f) const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = f(data_[k]);
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<FracScalar> data_;
};

// Vector helpers. Inner products are antilinear in the first argument.
Vector zero_vector(std::size_t n);
Vector unit_vector(std::size_t n, std::size_t k);
bool is_zero(const Vector& v);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(const FracScalar& s, const Vector& v);
Vector conjugate(const Vector& v);
FracScalar dot(const Vector& v, const Vector& w);  // sum conj(v_k) w_k
FracScalar inner(const Vector& v, const Matrix& gram, const Vector& w);  // v^dagger G w
Vector kron(const Vector& a, const Vector& b);

Matrix kron(const Matrix& a, const Matrix& b);
FracScalar trace(const Matrix& m);
Matrix direct_sum(const Matrix& a, const Matrix& b);

struct RowEchelon {
    Matrix reduced;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form with first-nonzero pivoting in index order.
RowEchelon row_reduce(Matrix m);
std::size_t rank(const Matrix& m);
std::size_t rank(const std::vector<Vector>& vectors, std::size_t dim);
/// Basis of { v : M v = 0 }; one vector per free column, in column order.
std::vector<Vector> kernel_basis(const Matrix& m);
/// A particular solution of M x = b, or nullopt when inconsistent.
std::optional<Vector> solve(const Matrix& m, const Vector& b);
std::optional<Matrix> inverse(const Matrix& m);
/// Indices of a maximal linearly independent prefix-greedy subfamily.
std::vector<std::size_t> independent_subset(const std::vector<Vector>& vectors, std::size_t dim);
/// Whether every vector of `sub` lies in span(`space`).
bool span_contains(const std::vector<Vector>& space, const std::vector<Vector>& sub, std::size_t dim);

/// Presentation of C^n / W with W = span(spanning): `section` (n x k) has as
/// columns the standard vectors complementing W, chosen by pivot order, and
/// `projection` (k x n) satisfies projection * section = I and kills W.
struct QuotientMap {
    Matrix section;
    Matrix projection;
    std::vector<Vector> subspace;  // a basis of W
    std::size_t ambient_dim = 0;
    std::size_t dim() const { return section.cols(); }
};
QuotientMap quotient_by(const std::vector<Vector>& spanning, std::size_t n);

/// rows of U... basis vectors v_i with <v_i, rho v_j> = delta_ij p_i.
struct CongruenceResult {
    std::vector<Vector> basis;  // v_1..v_n, ring-valued and primitive
    Vector diagonal;            // p_i = <v_i, rho v_i>, real
    /// Matrix whose columns are the v_i, so adjoint(U)^-1 diag(p) U^-1 = rho.
    Matrix basis_matrix() const;
};

enum class PsdVerdict { Positive, NotPositive };

struct PsdCertificate {
    PsdVerdict verdict = PsdVerdict::Positive;
    CongruenceResult congruence;
    std::optional<Vector> witness;            // set iff not positive
    std::optional<FracScalar> witness_value;  // <w, rho w> < 0
    bool positive() const { return verdict == PsdVerdict::Positive; }
};

/// Square-root-free congruence diagonalization; throws NotHermitian.
CongruenceResult congruence_diagonalize(const Matrix& rho);
PsdCertificate psd_decide(const Matrix& rho);
/// Exact replay of every claim in the certificate against rho.
bool replay(const PsdCertificate& cert, const Matrix& rho);
/// Entries forced to vanish in a PSD matrix by zero diagonal entries
/// (0-based index pairs). Throws NotPsd if G is not PSD.
std::set<std::pair<std::size_t, std::size_t>> forced_zero_entries(const Matrix& g);

/// Scales v by a positive element so it is ring-valued with coprime
/// coefficients and its first nonzero entry is "positive".
Vector primitive_ring_vector(const Vector& v);

}  // namespace morita

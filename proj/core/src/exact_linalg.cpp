#include "morita/exact_linalg.hpp"

#include <gmpxx.h>

#include <string>

namespace morita {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::ShapeMismatch, what);
}

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = FracScalar(1);
    return m;
}

Matrix Matrix::diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(rows[r].size() == m.cols_, "ragged rows");
        for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        require(cols[c].size() == rows, "column length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
    }
    return m;
}

Matrix Matrix::column_vector(const Vector& v) { return from_columns({v}, v.size()); }

Vector Matrix::row(std::size_t r) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c).conj();
    return m;
}

Matrix Matrix::transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
}

Matrix Matrix::conjugate() const {
    return map([](const FracScalar& z) { return z.conj(); });
}

bool Matrix::is_zero() const {
    for (const auto& z : data_)
        if (!z.is_zero()) return false;
    return true;
}

bool Matrix::is_hermitian() const {
    if (!is_square()) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            if ((*this)(r, c) != (*this)(c, r).conj()) return false;
    return true;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, "cannot add " + shape(*this) + " and " + shape(o));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, "cannot subtract " + shape(o) + " from " + shape(*this));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(const FracScalar& s) {
    for (auto& z : data_) z *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_, "cannot multiply " + shape(a) + " by " + shape(b));
    Matrix m(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const FracScalar& x = a(r, k);
            if (x.is_zero()) continue;
            for (std::size_t c = 0; c < b.cols_; ++c) {
                const FracScalar& y = b(k, c);
                if (!y.is_zero()) m(r, c) += x * y;
            }
        }
    return m;
}

Vector operator*(const Matrix& m, const Vector& v) {
    require(m.cols_ == v.size(), "cannot apply " + shape(m) + " to a vector of length " + std::to_string(v.size()));
    Vector out(m.rows_);
    for (std::size_t r = 0; r < m.rows_; ++r)
        for (std::size_t c = 0; c < m.cols_; ++c)
            if (!m(r, c).is_zero() && !v[c].is_zero()) out[r] += m(r, c) * v[c];
    return out;
}

// ---------------------------------------------------------------------------
// Vectors

Vector zero_vector(std::size_t n) { return Vector(n); }

Vector unit_vector(std::size_t n, std::size_t k) {
    Vector v(n);
    v.at(k) = FracScalar(1);
    return v;
}

bool is_zero(const Vector& v) {
    for (const auto& z : v)
        if (!z.is_zero()) return false;
    return true;
}

Vector operator+(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "vector length mismatch");
    Vector r = a;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += b[k];
    return r;
}

Vector operator-(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "vector length mismatch");
    Vector r = a;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
    return r;
}

Vector operator*(const FracScalar& s, const Vector& v) {
    Vector r = v;
    for (auto& z : r) z *= s;
    return r;
}

Vector conjugate(const Vector& v) {
    Vector r = v;
    for (auto& z : r) z = z.conj();
    return r;
}

FracScalar dot(const Vector& v, const Vector& w) {
    require(v.size() == w.size(), "vector length mismatch");
    FracScalar s;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!v[k].is_zero() && !w[k].is_zero()) s += v[k].conj() * w[k];
    return s;
}

FracScalar inner(const Vector& v, const Matrix& gram, const Vector& w) { return dot(v, gram * w); }

Vector kron(const Vector& a, const Vector& b) {
    Vector r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
    }
    return r;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const FracScalar& x = a(i, j);
            if (x.is_zero()) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    if (!b(k, l).is_zero()) m(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
        }
    return m;
}

FracScalar trace(const Matrix& m) {
    require(m.is_square(), "trace of non-square " + shape(m));
    FracScalar t;
    for (std::size_t k = 0; k < m.rows(); ++k) t += m(k, k);
    return t;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, a.cols() + c) = b(r, c);
    return m;
}

// ---------------------------------------------------------------------------
// Row reduction

RowEchelon row_reduce(Matrix m) {
    RowEchelon out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
        const FracScalar inv = inverse(m(row, col));
        for (std::size_t c = col; c < m.cols(); ++c)
            if (!m(row, c).is_zero()) m(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col).is_zero()) continue;
            const FracScalar f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c)
                if (!m(row, c).is_zero()) m(r, c) -= f * m(row, c);
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.reduced = std::move(m);
    return out;
}

std::size_t rank(const Matrix& m) { return row_reduce(m).pivots.size(); }

std::size_t rank(const std::vector<Vector>& vectors, std::size_t dim) {
    if (vectors.empty()) return 0;
    Matrix m(vectors.size(), dim);
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        require(vectors[r].size() == dim, "vector length mismatch");
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = vectors[r][c];
    }
    return rank(m);
}

std::vector<Vector> kernel_basis(const Matrix& m) {
    const RowEchelon e = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vector v(m.cols());
        v[f] = FracScalar(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vector> solve(const Matrix& m, const Vector& b) {
    require(m.rows() == b.size(), "right-hand side length mismatch");
    Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
        aug(r, m.cols()) = b[r];
    }
    const RowEchelon e = row_reduce(std::move(aug));
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
    Vector x(m.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
    return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
    require(m.is_square(), "inverse of non-square " + shape(m));
    const std::size_t n = m.rows();
    if (n == 0) return Matrix(0, 0);
    Matrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
        aug(r, n + r) = FracScalar(1);
    }
    const RowEchelon e = row_reduce(std::move(aug));
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
    return inv;
}

std::vector<std::size_t> independent_subset(const std::vector<Vector>& vectors, std::size_t dim) {
    if (vectors.empty()) return {};
    // Pivot columns of the matrix with the vectors as columns.
    const RowEchelon e = row_reduce(Matrix::from_columns(vectors, dim));
    return e.pivots;
}

bool span_contains(const std::vector<Vector>& space, const std::vector<Vector>& sub, std::size_t dim) {
    const std::size_t r = rank(space, dim);
    std::vector<Vector> all = space;
    all.insert(all.end(), sub.begin(), sub.end());
    return rank(all, dim) == r;
}

QuotientMap quotient_by(const std::vector<Vector>& spanning, std::size_t n) {
    QuotientMap q;
    q.ambient_dim = n;
    std::vector<bool> is_pivot(n, false);
    if (!spanning.empty()) {
        const RowEchelon e = row_reduce(Matrix::from_rows(spanning));
        for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            is_pivot[e.pivots[r]] = true;
            q.subspace.push_back(e.reduced.row(r));
        }
    }
    std::vector<Vector> cols;
    for (std::size_t k = 0; k < n; ++k)
        if (!is_pivot[k]) cols.push_back(unit_vector(n, k));
    const std::size_t k = cols.size();
    q.section = Matrix::from_columns(cols, n);
    std::vector<Vector> full = cols;
    full.insert(full.end(), q.subspace.begin(), q.subspace.end());
    const auto inv = inverse(Matrix::from_columns(full, n));
    q.projection = Matrix(k, n);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < n; ++c) q.projection(r, c) = (*inv)(r, c);
    return q;
}

// ---------------------------------------------------------------------------
// Congruence diagonalization

Vector primitive_ring_vector(const Vector& v) {
    Vector w = v;
    std::size_t first = w.size();
    for (std::size_t k = 0; k < w.size(); ++k)
        if (!w[k].is_zero()) {
            first = k;
            break;
        }
    if (first == w.size()) return w;

    BaseElement common(1);
    for (const auto& z : w) {
        if (z.is_zero() || z.denominator().is_constant()) continue;
        const BaseElement g = gcd(common, z.denominator());
        common = BaseElement::exact_divide(common * z.denominator(), g);
    }
    if (!common.is_constant())
        for (auto& z : w) z *= FracScalar(common);

    BaseElement g;
    for (const auto& z : w) {
        if (z.is_zero()) continue;
        g = gcd(g, z.numerator().re());
        g = gcd(g, z.numerator().im());
        if (g.is_constant()) break;
    }
    if (!g.is_constant())
        for (auto& z : w)
            z = FracScalar(Scalar(BaseElement::exact_divide(z.numerator().re(), g),
                                  BaseElement::exact_divide(z.numerator().im(), g)));

    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& z : w)
        for (const BaseElement* part : {&z.numerator().re(), &z.numerator().im()})
            for (const auto& c : part->coefficients()) {
                if (c == 0) continue;
                mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
                mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
            }
    Rational factor(den_lcm, num_gcd);
    factor.canonicalize();
    const FracScalar content(factor);
    if (!content.is_one())
        for (auto& z : w) z *= content;

    const Scalar& lead = w[first].numerator();
    FracScalar unit(1);
    if (lead.re().is_zero())
        unit = lead.im().sign() > 0 ? -FracScalar::i() : FracScalar::i();
    else if (lead.re().sign() < 0)
        unit = FracScalar(-1);
    if (!unit.is_one())
        for (auto& z : w) z *= unit;
    return w;
}

Matrix CongruenceResult::basis_matrix() const {
    return Matrix::from_columns(basis, basis.empty() ? 0 : basis[0].size());
}

CongruenceResult congruence_diagonalize(const Matrix& rho) {
    if (!rho.is_hermitian()) throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian");
    const std::size_t n = rho.rows();
    // Invariant: w(j, k) = <v_j, rho v_k>.
    std::vector<Vector> v;
    for (std::size_t k = 0; k < n; ++k) v.push_back(unit_vector(n, k));
    Matrix w = rho;

    auto add_to = [&](std::size_t j, std::size_t k, const FracScalar& c) {
        // v_j += c v_k; as a congruence: column j += c col k, row j += conj(c) row k.
        for (std::size_t t = 0; t < n; ++t) v[j][t] += c * v[k][t];
        for (std::size_t r = 0; r < n; ++r)
            if (!w(r, k).is_zero()) w(r, j) += c * w(r, k);
        const FracScalar cc = c.conj();
        for (std::size_t t = 0; t < n; ++t)
            if (!w(k, t).is_zero()) w(j, t) += cc * w(k, t);
    };
    auto swap_idx = [&](std::size_t a, std::size_t b) {
        std::swap(v[a], v[b]);
        for (std::size_t t = 0; t < n; ++t) std::swap(w(a, t), w(b, t));
        for (std::size_t t = 0; t < n; ++t) std::swap(w(t, a), w(t, b));
    };

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t p = i;
        while (p < n && w(p, p).is_zero()) ++p;
        if (p == n) {
            bool found = false;
            for (std::size_t a = i; a < n && !found; ++a)
                for (std::size_t b = a + 1; b < n && !found; ++b) {
                    const FracScalar x = w(a, b);
                    if (x.is_zero()) continue;
                    add_to(a, b, x.real_part().is_zero() ? FracScalar::i() : FracScalar(1));
                    p = a;
                    found = true;
                }
            if (!found) break;
        }
        if (p != i) swap_idx(i, p);
        const FracScalar inv = inverse(w(i, i));
        for (std::size_t k = i + 1; k < n; ++k)
            if (!w(i, k).is_zero()) add_to(k, i, -(w(i, k) * inv));
    }

    CongruenceResult out;
    for (auto& vec : v) {
        Vector pv = primitive_ring_vector(vec);
        out.diagonal.push_back(inner(pv, rho, pv));
        out.basis.push_back(std::move(pv));
    }
    return out;
}

PsdCertificate psd_decide(const Matrix& rho) {
    PsdCertificate cert;
    cert.congruence = congruence_diagonalize(rho);
    for (std::size_t i = 0; i < cert.congruence.diagonal.size(); ++i) {
        if (cert.congruence.diagonal[i].sign() < 0) {
            cert.verdict = PsdVerdict::NotPositive;
            cert.witness = cert.congruence.basis[i];
            cert.witness_value = cert.congruence.diagonal[i];
            break;
        }
    }
    return cert;
}

bool replay(const PsdCertificate& cert, const Matrix& rho) {
    if (!rho.is_hermitian()) return false;
    const std::size_t n = rho.rows();
    const auto& c = cert.congruence;
    if (c.basis.size() != n || c.diagonal.size() != n) return false;
    for (const auto& b : c.basis)
        if (b.size() != n) return false;
    if (rank(c.basis, n) != n) return false;
    bool all_nonneg = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Vector rv = rho * c.basis[i];
        for (std::size_t j = 0; j < n; ++j) {
            const FracScalar x = dot(c.basis[j], rv);
            if (i == j ? x != c.diagonal[i] : !x.is_zero()) return false;
        }
        if (!c.diagonal[i].is_real()) return false;
        if (c.diagonal[i].sign() < 0) all_nonneg = false;
    }
    if (cert.positive()) return all_nonneg && !cert.witness;
    if (!cert.witness || !cert.witness_value || all_nonneg) return false;
    const FracScalar val = inner(*cert.witness, rho, *cert.witness);
    return val == *cert.witness_value && val.sign() < 0;
}

std::set<std::pair<std::size_t, std::size_t>> forced_zero_entries(const Matrix& g) {
    if (!psd_decide(g).positive()) throw Error(ErrorKind::NotPsd, "Gram matrix is not positive semi-definite");
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        if (!g(i, i).is_zero()) continue;
        for (std::size_t j = 0; j < g.cols(); ++j) {
            out.emplace(i, j);
            out.emplace(j, i);
        }
    }
    return out;
}

}  // namespace morita

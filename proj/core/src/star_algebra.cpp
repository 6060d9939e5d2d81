#include "morita/star_algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace morita {

SparseVector to_sparse(const Vector& v) {
    SparseVector s;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!v[k].is_zero()) s.emplace_back(k, v[k]);
    return s;
}

Vector to_dense(const SparseVector& v, std::size_t n) {
    Vector d(n);
    for (const auto& [k, z] : v) d.at(k) = z;
    return d;
}

std::string_view to_string(AlgebraKind kind) {
    switch (kind) {
        case AlgebraKind::Generic: return "generic";
        case AlgebraKind::Matrix: return "matrix";
        case AlgebraKind::Grassmann: return "grassmann";
        case AlgebraKind::Tensor: return "tensor";
        case AlgebraKind::Corner: return "corner";
    }
    return "generic";
}

Matrix Realization::image(const Vector& a) const {
    Matrix m(weight.rows(), weight.rows());
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!a[k].is_zero()) m += a[k] * images[k];
    return m;
}

// ---------------------------------------------------------------------------
// StarAlgebra

StarAlgebra::StarAlgebra(std::vector<std::vector<SparseVector>> mul, std::vector<SparseVector> star,
                         std::vector<std::string> labels, AlgebraKind kind, std::size_t kind_param)
    : mul_(std::move(mul)), star_(std::move(star)), labels_(std::move(labels)), kind_(kind), kind_param_(kind_param) {
    const std::size_t n = star_.size();
    if (mul_.size() != n) throw Error(ErrorKind::ShapeMismatch, "product table has wrong number of rows");
    for (const auto& row : mul_)
        if (row.size() != n) throw Error(ErrorKind::ShapeMismatch, "product table row has wrong length");
    auto check = [n](const SparseVector& s) {
        for (const auto& [k, z] : s)
            if (k >= n) throw Error(ErrorKind::ShapeMismatch, "basis index out of range in table");
    };
    for (const auto& row : mul_)
        for (const auto& s : row) check(s);
    for (const auto& s : star_) check(s);
    if (labels_.empty())
        for (std::size_t k = 0; k < n; ++k) labels_.push_back("e" + std::to_string(k + 1));
    if (labels_.size() != n) throw Error(ErrorKind::ShapeMismatch, "label count does not match dimension");
}

Vector StarAlgebra::multiply(const Vector& a, const Vector& b) const {
    if (a.size() != dim() || b.size() != dim()) throw Error(ErrorKind::ShapeMismatch, "element of wrong dimension");
    Vector r(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (b[j].is_zero()) continue;
            const SparseVector& p = mul_[i][j];
            if (p.empty()) continue;
            const FracScalar c = a[i] * b[j];
            for (const auto& [k, z] : p) r[k] += c * z;
        }
    }
    return r;
}

Vector StarAlgebra::star(const Vector& a) const {
    if (a.size() != dim()) throw Error(ErrorKind::ShapeMismatch, "element of wrong dimension");
    Vector r(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (a[i].is_zero()) continue;
        const FracScalar c = a[i].conj();
        for (const auto& [k, z] : star_[i]) r[k] += c * z;
    }
    return r;
}

bool StarAlgebra::is_normal(const Vector& a) const {
    const Vector s = star(a);
    return multiply(s, a) == multiply(a, s);
}

Matrix StarAlgebra::left_multiplication(const Vector& a) const {
    Matrix m(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        const Vector col = multiply(a, basis(j));
        for (std::size_t k = 0; k < dim(); ++k) m(k, j) = col[k];
    }
    return m;
}

Matrix StarAlgebra::right_multiplication(const Vector& a) const {
    Matrix m(dim(), dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        const Vector col = multiply(basis(j), a);
        for (std::size_t k = 0; k < dim(); ++k) m(k, j) = col[k];
    }
    return m;
}

void StarAlgebra::set_realization(Realization r) {
    if (r.images.size() != dim()) throw Error(ErrorKind::ShapeMismatch, "realization needs one image per basis element");
    for (const auto& m : r.images)
        if (m.rows() != r.weight.rows() || m.cols() != r.weight.cols())
            throw Error(ErrorKind::ShapeMismatch, "realization image has wrong shape");
    realization_ = std::move(r);
}

StarAlgebra StarAlgebra::map_coefficients(const std::function<FracScalar(const FracScalar&)>& f) const {
    auto map_sparse = [&](const SparseVector& s) {
        SparseVector out;
        for (const auto& [k, z] : s) {
            FracScalar w = f(z);
            if (!w.is_zero()) out.emplace_back(k, std::move(w));
        }
        return out;
    };
    std::vector<std::vector<SparseVector>> mul(dim(), std::vector<SparseVector>(dim()));
    std::vector<SparseVector> st(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        st[i] = map_sparse(star_[i]);
        for (std::size_t j = 0; j < dim(); ++j) mul[i][j] = map_sparse(mul_[i][j]);
    }
    return StarAlgebra(std::move(mul), std::move(st), labels_, kind_, kind_param_);
}

StarAlgebra StarAlgebra::with_kind(AlgebraKind kind, std::size_t param) const {
    StarAlgebra a = *this;
    a.kind_ = kind;
    a.kind_param_ = param;
    return a;
}

StarAlgebra StarAlgebra::with_labels(std::vector<std::string> labels) const {
    if (labels.size() != dim()) throw Error(ErrorKind::ShapeMismatch, "label count does not match dimension");
    StarAlgebra a = *this;
    a.labels_ = std::move(labels);
    return a;
}

bool same_structure(const StarAlgebra& a, const StarAlgebra& b) { return a.mul_ == b.mul_ && a.star_ == b.star_; }

// ---------------------------------------------------------------------------
// Validation

Report validate_algebra(const StarAlgebra& a) {
    Report report;
    const std::size_t n = a.dim();
    const auto& lab = a.labels();

    std::string assoc_detail;
    bool assoc = true;
    for (std::size_t i = 0; i < n && assoc; ++i)
        for (std::size_t j = 0; j < n && assoc; ++j) {
            const SparseVector& ij = a.product(i, j);
            for (std::size_t k = 0; k < n && assoc; ++k) {
                Vector left(n), right(n);
                for (const auto& [t, c] : ij)
                    for (const auto& [s, z] : a.product(t, k)) left[s] += c * z;
                for (const auto& [t, c] : a.product(j, k))
                    for (const auto& [s, z] : a.product(i, t)) right[s] += c * z;
                if (left != right) {
                    assoc = false;
                    assoc_detail = "(" + lab[i] + " " + lab[j] + ") " + lab[k] + " != " + lab[i] + " (" + lab[j] + " " +
                                   lab[k] + ") at indices (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                   "," + std::to_string(k + 1) + ")";
                }
            }
        }
    report.add("associativity", assoc, assoc_detail);

    bool invol = true;
    std::string invol_detail;
    for (std::size_t i = 0; i < n && invol; ++i)
        if (a.star(to_dense(a.star_of(i), n)) != a.basis(i)) {
            invol = false;
            invol_detail = "star(star(" + lab[i] + ")) != " + lab[i];
        }
    report.add("involution", invol, invol_detail);

    bool anti = true;
    std::string anti_detail;
    for (std::size_t i = 0; i < n && anti; ++i)
        for (std::size_t j = 0; j < n && anti; ++j) {
            const Vector lhs = a.star(to_dense(a.product(i, j), n));
            const Vector rhs = a.multiply(to_dense(a.star_of(j), n), to_dense(a.star_of(i), n));
            if (lhs != rhs) {
                anti = false;
                anti_detail = "star(" + lab[i] + " " + lab[j] + ") != star(" + lab[j] + ") star(" + lab[i] + ")";
            }
        }
    report.add("anti-multiplicativity", anti, anti_detail);
    return report;
}

// ---------------------------------------------------------------------------
// Built-in families

StarAlgebra matrix_algebra(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::BadParams, "matrix algebra needs n >= 1");
    const std::size_t d = n * n;
    std::vector<std::vector<SparseVector>> mul(d, std::vector<SparseVector>(d));
    std::vector<SparseVector> st(d);
    std::vector<std::string> labels(d);
    Realization real;
    real.weight = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t a = i * n + j;
            st[a] = {{j * n + i, FracScalar(1)}};
            labels[a] = n < 10 ? "E" + std::to_string(i + 1) + std::to_string(j + 1)
                               : "E" + std::to_string(i + 1) + "," + std::to_string(j + 1);
            for (std::size_t l = 0; l < n; ++l) mul[a][j * n + l] = {{i * n + l, FracScalar(1)}};
            Matrix e(n, n);
            e(i, j) = FracScalar(1);
            real.images.push_back(std::move(e));
        }
    StarAlgebra alg(std::move(mul), std::move(st), std::move(labels), AlgebraKind::Matrix, n);
    alg.set_realization(std::move(real));
    return alg;
}

StarAlgebra scalars_algebra() { return matrix_algebra(1).with_labels({"1"}); }

StarAlgebra null_square_algebra() {
    return StarAlgebra({{SparseVector{}}}, {{{0, FracScalar(1)}}}, {"e"}, AlgebraKind::Generic, 0);
}

StarAlgebra grassmann_algebra(std::size_t n) {
    if (n == 0 || n > 12) throw Error(ErrorKind::BadParams, "grassmann algebra needs 1 <= n <= 12");
    std::vector<unsigned> subsets;
    for (unsigned s = 0; s < (1u << n); ++s) subsets.push_back(s);
    std::stable_sort(subsets.begin(), subsets.end(), [](unsigned x, unsigned y) {
        const int px = __builtin_popcount(x), py = __builtin_popcount(y);
        if (px != py) return px < py;
        // lexicographic order of the sorted index lists
        for (unsigned bit = 1; bit != 0; bit <<= 1) {
            const bool ix = (x & bit) != 0, iy = (y & bit) != 0;
            if (ix != iy) return ix;
        }
        return false;
    });
    const std::size_t d = subsets.size();
    std::map<unsigned, std::size_t> index;
    for (std::size_t k = 0; k < d; ++k) index[subsets[k]] = k;

    std::vector<std::vector<SparseVector>> mul(d, std::vector<SparseVector>(d));
    std::vector<SparseVector> st(d);
    std::vector<std::string> labels(d);
    for (std::size_t a = 0; a < d; ++a) {
        const unsigned s = subsets[a];
        const int r = __builtin_popcount(s);
        st[a] = {{a, FracScalar((r * (r - 1) / 2) % 2 == 0 ? 1 : -1)}};
        std::string label;
        for (std::size_t b = 0; b < n; ++b)
            if (s & (1u << b)) label += (label.empty() ? "e" : "^e") + std::to_string(b + 1);
        labels[a] = label.empty() ? "1" : label;
        for (std::size_t b = 0; b < d; ++b) {
            const unsigned t = subsets[b];
            if (s & t) continue;
            // sign of the shuffle bringing (s, t) into increasing order
            int inversions = 0;
            for (std::size_t bit = 0; bit < n; ++bit)
                if (t & (1u << bit)) inversions += __builtin_popcount(s >> (bit + 1));
            mul[a][b] = {{index[s | t], FracScalar(inversions % 2 == 0 ? 1 : -1)}};
        }
    }
    return StarAlgebra(std::move(mul), std::move(st), std::move(labels), AlgebraKind::Grassmann, n);
}

StarAlgebra direct_sum(const StarAlgebra& a, const StarAlgebra& b) {
    const std::size_t na = a.dim(), nb = b.dim(), d = na + nb;
    std::vector<std::vector<SparseVector>> mul(d, std::vector<SparseVector>(d));
    std::vector<SparseVector> st(d);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < na; ++i) {
        st[i] = a.star_of(i);
        labels.push_back(a.label(i) + "+0");
        for (std::size_t j = 0; j < na; ++j) mul[i][j] = a.product(i, j);
    }
    for (std::size_t i = 0; i < nb; ++i) {
        for (const auto& [k, z] : b.star_of(i)) st[na + i].emplace_back(na + k, z);
        labels.push_back("0+" + b.label(i));
        for (std::size_t j = 0; j < nb; ++j)
            for (const auto& [k, z] : b.product(i, j)) mul[na + i][na + j].emplace_back(na + k, z);
    }
    StarAlgebra out(std::move(mul), std::move(st), std::move(labels));
    if (a.realization() && b.realization()) {
        const auto& ra = *a.realization();
        const auto& rb = *b.realization();
        Realization r;
        r.weight = direct_sum(ra.weight, rb.weight);
        for (const auto& m : ra.images) r.images.push_back(direct_sum(m, Matrix(rb.weight.rows(), rb.weight.rows())));
        for (const auto& m : rb.images) r.images.push_back(direct_sum(Matrix(ra.weight.rows(), ra.weight.rows()), m));
        out.set_realization(std::move(r));
    }
    return out;
}

StarAlgebra tensor_product(const StarAlgebra& a, const StarAlgebra& b) {
    const std::size_t na = a.dim(), nb = b.dim(), d = na * nb;
    std::vector<std::vector<SparseVector>> mul(d, std::vector<SparseVector>(d));
    std::vector<SparseVector> st(d);
    std::vector<std::string> labels(d);
    auto kron_sparse = [nb](const SparseVector& x, const SparseVector& y) {
        SparseVector out;
        for (const auto& [i, u] : x)
            for (const auto& [j, v] : y) out.emplace_back(i * nb + j, u * v);
        return out;
    };
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            const std::size_t p = i * nb + j;
            st[p] = kron_sparse(a.star_of(i), b.star_of(j));
            labels[p] = a.label(i) + "(x)" + b.label(j);
            for (std::size_t k = 0; k < na; ++k)
                for (std::size_t l = 0; l < nb; ++l)
                    mul[p][k * nb + l] = kron_sparse(a.product(i, k), b.product(j, l));
        }
    StarAlgebra out(std::move(mul), std::move(st), std::move(labels), AlgebraKind::Tensor, 0);
    if (a.realization() && b.realization()) {
        const auto& ra = *a.realization();
        const auto& rb = *b.realization();
        Realization r;
        r.weight = kron(ra.weight, rb.weight);
        for (const auto& x : ra.images)
            for (const auto& y : rb.images) r.images.push_back(kron(x, y));
        out.set_realization(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coordinates and subalgebras

Coordinates::Coordinates(const std::vector<Vector>& basis, std::size_t ambient_dim)
    : basis_(Matrix::from_columns(basis, ambient_dim)) {
    if (basis.empty()) {
        left_inverse_ = Matrix(0, ambient_dim);
        return;
    }
    const Matrix bh = basis_.adjoint();
    auto inv = inverse(bh * basis_);
    if (!inv) throw Error(ErrorKind::ShapeMismatch, "coordinate basis is linearly dependent");
    left_inverse_ = *inv * bh;
}

std::optional<Vector> Coordinates::operator()(const Vector& v) const {
    Vector c = left_inverse_ * v;
    if (basis_ * c != v) return std::nullopt;
    return c;
}

StarAlgebra subalgebra(const StarAlgebra& a, const std::vector<Vector>& basis, AlgebraKind kind) {
    const std::size_t k = basis.size();
    Coordinates coords(basis, a.dim());
    std::vector<std::vector<SparseVector>> mul(k, std::vector<SparseVector>(k));
    std::vector<SparseVector> st(k);
    for (std::size_t i = 0; i < k; ++i) {
        auto s = coords(a.star(basis[i]));
        if (!s) throw Error(ErrorKind::NotFull, "subspace not closed under star at basis vector " + std::to_string(i + 1));
        st[i] = to_sparse(*s);
        for (std::size_t j = 0; j < k; ++j) {
            auto p = coords(a.multiply(basis[i], basis[j]));
            if (!p)
                throw Error(ErrorKind::NotFull, "subspace not closed under product at pair (" + std::to_string(i + 1) +
                                                    "," + std::to_string(j + 1) + ")");
            mul[i][j] = to_sparse(*p);
        }
    }
    StarAlgebra out(std::move(mul), std::move(st), {}, kind, 0);
    if (a.realization()) {
        Realization r;
        r.weight = a.realization()->weight;
        for (const auto& b : basis) r.images.push_back(a.realization()->image(b));
        out.set_realization(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Functionals

Matrix functional_gram(const StarAlgebra& a, const LinearFunctional& omega) {
    const std::size_t n = a.dim();
    if (omega.values.size() != n) throw Error(ErrorKind::ShapeMismatch, "functional has wrong dimension");
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [s, c] : a.star_of(i))
            for (std::size_t j = 0; j < n; ++j)
                for (const auto& [t, z] : a.product(s, j))
                    if (!omega.values[t].is_zero()) g(i, j) += c * z * omega.values[t];
    return g;
}

PsdCertificate functional_positivity(const StarAlgebra& a, const LinearFunctional& omega) {
    const Matrix g = functional_gram(a, omega);
    if (!g.is_hermitian()) {
        // A positive functional has a Hermitian Gram, so the non-Hermitian
        // part gives a witness: some x has omega(x^* x) non-real.
        PsdCertificate cert;
        cert.verdict = PsdVerdict::NotPositive;
        for (std::size_t i = 0; i < g.rows() && !cert.witness; ++i)
            for (std::size_t j = 0; j < g.cols() && !cert.witness; ++j)
                if (g(i, j) != g(j, i).conj()) {
                    for (const FracScalar& c : {FracScalar(1), FracScalar::i()}) {
                        Vector v = unit_vector(g.rows(), i);
                        v[j] += c;
                        const FracScalar val = inner(v, g, v);
                        if (!val.is_real() || val.sign() < 0) {
                            cert.witness = v;
                            cert.witness_value = val;
                            break;
                        }
                    }
                    if (!cert.witness) {
                        cert.witness = unit_vector(g.rows(), i);
                        cert.witness_value = g(i, i);
                    }
                }
        return cert;
    }
    return psd_decide(g);
}

LinearFunctional density_functional(const StarAlgebra& a, const Matrix& rho) {
    if (a.kind() != AlgebraKind::Matrix || a.kind_param() != rho.rows() || !rho.is_square())
        throw Error(ErrorKind::ShapeMismatch, "density matrix must be n x n for matrix(n)");
    const std::size_t n = rho.rows();
    LinearFunctional w;
    w.values.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w.values[i * n + j] = rho(j, i);  // tr(rho E_ij) = rho_ji
    return w;
}

LinearFunctional tensor_functional(const LinearFunctional& w1, const LinearFunctional& w2) {
    return {kron(w1.values, w2.values)};
}

LinearFunctional compressed_functional(const StarAlgebra& a, const LinearFunctional& omega, const Vector& c) {
    LinearFunctional out;
    const Vector cs = a.star(c);
    for (std::size_t k = 0; k < a.dim(); ++k) out.values.push_back(omega(a.multiply(cs, a.multiply(a.basis(k), c))));
    return out;
}

LinearFunctional vector_state(const Realization& r, const Vector& v) {
    LinearFunctional out;
    const Vector wv = r.weight.adjoint() * v;
    for (const auto& m : r.images) out.values.push_back(dot(wv, m * v));
    return out;
}

bool is_real_functional(const StarAlgebra& a, const LinearFunctional& omega) {
    for (std::size_t k = 0; k < a.dim(); ++k)
        if (omega(a.star(a.basis(k))) != omega(a.basis(k)).conj()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Element positivity

std::string_view to_string(PositivityVerdict v) {
    switch (v) {
        case PositivityVerdict::PositiveCertified: return "PositiveCertified";
        case PositivityVerdict::AlgebraicallyPositiveCertified: return "AlgebraicallyPositiveCertified";
        case PositivityVerdict::NegativeCertified: return "NegativeCertified";
        case PositivityVerdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

bool verify_positive_witnesses(const StarAlgebra& a, const Vector& element, const std::vector<PositiveWitness>& w) {
    Vector sum = a.zero();
    for (const auto& [b, x] : w) {
        if (!b.is_real() || b.sign() <= 0) return false;
        sum = sum + b * a.multiply(a.star(x), x);
    }
    return sum == element;
}

ElementPositivity element_positivity(const StarAlgebra& a, const Vector& element,
                                     const std::vector<PositiveWitness>& witnesses,
                                     const std::optional<Realization>& faithful) {
    if (!a.is_hermitian(element)) throw Error(ErrorKind::NotHermitian, "element is not self-adjoint");
    ElementPositivity out;
    if (!witnesses.empty() && verify_positive_witnesses(a, element, witnesses)) {
        out.verdict = PositivityVerdict::AlgebraicallyPositiveCertified;
        return out;
    }
    const std::optional<Realization>& real = faithful ? faithful : a.realization();
    if (!real) return out;
    const Matrix m = real->weight * real->image(element);
    PsdCertificate cert = psd_decide(m);
    if (cert.positive()) {
        out.verdict = PositivityVerdict::PositiveCertified;
    } else {
        out.verdict = PositivityVerdict::NegativeCertified;
        out.state_vector = cert.witness;
        out.functional = vector_state(*real, *cert.witness);
    }
    out.certificate = std::move(cert);
    return out;
}

// ---------------------------------------------------------------------------
// Nilpotent normal elements

namespace {

std::optional<std::size_t> nilpotency_exponent(const StarAlgebra& a, const Vector& h) {
    Vector power = h;
    for (std::size_t k = 2; k <= std::max<std::size_t>(a.dim(), 2); ++k) {
        power = a.multiply(power, h);
        if (is_zero(power)) return k;
    }
    return std::nullopt;
}

}  // namespace

std::optional<NilpotentCertificate> nilpotent_normal_scan(const StarAlgebra& a) {
    std::vector<Vector> candidates;
    std::vector<std::size_t> hermitian;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        candidates.push_back(a.basis(i));
        if (a.is_hermitian(a.basis(i))) hermitian.push_back(i);
    }
    for (std::size_t x = 0; x < hermitian.size(); ++x)
        for (std::size_t y = x + 1; y < hermitian.size(); ++y) {
            candidates.push_back(a.basis(hermitian[x]) + a.basis(hermitian[y]));
            candidates.push_back(a.basis(hermitian[x]) - a.basis(hermitian[y]));
        }
    for (const auto& h : candidates) {
        if (is_zero(h) || !a.is_normal(h)) continue;
        if (auto k = nilpotency_exponent(a, h)) return NilpotentCertificate{h, *k};
    }
    return std::nullopt;
}

bool verify_nilpotent(const StarAlgebra& a, const NilpotentCertificate& c) {
    if (c.element.size() != a.dim() || is_zero(c.element) || !a.is_normal(c.element) || c.exponent < 2) return false;
    Vector power = c.element;
    for (std::size_t k = 2; k <= c.exponent; ++k) power = a.multiply(power, c.element);
    return is_zero(power);
}

// ---------------------------------------------------------------------------
// Identity structure

std::optional<Vector> find_unit(const StarAlgebra& a) {
    const std::size_t n = a.dim();
    // Unknown u; equations u e_j = e_j and e_j u = e_j.
    Matrix m(2 * n * n, n);
    Vector rhs(2 * n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [k, z] : a.product(i, j)) m(j * n + k, i) += z;
            for (const auto& [k, z] : a.product(j, i)) m(n * n + j * n + k, i) += z;
        }
        rhs[j * n + j] = FracScalar(1);
        rhs[n * n + j * n + j] = FracScalar(1);
    }
    return solve(m, rhs);
}

void validate_approx_identity(const StarAlgebra& a, const ApproxIdentityWitness& w) {
    if (w.elements.size() != w.filtration.size())
        throw Error(ErrorKind::InvalidWitness, "one filtration subspace is needed per index");
    for (std::size_t al = 0; al < w.elements.size(); ++al) {
        const Vector& e = w.elements[al];
        const std::string tag = "E_" + std::to_string(al + 1);
        if (e.size() != a.dim()) throw Error(ErrorKind::InvalidWitness, tag + " has wrong dimension");
        if (!a.is_hermitian(e)) throw Error(ErrorKind::InvalidWitness, tag + " = " + tag + "^* fails");
        for (std::size_t be = al + 1; be < w.elements.size(); ++be) {
            const std::string tb = "E_" + std::to_string(be + 1);
            if (a.multiply(e, w.elements[be]) != e) throw Error(ErrorKind::InvalidWitness, tag + " " + tb + " = " + tag + " fails");
            if (a.multiply(w.elements[be], e) != e) throw Error(ErrorKind::InvalidWitness, tb + " " + tag + " = " + tag + " fails");
        }
        for (std::size_t k : w.filtration[al]) {
            if (k >= a.dim()) throw Error(ErrorKind::InvalidWitness, "filtration index out of range");
            const Vector x = a.basis(k);
            if (a.multiply(e, x) != x || a.multiply(x, e) != x)
                throw Error(ErrorKind::InvalidWitness, tag + " does not act as identity on " + a.label(k));
        }
    }
    std::vector<bool> covered(a.dim(), false);
    for (const auto& f : w.filtration)
        for (std::size_t k : f) covered[k] = true;
    for (std::size_t k = 0; k < a.dim(); ++k)
        if (!covered[k]) throw Error(ErrorKind::InvalidWitness, "filtration does not exhaust the algebra at " + a.label(k));
}

IdentityStructure identity_structure(const StarAlgebra& a, const ApproxIdentityWitness* witness) {
    IdentityStructure s;
    s.unit = find_unit(a);
    if (witness != nullptr) {
        validate_approx_identity(a, *witness);
        s.witness_valid = true;
    }
    return s;
}

std::vector<Vector> center_basis(const StarAlgebra& a) {
    const std::size_t n = a.dim();
    // z is central iff z e_j - e_j z = 0 for every j.
    Matrix m(n * n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [k, z] : a.product(i, j)) m(j * n + k, i) += z;
            for (const auto& [k, z] : a.product(j, i)) m(j * n + k, i) -= z;
        }
    std::vector<Vector> basis;
    for (auto& v : kernel_basis(m)) basis.push_back(primitive_ring_vector(v));
    return basis;
}

Report check_star_homomorphism(const StarAlgebra& source, const StarAlgebra& target, const Matrix& phi) {
    Report r;
    if (phi.rows() != target.dim() || phi.cols() != source.dim()) {
        r.add("shape", false, "map must be " + std::to_string(target.dim()) + "x" + std::to_string(source.dim()));
        return r;
    }
    bool mult = true, star = true;
    std::string mult_detail, star_detail;
    for (std::size_t i = 0; i < source.dim() && mult; ++i) {
        const Vector pi = phi.column(i);
        for (std::size_t j = 0; j < source.dim() && mult; ++j)
            if (phi * to_dense(source.product(i, j), source.dim()) != target.multiply(pi, phi.column(j))) {
                mult = false;
                mult_detail = "phi(" + source.label(i) + " " + source.label(j) + ") != phi(" + source.label(i) +
                              ") phi(" + source.label(j) + ")";
            }
    }
    for (std::size_t i = 0; i < source.dim() && star; ++i)
        if (phi * to_dense(source.star_of(i), source.dim()) != target.star(phi.column(i))) {
            star = false;
            star_detail = "phi(" + source.label(i) + "^*) != phi(" + source.label(i) + ")^*";
        }
    r.add("multiplicative", mult, mult_detail);
    r.add("star-preserving", star, star_detail);
    return r;
}

StarAlgebra classical_limit_algebra(const StarAlgebra& a) {
    auto cl = [](const FracScalar& z) { return FracScalar(classical_limit_scalar(z)); };
    StarAlgebra out = a.map_coefficients(cl);
    if (!a.realization()) return out;
    Realization r;
    r.weight = a.realization()->weight.map(cl);
    std::vector<Vector> flat;
    for (const auto& m : a.realization()->images) {
        r.images.push_back(m.map(cl));
        Vector f;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) f.push_back(r.images.back()(i, j));
        flat.push_back(std::move(f));
    }
    // The limit of a faithful picture need not stay faithful or definite.
    const std::size_t d = r.weight.rows();
    if (inverse(r.weight) && psd_decide(r.weight).positive() && rank(flat, d * d) == a.dim())
        out.set_realization(std::move(r));
    return out;
}

LinearFunctional classical_limit_functional(const LinearFunctional& omega) {
    LinearFunctional out;
    for (const auto& z : omega.values) out.values.emplace_back(classical_limit_scalar(z));
    return out;
}

}  // namespace morita

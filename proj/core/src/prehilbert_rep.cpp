#include "morita/prehilbert_rep.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <random>

namespace morita {

bool same_algebra(const AlgebraRef& a, const AlgebraRef& b) {
    if (a == b) return true;
    return a && b && same_structure(*a, *b);
}

InnerProductModule make_module(Matrix gram) {
    if (!gram.is_hermitian()) throw Error(ErrorKind::NotHermitian, "Gram matrix is not Hermitian");
    if (!psd_decide(gram).positive()) throw Error(ErrorKind::NotPsd, "Gram matrix is not positive semi-definite");
    return InnerProductModule{std::move(gram)};
}

NullQuotient quotient_by_null(const InnerProductModule& h) {
    if (!psd_decide(h.gram).positive()) throw Error(ErrorKind::NotPsd, "Gram matrix is not positive semi-definite");
    NullQuotient out;
    out.map = quotient_by(kernel_basis(h.gram), h.dim());
    out.module.gram = out.map.section.adjoint() * h.gram * out.map.section;
    // The induced product is well defined: <[x],[y]> = <x,y> on every basis pair.
    if (out.map.projection.adjoint() * out.module.gram * out.map.projection != h.gram)
        throw Error(ErrorKind::NotPsd, "null space is not a radical of the product");
    return out;
}

Matrix adjoint_in(const InnerProductModule& h, const Matrix& a) {
    auto inv = inverse(h.gram);
    if (!inv) throw Error(ErrorKind::DegenerateModule, "adjoints need a non-degenerate module; quotient first");
    return *inv * a.adjoint() * h.gram;
}

Matrix Representation::image(const Vector& a) const {
    Matrix m(dim(), dim());
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!a[k].is_zero()) m += a[k] * ops[k];
    return m;
}

namespace {

std::vector<Vector> orbit_vectors(const Representation& pi, const Vector& v) {
    std::vector<Vector> out;
    for (const auto& op : pi.ops) out.push_back(op * v);
    return out;
}

}  // namespace

bool is_strongly_non_degenerate(const Representation& pi) {
    std::vector<Vector> span;
    for (std::size_t p = 0; p < pi.dim(); ++p)
        for (const auto& op : pi.ops) span.push_back(op.column(p));
    return rank(span, pi.dim()) == pi.dim();
}

bool is_cyclic_vector(const Representation& pi, const Vector& v) {
    return rank(orbit_vectors(pi, v), pi.dim()) == pi.dim();
}

std::optional<Vector> find_cyclic_vector(const Representation& pi) {
    for (std::size_t p = 0; p < pi.dim(); ++p) {
        Vector v = unit_vector(pi.dim(), p);
        if (is_cyclic_vector(pi, v)) return v;
    }
    return std::nullopt;
}

RepresentationReport validate_representation(const Representation& pi) {
    RepresentationReport out;
    Report& r = out.checks;
    const StarAlgebra& a = *pi.algebra;
    const std::size_t m = pi.dim();
    bool shape_ok = pi.ops.size() == a.dim() && pi.module.gram.rows() == m && pi.module.gram.cols() == m;
    for (const auto& op : pi.ops) shape_ok = shape_ok && op.rows() == m && op.cols() == m;
    r.add("shape", shape_ok, shape_ok ? "" : "one m x m matrix per algebra basis element is required");
    if (!shape_ok) return out;

    const bool herm = pi.module.gram.is_hermitian();
    r.add("module-psd", herm && psd_decide(pi.module.gram).positive(), herm ? "" : "Gram matrix is not Hermitian");

    bool mult = true;
    std::string mult_detail;
    for (std::size_t i = 0; i < a.dim() && mult; ++i)
        for (std::size_t j = 0; j < a.dim() && mult; ++j)
            if (pi.ops[i] * pi.ops[j] != pi.image(to_dense(a.product(i, j), a.dim()))) {
                mult = false;
                mult_detail = "pi(" + a.label(i) + ") pi(" + a.label(j) + ") != pi(" + a.label(i) + " " + a.label(j) + ")";
            }
    r.add("multiplicativity", mult, mult_detail);

    bool star = true;
    std::string star_detail;
    const Matrix& g = pi.module.gram;
    for (std::size_t i = 0; i < a.dim() && star; ++i)
        if (pi.image(to_dense(a.star_of(i), a.dim())).adjoint() * g != g * pi.ops[i]) {
            star = false;
            star_detail = "<pi(" + a.label(i) + "^*) x, y> != <x, pi(" + a.label(i) + ") y>";
        }
    r.add("star-compatibility", star, star_detail);

    if (herm && inverse(g)) {
        bool adj = true;
        for (std::size_t i = 0; i < a.dim() && adj; ++i)
            adj = adjoint_in(pi.module, pi.ops[i]) == pi.image(to_dense(a.star_of(i), a.dim()));
        r.add("adjoints", adj, "computed as G^-1 A^dagger G");
    } else {
        r.add("adjoints", true, "degenerate module: adjoints exist on the null quotient");
    }
    out.strongly_non_degenerate = is_strongly_non_degenerate(pi);
    return out;
}

Representation defining_representation(const AlgebraRef& a) {
    if (a->kind() != AlgebraKind::Matrix || !a->realization())
        throw Error(ErrorKind::BadParams, "defining representation needs a matrix algebra");
    Representation pi;
    pi.algebra = a;
    pi.module.gram = Matrix::identity(a->kind_param());
    pi.ops = a->realization()->images;
    if (a->kind_param() > 0) pi.cyclic.push_back(unit_vector(a->kind_param(), 0));
    return pi;
}

Representation zero_representation(const AlgebraRef& a) {
    Representation pi;
    pi.algebra = a;
    pi.module.gram = Matrix(0, 0);
    pi.ops.assign(a->dim(), Matrix(0, 0));
    return pi;
}

GnsResult gns(const AlgebraRef& a, const LinearFunctional& omega) {
    GnsResult out;
    out.certificate = functional_positivity(*a, omega);
    if (!out.certificate.positive())
        throw Error(ErrorKind::NotPositiveFunctional, "Gram matrix omega(e_i^* e_j) is not positive semi-definite");
    const Matrix g = functional_gram(*a, omega);
    out.gelfand = kernel_basis(g);
    const QuotientMap q = quotient_by(out.gelfand, a->dim());
    out.class_map = q.projection;
    out.rep.algebra = a;
    out.rep.module.gram = q.section.adjoint() * g * q.section;
    for (std::size_t k = 0; k < a->dim(); ++k)
        out.rep.ops.push_back(q.projection * a->left_multiplication(a->basis(k)) * q.section);
    if (auto unit = find_unit(*a)) {
        out.vacuum = q.projection * *unit;
        out.rep.cyclic.push_back(*out.vacuum);
    }
    return out;
}

Representation direct_sum(const Representation& x, const Representation& y) {
    if (!same_algebra(x.algebra, y.algebra)) throw Error(ErrorKind::AlgebraMismatch, "direct sum of representations of different algebras");
    Representation out;
    out.algebra = x.algebra;
    out.module.gram = direct_sum(x.module.gram, y.module.gram);
    for (std::size_t k = 0; k < x.ops.size(); ++k) out.ops.push_back(direct_sum(x.ops[k], y.ops[k]));
    for (const auto& v : x.cyclic) {
        Vector w = v;
        w.resize(x.dim() + y.dim());
        out.cyclic.push_back(std::move(w));
    }
    for (const auto& v : y.cyclic) {
        Vector w(x.dim());
        w.insert(w.end(), v.begin(), v.end());
        out.cyclic.push_back(std::move(w));
    }
    return out;
}

Representation direct_sum(const std::vector<Representation>& reps) {
    if (reps.empty()) throw Error(ErrorKind::BadParams, "direct sum of no representations");
    Representation out = reps.front();
    for (std::size_t k = 1; k < reps.size(); ++k) out = direct_sum(out, reps[k]);
    return out;
}

namespace {

Vector flatten(const Matrix& m) {
    Vector v;
    v.reserve(m.rows() * m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
    return v;
}

Matrix unflatten(const Vector& v, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = v[r * cols + c];
    return m;
}

/// Solution space of T x_k = y_k T for all k, T of shape rows x cols.
std::vector<Matrix> solve_intertwining(const std::vector<Matrix>& x, const std::vector<Matrix>& y, std::size_t rows,
                                       std::size_t cols) {
    const std::size_t unknowns = rows * cols;
    if (unknowns == 0) return {};
    Matrix sys(x.size() * unknowns, unknowns);
    for (std::size_t k = 0; k < x.size(); ++k)
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t eq = k * unknowns + r * cols + c;
                for (std::size_t s = 0; s < cols; ++s)
                    if (!x[k](s, c).is_zero()) sys(eq, r * cols + s) += x[k](s, c);
                for (std::size_t s = 0; s < rows; ++s)
                    if (!y[k](r, s).is_zero()) sys(eq, s * cols + c) -= y[k](r, s);
            }
    std::vector<Matrix> out;
    for (const auto& v : kernel_basis(sys)) out.push_back(unflatten(primitive_ring_vector(v), rows, cols));
    return out;
}

}  // namespace

std::vector<Matrix> commutant_basis(const Representation& pi) {
    if (!inverse(pi.module.gram)) throw Error(ErrorKind::DegenerateModule, "commutant needs a non-degenerate module");
    return solve_intertwining(pi.ops, pi.ops, pi.dim(), pi.dim());
}

bool closed_under_adjoint(const InnerProductModule& h, const std::vector<Matrix>& basis) {
    std::vector<Vector> flat, adj;
    for (const auto& m : basis) {
        flat.push_back(flatten(m));
        adj.push_back(flatten(adjoint_in(h, m)));
    }
    return span_contains(flat, adj, h.dim() * h.dim());
}

bool is_intertwiner(const Representation& source, const Representation& target, const Matrix& t) {
    if (t.rows() != target.dim() || t.cols() != source.dim()) return false;
    for (std::size_t k = 0; k < source.ops.size(); ++k)
        if (t * source.ops[k] != target.ops[k] * t) return false;
    return true;
}

Intertwiner classify_intertwiner(const Representation& source, const Representation& target, const Matrix& t) {
    if (!is_intertwiner(source, target, t)) throw Error(ErrorKind::NotIntertwiner, "T pi1(a) != pi2(a) T");
    Intertwiner out;
    out.map = t;
    const Matrix& g1 = source.module.gram;
    const Matrix& g2 = target.module.gram;
    const Matrix lhs = t.adjoint() * g2;  // G1 T' = T^dagger G2
    out.adjointable = true;
    for (std::size_t c = 0; c < lhs.cols() && out.adjointable; ++c)
        out.adjointable = solve(g1, lhs.column(c)).has_value();
    out.isometric = t.adjoint() * g2 * t == g1;
    out.unitary = out.isometric && t.is_square() && inverse(t).has_value();
    return out;
}

std::string_view to_string(UnitaryStatus s) {
    switch (s) {
        case UnitaryStatus::Found: return "Found";
        case UnitaryStatus::NoUnitary: return "NoUnitary";
        case UnitaryStatus::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

/// c with c conj(c) = x for a positive rational x, when x is a sum of two
/// rational squares (searched with a bounded loop).
std::optional<FracScalar> norm_root(const Rational& x) {
    if (x <= 0) return std::nullopt;
    const mpz_class num = x.get_num(), den = x.get_den();
    const mpz_class target = num * den;  // x = target / den^2
    if (mpz_perfect_square_p(target.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), target.get_mpz_t());
        return FracScalar(Rational(r, den));
    }
    if (target > mpz_class("1000000000000")) return std::nullopt;
    mpz_class bound;
    mpz_sqrt(bound.get_mpz_t(), target.get_mpz_t());
    for (mpz_class a = 1; a <= bound; ++a) {
        const mpz_class rest = target - a * a;
        if (mpz_perfect_square_p(rest.get_mpz_t())) {
            mpz_class b;
            mpz_sqrt(b.get_mpz_t(), rest.get_mpz_t());
            Rational re(a, den), im(b, den);
            re.canonicalize();
            im.canonicalize();
            return FracScalar(Scalar(BaseElement(re), BaseElement(im)));
        }
    }
    return std::nullopt;
}

/// s with m = s g, or nullopt.
std::optional<FracScalar> proportionality(const Matrix& m, const Matrix& g) {
    std::optional<FracScalar> s;
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) {
            if (g(r, c).is_zero()) {
                if (!m(r, c).is_zero()) return std::nullopt;
                continue;
            }
            if (!s) s = m(r, c) / g(r, c);
            else if (m(r, c) != *s * g(r, c)) return std::nullopt;
        }
    return s;
}

}  // namespace

std::optional<Matrix> normalize_isometry(const Matrix& t, const Matrix& g1, const Matrix& g2) {
    const Matrix m = t.adjoint() * g2 * t;
    if (m == g1) return t;
    auto s = proportionality(m, g1);
    if (!s || !s->is_real() || !s->in_ring() || !s->numerator().re().is_constant() || s->sign() <= 0) return std::nullopt;
    auto c = norm_root(1 / s->numerator().re().constant_term());
    if (!c) return std::nullopt;
    Matrix out = *c * t;
    if (out.adjoint() * g2 * out != g1) return std::nullopt;
    return out;
}

IntertwinerSpace intertwiners(const Representation& source, const Representation& target, std::uint64_t seed,
                              std::size_t random_tries) {
    if (!same_algebra(source.algebra, target.algebra))
        throw Error(ErrorKind::AlgebraMismatch, "intertwiners between representations of different algebras");
    IntertwinerSpace out;
    out.basis = solve_intertwining(source.ops, target.ops, target.dim(), source.dim());
    if (source.dim() != target.dim()) {
        out.status = UnitaryStatus::NoUnitary;
        out.detail = "dimension mismatch: " + std::to_string(source.dim()) + " vs " + std::to_string(target.dim());
        return out;
    }
    const Matrix& g1 = source.module.gram;
    const Matrix& g2 = target.module.gram;
    if (source.dim() == 0) {
        out.status = UnitaryStatus::Found;
        out.unitary = Intertwiner{Matrix(0, 0), true, true, true};
        return out;
    }
    const std::size_t d = out.basis.size();
    if (d == 0) {
        out.status = UnitaryStatus::NoUnitary;
        out.detail = "intertwiner space is zero";
        return out;
    }
    // Pairwise products T_a^dagger G2 T_b, so each candidate costs only sums.
    std::vector<std::vector<Matrix>> pair(d, std::vector<Matrix>(d));
    for (std::size_t a = 0; a < d; ++a) {
        const Matrix left = out.basis[a].adjoint() * g2;
        for (std::size_t b = 0; b < d; ++b) pair[a][b] = left * out.basis[b];
    }
    auto attempt = [&](const std::vector<std::pair<std::size_t, FracScalar>>& combo) -> bool {
        Matrix m(g1.rows(), g1.cols());
        for (const auto& [a, ca] : combo)
            for (const auto& [b, cb] : combo) m += (ca.conj() * cb) * pair[a][b];
        auto s = proportionality(m, g1);
        if (!s || s->is_zero()) return false;
        Matrix t(target.dim(), source.dim());
        for (const auto& [a, ca] : combo) t += ca * out.basis[a];
        auto u = normalize_isometry(t, g1, g2);
        if (!u || !inverse(*u)) return false;
        out.unitary = classify_intertwiner(source, target, *u);
        out.status = UnitaryStatus::Found;
        return true;
    };

    const FracScalar phases[4] = {FracScalar(1), FracScalar(-1), FracScalar::i(), -FracScalar::i()};
    const std::size_t max_terms = std::min<std::size_t>(d, 4);
    std::size_t budget = 20000;
    for (std::size_t r = 1; r <= max_terms && budget > 0; ++r) {
        std::vector<std::size_t> idx(r);
        for (std::size_t k = 0; k < r; ++k) idx[k] = k;
        while (budget > 0) {
            std::size_t patterns = 1;
            for (std::size_t k = 1; k < r; ++k) patterns *= 4;
            for (std::size_t p = 0; p < patterns && budget > 0; ++p, --budget) {
                std::vector<std::pair<std::size_t, FracScalar>> combo{{idx[0], FracScalar(1)}};
                std::size_t code = p;
                for (std::size_t k = 1; k < r; ++k, code /= 4) combo.emplace_back(idx[k], phases[code % 4]);
                if (attempt(combo)) return out;
            }
            // next r-subset in lexicographic order
            std::size_t k = r;
            while (k > 0 && idx[k - 1] == d - r + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < r; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (std::size_t tries = 0; tries < random_tries; ++tries) {
        std::vector<std::pair<std::size_t, FracScalar>> combo;
        for (std::size_t a = 0; a < d; ++a) {
            FracScalar c(Scalar(BaseElement(static_cast<long>(coef(rng))), BaseElement(static_cast<long>(coef(rng)))));
            if (!c.is_zero()) combo.emplace_back(a, c);
        }
        if (!combo.empty() && attempt(combo)) return out;
    }
    out.status = UnitaryStatus::Inconclusive;
    out.detail = "bounded search found no unitary in an intertwiner space of dimension " + std::to_string(d);
    return out;
}

}  // namespace morita

#include "morita/classical_limit.hpp"

#include <algorithm>
#include <string>

namespace morita {

namespace {

std::optional<long> order_of(const BaseElement& x) {
    const auto o = x.lambda_order();
    if (!o) return std::nullopt;
    return static_cast<long>(*o);
}

std::optional<long> min_order(const Vector& v) {
    std::optional<long> best;
    for (const auto& z : v) {
        const auto o = lambda_order(z);
        if (o && (!best || *o < *best)) best = o;
    }
    return best;
}

InnerTable limit_table(const InnerTable& t) {
    InnerTable out = t;
    for (auto& row : out)
        for (auto& v : row) v = limit_of(v);
    return out;
}

std::optional<CyclicStructure> limit_structure(const std::optional<CyclicStructure>& s) {
    if (!s) return std::nullopt;
    CyclicStructure out = *s;
    for (auto& piece : out.pieces) {
        for (auto& v : piece.basis) v = limit_of(v);
        for (auto& v : piece.vectors) v = limit_of(v);
    }
    return out;
}

bool has_limit(const Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (!has_classical_limit(m(r, c))) return false;
    return true;
}

}  // namespace

FracScalar limit_of(const FracScalar& z) { return FracScalar(classical_limit_scalar(z)); }

Vector limit_of(const Vector& v) {
    Vector out;
    out.reserve(v.size());
    for (const auto& z : v) out.push_back(limit_of(z));
    return out;
}

Matrix limit_of(const Matrix& m) {
    return m.map([](const FracScalar& z) { return limit_of(z); });
}

std::optional<long> lambda_order(const FracScalar& z) {
    if (z.is_zero()) return std::nullopt;
    const auto re = order_of(z.numerator().re()), im = order_of(z.numerator().im());
    long num = 0;
    if (re && im) num = std::min(*re, *im);
    else num = re ? *re : *im;
    return num - *order_of(z.denominator());
}

LimitMap cl_prehilbert(const InnerProductModule& h) {
    if (!psd_decide(h.gram).positive()) throw Error(ErrorKind::NotPsd, "the deformed Gram matrix is not positive");
    LimitMap out;
    out.source_gram = h.gram;
    const Matrix g0 = limit_of(h.gram);
    out.map = quotient_by(kernel_basis(g0), h.dim());
    out.target.gram = out.map.section.adjoint() * g0 * out.map.section;
    return out;
}

Report check_limit_map(const LimitMap& m, const std::vector<Vector>& vectors) {
    Report r;
    std::string detail;
    for (std::size_t i = 0; i < vectors.size() && detail.empty(); ++i)
        for (std::size_t j = 0; j < vectors.size(); ++j) {
            const FracScalar lhs = m.target.inner(m.apply(vectors[i]), m.apply(vectors[j]));
            if (lhs != limit_of(inner(vectors[i], m.source_gram, vectors[j]))) {
                detail = "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                break;
            }
        }
    r.add("products", detail.empty(), detail);
    return r;
}

Matrix cl_map(const LimitMap& source, const LimitMap& target, const Matrix& t) {
    if (t.rows() != target.source_gram.rows() || t.cols() != source.source_gram.rows())
        throw Error(ErrorKind::ShapeMismatch, "map does not fit the two modules");
    if (!has_limit(t)) throw Error(ErrorKind::DenominatorVanishesAtZero, "map has a pole at lambda = 0");
    const Matrix t0 = limit_of(t);
    const Matrix g0 = limit_of(target.source_gram);
    for (std::size_t k = 0; k < source.map.subspace.size(); ++k)
        if (!is_zero(g0 * (t0 * source.map.subspace[k])))
            throw Error(ErrorKind::NotAdjointable,
                        "the map sends radical vector " + std::to_string(k + 1) + " outside the radical");
    return target.map.projection * t0 * source.map.section;
}

Matrix cl_operator(const LimitMap& m, const Matrix& a) {
    const Matrix& g = m.source_gram;
    const Matrix rhs = a.adjoint() * g;
    for (std::size_t j = 0; j < rhs.cols(); ++j)
        if (!solve(g, rhs.column(j)))
            throw Error(ErrorKind::NotAdjointable, "no adjoint exists, column " + std::to_string(j + 1));
    return cl_map(m, m, a);
}

AlgebraRef limit_algebra(const AlgebraRef& a) {
    StarAlgebra cl = classical_limit_algebra(*a);
    if (same_structure(cl, *a)) return a;
    return share(std::move(cl));
}

ClassicalRepresentation cl_representation(const Representation& pi) {
    const RepresentationReport v = validate_representation(pi);
    if (!v.checks.ok()) {
        const Check* f = v.checks.first_failure();
        throw Error(ErrorKind::NotAdjointable, "invalid representation: " + f->name + " " + f->detail);
    }
    ClassicalRepresentation out;
    out.limit = cl_prehilbert(pi.module);
    out.rep.algebra = limit_algebra(pi.algebra);
    out.rep.module = out.limit.target;
    for (const auto& op : pi.ops) out.rep.ops.push_back(cl_operator(out.limit, op));
    for (const auto& c : pi.cyclic) {
        Vector w = out.limit.apply(c);
        if (!is_zero(w)) out.rep.cyclic.push_back(std::move(w));
    }
    out.validation = validate_representation(out.rep);
    return out;
}

ClassicalBimodule cl_bimodule(const Bimodule& x) {
    const Report rigged = validate_bimodule(x, ValidationLevel::Rigged);
    if (!rigged.ok()) {
        const Check* f = rigged.first_failure();
        throw Error(ErrorKind::InvalidBimodule, f->name + ": " + f->detail);
    }
    ClassicalBimodule out;
    Bimodule& z = out.at_zero;
    z.algebra_a = limit_algebra(x.algebra_a);
    z.algebra_b = limit_algebra(x.algebra_b);
    z.dim = x.dim;
    for (const auto& op : x.left) z.left.push_back(limit_of(op));
    for (const auto& op : x.right) z.right.push_back(limit_of(op));
    z.inner_a = limit_table(x.inner_a);
    if (x.inner_b) z.inner_b = limit_table(*x.inner_b);
    z.p_structure = limit_structure(x.p_structure);
    z.q_structure = limit_structure(x.q_structure);

    BimoduleQuotient q = quotient_by_radical(z);
    out.bimodule = std::move(q.bimodule);
    out.map = std::move(q.map);
    out.radical_a = std::move(q.radical_a);
    if (x.inner_b) {
        out.radical_b = std::move(q.radical_b);
        out.radicals_agree = q.radicals_agree;
    }
    out.validation = validate_bimodule(out.bimodule, x.inner_b ? ValidationLevel::Equivalence : ValidationLevel::Rigged);
    return out;
}

Naturality naturality_check(const Bimodule& x, const Representation& pi) {
    Naturality out;
    out.deformed = induce(x, pi);
    out.induced_limit = cl_representation(out.deformed.rep);
    out.bimodule = cl_bimodule(x);
    out.base_limit = cl_representation(pi);
    out.classical = induce(out.bimodule.bimodule, out.base_limit.rep);

    const Matrix plain = kron(out.bimodule.map.projection, out.base_limit.limit.map.projection);
    out.map = out.classical.to_k * plain * limit_of(out.deformed.from_k) * out.induced_limit.limit.map.section;
    if (has_limit(out.deformed.to_k))
        out.well_defined = out.map * out.induced_limit.limit.map.projection * limit_of(out.deformed.to_k) ==
                           out.classical.to_k * plain;
    out.intertwines = is_intertwiner(out.induced_limit.rep, out.classical.rep, out.map);
    if (out.intertwines) out.unitary = classify_intertwiner(out.induced_limit.rep, out.classical.rep, out.map);
    else out.unitary.map = out.map;
    return out;
}

DeformedHomomorphism deformed_homomorphism_bimodule(const AlgebraRef& b, const AlgebraRef& a, const Matrix& phi) {
    const StarAlgebra& A = *a;
    const StarAlgebra& B = *b;
    if (phi.rows() != A.dim() || phi.cols() != B.dim())
        throw Error(ErrorKind::ShapeMismatch, "homomorphism matrix must be dim(A) x dim(B)");
    const Report hom = check_star_homomorphism(B, A, phi);
    if (!hom.ok()) {
        std::optional<long> star_order, mult_order;
        auto lower = [](std::optional<long>& acc, std::optional<long> o) {
            if (o && (!acc || *o < *acc)) acc = o;
        };
        for (std::size_t i = 0; i < B.dim(); ++i) {
            lower(star_order, min_order(phi * B.star(B.basis(i)) - A.star(phi.column(i))));
            for (std::size_t j = 0; j < B.dim(); ++j)
                lower(mult_order, min_order(phi * B.multiply(B.basis(i), B.basis(j)) -
                                            A.multiply(phi.column(i), phi.column(j))));
        }
        std::string msg;
        if (star_order) msg = "star-compatibility fails at order lambda^" + std::to_string(*star_order);
        if (mult_order) {
            if (!msg.empty()) msg += "; ";
            msg += "multiplicativity fails at order lambda^" + std::to_string(*mult_order);
        }
        if (msg.empty()) msg = hom.first_failure()->name + ": " + hom.first_failure()->detail;
        throw Error(ErrorKind::NotStarHomomorphism, msg);
    }
    DeformedHomomorphism out;
    out.deformed = homomorphism_bimodule(b, a, phi);
    out.limit = cl_bimodule(out.deformed);
    out.reference = homomorphism_bimodule(out.limit.bimodule.algebra_b, out.limit.bimodule.algebra_a, limit_of(phi));
    out.identification = out.limit.map.section;
    out.comparison = bimodule_isomorphism_check(out.limit.bimodule, out.reference, out.identification);
    return out;
}

Matrix conjugation_map(const Matrix& u) {
    const std::size_t n = u.rows();
    Matrix out(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) out(k * n + l, i * n + j) = u(k, i) * u(l, j).conj();
    return out;
}

Matrix cayley_rotation() {
    const FracScalar l = FracScalar::lambda();
    const FracScalar d = FracScalar(1) + l * l;
    const FracScalar c = (FracScalar(1) - l * l) / d, s = FracScalar(2) * l / d;
    Matrix u(2, 2);
    u(0, 0) = c;
    u(0, 1) = s;
    u(1, 0) = -s;
    u(1, 1) = c;
    return u;
}

std::string_view to_string(LiftStatus s) {
    switch (s) {
        case LiftStatus::Lifted: return "Lifted";
        case LiftStatus::ConstantLiftFails: return "ConstantLiftFails";
        case LiftStatus::PreconditionFailed: return "PreconditionFailed";
    }
    return "?";
}

PositiveLift positive_lift_check(const StarAlgebra& deformed, const LinearFunctional& omega0) {
    const LinearFunctional w0 = classical_limit_functional(omega0);
    PositiveLift out;
    out.classical = functional_positivity(classical_limit_algebra(deformed), w0);
    if (!out.classical.positive()) return out;
    out.deformed = functional_positivity(deformed, w0);
    out.status = out.deformed->positive() ? LiftStatus::Lifted : LiftStatus::ConstantLiftFails;
    return out;
}

StarAlgebra square_root_algebra(const FracScalar& c) {
    std::vector<std::vector<SparseVector>> mul(2, std::vector<SparseVector>(2));
    mul[0][0] = {{0, FracScalar(1)}};
    mul[0][1] = {{1, FracScalar(1)}};
    mul[1][0] = {{1, FracScalar(1)}};
    if (!c.is_zero()) mul[1][1] = {{0, c}};
    return StarAlgebra(std::move(mul), {{{0, FracScalar(1)}}, {{1, FracScalar(1)}}}, {"1", "e"});
}

ApproxIdentityWitness limit_witness(const ApproxIdentityWitness& w) {
    ApproxIdentityWitness out = w;
    for (auto& e : out.elements) e = limit_of(e);
    return out;
}

}  // namespace morita

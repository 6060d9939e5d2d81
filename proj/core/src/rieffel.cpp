#include "morita/rieffel.hpp"

namespace morita {

namespace {

std::string format(const Vector& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].to_string();
    return s + ")";
}

void require_structure(const Bimodule& x) {
    const Report r = validate_bimodule(x, ValidationLevel::Rigged);
    for (const char* name : {"shape", "left-module", "right-module", "commuting-actions", "X2", "X3", "X5"}) {
        const Check* c = r.find(name);
        if (c && !c->passed) throw Error(ErrorKind::InvalidBimodule, std::string(name) + ": " + c->detail);
    }
}

// Whether m kills every vector of the kernel of `quotient`.
bool descends(const Matrix& m, const Matrix& quotient) {
    for (const auto& w : kernel_basis(quotient))
        if (!is_zero(m * w)) return false;
    return true;
}

bool has_unit(const StarAlgebra& a) { return find_unit(a).has_value(); }

}  // namespace

Vector InductionResult::elementary(const Vector& x, const Vector& psi) const { return to_k * kron(x, psi); }

InductionResult induce(const Bimodule& x, const Representation& pi) {
    if (!same_algebra(x.algebra_a, pi.algebra))
        throw Error(ErrorKind::AlgebraMismatch, "representation is not of the bimodule's right algebra");
    require_structure(x);
    const RepresentationReport rv = validate_representation(pi);
    if (!rv.checks.ok())
        throw Error(ErrorKind::InvalidBimodule,
                    "representation fails " + rv.checks.first_failure()->name + ": " + rv.checks.first_failure()->detail);

    const StarAlgebra& A = *x.algebra_a;
    const std::size_t m = x.dim, h = pi.dim(), n = m * h;
    InductionResult out;
    out.base = pi;
    out.tensor_dim = n;

    std::vector<Vector> relations;
    for (std::size_t a = 0; a < A.dim(); ++a)
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t s = 0; s < h; ++s) {
                Vector v = kron(x.right[a].column(p), unit_vector(h, s)) - kron(unit_vector(m, p), pi.ops[a].column(s));
                if (!is_zero(v)) relations.push_back(std::move(v));
            }
    out.balanced = quotient_by(relations, n);

    Matrix plain(n, n);
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
            const Matrix blk = pi.module.gram * pi.image(x.inner_a[p][q]);
            for (std::size_t s = 0; s < h; ++s)
                for (std::size_t t = 0; t < h; ++t) plain(p * h + s, q * h + t) = blk(s, t);
        }
    const Matrix& sec = out.balanced.section;
    out.induced_gram = sec.adjoint() * plain * sec;
    out.certificate = psd_decide(out.induced_gram);
    if (!out.certificate.positive())
        throw Error(ErrorKind::PositivityViolated, "induced product is not positive: witness " +
                                                       format(*out.certificate.witness) + " has value " +
                                                       out.certificate.witness_value->to_string());

    const NullQuotient nq = quotient_by_null(InnerProductModule{out.induced_gram});
    out.null_map = nq.map;
    out.to_k = out.null_map.projection * out.balanced.projection;
    out.from_k = sec * out.null_map.section;

    out.rep.algebra = x.algebra_b;
    out.rep.module = nq.module;
    const Matrix id = Matrix::identity(h);
    for (const auto& l : x.left) out.rep.ops.push_back(out.to_k * kron(l, id) * out.from_k);
    out.validation = validate_representation(out.rep);
    return out;
}

Intertwiner induce_intertwiner(const Bimodule& x, const InductionResult& source, const InductionResult& target,
                               const Matrix& t) {
    if (!is_intertwiner(source.base, target.base, t))
        throw Error(ErrorKind::NotIntertwiner, "T is not an intertwiner of the base representations");
    const Matrix lifted = target.to_k * kron(Matrix::identity(x.dim), t);
    if (!descends(lifted, source.to_k))
        throw Error(ErrorKind::NotIntertwiner, "x (x) T psi does not descend to the null quotients");
    return classify_intertwiner(source.rep, target.rep, lifted * source.from_k);
}

Matrix commutant_map(const Bimodule& x, const InductionResult& ind, const Matrix& c) {
    if (!is_intertwiner(ind.base, ind.base, c))
        throw Error(ErrorKind::NotInCommutant, "C does not commute with the base representation");
    const Matrix lifted = ind.to_k * kron(Matrix::identity(x.dim), c);
    if (!descends(lifted, ind.to_k))
        throw Error(ErrorKind::NotInCommutant, "x (x) C psi does not descend to the null quotient");
    return lifted * ind.from_k;
}

Report commutant_homomorphism_check(const Bimodule& x, const InductionResult& ind) {
    Report r;
    const std::vector<Matrix> basis = commutant_basis(ind.base);
    std::vector<Matrix> images;
    for (const auto& c : basis) images.push_back(commutant_map(x, ind, c));

    bool lands = true;
    for (std::size_t i = 0; i < images.size() && lands; ++i) lands = is_intertwiner(ind.rep, ind.rep, images[i]);
    r.add("lands-in-commutant", lands);

    bool mult = true;
    std::string detail;
    for (std::size_t i = 0; i < basis.size() && mult; ++i)
        for (std::size_t j = 0; j < basis.size() && mult; ++j)
            if (commutant_map(x, ind, basis[i] * basis[j]) != images[i] * images[j]) {
                mult = false;
                detail = "commutant basis pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            }
    r.add("multiplicative", mult, detail);

    bool star = true;
    detail.clear();
    const bool definite = inverse(ind.rep.module.gram).has_value();
    for (std::size_t i = 0; i < basis.size() && star && definite; ++i)
        if (commutant_map(x, ind, adjoint_in(ind.base.module, basis[i])) != adjoint_in(ind.rep.module, images[i])) {
            star = false;
            detail = "commutant basis element " + std::to_string(i + 1);
        }
    r.add("star-preserving", star, definite ? detail : "induced module is zero");
    return r;
}

Intertwiner direct_sum_unitary(const Bimodule& x, const Representation& pi1, const Representation& pi2) {
    const InductionResult sum = induce(x, direct_sum(pi1, pi2));
    const InductionResult i1 = induce(x, pi1), i2 = induce(x, pi2);
    const std::size_t h1 = pi1.dim(), h2 = pi2.dim(), h = h1 + h2;
    const std::size_t k1 = i1.rep.dim(), k2 = i2.rep.dim();
    Matrix plain(k1 + k2, x.dim * h);
    for (std::size_t p = 0; p < x.dim; ++p)
        for (std::size_t s = 0; s < h; ++s) {
            const Vector img = s < h1 ? i1.elementary(unit_vector(x.dim, p), unit_vector(h1, s))
                                      : i2.elementary(unit_vector(x.dim, p), unit_vector(h2, s - h1));
            const std::size_t offset = s < h1 ? 0 : k1;
            for (std::size_t k = 0; k < img.size(); ++k) plain(offset + k, p * h + s) = img[k];
        }
    if (!descends(plain, sum.to_k))
        throw Error(ErrorKind::NotIntertwiner, "componentwise map does not descend to the quotient");
    return classify_intertwiner(sum.rep, direct_sum(i1.rep, i2.rep), plain * sum.from_k);
}

Bimodule functional_bimodule(const AlgebraRef& a, const LinearFunctional& omega) {
    const StarAlgebra& A = *a;
    const Matrix g = functional_gram(A, omega);
    Bimodule x;
    x.algebra_b = a;
    x.algebra_a = share(scalars_algebra());
    x.dim = A.dim();
    for (std::size_t k = 0; k < A.dim(); ++k) x.left.push_back(A.left_multiplication(A.basis(k)));
    x.right.push_back(Matrix::identity(A.dim()));
    x.inner_a.assign(x.dim, std::vector<Vector>(x.dim));
    for (std::size_t p = 0; p < x.dim; ++p)
        for (std::size_t q = 0; q < x.dim; ++q) x.inner_a[p][q] = {g(p, q)};
    return x;
}

GnsComparison gns_via_induction_compare(const AlgebraRef& a, const LinearFunctional& omega) {
    GnsComparison out;
    out.gns = gns(a, omega);
    const Bimodule x = functional_bimodule(a, omega);
    out.induction = induce(x, defining_representation(x.algebra_a));

    std::vector<Vector> nulls;
    for (const auto& v : out.induction.null_map.subspace) nulls.push_back(out.induction.balanced.section * v);
    nulls.insert(nulls.end(), out.induction.balanced.subspace.begin(), out.induction.balanced.subspace.end());
    out.kernels_agree = span_contains(nulls, out.gns.gelfand, a->dim()) && span_contains(out.gns.gelfand, nulls, a->dim());

    const QuotientMap q = quotient_by(out.gns.gelfand, a->dim());
    out.unitary = classify_intertwiner(out.gns.rep, out.induction.rep, out.induction.to_k * q.section);
    if (const auto unit = find_unit(*a))
        out.vacuum_maps_to_unit = out.unitary.map * *out.gns.vacuum == out.induction.elementary(*unit, {FracScalar(1)});
    return out;
}

RoundTrip roundtrip_unitary(const Bimodule& x, const Representation& pi) {
    if (!is_strongly_non_degenerate(pi))
        throw Error(ErrorKind::NotStronglyNonDegenerate, "round trip needs a strongly non-degenerate representation");
    const Bimodule xbar = conjugate(x);
    RoundTrip out;
    out.first = induce(x, pi);
    out.second = induce(xbar, out.first.rep);

    const std::size_t m = x.dim, h = pi.dim(), k1 = out.first.rep.dim();
    std::vector<std::vector<Matrix>> images(m, std::vector<Matrix>(m));
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) images[p][q] = pi.image(x.inner_a[p][q]);
    out.plain_map = Matrix(h, m * k1);
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t k = 0; k < k1; ++k) {
            const Vector kappa = out.first.from_k.column(k);
            Vector col = zero_vector(h);
            for (std::size_t q = 0; q < m; ++q)
                for (std::size_t s = 0; s < h; ++s)
                    if (!kappa[q * h + s].is_zero()) col = col + kappa[q * h + s] * images[p][q].column(s);
            for (std::size_t r = 0; r < h; ++r) out.plain_map(r, p * k1 + k) = col[r];
        }
    if (!descends(out.plain_map, out.second.to_k))
        throw Error(ErrorKind::NotIntertwiner, "round-trip map does not descend to the quotient");
    out.unitary = classify_intertwiner(out.second.rep, pi, out.plain_map * out.second.from_k);
    return out;
}

Report morita_context_check(const Bimodule& x) {
    if (!has_unit(*x.algebra_a) || !has_unit(*x.algebra_b))
        throw Error(ErrorKind::NotUnital, "Morita contexts are defined for unital algebras");
    if (!x.inner_b) throw Error(ErrorKind::MissingInnerB, "the context map g needs the B-valued product");
    const Bimodule xbar = conjugate(x);
    const StarAlgebra& A = *x.algebra_a;
    const StarAlgebra& B = *x.algebra_b;
    const InnerTable& ha = x.inner_a;
    const InnerTable& hb = *x.inner_b;
    const std::size_t m = x.dim;
    Report r;

    // In conjugate coordinates f(u (x) v) = sum u_p v_q <x_p,x_q>_A, and g likewise.
    auto f = [&](const Vector& u, const Vector& v) {
        Vector out = zero_vector(A.dim());
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q)
                if (!u[p].is_zero() && !v[q].is_zero()) out = out + (u[p] * v[q]) * ha[p][q];
        return out;
    };
    auto g = [&](const Vector& u, const Vector& v) {
        Vector out = zero_vector(B.dim());
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q)
                if (!u[p].is_zero() && !v[q].is_zero()) out = out + (u[p] * v[q]) * hb[p][q];
        return out;
    };
    auto e = [m](std::size_t k) { return unit_vector(m, k); };
    auto triple = [](std::size_t p, std::size_t q, std::size_t s) {
        return "(" + std::to_string(p + 1) + "," + std::to_string(q + 1) + "," + std::to_string(s + 1) + ")";
    };

    std::vector<Vector> values;
    for (const auto& row : ha) values.insert(values.end(), row.begin(), row.end());
    std::size_t rk = rank(values, A.dim());
    r.add("f-surjective", rk == A.dim(), "span rank " + std::to_string(rk) + " of " + std::to_string(A.dim()));
    values.clear();
    for (const auto& row : hb) values.insert(values.end(), row.begin(), row.end());
    rk = rank(values, B.dim());
    r.add("g-surjective", rk == B.dim(), "span rank " + std::to_string(rk) + " of " + std::to_string(B.dim()));

    bool ok = true;
    std::string detail;
    for (std::size_t b = 0; b < B.dim() && ok; ++b)
        for (std::size_t p = 0; p < m && ok; ++p)
            for (std::size_t q = 0; q < m && ok; ++q)
                if (f(xbar.right[b].column(p), e(q)) != f(e(p), x.left[b].column(q))) {
                    ok = false;
                    detail = "f(xbar" + std::to_string(p + 1) + "." + B.label(b) + " (x) x" + std::to_string(q + 1) + ")";
                }
    r.add("f-balanced", ok, detail);
    ok = true;
    detail.clear();
    for (std::size_t a = 0; a < A.dim() && ok; ++a)
        for (std::size_t p = 0; p < m && ok; ++p)
            for (std::size_t q = 0; q < m && ok; ++q)
                if (g(x.right[a].column(p), e(q)) != g(e(p), xbar.left[a].column(q))) {
                    ok = false;
                    detail = "g(x" + std::to_string(p + 1) + "." + A.label(a) + " (x) xbar" + std::to_string(q + 1) + ")";
                }
    r.add("g-balanced", ok, detail);

    ok = true;
    detail.clear();
    for (std::size_t a = 0; a < A.dim() && ok; ++a)
        for (std::size_t p = 0; p < m && ok; ++p)
            for (std::size_t q = 0; q < m && ok; ++q)
                if (f(xbar.left[a].column(p), e(q)) != A.multiply(A.basis(a), ha[p][q]) ||
                    f(e(p), x.right[a].column(q)) != A.multiply(ha[p][q], A.basis(a))) {
                    ok = false;
                    detail = A.label(a) + " at (" + std::to_string(p + 1) + "," + std::to_string(q + 1) + ")";
                }
    r.add("f-bimodule-map", ok, detail);
    ok = true;
    detail.clear();
    for (std::size_t b = 0; b < B.dim() && ok; ++b)
        for (std::size_t p = 0; p < m && ok; ++p)
            for (std::size_t q = 0; q < m && ok; ++q)
                if (g(x.left[b].column(p), e(q)) != B.multiply(B.basis(b), hb[p][q]) ||
                    g(e(p), xbar.right[b].column(q)) != B.multiply(hb[p][q], B.basis(b))) {
                    ok = false;
                    detail = B.label(b) + " at (" + std::to_string(p + 1) + "," + std::to_string(q + 1) + ")";
                }
    r.add("g-bimodule-map", ok, detail);

    std::vector<std::vector<Matrix>> fa(m, std::vector<Matrix>(m)), gb(m, std::vector<Matrix>(m));
    std::vector<std::vector<Matrix>> ra(m, std::vector<Matrix>(m)), lb(m, std::vector<Matrix>(m));
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
            fa[p][q] = xbar.act_left(ha[p][q]);
            gb[p][q] = xbar.act_right(hb[p][q]);
            lb[p][q] = x.act_left(hb[p][q]);
            ra[p][q] = x.act_right(ha[p][q]);
        }
    bool c1 = true, c2 = true;
    std::string d1, d2;
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q)
            for (std::size_t s = 0; s < m; ++s) {
                // f(xbar_p (x) x_q) . xbar_s = xbar_p . g(x_q (x) xbar_s)
                if (c1 && fa[p][q].column(s) != gb[q][s].column(p)) {
                    c1 = false;
                    d1 = "basis triple " + triple(p, q, s);
                }
                // g(x_p (x) xbar_q) . x_s = x_p . f(xbar_q (x) x_s)
                if (c2 && lb[p][q].column(s) != ra[q][s].column(p)) {
                    c2 = false;
                    d2 = "basis triple " + triple(p, q, s);
                }
            }
    r.add("condition-i", c1, d1);
    r.add("condition-ii", c2, d2);
    return r;
}

CenterIsomorphism center_isomorphism(const Bimodule& x) {
    const Report context = morita_context_check(x);
    if (!context.ok())
        throw Error(ErrorKind::ContextConditionFailed,
                    context.first_failure()->name + ": " + context.first_failure()->detail);
    const StarAlgebra& A = *x.algebra_a;
    const StarAlgebra& B = *x.algebra_b;
    const std::size_t m = x.dim;
    CenterIsomorphism out;
    out.center_a = center_basis(A);
    out.center_b = center_basis(B);
    const std::size_t za = out.center_a.size(), zb = out.center_b.size();

    // Unknowns b_k with sum b_k L(e_k) = R(a), one equation per matrix entry.
    Matrix system(m * m, B.dim());
    for (std::size_t k = 0; k < B.dim(); ++k)
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) system(r * m + c, k) = x.left[k](r, c);
    out.checks.add("unique", kernel_basis(system).empty(), "the left action is injective");

    out.phi = Matrix(B.dim(), za);
    bool solvable = true;
    std::string detail;
    for (std::size_t i = 0; i < za && solvable; ++i) {
        const Matrix ra = x.act_right(out.center_a[i]);
        Vector rhs(m * m);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) rhs[r * m + c] = ra(r, c);
        const auto b = solve(system, rhs);
        if (!b) {
            solvable = false;
            detail = "no b with x . z = b . x for central basis element " + std::to_string(i + 1);
            break;
        }
        for (std::size_t k = 0; k < B.dim(); ++k) out.phi(k, i) = (*b)[k];
    }
    out.checks.add("well-defined", solvable, detail);
    if (!solvable) throw Error(ErrorKind::ContextConditionFailed, detail);

    const Coordinates zc(out.center_b, B.dim());
    out.coordinates = Matrix(zb, za);
    bool central = true;
    for (std::size_t i = 0; i < za && central; ++i) {
        const auto c = zc(out.phi.column(i));
        if (!c) {
            central = false;
            break;
        }
        for (std::size_t j = 0; j < zb; ++j) out.coordinates(j, i) = (*c)[j];
    }
    out.checks.add("lands-in-center", central);

    auto phi_of = [&](const Vector& a) -> std::optional<Vector> {
        const auto c = Coordinates(out.center_a, A.dim())(a);
        if (!c) return std::nullopt;
        return out.phi * *c;
    };
    bool mult = true, star = true;
    for (std::size_t i = 0; i < za; ++i) {
        const auto s = phi_of(A.star(out.center_a[i]));
        star = star && s && *s == B.star(out.phi.column(i));
        for (std::size_t j = 0; j < za; ++j) {
            const auto p = phi_of(A.multiply(out.center_a[i], out.center_a[j]));
            mult = mult && p && *p == B.multiply(out.phi.column(i), out.phi.column(j));
        }
    }
    out.checks.add("multiplicative", mult);
    out.checks.add("star-preserving", star);
    const bool bij = central && za == zb && inverse(out.coordinates).has_value();
    out.checks.add("bijective", bij, std::to_string(za) + " -> " + std::to_string(zb));
    if (!out.checks.ok())
        throw Error(ErrorKind::ContextConditionFailed,
                    "center map fails " + out.checks.first_failure()->name);
    return out;
}

}  // namespace morita

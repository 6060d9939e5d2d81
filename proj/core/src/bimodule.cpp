#include "morita/bimodule.hpp"

#include <algorithm>

namespace morita {

namespace {

std::string one_based(std::size_t k) { return std::to_string(k + 1); }

std::string pair_label(std::size_t p, std::size_t q) { return "(" + one_based(p) + "," + one_based(q) + ")"; }

Matrix combine(const std::vector<Matrix>& ops, const Vector& a, std::size_t m) {
    Matrix out(m, m);
    for (std::size_t k = 0; k < a.size() && k < ops.size(); ++k)
        if (!a[k].is_zero()) out += a[k] * ops[k];
    return out;
}

// sum f(c_p) g(d_q) h(p,q) with f = conj when antilinear_first, g = conj otherwise.
Vector table_value(const InnerTable& h, const Vector& x, const Vector& y, bool antilinear_first, std::size_t d) {
    Vector out = zero_vector(d);
    for (std::size_t p = 0; p < x.size(); ++p) {
        if (x[p].is_zero()) continue;
        const FracScalar cp = antilinear_first ? x[p].conj() : x[p];
        for (std::size_t q = 0; q < y.size(); ++q) {
            if (y[q].is_zero()) continue;
            const FracScalar c = cp * (antilinear_first ? y[q] : y[q].conj());
            const Vector& v = h[p][q];
            for (std::size_t k = 0; k < d; ++k)
                if (!v[k].is_zero()) out[k] += c * v[k];
        }
    }
    return out;
}

bool same_span(const std::vector<Vector>& a, const std::vector<Vector>& b, std::size_t n) {
    return span_contains(a, b, n) && span_contains(b, a, n);
}

std::vector<Vector> select(const std::vector<Vector>& vs, std::size_t n) {
    std::vector<Vector> out;
    for (std::size_t k : independent_subset(vs, n)) out.push_back(vs[k]);
    return out;
}

std::vector<Vector> orbit(const std::vector<Matrix>& ops, const Vector& v) {
    std::vector<Vector> out;
    out.reserve(ops.size());
    for (const auto& op : ops) out.push_back(op * v);
    return out;
}

// Rows indexed by (q, k), columns by p: entry h(p, q)_k.
Matrix radical_system(const InnerTable& h, std::size_t m, std::size_t d) {
    Matrix out(m * d, m);
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q)
            for (std::size_t k = 0; k < d; ++k) out(q * d + k, p) = h[p][q][k];
    return out;
}

std::vector<Vector> radical_antilinear(const InnerTable& h, std::size_t m, std::size_t d) {
    return kernel_basis(radical_system(h, m, d).conjugate());
}

std::vector<Vector> radical_linear(const InnerTable& h, std::size_t m, std::size_t d) {
    return kernel_basis(radical_system(h, m, d));
}

InnerTable pull_back(const InnerTable& h, const Matrix& section, bool antilinear_first, std::size_t d) {
    const std::size_t k = section.cols();
    InnerTable out(k, std::vector<Vector>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            out[i][j] = table_value(h, section.column(i), section.column(j), antilinear_first, d);
    return out;
}

std::optional<CyclicStructure> project_structure(const std::optional<CyclicStructure>& s, const Matrix& projection) {
    if (!s) return std::nullopt;
    CyclicStructure out;
    for (const auto& piece : s->pieces) {
        PseudoCyclicPiece np;
        std::vector<Vector> img;
        for (const auto& v : piece.basis) img.push_back(projection * v);
        np.basis = select(img, projection.rows());
        if (np.basis.empty()) continue;
        for (const auto& v : piece.vectors) np.vectors.push_back(projection * v);
        out.pieces.push_back(std::move(np));
    }
    return out;
}

std::optional<CyclicStructure> conjugate_structure(const std::optional<CyclicStructure>& s) {
    if (!s) return std::nullopt;
    CyclicStructure out = *s;
    for (auto& piece : out.pieces) {
        for (auto& v : piece.basis) v = conjugate(v);
        for (auto& v : piece.vectors) v = conjugate(v);
    }
    return out;
}

bool is_scalars(const StarAlgebra& a) {
    return a.dim() == 1 && a.product(0, 0) == SparseVector{{0, FracScalar(1)}} &&
           a.star_of(0) == SparseVector{{0, FracScalar(1)}};
}

std::optional<Vector> unit_of(const StarAlgebra& a, const ApproxIdentityWitness* witness) {
    if (auto u = find_unit(a)) return u;
    if (witness && !witness->elements.empty()) {
        validate_approx_identity(a, *witness);
        const Vector& e = witness->elements.back();
        for (std::size_t k = 0; k < a.dim(); ++k)
            if (a.multiply(e, a.basis(k)) != a.basis(k) || a.multiply(a.basis(k), e) != a.basis(k)) return std::nullopt;
        return e;
    }
    return std::nullopt;
}

std::vector<LinearFunctional> default_family(const StarAlgebra& a) {
    std::vector<LinearFunctional> out;
    const std::size_t n = a.dim();
    auto consider = [&](Vector v) {
        LinearFunctional w{std::move(v)};
        if (functional_positivity(a, w).positive()) out.push_back(std::move(w));
    };
    for (std::size_t j = 0; j < n; ++j) {
        consider(unit_vector(n, j));
        for (std::size_t k = j + 1; k < n; ++k) {
            consider(unit_vector(n, j) + unit_vector(n, k));
            consider(unit_vector(n, j) - unit_vector(n, k));
        }
    }
    return out;
}

}  // namespace

Matrix Bimodule::act_left(const Vector& b) const { return combine(left, b, dim); }

Matrix Bimodule::act_right(const Vector& a) const { return combine(right, a, dim); }

Vector Bimodule::product_a(const Vector& x, const Vector& y) const {
    return table_value(inner_a, x, y, true, algebra_a->dim());
}

Vector Bimodule::product_b(const Vector& x, const Vector& y) const {
    if (!inner_b) throw Error(ErrorKind::MissingInnerB, "bimodule has no B-valued inner product");
    return table_value(*inner_b, x, y, false, algebra_b->dim());
}

std::string_view to_string(ValidationLevel level) {
    return level == ValidationLevel::Rigged ? "rigged" : "equivalence";
}

TablePositivity table_positivity(const StarAlgebra& a, const InnerTable& h,
                                 const std::vector<LinearFunctional>& functionals) {
    const std::size_t m = h.size();
    TablePositivity out;
    if (m == 0) {
        out.positive = out.certified = true;
        out.regime = "zero module";
        return out;
    }
    auto value = [&](const Vector& c) { return table_value(h, c, c, true, a.dim()); };

    if (a.realization()) {
        const Realization& real = *a.realization();
        const std::size_t d = real.weight.rows();
        Matrix big(m * d, m * d);
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q) {
                const Matrix blk = real.weight * real.image(h[p][q]);
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < d; ++j) big(p * d + i, q * d + j) = blk(i, j);
            }
        if (!big.is_hermitian()) {
            out.regime = "faithful realization: block Gram is not Hermitian";
            return out;
        }
        const PsdCertificate cert = psd_decide(big);
        if (cert.positive()) {
            out.positive = out.certified = true;
            out.regime = "faithful realization: block Gram [W rho(h(p,q))] is positive semi-definite";
            return out;
        }
        std::vector<Vector> candidates;
        for (std::size_t p = 0; p < m; ++p) candidates.push_back(unit_vector(m, p));
        for (std::size_t j = 0; j < d; ++j) {
            Vector c(m);
            for (std::size_t p = 0; p < m; ++p) c[p] = (*cert.witness)[p * d + j];
            candidates.push_back(std::move(c));
        }
        const FracScalar phases[] = {FracScalar(1), FracScalar(-1), FracScalar::i(), -FracScalar::i()};
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q)
                for (const auto& u : phases) candidates.push_back(unit_vector(m, p) + u * unit_vector(m, q));
        for (const auto& c : candidates) {
            if (is_zero(c)) continue;
            const Vector e = value(c);
            if (!a.is_hermitian(e)) continue;
            if (element_positivity(a, e).verdict == PositivityVerdict::NegativeCertified) {
                out.certified = true;
                out.refuting_vector = c;
                out.regime = "faithful realization: <x,x> decided outside A+";
                return out;
            }
        }
        out.regime = "faithful realization: block Gram not positive semi-definite and no refuting vector found";
        return out;
    }

    const std::vector<LinearFunctional> family = functionals.empty() ? default_family(a) : functionals;
    std::size_t used = 0;
    for (std::size_t k = 0; k < family.size(); ++k) {
        if (!functional_positivity(a, family[k]).positive()) continue;
        ++used;
        Matrix g(m, m);
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q) g(p, q) = family[k](h[p][q]);
        if (!g.is_hermitian()) {
            out.certified = true;
            out.regime = "functional " + one_based(k) + " pairs to a non-Hermitian matrix";
            return out;
        }
        const PsdCertificate cert = psd_decide(g);
        if (!cert.positive()) {
            out.certified = true;
            out.refuting_vector = cert.witness;
            out.regime = "positive functional " + one_based(k) + " is negative on <x,x>";
            return out;
        }
    }
    out.positive = true;
    out.regime = "consistent with " + std::to_string(used) + " certified-positive functionals";
    return out;
}

Report validate_cyclic_structure(const Bimodule& x, const CyclicStructure& s, bool right_side) {
    Report r;
    const std::string n1 = right_side ? "P1" : "Q1", n2 = right_side ? "P2" : "Q2", n3 = right_side ? "P3" : "Q3";
    const std::size_t m = x.dim;
    if (!right_side && !x.inner_b) {
        for (const auto& n : {n1, n2, n3}) r.add(n, false, "no B-valued inner product");
        return r;
    }
    const std::vector<Matrix>& ops = right_side ? x.right : x.left;
    auto product = [&](const Vector& u, const Vector& v) { return right_side ? x.product_a(u, v) : x.product_b(u, v); };

    std::vector<Vector> all;
    std::size_t total = 0;
    bool shapes = true;
    for (const auto& piece : s.pieces) {
        for (const auto& v : piece.basis) shapes = shapes && v.size() == m;
        for (const auto& v : piece.vectors) shapes = shapes && v.size() == m;
    }
    if (!shapes) {
        for (const auto& n : {n1, n2, n3}) r.add(n, false, "witness vectors have the wrong length");
        return r;
    }
    for (const auto& piece : s.pieces) {
        total += rank(piece.basis, m);
        all.insert(all.end(), piece.basis.begin(), piece.basis.end());
    }
    bool direct = total == m && rank(all, m) == m;
    std::string detail = direct ? "" : "pieces do not form a direct sum decomposition of the module";
    for (std::size_t i = 0; i < s.pieces.size() && direct; ++i)
        for (std::size_t j = 0; j < s.pieces.size() && direct; ++j) {
            if (i == j) continue;
            for (const auto& u : s.pieces[i].basis)
                for (const auto& v : s.pieces[j].basis)
                    if (direct && !is_zero(product(u, v))) {
                        direct = false;
                        detail = "pieces " + one_based(i) + " and " + one_based(j) + " are not orthogonal";
                    }
        }
    r.add(n1, direct, detail);

    bool invariant = true;
    detail.clear();
    for (std::size_t i = 0; i < s.pieces.size() && invariant; ++i) {
        std::vector<Vector> images;
        for (const auto& v : s.pieces[i].basis)
            for (const auto& op : ops) images.push_back(op * v);
        if (!span_contains(s.pieces[i].basis, images, m)) {
            invariant = false;
            detail = "piece " + one_based(i) + " is not invariant under the action";
        }
    }
    r.add(n2, invariant, detail);

    bool cyclic = true;
    detail.clear();
    for (std::size_t i = 0; i < s.pieces.size() && cyclic; ++i) {
        const auto& piece = s.pieces[i];
        if (piece.vectors.empty()) {
            cyclic = false;
            detail = "piece " + one_based(i) + " has no pseudo-cyclic vectors";
            break;
        }
        std::vector<Vector> prev;
        for (std::size_t k = 0; k < piece.vectors.size() && cyclic; ++k) {
            std::vector<Vector> cur = orbit(ops, piece.vectors[k]);
            if (!span_contains(piece.basis, cur, m)) {
                cyclic = false;
                detail = "orbit of vector " + one_based(k) + " leaves piece " + one_based(i);
            } else if (!span_contains(cur, prev, m)) {
                cyclic = false;
                detail = "filtration of piece " + one_based(i) + " is not increasing at vector " + one_based(k);
            }
            prev = std::move(cur);
        }
        if (cyclic && !span_contains(prev, piece.basis, m)) {
            cyclic = false;
            detail = "filtration of piece " + one_based(i) + " does not exhaust it";
        }
    }
    r.add(n3, cyclic, detail);
    return r;
}

std::optional<CyclicStructure> find_cyclic_structure(const Bimodule& x, bool right_side) {
    if (!right_side && !x.inner_b) return std::nullopt;
    const std::vector<Matrix>& ops = right_side ? x.right : x.left;
    const std::size_t m = x.dim;

    CyclicStructure greedy;
    std::vector<Vector> acc;
    for (std::size_t p = 0; p < m; ++p) {
        const Vector e = unit_vector(m, p);
        std::vector<Vector> span = select(orbit(ops, e), m);
        if (span.empty()) continue;
        std::vector<Vector> joined = acc;
        joined.insert(joined.end(), span.begin(), span.end());
        if (rank(joined, m) != acc.size() + span.size()) continue;
        acc = std::move(joined);
        greedy.pieces.push_back({std::move(span), {e}});
    }
    if (acc.size() == m && validate_cyclic_structure(x, greedy, right_side).ok()) return greedy;

    std::vector<Vector> all;
    for (std::size_t p = 0; p < m; ++p) all.push_back(unit_vector(m, p));
    for (std::size_t p = 0; p < m; ++p) {
        CyclicStructure single;
        single.pieces.push_back({all, {unit_vector(m, p)}});
        if (validate_cyclic_structure(x, single, right_side).ok()) return single;
    }
    return std::nullopt;
}

Report validate_bimodule(const Bimodule& x, ValidationLevel level, const ValidationOptions& options) {
    Report r;
    const StarAlgebra& B = *x.algebra_b;
    const StarAlgebra& A = *x.algebra_a;
    const std::size_t m = x.dim, da = A.dim(), db = B.dim();

    bool shape = x.left.size() == db && x.right.size() == da && x.inner_a.size() == m;
    for (const auto& op : x.left) shape = shape && op.rows() == m && op.cols() == m;
    for (const auto& op : x.right) shape = shape && op.rows() == m && op.cols() == m;
    for (const auto& row : x.inner_a) {
        shape = shape && row.size() == m;
        for (const auto& v : row) shape = shape && v.size() == da;
    }
    if (x.inner_b) {
        shape = shape && x.inner_b->size() == m;
        for (const auto& row : *x.inner_b) {
            shape = shape && row.size() == m;
            for (const auto& v : row) shape = shape && v.size() == db;
        }
    }
    r.add("shape", shape, shape ? "" : "action matrices or product tables have the wrong size");
    if (!shape) return r;

    for (const auto& [name, alg] : {std::pair<std::string, const StarAlgebra*>{"algebra-B", &B}, {"algebra-A", &A}}) {
        const Report v = validate_algebra(*alg);
        r.add(name, v.ok(), v.ok() ? "" : v.first_failure()->name + ": " + v.first_failure()->detail);
    }

    auto first_pair = [](std::size_t n, const auto& pred) -> std::optional<std::pair<std::size_t, std::size_t>> {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!pred(i, j)) return std::make_pair(i, j);
        return std::nullopt;
    };

    const auto bad_left = first_pair(db, [&](std::size_t i, std::size_t j) {
        return x.left[i] * x.left[j] == x.act_left(to_dense(B.product(i, j), db));
    });
    r.add("left-module", !bad_left,
          bad_left ? "L(" + B.label(bad_left->first) + ") L(" + B.label(bad_left->second) + ") != L(product)" : "");
    const auto bad_right = first_pair(da, [&](std::size_t i, std::size_t j) {
        return x.right[j] * x.right[i] == x.act_right(to_dense(A.product(i, j), da));
    });
    r.add("right-module", !bad_right,
          bad_right ? "(x." + A.label(bad_right->first) + ")." + A.label(bad_right->second) + " != x.(product)" : "");
    bool commute = true;
    std::string detail;
    for (std::size_t b = 0; b < db && commute; ++b)
        for (std::size_t a = 0; a < da && commute; ++a)
            if (x.left[b] * x.right[a] != x.right[a] * x.left[b]) {
                commute = false;
                detail = "L(" + B.label(b) + ") and R(" + A.label(a) + ") do not commute";
            }
    r.add("commuting-actions", commute, detail);

    // X axioms.
    r.add("X1", true, "sesquilinear by construction from basis values");
    std::string x2_detail;
    if (const auto bad = first_pair(m, [&](std::size_t p, std::size_t q) {
            return x.inner_a[p][q] == A.star(x.inner_a[q][p]);
        })) {
        const auto [p, q] = *bad;
        x2_detail = "<x" + one_based(p) + ",x" + one_based(q) + ">_A != <x" + one_based(q) + ",x" + one_based(p) + ">_A^*";
    }
    r.add("X2", x2_detail.empty(), x2_detail);

    bool x3 = true;
    detail.clear();
    for (std::size_t a = 0; a < da && x3; ++a)
        for (std::size_t p = 0; p < m && x3; ++p)
            for (std::size_t q = 0; q < m && x3; ++q)
                if (x.product_a(unit_vector(m, p), x.right[a].column(q)) != A.multiply(x.inner_a[p][q], A.basis(a))) {
                    x3 = false;
                    detail = "<x" + one_based(p) + ", x" + one_based(q) + "." + A.label(a) + ">_A != <x" + one_based(p) +
                             ",x" + one_based(q) + ">_A " + A.label(a);
                }
    r.add("X3", x3, detail);

    const TablePositivity x4 = table_positivity(A, x.inner_a, options.functionals_a);
    r.add("X4", x4.positive, x4.regime);

    std::vector<Matrix> left_star;
    for (std::size_t b = 0; b < db; ++b) left_star.push_back(x.act_left(B.star(B.basis(b))));
    bool x5 = true;
    detail.clear();
    for (std::size_t b = 0; b < db && x5; ++b)
        for (std::size_t p = 0; p < m && x5; ++p)
            for (std::size_t q = 0; q < m && x5; ++q)
                if (x.product_a(unit_vector(m, p), x.left[b].column(q)) !=
                    x.product_a(left_star[b].column(p), unit_vector(m, q))) {
                    x5 = false;
                    detail = "<x" + one_based(p) + ", " + B.label(b) + ".x" + one_based(q) + ">_A != <" + B.label(b) +
                             "^*.x" + one_based(p) + ", x" + one_based(q) + ">_A";
                }
    r.add("X5", x5, detail);

    std::vector<Vector> values;
    for (const auto& row : x.inner_a) values.insert(values.end(), row.begin(), row.end());
    const std::size_t ra = rank(values, da);
    r.add("X6", ra == da, "span rank " + std::to_string(ra) + " of " + std::to_string(da));

    if (level == ValidationLevel::Rigged) return r;

    if (!x.inner_b) {
        for (const char* n : {"Y1", "Y2", "Y3", "Y4", "Y5", "Y6", "E3"}) r.add(n, false, "no B-valued inner product");
    } else {
        const InnerTable& hb = *x.inner_b;
        r.add("Y1", true, "sesquilinear by construction from basis values");
        std::string y2_detail;
        if (const auto bad = first_pair(m, [&](std::size_t p, std::size_t q) { return hb[p][q] == B.star(hb[q][p]); })) {
            const auto [p, q] = *bad;
            y2_detail = "_B<x" + one_based(p) + ",x" + one_based(q) + "> != _B<x" + one_based(q) + ",x" + one_based(p) + ">^*";
        }
        r.add("Y2", y2_detail.empty(), y2_detail);
        bool y3 = true;
        detail.clear();
        for (std::size_t b = 0; b < db && y3; ++b)
            for (std::size_t p = 0; p < m && y3; ++p)
                for (std::size_t q = 0; q < m && y3; ++q)
                    if (x.product_b(x.left[b].column(p), unit_vector(m, q)) != B.multiply(B.basis(b), hb[p][q])) {
                        y3 = false;
                        detail = "_B<" + B.label(b) + ".x" + one_based(p) + ", x" + one_based(q) + "> != " + B.label(b) +
                                 " _B<x" + one_based(p) + ",x" + one_based(q) + ">";
                    }
        r.add("Y3", y3, detail);

        const TablePositivity y4 = table_positivity(B, hb, options.functionals_b);
        r.add("Y4", y4.positive, y4.regime);

        std::vector<Matrix> right_star;
        for (std::size_t a = 0; a < da; ++a) right_star.push_back(x.act_right(A.star(A.basis(a))));
        bool y5 = true;
        detail.clear();
        for (std::size_t a = 0; a < da && y5; ++a)
            for (std::size_t p = 0; p < m && y5; ++p)
                for (std::size_t q = 0; q < m && y5; ++q)
                    if (x.product_b(x.right[a].column(p), unit_vector(m, q)) !=
                        x.product_b(unit_vector(m, p), right_star[a].column(q))) {
                        y5 = false;
                        detail = "_B<x" + one_based(p) + "." + A.label(a) + ", x" + one_based(q) + "> != _B<x" +
                                 one_based(p) + ", x" + one_based(q) + "." + A.label(a) + "^*>";
                    }
        r.add("Y5", y5, detail);

        values.clear();
        for (const auto& row : hb) values.insert(values.end(), row.begin(), row.end());
        const std::size_t rb = rank(values, db);
        r.add("Y6", rb == db, "span rank " + std::to_string(rb) + " of " + std::to_string(db));

        std::vector<std::vector<Matrix>> lb(m, std::vector<Matrix>(m)), ra_(m, std::vector<Matrix>(m));
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q) {
                lb[p][q] = x.act_left(hb[p][q]);
                ra_[p][q] = x.act_right(x.inner_a[p][q]);
            }
        bool e3 = true;
        detail.clear();
        for (std::size_t p = 0; p < m && e3; ++p)
            for (std::size_t q = 0; q < m && e3; ++q)
                for (std::size_t s = 0; s < m && e3; ++s)
                    if (lb[p][q].column(s) != ra_[q][s].column(p)) {
                        e3 = false;
                        detail = "_B<x" + one_based(p) + ",x" + one_based(q) + "> x" + one_based(s) + " != x" +
                                 one_based(p) + " <x" + one_based(q) + ",x" + one_based(s) + ">_A";
                    }
        r.add("E3", e3, detail);
    }

    for (bool right_side : {true, false}) {
        const auto& supplied = right_side ? x.p_structure : x.q_structure;
        std::optional<CyclicStructure> s = supplied;
        std::string source = "supplied witness";
        if (!s && options.search_cyclic) {
            s = find_cyclic_structure(x, right_side);
            source = "found by basis-vector scan";
        }
        if (!s) {
            const char* const p_names[] = {"P1", "P2", "P3"};
            const char* const q_names[] = {"Q1", "Q2", "Q3"};
            for (const char* n : right_side ? p_names : q_names) r.add(n, false, "no cyclic structure supplied or found");
            continue;
        }
        Report c = validate_cyclic_structure(x, *s, right_side);
        for (auto& check : c.checks)
            check.detail = check.passed ? source + ", " + std::to_string(s->pieces.size()) + " pieces" : check.detail;
        r.merge(c);
    }
    return r;
}

Bimodule conjugate(const Bimodule& x) {
    if (!x.inner_b) throw Error(ErrorKind::MissingInnerB, "the conjugate bimodule needs both inner products");
    const StarAlgebra& A = *x.algebra_a;
    const StarAlgebra& B = *x.algebra_b;
    Bimodule out;
    out.algebra_b = x.algebra_a;
    out.algebra_a = x.algebra_b;
    out.dim = x.dim;
    for (std::size_t a = 0; a < A.dim(); ++a) out.left.push_back(x.act_right(A.star(A.basis(a))).conjugate());
    for (std::size_t b = 0; b < B.dim(); ++b) out.right.push_back(x.act_left(B.star(B.basis(b))).conjugate());
    out.inner_a = *x.inner_b;
    out.inner_b = x.inner_a;
    out.p_structure = conjugate_structure(x.q_structure);
    out.q_structure = conjugate_structure(x.p_structure);
    return out;
}

BimoduleQuotient quotient_by_null(const Bimodule& x) {
    if (!x.inner_b) throw Error(ErrorKind::MissingInnerB, "the quotient needs both inner products");
    if (!identity_structure(*x.algebra_a).has_structure() || !identity_structure(*x.algebra_b).has_structure())
        throw Error(ErrorKind::NoIdentityStructure, "both algebras need a unit or an approximate identity");
    return quotient_by_radical(x);
}

BimoduleQuotient quotient_by_radical(const Bimodule& x) {
    const std::size_t m = x.dim, da = x.algebra_a->dim(), db = x.algebra_b->dim();
    BimoduleQuotient out;
    out.radical_a = radical_antilinear(x.inner_a, m, da);
    if (x.inner_b) {
        out.radical_b = radical_linear(*x.inner_b, m, db);
        out.radicals_agree = same_span(out.radical_a, out.radical_b, m);
    }
    out.map = quotient_by(out.radical_a, m);

    for (const auto* ops : {&x.left, &x.right})
        for (const auto& op : *ops) {
            std::vector<Vector> img;
            for (const auto& v : out.radical_a) img.push_back(op * v);
            if (!span_contains(out.radical_a, img, m))
                throw Error(ErrorKind::InvalidBimodule, "the radical is not invariant under the actions");
        }

    Bimodule& q = out.bimodule;
    q.algebra_a = x.algebra_a;
    q.algebra_b = x.algebra_b;
    q.dim = out.map.dim();
    for (const auto& op : x.left) q.left.push_back(out.map.projection * op * out.map.section);
    for (const auto& op : x.right) q.right.push_back(out.map.projection * op * out.map.section);
    q.inner_a = pull_back(x.inner_a, out.map.section, true, da);
    if (x.inner_b) q.inner_b = pull_back(*x.inner_b, out.map.section, false, db);
    q.p_structure = project_structure(x.p_structure, out.map.projection);
    q.q_structure = project_structure(x.q_structure, out.map.projection);
    out.definite = radical_antilinear(q.inner_a, q.dim, da).empty() &&
                   (!q.inner_b || radical_linear(*q.inner_b, q.dim, db).empty());
    return out;
}

Report bimodule_isomorphism_check(const Bimodule& x, const Bimodule& y, const Matrix& t) {
    Report r;
    const bool shape = same_algebra(x.algebra_a, y.algebra_a) && same_algebra(x.algebra_b, y.algebra_b) &&
                       t.rows() == y.dim && t.cols() == x.dim;
    r.add("shape", shape);
    if (!shape) return r;
    r.add("bijective", t.is_square() && inverse(t).has_value());
    auto actions = [&](const std::vector<Matrix>& ox, const std::vector<Matrix>& oy) -> std::string {
        for (std::size_t k = 0; k < ox.size(); ++k)
            if (t * ox[k] != oy[k] * t) return "basis element " + std::to_string(k + 1);
        return {};
    };
    const std::string left = actions(x.left, y.left), right = actions(x.right, y.right);
    r.add("left-action", left.empty(), left);
    r.add("right-action", right.empty(), right);
    auto products = [&](bool b_side) -> std::string {
        for (std::size_t p = 0; p < x.dim; ++p)
            for (std::size_t q = 0; q < x.dim; ++q) {
                const Vector tp = t.column(p), tq = t.column(q);
                const bool same = b_side ? y.product_b(tp, tq) == (*x.inner_b)[p][q] : y.product_a(tp, tq) == x.inner_a[p][q];
                if (!same) return "(" + std::to_string(p + 1) + "," + std::to_string(q + 1) + ")";
            }
        return {};
    };
    const std::string ha = products(false);
    r.add("inner-A", ha.empty(), ha);
    if (x.inner_b && y.inner_b) {
        const std::string hb = products(true);
        r.add("inner-B", hb.empty(), hb);
    }
    return r;
}

BalancedTensor tensor_bimodules(const Bimodule& x, const Bimodule& y) {
    if (!same_algebra(x.algebra_a, y.algebra_b))
        throw Error(ErrorKind::MiddleAlgebraMismatch, "right algebra of the first factor differs from the left algebra of the second");
    std::optional<CyclicStructure> px = x.p_structure ? x.p_structure : find_cyclic_structure(x, true);
    if (!px || !validate_cyclic_structure(x, *px, true).ok())
        throw Error(ErrorKind::MissingCyclicWitness, "first factor has no valid P1-P3 structure");
    std::optional<CyclicStructure> qy = y.q_structure ? y.q_structure : find_cyclic_structure(y, false);
    if (!qy || !validate_cyclic_structure(y, *qy, false).ok())
        throw Error(ErrorKind::MissingCyclicWitness, "second factor has no valid Q1-Q3 structure");

    const std::size_t mx = x.dim, my = y.dim, n = mx * my;
    const StarAlgebra& mid = *x.algebra_a;
    const std::size_t dc = y.algebra_a->dim(), db = x.algebra_b->dim();

    std::vector<Vector> relations;
    for (std::size_t a = 0; a < mid.dim(); ++a)
        for (std::size_t p = 0; p < mx; ++p)
            for (std::size_t s = 0; s < my; ++s) {
                Vector v = kron(x.right[a].column(p), unit_vector(my, s)) - kron(unit_vector(mx, p), y.left[a].column(s));
                if (!is_zero(v)) relations.push_back(std::move(v));
            }
    BalancedTensor out;
    out.relations = quotient_by(relations, n);

    // Plain-tensor tables.
    InnerTable hc(n, std::vector<Vector>(n));
    std::optional<InnerTable> hb;
    if (x.inner_b && y.inner_b) hb = InnerTable(n, std::vector<Vector>(n));
    for (std::size_t p = 0; p < mx; ++p)
        for (std::size_t q = 0; q < mx; ++q) {
            const Matrix ly = y.act_left(x.inner_a[p][q]);
            for (std::size_t s = 0; s < my; ++s)
                for (std::size_t t = 0; t < my; ++t) hc[p * my + s][q * my + t] = y.product_a(unit_vector(my, s), ly.column(t));
        }
    if (hb)
        for (std::size_t s = 0; s < my; ++s)
            for (std::size_t t = 0; t < my; ++t) {
                const Matrix rx = x.act_right((*y.inner_b)[s][t]);
                for (std::size_t p = 0; p < mx; ++p)
                    for (std::size_t q = 0; q < mx; ++q)
                        (*hb)[p * my + s][q * my + t] = x.product_b(rx.column(p), unit_vector(mx, q));
            }

    for (const auto& w : out.relations.subspace)
        for (std::size_t k = 0; k < n; ++k) {
            if (!is_zero(table_value(hc, w, unit_vector(n, k), true, dc)) ||
                (hb && !is_zero(table_value(*hb, w, unit_vector(n, k), false, db))))
                throw Error(ErrorKind::InvalidBimodule, "induced products do not vanish on the balancing relations");
        }

    const Matrix& sec = out.relations.section;
    const Matrix& proj = out.relations.projection;
    const std::size_t k = out.relations.dim();
    InnerTable tc = pull_back(hc, sec, true, dc);
    std::optional<InnerTable> tb;
    if (hb) tb = pull_back(*hb, sec, false, db);

    // Divide out the null vectors of the C-valued product.
    out.null_quotient = quotient_by(radical_antilinear(tc, k, dc), k);
    const Matrix s2 = sec * out.null_quotient.section;
    const Matrix p2 = out.null_quotient.projection * proj;

    Bimodule& t = out.bimodule;
    t.algebra_b = x.algebra_b;
    t.algebra_a = y.algebra_a;
    t.dim = out.null_quotient.dim();
    const Matrix iy = Matrix::identity(my), ix = Matrix::identity(mx);
    for (const auto& op : x.left) t.left.push_back(p2 * kron(op, iy) * s2);
    for (const auto& op : y.right) t.right.push_back(p2 * kron(ix, op) * s2);
    t.inner_a = pull_back(tc, out.null_quotient.section, true, dc);
    if (tb) t.inner_b = pull_back(*tb, out.null_quotient.section, false, db);
    return out;
}

Bimodule external_tensor(const Bimodule& x1, const Bimodule& x2) {
    Bimodule out;
    out.algebra_b = share(tensor_product(*x1.algebra_b, *x2.algebra_b));
    out.algebra_a = share(tensor_product(*x1.algebra_a, *x2.algebra_a));
    const std::size_t m2 = x2.dim;
    out.dim = x1.dim * m2;
    for (const auto& l1 : x1.left)
        for (const auto& l2 : x2.left) out.left.push_back(kron(l1, l2));
    for (const auto& r1 : x1.right)
        for (const auto& r2 : x2.right) out.right.push_back(kron(r1, r2));
    auto tensor_table = [&](const InnerTable& h1, const InnerTable& h2) {
        InnerTable h(out.dim, std::vector<Vector>(out.dim));
        for (std::size_t p = 0; p < x1.dim; ++p)
            for (std::size_t q = 0; q < x1.dim; ++q)
                for (std::size_t s = 0; s < m2; ++s)
                    for (std::size_t t = 0; t < m2; ++t) h[p * m2 + s][q * m2 + t] = kron(h1[p][q], h2[s][t]);
        return h;
    };
    out.inner_a = tensor_table(x1.inner_a, x2.inner_a);
    if (x1.inner_b && x2.inner_b) out.inner_b = tensor_table(*x1.inner_b, *x2.inner_b);
    auto tensor_structure = [](const std::optional<CyclicStructure>& s1, const std::optional<CyclicStructure>& s2) {
        std::optional<CyclicStructure> s;
        if (!s1 || !s2) return s;
        s.emplace();
        for (const auto& a : s1->pieces)
            for (const auto& b : s2->pieces) {
                PseudoCyclicPiece piece;
                for (const auto& u : a.basis)
                    for (const auto& v : b.basis) piece.basis.push_back(kron(u, v));
                const std::size_t len = std::max(a.vectors.size(), b.vectors.size());
                for (std::size_t k = 0; k < len && !a.vectors.empty() && !b.vectors.empty(); ++k)
                    piece.vectors.push_back(kron(a.vectors[std::min(k, a.vectors.size() - 1)],
                                                 b.vectors[std::min(k, b.vectors.size() - 1)]));
                s->pieces.push_back(std::move(piece));
            }
        return s;
    };
    out.p_structure = tensor_structure(x1.p_structure, x2.p_structure);
    out.q_structure = tensor_structure(x1.q_structure, x2.q_structure);
    return out;
}

Matrix theta(const Bimodule& x, const Vector& u, const Vector& v) {
    Matrix out(x.dim, x.dim);
    for (std::size_t r = 0; r < x.dim; ++r) {
        const Vector col = x.act_right(x.product_a(v, unit_vector(x.dim, r))) * u;
        for (std::size_t k = 0; k < x.dim; ++k) out(k, r) = col[k];
    }
    return out;
}

namespace {

Vector flatten(const Matrix& m) {
    Vector out;
    out.reserve(m.rows() * m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    return out;
}

}  // namespace

std::optional<Vector> FiniteRankAlgebra::coordinates(const Matrix& op) const {
    const std::size_t m = operators.empty() ? op.rows() : operators.front().rows();
    if (op.rows() != m || op.cols() != m) return std::nullopt;
    std::vector<Vector> flat;
    for (const auto& k : operators) flat.push_back(flatten(k));
    return Coordinates(flat, m * m)(flatten(op));
}

FiniteRankAlgebra finite_rank_algebra(const Bimodule& x) {
    const std::size_t m = x.dim;
    std::vector<Matrix> thetas;
    std::vector<Vector> flat;
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
            thetas.push_back(theta(x, unit_vector(m, p), unit_vector(m, q)));
            flat.push_back(flatten(thetas.back()));
        }
    FiniteRankAlgebra out;
    std::vector<Vector> basis_flat;
    for (std::size_t k : independent_subset(flat, m * m)) {
        out.operators.push_back(thetas[k]);
        out.basis_pairs.emplace_back(k / m, k % m);
        basis_flat.push_back(flat[k]);
    }
    const std::size_t d = out.operators.size();
    const Coordinates coords(basis_flat, m * m);

    std::vector<std::vector<SparseVector>> mul(d, std::vector<SparseVector>(d));
    std::vector<SparseVector> st(d);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < d; ++i) {
        const auto [p, q] = out.basis_pairs[i];
        labels.push_back("theta(" + one_based(p) + "," + one_based(q) + ")");
        auto s = coords(flat[q * m + p]);
        if (!s) throw Error(ErrorKind::DegenerateRiggedModule, "Theta" + pair_label(q, p) + " is outside the span");
        st[i] = to_sparse(*s);
        for (std::size_t j = 0; j < d; ++j) {
            auto c = coords(flatten(out.operators[i] * out.operators[j]));
            if (!c)
                throw Error(ErrorKind::DegenerateRiggedModule,
                            "product of basis operators " + one_based(i) + " and " + one_based(j) + " leaves the span");
            mul[i][j] = to_sparse(*c);
        }
    }
    // The involution is well defined only if Theta_{p,q} -> Theta_{q,p} respects linear relations.
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
            const Vector c = *coords(flat[p * m + q]);
            Vector s = zero_vector(d);
            for (std::size_t i = 0; i < d; ++i)
                if (!c[i].is_zero()) s = s + c[i].conj() * to_dense(st[i], d);
            if (s != *coords(flat[q * m + p]))
                throw Error(ErrorKind::DegenerateRiggedModule, "Theta" + pair_label(p, q) + "^* != Theta" + pair_label(q, p));
        }
    StarAlgebra k(std::move(mul), std::move(st), std::move(labels));

    // Over the scalars a positive definite product makes K a realized algebra on X itself.
    if (is_scalars(*x.algebra_a)) {
        Matrix g(m, m);
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q) g(p, q) = x.inner_a[p][q][0];
        if (g.is_hermitian() && inverse(g) && psd_decide(g).positive()) k.set_realization(Realization{out.operators, g});
    }
    out.algebra = share(std::move(k));

    if (x.inner_b) {
        const StarAlgebra& B = *x.algebra_b;
        Matrix lmap(d, B.dim());
        bool inside = true;
        std::string detail;
        for (std::size_t b = 0; b < B.dim() && inside; ++b) {
            auto c = coords(flatten(x.left[b]));
            if (!c) {
                inside = false;
                detail = "L(" + B.label(b) + ") is not a finite-rank operator";
                break;
            }
            for (std::size_t i = 0; i < d; ++i) lmap(i, b) = (*c)[i];
        }
        out.isomorphism.add("lands-in-K", inside, detail);
        if (inside) {
            out.isomorphism.merge(check_star_homomorphism(B, *out.algebra, lmap));
            const bool bij = lmap.is_square() && inverse(lmap).has_value();
            out.isomorphism.add("bijective", bij, "L_B is " + std::to_string(d) + " x " + std::to_string(B.dim()) +
                                                      " of rank " + std::to_string(rank(lmap)));
            out.left_map = std::move(lmap);
        }
    }
    return out;
}

AlgebraRef matrix_over(const AlgebraRef& a, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::BadParams, "matrix size must be positive");
    if (is_scalars(*a)) return share(matrix_algebra(n));
    return share(tensor_product(matrix_algebra(n), *a));
}

Bimodule free_module_bimodule(const AlgebraRef& a, std::size_t n, const ApproxIdentityWitness* witness) {
    if (n == 0) throw Error(ErrorKind::BadParams, "free module needs n >= 1");
    const StarAlgebra& A = *a;
    const auto unit = unit_of(A, witness);
    if (!unit) throw Error(ErrorKind::NoIdentityStructure, "free module needs a unit or an approximate identity");
    const std::size_t da = A.dim(), m = n * da;
    Bimodule x;
    x.algebra_a = a;
    x.algebra_b = matrix_over(a, n);
    x.dim = m;
    auto block = [&](std::size_t i, std::size_t j, const Matrix& blk, Matrix& into) {
        for (std::size_t r = 0; r < da; ++r)
            for (std::size_t c = 0; c < da; ++c) into(i * da + r, j * da + c) = blk(r, c);
    };
    for (std::size_t e = 0; e < da; ++e) {
        Matrix r(m, m);
        const Matrix blk = A.right_multiplication(A.basis(e));
        for (std::size_t i = 0; i < n; ++i) block(i, i, blk, r);
        x.right.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t c = 0; c < da; ++c) {
                Matrix lm(m, m);
                block(k, l, A.left_multiplication(A.basis(c)), lm);
                x.left.push_back(std::move(lm));
            }
    x.inner_a.assign(m, std::vector<Vector>(m, zero_vector(da)));
    InnerTable hb(m, std::vector<Vector>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t e = 0; e < da; ++e)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t f = 0; f < da; ++f) {
                    if (i == j) x.inner_a[i * da + e][j * da + f] = A.multiply(A.star(A.basis(e)), A.basis(f));
                    hb[i * da + e][j * da + f] = kron(unit_vector(n * n, i * n + j), A.multiply(A.basis(e), A.star(A.basis(f))));
                }
    x.inner_b = std::move(hb);

    auto slot = [&](std::size_t i, const Vector& v) {
        Vector out = zero_vector(m);
        for (std::size_t e = 0; e < da; ++e) out[i * da + e] = v[e];
        return out;
    };
    CyclicStructure p, q;
    std::vector<Vector> all;
    for (std::size_t i = 0; i < n; ++i) {
        PseudoCyclicPiece piece;
        for (std::size_t e = 0; e < da; ++e) piece.basis.push_back(unit_vector(m, i * da + e));
        piece.vectors.push_back(slot(i, *unit));
        all.insert(all.end(), piece.basis.begin(), piece.basis.end());
        p.pieces.push_back(std::move(piece));
    }
    q.pieces.push_back({all, {slot(0, *unit)}});
    x.p_structure = std::move(p);
    x.q_structure = std::move(q);
    return x;
}

Bimodule homomorphism_bimodule(const AlgebraRef& b, const AlgebraRef& a, const Matrix& phi) {
    const StarAlgebra& A = *a;
    const StarAlgebra& B = *b;
    if (phi.rows() != A.dim() || phi.cols() != B.dim())
        throw Error(ErrorKind::ShapeMismatch, "homomorphism matrix must be dim(A) x dim(B)");
    const Report hom = check_star_homomorphism(B, A, phi);
    if (!hom.ok())
        throw Error(ErrorKind::NotStarHomomorphism, hom.first_failure()->name + ": " + hom.first_failure()->detail);
    Bimodule x;
    x.algebra_a = a;
    x.algebra_b = b;
    x.dim = A.dim();
    for (std::size_t k = 0; k < B.dim(); ++k) x.left.push_back(A.left_multiplication(phi.column(k)));
    for (std::size_t k = 0; k < A.dim(); ++k) x.right.push_back(A.right_multiplication(A.basis(k)));
    x.inner_a.assign(x.dim, std::vector<Vector>(x.dim));
    for (std::size_t p = 0; p < x.dim; ++p)
        for (std::size_t q = 0; q < x.dim; ++q) x.inner_a[p][q] = A.multiply(A.star(A.basis(p)), A.basis(q));
    const auto inv = phi.is_square() ? inverse(phi) : std::nullopt;
    if (inv) {
        InnerTable hb(x.dim, std::vector<Vector>(x.dim));
        for (std::size_t p = 0; p < x.dim; ++p)
            for (std::size_t q = 0; q < x.dim; ++q) hb[p][q] = *inv * A.multiply(A.basis(p), A.star(A.basis(q)));
        x.inner_b = std::move(hb);
    }
    if (const auto unit = find_unit(A)) {
        std::vector<Vector> all;
        for (std::size_t p = 0; p < x.dim; ++p) all.push_back(unit_vector(x.dim, p));
        x.p_structure = CyclicStructure{{{all, {*unit}}}};
        if (inv) x.q_structure = CyclicStructure{{{all, {*unit}}}};
    }
    return x;
}

CornerBimodule corner_bimodule(const AlgebraRef& a, std::size_t size, const Vector& q) {
    const StarAlgebra& A = *a;
    const auto unit = find_unit(A);
    if (!unit) throw Error(ErrorKind::NoIdentityStructure, "corners are built over unital algebras");
    const AlgebraRef kref = matrix_over(a, size);
    const StarAlgebra& K = *kref;
    if (q.size() != K.dim()) throw Error(ErrorKind::ShapeMismatch, "projection has the wrong dimension");
    if (K.star(q) != q) throw Error(ErrorKind::NotProjection, "Q != Q^*");
    if (K.multiply(q, q) != q) throw Error(ErrorKind::NotProjection, "Q != Q^2");

    CornerBimodule out;
    std::vector<Vector> orbit_two_sided, left_orbit, corner_span;
    for (std::size_t i = 0; i < K.dim(); ++i) {
        const Vector eq = K.multiply(K.basis(i), q);
        left_orbit.push_back(eq);
        corner_span.push_back(K.multiply(q, K.multiply(K.basis(i), q)));
        for (std::size_t j = 0; j < K.dim(); ++j) orbit_two_sided.push_back(K.multiply(eq, K.basis(j)));
    }
    out.fullness_rank = rank(orbit_two_sided, K.dim());
    if (out.fullness_rank != K.dim())
        throw Error(ErrorKind::NotFull, "span{A Q B} has rank " + std::to_string(out.fullness_rank) + " of " +
                                            std::to_string(K.dim()));

    std::vector<Vector> cbasis;
    std::vector<std::string> clabels;
    for (std::size_t k : independent_subset(corner_span, K.dim())) {
        cbasis.push_back(corner_span[k]);
        clabels.push_back("Q" + K.label(k) + "Q");
    }
    out.corner = share(subalgebra(K, cbasis, AlgebraKind::Corner).with_labels(clabels));
    out.module_basis = select(left_orbit, K.dim());
    const std::size_t m = out.module_basis.size();
    const Coordinates mc(out.module_basis, K.dim());
    const Coordinates cc(cbasis, K.dim());
    auto module_coords = [&](const Vector& v) {
        auto c = mc(v);
        if (!c) throw Error(ErrorKind::InvalidBimodule, "element outside K Q");
        return *c;
    };

    Bimodule& x = out.bimodule;
    x.algebra_b = kref;
    x.algebra_a = out.corner;
    x.dim = m;
    for (std::size_t b = 0; b < K.dim(); ++b) {
        std::vector<Vector> cols;
        for (const auto& v : out.module_basis) cols.push_back(module_coords(K.multiply(K.basis(b), v)));
        x.left.push_back(Matrix::from_columns(cols, m));
    }
    for (const auto& c : cbasis) {
        std::vector<Vector> cols;
        for (const auto& v : out.module_basis) cols.push_back(module_coords(K.multiply(v, c)));
        x.right.push_back(Matrix::from_columns(cols, m));
    }
    x.inner_a.assign(m, std::vector<Vector>(m));
    InnerTable hb(m, std::vector<Vector>(m));
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t r = 0; r < m; ++r) {
            x.inner_a[p][r] = *cc(K.multiply(K.star(out.module_basis[p]), out.module_basis[r]));
            hb[p][r] = K.multiply(out.module_basis[p], K.star(out.module_basis[r]));
        }
    x.inner_b = std::move(hb);

    std::vector<Vector> all;
    for (std::size_t p = 0; p < m; ++p) all.push_back(unit_vector(m, p));
    x.q_structure = CyclicStructure{{{all, {module_coords(q)}}}};

    // Elements of K as size x size arrays of elements of A.
    const std::size_t da = A.dim();
    auto entry = [&](const Vector& k, std::size_t i, std::size_t j) {
        return Vector(k.begin() + (i * size + j) * da, k.begin() + (i * size + j + 1) * da);
    };
    auto element = [&](std::size_t i, std::size_t j, const Vector& v) {
        Vector k = zero_vector(K.dim());
        for (std::size_t e = 0; e < da; ++e) k[(i * size + j) * da + e] = v[e];
        return k;
    };
    // z = (z_1..z_L) in A^L; Qz and <Qz, Qz> = sum (Qz)_k^* (Qz)_k.
    auto inverse_in_a = [&](const Vector& g) -> std::optional<Vector> {
        auto c = solve(A.left_multiplication(g), *unit);
        if (!c || A.multiply(*c, g) != *unit) return std::nullopt;
        return c;
    };
    std::vector<std::vector<Vector>> candidates;
    for (std::size_t j = 0; j < size; ++j) {
        std::vector<Vector> z(size, zero_vector(da));
        z[j] = *unit;
        candidates.push_back(z);
        for (std::size_t e = 0; e < da; ++e) {
            z[j] = A.basis(e);
            candidates.push_back(z);
        }
    }
    for (const auto& z : candidates) {
        std::vector<Vector> qz(size, zero_vector(da));
        for (std::size_t k = 0; k < size; ++k)
            for (std::size_t l = 0; l < size; ++l) qz[k] = qz[k] + A.multiply(entry(q, k, l), z[l]);
        Vector g = zero_vector(da);
        for (std::size_t k = 0; k < size; ++k) g = g + A.multiply(A.star(qz[k]), qz[k]);
        const auto ginv = inverse_in_a(g);
        if (!ginv) continue;
        // Omega_i = Theta_{e_i g^-1, z} Q with pieces F_i Q = (row i of K) Q.
        CyclicStructure p;
        for (std::size_t i = 0; i < size; ++i) {
            PseudoCyclicPiece piece;
            std::vector<Vector> row;
            for (std::size_t l = 0; l < size; ++l)
                for (std::size_t e = 0; e < da; ++e) row.push_back(module_coords(K.multiply(element(i, l, A.basis(e)), q)));
            piece.basis = select(row, m);
            Vector omega = zero_vector(K.dim());
            for (std::size_t l = 0; l < size; ++l) omega = omega + element(i, l, A.multiply(*ginv, A.star(z[l])));
            piece.vectors.push_back(module_coords(K.multiply(omega, q)));
            if (!piece.basis.empty()) p.pieces.push_back(std::move(piece));
        }
        Vector zflat;
        for (const auto& zl : z) zflat.insert(zflat.end(), zl.begin(), zl.end());
        out.z = std::move(zflat);
        x.p_structure = std::move(p);
        break;
    }
    out.validation = validate_bimodule(x, ValidationLevel::Equivalence);
    return out;
}

CornerBimodule corner_bimodule(const Matrix& q) {
    if (!q.is_square()) throw Error(ErrorKind::ShapeMismatch, "projection must be square");
    return corner_bimodule(share(scalars_algebra()), q.rows(), flatten(q));
}

}  // namespace morita

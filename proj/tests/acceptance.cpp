// Acceptance run: one line per criterion, exit status 0 only when all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "morita/classical_limit.hpp"
#include "morita_cli/commands.hpp"
#include "support.hpp"

using namespace morita;
using namespace testing_support;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

Matrix projection_rank(std::size_t n, std::size_t k) {
    Vector d(n);
    for (std::size_t i = 0; i < k; ++i) d[i] = q(1);
    return Matrix::diagonal(d);
}

Representation scalar_rep(const Matrix& gram) {
    Representation r;
    r.algebra = share(scalars_algebra());
    r.module.gram = gram;
    r.ops = {Matrix::identity(gram.rows())};
    return r;
}

Bimodule lambda_summand_bimodule() {
    auto c = share(scalars_algebra());
    Bimodule x;
    x.algebra_b = c;
    x.algebra_a = c;
    x.dim = 2;
    x.left = {Matrix::identity(2)};
    x.right = {Matrix::identity(2)};
    x.inner_a = {{V({1}), V({0})}, {V({0}), V({lam()})}};
    return x;
}

Bimodule scaled_free(std::size_t n, const FracScalar& s) {
    Bimodule x = free_module_bimodule(share(scalars_algebra()), n);
    for (auto& row : x.inner_a)
        for (auto& v : row) v = s * v;
    for (auto& row : *x.inner_b)
        for (auto& v : row) v = s * v;
    return x;
}

LinearFunctional random_density(std::mt19937_64& rng, const StarAlgebra& a, int max_degree = 0) {
    const std::size_t n = a.kind_param();
    Matrix b = random_matrix(rng, n, n, max_degree);
    return density_functional(a, b.adjoint() * b);
}

struct Named {
    std::string name;
    Bimodule x;
    std::vector<std::pair<std::string, Representation>> reps;
};

// The bimodules of the C <-> M_n and A <-> M_2(A) criteria, with the
// representations of A used for the round trips.
std::vector<Named> equivalence_family() {
    auto c = share(scalars_algebra());
    auto m2 = share(matrix_algebra(2));
    std::vector<Named> out;
    for (std::size_t n = 1; n <= 4; ++n)
        out.push_back({"free(C," + std::to_string(n) + ")",
                       free_module_bimodule(c, n),
                       {{"defining", defining_representation(c)}, {"gns", gns(c, LinearFunctional{{q(2)}}).rep}}});
    out.push_back({"free(M2,2)",
                   free_module_bimodule(m2, 2),
                   {{"defining", defining_representation(m2)},
                    {"gns(trace)", gns(m2, density_functional(*m2, Matrix::identity(2))).rep},
                    {"gns(state)", gns(m2, density_functional(*m2, projection_rank(2, 1))).rep}}});
    return out;
}

const char* const axiom_names[] = {"X1", "X2", "X3", "X4", "X5", "X6", "Y1", "Y2", "Y3", "Y4",
                                   "Y5", "Y6", "E3", "P1", "P2", "P3", "Q1", "Q2", "Q3"};

Outcome psd_sampling() {
    Outcome o;
    std::mt19937_64 rng(1018);
    std::size_t matrices = 0, positive = 0, refuted_by_sampling = 0, pairs = 0;
    std::map<std::pair<std::size_t, bool>, std::vector<Matrix>> psd_pool;
    for (int t = 0; t < 120; ++t) {
        const bool deformed = t % 2 == 1;
        const std::size_t n = 1 + (t / 2) % 6;
        const int degree = deformed ? 1 : 0;
        Matrix a;
        if (t % 4 < 2) {
            std::uniform_int_distribution<std::size_t> rank(1, n);
            Matrix b = random_matrix(rng, rank(rng), n, degree);
            a = b.adjoint() * b;
        } else {
            a = random_hermitian(rng, n, degree);
        }
        if (!deformed) a = a.map([](const FracScalar& z) { return z.real_part(); });
        ++matrices;

        const PsdCertificate cert = psd_decide(a);
        o.require(replay(cert, a), "certificate does not replay at instance " + std::to_string(t));
        bool sampled_negative = false;
        for (int s = 0; s < 200; ++s) {
            const Vector v = random_vector(rng, n, degree);
            if (inner(v, a, v).real_part().sign() < 0) sampled_negative = true;
        }
        o.require(!(cert.positive() && sampled_negative), "false positive at instance " + std::to_string(t));
        if (sampled_negative) ++refuted_by_sampling;
        if (!cert.positive()) continue;
        ++positive;
        auto& pool = psd_pool[{n, deformed}];
        for (const Matrix& b : pool) {
            const FracScalar tr = trace(a * b);
            o.require(tr.is_real() && tr.sign() >= 0, "tr(AB) < 0 at instance " + std::to_string(t));
            ++pairs;
        }
        pool.push_back(a);
    }
    o.require(matrices >= 100, "too few matrices");
    std::ostringstream s;
    s << matrices << " matrices, " << positive << " positive, " << refuted_by_sampling
      << " indefinite ones also refuted by sampling, " << pairs << " trace pairs";
    if (o.pass) o.detail = s.str();
    return o;
}

Outcome gns_dimension_law() {
    Outcome o;
    std::size_t cases = 0;
    for (std::size_t n = 2; n <= 3; ++n) {
        auto a = share(matrix_algebra(n));
        for (std::size_t k = 1; k <= n; ++k) {
            const std::string tag = "n=" + std::to_string(n) + " k=" + std::to_string(k);
            const LinearFunctional w = density_functional(*a, projection_rank(n, k));
            const std::size_t oracle = n * n - kernel_basis(functional_gram(*a, w)).size();
            const GnsResult g = gns(a, w);
            o.require(g.rep.dim() == n * k && oracle == n * k, "dimension mismatch at " + tag);
            std::vector<Representation> copies(k, defining_representation(a));
            const IntertwinerSpace space = intertwiners(g.rep, direct_sum(copies));
            o.require(space.status == UnitaryStatus::Found && space.unitary && space.unitary->unitary,
                      "no certified unitary at " + tag);
            ++cases;
        }
    }
    if (o.pass) o.detail = std::to_string(cases) + " functionals, dim H = n k with certified unitaries";
    return o;
}

Outcome gns_is_induction() {
    Outcome o;
    std::size_t cases = 0;
    for (std::size_t n = 2; n <= 3; ++n) {
        auto a = share(matrix_algebra(n));
        for (std::size_t k = 1; k <= n; ++k) {
            const GnsComparison c = gns_via_induction_compare(a, density_functional(*a, projection_rank(n, k)));
            o.require(c.unitary.unitary && c.kernels_agree,
                      "comparison not certified at n=" + std::to_string(n) + " k=" + std::to_string(k));
            ++cases;
        }
    }
    if (o.pass) o.detail = std::to_string(cases) + " functionals";
    return o;
}

Outcome free_module_equivalence(const std::vector<Named>& family) {
    Outcome o;
    for (const auto& f : family) {
        const Report r = validate_bimodule(f.x, ValidationLevel::Equivalence);
        for (const char* name : axiom_names) o.require(r.passed(name), f.name + ": " + name + " not passed");
        o.require(r.ok(), f.name + ": " + (r.ok() ? "" : r.first_failure()->name));
    }
    if (o.pass) o.detail = std::to_string(family.size()) + " bimodules, all 19 axioms each";
    return o;
}

Outcome round_trips(const std::vector<Named>& family) {
    Outcome o;
    std::size_t cases = 0;
    for (const auto& f : family)
        for (const auto& [rep_name, pi] : f.reps) {
            const RoundTrip rt = roundtrip_unitary(f.x, pi);
            o.require(rt.unitary.unitary && is_intertwiner(rt.second.rep, pi, rt.unitary.map),
                      f.name + " / " + rep_name + ": no unitary");
            ++cases;
        }
    if (o.pass) o.detail = std::to_string(cases) + " round trips certified";
    return o;
}

Outcome finite_rank_isomorphism() {
    Outcome o;
    auto c = share(scalars_algebra());
    for (std::size_t n = 1; n <= 4; ++n) {
        const std::string tag = "n=" + std::to_string(n);
        const FiniteRankAlgebra k = finite_rank_algebra(free_module_bimodule(c, n));
        o.require(k.algebra->dim() == n * n, tag + ": wrong dimension");
        o.require(k.left_map.has_value() && k.isomorphism.ok(), tag + ": L_B not certified");
        if (!k.left_map) continue;
        o.require(check_star_homomorphism(matrix_algebra(n), *k.algebra, *k.left_map).ok(), tag + ": not a *-homomorphism");
        o.require(inverse(*k.left_map).has_value(), tag + ": L_B not invertible");
    }
    if (o.pass) o.detail = "n = 1..4";
    return o;
}

Outcome full_corner() {
    Outcome o;
    const CornerBimodule cb = corner_bimodule(Matrix::diagonal({q(1), q(1), q(0)}));
    const Bimodule& x = cb.bimodule;
    o.require(cb.corner->dim() == 4 && x.algebra_b->dim() == 9, "corner is not M2 inside M3");
    o.require(cb.fullness_rank == 9, "projection not full");
    o.require(cb.z.has_value(), "no vector with invertible <Qz, Qz>");
    o.require(x.p_structure && x.q_structure, "cyclic witnesses missing");
    if (x.p_structure) o.require(validate_cyclic_structure(x, *x.p_structure, true).ok(), "P witnesses fail");
    if (x.q_structure) o.require(validate_cyclic_structure(x, *x.q_structure, false).ok(), "Q witnesses fail");
    const Report r = validate_bimodule(x, ValidationLevel::Equivalence);
    for (const char* name : axiom_names) o.require(r.passed(name), std::string(name) + " not passed");
    o.require(cb.validation.ok(), "constructor validation failed");
    if (o.pass) o.detail = "M3 <-> M2 via diag(1,1,0), module dim " + std::to_string(x.dim);
    return o;
}

Outcome grassmann_refusal() {
    Outcome o;
    for (std::size_t n = 1; n <= 3; ++n) {
        const StarAlgebra g = grassmann_algebra(n);
        const auto cert = nilpotent_normal_scan(g);
        Vector e1 = g.zero();
        e1[1] = q(1);
        o.require(cert && cert->element == e1 && verify_nilpotent(g, *cert),
                  "grassmann(" + std::to_string(n) + "): h = e1 not certified");
    }

    // grassmann(1) has basis {1, e}. The Gram entry omega(e^* e) vanishes for
    // every coordinate functional, hence for every functional, so a positive
    // functional has a forced zero at (1, e), which is omega(e).
    const StarAlgebra g1 = grassmann_algebra(1);
    for (std::size_t k = 0; k < g1.dim(); ++k) {
        LinearFunctional coord{g1.zero()};
        coord.values[k] = q(1);
        o.require(functional_gram(g1, coord)(1, 1).is_zero(), "omega(e^* e) is not identically zero");
    }
    std::mt19937_64 rng(8);
    std::size_t positive = 0, refused = 0;
    for (int t = 0; t < 200; ++t) {
        LinearFunctional w{random_vector(rng, 2, t % 2)};
        w.values[0] = w.values[0] * w.values[0].conj();
        if (t % 3 == 0) w.values[1] = q(0);
        if (!functional_positivity(g1, w).positive()) {
            o.require(!w.values[1].is_zero(), "refused a functional with omega(e) = 0");
            ++refused;
            continue;
        }
        ++positive;
        const auto zeros = forced_zero_entries(functional_gram(g1, w));
        o.require(zeros.count({0, 1}) && zeros.count({1, 0}), "forced zero missing");
        o.require(w.values[1].is_zero(), "positive functional with omega(e) != 0");
    }
    o.require(positive > 0 && refused > 0, "sampling did not reach both verdicts");

    std::size_t candidates = 0;
    for (const Bimodule& x : morita::cli::grassmann_candidates()) {
        ++candidates;
        bool validated = false;
        try {
            validated = validate_bimodule(x, ValidationLevel::Equivalence).ok();
        } catch (const Error&) {
        }
        o.require(!validated, "a candidate passed equivalence validation");
    }
    if (o.pass)
        o.detail = "h = e1 for n <= 3; " + std::to_string(positive) + " positive functionals kill e; " +
                   std::to_string(candidates) + " candidates refused";
    return o;
}

Outcome contexts_and_centers(const std::vector<Named>& family) {
    Outcome o;
    for (const auto& f : family) {
        o.require(morita_context_check(f.x).ok(), f.name + ": context check fails");
        const CenterIsomorphism z = center_isomorphism(f.x);
        o.require(z.checks.ok() && z.center_a.size() == z.center_b.size(), f.name + ": center map not certified");
    }
    if (o.pass) o.detail = std::to_string(family.size()) + " bimodules";
    return o;
}

Outcome classical_naturality() {
    Outcome o;
    auto c = share(scalars_algebra());
    auto m2 = share(matrix_algebra(2));
    struct Case {
        const char* name;
        Bimodule x;
        Representation pi;
    };
    const std::vector<Case> cases = {
        {"Gram diag(1, 1 + lambda)", free_module_bimodule(c, 2), scalar_rep(Matrix::diagonal({q(1), q(1) + lam()}))},
        {"Gram diag(1, lambda)", free_module_bimodule(c, 2), scalar_rep(Matrix::diagonal({q(1), lam()}))},
        {"lambda summand", lambda_summand_bimodule(), scalar_rep(Matrix::identity(1))},
        {"scaled free module", scaled_free(2, q(1) + lam()), scalar_rep(Matrix::diagonal({lam() + q(2), lam()}))},
        {"deformed rotation homomorphism", homomorphism_bimodule(m2, m2, conjugation_map(cayley_rotation())),
         defining_representation(m2)},
        {"GNS of diag(1, lambda)", free_module_bimodule(m2, 2),
         gns(m2, density_functional(*m2, Matrix::diagonal({q(1), lam()}))).rep},
    };
    for (const auto& k : cases) {
        const Naturality n = naturality_check(k.x, k.pi);
        o.require(n.well_defined && n.intertwines && n.unitary.unitary, std::string(k.name) + ": not certified");
    }
    const DeformedHomomorphism rot = deformed_homomorphism_bimodule(m2, m2, conjugation_map(cayley_rotation()));
    o.require(rot.comparison.ok() && rot.limit.validation.ok(), "deformed homomorphism limit not identified");
    const ClassicalBimodule e = cl_bimodule(scaled_free(3, q(1) + lam()));
    o.require(e.validation.ok() && e.validation.passed("E3") && e.radicals_agree.value_or(false),
              "classical limit of a deformed equivalence bimodule fails validation");
    if (o.pass) o.detail = std::to_string(cases.size()) + " deformed examples; limit equivalence bimodule validates";
    return o;
}

Outcome property_suites() {
    Outcome o;
    std::mt19937_64 rng(11);
    const int runs = 500;

    // sign multiplicativity and the positive cone
    for (int t = 0; t < runs; ++t) {
        const BaseElement a = random_base(rng), b = random_base(rng);
        o.require((a * b).sign() == a.sign() * b.sign(), "sign(ab) != sign(a) sign(b)");
        o.require(!(a.sign() > 0 && b.sign() > 0) || (a + b).sign() > 0, "cone not closed under +");
        o.require(std::abs(a.sign()) + (a.is_zero() ? 1 : 0) == 1, "trichotomy");
        const FracScalar x = FracScalar(a) / FracScalar(b.is_zero() ? BaseElement(1) : b);
        o.require((x * x).sign() >= 0, "square is negative");
    }

    // Cauchy-Schwarz for random positive modules and positive functionals
    const StarAlgebra m2 = matrix_algebra(2);
    for (int t = 0; t < runs; ++t) {
        const std::size_t n = 1 + t % 3;
        Matrix b = random_matrix(rng, n, n, t % 2);
        InnerProductModule h{b.adjoint() * b};
        const Vector x = random_vector(rng, n, 1), y = random_vector(rng, n, 1);
        const FracScalar xy = h.inner(x, y);
        o.require((h.inner(x, x) * h.inner(y, y) - xy * xy.conj()).sign() >= 0, "module Cauchy-Schwarz");

        const LinearFunctional w = random_density(rng, m2, t % 2);
        const Vector u = random_vector(rng, 4, 0), v = random_vector(rng, 4, 1);
        const FracScalar uv = w(m2.multiply(m2.star(u), v));
        o.require((w(m2.multiply(m2.star(u), u)) * w(m2.multiply(m2.star(v), v)) - uv * uv.conj()).sign() >= 0,
                  "functional Cauchy-Schwarz");
    }

    // adjoint calculus in non-degenerate modules
    int adjoint_checked = 0;
    for (int t = 0; t < 2 * runs && adjoint_checked < runs; ++t) {
        const std::size_t n = 1 + t % 3;
        Matrix b = random_matrix(rng, n, n, 0);
        const Matrix g = b.adjoint() * b;
        if (!inverse(g)) continue;
        ++adjoint_checked;
        InnerProductModule h{g};
        const Matrix x = random_matrix(rng, n, n, 1), y = random_matrix(rng, n, n, 0);
        const FracScalar s = random_scalar(rng, false, 1);
        const Matrix ax = adjoint_in(h, x);
        o.require(adjoint_in(h, s * x + y) == s.conj() * ax + adjoint_in(h, y), "adjoint not antilinear");
        o.require(adjoint_in(h, x * y) == adjoint_in(h, y) * ax, "(xy)^* != y^* x^*");
        o.require(adjoint_in(h, ax) == x, "x^** != x");
        const Vector u = random_vector(rng, n, 0), v = random_vector(rng, n, 0);
        o.require(h.inner(u, x * v) == h.inner(ax * u, v), "<u, xv> != <x^* u, v>");
    }
    o.require(adjoint_checked == runs, "too few non-degenerate modules");

    // tensor products of positive functionals
    const StarAlgebra cc = direct_sum(scalars_algebra(), scalars_algebra());
    const StarAlgebra m2cc = tensor_product(m2, cc);
    for (int t = 0; t < runs; ++t) {
        const LinearFunctional w1 = random_density(rng, m2, t % 2);
        LinearFunctional w2{cc.zero()};
        for (auto& z : w2.values) {
            const FracScalar r = random_scalar(rng, true, t % 2);
            z = r * r;
        }
        o.require(functional_positivity(m2cc, tensor_functional(w1, w2)).positive(), "tensor functional not positive");
    }
    if (o.pass) o.detail = std::to_string(runs) + " instances in each of four suites";
    return o;
}

}  // namespace

int main() {
    const auto family = equivalence_family();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"psd verdicts agree with sampling, certificates replay, tr(AB) >= 0", psd_sampling},
        {"GNS dimension law for matrix(2), matrix(3)", gns_dimension_law},
        {"GNS representation equals Rieffel induction", gns_is_induction},
        {"C <-> M_n (n <= 4) and M2 <-> M2(M2) equivalence bimodules", [&] { return free_module_equivalence(family); }},
        {"round trip unitaries", [&] { return round_trips(family); }},
        {"finite-rank operators K(X) isomorphic to M_n", finite_rank_isomorphism},
        {"full corner diag(1,1,0) in M3", full_corner},
        {"Grassmann refusal", grassmann_refusal},
        {"Morita contexts and center isomorphisms", [&] { return contexts_and_centers(family); }},
        {"classical limit naturality", classical_naturality},
        {"ring, functional and adjoint property suites", property_suites},
    };

    int failures = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("criterion %2zu %s  %s: %s (%.2fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%zu/%zu criteria passed in %.1fs\n", criteria.size() - static_cast<std::size_t>(failures),
                criteria.size(), total);
    return failures == 0 ? 0 : 1;
}

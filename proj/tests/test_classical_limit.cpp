#include <doctest.h>

#include "morita/classical_limit.hpp"
#include "support.hpp"

using namespace morita;
using namespace testing_support;

namespace {

Representation scalar_rep(const Matrix& gram) {
    Representation r;
    r.algebra = share(scalars_algebra());
    r.module.gram = gram;
    r.ops = {Matrix::identity(gram.rows())};
    return r;
}

// Scalars on both sides of C^2 with <x_p, x_q> = diag(1, lambda).
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

Matrix conjugation_by(const Matrix& u, const Matrix& v) {
    Matrix out(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) out(k * 2 + l, i * 2 + j) = u(k, i) * v(j, l);
    return out;
}

Matrix random_ring_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) { return random_matrix(rng, r, c, 2); }

}  // namespace

TEST_CASE("lambda orders") {
    CHECK(lambda_order(q(3)) == 0);
    CHECK(lambda_order(lam() * lam() + lam() * lam() * lam()) == 2);
    CHECK(lambda_order(q(1) / lam()) == -1);
    CHECK(lambda_order(I() * lam() / (q(1) + lam())) == 1);
    CHECK_FALSE(lambda_order(q(0)).has_value());
    CHECK(limit_of(q(2) + lam()) == q(2));
    CHECK(limit_of((q(1) - lam()) / (q(1) + lam())) == q(1));
    CHECK_THROWS_AS(limit_of(q(1) / lam()), Error);
}

TEST_CASE("classical limits of pre-Hilbert spaces") {
    CHECK(cl_prehilbert(make_module(Matrix::diagonal({q(1), lam()}))).dim() == 1);
    const LimitMap id = cl_prehilbert(make_module(Matrix::identity(3)));
    CHECK(id.dim() == 3);
    CHECK(id.target.gram == Matrix::identity(3));
    CHECK(cl_prehilbert(make_module(lam() * Matrix::identity(2))).dim() == 0);
    try {
        cl_prehilbert(InnerProductModule{M({{1, 1}, {1, 0}})});
        FAIL("expected NotPsd");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPsd);
    }
    // G(0) = [[1,1],[1,1]] has the radical e1 - e2.
    const LimitMap m = cl_prehilbert(make_module(M({{1, 1}, {1, q(1) + lam()}})));
    CHECK(m.dim() == 1);
    CHECK(is_zero(m.apply(V({1, -1}))));
}

TEST_CASE("products and linearity survive the limit") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const Matrix b = random_matrix(rng, n, n, 1);
        Matrix g = b.adjoint() * b;
        if (trial % 3 == 0) g = lam() * g + Matrix::diagonal(Vector(n, q(trial % 2)));
        const LimitMap m = cl_prehilbert(make_module(g));
        std::vector<Vector> vs;
        for (int k = 0; k < 3; ++k) vs.push_back(random_vector(rng, n, 2));
        CHECK(check_limit_map(m, vs).ok());
        const FracScalar z = random_scalar(rng), w = random_scalar(rng);
        CHECK(m.apply(z * vs[0] + w * vs[1]) == limit_of(z) * m.apply(vs[0]) + limit_of(w) * m.apply(vs[1]));
    }
}

TEST_CASE("classical limits of operators") {
    const LimitMap h = cl_prehilbert(make_module(Matrix::diagonal({q(1), q(1) + lam()})));
    CHECK(cl_operator(h, Matrix::identity(2)) == Matrix::identity(2));
    CHECK(cl_operator(h, lam() * Matrix::identity(2)).is_zero());

    std::mt19937_64 rng(5);
    const Matrix g = h.source_gram;
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = random_ring_matrix(rng, 2, 2), b = random_ring_matrix(rng, 2, 2);
        const Matrix a_star = adjoint_in(make_module(g), a);
        CHECK(cl_operator(h, a_star) == adjoint_in(h.target, cl_operator(h, a)));
        CHECK(cl_operator(h, b * a) == cl_operator(h, b) * cl_operator(h, a));
    }

    // A self-adjoint operator that only survives on the classical quotient.
    const LimitMap d = cl_prehilbert(make_module(Matrix::diagonal({q(1), lam()})));
    CHECK(cl_operator(d, M({{0, lam()}, {1, 0}})).is_zero());
    try {
        cl_operator(d, M({{0, 1}, {0, 0}}));
        FAIL("expected NotAdjointable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAdjointable);
    }
    const LimitMap deg = cl_prehilbert(make_module(Matrix::diagonal({q(1), q(0)})));
    CHECK_THROWS_AS(cl_operator(deg, M({{0, 1}, {0, 0}})), Error);
}

TEST_CASE("the limit is functorial on intertwiners") {
    const LimitMap s = cl_prehilbert(make_module(Matrix::diagonal({q(1), (q(1) + lam()) * (q(1) + lam())})));
    const LimitMap t = cl_prehilbert(make_module(Matrix::identity(2)));
    const Matrix iso = Matrix::diagonal({q(1), q(1) + lam()});
    const Matrix rot = cayley_rotation();
    const Matrix c_iso = cl_map(s, t, iso);
    CHECK(c_iso == Matrix::identity(2));
    CHECK(c_iso.adjoint() * t.target.gram * c_iso == s.target.gram);
    CHECK(cl_map(s, t, rot * iso) == cl_map(t, t, rot) * cl_map(s, t, iso));
    CHECK(rot.adjoint() * rot == Matrix::identity(2));
    CHECK(limit_of(rot) == Matrix::identity(2));
}

TEST_CASE("classical limits of representations") {
    auto m2 = share(matrix_algebra(2));
    const Representation def = defining_representation(m2);
    const ClassicalRepresentation c = cl_representation(def);
    CHECK(c.rep.ops == def.ops);
    CHECK(c.validation.checks.ok());

    Representation scaled = def;
    scaled.module.gram = (q(1) + lam() * lam()) * Matrix::identity(2);
    const ClassicalRepresentation cs = cl_representation(scaled);
    CHECK(cs.rep.module.gram == Matrix::identity(2));
    CHECK(cs.validation.strongly_non_degenerate);
    scaled.module.gram = lam() * Matrix::identity(2);
    CHECK(cl_representation(scaled).rep.dim() == 0);

    const GnsResult g = gns(m2, density_functional(*m2, Matrix::diagonal({q(1), lam()})));
    CHECK(g.rep.dim() == 4);
    const ClassicalRepresentation cg = cl_representation(g.rep);
    CHECK(cg.rep.dim() == 2);
    CHECK(cg.validation.checks.ok());
    CHECK(cg.validation.strongly_non_degenerate);
    CHECK_FALSE(cg.rep.cyclic.empty());
    CHECK(is_cyclic_vector(cg.rep, cg.rep.cyclic.front()));
    CHECK(intertwiners(cg.rep, def).status == UnitaryStatus::Found);

    Representation broken = def;
    broken.ops[1] = broken.ops[2];
    CHECK_THROWS_AS(cl_representation(broken), Error);
}

TEST_CASE("classical limits of bimodules") {
    auto c = share(scalars_algebra());
    const Bimodule free2 = free_module_bimodule(c, 2);
    const ClassicalBimodule cf = cl_bimodule(free2);
    CHECK(cf.bimodule.dim == 2);
    CHECK(cf.bimodule.inner_a == free2.inner_a);
    CHECK(cf.validation.ok());

    const ClassicalBimodule cs = cl_bimodule(lambda_summand_bimodule());
    CHECK(cs.bimodule.dim == 1);
    REQUIRE(cs.radical_a.size() == 1);
    CHECK(cs.radical_a[0] == V({0, 1}));
    CHECK_FALSE(cs.radicals_agree.has_value());
    CHECK(cs.validation.ok());

    const ClassicalBimodule ce = cl_bimodule(scaled_free(3, q(1) + lam()));
    CHECK(ce.bimodule.dim == 3);
    REQUIRE(ce.radicals_agree.has_value());
    CHECK(*ce.radicals_agree);
    CHECK(ce.validation.ok());
    CHECK(ce.validation.passed("E3"));
    CHECK(ce.validation.passed("Q3"));

    Bimodule bad = lambda_summand_bimodule();
    bad.inner_a[1][1] = V({-lam()});
    CHECK_THROWS_AS(cl_bimodule(bad), Error);
}

TEST_CASE("deformed homomorphism bimodules") {
    auto m2 = share(matrix_algebra(2));
    const DeformedHomomorphism id = deformed_homomorphism_bimodule(m2, m2, Matrix::identity(4));
    CHECK(id.comparison.ok());

    const Matrix phi = conjugation_map(cayley_rotation());
    CHECK(check_star_homomorphism(*m2, *m2, phi).ok());
    CHECK_FALSE(phi == Matrix::identity(4));
    const DeformedHomomorphism rot = deformed_homomorphism_bimodule(m2, m2, phi);
    CHECK(rot.comparison.ok());
    CHECK(rot.limit.validation.ok());
    CHECK(rot.limit.bimodule.dim == 4);

    // u x u^-1 with u = 1 + lambda E12 is multiplicative but not star-preserving.
    const Matrix u = M({{1, lam()}, {0, 1}}), v = M({{1, -lam()}, {0, 1}});
    try {
        deformed_homomorphism_bimodule(m2, m2, conjugation_by(u, v));
        FAIL("expected NotStarHomomorphism");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotStarHomomorphism);
        CHECK(std::string(e.what()).find("star-compatibility fails at order lambda^1") != std::string::npos);
        CHECK(std::string(e.what()).find("multiplicativity") == std::string::npos);
    }
}

TEST_CASE("induction commutes with the classical limit") {
    auto c = share(scalars_algebra());
    auto m2 = share(matrix_algebra(2));
    struct Case {
        const char* name;
        Bimodule x;
        Representation pi;
        std::size_t expected_dim;
    };
    const std::vector<Case> cases = {
        {"constant data", free_module_bimodule(c, 2), scalar_rep(Matrix::identity(1)), 2},
        {"Gram diag(1, 1 + lambda)", free_module_bimodule(c, 2), scalar_rep(Matrix::diagonal({q(1), q(1) + lam()})), 4},
        {"Gram diag(1, lambda)", free_module_bimodule(c, 2), scalar_rep(Matrix::diagonal({q(1), lam()})), 2},
        {"lambda summand", lambda_summand_bimodule(), scalar_rep(Matrix::identity(1)), 1},
        {"scaled free module", scaled_free(2, q(1) + lam()), scalar_rep(Matrix::diagonal({lam() + q(2), lam()})), 2},
        {"Cayley homomorphism", homomorphism_bimodule(m2, m2, conjugation_map(cayley_rotation())),
         defining_representation(m2), 2},
        {"GNS of diag(1, lambda)", free_module_bimodule(m2, 2),
         gns(m2, density_functional(*m2, Matrix::diagonal({q(1), lam()}))).rep, 4},
    };
    for (const auto& k : cases) {
        CAPTURE(k.name);
        const Naturality n = naturality_check(k.x, k.pi);
        CHECK(n.classical.rep.dim() == k.expected_dim);
        CHECK(n.induced_limit.rep.dim() == k.expected_dim);
        CHECK(n.well_defined);
        CHECK(n.intertwines);
        CHECK(n.unitary.unitary);
    }
    const Naturality trivial = naturality_check(cases[0].x, cases[0].pi);
    CHECK(trivial.map == Matrix::identity(2));

    Representation negative = scalar_rep(Matrix::identity(1));
    Bimodule bad = lambda_summand_bimodule();
    bad.inner_a[1][1] = V({-lam()});
    try {
        naturality_check(bad, negative);
        FAIL("expected PositivityViolated");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PositivityViolated);
    }
}

TEST_CASE("positive deformations with constant lifts") {
    auto m2 = matrix_algebra(2);
    CHECK(positive_lift_check(m2, density_functional(m2, Matrix::identity(2))).status == LiftStatus::Lifted);
    CHECK(positive_lift_check(m2, LinearFunctional{Vector(4)}).status == LiftStatus::Lifted);

    const StarAlgebra sq = square_root_algebra(lam());
    CHECK(validate_algebra(sq).ok());
    const PositiveLift pre = positive_lift_check(sq, LinearFunctional{V({1, 1})});
    CHECK(pre.status == LiftStatus::PreconditionFailed);
    CHECK_FALSE(pre.deformed.has_value());
    CHECK(pre.classical.witness.has_value());

    CHECK(positive_lift_check(sq, LinearFunctional{V({1, 0})}).status == LiftStatus::Lifted);
    const PositiveLift fails = positive_lift_check(square_root_algebra(-lam()), LinearFunctional{V({1, 0})});
    CHECK(fails.status == LiftStatus::ConstantLiftFails);
    REQUIRE(fails.deformed.has_value());
    CHECK(fails.deformed->witness == V({0, 1}));
    CHECK(to_string(fails.status) == "ConstantLiftFails");
}

TEST_CASE("approximate identities collapse to approximate identities") {
    const StarAlgebra a = direct_sum(scalars_algebra(), scalars_algebra());
    ApproxIdentityWitness w;
    w.elements = {V({1, lam() * lam()}), V({1, 1})};
    w.filtration = {{0}, {0, 1}};
    CHECK_NOTHROW(validate_approx_identity(a, w));
    const ApproxIdentityWitness c = limit_witness(w);
    CHECK(c.elements[0] == V({1, 0}));
    CHECK_NOTHROW(validate_approx_identity(classical_limit_algebra(a), c));
}

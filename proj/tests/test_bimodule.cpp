#include <doctest.h>

#include <random>

#include "morita/bimodule.hpp"
#include "support.hpp"

using namespace morita;
using namespace testing_support;

namespace {

const char* const kEquivalenceChecks[] = {"X1", "X2", "X3", "X4", "X5", "X6", "Y1", "Y2", "Y3", "Y4",
                                          "Y5", "Y6", "E3", "P1", "P2", "P3", "Q1", "Q2", "Q3"};

void require_equivalence(const Bimodule& x) {
    const Report r = validate_bimodule(x, ValidationLevel::Equivalence);
    const Check* bad = r.first_failure();
    INFO((bad ? bad->name + ": " + bad->detail : std::string("all passed")));
    CHECK(r.ok());
    for (const char* name : kEquivalenceChecks) CHECK(r.passed(name));
}

Vector random_gaussian(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(-3, 3);
    Vector v(n);
    for (auto& z : v) z = FracScalar(Scalar(BaseElement(d(rng)), BaseElement(d(rng))));
    return v;
}

// Free module C^2 over the scalars plus a line on which everything vanishes.
Bimodule with_null_line(const Bimodule& x) {
    Bimodule y = x;
    y.dim = x.dim + 1;
    auto grow = [&](const Matrix& m) {
        Matrix g(y.dim, y.dim);
        for (std::size_t r = 0; r < x.dim; ++r)
            for (std::size_t c = 0; c < x.dim; ++c) g(r, c) = m(r, c);
        return g;
    };
    for (auto& m : y.left) m = grow(m);
    for (auto& m : y.right) m = grow(m);
    auto grow_table = [&](InnerTable h, std::size_t d) {
        for (auto& row : h) row.push_back(zero_vector(d));
        h.push_back(std::vector<Vector>(y.dim, zero_vector(d)));
        return h;
    };
    y.inner_a = grow_table(x.inner_a, x.algebra_a->dim());
    y.inner_b = grow_table(*x.inner_b, x.algebra_b->dim());
    y.p_structure.reset();
    y.q_structure.reset();
    return y;
}

}  // namespace

TEST_CASE("free modules over the scalars are equivalence bimodules") {
    auto c = share(scalars_algebra());
    for (std::size_t n = 1; n <= 4; ++n) {
        CAPTURE(n);
        const Bimodule x = free_module_bimodule(c, n);
        CHECK(x.dim == n);
        CHECK(x.algebra_b->kind() == AlgebraKind::Matrix);
        require_equivalence(x);
        // Both sides keep sufficiently many positive functionals.
        CHECK_FALSE(nilpotent_normal_scan(*x.algebra_b).has_value());
        CHECK_FALSE(nilpotent_normal_scan(*x.algebra_a).has_value());
    }
    CHECK_THROWS_AS(free_module_bimodule(c, 0), Error);
}

TEST_CASE("free module over matrix(2)") {
    auto m2 = share(matrix_algebra(2));
    const Bimodule x = free_module_bimodule(m2, 2);
    CHECK(x.dim == 8);
    CHECK(x.algebra_b->dim() == 16);
    require_equivalence(x);
    const Report r = validate_bimodule(x, ValidationLevel::Equivalence);
    CHECK(r.find("X4")->detail.find("block Gram") != std::string::npos);
}

TEST_CASE("free module needs an identity structure") {
    auto n = share(null_square_algebra());
    try {
        free_module_bimodule(n, 2);
        FAIL("expected NoIdentityStructure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoIdentityStructure);
    }
}

TEST_CASE("homomorphism bimodules") {
    auto m2 = share(matrix_algebra(2));
    const Bimodule id = homomorphism_bimodule(m2, m2, Matrix::identity(4));
    REQUIRE(id.inner_b.has_value());
    require_equivalence(id);
    // _B<A1, A2> = A1 A2^* for the identity.
    CHECK((*id.inner_b)[0][2] == m2->multiply(m2->basis(0), m2->star(m2->basis(2))));

    auto c = share(scalars_algebra());
    Matrix phi(4, 1);
    phi(0, 0) = q(1);
    phi(3, 0) = q(1);
    const Bimodule unital = homomorphism_bimodule(c, m2, phi);
    CHECK_FALSE(unital.inner_b.has_value());
    const Report r = validate_bimodule(unital, ValidationLevel::Rigged);
    CHECK(r.ok());
    CHECK_FALSE(validate_bimodule(unital, ValidationLevel::Equivalence).ok());

    // 1 -> I, e -> E12 is multiplicative but does not respect the involution.
    auto g1 = share(grassmann_algebra(1));
    Matrix bad(4, 2);
    bad(0, 0) = q(1);
    bad(3, 0) = q(1);
    bad(1, 1) = q(1);
    try {
        homomorphism_bimodule(g1, m2, bad);
        FAIL("expected NotStarHomomorphism");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotStarHomomorphism);
    }
}

TEST_CASE("a flipped sign in the A-valued product breaks X2") {
    Bimodule x = free_module_bimodule(share(scalars_algebra()), 2);
    x.inner_a[0][1] = V({q(1)});
    const Report r = validate_bimodule(x, ValidationLevel::Rigged);
    CHECK_FALSE(r.passed("X2"));
    CHECK(r.find("X2")->detail == "<x1,x2>_A != <x2,x1>_A^*");

    Bimodule y = free_module_bimodule(share(scalars_algebra()), 2);
    y.inner_a[1][1] = V({q(-1)});
    const Report ry = validate_bimodule(y, ValidationLevel::Rigged);
    CHECK(ry.passed("X2"));
    CHECK_FALSE(ry.passed("X4"));
}

TEST_CASE("conjugate bimodules") {
    auto c = share(scalars_algebra());
    for (std::size_t n = 1; n <= 3; ++n) {
        const Bimodule x = free_module_bimodule(c, n);
        const Bimodule xc = conjugate(x);
        CHECK(xc.algebra_b == x.algebra_a);
        require_equivalence(xc);
        const Bimodule back = conjugate(xc);
        CHECK(back.left == x.left);
        CHECK(back.right == x.right);
        CHECK(back.inner_a == x.inner_a);
        CHECK(back.inner_b == x.inner_b);
    }
    require_equivalence(conjugate(free_module_bimodule(share(matrix_algebra(2)), 2)));

    Matrix phi(4, 1);
    phi(0, 0) = q(1);
    phi(3, 0) = q(1);
    const Bimodule one_sided = homomorphism_bimodule(c, share(matrix_algebra(2)), phi);
    try {
        conjugate(one_sided);
        FAIL("expected MissingInnerB");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingInnerB);
    }
}

TEST_CASE("quotient by the null space") {
    const Bimodule x = free_module_bimodule(share(scalars_algebra()), 2);
    const Bimodule padded = with_null_line(x);
    CHECK(validate_bimodule(padded, ValidationLevel::Rigged).ok());
    const BimoduleQuotient q1 = quotient_by_null(padded);
    CHECK(q1.bimodule.dim == 2);
    CHECK(q1.radicals_agree);
    CHECK(q1.definite);
    REQUIRE(q1.radical_a.size() == 1);
    CHECK(q1.radical_a[0] == V({0, 0, 1}));
    require_equivalence(q1.bimodule);

    const BimoduleQuotient q2 = quotient_by_null(q1.bimodule);
    CHECK(q2.bimodule.dim == q1.bimodule.dim);
    CHECK(q2.bimodule.inner_a == q1.bimodule.inner_a);
    CHECK(q2.bimodule.left == q1.bimodule.left);

    const BimoduleQuotient same = quotient_by_null(x);
    CHECK(same.map.projection == Matrix::identity(2));
    CHECK(same.bimodule.inner_a == x.inner_a);

    Bimodule n = x;
    n.algebra_a = share(null_square_algebra());
    CHECK_THROWS_AS(quotient_by_null(n), Error);
}

TEST_CASE("degenerate product: both radicals agree") {
    // C^2 over the scalars with Gram diag(1, 0) and the matching B-valued product.
    auto c = share(scalars_algebra());
    Bimodule x = free_module_bimodule(c, 2);
    x.inner_a[1][1] = V({q(0)});
    auto& hb = *x.inner_b;
    for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t r = 0; r < 2; ++r)
            if (p == 1 || r == 1) hb[p][r] = zero_vector(4);
    const BimoduleQuotient qt = quotient_by_null(with_null_line(free_module_bimodule(c, 1)));
    CHECK(qt.radicals_agree);
    // Rank-deficient tables: kernels computed from both sides coincide.
    x.left.assign(4, Matrix(2, 2));
    x.left[0](0, 0) = q(1);
    x.left[3](1, 1) = q(1);
    const BimoduleQuotient qx = quotient_by_null(x);
    CHECK(qx.radicals_agree);
    CHECK(qx.bimodule.dim == 1);
}

TEST_CASE("balanced tensor products") {
    auto c = share(scalars_algebra());
    const Bimodule x = free_module_bimodule(c, 2);
    const Bimodule trivial = free_module_bimodule(c, 1);
    const BalancedTensor t = tensor_bimodules(x, trivial);
    CHECK(t.bimodule.dim == 2);
    CHECK(t.bimodule.inner_a == x.inner_a);
    CHECK(t.bimodule.left == x.left);
    require_equivalence(t.bimodule);

    // The conjugate composes back to the scalars: X-bar (x)_M2 X is one-dimensional.
    const BalancedTensor back = tensor_bimodules(conjugate(x), x);
    CHECK(back.bimodule.dim == 1);
    require_equivalence(back.bimodule);

    try {
        tensor_bimodules(x, x);
        FAIL("expected MiddleAlgebraMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MiddleAlgebraMismatch);
    }
}

TEST_CASE("external tensor of free modules") {
    auto c = share(scalars_algebra());
    const Bimodule x = external_tensor(free_module_bimodule(c, 2), free_module_bimodule(c, 3));
    CHECK(x.dim == 6);
    CHECK(x.algebra_b->dim() == 36);
    require_equivalence(x);
}

TEST_CASE("finite-rank operators") {
    auto c = share(scalars_algebra());
    const Bimodule x = free_module_bimodule(c, 2);
    const FiniteRankAlgebra k = finite_rank_algebra(x);
    CHECK(k.algebra->dim() == 4);
    CHECK(same_structure(*k.algebra, matrix_algebra(2)));
    CHECK(theta(x, unit_vector(2, 0), unit_vector(2, 1)) == M({{0, 1}, {0, 0}}));
    CHECK(k.isomorphism.ok());
    REQUIRE(k.left_map.has_value());
    CHECK(*k.left_map == Matrix::identity(4));

    const Bimodule x2 = free_module_bimodule(share(matrix_algebra(2)), 2);
    const FiniteRankAlgebra k2 = finite_rank_algebra(x2);
    CHECK(k2.algebra->dim() == 16);
    CHECK(k2.isomorphism.ok());
    CHECK(validate_algebra(*k2.algebra).ok());
}

TEST_CASE("theta composition rule and positivity") {
    std::mt19937_64 rng(7);
    const Bimodule x = free_module_bimodule(share(matrix_algebra(2)), 1);
    for (int trial = 0; trial < 40; ++trial) {
        const Vector a = random_gaussian(rng, 4), b = random_gaussian(rng, 4), z = random_gaussian(rng, 4),
                     w = random_gaussian(rng, 4);
        const Vector moved = x.act_right(x.product_a(b, z)) * a;
        CHECK(theta(x, a, b) * theta(x, z, w) == theta(x, moved, w));
        CHECK(theta(x, a, b).adjoint() == theta(x, b, a).adjoint().adjoint());
    }
    const Bimodule free3 = free_module_bimodule(share(scalars_algebra()), 3);
    const FiniteRankAlgebra k = finite_rank_algebra(free3);
    for (int trial = 0; trial < 30; ++trial) {
        const Vector v = random_gaussian(rng, 3);
        const auto coords = k.coordinates(theta(free3, v, v));
        REQUIRE(coords.has_value());
        CHECK(element_positivity(*k.algebra, *coords).verdict == PositivityVerdict::PositiveCertified);
    }
}

TEST_CASE("full corners") {
    const CornerBimodule cb = corner_bimodule(Matrix::diagonal({q(1), q(1), q(0)}));
    CHECK(cb.fullness_rank == 9);
    CHECK(cb.corner->dim() == 4);
    CHECK(same_structure(*cb.corner, matrix_algebra(2)));
    CHECK(cb.bimodule.dim == 6);
    REQUIRE(cb.z.has_value());
    REQUIRE(cb.bimodule.p_structure.has_value());
    CHECK(cb.bimodule.p_structure->pieces.size() == 3);
    const Check* bad = cb.validation.first_failure();
    INFO((bad ? bad->name + ": " + bad->detail : std::string()));
    CHECK(cb.validation.ok());
    CHECK(cb.validation.find("P3")->detail.rfind("supplied", 0) == 0);

    const CornerBimodule line = corner_bimodule(Matrix::diagonal({q(1), q(0), q(0)}));
    CHECK(line.corner->dim() == 1);
    CHECK(line.bimodule.dim == 3);
    CHECK(line.validation.ok());

    try {
        corner_bimodule(Matrix(3, 3));
        FAIL("expected NotFull");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotFull);
        CHECK(std::string(e.what()).find("rank 0 of 9") != std::string::npos);
    }
    try {
        corner_bimodule(M({{1, 1}, {0, 0}}));
        FAIL("expected NotProjection");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotProjection);
    }
    // A rank-one projection that is not diagonal.
    const CornerBimodule tilted = corner_bimodule(M({{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}}));
    CHECK(tilted.corner->dim() == 1);
    CHECK(tilted.validation.ok());
}

TEST_CASE("no scalars-Grassmann candidate is an equivalence bimodule") {
    auto c = share(scalars_algebra());
    auto g1 = share(grassmann_algebra(1));
    std::vector<Bimodule> candidates;

    // X = C with e acting by zero and <1,1> = 1: not full.
    Bimodule a;
    a.algebra_b = c;
    a.algebra_a = g1;
    a.dim = 1;
    a.left = {Matrix::identity(1)};
    a.right = {Matrix::identity(1), Matrix(1, 1)};
    a.inner_a = {{V({1, 0})}};
    a.inner_b = InnerTable{{V({1})}};
    candidates.push_back(a);

    // Same module with <1,1> = 1 + e: fails X3.
    Bimodule b = a;
    b.inner_a = {{V({1, 1})}};
    candidates.push_back(b);

    // X = Lambda(C^1) with <x,y> = x^* y and the standard scalar product.
    Bimodule d;
    d.algebra_b = c;
    d.algebra_a = g1;
    d.dim = 2;
    d.left = {Matrix::identity(2)};
    for (std::size_t k = 0; k < 2; ++k) d.right.push_back(g1->right_multiplication(g1->basis(k)));
    d.inner_a.assign(2, std::vector<Vector>(2));
    for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t r = 0; r < 2; ++r) d.inner_a[p][r] = g1->multiply(g1->star(g1->basis(p)), g1->basis(r));
    d.inner_b = InnerTable{{V({1}), V({0})}, {V({0}), V({1})}};
    candidates.push_back(d);

    // Same module with a rank-one B-valued product.
    Bimodule e = d;
    e.inner_b = InnerTable{{V({1}), V({0})}, {V({0}), V({0})}};
    candidates.push_back(e);

    for (std::size_t k = 0; k < candidates.size(); ++k) {
        CAPTURE(k);
        CHECK_FALSE(validate_bimodule(candidates[k], ValidationLevel::Equivalence).ok());
    }
    CHECK_FALSE(validate_bimodule(a, ValidationLevel::Rigged).passed("X6"));
    CHECK_FALSE(validate_bimodule(b, ValidationLevel::Rigged).passed("X3"));
}

TEST_CASE("table positivity regimes") {
    auto g1 = share(grassmann_algebra(1));
    // Every positive functional kills e, so [[e]] is consistent with the family.
    const TablePositivity t = table_positivity(*g1, {{V({0, 1})}});
    CHECK(t.positive);
    CHECK_FALSE(t.certified);
    const TablePositivity neg = table_positivity(*g1, {{V({-1, 0})}});
    CHECK_FALSE(neg.positive);
    CHECK(neg.certified);

    auto m2 = share(matrix_algebra(2));
    const TablePositivity n2 = table_positivity(*m2, {{V({0, 1, 1, 0})}});
    CHECK_FALSE(n2.positive);
    CHECK(n2.certified);
    REQUIRE(n2.refuting_vector.has_value());
}

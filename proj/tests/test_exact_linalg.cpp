#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace morita;
using namespace testing_support;

TEST_CASE("congruence of an already diagonal matrix") {
    auto r = congruence_diagonalize(Matrix::diagonal({q(1), lam()}));
    CHECK(r.basis_matrix() == Matrix::identity(2));
    CHECK(r.diagonal == Vector{q(1), lam()});
}

TEST_CASE("congruence with zero diagonal") {
    Matrix rho = M({{0, 1}, {1, 0}});
    auto r = congruence_diagonalize(rho);
    CHECK(r.basis[0] == V({1, 1}));
    CHECK(r.basis[1] == V({1, -1}));
    CHECK(r.diagonal == Vector{q(2), q(-2)});
}

TEST_CASE("congruence of a rank-one lambda matrix") {
    Matrix rho = M({{1, lam()}, {lam(), lam() * lam()}});
    auto r = congruence_diagonalize(rho);
    CHECK(r.diagonal == Vector{q(1), q(0)});
}

TEST_CASE("psd_decide examples") {
    CHECK(psd_decide(Matrix::identity(2)).positive());
    auto c = psd_decide(M({{0, 1}, {1, 0}}));
    CHECK_FALSE(c.positive());
    CHECK(*c.witness == V({1, -1}));
    CHECK(*c.witness_value == q(-2));
    CHECK(psd_decide(Matrix::diagonal({lam(), q(1) - lam()})).positive());
    CHECK_FALSE(psd_decide(Matrix::diagonal({lam() - lam() * lam(), -lam()})).positive());
}

TEST_CASE("non-Hermitian input is rejected") {
    try {
        psd_decide(M({{1, 1}, {0, 1}}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotHermitian);
    }
}

TEST_CASE("imaginary off-diagonal pivot") {
    Matrix rho = M({{0, I()}, {-I(), 0}});
    auto c = psd_decide(rho);
    CHECK_FALSE(c.positive());
    CHECK(replay(c, rho));
}

TEST_CASE("forced zero entries") {
    using P = std::pair<std::size_t, std::size_t>;
    auto z = forced_zero_entries(M({{1, 0}, {0, 0}}));
    CHECK(z == std::set<P>{{1, 0}, {1, 1}, {0, 1}});
    CHECK(forced_zero_entries(Matrix::identity(3)).empty());
    try {
        forced_zero_entries(M({{0, 1}, {1, 0}}));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPsd);
    }
}

TEST_CASE("kernel basis") {
    auto k = kernel_basis(M({{1, 0}, {0, 0}}));
    REQUIRE(k.size() == 1);
    CHECK(k[0] == V({0, 1}));
    CHECK(kernel_basis(Matrix::identity(2)).empty());
    auto k2 = kernel_basis(M({{1, lam()}}));
    REQUIRE(k2.size() == 1);
    CHECK(k2[0] == V({-lam(), 1}));
}

TEST_CASE("kron, trace and solve") {
    Matrix ones = M({{1, 1}, {1, 1}});
    CHECK(trace(Matrix::diagonal({q(1), q(2)}) * ones) == q(3));
    CHECK(kron(Matrix::identity(2), Matrix::identity(3)) == Matrix::identity(6));
    CHECK_FALSE(solve(M({{1, 0}, {0, 0}}), V({0, 1})).has_value());
    auto x = solve(M({{1, lam()}, {0, 1}}), V({1, 1}));
    REQUIRE(x);
    CHECK(*x == V({q(1) - lam(), 1}));
    CHECK_THROWS_AS(Matrix::identity(2) * Matrix::identity(3), Error);
}

TEST_CASE("quotient maps") {
    auto qm = quotient_by({V({1, 1, 0})}, 3);
    CHECK(qm.dim() == 2);
    CHECK(qm.projection * qm.section == Matrix::identity(2));
    CHECK(is_zero(qm.projection * V({1, 1, 0})));
}

TEST_CASE("adjoint laws") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        Matrix a = random_matrix(rng, 2, 3), b = random_matrix(rng, 3, 2);
        CHECK(a.adjoint().adjoint() == a);
        CHECK((a * b).adjoint() == b.adjoint() * a.adjoint());
    }
}

TEST_CASE("certificates replay and positive verdicts admit no sampled witness") {
    std::mt19937_64 rng(101);
    int positives = 0;
    for (int t = 0; t < 120; ++t) {
        const std::size_t n = 1 + t % 4;
        Matrix rho = random_hermitian(rng, n);
        if (t % 2 == 0) {
            Matrix a = random_matrix(rng, n, n);
            rho = a.adjoint() * a;
        }
        auto cert = psd_decide(rho);
        REQUIRE(replay(cert, rho));
        // U^-dagger diag(p) U^-1 reconstructs rho whenever U is invertible.
        auto u = inverse(cert.congruence.basis_matrix());
        REQUIRE(u);
        CHECK(u->adjoint() * Matrix::diagonal(cert.congruence.diagonal) * *u == rho);
        if (!cert.positive()) continue;
        ++positives;
        for (int s = 0; s < 200; ++s) {
            Vector v = random_vector(rng, n, 1);
            CHECK(inner(v, rho, v).sign() >= 0);
        }
    }
    CHECK(positives >= 30);
}

TEST_CASE("trace and Kronecker products of positive matrices") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        Matrix a = random_matrix(rng, 2, 2), b = random_matrix(rng, 2, 2);
        Matrix p = a.adjoint() * a, r = b.adjoint() * b;
        REQUIRE(psd_decide(p).positive());
        REQUIRE(psd_decide(r).positive());
        CHECK(trace(p * r).sign() >= 0);
        CHECK(psd_decide(kron(p, r)).positive());
        Matrix c = random_matrix(rng, 2, 2);
        CHECK(trace(p * c.adjoint() * c).sign() >= 0);
    }
}

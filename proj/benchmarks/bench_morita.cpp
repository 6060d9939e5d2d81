#include <random>

#include <benchmark/benchmark.h>

#include "morita/classical_limit.hpp"
#include "morita/rieffel.hpp"

using namespace morita;

namespace {

// A*A for a random integer (or degree-one polynomial) matrix, so the input is
// Hermitian and positive semi-definite.
Matrix random_gram(std::size_t n, bool deformed, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> c(-3, 3);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            BaseElement re = deformed ? BaseElement(std::vector<Rational>{Rational(c(rng)), Rational(c(rng))})
                                      : BaseElement(c(rng));
            a(i, j) = FracScalar(Scalar(re, BaseElement(c(rng))));
        }
    return a.adjoint() * a;
}

Matrix indefinite(std::size_t n) {
    Matrix m = random_gram(n, false, 5);
    m(n - 1, n - 1) = m(n - 1, n - 1) - FracScalar(Rational(1000));
    return m;
}

void BM_psd_decide(benchmark::State& state) {
    const Matrix m = random_gram(static_cast<std::size_t>(state.range(0)), false, 1);
    for (auto _ : state) benchmark::DoNotOptimize(psd_decide(m));
}
BENCHMARK(BM_psd_decide)->DenseRange(2, 8, 2);

void BM_psd_decide_deformed(benchmark::State& state) {
    const Matrix m = random_gram(static_cast<std::size_t>(state.range(0)), true, 2);
    for (auto _ : state) benchmark::DoNotOptimize(psd_decide(m));
}
BENCHMARK(BM_psd_decide_deformed)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_psd_decide_indefinite(benchmark::State& state) {
    const Matrix m = indefinite(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(psd_decide(m));
}
BENCHMARK(BM_psd_decide_indefinite)->DenseRange(2, 8, 2);

void BM_gns_trace(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const AlgebraRef a = share(matrix_algebra(n));
    const LinearFunctional tr = density_functional(*a, Matrix::identity(n));
    for (auto _ : state) benchmark::DoNotOptimize(gns(a, tr));
}
BENCHMARK(BM_gns_trace)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_induce_free(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const AlgebraRef m2 = share(matrix_algebra(2));
    const Bimodule x = free_module_bimodule(m2, n);
    const Representation pi = defining_representation(m2);
    for (auto _ : state) benchmark::DoNotOptimize(induce(x, pi));
}
BENCHMARK(BM_induce_free)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_validate_free(benchmark::State& state) {
    const Bimodule x = free_module_bimodule(share(scalars_algebra()), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(validate_bimodule(x, ValidationLevel::Equivalence));
}
BENCHMARK(BM_validate_free)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_validate_corner(benchmark::State& state) {
    Matrix q(3, 3);
    q(0, 0) = FracScalar(Rational(1));
    q(1, 1) = FracScalar(Rational(1));
    const Bimodule x = corner_bimodule(q).bimodule;
    for (auto _ : state) benchmark::DoNotOptimize(validate_bimodule(x, ValidationLevel::Equivalence));
}
BENCHMARK(BM_validate_corner)->Unit(benchmark::kMillisecond);

void BM_roundtrip(benchmark::State& state) {
    const AlgebraRef c = share(scalars_algebra());
    const Bimodule x = free_module_bimodule(c, static_cast<std::size_t>(state.range(0)));
    const Representation pi = defining_representation(c);
    for (auto _ : state) benchmark::DoNotOptimize(roundtrip_unitary(x, pi));
}
BENCHMARK(BM_roundtrip)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_cl_bimodule(benchmark::State& state) {
    const AlgebraRef m2 = share(matrix_algebra(2));
    const Bimodule x = free_module_bimodule(m2, 2);
    for (auto _ : state) benchmark::DoNotOptimize(cl_bimodule(x));
}
BENCHMARK(BM_cl_bimodule)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

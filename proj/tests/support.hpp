#pragma once

#include <initializer_list>
#include <random>
#include <vector>

#include "morita/exact_linalg.hpp"

namespace testing_support {

using namespace morita;

inline BaseElement poly(std::initializer_list<long> c) {
    std::vector<Rational> r;
    for (long x : c) r.emplace_back(x);
    return BaseElement(r);
}

inline FracScalar q(long p, long d = 1) { return FracScalar(Rational(p, d)); }
inline FracScalar lam() { return FracScalar::lambda(); }
inline FracScalar I() { return FracScalar::i(); }

inline Matrix M(std::initializer_list<std::initializer_list<FracScalar>> rows) {
    std::vector<Vector> r;
    for (auto& row : rows) r.emplace_back(row);
    return Matrix::from_rows(r);
}

inline Vector V(std::initializer_list<FracScalar> v) { return Vector(v); }

/// Small random polynomial with integer coefficients in [-range, range].
inline BaseElement random_base(std::mt19937_64& rng, int max_degree = 3, int range = 4) {
    std::uniform_int_distribution<int> deg(0, max_degree), coef(-range, range);
    std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = coef(rng);
    return BaseElement(c);
}

inline FracScalar random_scalar(std::mt19937_64& rng, bool real = false, int max_degree = 2) {
    Scalar s(random_base(rng, max_degree), real ? BaseElement() : random_base(rng, max_degree));
    return FracScalar(s);
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int max_degree = 1) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = random_scalar(rng, false, max_degree);
    return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, std::size_t n, int max_degree = 1) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = random_scalar(rng, true, max_degree);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = random_scalar(rng, false, max_degree);
            m(j, i) = m(i, j).conj();
        }
    }
    return m;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, int max_degree = 1) {
    Vector v(n);
    for (auto& z : v) z = random_scalar(rng, false, max_degree);
    return v;
}

}  // namespace testing_support

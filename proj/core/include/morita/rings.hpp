#pragma once

// The ordered-ring tower used throughout the library:
//
//   R  = Q[lambda], ordered by the sign of the lowest-order nonzero
//        coefficient (plain Q is the degree-0 subring),
//   C  = R(i), Gaussian extension,
//   C^ = fraction field, stored as numerator in C over a positive
//        denominator in R.
//
// Everything is exact and eagerly canonicalized, so structural equality is
// mathematical equality.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "morita/error.hpp"

namespace morita {

using Rational = mpq_class;

/// Element of Q[lambda]. Coefficient k multiplies lambda^k.
class BaseElement {
public:
    BaseElement() = default;
    BaseElement(const Rational& constant);  // NOLINT: implicit embedding Q -> R
    BaseElement(long constant) : BaseElement(Rational(constant)) {}  // NOLINT
    explicit BaseElement(std::vector<Rational> coefficients);

    static BaseElement lambda();
    static BaseElement monomial(const Rational& coefficient, std::size_t degree);

    const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_constant() const noexcept { return coeffs_.size() <= 1; }
    /// Degree of the polynomial; 0 for constants including zero.
    std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    Rational coefficient(std::size_t k) const;
    Rational constant_term() const { return coefficient(0); }
    Rational leading_coefficient() const;

    /// Sign of the lowest-order nonzero coefficient.
    int sign() const;
    /// Lowest index with a nonzero coefficient; nullopt encodes o(0) = infinity.
    std::optional<std::size_t> lambda_order() const;

    BaseElement operator-() const;
    BaseElement& operator+=(const BaseElement& other);
    BaseElement& operator-=(const BaseElement& other);
    BaseElement& operator*=(const BaseElement& other);
    BaseElement& operator*=(const Rational& factor);

    friend BaseElement operator+(BaseElement a, const BaseElement& b) { return a += b; }
    friend BaseElement operator-(BaseElement a, const BaseElement& b) { return a -= b; }
    friend BaseElement operator*(const BaseElement& a, const BaseElement& b);
    friend bool operator==(const BaseElement& a, const BaseElement& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const BaseElement& a, const BaseElement& b) { return !(a == b); }

    /// Euclidean division over Q: a = q*b + r with deg r < deg b.
    static void divmod(const BaseElement& a, const BaseElement& b, BaseElement& quotient, BaseElement& remainder);
    /// Exact quotient; throws NotInRing if b does not divide a.
    static BaseElement exact_divide(const BaseElement& a, const BaseElement& b);

    std::string to_string() const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Monic gcd over Q; gcd(0, 0) = 0.
BaseElement gcd(const BaseElement& a, const BaseElement& b);

/// Element of C = R(i).
class Scalar {
public:
    Scalar() = default;
    Scalar(BaseElement re) : re_(std::move(re)) {}  // NOLINT: implicit embedding R -> C
    Scalar(const Rational& re) : re_(re) {}         // NOLINT
    Scalar(long re) : re_(re) {}                    // NOLINT
    Scalar(BaseElement re, BaseElement im) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar i() { return Scalar(BaseElement(), BaseElement(1)); }

    const BaseElement& re() const noexcept { return re_; }
    const BaseElement& im() const noexcept { return im_; }
    bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const noexcept { return im_.is_zero(); }

    Scalar conj() const { return Scalar(re_, -im_); }
    /// conj(z) * z, always a non-negative element of R.
    BaseElement norm() const { return re_ * re_ + im_ * im_; }

    Scalar operator-() const { return Scalar(-re_, -im_); }
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string to_string() const;

private:
    BaseElement re_;
    BaseElement im_;
};

/// Element of the fraction field C^. Invariant: denominator has sign +1, its
/// lowest-order coefficient equals 1, and gcd(numerator parts, denominator) = 1.
class FracScalar {
public:
    FracScalar() : den_(1) {}
    FracScalar(Scalar num);  // NOLINT: implicit embedding C -> C^
    FracScalar(const BaseElement& re) : FracScalar(Scalar(re)) {}  // NOLINT
    FracScalar(const Rational& re) : FracScalar(Scalar(re)) {}     // NOLINT
    FracScalar(long re) : FracScalar(Scalar(re)) {}                // NOLINT
    FracScalar(Scalar num, BaseElement den);

    static FracScalar i() { return FracScalar(Scalar::i()); }
    static FracScalar lambda() { return FracScalar(BaseElement::lambda()); }

    const Scalar& numerator() const noexcept { return num_; }
    const BaseElement& denominator() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_real() const noexcept { return num_.is_real(); }
    bool is_one() const;
    /// True when the value lies in C itself (denominator is a unit).
    bool in_ring() const noexcept { return den_.is_constant(); }

    FracScalar real_part() const { return FracScalar(Scalar(num_.re()), den_); }
    FracScalar imag_part() const { return FracScalar(Scalar(num_.im()), den_); }
    FracScalar conj() const;
    /// Sign in the ordered field; throws NotHermitian when the value is not real.
    int sign() const;

    FracScalar operator-() const;
    FracScalar& operator+=(const FracScalar& o);
    FracScalar& operator-=(const FracScalar& o);
    FracScalar& operator*=(const FracScalar& o);
    FracScalar& operator/=(const FracScalar& o);
    friend FracScalar operator+(FracScalar a, const FracScalar& b) { return a += b; }
    friend FracScalar operator-(FracScalar a, const FracScalar& b) { return a -= b; }
    friend FracScalar operator*(FracScalar a, const FracScalar& b) { return a *= b; }
    friend FracScalar operator/(FracScalar a, const FracScalar& b) { return a /= b; }
    friend bool operator==(const FracScalar& a, const FracScalar& b) {
        return a.den_ == b.den_ && a.num_ == b.num_;
    }
    friend bool operator!=(const FracScalar& a, const FracScalar& b) { return !(a == b); }

    std::string to_string() const;

private:
    void canonicalize();
    Scalar num_;
    BaseElement den_;
};

FracScalar inverse(const FracScalar& z);

/// Demotion C^ -> C; succeeds iff the denominator is a unit of C.
Scalar try_demote(const FracScalar& z);

/// The ring map lambda -> 0.
Rational classical_limit(const BaseElement& x);
Scalar classical_limit_scalar(const Scalar& z);
/// Throws DenominatorVanishesAtZero when the denominator has positive lambda-order.
Scalar classical_limit_scalar(const FracScalar& z);
/// Whether classical_limit_scalar is defined, i.e. the denominator is a unit at lambda = 0.
bool has_classical_limit(const FracScalar& z);

std::ostream& operator<<(std::ostream& os, const BaseElement& x);
std::ostream& operator<<(std::ostream& os, const Scalar& z);
std::ostream& operator<<(std::ostream& os, const FracScalar& z);

}  // namespace morita

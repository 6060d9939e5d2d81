#include "morita/rings.hpp"

#include <sstream>
#include <utility>

namespace morita {

// ---------------------------------------------------------------------------
// BaseElement

BaseElement::BaseElement(const Rational& constant) {
    if (constant != 0) {
        coeffs_.push_back(constant);
        coeffs_.back().canonicalize();
    }
}

BaseElement::BaseElement(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
    for (auto& c : coeffs_) c.canonicalize();
    trim();
}

BaseElement BaseElement::lambda() { return monomial(1, 1); }

BaseElement BaseElement::monomial(const Rational& coefficient, std::size_t degree) {
    std::vector<Rational> c(degree + 1);
    c[degree] = coefficient;
    return BaseElement(std::move(c));
}

void BaseElement::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational BaseElement::coefficient(std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : Rational(0);
}

Rational BaseElement::leading_coefficient() const {
    return coeffs_.empty() ? Rational(0) : coeffs_.back();
}

std::optional<std::size_t> BaseElement::lambda_order() const {
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        if (coeffs_[k] != 0) return k;
    return std::nullopt;
}

int BaseElement::sign() const {
    for (const auto& c : coeffs_)
        if (c != 0) return sgn(c);
    return 0;
}

BaseElement BaseElement::operator-() const {
    BaseElement r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

BaseElement& BaseElement::operator+=(const BaseElement& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    trim();
    return *this;
}

BaseElement& BaseElement::operator-=(const BaseElement& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
    trim();
    return *this;
}

BaseElement operator*(const BaseElement& a, const BaseElement& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.coeffs_.size() == 1 && b.coeffs_.size() == 1) return BaseElement(Rational(a.coeffs_[0] * b.coeffs_[0]));
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return BaseElement(std::move(c));
}

BaseElement& BaseElement::operator*=(const BaseElement& other) { return *this = *this * other; }

BaseElement& BaseElement::operator*=(const Rational& factor) {
    if (factor == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& c : coeffs_) c *= factor;
    return *this;
}

void BaseElement::divmod(const BaseElement& a, const BaseElement& b, BaseElement& quotient, BaseElement& remainder) {
    if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
    std::vector<Rational> r = a.coeffs_;
    const std::size_t db = b.coeffs_.size() - 1;
    if (r.size() <= db) {
        quotient = BaseElement();
        remainder = a;
        return;
    }
    std::vector<Rational> q(r.size() - db);
    const Rational lead = b.coeffs_.back();
    for (std::size_t k = r.size(); k-- > db;) {
        if (r[k] == 0) continue;
        Rational f = r[k] / lead;
        q[k - db] = f;
        for (std::size_t j = 0; j <= db; ++j) r[k - db + j] -= f * b.coeffs_[j];
    }
    quotient = BaseElement(std::move(q));
    remainder = BaseElement(std::move(r));
}

BaseElement BaseElement::exact_divide(const BaseElement& a, const BaseElement& b) {
    BaseElement q, r;
    divmod(a, b, q, r);
    if (!r.is_zero()) throw Error(ErrorKind::NotInRing, b.to_string() + " does not divide " + a.to_string());
    return q;
}

BaseElement gcd(const BaseElement& a, const BaseElement& b) {
    BaseElement x = a, y = b;
    while (!y.is_zero()) {
        if (y.is_constant()) {
            x = BaseElement(1);
            y = BaseElement();
            break;
        }
        BaseElement q, r;
        BaseElement::divmod(x, y, q, r);
        x = std::move(y);
        y = std::move(r);
    }
    if (x.is_zero()) return x;
    Rational inv = 1 / x.leading_coefficient();
    x *= inv;
    return x;
}

std::string BaseElement::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const Rational& c = coeffs_[k];
        if (c == 0) continue;
        Rational mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (k == 0) {
            os << mag.get_str();
            continue;
        }
        if (mag != 1) os << mag.get_str() << "*";
        os << "lambda";
        if (k > 1) os << "^" << k;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Scalar

Scalar& Scalar::operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (im_.is_zero() && o.im_.is_zero()) {
        re_ *= o.re_;
        return *this;
    }
    BaseElement re = re_ * o.re_ - im_ * o.im_;
    BaseElement im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

std::string Scalar::to_string() const {
    if (im_.is_zero()) return re_.to_string();
    if (re_.is_zero()) return "(" + im_.to_string() + ")*i";
    return "(" + re_.to_string() + ") + (" + im_.to_string() + ")*i";
}

// ---------------------------------------------------------------------------
// FracScalar

namespace {

Scalar scale(const Scalar& z, const Rational& f) {
    BaseElement re = z.re(), im = z.im();
    re *= f;
    im *= f;
    return Scalar(std::move(re), std::move(im));
}

}  // namespace

FracScalar::FracScalar(Scalar num) : num_(std::move(num)), den_(1) {}

FracScalar::FracScalar(Scalar num, BaseElement den) : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
}

void FracScalar::canonicalize() {
    if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    if (num_.is_zero()) {
        den_ = BaseElement(1);
        return;
    }
    if (den_.is_constant()) {
        if (den_.constant_term() != 1) {
            num_ = scale(num_, 1 / den_.constant_term());
            den_ = BaseElement(1);
        }
        return;
    }
    BaseElement g = gcd(den_, num_.re());
    if (!g.is_constant()) g = gcd(g, num_.im());
    if (!g.is_constant()) {
        num_ = Scalar(BaseElement::exact_divide(num_.re(), g), BaseElement::exact_divide(num_.im(), g));
        den_ = BaseElement::exact_divide(den_, g);
    }
    Rational low = den_.coefficient(*den_.lambda_order());
    if (den_.is_constant()) low = den_.constant_term();
    if (low != 1) {
        Rational inv = 1 / low;
        num_ = scale(num_, inv);
        den_ *= inv;
    }
}

bool FracScalar::is_one() const {
    return den_.is_constant() && num_.is_real() && num_.re().is_constant() && num_.re().constant_term() == 1;
}

FracScalar FracScalar::conj() const {
    FracScalar r;
    r.num_ = num_.conj();
    r.den_ = den_;
    return r;
}

int FracScalar::sign() const {
    if (!num_.is_real()) throw Error(ErrorKind::NotHermitian, "sign of non-real value " + to_string());
    return num_.re().sign();
}

FracScalar FracScalar::operator-() const {
    FracScalar r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

FracScalar& FracScalar::operator+=(const FracScalar& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
        num_ += o.num_;
        if (!den_.is_constant()) canonicalize();
        else if (num_.is_zero()) den_ = BaseElement(1);
        return *this;
    }
    num_ = num_ * Scalar(o.den_) + o.num_ * Scalar(den_);
    den_ = den_ * o.den_;
    canonicalize();
    return *this;
}

FracScalar& FracScalar::operator-=(const FracScalar& o) { return *this += -o; }

FracScalar& FracScalar::operator*=(const FracScalar& o) {
    if (is_zero()) return *this;
    if (o.is_zero()) return *this = FracScalar();
    num_ *= o.num_;
    if (den_.is_constant() && o.den_.is_constant()) return *this;
    den_ *= o.den_;
    canonicalize();
    return *this;
}

FracScalar& FracScalar::operator/=(const FracScalar& o) { return *this *= inverse(o); }

FracScalar inverse(const FracScalar& z) {
    if (z.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    // 1 / (n/d) = d * conj(n) / |n|^2
    Scalar num = Scalar(z.denominator()) * z.numerator().conj();
    return FracScalar(std::move(num), z.numerator().norm());
}

std::string FracScalar::to_string() const {
    if (den_.is_constant()) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

Scalar try_demote(const FracScalar& z) {
    if (!z.in_ring()) throw Error(ErrorKind::NotInRing, z.to_string() + " is not in R(i)");
    return z.numerator();
}

Rational classical_limit(const BaseElement& x) { return x.constant_term(); }

Scalar classical_limit_scalar(const Scalar& z) {
    return Scalar(BaseElement(classical_limit(z.re())), BaseElement(classical_limit(z.im())));
}

bool has_classical_limit(const FracScalar& z) { return z.denominator().constant_term() != 0; }

Scalar classical_limit_scalar(const FracScalar& z) {
    Rational d = z.denominator().constant_term();
    if (d == 0)
        throw Error(ErrorKind::DenominatorVanishesAtZero, "no classical limit for " + z.to_string());
    return scale(classical_limit_scalar(z.numerator()), 1 / d);
}

std::ostream& operator<<(std::ostream& os, const BaseElement& x) { return os << x.to_string(); }
std::ostream& operator<<(std::ostream& os, const Scalar& z) { return os << z.to_string(); }
std::ostream& operator<<(std::ostream& os, const FracScalar& z) { return os << z.to_string(); }

}  // namespace morita

#pragma once

#include <gmpxx.h>

#include <ostream>
#include <stdexcept>
#include <string>

namespace wres {

using Integer = mpz_class;

/* Arbitrary-precision exact rational.  Always stored canonically:
 * reduced to lowest terms, denominator > 0.  Thin wrapper over GMP's
 * mpq_class that enforces canonicalization on every construction path. */
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(const Integer& n) : v_(n) {}
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  static Rational from_string(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
  }

  Integer numerator() const { return v_.get_num(); }
  Integer denominator() const { return v_.get_den(); }

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    return Rational(mpq_class(v_ / o.v_));
  }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  Rational inverse() const {
    if (is_zero()) throw std::invalid_argument("Rational: inverse of zero");
    return Rational(denominator(), numerator());
  }

  /* Integer exponent, negative allowed for nonzero values. */
  Rational pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Rational r(1), base(*this);
    for (; e > 0; e >>= 1) {
      if (e & 1) r *= base;
      base *= base;
    }
    return r;
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  std::string to_string() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class v_;
};

/* Element of Q(i).  Used by the torus harness; the symbol engine proper
 * tracks powers of i as exponents instead. */
struct GaussianRational {
  Rational re, im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  GaussianRational conj() const { return {re, -im}; }

  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
  GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
  GaussianRational operator*(const GaussianRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

  /* Multiply by i^k. */
  GaussianRational mul_i_power(long k) const {
    switch (((k % 4) + 4) % 4) {
      case 0: return *this;
      case 1: return {-im, re};
      case 2: return {-re, -im};
      default: return {im, -re};
    }
  }

  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussianRational& o) const { return !(*this == o); }

  std::string to_string() const {
    if (im.is_zero()) return re.to_string();
    return "(" + re.to_string() + ")+(" + im.to_string() + ")i";
  }

  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) {
    return os << g.to_string();
  }
};

inline Integer factorial_int(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/* C(n, k); zero outside 0 <= k <= n. */
inline Integer binomial_int(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Integer(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/* (n)!! for odd n >= -1; (-1)!! = 1. */
inline Integer double_factorial_int(long n) {
  Integer r(1);
  for (long k = n; k >= 2; k -= 2) r *= k;
  return r;
}

}  // namespace wres

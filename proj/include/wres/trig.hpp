#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wres/multiindex.hpp"
#include "wres/random.hpp"
#include "wres/rational.hpp"
#include "wres/sphere.hpp"

namespace wres {

/* Finite Fourier sum on the n-torus,
 *   f(x) = sum over k in Z^n of  c_k exp(i <k, x>),
 * with Gaussian-rational coefficients.  Real-valued functions are the
 * ones with c_(-k) = conj(c_k); products are frequency convolutions, so
 * everything stays exact. */
class TrigPolynomial {
 public:
  using Freq = std::vector<int>;
  using TermMap = std::map<Freq, GaussianRational>;

  explicit TrigPolynomial(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("TrigPolynomial: dimension must be positive");
  }

  static TrigPolynomial wave(const Freq& k, const GaussianRational& c) {
    TrigPolynomial p(static_cast<int>(k.size()));
    p.add_term(k, c);
    return p;
  }

  static TrigPolynomial constant(const GaussianRational& c, int dim) {
    return wave(Freq(static_cast<size_t>(dim), 0), c);
  }

  static TrigPolynomial cosine(const Freq& k) {
    const GaussianRational half(Rational(1, 2));
    return wave(k, half) + wave(negated(k), half);
  }

  static TrigPolynomial sine(const Freq& k) {
    const GaussianRational mhalf_i(Rational(0), Rational(-1, 2));
    return wave(k, mhalf_i) + wave(negated(k), -mhalf_i);
  }

  int dim() const { return dim_; }
  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  GaussianRational coeff(const Freq& k) const {
    const auto it = t_.find(k);
    return it == t_.end() ? GaussianRational() : it->second;
  }

  void add_term(const Freq& k, const GaussianRational& c) {
    if (static_cast<int>(k.size()) != dim_)
      throw std::invalid_argument("TrigPolynomial: frequency dimension mismatch");
    if (c.is_zero()) return;
    const auto it = t_.emplace(k, GaussianRational()).first;
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }

  TrigPolynomial operator-() const {
    TrigPolynomial p(dim_);
    for (const auto& [k, c] : t_) p.t_.emplace(k, -c);
    return p;
  }

  TrigPolynomial operator+(const TrigPolynomial& o) const {
    require_same(o);
    TrigPolynomial p(*this);
    for (const auto& [k, c] : o.t_) p.add_term(k, c);
    return p;
  }

  TrigPolynomial operator-(const TrigPolynomial& o) const { return *this + (-o); }
  TrigPolynomial& operator+=(const TrigPolynomial& o) { return *this = *this + o; }
  TrigPolynomial& operator-=(const TrigPolynomial& o) { return *this = *this - o; }

  TrigPolynomial operator*(const TrigPolynomial& o) const {
    require_same(o);
    TrigPolynomial p(dim_);
    for (const auto& [k1, c1] : t_)
      for (const auto& [k2, c2] : o.t_) {
        Freq k = k1;
        for (int i = 0; i < dim_; ++i) k[static_cast<size_t>(i)] += k2[static_cast<size_t>(i)];
        p.add_term(k, c1 * c2);
      }
    return p;
  }

  TrigPolynomial& operator*=(const TrigPolynomial& o) { return *this = *this * o; }

  TrigPolynomial operator*(const GaussianRational& c) const {
    TrigPolynomial p(dim_);
    for (const auto& [k, v] : t_) p.add_term(k, v * c);
    return p;
  }

  TrigPolynomial operator*(const Rational& c) const { return *this * GaussianRational(c); }

  /* k^a = prod k_i^(a_i); zero when some k_i = 0 meets a_i > 0. */
  static Integer freq_power(const Freq& k, const MultiIndex& a) {
    Integer out = 1;
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a[i]; ++j) out *= k[static_cast<size_t>(i)];
    return out;
  }

  /* partial^a multiplies mode k by (i k)^a. */
  TrigPolynomial partial_multi(const MultiIndex& a) const {
    return d_multi(a).mul_i_power(a.order());
  }

  /* D^a = (-i)^|a| partial^a multiplies mode k by the integer k^a. */
  TrigPolynomial d_multi(const MultiIndex& a) const {
    if (a.dim() != dim_) throw std::invalid_argument("TrigPolynomial: derivative dimension mismatch");
    TrigPolynomial p(dim_);
    for (const auto& [k, c] : t_) {
      const Integer f = freq_power(k, a);
      if (f != 0) p.add_term(k, c * GaussianRational(Rational(f)));
    }
    return p;
  }

  TrigPolynomial mul_i_power(long e) const {
    TrigPolynomial p(dim_);
    for (const auto& [k, c] : t_) p.t_.emplace(k, c.mul_i_power(e));
    return p;
  }

  /* Mean over the torus: the zero-mode coefficient.  (The measure is
   * normalized; a (2 pi)^n volume factor would scale every value alike.) */
  GaussianRational mean() const { return coeff(Freq(static_cast<size_t>(dim_), 0)); }

  bool is_real_valued() const {
    for (const auto& [k, c] : t_)
      if (coeff(negated(k)) != c.conj()) return false;
    return true;
  }

  bool operator==(const TrigPolynomial& o) const { return dim_ == o.dim_ && t_ == o.t_; }
  bool operator!=(const TrigPolynomial& o) const { return !(*this == o); }

 private:
  static Freq negated(const Freq& k) {
    Freq m = k;
    for (int& v : m) v = -v;
    return m;
  }

  void require_same(const TrigPolynomial& o) const {
    if (dim_ != o.dim_) throw std::invalid_argument("TrigPolynomial: dimension mismatch");
  }

  int dim_;
  TermMap t_;
};

/* Random real-valued sample: a constant plus `waves` cosine/sine pairs
 * at frequencies with entries in [-modes, modes]. */
inline TrigPolynomial random_real_trig(int dim, int modes, int waves, SplitMix64& rng) {
  TrigPolynomial out = TrigPolynomial::constant(GaussianRational(rng.small_rational()), dim);
  for (int w = 0; w < waves; ++w) {
    TrigPolynomial::Freq k(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i)
      k[static_cast<size_t>(i)] = static_cast<int>(rng.range(-modes, modes));
    out += TrigPolynomial::cosine(k) * rng.small_rational() +
           TrigPolynomial::sine(k) * rng.small_rational();
  }
  return out;
}

/* The 2-cochain a coefficient table induces on torus functions:
 *   phi(f0, f1, f2) = mean of  f0 * sum entry(a, b) D^a f1 D^b f2.
 * The table's powers of pi (surface sphere convention) scale every
 * value alike and are carried by the caller. */
inline GaussianRational table_cochain(const BilinearForm& table, const TrigPolynomial& f0,
                                       const TrigPolynomial& f1, const TrigPolynomial& f2) {
  if (f0.dim() != table.dim || f1.dim() != table.dim || f2.dim() != table.dim)
    throw std::invalid_argument("table_cochain: dimension mismatch");
  TrigPolynomial acc(table.dim);
  for (const auto& [key, v] : table.entries)
    acc += (f1.d_multi(key.a) * f2.d_multi(key.b)) * v;
  return (f0 * acc).mean();
}

/* Hochschild coboundary of that 2-cochain:
 *   (b phi)(f0, f1, f2, f3) = phi(f0 f1, f2, f3) - phi(f0, f1 f2, f3)
 *                           + phi(f0, f1, f2 f3) - phi(f3 f0, f1, f2).
 * Identically zero exactly when phi is a Hochschild 2-cocycle. */
inline GaussianRational hochschild_b(const BilinearForm& table, const TrigPolynomial& f0,
                                     const TrigPolynomial& f1, const TrigPolynomial& f2,
                                     const TrigPolynomial& f3) {
  return table_cochain(table, f0 * f1, f2, f3) - table_cochain(table, f0, f1 * f2, f3) +
         table_cochain(table, f0, f1, f2 * f3) - table_cochain(table, f3 * f0, f1, f2);
}

}  // namespace wres

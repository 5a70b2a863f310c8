#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wres/polynomial.hpp"

namespace wres {

/* Homogeneous rational function of xi with poles only along |xi|^2:
 *
 *     num(xi) / |xi|^(2k),   num homogeneous of degree  d + 2k.
 *
 * `d` is the net homogeneity degree (can be negative).  Canonical form
 * divides |xi|^2 out of the numerator greedily, so equality is plain
 * structural comparison.  The zero value is compatible with any degree. */
class HomogeneousRational {
 public:
  explicit HomogeneousRational(int dim)
      : num_(Polynomial(dim, VarSpace::xi)), pole_(0), net_(0) {}

  HomogeneousRational(Polynomial num, int pole) : num_(std::move(num)), pole_(pole) {
    if (pole_ < 0) throw std::invalid_argument("HomogeneousRational: negative pole power");
    int deg = 0;
    if (!num_.is_homogeneous(&deg))
      throw std::invalid_argument("HomogeneousRational: numerator not homogeneous");
    net_ = num_.is_zero() ? 0 : deg - 2 * pole_;
    canonicalize();
  }

  static HomogeneousRational constant(const Rational& c, int dim) {
    return HomogeneousRational(Polynomial::constant(c, dim, VarSpace::xi), 0);
  }

  /* c / |xi|^(2k); k may be negative (then |xi|^(-2k) multiplies the numerator). */
  static HomogeneousRational radial(const Rational& c, int k, int dim) {
    if (c.is_zero()) return HomogeneousRational(dim);
    if (k >= 0) return HomogeneousRational(Polynomial::constant(c, dim, VarSpace::xi), k);
    return HomogeneousRational(Polynomial::norm_sq(dim).pow(static_cast<unsigned>(-k)) * c, 0);
  }

  int dim() const { return num_.nvars(); }
  int pole() const { return pole_; }
  int net_degree() const { return net_; }
  const Polynomial& numerator() const { return num_; }
  bool is_zero() const { return num_.is_zero(); }

  HomogeneousRational operator-() const { return raw(-num_, pole_); }

  HomogeneousRational operator+(const HomogeneousRational& o) const {
    require_dim(o);
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (net_ != o.net_)
      throw std::invalid_argument("HomogeneousRational: adding different net degrees");
    const int k = std::max(pole_, o.pole_);
    const Polynomial q = Polynomial::norm_sq(dim());
    Polynomial n = num_ * q.pow(static_cast<unsigned>(k - pole_)) +
                   o.num_ * q.pow(static_cast<unsigned>(k - o.pole_));
    return HomogeneousRational(std::move(n), k);
  }
  HomogeneousRational operator-(const HomogeneousRational& o) const { return *this + (-o); }
  HomogeneousRational& operator+=(const HomogeneousRational& o) { return *this = *this + o; }
  HomogeneousRational& operator-=(const HomogeneousRational& o) { return *this = *this - o; }

  HomogeneousRational operator*(const HomogeneousRational& o) const {
    require_dim(o);
    if (is_zero() || o.is_zero()) return HomogeneousRational(dim());
    return HomogeneousRational(num_ * o.num_, pole_ + o.pole_);
  }
  HomogeneousRational& operator*=(const HomogeneousRational& o) { return *this = *this * o; }

  HomogeneousRational operator*(const Rational& c) const {
    if (c.is_zero()) return HomogeneousRational(dim());
    return raw(num_ * c, pole_);
  }

  /* Multiply by |xi|^(-2j). */
  HomogeneousRational pole_shift(int j) const {
    if (is_zero()) return *this;
    if (j >= 0) return HomogeneousRational(num_, pole_ + j);
    return HomogeneousRational(num_ * Polynomial::norm_sq(dim()).pow(static_cast<unsigned>(-j)),
                               pole_);
  }

  /* d/dxi_i by the quotient rule: (dn q - 2k xi_i n) / q^(k+1). */
  HomogeneousRational partial_xi(int i) const {
    if (is_zero()) return *this;
    if (pole_ == 0) return HomogeneousRational(num_.partial(i), 0);
    const Polynomial q = Polynomial::norm_sq(dim());
    Polynomial n = num_.partial(i) * q -
                   num_ * Polynomial::variable(i, dim(), VarSpace::xi) * Rational(2 * pole_);
    return HomogeneousRational(std::move(n), pole_ + 1);
  }

  HomogeneousRational partial_xi_multi(const MultiIndex& alpha) const {
    HomogeneousRational h(*this);
    for (int i = 0; i < alpha.dim(); ++i)
      for (int k = 0; k < alpha[i]; ++k) h = h.partial_xi(i);
    return h;
  }

  Rational evaluate(const std::vector<Rational>& pt) const {
    if (is_zero()) return Rational(0);
    Rational den(1);
    if (pole_ > 0) {
      Rational q(0);
      for (const auto& c : pt) q += c * c;
      if (q.is_zero())
        throw std::invalid_argument("HomogeneousRational: evaluating a pole at xi = 0");
      den = q.pow(pole_);
    }
    return num_.evaluate(pt) / den;
  }

  /* If the value is c * |xi|^(-2s), return (c, s); s may be negative. */
  std::optional<std::pair<Rational, int>> as_radial() const {
    if (is_zero()) return std::make_pair(Rational(0), 0);
    const Polynomial q = Polynomial::norm_sq(dim());
    Polynomial n = num_;
    int drop = 0;
    while (n.degree() > 0) {
      auto [quot, rem] = n.divrem(q);
      if (!rem.is_zero()) return std::nullopt;
      n = std::move(quot);
      ++drop;
    }
    return std::make_pair(n.coeff(MultiIndex(dim())), pole_ - drop);
  }

  bool operator==(const HomogeneousRational& o) const {
    return dim() == o.dim() && pole_ == o.pole_ && num_ == o.num_;
  }
  bool operator!=(const HomogeneousRational& o) const { return !(*this == o); }

  std::string to_string() const {
    std::string s = "(" + num_.to_string("xi") + ")";
    if (pole_ > 0) s += "/|xi|^" + std::to_string(2 * pole_);
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const HomogeneousRational& h) {
    return os << h.to_string();
  }

 private:
  /* Construct from parts already known to be canonical-compatible. */
  static HomogeneousRational raw(Polynomial num, int pole) {
    HomogeneousRational h(num.nvars());
    int deg = 0;
    num.is_homogeneous(&deg);
    h.net_ = num.is_zero() ? 0 : deg - 2 * pole;
    h.num_ = std::move(num);
    h.pole_ = h.num_.is_zero() ? 0 : pole;
    return h;
  }

  void canonicalize() {
    if (num_.is_zero()) {
      pole_ = 0;
      net_ = 0;
      return;
    }
    if (pole_ == 0) return;
    const Polynomial q = Polynomial::norm_sq(dim());
    while (pole_ > 0) {
      auto [quot, rem] = num_.divrem(q);
      if (!rem.is_zero()) break;
      num_ = std::move(quot);
      --pole_;
    }
  }

  void require_dim(const HomogeneousRational& o) const {
    if (o.dim() != dim())
      throw std::invalid_argument("HomogeneousRational: dimension mismatch");
  }

  Polynomial num_;
  int pole_;
  int net_;
};

inline HomogeneousRational operator*(const Rational& c, const HomogeneousRational& h) {
  return h * c;
}

}  // namespace wres

#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wres/exterior.hpp"
#include "wres/homogeneous_rational.hpp"
#include "wres/multiindex.hpp"
#include "wres/polynomial.hpp"
#include "wres/rational.hpp"

namespace wres {

/* mass_one: the sphere carries the probability measure (total mass 1).
 * surface_area: the unnormalized surface measure; its values carry a
 * factor pi^(n/2), tracked separately so everything stays rational. */
enum class SphereConvention { mass_one, surface_area };

inline const char* sphere_convention_name(SphereConvention c) {
  return c == SphereConvention::mass_one ? "mass-one" : "surface";
}

/* value * pi^pi_power. */
struct SphereValue {
  Rational value;
  int pi_power = 0;
};

/* Mean of xi^alpha over the unit sphere S^(n-1):
 *
 *   prod_i (alpha_i - 1)!!  /  prod_(j=0)^(s-1) (n + 2j),   s = |alpha|/2,
 *
 * and zero whenever some alpha_i is odd. */
inline Rational monomial_sphere_average(const MultiIndex& alpha) {
  const int n = alpha.dim();
  if (n <= 0) throw std::invalid_argument("monomial_sphere_average: empty index");
  Integer num(1);
  for (int i = 0; i < n; ++i) {
    if (alpha[i] % 2 != 0) return Rational(0);
    num *= double_factorial_int(alpha[i] - 1);
  }
  Integer den(1);
  const int s = alpha.order() / 2;
  for (int j = 0; j < s; ++j) den *= n + 2 * j;
  return Rational(num) / Rational(den);
}

/* vol(S^(n-1)) = 2 pi^(n/2) / (n/2 - 1)! for even n, as a SphereValue. */
inline SphereValue sphere_surface_volume(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("sphere_surface_volume: need even n >= 2");
  return {Rational(2) / Rational(factorial_int(static_cast<unsigned long>(n / 2 - 1))), n / 2};
}

inline SphereValue monomial_sphere_integral(const MultiIndex& alpha, SphereConvention c) {
  const Rational avg = monomial_sphere_average(alpha);
  if (c == SphereConvention::mass_one) return {avg, 0};
  const SphereValue vol = sphere_surface_volume(alpha.dim());
  return {avg * vol.value, vol.pi_power};
}

/* Integral over S^(n-1) of the restriction of a homogeneous rational
 * function: on the sphere the |xi|^2 pole is 1, so only the numerator
 * monomials contribute. */
inline SphereValue integrate_on_sphere(const HomogeneousRational& h, SphereConvention c) {
  SphereValue out;
  out.pi_power = (c == SphereConvention::surface_area) ? h.dim() / 2 : 0;
  for (const auto& [m, coef] : h.numerator().terms())
    out.value += coef * monomial_sphere_integral(m, c).value;
  return out;
}

/* Key of a double power series term u^u_deg v^v_deg. */
struct UVKey {
  MultiIndex u, v;

  bool operator<(const UVKey& o) const {
    if (u < o.u) return true;
    if (o.u < u) return false;
    return v < o.v;
  }
  bool operator==(const UVKey& o) const { return u == o.u && v == o.v; }
};

/* Truncated power series in two families of offset variables u, v with
 * homogeneous-rational-in-xi coefficients; terms of total degree above
 * `max_total` are discarded on every operation. */
class UVSeries {
 public:
  using TermMap = std::map<UVKey, HomogeneousRational>;

  UVSeries(int dim, int max_total) : dim_(dim), max_(max_total) {
    if (dim <= 0 || max_total < 0) throw std::invalid_argument("UVSeries: bad shape");
  }

  int dim() const { return dim_; }
  int max_total() const { return max_; }
  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add_term(const MultiIndex& ud, const MultiIndex& vd, const HomogeneousRational& h) {
    if (h.is_zero() || ud.order() + vd.order() > max_) return;
    if (ud.dim() != dim_ || vd.dim() != dim_ || h.dim() != dim_)
      throw std::invalid_argument("UVSeries: dimension mismatch");
    const UVKey key{ud, vd};
    auto it = t_.find(key);
    if (it == t_.end()) {
      t_.emplace(key, h);
    } else {
      it->second += h;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  HomogeneousRational coeff(const MultiIndex& ud, const MultiIndex& vd) const {
    auto it = t_.find(UVKey{ud, vd});
    return it == t_.end() ? HomogeneousRational(dim_) : it->second;
  }

  UVSeries operator+(const UVSeries& o) const {
    require_compatible(o);
    UVSeries s(*this);
    for (const auto& [k, h] : o.t_) s.add_term(k.u, k.v, h);
    return s;
  }
  UVSeries& operator+=(const UVSeries& o) { return *this = *this + o; }

  UVSeries operator*(const UVSeries& o) const {
    require_compatible(o);
    UVSeries s(dim_, max_);
    for (const auto& [k1, h1] : t_)
      for (const auto& [k2, h2] : o.t_) {
        if (k1.u.order() + k1.v.order() + k2.u.order() + k2.v.order() > max_) continue;
        s.add_term(k1.u + k2.u, k1.v + k2.v, h1 * h2);
      }
    return s;
  }
  UVSeries& operator*=(const UVSeries& o) { return *this = *this * o; }

  UVSeries scaled(const HomogeneousRational& h) const {
    UVSeries s(dim_, max_);
    for (const auto& [k, c] : t_) s.add_term(k.u, k.v, c * h);
    return s;
  }
  UVSeries scaled(const Rational& c) const {
    return scaled(HomogeneousRational::constant(c, dim_));
  }

 private:
  void require_compatible(const UVSeries& o) const {
    if (o.dim_ != dim_ || o.max_ != max_)
      throw std::invalid_argument("UVSeries: incompatible series");
  }

  int dim_, max_;
  TermMap t_;
};

/* <xi + u, xi + v> as a series in (u, v). */
inline UVSeries shifted_inner_series(int n, int max_total) {
  UVSeries s(n, max_total);
  const MultiIndex zero(n);
  s.add_term(zero, zero, HomogeneousRational(Polynomial::norm_sq(n), 0));
  for (int i = 0; i < n; ++i) {
    const HomogeneousRational xi_i(Polynomial::variable(i, n, VarSpace::xi), 0);
    s.add_term(MultiIndex::unit(n, i), zero, xi_i);
    s.add_term(zero, MultiIndex::unit(n, i), xi_i);
    s.add_term(MultiIndex::unit(n, i), MultiIndex::unit(n, i),
               HomogeneousRational::constant(1, n));
  }
  return s;
}

/* |xi + w|^(-2) expanded by the geometric series
 *
 *   |xi|^(-2) sum_k (-1)^k ((2<xi,w> + |w|^2) / |xi|^2)^k,
 *
 * with w the u-family (u_side) or the v-family. */
inline UVSeries inverse_shifted_norm_series(int n, int max_total, bool u_side) {
  const MultiIndex zero(n);
  UVSeries p(n, max_total);  // 2<xi, w> + |w|^2
  for (int i = 0; i < n; ++i) {
    const MultiIndex ei = MultiIndex::unit(n, i);
    const MultiIndex e2 = ei + ei;
    const HomogeneousRational lin(Polynomial::variable(i, n, VarSpace::xi) * Rational(2), 0);
    if (u_side) {
      p.add_term(ei, zero, lin);
      p.add_term(e2, zero, HomogeneousRational::constant(1, n));
    } else {
      p.add_term(zero, ei, lin);
      p.add_term(zero, e2, HomogeneousRational::constant(1, n));
    }
  }
  UVSeries out(n, max_total), pk(n, max_total);
  pk.add_term(zero, zero, HomogeneousRational::constant(1, n));
  for (int k = 0; k <= max_total; ++k) {
    const Rational sign = (k % 2 == 0) ? 1 : -1;
    out += pk.scaled(HomogeneousRational::radial(sign, k + 1, n));
    if (k < max_total) pk *= p;
  }
  return out;
}

/* psi(xi + u, xi + v) as a truncated series, where
 * psi(xi, eta) = tr(sigma(xi) sigma(eta)) on middle-degree forms:
 *
 *   psi = a <xi,eta>^2 / (|xi|^2 |eta|^2) + b.
 *
 * The coefficient of u^gamma v^delta is homogeneous of net degree
 * -(|gamma| + |delta|). */
inline UVSeries psi_shift_series(int n, int m, int max_total) {
  const TracePair tp = trace_pair(n, m);
  const UVSeries inner = shifted_inner_series(n, max_total);
  const UVSeries iu = inverse_shifted_norm_series(n, max_total, true);
  const UVSeries iv = inverse_shifted_norm_series(n, max_total, false);
  UVSeries psi = (inner * inner * iu * iv).scaled(Rational(tp.a));
  psi.add_term(MultiIndex(n), MultiIndex(n), HomogeneousRational::constant(Rational(tp.b), n));
  return psi;
}

/* Coefficient table of a bilinear differential expression
 * sum over (a, b) of  entry_(a,b) * (deriv^a f)(deriv^b h),
 * together with the sphere convention and a common power of pi. */
struct BilinearKey {
  MultiIndex a, b;

  bool operator<(const BilinearKey& o) const {
    if (a < o.a) return true;
    if (o.a < a) return false;
    return b < o.b;
  }
  bool operator==(const BilinearKey& o) const { return a == o.a && b == o.b; }
};

struct BilinearForm {
  int dim = 0;
  SphereConvention convention = SphereConvention::mass_one;
  int pi_power = 0;
  std::map<BilinearKey, Rational> entries;

  Rational entry(const MultiIndex& a, const MultiIndex& b) const {
    auto it = entries.find(BilinearKey{a, b});
    return it == entries.end() ? Rational(0) : it->second;
  }
};

/* Taylor-expansion pipeline for the flat residue pairing on middle-degree
 * forms.  Expand psi(xi + u, xi + v), keep the stratum |gamma| + |delta|
 * = n with gamma != 0 != delta, integrate each coefficient over the
 * sphere, and distribute (u + v)^gamma binomially onto derivative slots
 * with a nonzero left factor:
 *
 *   entry(beta, gamma - beta + delta)
 *       += C(gamma, beta) * integral(c_(gamma, delta)).
 */
inline BilinearForm taylor_omega_coefficients(int n, SphereConvention conv) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("taylor_omega_coefficients: need even n >= 2");
  const UVSeries psi = psi_shift_series(n, n / 2, n);

  BilinearForm out;
  out.dim = n;
  out.convention = conv;
  out.pi_power = (conv == SphereConvention::surface_area) ? n / 2 : 0;
  for (int g = 1; g <= n - 1; ++g)
    for (const MultiIndex& gamma : multiindices_of_order(n, g))
      for (const MultiIndex& delta : multiindices_of_order(n, n - g)) {
        const HomogeneousRational c = psi.coeff(gamma, delta);
        if (c.is_zero()) continue;
        const SphereValue w = integrate_on_sphere(c, conv);
        if (w.value.is_zero()) continue;
        for (const LeibnizTerm& split : leibniz_splits(gamma)) {
          if (split.left.order() == 0) continue;
          const BilinearKey key{split.left, split.right + delta};
          auto it = out.entries.emplace(key, Rational(0)).first;
          it->second += w.value * split.coeff;
          if (it->second.is_zero()) out.entries.erase(it);
        }
      }
  return out;
}

}  // namespace wres

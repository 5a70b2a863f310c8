#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wres/random.hpp"
#include "wres/sphere.hpp"
#include "wres/symbol.hpp"

namespace wres {

/* ------------------------------------------------------------------ */
/*  Residue density of a symbol matrix                                 */
/* ------------------------------------------------------------------ */

/* Sphere integral of the matrix trace of a single-order symbol, split
 * into real and imaginary x-polynomials plus the common power of pi
 * contributed by the chosen sphere convention. */
struct ResidueDensity {
  Polynomial re, im;
  int pi_power = 0;

  explicit ResidueDensity(int dim, int pi = 0)
      : re(dim, VarSpace::x), im(dim, VarSpace::x), pi_power(pi) {}
};

inline ResidueDensity wres_density(const SymbolMatrix& sigma, SphereConvention conv) {
  const int n = sigma.dim();
  ResidueDensity out(n, conv == SphereConvention::surface_area ? n / 2 : 0);
  const SymbolValue tr = sigma.trace();
  for (const auto& [key, h] : tr.terms()) {
    const SphereValue w = integrate_on_sphere(h, conv);
    if (w.value.is_zero()) continue;
    Polynomial& dst = (key.ibit == 0) ? out.re : out.im;
    dst += Polynomial::monomial(key.xdeg, w.value, VarSpace::x);
  }
  return out;
}

/* ------------------------------------------------------------------ */
/*  Direct pipeline: full symbol composition                           */
/* ------------------------------------------------------------------ */

/* Commutators [F, x^a] are shared between many slot pairs; memoize them
 * per exponent. */
class CommutatorCache {
 public:
  explicit CommutatorCache(const SymbolExpansion& sign_op) : f_(sign_op) {}

  const SymbolExpansion& get(const MultiIndex& a) {
    auto it = cache_.find(a);
    if (it == cache_.end()) {
      const Polynomial mono = Polynomial::monomial(a, 1, VarSpace::x);
      it = cache_.emplace(a, commutator_with_function(f_, mono)).first;
    }
    return it->second;
  }

  /* sigma_(-n) of the product [F, x^a][F, x^b], n = dimension. */
  SymbolMatrix product_term(const MultiIndex& a, const MultiIndex& b) {
    const int n = f_.dim();
    return compose(get(a), get(b), -n).term(-n);
  }

 private:
  SymbolExpansion f_;
  std::map<MultiIndex, SymbolExpansion> cache_;
};

/* Full composition pipeline.  For every slot pair (a, b) with
 * |a|, |b| >= 1 and |a| + |b| = n, compute sigma_(-n)([F, x^a][F, x^b]),
 * integrate its trace over the sphere, and read the coefficient off the
 * constant term of the (necessarily real) density:
 *
 *   entry(a, b) = (-1)^(n/2) * density(0) / (a! b!).
 */
inline BilinearForm direct_omega_coefficients(int n, SphereConvention conv) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("direct_omega_coefficients: need even n >= 2");
  CommutatorCache comm(sign_symbol_expansion(n, n / 2));
  const Rational sign((n / 2) % 2 == 0 ? 1 : -1);

  BilinearForm out;
  out.dim = n;
  out.convention = conv;
  out.pi_power = (conv == SphereConvention::surface_area) ? n / 2 : 0;
  for (int ka = 1; ka <= n - 1; ++ka)
    for (const MultiIndex& a : multiindices_of_order(n, ka))
      for (const MultiIndex& b : multiindices_of_order(n, n - ka)) {
        const ResidueDensity rho = wres_density(comm.product_term(a, b), conv);
        if (!rho.im.is_zero())
          throw std::logic_error("direct_omega_coefficients: density has an imaginary part");
        const Rational c0 = rho.re.coeff(MultiIndex(n));
        if (c0.is_zero()) continue;
        const Integer fab = a.factorial() * b.factorial();
        out.entries.emplace(BilinearKey{a, b}, c0 * sign / Rational(fab));
      }
  return out;
}

/* Residue density a coefficient table predicts for monomial slot entries
 * f = x^a, h = x^b.  Entries multiply D-derivatives D^(a') f D^(b') h
 * with |a'| + |b'| = n, so the i-powers collapse to a global (-1)^(n/2)
 * and the density is real:
 *
 *   (-1)^(n/2) * sum entry(a', b') partial^(a') x^a partial^(b') x^b.
 */
inline Polynomial predicted_monomial_density(const BilinearForm& table,
                                             const MultiIndex& a, const MultiIndex& b) {
  const int n = table.dim;
  const Rational sign((n / 2) % 2 == 0 ? 1 : -1);
  Polynomial out(n, VarSpace::x);
  for (const auto& [key, val] : table.entries) {
    if (!a.contains(key.a) || !b.contains(key.b)) continue;
    const Integer fa = a.factorial(), ra = (a - key.a).factorial();
    const Integer fb = b.factorial(), rb = (b - key.b).factorial();
    const Rational c =
        val * sign * Rational(fa) / Rational(ra) * Rational(fb) / Rational(rb);
    out += Polynomial::monomial((a - key.a) + (b - key.b), c, VarSpace::x);
  }
  return out;
}

/* ------------------------------------------------------------------ */
/*  Direct pipeline: derivative traces of the pair trace               */
/* ------------------------------------------------------------------ */

/* Rational function  num(xi, eta) / (|xi|^(2p) |eta|^(2q))  on a product
 * of two copies of R^n; variables 0..n-1 are xi, n..2n-1 are eta.  Used
 * to differentiate the pair trace  psi(xi, eta) = tr(sigma(xi) sigma(eta))
 * symbolically before restricting to the diagonal eta = xi.  No
 * cancellation of pole powers is attempted; orders stay small. */
class BiPoleRational {
 public:
  BiPoleRational(int dim, Polynomial num, int p, int q)
      : dim_(dim), num_(std::move(num)), p_(p), q_(q) {
    if (dim_ <= 0 || p_ < 0 || q_ < 0)
      throw std::invalid_argument("BiPoleRational: bad parameters");
    if (num_.nvars() != 2 * dim_)
      throw std::invalid_argument("BiPoleRational: numerator needs 2*dim variables");
  }

  /* tr(sigma(xi) sigma(eta)) = (a <xi,eta>^2 + b |xi|^2 |eta|^2) / (|xi|^2 |eta|^2)
   * for the leading symbol on degree-m forms. */
  static BiPoleRational pair_trace(int n, int m) {
    const TracePair tp = trace_pair(n, m);
    Polynomial inner(2 * n, VarSpace::product);
    Polynomial qxi(2 * n, VarSpace::product), qeta(2 * n, VarSpace::product);
    for (int i = 0; i < n; ++i) {
      const Polynomial x = Polynomial::variable(i, 2 * n, VarSpace::product);
      const Polynomial y = Polynomial::variable(n + i, 2 * n, VarSpace::product);
      inner += x * y;
      qxi += x * x;
      qeta += y * y;
    }
    return {n, inner * inner * Rational(tp.a) + qxi * qeta * Rational(tp.b), 1, 1};
  }

  int dim() const { return dim_; }
  const Polynomial& numerator() const { return num_; }
  int xi_pole() const { return p_; }
  int eta_pole() const { return q_; }

  /* d/dv with v in [0, 2*dim); quotient rule against the block norm. */
  BiPoleRational partial(int v) const {
    const bool xi_side = v < dim_;
    const int pole = xi_side ? p_ : q_;
    const Polynomial var = Polynomial::variable(v, 2 * dim_, VarSpace::product);
    Polynomial block(2 * dim_, VarSpace::product);
    const int base = xi_side ? 0 : dim_;
    for (int i = 0; i < dim_; ++i) {
      const Polynomial w = Polynomial::variable(base + i, 2 * dim_, VarSpace::product);
      block += w * w;
    }
    Polynomial num = num_.partial(v) * block - var * num_ * Rational(2 * pole);
    return xi_side ? BiPoleRational(dim_, std::move(num), p_ + 1, q_)
                   : BiPoleRational(dim_, std::move(num), p_, q_ + 1);
  }

  /* Substitute eta = xi and fold onto a single-block rational. */
  HomogeneousRational restrict_diagonal() const {
    Polynomial folded(dim_, VarSpace::xi);
    for (const auto& [m, c] : num_.terms())
      folded += Polynomial::monomial(m.slice(0, dim_) + m.slice(dim_, dim_), c, VarSpace::xi);
    return {std::move(folded), p_ + q_};
  }

 private:
  int dim_;
  Polynomial num_;
  int p_, q_;
};

namespace detail {

/* Depth-first enumeration of sphere integrals
 *   T(gamma, delta) = integral of [partial_xi^gamma partial_eta^delta psi](xi, xi)
 * over all |gamma| + |delta| = n with both orders >= 1, reusing each
 * parent derivative along non-decreasing variable chains. */
struct PairTraceWalker {
  int n;
  SphereConvention conv;
  std::map<std::pair<MultiIndex, MultiIndex>, Rational>& table;

  void eta_walk(const BiPoleRational& cur, const MultiIndex& gamma,
                const MultiIndex& delta, int remaining, int min_var) {
    if (remaining == 0) {
      const SphereValue w = integrate_on_sphere(cur.restrict_diagonal(), conv);
      if (!w.value.is_zero()) table.emplace(std::make_pair(gamma, delta), w.value);
      return;
    }
    for (int i = min_var; i < n; ++i)
      eta_walk(cur.partial(n + i), gamma, delta.bump(i), remaining - 1, i);
  }

  void xi_walk(const BiPoleRational& cur, const MultiIndex& gamma, int min_var) {
    const int g = gamma.order();
    if (g >= 1) eta_walk(cur, gamma, MultiIndex(n), n - g, 0);
    if (g >= n - 1) return;
    for (int i = min_var; i < n; ++i) xi_walk(cur.partial(i), gamma.bump(i), i);
  }
};

}  // namespace detail

/* Derivative-trace pipeline.  With T(gamma, delta) the integrated traces
 * above (so T(gamma, delta) = integral of tr(partial^gamma sigma *
 * partial^delta sigma)), the product expansion regroups to
 *
 *   entry(a, b) = sum over splits b = alpha + delta with |delta| >= 1 of
 *                 T(a + alpha, delta) / (a! alpha! delta!).
 *
 * Same target as direct_omega_coefficients but without materializing
 * matrix compositions, so it stays cheap in higher dimension; the routes
 * are compared in crosscheck_pipelines. */
inline BilinearForm trace_omega_coefficients(int n, SphereConvention conv) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("trace_omega_coefficients: need even n >= 2");
  std::map<std::pair<MultiIndex, MultiIndex>, Rational> T;
  detail::PairTraceWalker walker{n, conv, T};
  walker.xi_walk(BiPoleRational::pair_trace(n, n / 2), MultiIndex(n), 0);

  BilinearForm out;
  out.dim = n;
  out.convention = conv;
  out.pi_power = (conv == SphereConvention::surface_area) ? n / 2 : 0;
  for (int ka = 1; ka <= n - 1; ++ka)
    for (const MultiIndex& a : multiindices_of_order(n, ka)) {
      const Integer afact = a.factorial();
      for (const MultiIndex& b : multiindices_of_order(n, n - ka)) {
        Rational val(0);
        for (const LeibnizTerm& split : leibniz_splits(b)) {
          if (split.right.order() == 0) continue;
          const auto it = T.find(std::make_pair(a + split.left, split.right));
          if (it == T.end()) continue;
          const Integer den = afact * split.left.factorial() * split.right.factorial();
          val += it->second / Rational(den);
        }
        if (!val.is_zero()) out.entries.emplace(BilinearKey{a, b}, val);
      }
    }
  return out;
}

/* ------------------------------------------------------------------ */
/*  Cross-check between the pipelines                                  */
/* ------------------------------------------------------------------ */

struct CrosscheckReport {
  int dim = 0;
  bool ok = true;
  int table_entries = 0;  // size of the series-pipeline table
  int pairs_checked = 0;  // slot pairs recomputed by full composition
  std::vector<std::string> failures;

  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

namespace detail {

inline std::string pair_label(const MultiIndex& a, const MultiIndex& b) {
  return "(" + a.to_string() + " | " + b.to_string() + ")";
}

inline void compare_tables(CrosscheckReport& rep, const std::string& label,
                           const BilinearForm& expected, const BilinearForm& got) {
  for (const auto& [k, v] : expected.entries)
    if (got.entry(k.a, k.b) != v)
      rep.fail(label + " entry " + pair_label(k.a, k.b) + ": expected " + v.to_string() +
               ", got " + got.entry(k.a, k.b).to_string());
  for (const auto& [k, v] : got.entries)
    if (expected.entry(k.a, k.b).is_zero())
      rep.fail(label + " extra entry " + pair_label(k.a, k.b) + " = " + v.to_string());
}

}  // namespace detail

/* Compare the Taylor-expansion table against the direct pipelines.
 *
 * Always: the derivative-trace route must reproduce the table entry by
 * entry.  For n <= 4 every slot pair additionally goes through full
 * symbol composition and the whole residue density (not just the
 * constant term) is matched against the table's prediction; for larger
 * n, `spot_pairs` seeded pairs take that full route. */
inline CrosscheckReport crosscheck_pipelines(int n, int spot_pairs = 0, uint64_t seed = 1) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("crosscheck_pipelines: need even n >= 2");
  CrosscheckReport rep;
  rep.dim = n;

  const BilinearForm series = taylor_omega_coefficients(n, SphereConvention::mass_one);
  rep.table_entries = static_cast<int>(series.entries.size());

  const BilinearForm traced = trace_omega_coefficients(n, SphereConvention::mass_one);
  detail::compare_tables(rep, "derivative-trace", series, traced);

  std::vector<std::pair<MultiIndex, MultiIndex>> pairs;
  if (n <= 4) {
    for (int ka = 1; ka <= n - 1; ++ka)
      for (const MultiIndex& a : multiindices_of_order(n, ka))
        for (const MultiIndex& b : multiindices_of_order(n, n - ka))
          pairs.emplace_back(a, b);
  } else if (spot_pairs > 0) {
    SplitMix64 rng(seed);
    std::set<std::pair<MultiIndex, MultiIndex>> seen;
    int attempts = 0;
    while (static_cast<int>(pairs.size()) < spot_pairs && attempts < 20 * spot_pairs) {
      ++attempts;
      const int ka = static_cast<int>(rng.range(1, n - 1));
      const MultiIndex a = rng.pick(multiindices_of_order(n, ka));
      const MultiIndex b = rng.pick(multiindices_of_order(n, n - ka));
      if (seen.emplace(a, b).second) pairs.emplace_back(a, b);
    }
  }

  CommutatorCache comm(sign_symbol_expansion(n, n / 2));
  const Rational sign((n / 2) % 2 == 0 ? 1 : -1);
  BilinearForm composed;
  composed.dim = n;
  for (const auto& [a, b] : pairs) {
    const ResidueDensity rho = wres_density(comm.product_term(a, b), SphereConvention::mass_one);
    if (!rho.im.is_zero())
      rep.fail("density " + detail::pair_label(a, b) + " has an imaginary part");
    const Polynomial want = predicted_monomial_density(series, a, b);
    if (rho.re != want)
      rep.fail("density " + detail::pair_label(a, b) + ": composition gives " +
               rho.re.to_string() + ", table predicts " + want.to_string());
    const Rational c0 = rho.re.coeff(MultiIndex(n));
    if (!c0.is_zero()) {
      const Integer fab = a.factorial() * b.factorial();
      composed.entries.emplace(BilinearKey{a, b}, c0 * sign / Rational(fab));
    }
    ++rep.pairs_checked;
  }
  // With every slot pair covered the loop rebuilds the whole table.
  if (n <= 4) detail::compare_tables(rep, "full-composition", series, composed);
  return rep;
}

}  // namespace wres

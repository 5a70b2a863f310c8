#pragma once

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wres/exterior.hpp"
#include "wres/homogeneous_rational.hpp"
#include "wres/multiindex.hpp"
#include "wres/polynomial.hpp"
#include "wres/rational.hpp"

namespace wres {

/* One x-monomial slot of a symbol value: x^xdeg times i^ibit.  Powers of
 * i are canonicalized to ibit in {0, 1}, with i^2 = -1 folded into the
 * sign of the coefficient. */
struct XTermKey {
  MultiIndex xdeg;
  int ibit = 0;

  bool operator<(const XTermKey& o) const {
    if (xdeg < o.xdeg) return true;
    if (o.xdeg < xdeg) return false;
    return ibit < o.ibit;
  }
  bool operator==(const XTermKey& o) const { return xdeg == o.xdeg && ibit == o.ibit; }
};

/* Scalar symbol: a finite sum  sum_a x^a i^(e_a) h_a(xi)  with each h_a a
 * homogeneous rational function of xi.  This is the entry type of symbol
 * matrices; x and xi live in the same dimension. */
class SymbolValue {
 public:
  using TermMap = std::map<XTermKey, HomogeneousRational>;

  explicit SymbolValue(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("SymbolValue: dimension must be positive");
  }

  /* Pure function of xi. */
  static SymbolValue xi_function(const HomogeneousRational& h) {
    SymbolValue s(h.dim());
    s.add_term(MultiIndex(h.dim()), 0, h);
    return s;
  }

  /* Polynomial of x alone, optionally times a power of i. */
  static SymbolValue x_function(const Polynomial& f, long ipow = 0) {
    SymbolValue s(f.nvars());
    for (const auto& [m, c] : f.terms())
      s.add_term(m, ipow, HomogeneousRational::constant(c, f.nvars()));
    return s;
  }

  static SymbolValue constant(const Rational& c, int dim) {
    return xi_function(HomogeneousRational::constant(c, dim));
  }

  int dim() const { return dim_; }
  bool is_zero() const { return t_.empty(); }
  const TermMap& terms() const { return t_; }

  /* Accumulate x^xdeg i^ipow h, canonicalizing the i-power. */
  void add_term(const MultiIndex& xdeg, long ipow, const HomogeneousRational& h) {
    if (h.is_zero()) return;
    if (xdeg.dim() != dim_ || h.dim() != dim_)
      throw std::invalid_argument("SymbolValue: dimension mismatch in term");
    const long e = ((ipow % 4) + 4) % 4;
    const HomogeneousRational signed_h = (e >= 2) ? -h : h;
    const XTermKey key{xdeg, static_cast<int>(e & 1)};
    auto it = t_.find(key);
    if (it == t_.end()) {
      t_.emplace(key, signed_h);
    } else {
      it->second += signed_h;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  SymbolValue operator-() const {
    SymbolValue s(dim_);
    for (const auto& [k, h] : t_) s.t_.emplace(k, -h);
    return s;
  }

  SymbolValue operator+(const SymbolValue& o) const {
    require_dim(o);
    SymbolValue s(*this);
    for (const auto& [k, h] : o.t_) s.add_term(k.xdeg, k.ibit, h);
    return s;
  }
  SymbolValue operator-(const SymbolValue& o) const { return *this + (-o); }
  SymbolValue& operator+=(const SymbolValue& o) { return *this = *this + o; }
  SymbolValue& operator-=(const SymbolValue& o) { return *this = *this - o; }

  SymbolValue operator*(const SymbolValue& o) const {
    require_dim(o);
    SymbolValue s(dim_);
    for (const auto& [k1, h1] : t_)
      for (const auto& [k2, h2] : o.t_)
        s.add_term(k1.xdeg + k2.xdeg, k1.ibit + k2.ibit, h1 * h2);
    return s;
  }
  SymbolValue& operator*=(const SymbolValue& o) { return *this = *this * o; }

  SymbolValue operator*(const Rational& c) const {
    SymbolValue s(dim_);
    if (c.is_zero()) return s;
    for (const auto& [k, h] : t_) s.t_.emplace(k, h * c);
    return s;
  }

  SymbolValue mul_i_power(long k) const {
    SymbolValue s(dim_);
    for (const auto& [key, h] : t_) s.add_term(key.xdeg, key.ibit + k, h);
    return s;
  }

  SymbolValue partial_xi(int i) const {
    SymbolValue s(dim_);
    for (const auto& [k, h] : t_) s.add_term(k.xdeg, k.ibit, h.partial_xi(i));
    return s;
  }

  SymbolValue partial_x(int i) const {
    SymbolValue s(dim_);
    for (const auto& [k, h] : t_)
      if (k.xdeg[i] > 0)
        s.add_term(k.xdeg.bump(i, -1), k.ibit, h * Rational(k.xdeg[i]));
    return s;
  }

  /* D_x^alpha = (-i)^|alpha| partial_x^alpha. */
  SymbolValue dx(int i) const { return partial_x(i).mul_i_power(3); }

  SymbolValue partial_xi_multi(const MultiIndex& alpha) const {
    SymbolValue s(*this);
    for (int i = 0; i < alpha.dim(); ++i)
      for (int k = 0; k < alpha[i]; ++k) s = s.partial_xi(i);
    return s;
  }

  SymbolValue dx_multi(const MultiIndex& alpha) const {
    SymbolValue s(*this);
    for (int i = 0; i < alpha.dim(); ++i)
      for (int k = 0; k < alpha[i]; ++k) s = s.partial_x(i);
    return s.mul_i_power(3 * alpha.order());
  }

  /* All nonzero xi-parts homogeneous of one net degree?  (Zero passes.) */
  bool has_uniform_net(int net) const {
    for (const auto& [k, h] : t_)
      if (h.net_degree() != net) return false;
    return true;
  }

  int max_x_degree() const {
    int d = 0;
    for (const auto& [k, h] : t_) d = std::max(d, k.xdeg.order());
    return d;
  }

  /* Value of the form c |xi|^(-2s) with no x-dependence and no i factor. */
  std::optional<std::pair<Rational, int>> as_radial_scalar() const {
    if (t_.empty()) return std::make_pair(Rational(0), 0);
    if (t_.size() != 1) return std::nullopt;
    const auto& [k, h] = *t_.begin();
    if (k.xdeg.order() != 0 || k.ibit != 0) return std::nullopt;
    return h.as_radial();
  }

  GaussianRational evaluate(const std::vector<Rational>& x,
                            const std::vector<Rational>& xi) const {
    GaussianRational out;
    for (const auto& [k, h] : t_) {
      Rational v = h.evaluate(xi);
      for (int i = 0; i < dim_; ++i)
        for (int p = 0; p < k.xdeg[i]; ++p) v = v * x.at(static_cast<size_t>(i));
      if (k.ibit == 0)
        out.re += v;
      else
        out.im += v;
    }
    return out;
  }

  bool operator==(const SymbolValue& o) const { return dim_ == o.dim_ && t_ == o.t_; }
  bool operator!=(const SymbolValue& o) const { return !(*this == o); }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [k, h] : t_) {
      if (!s.empty()) s += " + ";
      s += "x^" + k.xdeg.to_string();
      if (k.ibit) s += " i";
      s += " (" + h.to_string() + ")";
    }
    return s;
  }

 private:
  void require_dim(const SymbolValue& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("SymbolValue: dimension mismatch");
  }

  int dim_;
  TermMap t_;
};

inline SymbolValue operator*(const Rational& c, const SymbolValue& v) { return v * c; }

/* Matrix with SymbolValue entries; the single homogeneity order of a
 * symbol lives one level up, in SymbolExpansion. */
class SymbolMatrix {
 public:
  SymbolMatrix(int rows, int cols, int dim)
      : rows_(rows), cols_(cols), dim_(dim),
        e_(static_cast<size_t>(rows * cols), SymbolValue(dim)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("SymbolMatrix: negative shape");
  }

  static SymbolMatrix identity(int n, int dim) {
    SymbolMatrix m(n, n, dim);
    for (int i = 0; i < n; ++i) m.at(i, i) = SymbolValue::constant(1, dim);
    return m;
  }

  /* Entrywise promotion of a polynomial matrix: entry -> entry / |xi|^(2 pole). */
  static SymbolMatrix from_poly_matrix(const PolyMatrix& p, int pole) {
    SymbolMatrix m(p.rows(), p.cols(), p.nvars());
    for (int i = 0; i < p.rows(); ++i)
      for (int j = 0; j < p.cols(); ++j)
        if (!p.at(i, j).is_zero())
          m.at(i, j) = SymbolValue::xi_function(HomogeneousRational(p.at(i, j), pole));
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return dim_; }

  SymbolValue& at(int i, int j) { return e_.at(static_cast<size_t>(i * cols_ + j)); }
  const SymbolValue& at(int i, int j) const {
    return e_.at(static_cast<size_t>(i * cols_ + j));
  }

  SymbolMatrix operator+(const SymbolMatrix& o) const {
    require_shape(o.rows_, o.cols_);
    SymbolMatrix m(*this);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] += o.e_[i];
    return m;
  }
  SymbolMatrix operator-(const SymbolMatrix& o) const {
    require_shape(o.rows_, o.cols_);
    SymbolMatrix m(*this);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] -= o.e_[i];
    return m;
  }
  SymbolMatrix& operator+=(const SymbolMatrix& o) { return *this = *this + o; }
  SymbolMatrix& operator-=(const SymbolMatrix& o) { return *this = *this - o; }

  SymbolMatrix operator*(const SymbolMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("SymbolMatrix: shape mismatch in product");
    SymbolMatrix m(rows_, o.cols_, dim_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const SymbolValue& aik = at(i, k);
        if (aik.is_zero()) continue;
        for (int j = 0; j < o.cols_; ++j) {
          if (o.at(k, j).is_zero()) continue;
          m.at(i, j) += aik * o.at(k, j);
        }
      }
    return m;
  }

  SymbolMatrix operator*(const Rational& c) const { return map([&](const SymbolValue& v) { return v * c; }); }
  SymbolMatrix operator*(const SymbolValue& s) const {
    return map([&](const SymbolValue& v) { return v * s; });
  }

  SymbolMatrix mul_i_power(long k) const {
    return map([&](const SymbolValue& v) { return v.mul_i_power(k); });
  }
  SymbolMatrix partial_xi(int i) const {
    return map([&](const SymbolValue& v) { return v.partial_xi(i); });
  }
  SymbolMatrix partial_x(int i) const {
    return map([&](const SymbolValue& v) { return v.partial_x(i); });
  }
  SymbolMatrix dx(int i) const {
    return map([&](const SymbolValue& v) { return v.dx(i); });
  }
  SymbolMatrix partial_xi_multi(const MultiIndex& alpha) const {
    return map([&](const SymbolValue& v) { return v.partial_xi_multi(alpha); });
  }
  SymbolMatrix dx_multi(const MultiIndex& alpha) const {
    return map([&](const SymbolValue& v) { return v.dx_multi(alpha); });
  }

  SymbolValue trace() const {
    if (rows_ != cols_) throw std::invalid_argument("SymbolMatrix: trace of non-square matrix");
    SymbolValue t(dim_);
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : e_)
      if (!v.is_zero()) return false;
    return true;
  }

  bool has_uniform_net(int net) const {
    for (const auto& v : e_)
      if (!v.has_uniform_net(net)) return false;
    return true;
  }

  int max_x_degree() const {
    int d = 0;
    for (const auto& v : e_) d = std::max(d, v.max_x_degree());
    return d;
  }

  bool operator==(const SymbolMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const SymbolMatrix& o) const { return !(*this == o); }

  /* Gauss-Jordan inverse.  Pivots must be radial scalars c |xi|^(-2s);
   * matrices outside that reach (after row elimination) are rejected. */
  SymbolMatrix invert() const {
    if (rows_ != cols_) throw std::invalid_argument("SymbolMatrix: inverse of non-square matrix");
    SymbolMatrix a(*this), inv = identity(rows_, dim_);
    for (int col = 0; col < cols_; ++col) {
      int piv = -1;
      std::pair<Rational, int> rad;
      for (int r = col; r < rows_; ++r) {
        if (a.at(r, col).is_zero()) continue;
        const auto maybe = a.at(r, col).as_radial_scalar();
        if (maybe) {
          piv = r;
          rad = *maybe;
          break;
        }
      }
      if (piv < 0)
        throw std::domain_error("SymbolMatrix: no radial pivot available in column " +
                                std::to_string(col));
      if (piv != col) {
        a.swap_rows(piv, col);
        inv.swap_rows(piv, col);
      }
      const SymbolValue scale = SymbolValue::xi_function(
          HomogeneousRational::radial(Rational(1) / rad.first, -rad.second, dim_));
      a.scale_row(col, scale);
      inv.scale_row(col, scale);
      for (int r = 0; r < rows_; ++r) {
        if (r == col || a.at(r, col).is_zero()) continue;
        const SymbolValue f = a.at(r, col);
        a.sub_scaled_row(r, col, f);
        inv.sub_scaled_row(r, col, f);
      }
    }
    return inv;
  }

 private:
  template <typename Fn>
  SymbolMatrix map(Fn&& fn) const {
    SymbolMatrix m(rows_, cols_, dim_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = fn(e_[i]);
    return m;
  }

  void swap_rows(int r1, int r2) {
    for (int j = 0; j < cols_; ++j) std::swap(at(r1, j), at(r2, j));
  }
  void scale_row(int r, const SymbolValue& s) {
    for (int j = 0; j < cols_; ++j) at(r, j) *= s;
  }
  void sub_scaled_row(int r, int src, const SymbolValue& f) {
    for (int j = 0; j < cols_; ++j)
      if (!at(src, j).is_zero()) at(r, j) -= f * at(src, j);
  }

  void require_shape(int r, int c) const {
    if (r != rows_ || c != cols_) throw std::invalid_argument("SymbolMatrix: shape mismatch");
  }

  int rows_, cols_, dim_;
  std::vector<SymbolValue> e_;
};

/* Symbol expansion sigma_lead + sigma_(lead-1) + ...:  every order above
 * `lead` is identically zero, orders from `lead` down to `trunc` are
 * known (missing entries mean known-zero), and orders below `trunc` are
 * unknown.  trunc == kExactTrunc marks a finite, exact expansion. */
class SymbolExpansion {
 public:
  static constexpr int kExactTrunc = std::numeric_limits<int>::min() / 4;

  SymbolExpansion(int rows, int cols, int dim, int lead, int trunc)
      : rows_(rows), cols_(cols), dim_(dim), lead_(lead), trunc_(trunc) {
    if (trunc_ != kExactTrunc && trunc_ > lead_)
      throw std::invalid_argument("SymbolExpansion: truncation above leading order");
  }

  /* Exact single-order expansion. */
  static SymbolExpansion single(int order, const SymbolMatrix& m) {
    SymbolExpansion e(m.rows(), m.cols(), m.dim(), order, kExactTrunc);
    e.set_term(order, m);
    return e;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return dim_; }
  int lead() const { return lead_; }
  int trunc() const { return trunc_; }
  bool exact() const { return trunc_ == kExactTrunc; }
  const std::map<int, SymbolMatrix, std::greater<int>>& stored() const { return orders_; }

  void set_term(int k, const SymbolMatrix& m) {
    if (m.rows() != rows_ || m.cols() != cols_ || m.dim() != dim_)
      throw std::invalid_argument("SymbolExpansion: term shape mismatch");
    if (k > lead_)
      throw std::invalid_argument("SymbolExpansion: term above leading order");
    if (!exact() && k < trunc_)
      throw std::invalid_argument("SymbolExpansion: term below truncation order");
    if (!m.has_uniform_net(k))
      throw std::invalid_argument("SymbolExpansion: entries not homogeneous of order " +
                                  std::to_string(k));
    if (m.is_zero())
      orders_.erase(k);
    else
      orders_.insert_or_assign(k, m);
  }

  /* Known term at order k; zero matrix where the expansion is known to
   * vanish, out_of_range below the truncation. */
  SymbolMatrix term(int k) const {
    if (k > lead_) return SymbolMatrix(rows_, cols_, dim_);
    if (!exact() && k < trunc_)
      throw std::out_of_range("SymbolExpansion: order " + std::to_string(k) +
                              " lies below the truncation " + std::to_string(trunc_));
    auto it = orders_.find(k);
    if (it == orders_.end()) return SymbolMatrix(rows_, cols_, dim_);
    return it->second;
  }

  int min_stored() const { return orders_.empty() ? lead_ : orders_.rbegin()->first; }

  int max_x_degree() const {
    int d = 0;
    for (const auto& [k, m] : orders_) d = std::max(d, m.max_x_degree());
    return d;
  }

  bool is_zero() const { return orders_.empty(); }

 private:
  int rows_, cols_, dim_, lead_, trunc_;
  std::map<int, SymbolMatrix, std::greater<int>> orders_;
};

namespace detail {

inline int trunc_plus(int trunc, int shift) {
  return trunc == SymbolExpansion::kExactTrunc ? trunc : trunc + shift;
}

/* Lazy cache of iterated one-step derivatives of a matrix, keyed by
 * multi-index; `Step` maps (matrix, direction) to the derivative. */
template <typename Step>
class DerivCache {
 public:
  DerivCache(SymbolMatrix base, Step step) : step_(std::move(step)) {
    const int dim = base.dim();
    c_.emplace(MultiIndex(dim), std::move(base));
  }

  const SymbolMatrix& get(const MultiIndex& alpha) {
    auto it = c_.find(alpha);
    if (it != c_.end()) return it->second;
    int i = 0;
    while (alpha[i] == 0) ++i;
    const SymbolMatrix& prev = get(alpha.bump(i, -1));
    return c_.emplace(alpha, step_(prev, i)).first->second;
  }

 private:
  Step step_;
  std::map<MultiIndex, SymbolMatrix> c_;
};

inline auto xi_step() {
  return [](const SymbolMatrix& m, int i) { return m.partial_xi(i); };
}
inline auto dx_step() {
  return [](const SymbolMatrix& m, int i) { return m.dx(i); };
}

}  // namespace detail

/* Symbol of the operator product:
 *
 *   sigma(AB)_o = sum 1/alpha! (partial_xi^alpha sigma_A,k1)(D_x^alpha sigma_B,k2)
 *
 * over k1 - |alpha| + k2 = o.  The result is computed from its leading
 * order a.lead + b.lead down to the best truncation honestly supported by
 * the inputs, or only down to `floor` when a coarser tail suffices. */
inline SymbolExpansion compose(const SymbolExpansion& a, const SymbolExpansion& b,
                               int floor = SymbolExpansion::kExactTrunc) {
  if (a.cols() != b.rows() || a.dim() != b.dim())
    throw std::invalid_argument("compose: shape or dimension mismatch");
  const int dim = a.dim();
  const int lead = a.lead() + b.lead();
  int trunc = std::max(detail::trunc_plus(a.trunc(), b.lead()),
                       detail::trunc_plus(b.trunc(), a.lead()));
  trunc = std::max(trunc, floor);

  if (a.is_zero() || b.is_zero())
    return {a.rows(), b.cols(), dim, lead, trunc};

  // D_x^alpha annihilates b once |alpha| exceeds its x-degree, so an
  // exact-by-exact product terminates at a computable bottom order.
  const int xb = b.max_x_degree();
  const int natural_bottom = a.stored().rbegin()->first + b.stored().rbegin()->first - xb;
  const int lo = (trunc == SymbolExpansion::kExactTrunc) ? natural_bottom : trunc;

  SymbolExpansion out(a.rows(), b.cols(), dim, lead, trunc);
  std::map<int, detail::DerivCache<decltype(detail::xi_step())>> da;
  std::map<int, detail::DerivCache<decltype(detail::dx_step())>> db;
  for (const auto& [k, m] : a.stored()) da.emplace(k, decltype(da)::mapped_type(m, detail::xi_step()));
  for (const auto& [k, m] : b.stored()) db.emplace(k, decltype(db)::mapped_type(m, detail::dx_step()));

  for (int o = lead; o >= lo; --o) {
    SymbolMatrix acc(a.rows(), b.cols(), dim);
    for (auto& [k1, ca] : da)
      for (auto& [k2, cb] : db) {
        const int aord = k1 + k2 - o;
        if (aord < 0 || aord > xb) continue;
        for (const MultiIndex& alpha : multiindices_of_order(dim, aord)) {
          const SymbolMatrix& left = ca.get(alpha);
          if (left.is_zero()) continue;
          const SymbolMatrix& right = cb.get(alpha);
          if (right.is_zero()) continue;
          acc += (left * right) * (Rational(1) / Rational(alpha.factorial()));
        }
      }
    if (!acc.is_zero()) out.set_term(o, acc);
  }
  return out;
}

/* Commutator with a multiplication operator:  for a polynomial f(x),
 *
 *   sigma([S, f])_(k - |beta|) += 1/beta! (partial_xi^beta sigma_S,k) D_x^beta f,
 *
 * summed over |beta| >= 1.  Exact when S is exact; a commutator with a
 * constant vanishes identically regardless of truncation. */
inline SymbolExpansion commutator_with_function(const SymbolExpansion& S, const Polynomial& f) {
  const int dim = S.dim();
  if (f.nvars() != dim)
    throw std::invalid_argument("commutator_with_function: dimension mismatch");
  const int df = f.degree();
  if (df < 1)
    return {S.rows(), S.cols(), dim, S.lead() - 1, SymbolExpansion::kExactTrunc};

  const int trunc = detail::trunc_plus(S.trunc(), -1);
  SymbolExpansion out(S.rows(), S.cols(), dim, S.lead() - 1, trunc);
  std::map<int, SymbolMatrix> acc;
  for (const auto& [k, m] : S.stored()) {
    detail::DerivCache<decltype(detail::xi_step())> cache(m, detail::xi_step());
    for (int ob = 1; ob <= df; ++ob) {
      if (!out.exact() && k - ob < trunc) break;
      for (const MultiIndex& beta : multiindices_of_order(dim, ob)) {
        const Polynomial dfb = f.partial_multi(beta);
        if (dfb.is_zero()) continue;
        const SymbolMatrix& dm = cache.get(beta);
        if (dm.is_zero()) continue;
        const SymbolValue factor =
            SymbolValue::x_function(dfb * (Rational(1) / Rational(beta.factorial())), 3L * ob);
        auto it = acc.try_emplace(k - ob, SymbolMatrix(S.rows(), S.cols(), dim)).first;
        it->second += dm * factor;
      }
    }
  }
  for (const auto& [k, m] : acc) out.set_term(k, m);
  return out;
}

/* sigma_(-order) of [S, f][S, h]; throws out_of_range when S is not known
 * to enough negative orders to determine it. */
inline SymbolMatrix commutator_product_term(const SymbolExpansion& S, const Polynomial& f,
                                            const Polynomial& h, int order) {
  const SymbolExpansion cf = commutator_with_function(S, f);
  const SymbolExpansion ch = commutator_with_function(S, h);
  return compose(cf, ch, -order).term(-order);
}

/* Homogeneous symbols r_(-2), ..., r_(-depth) of a parametrix for an
 * order-2 operator with symbol p2 + p1 + p0, solved order by order from
 * sigma(P R) = 1.  p2 must be invertible with radial pivots; p2^(-1)
 * multiplies from the left throughout. */
inline SymbolExpansion parametrix_symbols(const SymbolMatrix& p2, const SymbolMatrix& p1,
                                          const SymbolMatrix& p0, int depth) {
  const int dim = p2.dim(), rank = p2.rows();
  if (p2.rows() != p2.cols()) throw std::invalid_argument("parametrix_symbols: p2 not square");
  for (const SymbolMatrix* p : {&p1, &p0})
    if (p->rows() != rank || p->cols() != rank || p->dim() != dim)
      throw std::invalid_argument("parametrix_symbols: component shape mismatch");
  if (!p2.has_uniform_net(2) || !p1.has_uniform_net(1) || !p0.has_uniform_net(0))
    throw std::invalid_argument("parametrix_symbols: wrong homogeneity orders");
  if (depth < 2) throw std::invalid_argument("parametrix_symbols: depth must be >= 2");

  const SymbolMatrix p2inv = p2.invert();
  std::vector<detail::DerivCache<decltype(detail::xi_step())>> dp;
  for (const SymbolMatrix* p : {&p0, &p1, &p2}) dp.emplace_back(*p, detail::xi_step());

  std::map<int, SymbolMatrix> r;
  std::map<int, detail::DerivCache<decltype(detail::dx_step())>> dr;
  r.emplace(-2, p2inv);
  dr.emplace(-2, decltype(dr)::mapped_type(p2inv, detail::dx_step()));

  for (int target = 3; target <= depth; ++target) {
    // Level -(target - 2) of sigma(P R) = 1: every contribution except
    // p2 r_(-target) is already known; solve for r_(-target).
    const int k = target - 2;
    SymbolMatrix acc(rank, rank, dim);
    for (int m = 2; m <= k + 1; ++m) {
      auto& rc = dr.at(-m);
      for (int j = 0; j <= 2; ++j) {
        const int aord = j + k - m;
        if (aord < 0) continue;
        for (const MultiIndex& alpha : multiindices_of_order(dim, aord)) {
          const SymbolMatrix& left = dp[static_cast<size_t>(j)].get(alpha);
          if (left.is_zero()) continue;
          const SymbolMatrix& right = rc.get(alpha);
          if (right.is_zero()) continue;
          acc += (left * right) * (Rational(1) / Rational(alpha.factorial()));
        }
      }
    }
    const SymbolMatrix rt = (p2inv * acc) * Rational(-1);
    r.emplace(-target, rt);
    dr.emplace(-target, decltype(dr)::mapped_type(rt, detail::dx_step()));
  }

  SymbolExpansion out(rank, rank, dim, -2, -depth);
  for (const auto& [k, m] : r) out.set_term(k, m);
  return out;
}

/* Order-2 numerator e(xi) i(xi) - i(xi) e(xi) on degree-m forms, as a
 * symbol matrix homogeneous of order 2. */
inline SymbolMatrix sign_symbol_numerator(int n, int m) {
  return SymbolMatrix::from_poly_matrix(f_symbol_numerator(n, m), 0);
}

/* Leading symbol of the conformal sign operator on degree-m forms:
 * (e(xi) i(xi) - i(xi) e(xi)) / |xi|^2, homogeneous of order 0. */
inline SymbolMatrix sign_leading_symbol(int n, int m) {
  return SymbolMatrix::from_poly_matrix(f_symbol_numerator(n, m), 1);
}

/* Flat sign operator as an exact one-term expansion: every lower-order
 * homogeneous component vanishes in the flat metric. */
inline SymbolExpansion sign_symbol_expansion(int n, int m) {
  return SymbolExpansion::single(0, sign_leading_symbol(n, m));
}

/* |xi|^2 times the identity: principal symbol of the flat Laplacian. */
inline SymbolMatrix laplace_principal(int n, int rank) {
  SymbolMatrix m(rank, rank, n);
  const SymbolValue q = SymbolValue::xi_function(HomogeneousRational::radial(1, -1, n));
  for (int i = 0; i < rank; ++i) m.at(i, i) = q;
  return m;
}

/* Sign-operator expansion computed the long way round, as numerator
 * composed with a Laplacian parametrix; known down to order -depth. */
inline SymbolExpansion sign_symbols_via_parametrix(int n, int m, int depth) {
  const int rank = FormBasis(n, m).size();
  const SymbolMatrix zero1(rank, rank, n);
  const SymbolExpansion inv =
      parametrix_symbols(laplace_principal(n, rank), zero1, zero1, depth + 2);
  return compose(SymbolExpansion::single(2, sign_symbol_numerator(n, m)), inv);
}

}  // namespace wres

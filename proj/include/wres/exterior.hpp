#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wres/polynomial.hpp"
#include "wres/rational.hpp"

namespace wres {

/* Basis of Lambda^m(R^n): strictly increasing m-subsets of {1..n} in
 * lexicographic order ((1,2) < (1,3) < (2,3) ...). */
class FormBasis {
 public:
  FormBasis(int n, int m) : n_(n), m_(m) {
    if (n < 0) throw std::invalid_argument("FormBasis: negative dimension");
    if (m >= 0 && m <= n) {
      std::vector<int> cur;
      build(1, cur);
    }  // out-of-range degree: empty basis (rank-0 space)
  }

  int n() const { return n_; }
  int degree() const { return m_; }
  int size() const { return static_cast<int>(subs_.size()); }
  const std::vector<int>& subset(int i) const { return subs_.at(static_cast<size_t>(i)); }

  int index_of(const std::vector<int>& s) const {
    auto it = std::lower_bound(subs_.begin(), subs_.end(), s);
    if (it == subs_.end() || *it != s) throw std::invalid_argument("FormBasis: unknown subset");
    return static_cast<int>(it - subs_.begin());
  }

 private:
  void build(int from, std::vector<int>& cur) {
    if (static_cast<int>(cur.size()) == m_) {
      subs_.push_back(cur);
      return;
    }
    for (int v = from; v <= n_; ++v) {
      cur.push_back(v);
      build(v + 1, cur);
      cur.pop_back();
    }
  }

  int n_, m_;
  std::vector<std::vector<int>> subs_;
};

/* Dense matrix of polynomials; used for the multilinear trace identities
 * where entries live in products of several covector spaces. */
class PolyMatrix {
 public:
  PolyMatrix(int rows, int cols, int nvars, VarSpace space = VarSpace::generic)
      : rows_(rows), cols_(cols), nvars_(nvars),
        e_(static_cast<size_t>(rows * cols), Polynomial(nvars, space)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("PolyMatrix: negative shape");
  }

  static PolyMatrix identity(int n, int nvars, VarSpace space = VarSpace::generic) {
    PolyMatrix m(n, n, nvars, space);
    for (int i = 0; i < n; ++i) m.at(i, i) = Polynomial::constant(1, nvars, space);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nvars() const { return nvars_; }

  Polynomial& at(int i, int j) { return e_.at(static_cast<size_t>(i * cols_ + j)); }
  const Polynomial& at(int i, int j) const { return e_.at(static_cast<size_t>(i * cols_ + j)); }

  PolyMatrix operator+(const PolyMatrix& o) const {
    require_shape(o.rows_, o.cols_);
    PolyMatrix m(*this);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] += o.e_[i];
    return m;
  }

  PolyMatrix operator-(const PolyMatrix& o) const {
    require_shape(o.rows_, o.cols_);
    PolyMatrix m(*this);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] -= o.e_[i];
    return m;
  }

  PolyMatrix operator*(const PolyMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("PolyMatrix: shape mismatch in product");
    PolyMatrix m(rows_, o.cols_, nvars_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Polynomial& aik = at(i, k);
        if (aik.is_zero()) continue;
        for (int j = 0; j < o.cols_; ++j) {
          if (o.at(k, j).is_zero()) continue;
          m.at(i, j) += aik * o.at(k, j);
        }
      }
    return m;
  }

  PolyMatrix operator*(const Rational& c) const {
    PolyMatrix m(*this);
    for (auto& p : m.e_) p = p * c;
    return m;
  }

  PolyMatrix transpose() const {
    PolyMatrix m(cols_, rows_, nvars_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
  }

  Polynomial trace() const {
    if (rows_ != cols_) throw std::invalid_argument("PolyMatrix: trace of non-square matrix");
    Polynomial t(nvars_);
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& p : e_)
      if (!p.is_zero()) return false;
    return true;
  }

  bool operator==(const PolyMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const PolyMatrix& o) const { return !(*this == o); }

 private:
  void require_shape(int r, int c) const {
    if (r != rows_ || c != cols_) throw std::invalid_argument("PolyMatrix: shape mismatch");
  }

  int rows_, cols_, nvars_;
  std::vector<Polynomial> e_;
};

/* Exterior multiplication e(xi): Lambda^m -> Lambda^(m+1).  Entry
 * (T, S) with T = S + {j} is (-1)^(position of j in T) xi_j, position
 * counted from zero.  `blocks`/`block` place the covector variable inside
 * a product of several n-dimensional spaces. */
inline PolyMatrix epsilon_matrix(int n, int m, int blocks = 1, int block = 0) {
  if (blocks < 1 || block < 0 || block >= blocks)
    throw std::invalid_argument("epsilon_matrix: bad block layout");
  const FormBasis dom(n, m), cod(n, m + 1);
  PolyMatrix e(cod.size(), dom.size(), blocks * n, VarSpace::generic);
  for (int s = 0; s < dom.size(); ++s) {
    const auto& S = dom.subset(s);
    for (int j = 1; j <= n; ++j) {
      if (std::binary_search(S.begin(), S.end(), j)) continue;
      std::vector<int> T(S);
      T.insert(std::upper_bound(T.begin(), T.end(), j), j);
      const int pos = static_cast<int>(std::lower_bound(T.begin(), T.end(), j) - T.begin());
      const Rational sign = (pos % 2 == 0) ? 1 : -1;
      e.at(cod.index_of(T), s) +=
          Polynomial::variable(block * n + (j - 1), blocks * n) * sign;
    }
  }
  return e;
}

/* Interior multiplication i(xi): Lambda^m -> Lambda^(m-1); the metric
 * adjoint of e(xi), i.e. the transpose of epsilon_matrix(n, m-1). */
inline PolyMatrix iota_matrix(int n, int m, int blocks = 1, int block = 0) {
  if (m <= 0 || m > n) {
    const FormBasis dom(n, m), cod(n, m - 1);
    return {cod.size(), dom.size(), blocks * n, VarSpace::generic};
  }
  return epsilon_matrix(n, m - 1, blocks, block).transpose();
}

/* |xi|^2 sigma_F on Lambda^m before dividing by |xi|^2:
 * e(xi) i(xi) - i(xi) e(xi). */
inline PolyMatrix f_symbol_numerator(int n, int m, int blocks = 1, int block = 0) {
  const int r = FormBasis(n, m).size();
  PolyMatrix out(r, r, blocks * n, VarSpace::generic);
  if (m >= 1) out = out + epsilon_matrix(n, m - 1, blocks, block) * iota_matrix(n, m, blocks, block);
  if (m < n)
    out = out - iota_matrix(n, m + 1, blocks, block) * epsilon_matrix(n, m, blocks, block);
  return out;
}

/* A(n, m) = C(n,m) - C(n,m-1) + ... +- C(n,0); zero for m < 0. */
inline Integer A_coefficient(int n, int m) {
  Integer a(0);
  for (int i = 0; i <= m; ++i) {
    const Integer term = binomial_int(n, m - i);
    a += (i % 2 == 0) ? term : -term;
  }
  return a;
}

/* tr(sigma_F(xi) sigma_F(eta)) on Lambda^m equals
 * (a <xi,eta>^2 + b |xi|^2 |eta|^2) / (|xi|^2 |eta|^2); this computes a, b
 * by brute-force trace over a two-block variable space and cross-checks
 * them against the closed binomial forms before returning. */
struct TracePair {
  int n = 0, m = 0;
  Integer a, b;  // a + b = C(n, m)
  Integer A;     // A(n, m)
};

inline TracePair trace_pair(int n, int m) {
  if (n < 2 || m < 0 || m > n) throw std::invalid_argument("trace_pair: need n >= 2, 0 <= m <= n");
  const PolyMatrix mf_xi = f_symbol_numerator(n, m, 2, 0);
  const PolyMatrix mf_eta = f_symbol_numerator(n, m, 2, 1);
  // Trace of the product without forming the full matrix.
  Polynomial tr(2 * n);
  for (int i = 0; i < mf_xi.rows(); ++i)
    for (int j = 0; j < mf_xi.cols(); ++j) {
      if (mf_xi.at(i, j).is_zero() || mf_eta.at(j, i).is_zero()) continue;
      tr += mf_xi.at(i, j) * mf_eta.at(j, i);
    }

  Polynomial inner(2 * n);  // <xi, eta>
  for (int i = 0; i < n; ++i)
    inner += Polynomial::variable(i, 2 * n) * Polynomial::variable(n + i, 2 * n);
  Polynomial norms(2 * n);  // |xi|^2 |eta|^2
  {
    Polynomial qa(2 * n), qb(2 * n);
    for (int i = 0; i < n; ++i) {
      qa += Polynomial::variable(i, 2 * n) * Polynomial::variable(i, 2 * n);
      qb += Polynomial::variable(n + i, 2 * n) * Polynomial::variable(n + i, 2 * n);
    }
    norms = qa * qb;
  }

  // Solve tr = a <xi,eta>^2 + b |xi|^2 |eta|^2 via two probe coefficients.
  MultiIndex probe_b(2 * n), probe_ab(2 * n);
  probe_b = probe_b.bump(0, 2).bump(n + 1, 2);   // xi_1^2 eta_2^2: only the b-term
  probe_ab = probe_ab.bump(0, 2).bump(n, 2);     // xi_1^2 eta_1^2: a + b
  const Rational b_rat = tr.coeff(probe_b);
  const Rational a_rat = tr.coeff(probe_ab) - b_rat;
  if (tr != inner * inner * a_rat + norms * b_rat)
    throw std::logic_error("trace_pair: trace does not fit the two-term ansatz");
  if (a_rat.denominator() != 1 || b_rat.denominator() != 1)
    throw std::logic_error("trace_pair: non-integer trace coefficients");

  TracePair out;
  out.n = n;
  out.m = m;
  out.a = a_rat.numerator();
  out.b = b_rat.numerator();
  out.A = A_coefficient(n, m);
  const Integer b_closed =
      binomial_int(n - 2, m - 2) + binomial_int(n - 2, m) - 2 * binomial_int(n - 2, m - 1);
  if (out.b != b_closed || out.a != binomial_int(n, m) - b_closed)
    throw std::logic_error("trace_pair: closed form disagrees with brute-force trace");
  return out;
}

/* tr sigma_F on Lambda^m as an integer (the |xi|^2-normalized trace). */
inline Integer f_symbol_trace(int n, int m) {
  const Polynomial tr = f_symbol_numerator(n, m).trace();
  const Polynomial q = Polynomial::norm_sq(n, VarSpace::generic);
  auto [quot, rem] = tr.divrem(q);
  if (!rem.is_zero() || quot.degree() > 0)
    throw std::logic_error("f_symbol_trace: trace is not a multiple of |xi|^2");
  const Rational c = quot.coeff(MultiIndex(n));
  if (c.denominator() != 1) throw std::logic_error("f_symbol_trace: non-integer trace");
  return c.numerator();
}

/* Four-argument quartic trace a_m(x1, x2, y1, y2) =
 * tr(e(x1) i(x2) e(y1) i(y2)) on Lambda^m, over a four-block space. */
inline Polynomial quartic_trace(int n, int m, int b1, int b2, int b3, int b4) {
  const PolyMatrix prod = epsilon_matrix(n, m - 1, 4, b1) * iota_matrix(n, m, 4, b2) *
                          epsilon_matrix(n, m - 1, 4, b3) * iota_matrix(n, m, 4, b4);
  return prod.trace();
}

/* Verify the recursion
 *   a_(m+1)(y1, x2, x1, y2) = a_m(x1, x2, y1, y2)
 *                             + <x1,x2><y1,y2> (2 A(n,m) - C(n,m))
 * for m = 1..m_max-1, with base a_1 = <y2,x1><x2,y1>.  Blocks are laid
 * out as (x1, x2, y1, y2). */
inline bool a_m_recursion_check(int n, int m_max) {
  const int nv = 4 * n;
  auto dot = [&](int ba, int bb) {
    Polynomial p(nv);
    for (int i = 0; i < n; ++i)
      p += Polynomial::variable(ba * n + i, nv) * Polynomial::variable(bb * n + i, nv);
    return p;
  };
  if (quartic_trace(n, 1, 0, 1, 2, 3) != dot(3, 0) * dot(1, 2)) return false;
  for (int m = 1; m + 1 <= m_max; ++m) {
    const Polynomial lhs = quartic_trace(n, m + 1, 2, 1, 0, 3);
    const Integer c = 2 * A_coefficient(n, m) - binomial_int(n, m);
    const Polynomial rhs =
        quartic_trace(n, m, 0, 1, 2, 3) + dot(0, 1) * dot(2, 3) * Rational(c);
    if (lhs != rhs) return false;
  }
  return true;
}

/* Sign of the permutation (S, complement of S) of (1..n). */
inline int complement_sign(const std::vector<int>& S, int n) {
  std::vector<int> perm(S);
  for (int v = 1; v <= n; ++v)
    if (!std::binary_search(S.begin(), S.end(), v)) perm.push_back(v);
  int inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

/* Matrix of the flat Hodge star Lambda^k -> Lambda^(n-k) (entries are
 * constants; returned over a zero-variable polynomial space). */
inline PolyMatrix hodge_star_matrix(int n, int k) {
  const FormBasis dom(n, k), cod(n, n - k);
  PolyMatrix star(cod.size(), dom.size(), 0);
  for (int s = 0; s < dom.size(); ++s) {
    const auto& S = dom.subset(s);
    std::vector<int> comp;
    for (int v = 1; v <= n; ++v)
      if (!std::binary_search(S.begin(), S.end(), v)) comp.push_back(v);
    star.at(cod.index_of(comp), s) =
        Polynomial::constant(complement_sign(S, n), 0);
  }
  return star;
}

/* Sign of e_S ^ e_R -> e_(S u R) for disjoint ascending index sets:
 * (-1)^(number of pairs s in S, r in R with s > r). */
inline int wedge_sign(const std::vector<int>& S, const std::vector<int>& R) {
  int cross = 0;
  for (int s : S)
    for (int r : R)
      if (s > r) ++cross;
  return cross % 2 == 0 ? 1 : -1;
}

/* Rescale the covector metric by a positive rational s (so <dx_i, dx_j>
 * becomes s delta_ij, with volume form s^(-n/2) dx_1..dx_n) and verify,
 * through the defining relation alpha ^ star beta = g_k(alpha, beta) vol
 * checked on every basis pair, that the rescaled star is exactly
 * s^((2k-n)/2) times the flat one.  At the middle degree k = n/2 this
 * exponent vanishes and the star is untouched by the rescaling. */
inline bool hodge_star_scaling(int n, int k, const Rational& scale) {
  if (n <= 0 || n % 2 != 0 || k < 0 || k > n)
    throw std::invalid_argument("hodge_star_scaling: need even n > 0 and 0 <= k <= n");
  if (!(scale > Rational(0)))
    throw std::invalid_argument("hodge_star_scaling: scale must be positive");
  const FormBasis dom(n, k), cod(n, n - k);
  const Rational vol = scale.pow(-n / 2);
  const PolyMatrix claimed = hodge_star_matrix(n, k) * scale.pow(k - n / 2);
  for (int s = 0; s < dom.size(); ++s) {
    const auto& S = dom.subset(s);
    std::vector<int> comp;
    for (int v = 1; v <= n; ++v)
      if (!std::binary_search(S.begin(), S.end(), v)) comp.push_back(v);
    const int comp_row = cod.index_of(comp);
    for (int t = 0; t < dom.size(); ++t) {
      // Only the complement component of star e_T can wedge against e_S.
      const Rational c = claimed.at(comp_row, t).coeff(MultiIndex(0));
      const Rational lhs = c * Rational(wedge_sign(S, comp));
      const Rational rhs = (s == t) ? scale.pow(k) * vol : Rational(0);
      if (lhs != rhs) return false;
    }
  }
  if (k == n / 2 && claimed != hodge_star_matrix(n, k)) return false;
  return true;
}

}  // namespace wres

#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wres/multiindex.hpp"
#include "wres/rational.hpp"

namespace wres {

/* Which set of variables a polynomial's exponents refer to.  Purely a
 * bookkeeping tag: mixing distinct non-generic spaces in one operation is
 * a usage bug and throws.  Product spaces (e.g. (xi, u) after a shift)
 * are tagged `product`; their coordinate layout is up to the caller. */
enum class VarSpace { generic, x, xi, u, v, product };

inline const char* var_space_name(VarSpace s) {
  switch (s) {
    case VarSpace::x: return "x";
    case VarSpace::xi: return "xi";
    case VarSpace::u: return "u";
    case VarSpace::v: return "v";
    case VarSpace::product: return "product";
    default: return "generic";
  }
}

/* Sparse multivariate polynomial with exact rational coefficients.
 * Invariants: no explicit zero terms; all keys share the ambient dimension. */
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  explicit Polynomial(int nvars, VarSpace space = VarSpace::generic)
      : nvars_(nvars), space_(space) {
    if (nvars < 0) throw std::invalid_argument("Polynomial: negative dimension");
  }

  static Polynomial constant(const Rational& c, int nvars, VarSpace space = VarSpace::generic) {
    Polynomial p(nvars, space);
    p.add_term(MultiIndex(nvars), c);
    return p;
  }

  static Polynomial monomial(const MultiIndex& m, const Rational& c,
                             VarSpace space = VarSpace::generic) {
    Polynomial p(m.dim(), space);
    p.add_term(m, c);
    return p;
  }

  static Polynomial variable(int i, int nvars, VarSpace space = VarSpace::generic) {
    return monomial(MultiIndex::unit(nvars, i), 1, space);
  }

  /* |xi|^2 = sum_i xi_i^2. */
  static Polynomial norm_sq(int nvars, VarSpace space = VarSpace::xi) {
    Polynomial p(nvars, space);
    for (int i = 0; i < nvars; ++i) p.add_term(MultiIndex(nvars).bump(i, 2), 1);
    return p;
  }

  int nvars() const { return nvars_; }
  VarSpace space() const { return space_; }
  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t term_count() const { return t_.size(); }

  Rational coeff(const MultiIndex& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Rational(0) : it->second;
  }

  /* Total degree; -1 for the zero polynomial. */
  int degree() const { return t_.empty() ? -1 : t_.rbegin()->first.order(); }

  bool is_homogeneous(int* deg = nullptr) const {
    if (t_.empty()) {
      if (deg) *deg = 0;
      return true;
    }
    const int d = t_.begin()->first.order();
    for (const auto& [m, c] : t_)
      if (m.order() != d) return false;
    if (deg) *deg = d;
    return true;
  }

  void add_term(const MultiIndex& m, const Rational& c) {
    if (m.dim() != nvars_) throw std::invalid_argument("Polynomial: term dimension mismatch");
    if (c.is_zero()) return;
    auto [it, fresh] = t_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  Polynomial operator-() const {
    Polynomial p(nvars_, space_);
    for (const auto& [m, c] : t_) p.t_.emplace(m, -c);
    return p;
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial p(nvars_, merged_space(o));
    p.t_ = t_;
    for (const auto& [m, c] : o.t_) p.add_term(m, c);
    return p;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }

  Polynomial operator*(const Polynomial& o) const {
    Polynomial p(nvars_, merged_space(o));
    for (const auto& [m1, c1] : t_)
      for (const auto& [m2, c2] : o.t_) p.add_term(m1 + m2, c1 * c2);
    return p;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial operator*(const Rational& c) const {
    Polynomial p(nvars_, space_);
    if (c.is_zero()) return p;
    for (const auto& [m, v] : t_) p.t_.emplace(m, v * c);
    return p;
  }

  Polynomial pow(unsigned e) const {
    Polynomial r = constant(1, nvars_, space_);
    Polynomial base(*this);
    for (; e > 0; e >>= 1) {
      if (e & 1) r *= base;
      base *= base;
    }
    return r;
  }

  Polynomial partial(int i) const {
    Polynomial p(nvars_, space_);
    for (const auto& [m, c] : t_)
      if (m[i] > 0) p.add_term(m.bump(i, -1), c * Rational(m[i]));
    return p;
  }

  Polynomial partial_multi(const MultiIndex& alpha) const {
    Polynomial p(*this);
    for (int i = 0; i < alpha.dim(); ++i)
      for (int k = 0; k < alpha[i]; ++k) p = p.partial(i);
    return p;
  }

  Rational evaluate(const std::vector<Rational>& pt) const {
    if (static_cast<int>(pt.size()) != nvars_)
      throw std::invalid_argument("Polynomial: evaluation point dimension mismatch");
    Rational sum(0);
    for (const auto& [m, c] : t_) {
      Rational v = c;
      for (int i = 0; i < nvars_; ++i)
        if (m[i] > 0) v *= pt[static_cast<size_t>(i)].pow(m[i]);
      sum += v;
    }
    return sum;
  }

  /* Substitute xi -> xi + u: returns a polynomial over the 2n product
   * space with the original block first and the shift block second. */
  Polynomial substitute_shift() const {
    Polynomial p(2 * nvars_, VarSpace::product);
    for (const auto& [m, c] : t_) {
      for (const auto& lt : leibniz_splits(m)) {
        // (xi+u)^m = sum_{b<=m} prod C(m_i,b_i) xi^b u^(m-b)
        p.add_term(lt.left.concat(lt.right), c * Rational(lt.coeff));
      }
    }
    return p;
  }

  /* Single-divisor multivariate division: *this = quot * d + rem where no
   * term of rem is divisible by the graded-lex leading term of d. */
  std::pair<Polynomial, Polynomial> divrem(const Polynomial& d) const {
    if (d.is_zero()) throw std::invalid_argument("Polynomial: division by zero polynomial");
    if (d.nvars_ != nvars_) throw std::invalid_argument("Polynomial: divisor dimension mismatch");
    const auto& lead = *d.t_.rbegin();
    Polynomial q(nvars_, space_), r(nvars_, space_), work(*this);
    while (!work.is_zero()) {
      const auto& top = *work.t_.rbegin();
      if (top.first.contains(lead.first)) {
        const MultiIndex shift = top.first - lead.first;
        const Rational factor = top.second / lead.second;
        q.add_term(shift, factor);
        work -= d * Polynomial::monomial(shift, factor, d.space_);
      } else {
        r.add_term(top.first, top.second);
        Polynomial w(nvars_, space_);
        w.t_ = TermMap(work.t_.begin(), std::prev(work.t_.end()));
        work = std::move(w);
      }
    }
    return {q, r};
  }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && t_ == o.t_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  std::string to_string(const std::string& var = "t") const {
    if (t_.empty()) return "0";
    std::string s;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      if (!s.empty()) s += " + ";
      s += it->second.to_string();
      for (int i = 0; i < nvars_; ++i)
        if (it->first[i] > 0) {
          s += "*" + var + std::to_string(i + 1);
          if (it->first[i] > 1) s += "^" + std::to_string(it->first[i]);
        }
    }
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
    return os << p.to_string();
  }

 private:
  VarSpace merged_space(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("Polynomial: dimension mismatch");
    if (space_ == VarSpace::generic) return o.space_;
    if (o.space_ == VarSpace::generic || o.space_ == space_) return space_;
    throw std::invalid_argument(std::string("Polynomial: variable-space mismatch (") +
                                var_space_name(space_) + " vs " + var_space_name(o.space_) + ")");
  }

  int nvars_;
  VarSpace space_;
  TermMap t_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

}  // namespace wres

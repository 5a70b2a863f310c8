#pragma once

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wres/rational.hpp"

namespace wres {

/* Derivative/monomial exponent vector over a fixed number of variables.
 * Ordered graded-lexicographically (total order first, then lex with the
 * first variable most significant), which makes xi_1^2 the leading term
 * of |xi|^2 wherever single-divisor division is performed. */
class MultiIndex {
 public:
  explicit MultiIndex(int dim) : e_(static_cast<size_t>(check_dim(dim)), 0) {}
  MultiIndex(std::initializer_list<int> init) : e_(init) { validate(); }
  explicit MultiIndex(std::vector<int> e) : e_(std::move(e)) { validate(); }

  static MultiIndex unit(int dim, int i) {
    MultiIndex m(dim);
    m.e_.at(static_cast<size_t>(i)) = 1;
    return m;
  }

  int dim() const { return static_cast<int>(e_.size()); }
  int order() const { return std::accumulate(e_.begin(), e_.end(), 0); }
  int operator[](int i) const { return e_.at(static_cast<size_t>(i)); }

  MultiIndex bump(int i, int by = 1) const {
    MultiIndex m(*this);
    m.e_.at(static_cast<size_t>(i)) += by;
    if (m.e_[static_cast<size_t>(i)] < 0)
      throw std::invalid_argument("MultiIndex: negative exponent");
    return m;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    require_same_dim(o);
    MultiIndex m(*this);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] += o.e_[i];
    return m;
  }

  /* Componentwise difference; requires o <= *this. */
  MultiIndex operator-(const MultiIndex& o) const {
    require_same_dim(o);
    MultiIndex m(*this);
    for (size_t i = 0; i < e_.size(); ++i) {
      m.e_[i] -= o.e_[i];
      if (m.e_[i] < 0) throw std::invalid_argument("MultiIndex: subtraction underflow");
    }
    return m;
  }

  bool contains(const MultiIndex& o) const {  // o <= *this componentwise
    require_same_dim(o);
    for (size_t i = 0; i < e_.size(); ++i)
      if (o.e_[i] > e_[i]) return false;
    return true;
  }

  bool is_zero() const { return order() == 0; }

  /* Graded-lex strict order. */
  bool operator<(const MultiIndex& o) const {
    require_same_dim(o);
    const int a = order(), b = o.order();
    if (a != b) return a < b;
    return std::lexicographical_compare(e_.begin(), e_.end(), o.e_.begin(), o.e_.end());
  }
  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
  bool operator!=(const MultiIndex& o) const { return e_ != o.e_; }

  /* alpha! = prod_i alpha_i! */
  Integer factorial() const {
    Integer r(1);
    for (int v : e_) r *= factorial_int(static_cast<unsigned long>(v));
    return r;
  }

  /* prod_i C(alpha_i, beta_i); the Leibniz weight of the split (beta, alpha-beta). */
  Integer binomial_product(const MultiIndex& beta) const {
    require_same_dim(beta);
    Integer r(1);
    for (size_t i = 0; i < e_.size(); ++i) r *= binomial_int(e_[i], beta.e_[i]);
    return r;
  }

  /* Concatenate exponent blocks (variable-space product). */
  MultiIndex concat(const MultiIndex& o) const {
    std::vector<int> e(e_);
    e.insert(e.end(), o.e_.begin(), o.e_.end());
    return MultiIndex(std::move(e));
  }

  /* Extract [from, from+len) as its own index. */
  MultiIndex slice(int from, int len) const {
    if (from < 0 || len < 0 || from + len > dim())
      throw std::invalid_argument("MultiIndex: bad slice");
    return MultiIndex(std::vector<int>(e_.begin() + from, e_.begin() + from + len));
  }

  const std::vector<int>& exponents() const { return e_; }

  std::string to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < e_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(e_[i]);
    }
    return s + ")";
  }

  friend std::ostream& operator<<(std::ostream& os, const MultiIndex& m) {
    return os << m.to_string();
  }

 private:
  static int check_dim(int dim) {
    if (dim < 0) throw std::invalid_argument("MultiIndex: negative dimension");
    return dim;
  }
  void validate() const {
    for (int v : e_)
      if (v < 0) throw std::invalid_argument("MultiIndex: negative exponent");
  }
  void require_same_dim(const MultiIndex& o) const {
    if (e_.size() != o.e_.size())
      throw std::invalid_argument("MultiIndex: dimension mismatch");
  }

  std::vector<int> e_;
};

struct LeibnizTerm {
  MultiIndex left, right;  // beta, alpha - beta
  Integer coeff;           // prod_i C(alpha_i, beta_i)
};

/* All splits alpha = beta + (alpha - beta) with their product-rule weights,
 * in graded-lex order of beta. */
inline std::vector<LeibnizTerm> leibniz_splits(const MultiIndex& alpha) {
  std::vector<MultiIndex> subs;
  MultiIndex cur(alpha.dim());
  std::function<void(int)> rec = [&](int pos) {
    if (pos == alpha.dim()) {
      subs.push_back(cur);
      return;
    }
    for (int v = 0; v <= alpha[pos]; ++v) {
      cur = cur.bump(pos, v);
      rec(pos + 1);
      cur = cur.bump(pos, -v);
    }
  };
  rec(0);
  std::sort(subs.begin(), subs.end());
  std::vector<LeibnizTerm> out;
  out.reserve(subs.size());
  for (const auto& b : subs) out.push_back({b, alpha - b, alpha.binomial_product(b)});
  return out;
}

/* Enumerate every multi-index of the given exact order (graded-lex sorted). */
inline std::vector<MultiIndex> multiindices_of_order(int dim, int order) {
  if (order < 0) return {};
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<size_t>(dim), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == dim - 1) {
      cur[static_cast<size_t>(pos)] = left;
      out.emplace_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[static_cast<size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  if (dim == 0) {
    if (order == 0) out.emplace_back(std::vector<int>{});
    return out;
  }
  rec(0, order);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<MultiIndex> multiindices_up_to_order(int dim, int max_order) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= max_order; ++k) {
    auto v = multiindices_of_order(dim, k);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

}  // namespace wres

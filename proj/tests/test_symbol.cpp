#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "wres/symbol.hpp"

using namespace wres;

namespace {

SymbolValue xv(const Polynomial& f, long ipow = 0) { return SymbolValue::x_function(f, ipow); }
SymbolValue hv(const Polynomial& num, int pole) {
  return SymbolValue::xi_function(HomogeneousRational(num, pole));
}

/* Random sum of (x-polynomial) * (homogeneous rational in xi) products
 * with every xi-part of one net degree. */
SymbolValue random_net_value(testutil::Rng& rng, int n, int net, int products) {
  SymbolValue v(n);
  for (int t = 0; t < products; ++t)
    v += xv(rng.polynomial(n, 2, 2, VarSpace::x)) *
         SymbolValue::xi_function(rng.homogeneous_rational(n, net, 1, 2));
  return v;
}

/* Upper-triangular order-2 symbol s_i |xi|^2 on the diagonal plus random
 * net-2 entries above it, together with full random lower-order parts. */
struct OperatorTriple {
  SymbolMatrix p2, p1, p0;
};

OperatorTriple random_operator_triple(testutil::Rng& rng, int n, int rank) {
  OperatorTriple t{SymbolMatrix(rank, rank, n), SymbolMatrix(rank, rank, n),
                   SymbolMatrix(rank, rank, n)};
  for (int i = 0; i < rank; ++i) {
    t.p2.at(i, i) =
        SymbolValue::xi_function(HomogeneousRational::radial(rng.nonzero_rational(), -1, n));
    for (int j = i + 1; j < rank; ++j) t.p2.at(i, j) = random_net_value(rng, n, 2, 1);
  }
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      t.p1.at(i, j) = random_net_value(rng, n, 1, 1);
      t.p0.at(i, j) = random_net_value(rng, n, 0, 1);
    }
  return t;
}

}  // namespace

TEST_CASE("symbol value arithmetic and i-power folding", "[symbol]") {
  const int n = 2;
  const SymbolValue one = SymbolValue::constant(1, n);
  CHECK(one.mul_i_power(2) == -one);
  CHECK(one.mul_i_power(4) == one);
  CHECK(one.mul_i_power(1) * one.mul_i_power(1) == -one);
  CHECK(one.mul_i_power(1) * one.mul_i_power(3) == one);

  const SymbolValue v = xv(Polynomial::variable(0, n, VarSpace::x), 1) *
                        hv(Polynomial::variable(0, n, VarSpace::xi), 1);
  // x_1 i xi_1/|xi|^2 at x = (2,3), xi = (1,2).
  const GaussianRational got = v.evaluate({Rational(2), Rational(3)}, {Rational(1), Rational(2)});
  CHECK(got == GaussianRational(Rational(0), Rational(2, 5)));

  const SymbolValue sq = xv(Polynomial::variable(0, n, VarSpace::x) *
                            Polynomial::variable(0, n, VarSpace::x));
  CHECK(sq.dx(0) == xv(Polynomial::variable(0, n, VarSpace::x) * Rational(2), 3));
  CHECK(sq.dx_multi(MultiIndex({2, 0})) == SymbolValue::constant(-2, n));
  CHECK(sq.partial_x(1).is_zero());
}

TEST_CASE("radial scalar detection", "[symbol]") {
  const int n = 3;
  CHECK(SymbolValue::xi_function(HomogeneousRational::radial(Rational(3, 2), -1, n))
            .as_radial_scalar() == std::make_pair(Rational(3, 2), -1));
  CHECK(SymbolValue(n).as_radial_scalar() == std::make_pair(Rational(0), 0));
  CHECK_FALSE(hv(Polynomial::variable(0, n, VarSpace::xi), 0).as_radial_scalar().has_value());
  CHECK_FALSE((xv(Polynomial::variable(0, n, VarSpace::x)) *
               SymbolValue::constant(1, n)).as_radial_scalar().has_value());
  CHECK_FALSE(SymbolValue::constant(1, n).mul_i_power(1).as_radial_scalar().has_value());
}

TEST_CASE("symbol matrix inversion with radial pivots", "[symbol]") {
  const int n = 2;
  const SymbolMatrix flat = laplace_principal(n, 3);
  CHECK(flat.invert() * flat == SymbolMatrix::identity(3, n));

  testutil::Rng rng(0x5eed1001u);
  for (int trial = 0; trial < 5; ++trial) {
    const OperatorTriple t = random_operator_triple(rng, n, 3);
    const SymbolMatrix inv = t.p2.invert();
    CHECK(inv * t.p2 == SymbolMatrix::identity(3, n));
    CHECK(t.p2 * inv == SymbolMatrix::identity(3, n));
  }

  SymbolMatrix bad(1, 1, n);
  bad.at(0, 0) = hv(Polynomial::variable(0, n, VarSpace::xi) *
                    Polynomial::variable(0, n, VarSpace::xi), 1);
  CHECK_THROWS_AS(bad.invert(), std::domain_error);
}

TEST_CASE("expansion order bookkeeping", "[symbol]") {
  const int n = 2;
  const SymbolExpansion f = sign_symbol_expansion(n, 1);
  CHECK(f.lead() == 0);
  CHECK(f.exact());
  CHECK(f.term(5).is_zero());
  CHECK(f.term(-7).is_zero());
  CHECK(f.term(0) == sign_leading_symbol(n, 1));

  SymbolExpansion truncated(1, 1, n, 0, -2);
  truncated.set_term(0, SymbolMatrix::identity(1, n));
  CHECK(truncated.term(-2).is_zero());
  CHECK_THROWS_AS(truncated.term(-3), std::out_of_range);
  CHECK_THROWS_AS(truncated.set_term(1, SymbolMatrix::identity(1, n)),
                  std::invalid_argument);
  // Net-degree validation: an order-1 slot cannot hold an order-0 value.
  SymbolExpansion wrong(1, 1, n, 1, -1);
  CHECK_THROWS_AS(wrong.set_term(1, SymbolMatrix::identity(1, n)), std::invalid_argument);
}

TEST_CASE("composition against operator identities", "[symbol]") {
  const int n = 2;
  // D_1 after multiplication by x_1: sigma = x_1 xi_1 - i.
  SymbolMatrix d1(1, 1, n);
  d1.at(0, 0) = hv(Polynomial::variable(0, n, VarSpace::xi), 0);
  SymbolMatrix mx(1, 1, n);
  mx.at(0, 0) = xv(Polynomial::variable(0, n, VarSpace::x));
  const SymbolExpansion prod =
      compose(SymbolExpansion::single(1, d1), SymbolExpansion::single(0, mx));
  CHECK(prod.exact());
  CHECK(prod.term(1) == d1 * mx.at(0, 0));
  SymbolMatrix minus_i(1, 1, n);
  minus_i.at(0, 0) = SymbolValue::constant(1, n).mul_i_power(3);
  CHECK(prod.term(0) == minus_i);
  CHECK(prod.term(-1).is_zero());

  // Multiplication operators compose pointwise.
  testutil::Rng rng(0x5eed1002u);
  const Polynomial f = rng.polynomial(n, 2, 3, VarSpace::x);
  const Polynomial g = rng.polynomial(n, 2, 3, VarSpace::x);
  SymbolMatrix fm(1, 1, n), gm(1, 1, n), fgm(1, 1, n);
  fm.at(0, 0) = xv(f);
  gm.at(0, 0) = xv(g);
  fgm.at(0, 0) = xv(f * g);
  const SymbolExpansion fg =
      compose(SymbolExpansion::single(0, fm), SymbolExpansion::single(0, gm));
  CHECK(fg.term(0) == fgm);
  CHECK(fg.term(-1).is_zero());
}

TEST_CASE("composition is associative", "[symbol]") {
  const int n = 2;
  auto single_value = [&](int order, const SymbolValue& v) {
    SymbolMatrix m(1, 1, n);
    m.at(0, 0) = v;
    return SymbolExpansion::single(order, m);
  };
  const SymbolExpansion a = single_value(
      1, xv(Polynomial::variable(0, n, VarSpace::x)) * hv(Polynomial::variable(0, n, VarSpace::xi), 0));
  const SymbolExpansion b = single_value(
      -1, xv(Polynomial::variable(1, n, VarSpace::x) * Polynomial::variable(1, n, VarSpace::x)) *
              hv(Polynomial::variable(1, n, VarSpace::xi), 1));
  const SymbolExpansion c = single_value(
      0, xv(Polynomial::variable(0, n, VarSpace::x) * Polynomial::variable(1, n, VarSpace::x)) *
             hv(Polynomial::variable(0, n, VarSpace::xi) * Polynomial::variable(1, n, VarSpace::xi), 1));
  const SymbolExpansion lhs = compose(compose(a, b), c);
  const SymbolExpansion rhs = compose(a, compose(b, c));
  CHECK(lhs.exact());
  CHECK(rhs.exact());
  for (int k = 0; k >= -8; --k) CHECK(lhs.term(k) == rhs.term(k));
}

TEST_CASE("commutator with a coordinate against derivative formulas", "[symbol]") {
  const int n = 2;
  const SymbolExpansion F = sign_symbol_expansion(n, 1);
  const Polynomial x1 = Polynomial::variable(0, n, VarSpace::x);

  const SymbolExpansion c = commutator_with_function(F, x1);
  CHECK(c.exact());
  CHECK(c.lead() == -1);
  // [F, x_1] at order -1 is  partial_xi_1(sigma) D_x_1(x_1) = -i partial_xi_1(sigma).
  CHECK(c.term(-1) == sign_leading_symbol(n, 1).partial_xi(0).mul_i_power(3));
  CHECK(c.term(-2).is_zero());

  CHECK(commutator_with_function(F, Polynomial::constant(7, n, VarSpace::x)).is_zero());

  const Polynomial x1sq = x1 * x1;
  const SymbolExpansion c2 = commutator_with_function(F, x1sq);
  CHECK(c2.term(-1) ==
        sign_leading_symbol(n, 1).partial_xi(0) * xv(x1 * Rational(2), 3));
  CHECK(c2.term(-2) ==
        sign_leading_symbol(n, 1).partial_xi(0).partial_xi(0) * Rational(-1));
  CHECK(c2.term(-3).is_zero());
}

TEST_CASE("commutator matches compose-based commutator", "[symbol]") {
  const int n = 2;
  testutil::Rng rng(0x5eed1003u);
  const SymbolExpansion S = sign_symbol_expansion(n, 1);
  for (int trial = 0; trial < 4; ++trial) {
    const Polynomial f = rng.polynomial(n, 2, 3, VarSpace::x);
    SymbolMatrix diag(2, 2, n);
    for (int i = 0; i < 2; ++i) diag.at(i, i) = xv(f);
    const SymbolExpansion fe = SymbolExpansion::single(0, diag);
    const SymbolExpansion direct = commutator_with_function(S, f);
    const SymbolExpansion left = compose(S, fe);
    const SymbolExpansion right = compose(fe, S);
    for (int k = 0; k >= -4; --k) CHECK(direct.term(k) == left.term(k) - right.term(k));
  }
}

TEST_CASE("squared leading symbol is the identity", "[symbol]") {
  for (int n = 2; n <= 4; n += 2)
    for (int m = 0; m <= n; ++m) {
      const SymbolMatrix s = sign_leading_symbol(n, m);
      CHECK(s * s == SymbolMatrix::identity(FormBasis(n, m).size(), n));
    }
}

TEST_CASE("flat parametrix and parametrix compose oracle", "[symbol]") {
  const int n = 2, rank = 2;
  const SymbolMatrix p2 = laplace_principal(n, rank);
  const SymbolMatrix zero(rank, rank, n);
  const SymbolExpansion r = parametrix_symbols(p2, zero, zero, 6);
  CHECK(r.lead() == -2);
  CHECK(r.trunc() == -6);
  CHECK(r.term(-2) == p2.invert());
  for (int k = -3; k >= -6; --k) CHECK(r.term(k).is_zero());

  testutil::Rng rng(0x5eed1004u);
  for (int trial = 0; trial < 3; ++trial) {
    const OperatorTriple t = random_operator_triple(rng, n, 2);
    const int depth = 4;
    const SymbolExpansion inv = parametrix_symbols(t.p2, t.p1, t.p0, depth);
    SymbolExpansion full(rank, rank, n, 2, SymbolExpansion::kExactTrunc);
    full.set_term(2, t.p2);
    full.set_term(1, t.p1);
    full.set_term(0, t.p0);
    const SymbolExpansion check = compose(full, inv);
    CHECK(check.trunc() == 2 - depth);
    CHECK(check.term(0) == SymbolMatrix::identity(rank, n));
    for (int k = -1; k >= 2 - depth; --k) CHECK(check.term(k).is_zero());
  }
}

TEST_CASE("sign operator recovered through the parametrix", "[symbol]") {
  const SymbolExpansion f = sign_symbols_via_parametrix(2, 1, 4);
  CHECK(f.lead() == 0);
  CHECK(f.trunc() == -4);
  CHECK(f.term(0) == sign_leading_symbol(2, 1));
  for (int k = -1; k >= -4; --k) CHECK(f.term(k).is_zero());
  CHECK_THROWS_AS(f.term(-5), std::out_of_range);
}

TEST_CASE("commutator product symbol at the residue order", "[symbol]") {
  const int n = 2;
  const SymbolExpansion F = sign_symbol_expansion(n, 1);
  const Polynomial x1 = Polynomial::variable(0, n, VarSpace::x);
  const Polynomial x2 = Polynomial::variable(1, n, VarSpace::x);
  const Polynomial xi1 = Polynomial::variable(0, n, VarSpace::xi);
  const Polynomial xi2 = Polynomial::variable(1, n, VarSpace::xi);

  // tr sigma_(-2)([F, x_1][F, x_1]) = -8 xi_2^2 / |xi|^4.
  CHECK(commutator_product_term(F, x1, x1, 2).trace() ==
        hv(xi2 * xi2 * Rational(-8), 2));
  // Mixed coordinates: +8 xi_1 xi_2 / |xi|^4.
  CHECK(commutator_product_term(F, x1, x2, 2).trace() == hv(xi1 * xi2 * Rational(8), 2));
  // Quadratic arguments pick up the x-dependence of the commutators:
  // tr sigma_(-2)([F, x_1^2][F, x_1^2]) = -32 x_1^2 xi_2^2 / |xi|^4.
  CHECK(commutator_product_term(F, x1 * x1, x1 * x1, 2).trace() ==
        xv(x1 * x1) * hv(xi2 * xi2 * Rational(-32), 2));

  // Not enough known orders: a truncated sign symbol cannot reach -4.
  SymbolExpansion shallow(2, 2, n, 0, -1);
  shallow.set_term(0, sign_leading_symbol(n, 1));
  CHECK_THROWS_AS(commutator_product_term(shallow, x1, x1, 4), std::out_of_range);
}

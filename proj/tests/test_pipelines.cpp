#include <catch2/catch_amalgamated.hpp>

#include "wres/pipelines.hpp"
#include "test_util.hpp"

using namespace wres;

namespace {

HomogeneousRational hv(const Polynomial& num, int pole) {
  return HomogeneousRational(num, pole);
}

Polynomial xi(int i, int n) { return Polynomial::variable(i, n, VarSpace::xi); }
Polynomial xm(int i, int n) { return Polynomial::variable(i, n, VarSpace::x); }

BilinearForm frozen_dim2_table() {
  BilinearForm t;
  t.dim = 2;
  t.convention = SphereConvention::mass_one;
  t.pi_power = 0;
  t.entries.emplace(BilinearKey{MultiIndex::unit(2, 0), MultiIndex::unit(2, 0)}, Rational(4));
  t.entries.emplace(BilinearKey{MultiIndex::unit(2, 1), MultiIndex::unit(2, 1)}, Rational(4));
  return t;
}

}  // namespace

TEST_CASE("sphere-integrated density of simple symbols", "[pipelines]") {
  SECTION("real part from an even trace") {
    // tr sigma_(-2)([F, x1][F, x1]) = -8 xi2^2 / |xi|^4 in dimension two;
    // the sphere average of xi2^2 is 1/2.
    CommutatorCache comm(sign_symbol_expansion(2, 1));
    const MultiIndex e1 = MultiIndex::unit(2, 0), e2 = MultiIndex::unit(2, 1);
    const ResidueDensity rho = wres_density(comm.product_term(e1, e1), SphereConvention::mass_one);
    CHECK(rho.re == Polynomial::constant(-4, 2, VarSpace::x));
    CHECK(rho.im.is_zero());
    CHECK(rho.pi_power == 0);

    // The cross term 8 xi1 xi2 / |xi|^4 averages to zero.
    const ResidueDensity cross = wres_density(comm.product_term(e1, e2), SphereConvention::mass_one);
    CHECK(cross.re.is_zero());
    CHECK(cross.im.is_zero());

    const ResidueDensity surf = wres_density(comm.product_term(e1, e1), SphereConvention::surface_area);
    CHECK(surf.re == Polynomial::constant(-8, 2, VarSpace::x));
    CHECK(surf.pi_power == 1);
  }

  SECTION("odd i-powers land in the imaginary part") {
    SymbolMatrix m(1, 1, 2);
    m.at(0, 0) = SymbolValue::x_function(xm(0, 2), 1) *
                 SymbolValue::xi_function(HomogeneousRational::radial(3, 1, 2));
    const ResidueDensity rho = wres_density(m, SphereConvention::mass_one);
    CHECK(rho.re.is_zero());
    CHECK(rho.im == xm(0, 2) * Rational(3));
  }
}

TEST_CASE("full composition table in dimension two", "[pipelines]") {
  const BilinearForm got = direct_omega_coefficients(2, SphereConvention::mass_one);
  const BilinearForm want = frozen_dim2_table();
  CHECK(got.dim == 2);
  CHECK(got.pi_power == 0);
  CHECK(got.entries == want.entries);

  const BilinearForm surf = direct_omega_coefficients(2, SphereConvention::surface_area);
  CHECK(surf.pi_power == 1);
  for (const auto& [k, v] : want.entries) CHECK(surf.entry(k.a, k.b) == v * Rational(2));
  CHECK(surf.entries.size() == want.entries.size());

  CHECK_THROWS_AS(direct_omega_coefficients(3, SphereConvention::mass_one), std::invalid_argument);
}

TEST_CASE("full composition matches the series table", "[pipelines]") {
  // Dimension two here; dimension four is covered pairwise (and at the
  // level of whole densities) by the cross-check report below.
  const BilinearForm series = taylor_omega_coefficients(2, SphereConvention::mass_one);
  const BilinearForm direct = direct_omega_coefficients(2, SphereConvention::mass_one);
  CHECK(direct.entries == series.entries);
}

TEST_CASE("pair-trace differentiation matches symbol derivatives", "[pipelines]") {
  // psi(xi, xi) is the constant tr(sigma^2) = C(n, m).
  CHECK(BiPoleRational::pair_trace(2, 1).restrict_diagonal() ==
        HomogeneousRational::constant(2, 2));
  CHECK(BiPoleRational::pair_trace(4, 2).restrict_diagonal() ==
        HomogeneousRational::constant(6, 4));

  SECTION("frozen first derivatives in dimension two") {
    const BiPoleRational psi = BiPoleRational::pair_trace(2, 1);
    // tr(d_i sigma d_j sigma) = 8 delta_ij / |xi|^2 - 8 xi_i xi_j / |xi|^4.
    CHECK(psi.partial(0).partial(2).restrict_diagonal() == hv(xi(1, 2) * xi(1, 2) * Rational(8), 2));
    CHECK(psi.partial(0).partial(3).restrict_diagonal() == hv(xi(0, 2) * xi(1, 2) * Rational(-8), 2));
  }

  SECTION("against matrix traces for low orders") {
    for (int n : {2, 4}) {
      const SymbolMatrix sigma = sign_leading_symbol(n, n / 2);
      const BiPoleRational psi = BiPoleRational::pair_trace(n, n / 2);
      for (int g = 1; g <= 2; ++g)
        for (const MultiIndex& gamma : multiindices_of_order(n, g))
          for (int d = 1; d <= 2; ++d)
            for (const MultiIndex& delta : multiindices_of_order(n, d)) {
              BiPoleRational cur = psi;
              for (int i = 0; i < n; ++i)
                for (int k = 0; k < gamma[i]; ++k) cur = cur.partial(i);
              for (int i = 0; i < n; ++i)
                for (int k = 0; k < delta[i]; ++k) cur = cur.partial(n + i);
              const SymbolValue tr =
                  (sigma.partial_xi_multi(gamma) * sigma.partial_xi_multi(delta)).trace();
              SymbolMatrix lift(1, 1, n);
              lift.at(0, 0) = SymbolValue::xi_function(cur.restrict_diagonal());
              INFO("n = " << n << ", gamma = " << gamma.to_string()
                          << ", delta = " << delta.to_string());
              CHECK(lift.trace() == tr);
            }
    }
  }
}

TEST_CASE("derivative-trace table matches the series table", "[pipelines]") {
  for (int n : {2, 4}) {
    const BilinearForm series = taylor_omega_coefficients(n, SphereConvention::mass_one);
    const BilinearForm traced = trace_omega_coefficients(n, SphereConvention::mass_one);
    INFO("n = " << n);
    CHECK(traced.entries == series.entries);
    CHECK(traced.dim == n);
  }
  const BilinearForm surf = trace_omega_coefficients(2, SphereConvention::surface_area);
  CHECK(surf.pi_power == 1);
  CHECK(surf.entry(MultiIndex::unit(2, 0), MultiIndex::unit(2, 0)) == Rational(8));
}

TEST_CASE("cross-check report", "[pipelines]") {
  const CrosscheckReport r2 = crosscheck_pipelines(2);
  for (const auto& f : r2.failures) UNSCOPED_INFO(f);
  REQUIRE(r2.ok);
  CHECK(r2.dim == 2);
  CHECK(r2.table_entries == 2);
  CHECK(r2.pairs_checked == 4);

  const CrosscheckReport r4 = crosscheck_pipelines(4);
  for (const auto& f : r4.failures) UNSCOPED_INFO(f);
  REQUIRE(r4.ok);
  CHECK(r4.pairs_checked == 260);
  CHECK(r4.table_entries > 0);

  CHECK_THROWS_AS(crosscheck_pipelines(3), std::invalid_argument);
}

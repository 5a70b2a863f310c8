#include <catch2/catch_amalgamated.hpp>

#include <utility>
#include <vector>

#include "test_util.hpp"
#include "wres/sphere.hpp"
#include "wres/symbol.hpp"

using namespace wres;

namespace {

/* E[x^(2k)] for a standard Gaussian, via (2k)! / (2^k k!). */
Rational gaussian_even_moment(int k) {
  return Rational(factorial_int(static_cast<unsigned long>(2 * k))) /
         (Rational(2).pow(k) * Rational(factorial_int(static_cast<unsigned long>(k))));
}

/* E[x^alpha] for independent standard Gaussians. */
Rational gaussian_moment(const MultiIndex& alpha) {
  Rational r(1);
  for (int i = 0; i < alpha.dim(); ++i) {
    if (alpha[i] % 2 != 0) return Rational(0);
    r *= gaussian_even_moment(alpha[i] / 2);
  }
  return r;
}

/* E[|x|^(2s)] by multinomial expansion of (x_1^2 + ... + x_n^2)^s. */
Rational gaussian_radial_moment(int n, int s) {
  Rational r(0);
  const Rational sfact(factorial_int(static_cast<unsigned long>(s)));
  for (const MultiIndex& beta : multiindices_of_order(n, s)) {
    Rational term = sfact / Rational(beta.factorial());
    for (int i = 0; i < n; ++i) term *= gaussian_even_moment(beta[i]);
    r += term;
  }
  return r;
}

}  // namespace

TEST_CASE("monomial sphere averages", "[sphere]") {
  CHECK(monomial_sphere_average(MultiIndex({2, 0})) == Rational(1, 2));
  CHECK(monomial_sphere_average(MultiIndex({4, 0})) == Rational(3, 8));
  CHECK(monomial_sphere_average(MultiIndex({2, 2})) == Rational(1, 8));
  CHECK(monomial_sphere_average(MultiIndex({1, 1})) == Rational(0));
  CHECK(monomial_sphere_average(MultiIndex({3, 2})) == Rational(0));
  CHECK(monomial_sphere_average(MultiIndex({0, 0})) == Rational(1));
  CHECK(monomial_sphere_average(MultiIndex({2, 0, 0, 0})) == Rational(1, 4));
  CHECK(monomial_sphere_average(MultiIndex({2, 2, 0, 0})) == Rational(1, 24));
}

TEST_CASE("sphere averages against Gaussian moment ratios", "[sphere]") {
  // Polar factorization: the spherical mean of x^alpha is the ratio
  // E[x^alpha] / E[|x|^|alpha|] for independent standard Gaussians.
  for (int n = 2; n <= 5; ++n)
    for (int order = 0; order <= 6; order += 2)
      for (const MultiIndex& alpha : multiindices_of_order(n, order)) {
        const Rational expected = gaussian_moment(alpha) / gaussian_radial_moment(n, order / 2);
        CHECK(monomial_sphere_average(alpha) == expected);
      }
  // The closed-form denominator prod (n + 2j) is the radial moment.
  for (int n = 2; n <= 8; ++n)
    for (int s = 0; s <= 4; ++s) {
      Rational prod(1);
      for (int j = 0; j < s; ++j) prod *= Rational(n + 2 * j);
      CHECK(prod == gaussian_radial_moment(n, s));
    }
}

TEST_CASE("surface measure convention", "[sphere]") {
  const SphereValue circ = monomial_sphere_integral(MultiIndex({0, 0}), SphereConvention::surface_area);
  CHECK(circ.value == Rational(2));  // vol(S^1) = 2 pi
  CHECK(circ.pi_power == 1);
  const SphereValue quad = monomial_sphere_integral(MultiIndex({2, 0}), SphereConvention::surface_area);
  CHECK(quad.value == Rational(1));  // pi
  CHECK(quad.pi_power == 1);
  const SphereValue s3 = monomial_sphere_integral(MultiIndex({0, 0, 0, 0}), SphereConvention::surface_area);
  CHECK(s3.value == Rational(2));  // vol(S^3) = 2 pi^2
  CHECK(s3.pi_power == 2);
  CHECK_THROWS_AS(sphere_surface_volume(3), std::invalid_argument);

  const HomogeneousRational h(Polynomial::norm_sq(2) * Rational(1, 2), 2);
  // (|xi|^2 / 2) / |xi|^4 restricted to |xi| = 1 integrates to 1/2 (mass one).
  CHECK(integrate_on_sphere(h, SphereConvention::mass_one).value == Rational(1, 2));
  CHECK(integrate_on_sphere(h, SphereConvention::surface_area).value == Rational(1));
}

TEST_CASE("geometric series inverts the shifted norm", "[sphere]") {
  for (int n = 2; n <= 4; n += 2)
    for (int max_total = 2; max_total <= 5; ++max_total) {
      const UVSeries inv = inverse_shifted_norm_series(n, max_total, true);
      UVSeries norm(n, max_total);  // |xi + u|^2
      const MultiIndex zero(n);
      norm.add_term(zero, zero, HomogeneousRational(Polynomial::norm_sq(n), 0));
      for (int i = 0; i < n; ++i) {
        const MultiIndex ei = MultiIndex::unit(n, i);
        norm.add_term(ei, zero,
                      HomogeneousRational(Polynomial::variable(i, n, VarSpace::xi) * Rational(2), 0));
        norm.add_term(ei + ei, zero, HomogeneousRational::constant(1, n));
      }
      const UVSeries prod = norm * inv;
      REQUIRE(prod.terms().size() == 1);
      CHECK(prod.coeff(zero, zero) == HomogeneousRational::constant(1, n));
    }
}

TEST_CASE("shift-series coefficients match symbol derivatives", "[sphere]") {
  for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 1}, {4, 2}}) {
    const int max_total = 4;
    const UVSeries psi = psi_shift_series(n, m, max_total);
    const SymbolMatrix sigma = sign_leading_symbol(n, m);

    // psi(xi, xi) = tr(sigma^2) = rank.
    CHECK(psi.coeff(MultiIndex(n), MultiIndex(n)) ==
          HomogeneousRational::constant(Rational(binomial_int(n, m)), n));

    for (const auto& [key, c] : psi.terms())
      CHECK(c.net_degree() == -(key.u.order() + key.v.order()));

    for (int gu = 1; gu <= 2; ++gu)
      for (int gv = 1; gv <= 2; ++gv)
        for (const MultiIndex& gamma : multiindices_of_order(n, gu))
          for (const MultiIndex& delta : multiindices_of_order(n, gv)) {
            const SymbolValue lhs =
                (sigma.partial_xi_multi(gamma) * sigma.partial_xi_multi(delta)).trace();
            const Integer facts = gamma.factorial() * delta.factorial();
            const SymbolValue rhs =
                SymbolValue::xi_function(psi.coeff(gamma, delta) * Rational(facts));
            CHECK(lhs == rhs);
          }
  }
}

TEST_CASE("taylor pipeline in dimension two", "[sphere]") {
  const BilinearForm omega = taylor_omega_coefficients(2, SphereConvention::mass_one);
  CHECK(omega.dim == 2);
  CHECK(omega.pi_power == 0);
  REQUIRE(omega.entries.size() == 2);
  CHECK(omega.entry(MultiIndex({1, 0}), MultiIndex({1, 0})) == Rational(4));
  CHECK(omega.entry(MultiIndex({0, 1}), MultiIndex({0, 1})) == Rational(4));
  CHECK(omega.entry(MultiIndex({1, 0}), MultiIndex({0, 1})) == Rational(0));
}

TEST_CASE("taylor pipeline structure in dimensions two and four", "[sphere]") {
  for (int n = 2; n <= 4; n += 2) {
    const BilinearForm omega = taylor_omega_coefficients(n, SphereConvention::mass_one);
    CHECK_FALSE(omega.entries.empty());
    for (const auto& [key, value] : omega.entries) {
      CHECK(key.a.order() >= 1);
      CHECK(key.b.order() >= 1);
      CHECK(key.a.order() + key.b.order() == n);  // joint homogeneity
      CHECK(omega.entry(key.b, key.a) == value);  // symmetry under swap
    }
    const BilinearForm surf = taylor_omega_coefficients(n, SphereConvention::surface_area);
    CHECK(surf.pi_power == n / 2);
    const Rational vol_factor = sphere_surface_volume(n).value;
    REQUIRE(surf.entries.size() == omega.entries.size());
    for (const auto& [key, value] : omega.entries)
      CHECK(surf.entry(key.a, key.b) == value * vol_factor);
  }
}

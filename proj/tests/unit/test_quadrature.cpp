#include <doctest.h>

#include <cmath>

#include "nilmult/quadrature.hpp"

using namespace nilmult;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  for (int n : {1, 2, 5, 16, 64}) {
    const GaussRule r = gauss_legendre(n, -1.0, 2.0);
    for (int d = 0; d < 2 * n; d += std::max(1, n / 4)) {
      const double exact = (std::pow(2.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
      const double got = r.apply([d](double x) { return std::pow(x, d); });
      CHECK(got == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gauss-Laguerre moments") {
  for (double alpha : {0.0, 0.5, 2.0}) {
    const GaussRule r = gauss_laguerre(24, alpha);
    for (int k = 0; k <= 10; ++k)
      CHECK(r.apply([k](double u) { return std::pow(u, k); }) ==
            doctest::Approx(std::tgamma(k + alpha + 1)).epsilon(1e-11));
  }
}

TEST_CASE("Gauss-Hermite moments") {
  const GaussRule r = gauss_hermite(20);
  CHECK(r.apply([](double) { return 1.0; }) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(r.apply([](double t) { return t * t; }) == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-13));
  CHECK(std::abs(r.apply([](double t) { return t * t * t; })) < 1e-13);
}

TEST_CASE("adaptive Gauss-Kronrod") {
  SUBCASE("smooth") {
    const auto res = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-14));
  }
  SUBCASE("endpoint singularity") {
    const auto res = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(res.value == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("complex oscillatory") {
    const auto res = integrate_adaptive(
        [](double x) { return std::exp(std::complex<double>(0, 25 * x)); }, 0.0, 1.0);
    const std::complex<double> exact = (std::exp(std::complex<double>(0, 25)) - 1.0) /
                                       std::complex<double>(0, 25);
    CHECK(std::abs(res.value - exact) < 1e-13);
  }
  SUBCASE("piecewise with kinks") {
    const auto res = integrate_piecewise([](double x) { return std::abs(x - 1.0); }, {0.0, 1.0, 3.0});
    CHECK(res.value == doctest::Approx(2.5).epsilon(1e-14));
  }
}

TEST_CASE("node gap") {
  const GaussRule r = gauss_legendre(8, 0.0, 1.0);
  const double g = max_node_gap(r, 0.0, 1.0);
  CHECK(g > 0.0);
  CHECK(g < 0.25);
}

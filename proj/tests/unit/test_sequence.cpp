#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "nilmult/sequence.hpp"

using namespace nilmult;

namespace {

FiniteSeq random_seq(std::mt19937_64 &rng, int lo, int len) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cdouble> v(len);
  for (cdouble &c : v)
    c = {u(rng), u(rng)};
  return {lo, v};
}

} // namespace

TEST_CASE("normal form") {
  const FiniteSeq a(2, {0.0, 1.0, 2.0, 0.0});
  CHECK(a.begin() == 3);
  CHECK(a.end() == 5);
  CHECK(a == FiniteSeq(3, {1.0, 2.0}));
  CHECK((a - a).empty());
  CHECK(FiniteSeq::unit(4)(4) == cdouble(1.0));
  CHECK(sum(a) == cdouble(3.0));
}

TEST_CASE("shift and differences") {
  std::mt19937_64 rng(1);
  const FiniteSeq f = random_seq(rng, -2, 6);
  CHECK(shift(f, 2)(0) == f(2));
  CHECK(max_abs_diff(diff(f), shift(f) - f) == 0.0);
  for (int k = 0; k <= 4; ++k)
    for (int n = -6; n <= 6; ++n) {
      cdouble ref = 0;
      for (int j = 0; j <= k; ++j)
        ref += double((((k - j) % 2) ? -1 : 1) * oracle::binomial(k, j)) * f(n + j);
      CHECK(std::abs(diff_pow(k, f)(n) - ref) <= 1e-12);
    }
}

TEST_CASE("(1+tau)^q on sequences over N") {
  std::mt19937_64 rng(2);
  const FiniteSeq f = random_seq(rng, -1, 7);
  const FiniteSeq fn = f.restrict_to_naturals();
  CHECK(fn.begin() >= 0);

  SUBCASE("positive powers are binomial sums") {
    const FiniteSeq g = one_plus_tau_pow(3, f);
    for (int n = 0; n < 8; ++n) {
      cdouble ref = 0;
      for (int j = 0; j <= 3; ++j)
        ref += double(oracle::binomial(3, j)) * fn(n + j);
      CHECK(std::abs(g(n) - ref) <= 1e-12);
    }
  }
  SUBCASE("composition") {
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        CHECK(max_abs_diff(one_plus_tau_pow(a, one_plus_tau_pow(b, f)), one_plus_tau_pow(a + b, f)) <= 1e-12);
  }
  SUBCASE("round trip") {
    CHECK(max_abs_diff(one_plus_tau_pow(1, one_plus_tau_pow(-1, f)), fn) <= 1e-12);
    CHECK(max_abs_diff(one_plus_tau_pow(-1, one_plus_tau_pow(1, f)), fn) <= 1e-12);
  }
  SUBCASE("inverse of (1+tau) on a unit") {
    // (1+tau)^{-1} e_2 = e_2 - e_1 + e_0
    const FiniteSeq g = one_plus_tau_pow(-1, FiniteSeq::unit(2));
    CHECK(g == FiniteSeq(0, {1.0, -1.0, 1.0}));
  }
}

TEST_CASE("forward difference") {
  auto f = [](double t) { return std::exp(-t / 3); };
  for (int k = 0; k <= 4; ++k)
    CHECK(forward_difference(k, f, 2) ==
          doctest::Approx(oracle::forward_difference(k, f, 2)).epsilon(1e-13));
}

TEST_CASE("difference through the bridge measure") {
  auto f = [](double t) { return std::exp(-t / 3); };
  auto d3 = [](double t) { return -std::exp(-t / 3) / 27; };
  const BridgeResult r = diff_via_bridge(3, d3, 2);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(oracle::forward_difference(3, f, 2)).epsilon(1e-8));
  CHECK(diff_via_bridge(0, f, 4).value == doctest::Approx(f(4)));
}

#include "nilmult/special.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nilmult {
namespace {

std::atomic<double> g_laguerre_fault{0.0};

void check_degree(int n) {
  if (n < 0)
    throw std::invalid_argument("negative degree");
  if (n > kMaxDegree)
    throw std::out_of_range("degree exceeds recurrence cap of 512");
}

void check_type(int k) {
  if (k < 0)
    throw std::invalid_argument("negative Laguerre type");
  if (k > kMaxType)
    throw std::out_of_range("Laguerre type exceeds cap of 32");
}

// L_0^{(k)}(u) .. L_n^{(k)}(u) and, optionally, their u-derivatives.
void laguerre_poly_all(int n, int k, double u, double *vals, double *ders) {
  const double fault = g_laguerre_fault.load(std::memory_order_relaxed);
  vals[0] = 1.0;
  if (ders)
    ders[0] = 0.0;
  if (n == 0)
    return;
  vals[1] = 1.0 + k - u;
  if (ders)
    ders[1] = -1.0;
  for (int m = 1; m < n; ++m) {
    const double a = 2.0 * m + k + 1.0 - u;
    const double b = (m + k) * (1.0 + fault);
    vals[m + 1] = (a * vals[m] - b * vals[m - 1]) / (m + 1.0);
    if (ders)
      ders[m + 1] = (a * ders[m] - vals[m] - b * ders[m - 1]) / (m + 1.0);
  }
}

double sign_of(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

} // namespace

namespace testing {
void set_laguerre_fault(double relative_perturbation) {
  g_laguerre_fault.store(relative_perturbation);
}
double laguerre_fault() { return g_laguerre_fault.load(); }
} // namespace testing

std::vector<double> hermite_fn_all(int n, double t) {
  check_degree(n);
  std::vector<double> h(n + 1);
  h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * t * t);
  if (n >= 1)
    h[1] = std::sqrt(2.0) * t * h[0];
  for (int m = 1; m < n; ++m)
    h[m + 1] = t * std::sqrt(2.0 / (m + 1.0)) * h[m] -
               std::sqrt(m / (m + 1.0)) * h[m - 1];
  return h;
}

double hermite_fn(int n, double t) { return hermite_fn_all(n, t).back(); }

double laguerre_poly(int n, int k, double u) {
  check_degree(n);
  check_type(k);
  std::vector<double> v(n + 1);
  laguerre_poly_all(n, k, u, v.data(), nullptr);
  return v[n];
}

double laguerre_fn(int n, int k, double t) {
  if (n < 0)
    return 0.0;
  if (t < 0.0)
    throw std::domain_error("laguerre_fn: t must be nonnegative");
  return 2.0 * sign_of(n) * std::exp(-t) * laguerre_poly(n, k, 2.0 * t);
}

double laguerre_fn_derivative(int n, int k, double t) {
  if (n < 0)
    return 0.0;
  if (t < 0.0)
    throw std::domain_error("laguerre_fn: t must be nonnegative");
  check_degree(n);
  check_type(k);
  std::vector<double> v(n + 1), d(n + 1);
  laguerre_poly_all(n, k, 2.0 * t, v.data(), d.data());
  return 2.0 * sign_of(n) * std::exp(-t) * (2.0 * d[n] - v[n]);
}

void scaled_laguerre_all(int n, double t, std::span<double> out) {
  const double e = std::exp(-t);
  const double u = 2.0 * t;
  out[0] = e;
  if (n == 0)
    return;
  out[1] = e * (1.0 - u);
  for (int m = 1; m < n; ++m)
    out[m + 1] = ((2.0 * m + 1.0 - u) * out[m] - m * out[m - 1]) / (m + 1.0);
}

double laguerre_identity_pm(int n, int k, double t) {
  return laguerre_fn(n, k, t) - laguerre_fn(n - 1, k + 1, t) -
         laguerre_fn(n, k + 1, t);
}

DerivativeResidual laguerre_identity_d(int n, int k, double t) {
  const double rhs = laguerre_fn(n - 1, k + 1, t) - laguerre_fn(n, k + 1, t);
  const double h = kDerivativeStep;
  double fd;
  if (t >= h) {
    fd = (laguerre_fn(n, k, t + h) - laguerre_fn(n, k, t - h)) / (2.0 * h);
  } else {
    // One-sided second-order stencil at the boundary of [0, inf).
    fd = (-3.0 * laguerre_fn(n, k, t) + 4.0 * laguerre_fn(n, k, t + h) -
          laguerre_fn(n, k, t + 2.0 * h)) /
         (2.0 * h);
  }
  return {fd - rhs, laguerre_fn_derivative(n, k, t) - rhs};
}

double laguerre_norm_constant(int n, int k) {
  return std::exp(std::lgamma(n + k + 1.0) - std::lgamma(n + 1.0) -
                  (k - 1.0) * std::log(2.0));
}

namespace {

const GaussRule &cached_laguerre_rule(int order, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, GaussRule> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(order, k);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, gauss_laguerre(order, static_cast<double>(k))).first;
  return it->second;
}

double orthogonality_at_order(int n, int n2, int k, int order) {
  const GaussRule &rule = cached_laguerre_rule(order, k);
  const int top = std::max(n, n2);
  std::vector<double> v(top + 1);
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    if (rule.weights[i] == 0.0)
      continue;
    laguerre_poly_all(top, k, rule.nodes[i], v.data(), nullptr);
    acc += rule.weights[i] * v[n] * v[n2];
  }
  // ℒ_n ℒ_n' t^k dt = 4 (-1)^{n+n'} e^{-u} L_n L_n' (u/2)^k du / 2 with u = 2t.
  return sign_of(n + n2) * std::pow(2.0, 1 - k) * acc.value();
}

} // namespace

OrthogonalityResult laguerre_orthogonality(int n, int n2, int k) {
  check_degree(n);
  check_degree(n2);
  check_type(k);
  OrthogonalityResult r{};
  r.expected = (n == n2) ? laguerre_norm_constant(n, k) : 0.0;
  int order = 128;
  double prev = orthogonality_at_order(n, n2, k, order);
  for (;;) {
    const int next = 2 * order;
    const double cur = orthogonality_at_order(n, n2, k, next);
    r.error = std::abs(cur - prev);
    r.value = cur;
    r.order = next;
    r.converged = r.error <= 1e-8 * std::max(1.0, std::abs(cur));
    if (r.converged || next >= 512)
      break;
    order = next;
    prev = cur;
  }
  return r;
}

std::pair<cdouble, cdouble> laguerre_sum_shift(std::span<const cdouble> f,
                                               int k, double t) {
  CompensatedSum<cdouble> lhs, rhs;
  const int len = static_cast<int>(f.size());
  for (int n = 0; n < len; ++n) {
    lhs += f[n] * laguerre_fn(n, k, t);
    const cdouble shifted = f[n] + (n + 1 < len ? f[n + 1] : cdouble{});
    rhs += shifted * laguerre_fn(n, k + 1, t);
  }
  return {lhs.value(), rhs.value()};
}

double bridge_density(int k, double s) {
  if (k < 0)
    throw std::invalid_argument("bridge_density: negative order");
  if (k == 0)
    throw std::invalid_argument(
        "bridge_density: order 0 is the point mass at 0 and has no density");
  if (s < 0.0 || s > k)
    return 0.0;
  // Irwin-Hall: (1/(k-1)!) Σ_{j <= s} (-1)^j C(k, j) (s - j)^{k-1}
  CompensatedSum<double> acc;
  double binom = 1.0;
  const int top = std::min(static_cast<int>(std::floor(s)), k);
  for (int j = 0; j <= top; ++j) {
    if (j > 0)
      binom = binom * (k - j + 1) / j;
    const double term = binom * std::pow(s - j, k - 1);
    acc += (j % 2 == 0) ? term : -term;
  }
  return std::max(0.0, acc.value() / std::tgamma(static_cast<double>(k)));
}

} // namespace nilmult

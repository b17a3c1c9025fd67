#include "nilmult/sequence.hpp"

#include <algorithm>
#include <stdexcept>

#include "nilmult/quadrature.hpp"
#include "nilmult/special.hpp"

namespace nilmult {

FiniteSeq::FiniteSeq(int offset, std::vector<cdouble> values)
    : offset_(offset), values_(std::move(values)) {
  normalize();
}

FiniteSeq FiniteSeq::unit(int n, cdouble value) { return {n, {value}}; }

void FiniteSeq::normalize() {
  auto first = std::find_if(values_.begin(), values_.end(),
                            [](cdouble v) { return v != cdouble{}; });
  if (first == values_.end()) {
    values_.clear();
    offset_ = 0;
    return;
  }
  auto last = std::find_if(values_.rbegin(), values_.rend(),
                           [](cdouble v) { return v != cdouble{}; })
                  .base();
  offset_ += static_cast<int>(first - values_.begin());
  values_ = std::vector<cdouble>(first, last);
}

FiniteSeq FiniteSeq::restrict_to_naturals() const {
  if (offset_ >= 0)
    return *this;
  if (end() <= 0)
    return {};
  return {0, std::vector<cdouble>(values_.begin() - offset_, values_.end())};
}

FiniteSeq &FiniteSeq::operator+=(const FiniteSeq &o) {
  if (o.empty())
    return *this;
  if (empty())
    return *this = o;
  const int lo = std::min(begin(), o.begin());
  const int hi = std::max(end(), o.end());
  std::vector<cdouble> v(hi - lo);
  for (int n = lo; n < hi; ++n)
    v[n - lo] = (*this)(n) + o(n);
  return *this = FiniteSeq(lo, std::move(v));
}

FiniteSeq &FiniteSeq::operator-=(const FiniteSeq &o) {
  return *this += cdouble(-1.0) * o;
}

FiniteSeq &FiniteSeq::operator*=(cdouble c) {
  for (auto &v : values_)
    v *= c;
  normalize();
  return *this;
}

FiniteSeq operator+(FiniteSeq a, const FiniteSeq &b) { return a += b; }
FiniteSeq operator-(FiniteSeq a, const FiniteSeq &b) { return a -= b; }
FiniteSeq operator*(cdouble c, FiniteSeq a) { return a *= c; }

double max_abs_diff(const FiniteSeq &a, const FiniteSeq &b) {
  const FiniteSeq d = a - b;
  double m = 0.0;
  for (cdouble v : d.values())
    m = std::max(m, std::abs(v));
  return m;
}

cdouble sum(const FiniteSeq &f) {
  CompensatedSum<cdouble> acc;
  for (cdouble v : f.values())
    acc += v;
  return acc.value();
}

FiniteSeq shift(const FiniteSeq &f, int steps) {
  if (f.empty())
    return f;
  return {f.begin() - steps, f.values()};
}

FiniteSeq diff(const FiniteSeq &f) { return shift(f) - f; }

FiniteSeq diff_pow(int k, const FiniteSeq &f) {
  if (k < 0)
    throw std::invalid_argument("diff_pow: negative order");
  FiniteSeq out = f;
  for (int i = 0; i < k; ++i)
    out = diff(out);
  return out;
}

namespace {

// (1+τ) on N: g(n) = f(n) + f(n+1) for n >= 0.
FiniteSeq step_up(const FiniteSeq &f) {
  if (f.empty())
    return f;
  std::vector<cdouble> v(f.end());
  for (int n = 0; n < f.end(); ++n)
    v[n] = f(n) + f(n + 1);
  return {0, std::move(v)};
}

// (1+τ)^{-1} on N: g(n) = Σ_{l>=0} (-1)^l f(n+l), summed from the top of the
// support downwards as g(n) = f(n) - g(n+1).
FiniteSeq step_down(const FiniteSeq &f) {
  if (f.empty())
    return f;
  std::vector<cdouble> v(f.end());
  cdouble next{};
  for (int n = f.end() - 1; n >= 0; --n) {
    next = f(n) - next;
    v[n] = next;
  }
  return {0, std::move(v)};
}

} // namespace

FiniteSeq one_plus_tau_pow(int q, const FiniteSeq &f) {
  FiniteSeq out = f.restrict_to_naturals();
  for (int i = 0; i < std::abs(q); ++i)
    out = q > 0 ? step_up(out) : step_down(out);
  return out;
}

double forward_difference(int k, const std::function<double(double)> &f,
                          int n) {
  if (k < 0)
    throw std::invalid_argument("forward_difference: negative order");
  CompensatedSum<double> acc;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0)
      binom = binom * (k - j + 1) / j;
    const double term = binom * f(n + j);
    acc += ((k - j) % 2 == 0) ? term : -term;
  }
  return acc.value();
}

BridgeResult diff_via_bridge(int k, const std::function<double(double)> &g,
                             int n) {
  if (k < 0)
    throw std::invalid_argument("diff_via_bridge: negative order");
  if (k == 0)
    return {g(n), 0.0, true};
  // The density is a polynomial on each [j, j+1]; integrate piecewise.
  std::vector<double> breaks(k + 1);
  for (int j = 0; j <= k; ++j)
    breaks[j] = j;
  AdaptiveOptions opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-13;
  auto res = integrate_piecewise(
      [&](double s) { return g(n + s) * bridge_density(k, s); }, breaks, opt);
  return {res.value, res.error, res.converged};
}

} // namespace nilmult

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "nilmult/types.hpp"

namespace nilmult {

/// Nodes and weights of a fixed quadrature rule.
struct GaussRule {
  VectorXd nodes;
  VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }

  template <typename F> auto apply(F &&f) const {
    using R = decltype(f(0.0));
    CompensatedSum<R> acc;
    for (Eigen::Index i = 0; i < nodes.size(); ++i)
      acc += weights[i] * f(nodes[i]);
    return acc.value();
  }
};

/// Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Generalised Gauss-Laguerre rule for the weight u^alpha e^{-u} on [0, inf).
GaussRule gauss_laguerre(int n, double alpha = 0.0);

/// Gauss-Hermite rule for the weight e^{-t^2} on the real line.
GaussRule gauss_hermite(int n);

/// Largest gap between consecutive nodes, including the gaps to [a, b].
double max_node_gap(const GaussRule &rule, double a, double b);

template <typename T> struct QuadResult {
  T value{};
  double error = 0.0;
  bool converged = false;
  int evaluations = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T> struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment &o) const { return error < o.error; }
};

template <typename F>
auto kronrod15(F &f, double a, double b, int &evals) {
  using R = decltype(f(0.0));
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const R fc = f(c);
  R kron = kKronrodWeights[7] * fc;
  R gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const R f1 = f(c - dx);
    const R f2 = f(c + dx);
    kron += kKronrodWeights[j] * (f1 + f2);
    if (j % 2 == 1)
      gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  evals += 15;
  Segment<R> s{a, b, kron * h, std::abs(kron - gauss) * std::abs(h)};
  return s;
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7, 15) integration of f over [a, b].
/// Works for real or complex valued integrands.
template <typename F>
auto integrate_adaptive(F &&f, double a, double b,
                        const AdaptiveOptions &opt = {}) {
  using R = decltype(f(0.0));
  QuadResult<R> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Segment<R>> heap;
  heap.push(detail::kronrod15(f, a, b, out.evaluations));
  R total = heap.top().value;
  double err = heap.top().error;
  int intervals = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
         intervals < opt.max_intervals) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod15(f, worst.a, mid, out.evaluations);
    auto right = detail::kronrod15(f, mid, worst.b, out.evaluations);
    heap.push(left);
    heap.push(right);
    ++intervals;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    if (intervals % 64 == 0 || !(err > 0.0)) {
      // Periodic exact re-sum keeps drift in the running totals bounded.
      CompensatedSum<R> tv;
      CompensatedSum<double> te;
      auto copy = heap;
      while (!copy.empty()) {
        tv += copy.top().value;
        te += copy.top().error;
        copy.pop();
      }
      total = tv.value();
      err = te.value();
    }
  }
  {
    CompensatedSum<R> tv;
    CompensatedSum<double> te;
    auto copy = heap;
    while (!copy.empty()) {
      tv += copy.top().value;
      te += copy.top().error;
      copy.pop();
    }
    total = tv.value();
    err = te.value();
  }
  out.value = total;
  out.error = err;
  out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  return out;
}

/// Adaptive integration over a list of breakpoints; results are summed.
template <typename F>
auto integrate_piecewise(F &&f, const std::vector<double> &breaks,
                         const AdaptiveOptions &opt = {}) {
  using R = decltype(f(0.0));
  QuadResult<R> out;
  out.converged = true;
  CompensatedSum<R> acc;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto part = integrate_adaptive(f, breaks[i], breaks[i + 1], opt);
    acc += part.value;
    out.error += part.error;
    out.converged = out.converged && part.converged;
    out.evaluations += part.evaluations;
  }
  out.value = acc.value();
  return out;
}

} // namespace nilmult

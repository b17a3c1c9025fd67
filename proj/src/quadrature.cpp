#include "nilmult/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace nilmult {
namespace {

// Symmetric Jacobi matrix of a family of orthogonal polynomials:
// x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1} for the orthonormal p_k.
struct Jacobi {
  VectorXd diag;    // a_0 .. a_{n-1}
  VectorXd offdiag; // b_1 .. b_n (one extra entry for the Newton step)
  double log_mu0;   // log of the total mass of the weight
};

// Evaluate the orthonormal p_n and its derivative at x together with the
// Christoffel sum sum_{k<n} p_k(x)^2. Values are rescaled on the fly; the
// returned log_scale is the log of the common factor removed.
struct OrthoEval {
  double p = 0.0, dp = 0.0, christoffel = 0.0, log_scale = 0.0;
};

OrthoEval eval_orthonormal(const Jacobi &j, int n, double x) {
  double pm1 = 0.0, dpm1 = 0.0;
  double p = 1.0, dp = 0.0; // scaled by exp(-log_scale) * sqrt(mu0)
  double log_scale = 0.0;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += p * p;
    const double b_next = j.offdiag[k];
    const double b_prev = k > 0 ? j.offdiag[k - 1] : 0.0;
    const double pn = ((x - j.diag[k]) * p - b_prev * pm1) / b_next;
    const double dpn = ((x - j.diag[k]) * dp + p - b_prev * dpm1) / b_next;
    pm1 = p;
    dpm1 = dp;
    p = pn;
    dp = dpn;
    const double mag = std::max(std::abs(p), std::abs(pm1));
    if (mag > 1e120) {
      const double s = 1e-120;
      p *= s;
      dp *= s;
      pm1 *= s;
      dpm1 *= s;
      sum *= s * s;
      log_scale += std::log(1e120);
    }
  }
  OrthoEval e;
  e.p = p;
  e.dp = dp;
  e.christoffel = sum;
  e.log_scale = log_scale;
  return e;
}

GaussRule golub_welsch(const Jacobi &j, int n) {
  if (n < 1)
    throw std::invalid_argument("quadrature: order must be >= 1");
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver;
  VectorXd sub = j.offdiag.head(n - 1);
  solver.computeFromTridiagonal(j.diag.head(n), sub, Eigen::EigenvaluesOnly);
  VectorXd nodes = solver.eigenvalues();
  VectorXd weights(n);
  for (int i = 0; i < n; ++i) {
    double x = nodes[i];
    // Newton polish on the degree-n orthonormal polynomial.
    for (int it = 0; it < 8; ++it) {
      const OrthoEval e = eval_orthonormal(j, n, x);
      if (e.dp == 0.0)
        break;
      const double dx = e.p / e.dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x)))
        break;
    }
    nodes[i] = x;
    // Christoffel weight 1 / sum p_k^2 with p_0 = 1/sqrt(mu0).
    const OrthoEval e = eval_orthonormal(j, n, x);
    const double log_w = j.log_mu0 - std::log(e.christoffel) - 2.0 * e.log_scale;
    weights[i] = log_w < -745.0 ? 0.0 : std::exp(log_w);
  }
  return {nodes, weights};
}

} // namespace

GaussRule gauss_legendre(int n, double a, double b) {
  Jacobi j{VectorXd::Zero(n + 1), VectorXd(n + 1), std::log(2.0)};
  for (int k = 1; k <= n + 1; ++k)
    j.offdiag[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  GaussRule r = golub_welsch(j, n);
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  r.nodes = (c + h * r.nodes.array()).matrix();
  r.weights *= h;
  return r;
}

GaussRule gauss_laguerre(int n, double alpha) {
  if (!(alpha > -1.0))
    throw std::invalid_argument("gauss_laguerre: alpha must exceed -1");
  Jacobi j{VectorXd(n + 1), VectorXd(n + 1), std::lgamma(alpha + 1.0)};
  for (int k = 0; k <= n; ++k) {
    j.diag[k] = 2.0 * k + alpha + 1.0;
    j.offdiag[k] = std::sqrt((k + 1.0) * (k + 1.0 + alpha));
  }
  return golub_welsch(j, n);
}

GaussRule gauss_hermite(int n) {
  Jacobi j{VectorXd::Zero(n + 1), VectorXd(n + 1), 0.5 * std::log(kPi)};
  for (int k = 1; k <= n + 1; ++k)
    j.offdiag[k - 1] = std::sqrt(0.5 * k);
  return golub_welsch(j, n);
}

double max_node_gap(const GaussRule &rule, double a, double b) {
  double gap = 0.0;
  double prev = a;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    gap = std::max(gap, rule.nodes[i] - prev);
    prev = rule.nodes[i];
  }
  return std::max(gap, b - prev);
}

} // namespace nilmult

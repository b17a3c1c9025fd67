#include "nilmult/representation.hpp"

#include <cmath>
#include <stdexcept>

#include "nilmult/quadrature.hpp"
#include "nilmult/special.hpp"

namespace nilmult {
namespace {

void require_nonzero(const Vector3d &eta) {
  if (!(eta.norm() > 0.0))
    throw std::invalid_argument("η must be nonzero");
}

cdouble phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

} // namespace

EtaFrame eta_frame(const Vector3d &eta) {
  require_nonzero(eta);
  EtaFrame f;
  f.norm = eta.norm();
  f.dir = eta / f.norm;
  int axis = 0;
  for (int j = 1; j < 3; ++j)
    if (std::abs(f.dir[j]) < std::abs(f.dir[axis]))
      axis = j;
  Vector3d e = Vector3d::Unit(axis);
  e -= e.dot(f.dir) * f.dir;
  f.e = e.normalized();
  f.ebar = f.dir.cross(f.e);
  return f;
}

XiSplit xi_decompose(const Vector3d &xi, const Vector3d &eta) {
  require_nonzero(eta);
  const Vector3d dir = eta.normalized();
  const double par = xi.dot(dir);
  return {par, xi - par * dir};
}

XiDerivatives xi_decompose_derivatives(const Vector3d &xi,
                                       const Vector3d &eta) {
  const XiSplit s = xi_decompose(xi, eta);
  const double r = eta.norm();
  const Vector3d dir = eta / r;
  XiDerivatives d;
  d.parallel = s.perp / r;
  // ∂_j(η_k/|η|) = (δ_jk - dir_j dir_k) / |η|
  const Matrix3d ddir = (Matrix3d::Identity() - dir * dir.transpose()) / r;
  d.perp = -s.parallel * ddir - s.perp * eta.transpose() / (r * r);
  d.perp_sq_over_norm = -2.0 * s.parallel * s.perp / (r * r) -
                        s.perp.squaredNorm() * eta / (r * r * r);
  return d;
}

int RepGrid::size() const {
  if (!(extent > 0.0) || !(step > 0.0))
    throw std::invalid_argument("RepGrid: extent and step must be positive");
  return static_cast<int>(std::lround(2.0 * extent / step)) + 1;
}

double RepVector::norm() const {
  return std::sqrt(grid.step * values.squaredNorm());
}

cdouble RepVector::inner(const RepVector &o) const {
  return grid.step * o.values.dot(values);
}

RepVector rep_apply(const Vector3d &eta, double mu, const Point &p,
                    const RepVector &phi) {
  const EtaFrame f = eta_frame(eta);
  const Vector3d xc = f.components(p.x);
  const RepGrid &g = phi.grid;
  const int n = g.size();
  const double h = g.step;

  // Mass of φ that no output sample reads back.
  double lost = 0.0;
  for (int j = 0; j < n; ++j) {
    const double u = g.node(j) - xc[0];
    if (u < -g.extent - 1e-12 || u > g.extent + 1e-12)
      lost += std::norm(phi.values[j]);
  }
  const double total = phi.values.squaredNorm();
  if (lost > 1e-16 * total)
    throw std::out_of_range("rep_apply: shift moves the vector off its grid");

  const cdouble global = phase(eta.dot(p.y) + mu * xc[2]);
  RepVector out{g, VectorXcd::Zero(n)};
  const double pos0 = xc[0] / h;
  const double whole = std::round(pos0);
  const bool aligned = std::abs(pos0 - whole) < 1e-9;
  for (int i = 0; i < n; ++i) {
    const double u = g.node(i);
    cdouble sample{};
    if (aligned) {
      const long j = i + static_cast<long>(whole);
      if (j >= 0 && j < n)
        sample = phi.values[j];
    } else {
      const double pos = i + pos0;
      const long j = static_cast<long>(std::floor(pos));
      const double frac = pos - j;
      const cdouble lo = (j >= 0 && j < n) ? phi.values[j] : cdouble{};
      const cdouble hi = (j + 1 >= 0 && j + 1 < n) ? phi.values[j + 1] : cdouble{};
      sample = (1.0 - frac) * lo + frac * hi;
    }
    out.values[i] = global * phase(f.norm * (u + 0.5 * xc[0]) * xc[1]) * sample;
  }
  return out;
}

RepVector scaled_hermite(const Vector3d &eta, int n, const RepGrid &grid) {
  require_nonzero(eta);
  if (n < 0)
    throw std::invalid_argument("scaled_hermite: negative degree");
  const double r = eta.norm();
  const double turning = std::sqrt((2.0 * n + 1.0) / std::sqrt(r)) *
                         std::pow(r, -0.25);
  if (grid.extent < 1.5 * turning)
    throw std::invalid_argument("scaled_hermite: grid extent too small");
  if (grid.step * std::sqrt(r * (2.0 * n + 1.0)) > 0.5)
    throw std::invalid_argument("scaled_hermite: grid step too coarse");
  const int size = grid.size();
  RepVector out{grid, VectorXcd(size)};
  const double a = std::sqrt(r);
  const double s = std::pow(r, 0.25);
  for (int i = 0; i < size; ++i)
    out.values[i] = s * hermite_fn(n, a * grid.node(i));
  return out;
}

RepVector oscillator_apply(const Vector3d &eta, double mu,
                           const RepVector &phi) {
  const RepGrid &g = phi.grid;
  const Eigen::Index n = phi.values.size();
  const double inv_h2 = 1.0 / (g.step * g.step);
  const Eigen::ArrayXd u = Eigen::ArrayXd::LinSpaced(n, g.node(0), g.node(static_cast<int>(n) - 1));
  const Eigen::ArrayXd diag = 2.0 * inv_h2 + eta.squaredNorm() * u.square() + mu * mu;
  RepVector out{g, (diag * phi.values.array()).matrix()};
  out.values.head(n - 1) -= inv_h2 * phi.values.tail(n - 1);
  out.values.tail(n - 1) -= inv_h2 * phi.values.head(n - 1);
  return out;
}

CoefficientResult matrix_coefficient_direct(const Vector3d &eta, double mu,
                                            int n, const Point &p) {
  if (n < 0 || n > 40)
    throw std::invalid_argument("matrix_coefficient_direct: need 0 <= n <= 40");
  const EtaFrame f = eta_frame(eta);
  const Vector3d xc = f.components(p.x);
  const double root = std::sqrt(f.norm);
  const double a = 0.5 * root * xc[0];
  const double b = root * xc[1];
  // s = |η|^{1/2} u turns the integral into ∫ e^{i b s} h_n(s+a) h_n(s-a) ds.
  auto integrand = [&](double s) {
    return phase(b * s) * (hermite_fn(n, s + a) * hermite_fn(n, s - a));
  };
  const double reach = std::sqrt(2.0 * n + 1.0) + 10.0;
  AdaptiveOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  std::vector<double> breaks;
  const int pieces = 16;
  for (int i = 0; i <= pieces; ++i)
    breaks.push_back(-reach + 2.0 * reach * i / pieces);
  auto res = integrate_piecewise(integrand, breaks, opt);
  const cdouble pre = phase(eta.dot(p.y) + mu * xc[2]);
  return {pre * res.value, res.error, res.converged};
}

cdouble matrix_coefficient_closed(const Vector3d &eta, double mu, int n,
                                  const Point &p) {
  const EtaFrame f = eta_frame(eta);
  const Vector3d xc = f.components(p.x);
  const double t = f.norm * (xc[0] * xc[0] + xc[1] * xc[1]) / 4.0;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return phase(eta.dot(p.y) + mu * xc[2]) * (0.5 * sign * laguerre_fn(n, 0, t));
}

} // namespace nilmult

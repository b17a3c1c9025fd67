#include "nilmult/studies.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nilmult {

Multiplier reference_bump() { return bump_multiplier(2.5, 1.5); }

std::vector<Point> random_points(std::size_t count, double extent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-extent, extent);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point p;
    for (int j = 0; j < 3; ++j)
      p.x[j] = u(rng);
    for (int j = 0; j < 3; ++j)
      p.y[j] = u(rng);
    pts.push_back(p);
  }
  return pts;
}

LineFit fit_line(const std::vector<double> &xs, const std::vector<double> &ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("fit_line: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::isfinite(xs[i]) && std::isfinite(ys[i])) {
      x.push_back(xs[i]);
      y.push_back(ys[i]);
    }
  if (x.size() < 3)
    throw std::invalid_argument("fit_line: fewer than 3 usable points");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  MatrixXd a(n, 2);
  VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = x[i];
    a(i, 1) = 1.0;
    b[i] = y[i];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
  LineFit f;
  f.slope = c[0];
  f.intercept = c[1];
  f.rms_residual = std::sqrt((a * c - b).squaredNorm() / n);
  f.used = static_cast<int>(n);
  return f;
}

ScalingStudy scaling_study(const Multiplier &f, const DyadicCutoff &chi,
                           const ScalingOptions &opt) {
  if (opt.k_hi - opt.k_lo + 1 < 3)
    throw std::invalid_argument("scaling_study: need at least 3 scales");
  std::vector<Weight> weights;
  for (double r : opt.r_values)
    weights.push_back({0.0, r, true});
  ScalingStudy study;
  std::vector<std::vector<double>> logs(opt.r_values.size());
  std::vector<double> log_m;
  for (int k = opt.k_lo; k <= opt.k_hi; ++k) {
    const double m = std::ldexp(1.0, k);
    InvariantLatticeSpec spec = opt.lattice;
    spec.b_max = opt.lattice.b_max / m;
    const Lattice lattice = invariant_lattice(spec);
    NormAccumulator acc(lattice, weights);
    kernel_stream(dyadic_piece_symbol(f, chi, m), lattice, opt.kernel,
                  [&](const LatticeBlock &b) { acc.add(b); });
    log_m.push_back(k);
    for (std::size_t i = 0; i < opt.r_values.size(); ++i) {
      const double v = acc.weighted_l2(i) * acc.weighted_l2(i);
      study.rows.push_back({m, opt.r_values[i], v});
      logs[i].push_back(v > 0.0 ? std::log2(v) : NAN);
    }
  }
  for (std::size_t i = 0; i < opt.r_values.size(); ++i) {
    const double r = opt.r_values[i];
    study.fits.push_back({r, 3.0 - 2.0 * r, fit_line(log_m, logs[i])});
  }
  return study;
}

PlancherelCheck plancherel_check(const SpectralSymbol &symbol, const Lattice &lattice,
                                 const KernelOptions &opt) {
  NormAccumulator acc(lattice, {});
  PlancherelCheck c;
  c.diagnostics = kernel_stream(symbol, lattice, opt,
                                [&](const LatticeBlock &b) { acc.add(b); });
  c.grid_l2 = acc.l2();
  c.spectral_l2 = spectral_l2_norm(
      symbol, build_eta_grid(opt.grid, symbol, lattice.extents(), opt.enforce_phase,
                                         symbol.is_radial()));
  c.relative_deviation =
      c.spectral_l2 > 0.0 ? std::abs(c.grid_l2 - c.spectral_l2) / c.spectral_l2 : c.grid_l2;
  return c;
}

DeviationReport compare_values(const VectorXcd &a, const VectorXcd &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("compare_values: size mismatch");
  DeviationReport d;
  if (a.size() == 0)
    return d;
  d.max_abs = (a - b).cwiseAbs().maxCoeff();
  d.scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return d;
}

namespace {

int dyadic_exponent(double t) {
  if (!(t > 0.0))
    throw std::invalid_argument("dilation: t must be positive");
  const double l = std::log2(t);
  const double k = std::round(l);
  if (std::abs(l - k) > 1e-12)
    throw std::invalid_argument("dilation: log2 t must be an integer");
  return static_cast<int>(k);
}

} // namespace

DeviationReport dilation_covariance_check(const Multiplier &f, const DyadicCutoff &chi,
                                          double t, const std::vector<Point> &points,
                                          int k_min, const KernelOptions &opt) {
  const int shift = dyadic_exponent(t);
  const KernelField lhs = kernel_eval_F(dilated(f, t), chi, points, k_min - shift, opt);
  std::vector<Point> shrunk;
  shrunk.reserve(points.size());
  for (const Point &p : points)
    shrunk.push_back(dilate(1.0 / std::sqrt(t), p));
  const KernelField rhs = kernel_eval_F(f, chi, shrunk, k_min, opt);
  return compare_values(lhs.values, std::pow(t, -0.5 * kHomogeneousDimension) * rhs.values);
}

L1Dilation dilation_l1_check(const Multiplier &f, const DyadicCutoff &chi, double t,
                             const InvariantLatticeSpec &lattice, int k_min,
                             const KernelOptions &opt) {
  const int shift = dyadic_exponent(t);
  // The dilated kernel lives on δ_{√t} of the reference lattice.
  InvariantLatticeSpec wide = lattice;
  wide.a_max *= std::sqrt(t);
  wide.b_max *= t;
  const KernelField lhs =
      kernel_eval_F(dilated(f, t), chi, invariant_lattice(wide), k_min - shift, opt);
  const KernelField rhs = kernel_eval_F(f, chi, invariant_lattice(lattice), k_min, opt);
  L1Dilation d;
  d.l1_dilated = l1_norm(lhs);
  d.l1_reference = l1_norm(rhs);
  d.relative_deviation = std::abs(d.l1_dilated - d.l1_reference) / d.l1_reference;
  return d;
}

DeviationReport rotation_invariance_check(const SpectralSymbol &symbol,
                                          const Matrix3d &rotation,
                                          const std::vector<Point> &points,
                                          const KernelOptions &opt) {
  std::vector<Point> turned;
  turned.reserve(points.size());
  for (const Point &p : points)
    turned.push_back(rotate(rotation, p));
  const KernelField a = kernel_eval(symbol, points, opt);
  const KernelField b = kernel_eval(symbol, turned, opt);
  return compare_values(b.values, a.values);
}

bool RefinementTrend::monotone(double floor) const {
  for (std::size_t i = 1; i < deviations.size(); ++i)
    if (deviations[i] > deviations[i - 1] && deviations[i] > floor)
      return false;
  return true;
}

RefinementTrend rotation_refinement(const SpectralSymbol &symbol,
                                    const Matrix3d &rotation,
                                    const std::vector<Point> &points, int levels,
                                    const KernelOptions &opt) {
  RefinementTrend trend;
  for (int level = 0; level < levels; ++level) {
    KernelOptions o = opt;
    o.grid.scale = opt.grid.scale * std::ldexp(1.0, level);
    o.grid.break_quarter_turn = true;
    const DeviationReport d = rotation_invariance_check(symbol, rotation, points, o);
    trend.scales.push_back(o.grid.scale);
    trend.deviations.push_back(d.relative());
    Extents e;
    for (const Point &p : points) {
      e.x = std::max({e.x, p.x.norm(), rotate(rotation, p).x.norm()});
      e.y = std::max({e.y, p.y.norm(), rotate(rotation, p).y.norm()});
    }
    trend.nodes.push_back(build_eta_grid(o.grid, symbol, e, false).node_count());
  }
  return trend;
}

namespace {

double truncated_weighted_norm(const Multiplier &f, const DyadicCutoff &chi,
                               const Lattice &lattice, int k_min, double alpha,
                               double r, const KernelOptions &opt) {
  NormAccumulator acc(lattice, {Weight{alpha, r, false}});
  KernelOptions o = opt;
  o.grid.k_min = k_min;
  kernel_stream(truncated_symbol(f, chi, k_min), lattice, o,
                [&](const LatticeBlock &b) { acc.add(b); });
  return acc.weighted_l2(0);
}

} // namespace

StabilityCheck extent_doubling_check(const Multiplier &f, const DyadicCutoff &chi,
                                     const InvariantLatticeSpec &lattice, int k_min,
                                     double alpha, double r, const KernelOptions &opt) {
  InvariantLatticeSpec wide = lattice;
  wide.a_max *= 2.0;
  wide.b_max *= 2.0;
  wide.n_a *= 2;
  wide.n_u *= 2;
  wide.n_v *= 2;
  return {truncated_weighted_norm(f, chi, invariant_lattice(lattice), k_min, alpha, r, opt),
          truncated_weighted_norm(f, chi, invariant_lattice(wide), k_min, alpha, r, opt)};
}

StabilityCheck dyadic_tail_check(const Multiplier &f, const DyadicCutoff &chi,
                                 const InvariantLatticeSpec &lattice, int k_min,
                                 int extra, double alpha, double r,
                                 const KernelOptions &opt) {
  const Lattice l = invariant_lattice(lattice);
  return {truncated_weighted_norm(f, chi, l, k_min, alpha, r, opt),
          truncated_weighted_norm(f, chi, l, k_min - extra, alpha, r, opt)};
}

std::vector<Multiplier> equal_sobolev_family(int count, double s, Interval support) {
  if (count < 1)
    throw std::invalid_argument("equal_sobolev_family: count must be positive");
  const double half = 0.5 * support.width();
  const double w_lo = 0.4 * half, w_hi = half;
  std::vector<Multiplier> out;
  for (int i = 0; i < count; ++i) {
    const double w = count == 1 ? w_hi : w_lo + (w_hi - w_lo) * i / (count - 1);
    // centres spread by the golden-ratio sequence over the admissible range
    const double frac = std::fmod(0.5 + i * 0.6180339887498949, 1.0);
    const double c = support.lo + w + (support.width() - 2.0 * w) * frac;
    const double norm = sobolev_norm(bump_multiplier(c, w), s).value;
    out.push_back(bump_multiplier(c, w, 1.0 / norm));
  }
  return out;
}

double FamilyStudy::ratio() const {
  double lo = INFINITY, hi = 0.0;
  for (const FamilyMember &m : members) {
    lo = std::min(lo, m.l1);
    hi = std::max(hi, m.l1);
  }
  return hi / lo;
}

FamilyStudy l1_family_study(const std::vector<Multiplier> &family,
                            const DyadicCutoff &chi, double s,
                            const InvariantLatticeSpec &lattice, int k_min,
                            double alpha1, double alpha2, double r,
                            const KernelOptions &opt) {
  const Lattice l = invariant_lattice(lattice);
  FamilyStudy study;
  for (const Multiplier &f : family) {
    const KernelField field = kernel_eval_F(f, chi, l, k_min, opt);
    FamilyMember m;
    m.name = f.name();
    m.sobolev = sobolev_norm(f, s).value;
    m.holder = holder_chain(field, alpha1, alpha2, r);
    m.l1 = m.holder.l1;
    study.members.push_back(m);
  }
  return study;
}

} // namespace nilmult

#include "nilmult/multiplier.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "nilmult/quadrature.hpp"

namespace nilmult {

Multiplier::Multiplier(std::function<double(double)> fn, Interval support,
                       std::string name)
    : fn_(std::move(fn)), support_(support), name_(std::move(name)) {
  if (!(support_.lo > 0.0) || !(support_.hi >= support_.lo) ||
      !std::isfinite(support_.hi))
    throw std::invalid_argument("Multiplier: support must satisfy 0 < lo <= hi");
}

Multiplier bump_multiplier(double center, double half_width, double amplitude) {
  if (!(half_width > 0.0) || !(center - half_width > 0.0))
    throw std::invalid_argument("bump_multiplier: support must lie in (0, inf)");
  auto fn = [=](double l) {
    const double z = (l - center) / half_width;
    const double q = 1.0 - z * z;
    return q > 0.0 ? amplitude * std::exp(-1.0 / q) : 0.0;
  };
  return {fn, {center - half_width, center + half_width},
          "bump(" + std::to_string(center) + "," + std::to_string(half_width) + ")"};
}

Multiplier dilated(const Multiplier &f, double t) {
  if (!(t > 0.0))
    throw std::invalid_argument("dilated: scale must be positive");
  return {[f, t](double l) { return f(t * l); },
          {f.support().lo / t, f.support().hi / t},
          f.name() + "@" + std::to_string(t)};
}

namespace {

double bump_density(double v) {
  if (v <= 0.0 || v >= 1.0)
    return 0.0;
  return std::exp(-1.0 / (v * (1.0 - v)));
}

struct StepTables {
  GaussRule rule = gauss_legendre(48, 0.0, 1.0);
  double total = 0.0;

  StepTables() {
    AdaptiveOptions opt;
    opt.abs_tol = 1e-18;
    opt.rel_tol = 1e-15;
    total = integrate_adaptive(bump_density, 0.0, 1.0, opt).value;
  }
};

const StepTables &step_tables() {
  static const StepTables tables;
  return tables;
}

double lower_half_step(double u) {
  const StepTables &t = step_tables();
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < t.rule.size(); ++i)
    acc += t.rule.weights[i] * bump_density(u * t.rule.nodes[i]);
  return u * acc.value() / t.total;
}

} // namespace

double smooth_step(double u) {
  if (u <= 0.0)
    return 0.0;
  if (u >= 1.0)
    return 1.0;
  return u <= 0.5 ? lower_half_step(u) : 1.0 - lower_half_step(1.0 - u);
}

double DyadicCutoff::operator()(double t) const {
  if (!(t > 0.5) || !(t < 2.0))
    return 0.0;
  const double l = std::log2(t);
  return smooth_step(l + 1.0) - smooth_step(l);
}

DyadicCutoff make_chi() { return {}; }

cdouble SpectralSymbol::operator()(int n, double mu, const Vector3d &eta) const {
  if (n < 0)
    return 0.0;
  const double r = eta.norm();
  if (r < eta_lo || r > eta_hi)
    return 0.0;
  const double lambda = (2.0 * n + 1.0) * r + mu * mu;
  if (!lambda_support.contains(lambda))
    return 0.0;
  if (radial)
    return radial(lambda, r);
  if (joint)
    return joint(lambda, eta);
  return 0.0;
}

double SpectralSymbol::radial_value(int n, double mu, double eta_norm) const {
  if (n < 0 || eta_norm < eta_lo || eta_norm > eta_hi)
    return 0.0;
  const double lambda = (2.0 * n + 1.0) * eta_norm + mu * mu;
  if (!lambda_support.contains(lambda))
    return 0.0;
  return radial(lambda, eta_norm);
}

int SpectralSymbol::n_max(double eta_norm) const {
  if (!(eta_norm > 0.0))
    throw std::invalid_argument("n_max: |η| must be positive");
  const double q = (lambda_support.hi / eta_norm - 1.0) / 2.0;
  return q < 0.0 ? -1 : static_cast<int>(std::floor(q));
}

double SpectralSymbol::mu_extent() const { return std::sqrt(lambda_support.hi); }

SpectralSymbol reparametrize(JointMultiplier g, Interval lambda_support,
                             double eta_lo, double eta_hi) {
  SpectralSymbol s;
  s.joint = std::move(g);
  s.lambda_support = lambda_support;
  s.eta_lo = eta_lo;
  s.eta_hi = eta_hi;
  return s;
}

SpectralSymbol radial_symbol(std::function<double(double, double)> g,
                             Interval lambda_support, double eta_lo,
                             double eta_hi, std::string name) {
  SpectralSymbol s;
  s.radial = g;
  s.joint = [g](double l, const Vector3d &eta) { return cdouble(g(l, eta.norm())); };
  s.lambda_support = lambda_support;
  s.eta_lo = eta_lo;
  s.eta_hi = eta_hi;
  s.name = std::move(name);
  return s;
}

SpectralSymbol zero_symbol(Interval lambda_support) {
  SpectralSymbol s;
  s.lambda_support = lambda_support;
  s.name = "zero";
  return s;
}

JointMultiplier dyadic_piece(const Multiplier &f, const DyadicCutoff &chi,
                             double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("dyadic_piece: scale must be positive");
  return [f, chi, scale](double l, const Vector3d &eta) {
    return cdouble(f(l) * chi(eta.norm() / scale));
  };
}

SpectralSymbol dyadic_piece_symbol(const Multiplier &f, const DyadicCutoff &chi,
                                   double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("dyadic_piece: scale must be positive");
  return radial_symbol(
      [f, chi, scale](double l, double r) { return f(l) * chi(r / scale); },
      f.support(), 0.5 * scale, 2.0 * scale,
      f.name() + "*chi(|eta|/" + std::to_string(scale) + ")");
}

SpectralSymbol dyadic_sum_symbol(const Multiplier &f, const DyadicCutoff &chi,
                                 int k_min, int k_max) {
  if (k_min > k_max)
    throw std::invalid_argument("dyadic_sum_symbol: k_min exceeds k_max");
  auto g = [f, chi, k_min, k_max](double l, double r) {
    const double v = f(l);
    if (v == 0.0)
      return 0.0;
    CompensatedSum<double> acc;
    for (int k = k_min; k <= k_max; ++k)
      acc += chi(std::ldexp(r, -k));
    return v * acc.value();
  };
  return radial_symbol(g, f.support(), std::ldexp(0.5, k_min),
                       std::ldexp(2.0, k_max),
                       f.name() + "*sum_chi[" + std::to_string(k_min) + "," +
                           std::to_string(k_max) + "]");
}

int top_dyadic_index(const Interval &support) {
  int k = static_cast<int>(std::floor(std::log2(support.hi))) - 2;
  while (!(std::ldexp(1.0, k - 1) > support.hi))
    ++k;
  return k;
}

double sobolev_norm_sampled(const std::function<double(double)> &f,
                            double span, int samples, double s) {
  if (s < 0.0)
    throw std::invalid_argument("sobolev_norm: order must be nonnegative");
  const double h = span / samples;
  std::vector<cdouble> in(samples), out;
  for (int i = 0; i < samples; ++i)
    in[i] = f(i * h);
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  const double dtau = kTwoPi / (samples * h);
  CompensatedSum<double> acc;
  for (int j = 0; j < samples; ++j) {
    const int freq = j < samples / 2 ? j : j - samples;
    const double tau = freq * dtau;
    acc += std::pow(1.0 + tau * tau, s) * std::norm(out[j]);
  }
  // |F̂|^2 = h^2 |X_j|^2, dτ / 2π = 1 / (N h)
  return std::sqrt(acc.value() * h / samples);
}

NormEstimate sobolev_norm(const Multiplier &f, double s,
                          const SobolevOptions &opt) {
  const double span = 2.0 * f.support().hi;
  auto fn = [&f](double l) { return f(l); };
  NormEstimate e;
  e.value = sobolev_norm_sampled(fn, span, opt.samples, s);
  e.refined = sobolev_norm_sampled(fn, span, 2 * opt.samples, s);
  e.discrepancy = e.refined > 0.0 ? std::abs(e.refined - e.value) / e.refined : 0.0;
  if (e.discrepancy > opt.tolerance)
    throw std::runtime_error("sobolev_norm: sampling resolution insufficient (" +
                             std::to_string(e.discrepancy) + " relative change)");
  return e;
}

Multiplier default_localizer() { return bump_multiplier(1.25, 0.75); }

ScaleInvariantNorm mh_norm(const std::function<double(double)> &f, double s,
                           const Multiplier &localizer,
                           const SobolevOptions &opt) {
  ScaleInvariantNorm out{0.0, 1.0, 0.0};
  for (int j = -40; j <= 40; ++j) {
    const double t = std::exp2(j / 4.0);
    Multiplier piece([&](double l) { return localizer(l) * f(t * l); },
                     localizer.support());
    const NormEstimate e = sobolev_norm(piece, s, opt);
    out.max_discrepancy = std::max(out.max_discrepancy, e.discrepancy);
    if (e.value > out.value) {
      out.value = e.value;
      out.best_scale = t;
    }
  }
  return out;
}

} // namespace nilmult

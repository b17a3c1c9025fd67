#pragma once

#include <functional>
#include <limits>
#include <string>

#include "nilmult/types.hpp"

namespace nilmult {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double width() const { return hi - lo; }
};

/// Real function of the spectral variable with declared compact support
/// inside (0, inf). Evaluation outside the support returns 0.
class Multiplier {
public:
  Multiplier(std::function<double(double)> fn, Interval support,
             std::string name = "custom");

  double operator()(double lambda) const {
    return support_.contains(lambda) ? fn_(lambda) : 0.0;
  }

  const Interval &support() const { return support_; }
  const std::string &name() const { return name_; }

private:
  std::function<double(double)> fn_;
  Interval support_;
  std::string name_;
};

/// exp(-1 / (1 - ((λ - center)/half_width)^2)) on (center ± half_width).
Multiplier bump_multiplier(double center, double half_width,
                           double amplitude = 1.0);

/// λ ↦ F(t λ), with the support divided by t.
Multiplier dilated(const Multiplier &f, double t);

/// The smooth step Φ: 0 below 0, 1 above 1, normalised primitive of
/// exp(-1/(v(1-v))) in between.
double smooth_step(double u);

/// χ(t) = Φ(log2 t + 1) - Φ(log2 t). Supported in [1/2, 2] and
/// Σ_k χ(2^{-k} t) = 1 for t > 0.
class DyadicCutoff {
public:
  double operator()(double t) const;
};

DyadicCutoff make_chi();

using JointMultiplier = std::function<cdouble(double lambda, const Vector3d &eta)>;

/// m(n, μ, η) = G((2n+1)|η| + μ^2, η) together with its support data.
struct SpectralSymbol {
  JointMultiplier joint;
  /// Set when G depends on η only through |η| and is real. The kernel
  /// engine then shares symbol tables between nodes of equal |η|.
  std::function<double(double lambda, double eta_norm)> radial;
  Interval lambda_support;
  double eta_lo = 0.0;
  double eta_hi = std::numeric_limits<double>::infinity();
  std::string name = "custom";

  cdouble operator()(int n, double mu, const Vector3d &eta) const;
  double radial_value(int n, double mu, double eta_norm) const;

  bool is_radial() const { return static_cast<bool>(radial); }
  bool is_zero() const { return !joint && !radial; }

  /// Largest n with (2n+1)|η| <= max K, or -1 when there is none.
  int n_max(double eta_norm) const;
  /// √(max K).
  double mu_extent() const;
};

SpectralSymbol reparametrize(JointMultiplier g, Interval lambda_support,
                             double eta_lo = 0.0,
                             double eta_hi = std::numeric_limits<double>::infinity());

/// Real radial symbol G(λ, |η|).
SpectralSymbol radial_symbol(std::function<double(double, double)> g,
                             Interval lambda_support, double eta_lo,
                             double eta_hi, std::string name = "radial");

/// The identically zero symbol.
SpectralSymbol zero_symbol(Interval lambda_support);

/// F_M(λ, η) = F(λ) χ(|η| / M).
JointMultiplier dyadic_piece(const Multiplier &f, const DyadicCutoff &chi,
                             double scale);

/// The piece F_M as a radial symbol supported on |η| ∈ [M/2, 2M].
SpectralSymbol dyadic_piece_symbol(const Multiplier &f, const DyadicCutoff &chi,
                                   double scale);

/// F(λ) Σ_{k=k_min}^{k_max} χ(|η| / 2^k) as one radial symbol.
SpectralSymbol dyadic_sum_symbol(const Multiplier &f, const DyadicCutoff &chi,
                                 int k_min, int k_max);

/// Smallest k with 2^{k-1} > max K.
int top_dyadic_index(const Interval &support);

/// Result of a spectral norm computed at two resolutions.
struct NormEstimate {
  double value;       ///< at the base resolution
  double refined;     ///< at twice the resolution
  double discrepancy; ///< |refined - value| / refined
};

struct SobolevOptions {
  int samples = 1 << 14;
  double tolerance = 0.01;
};

/// (∫ (1+τ^2)^s |F̂(τ)|^2 dτ / 2π)^{1/2} with F̂(τ) = ∫ F(λ) e^{-iτλ} dλ.
/// Throws std::runtime_error when doubling the sample count changes the
/// result by more than the tolerance.
NormEstimate sobolev_norm(const Multiplier &f, double s,
                          const SobolevOptions &opt = {});

/// Single-resolution spectral sum for a function sampled on [0, span).
double sobolev_norm_sampled(const std::function<double(double)> &f,
                            double span, int samples, double s);

/// Auxiliary bump for the scale-invariant norm: supported in [1/2, 2].
Multiplier default_localizer();

struct ScaleInvariantNorm {
  double value;      ///< max over the scale grid (a lower bound of the sup)
  double best_scale; ///< scale attaining it
  double max_discrepancy;
};

/// max over t = 2^{j/4}, j = -40..40, of ‖localizer · F(t ·)‖_{W_2^s}.
ScaleInvariantNorm mh_norm(const std::function<double(double)> &f, double s,
                           const Multiplier &localizer,
                           const SobolevOptions &opt = {});

} // namespace nilmult

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilmult/kernel.hpp"
#include "nilmult/norms.hpp"

namespace nilmult {

/// The reference multiplier: the widest bump inside K = [1, 4].
Multiplier reference_bump();

/// Reproducible pseudo-random group points with |x_i|, |y_i| <= extent.
std::vector<Point> random_points(std::size_t count, double extent, std::uint64_t seed);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  int used = 0;
};

/// Least squares; throws std::invalid_argument with fewer than 3 points.
LineFit fit_line(const std::vector<double> &xs, const std::vector<double> &ys);

struct ScalingOptions {
  std::vector<double> r_values{0.0, 0.5, 1.0, 1.4};
  int k_lo = -4; ///< M runs over 2^k_lo .. 2^k_hi
  int k_hi = 0;
  /// The y-extent is b_max / M so every piece is sampled on the same
  /// dilation-adapted lattice.
  InvariantLatticeSpec lattice{80, 16.0, 128, 64, 32.0};
  KernelOptions kernel;
};

struct ScalingRow {
  double M;
  double r;
  double value; ///< ∫ | |y|^r K_{F_M} |^2
};

struct ScalingFit {
  double r;
  double expected; ///< 3 - 2r
  LineFit fit;     ///< log2 value against log2 M
  bool within(double tol) const { return std::abs(fit.slope - expected) <= tol; }
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  std::vector<ScalingFit> fits;
};

ScalingStudy scaling_study(const Multiplier &f, const DyadicCutoff &chi,
                           const ScalingOptions &opt = {});

struct PlancherelCheck {
  double grid_l2;
  double spectral_l2;
  double relative_deviation;
  KernelDiagnostics diagnostics;
};

PlancherelCheck plancherel_check(const SpectralSymbol &symbol, const Lattice &lattice,
                                 const KernelOptions &opt = {});

struct DeviationReport {
  double max_abs = 0.0;
  double scale = 0.0; ///< max |K| over the compared values
  double relative() const { return scale > 0.0 ? max_abs / scale : max_abs; }
};

DeviationReport compare_values(const VectorXcd &a, const VectorXcd &b);

/// K_{F(t·)}(p) against t^{-9/2} K_F(δ_{t^{-1/2}} p) for the kernels
/// truncated at k_min (the dilated side at k_min - log2 t). log2 t must be
/// an integer so that both sides use matching dyadic shells.
DeviationReport dilation_covariance_check(const Multiplier &f, const DyadicCutoff &chi,
                                          double t, const std::vector<Point> &points,
                                          int k_min, const KernelOptions &opt = {});

struct L1Dilation {
  double l1_dilated;
  double l1_reference;
  double relative_deviation;
};

/// ‖K_{F(t·)}‖_1 against ‖K_F‖_1 on invariant lattices related by δ_{√t}.
L1Dilation dilation_l1_check(const Multiplier &f, const DyadicCutoff &chi, double t,
                             const InvariantLatticeSpec &lattice, int k_min,
                             const KernelOptions &opt = {});

/// max |K(Rp) - K(p)| / max |K(p)| over the points.
DeviationReport rotation_invariance_check(const SpectralSymbol &symbol,
                                          const Matrix3d &rotation,
                                          const std::vector<Point> &points,
                                          const KernelOptions &opt = {});

struct RefinementTrend {
  std::vector<double> scales;
  std::vector<double> deviations;
  std::vector<long> nodes;
  /// Each level no worse than the previous, or both below the floor.
  bool monotone(double floor = 1e-12) const;
};

/// Rotation deviation at grid scales 1, 2, 4, ... with the azimuthal count
/// kept off multiples of 4 so the quarter turn is not a grid symmetry.
RefinementTrend rotation_refinement(const SpectralSymbol &symbol,
                                    const Matrix3d &rotation,
                                    const std::vector<Point> &points, int levels,
                                    const KernelOptions &opt = {});

struct StabilityCheck {
  double base;
  double refined;
  double relative_change() const { return std::abs(refined - base) / std::abs(base); }
};

/// Weighted L^2 norm (weight (1+|p|_δ)^alpha (1+|y|)^r) of the truncated F
/// kernel on the lattice and on the lattice with both extents doubled at
/// the same node density.
StabilityCheck extent_doubling_check(const Multiplier &f, const DyadicCutoff &chi,
                                     const InvariantLatticeSpec &lattice, int k_min,
                                     double alpha, double r,
                                     const KernelOptions &opt = {});

/// The same norm with the dyadic truncation moved from k_min to k_min - extra.
StabilityCheck dyadic_tail_check(const Multiplier &f, const DyadicCutoff &chi,
                                 const InvariantLatticeSpec &lattice, int k_min,
                                 int extra, double alpha, double r,
                                 const KernelOptions &opt = {});

/// `count` bumps with centres and widths spread inside `support`, each
/// scaled to unit W_2^s norm.
std::vector<Multiplier> equal_sobolev_family(int count, double s, Interval support);

struct FamilyMember {
  std::string name;
  double sobolev;
  double l1;
  HolderCheck holder;
};

struct FamilyStudy {
  std::vector<FamilyMember> members;
  double ratio() const; ///< max l1 / min l1
};

FamilyStudy l1_family_study(const std::vector<Multiplier> &family,
                            const DyadicCutoff &chi, double s,
                            const InvariantLatticeSpec &lattice, int k_min,
                            double alpha1, double alpha2, double r,
                            const KernelOptions &opt = {});

} // namespace nilmult

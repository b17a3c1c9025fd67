#pragma once

#include <vector>

#include "nilmult/kernel.hpp"

namespace nilmult {

/// Weight (1 + |p|_δ)^alpha (1 + |y|)^r, or |y|^r alone when y_only is set.
struct Weight {
  double alpha = 0.0;
  double r = 0.0;
  bool y_only = false;

  double operator()(const Vector3d &x, const Vector3d &y) const;
};

/// Lattice quadratures of |K|, |K|^2 and |w K|^2, fed block by block so that
/// streamed kernels need not be stored.
class NormAccumulator {
public:
  NormAccumulator(const Lattice &lattice, std::vector<Weight> weights);

  void add(const LatticeBlock &block);
  void add(const MatrixXcd &values); ///< the whole field at once

  double l1() const { return l1_.value(); }
  double l2() const { return std::sqrt(l2_.value()); }
  /// ‖w_i K‖_2 for the i-th weight.
  double weighted_l2(std::size_t i) const { return std::sqrt(weighted_[i].value()); }

private:
  const Lattice &lattice_;
  std::vector<Weight> weights_;
  Eigen::ArrayXd y_weights_, y_root_;
  std::vector<Eigen::ArrayXd> y_factor_;
  CompensatedSum<double> l1_, l2_;
  std::vector<CompensatedSum<double>> weighted_;
};

/// ∫ |(1+|p|_δ)^alpha (1+|y|)^r K(p)|^2 dp, square-rooted.
double weighted_l2_norm(const KernelField &field, double alpha, double r);

/// (∫ | |y|^r K |^2)^{1/2}.
double y_weighted_l2_norm(const KernelField &field, double r);

double l1_norm(const KernelField &field);
double l2_norm(const KernelField &field);

/// Σ_lattice w (1+|p|_δ)^{-2 alpha} (1+|y|)^{-2r}: the squared L^2 norm of
/// the reciprocal weight.
double dual_weight_integral(const Lattice &lattice, double alpha, double r);

struct HolderCheck {
  double l1;
  double weighted_l2;
  double dual;  ///< square root of dual_weight_integral
  double bound; ///< weighted_l2 * dual
  bool holds() const { return l1 <= bound * (1.0 + 1e-12); }
};

/// ‖K‖_1 ≤ ‖(1+|p|_δ)^{a1+a2} (1+|y|)^r K‖_2 ‖reciprocal weight‖_2.
HolderCheck holder_chain(const KernelField &field, double alpha1, double alpha2,
                         double r);

struct NormReport {
  double alpha = 0.0;
  double r = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double weighted_l2 = 0.0;
  double spectral_l2 = 0.0;
  double holder_bound = 0.0;
};

} // namespace nilmult

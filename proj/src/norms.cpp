#include "nilmult/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace nilmult {

double Weight::operator()(const Vector3d &x, const Vector3d &y) const {
  const double yn = y.norm();
  if (y_only)
    return r == 0.0 ? 1.0 : std::pow(yn, r);
  const double p = x.norm() + std::sqrt(yn);
  return std::pow(1.0 + p, alpha) * std::pow(1.0 + yn, r);
}

NormAccumulator::NormAccumulator(const Lattice &lattice, std::vector<Weight> weights)
    : lattice_(lattice), weights_(std::move(weights)), weighted_(weights_.size()) {
  const Eigen::Index ny = lattice_.y_count();
  y_weights_.resize(ny);
  Eigen::ArrayXd y_norm(ny);
  for (Eigen::Index iy = 0; iy < ny; ++iy) {
    y_weights_[iy] = lattice_.y_weight(iy);
    y_norm[iy] = lattice_.y_at(iy).norm();
  }
  y_root_ = y_norm.sqrt();
  for (const Weight &w : weights_) {
    if (w.y_only)
      y_factor_.push_back(w.r == 0.0 ? Eigen::ArrayXd::Ones(ny).eval()
                                     : y_norm.pow(2.0 * w.r).eval());
    else
      y_factor_.push_back((1.0 + y_norm).pow(2.0 * w.r));
  }
}

void NormAccumulator::add(const LatticeBlock &block) {
  if (block.values.cols() != lattice_.y_count())
    throw std::invalid_argument("NormAccumulator: block width does not match the lattice");
  for (Eigen::Index row = 0; row < block.values.rows(); ++row) {
    const Eigen::Index ix = block.x_begin + row;
    const double wx = lattice_.x_weights[ix];
    const double xn = lattice_.xs[ix].norm();
    const Eigen::ArrayXd mag = block.values.row(row).transpose().cwiseAbs().array();
    const Eigen::ArrayXd sq = y_weights_ * mag.square();
    l1_ += wx * (y_weights_ * mag).sum();
    l2_ += wx * sq.sum();
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const Weight &w = weights_[i];
      if (w.y_only || w.alpha == 0.0)
        weighted_[i] += wx * (y_factor_[i] * sq).sum();
      else
        weighted_[i] +=
            wx * ((1.0 + xn + y_root_).pow(2.0 * w.alpha) * y_factor_[i] * sq).sum();
    }
  }
}

void NormAccumulator::add(const MatrixXcd &values) { add(LatticeBlock{0, values}); }

namespace {

const Lattice &require_lattice(const KernelField &field) {
  if (!field.is_lattice())
    throw std::invalid_argument("norms need a kernel sampled on an integration lattice");
  return *field.lattice;
}

NormAccumulator accumulate(const KernelField &field, std::vector<Weight> weights) {
  NormAccumulator acc(require_lattice(field), std::move(weights));
  acc.add(field.lattice_values);
  return acc;
}

} // namespace

double weighted_l2_norm(const KernelField &field, double alpha, double r) {
  if (alpha < 0.0)
    throw std::invalid_argument("weighted_l2_norm: alpha must be nonnegative");
  return accumulate(field, {Weight{alpha, r, false}}).weighted_l2(0);
}

double y_weighted_l2_norm(const KernelField &field, double r) {
  return accumulate(field, {Weight{0.0, r, true}}).weighted_l2(0);
}

double l1_norm(const KernelField &field) { return accumulate(field, {}).l1(); }

double l2_norm(const KernelField &field) { return accumulate(field, {}).l2(); }

double dual_weight_integral(const Lattice &lattice, double alpha, double r) {
  CompensatedSum<double> acc;
  for (Eigen::Index ix = 0; ix < lattice.x_count(); ++ix) {
    const double xn = lattice.xs[ix].norm();
    double row = 0.0;
    for (Eigen::Index iy = 0; iy < lattice.y_count(); ++iy) {
      const double yn = lattice.y_at(iy).norm();
      row += lattice.y_weight(iy) * std::pow(1.0 + xn + std::sqrt(yn), -2.0 * alpha) *
             std::pow(1.0 + yn, -2.0 * r);
    }
    acc += lattice.x_weights[ix] * row;
  }
  return acc.value();
}

HolderCheck holder_chain(const KernelField &field, double alpha1, double alpha2,
                         double r) {
  const Lattice &lattice = require_lattice(field);
  const double alpha = alpha1 + alpha2;
  NormAccumulator acc = accumulate(field, {Weight{alpha, r, false}});
  HolderCheck h;
  h.l1 = acc.l1();
  h.weighted_l2 = acc.weighted_l2(0);
  h.dual = std::sqrt(dual_weight_integral(lattice, alpha, r));
  h.bound = h.weighted_l2 * h.dual;
  return h;
}

} // namespace nilmult

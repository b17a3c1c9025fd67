#pragma once

#include <string>
#include <vector>

#include "nilmult/group.hpp"
#include "nilmult/multiplier.hpp"
#include "nilmult/types.hpp"

namespace nilmult {

/// Resolution requests for the η-grid and the μ-grid.
struct GridSpec {
  int n_r = 8;
  int n_theta = 12;
  int n_phi = 24;
  int n_mu = 65;
  int k_min = -4;
  /// Multiplies the node counts and divides the phase limit.
  double scale = 1.0;
  /// Raise node counts until every shell meets the phase limit.
  bool auto_resolve = true;
  /// Largest admissible phase increment between neighbouring η nodes.
  double phase_limit = kPi;
  /// Round n_phi up to 2 mod 4 so a quarter turn about e3 is not an exact
  /// symmetry of the grid.
  bool break_quarter_turn = false;
  /// Hard cap on the number of η nodes (or rings, see build_eta_grid).
  long max_nodes = 3'000'000;

  void validate() const;
};

/// Largest |x| and |y| over the evaluation points.
struct Extents {
  double x = 0.0;
  double y = 0.0;
};

/// Nodes of equal |η| and polar angle; the azimuth is uniform.
struct Ring {
  double rho;
  double cos_theta;
  double sin_theta;
  double weight; ///< ρ^2 w_ρ w_θ 2π/n_φ, the volume weight of each node
  int n_phi;
};

struct Shell {
  int index; ///< the shell is [2^index, 2^{index+1}]
  double lo, hi;
  int n_r, n_theta, n_phi;
  double phase_radial, phase_polar, phase_azimuthal;
  std::vector<Ring> rings;

  double max_phase() const;
};

/// Dyadic-shell η-grid with per-node μ-grids.
struct EtaGrid {
  std::vector<Shell> shells;
  int n_mu = 65;
  double lambda_hi = 0.0; ///< max of the λ-support
  double phase_limit = kPi;
  Extents extents;

  long node_count() const;
  double max_phase() const;
  std::string describe() const;
};

/// n_cap(|η|) = floor((max K/|η| - 1)/2) + 2, throws above the degree cap.
int laguerre_cap(double lambda_hi, double rho);

/// Half-width √(max K - |η|) of the μ-grid at a node.
double mu_half_width(double lambda_hi, double rho);

/// Builds the η-grid covering the symbol's η-support (bounded below by
/// 2^{k_min - 1} when the symbol does not bound it) for points within the
/// given extents. Throws std::runtime_error when the phase limit cannot be
/// met within max_nodes, or when auto_resolve is off and the limit is
/// exceeded while enforce_phase is set. With count_rings the cap applies
/// to rings instead of nodes, for callers that sum the azimuth in closed
/// form.
EtaGrid build_eta_grid(const GridSpec &spec, const SpectralSymbol &symbol,
                       const Extents &extents, bool enforce_phase = true,
                       bool count_rings = false);

/// Product integration lattice: points (x_i, (y_planar_j, y_vertical_k)).
/// The Cartesian kind is a tensor grid. The invariant kind reduces the
/// integral of a rotation-invariant function over R^6 to x = (a,0,0) and
/// y = (u, v, 0) with v >= 0 the distance of y from the x-axis; the
/// Jacobian 4πa^2 · 2πv is folded into the weights.
struct Lattice {
  enum class Kind { cartesian, invariant };

  Kind kind = Kind::cartesian;
  std::vector<Vector3d> xs;
  VectorXd x_weights;
  std::vector<Eigen::Vector2d> planar;
  VectorXd planar_weights;
  VectorXd vertical;
  VectorXd vertical_weights;
  /// When both are nonempty, planar[i * planar_v.size() + j] =
  /// (planar_u[i], planar_v[j]).
  VectorXd planar_u, planar_v;
  std::string label;

  Eigen::Index x_count() const { return static_cast<Eigen::Index>(xs.size()); }
  Eigen::Index y_count() const {
    return static_cast<Eigen::Index>(planar.size()) * vertical.size();
  }
  Eigen::Index size() const { return x_count() * y_count(); }
  bool planar_tensor() const { return planar_u.size() > 0 && planar_v.size() > 0; }

  /// y index iy = planar_index * vertical.size() + vertical_index.
  Vector3d y_at(Eigen::Index iy) const;
  double y_weight(Eigen::Index iy) const;
  Point point(Eigen::Index ix, Eigen::Index iy) const { return {xs[ix], y_at(iy)}; }
  Extents extents() const;
};

/// 'per_axis'^3 x-points on [-x_extent, x_extent]^3 and likewise for y,
/// with trapezoidal weights.
Lattice cartesian_lattice(int per_axis, double x_extent, double y_extent);

struct InvariantLatticeSpec {
  int n_a = 40;
  double a_max = 8.0;
  int n_u = 64; ///< nodes for the y-component along x, on [-b_max, b_max]
  int n_v = 32; ///< nodes for the distance from the x-axis, on [0, b_max]
  double b_max = 16.0;
};

Lattice invariant_lattice(const InvariantLatticeSpec &spec);

} // namespace nilmult

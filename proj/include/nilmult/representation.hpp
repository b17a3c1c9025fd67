#pragma once

#include "nilmult/group.hpp"
#include "nilmult/types.hpp"

namespace nilmult {

/// Positively oriented orthonormal frame (e, ebar, dir) with dir = η/|η|.
struct EtaFrame {
  Vector3d e;
  Vector3d ebar;
  Vector3d dir;
  double norm; ///< |η|

  /// Components (x_1, x_2, x_par) of x in this frame.
  Vector3d components(const Vector3d &x) const {
    return {e.dot(x), ebar.dot(x), dir.dot(x)};
  }
};

/// e is the normalised projection onto η^⊥ of the standard basis vector
/// least aligned with η (ties go to the smallest index); ebar = dir ^ e.
EtaFrame eta_frame(const Vector3d &eta);

struct XiSplit {
  double parallel;
  Vector3d perp;
};

XiSplit xi_decompose(const Vector3d &xi, const Vector3d &eta);

/// Analytic η-derivatives of the parallel/perpendicular split.
struct XiDerivatives {
  Vector3d parallel;             ///< ∂ξ_par / ∂η_j
  Matrix3d perp;                 ///< (j, k) entry ∂(ξ_perp)_k / ∂η_j
  Vector3d perp_sq_over_norm;    ///< ∂(|ξ_perp|^2 / |η|) / ∂η_j
};

XiDerivatives xi_decompose_derivatives(const Vector3d &xi, const Vector3d &eta);

/// Uniform grid u_i = -extent + i * step, symmetric about 0.
struct RepGrid {
  double extent = 12.0;
  double step = 1.0 / 64.0;

  int size() const;
  double node(int i) const { return -extent + i * step; }
};

/// Samples of a function in L^2(R) on a RepGrid.
struct RepVector {
  RepGrid grid;
  VectorXcd values;

  /// Riemann-sum L^2 norm.
  double norm() const;
  cdouble inner(const RepVector &o) const;
};

/// π_{η,μ}(p) φ. Off-grid translates are linearly interpolated. Throws
/// std::out_of_range when a non-negligible part of φ would leave the grid.
RepVector rep_apply(const Vector3d &eta, double mu, const Point &p,
                    const RepVector &phi);

/// |η|^{1/4} h_n(|η|^{1/2} u) sampled on the grid. Throws
/// std::invalid_argument when the grid cannot hold the function.
RepVector scaled_hermite(const Vector3d &eta, int n, const RepGrid &grid);

/// (-∂_u^2 + |η|^2 u^2 + μ^2) φ by second-order central differences with
/// zero values beyond the grid.
RepVector oscillator_apply(const Vector3d &eta, double mu, const RepVector &phi);

struct CoefficientResult {
  cdouble value;
  double error;
  bool converged;
};

/// <π_{η,μ}(p) h̃_{η,n}, h̃_{η,n}> by adaptive quadrature of the
/// Hermite-product integral.
CoefficientResult matrix_coefficient_direct(const Vector3d &eta, double mu,
                                            int n, const Point &p);

/// Same coefficient from the closed Laguerre form.
cdouble matrix_coefficient_closed(const Vector3d &eta, double mu, int n,
                                  const Point &p);

} // namespace nilmult

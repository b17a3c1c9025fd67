#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nilmult/quadrature.hpp"
#include "nilmult/types.hpp"

namespace nilmult {

/// Index caps for the forward recurrences.
inline constexpr int kMaxDegree = 512;
inline constexpr int kMaxType = 32;

/// Orthonormal Hermite function h_n(t).
double hermite_fn(int n, double t);

/// h_0(t) .. h_n(t) in one pass.
std::vector<double> hermite_fn_all(int n, double t);

/// Generalised Laguerre polynomial L_n^{(k)}(u).
double laguerre_poly(int n, int k, double u);

/// Laguerre function 2 (-1)^n e^{-t} L_n^{(k)}(2t); zero for n < 0.
double laguerre_fn(int n, int k, double t);

/// Exact derivative of laguerre_fn in t.
double laguerre_fn_derivative(int n, int k, double t);

/// e^{-t} L_m^{(0)}(2t) for m = 0 .. n, written into out (size n + 1).
/// This equals (-1)^m ℒ_m^{(0)}(t) / 2.
void scaled_laguerre_all(int n, double t, std::span<double> out);

/// Residual of ℒ_n^{(k)} = ℒ_{n-1}^{(k+1)} + ℒ_n^{(k+1)}.
double laguerre_identity_pm(int n, int k, double t);

struct DerivativeResidual {
  double finite_difference; ///< central difference (step 1e-5) minus right side
  double exact;             ///< exact derivative minus right side
};

/// Residual of d/dt ℒ_n^{(k)} = ℒ_{n-1}^{(k+1)} - ℒ_n^{(k+1)}.
DerivativeResidual laguerre_identity_d(int n, int k, double t);

inline constexpr double kDerivativeStep = 1e-5;

struct OrthogonalityResult {
  double value;    ///< quadrature of ∫ ℒ_n ℒ_n' t^k dt
  double expected; ///< (n+k)!/(2^{k-1} n!) on the diagonal, else 0
  double error;    ///< difference between the last two quadrature orders
  int order;       ///< final Gauss-Laguerre order
  bool converged;
};

OrthogonalityResult laguerre_orthogonality(int n, int n2, int k);

/// (n+k)! / (2^{k-1} n!) via log-gamma.
double laguerre_norm_constant(int n, int k);

/// Returns (Σ_n f(n) ℒ_n^{(k)}(t), Σ_n ((1+τ)f)(n) ℒ_n^{(k+1)}(t)) for f
/// given on n = 0 .. f.size()-1.
std::pair<cdouble, cdouble> laguerre_sum_shift(std::span<const cdouble> f,
                                               int k, double t);

/// Density of the sum of k independent uniforms on [0, 1].
double bridge_density(int k, double s);

namespace testing {
/// Perturbs the Laguerre recurrence (fault injection for the verify suite).
void set_laguerre_fault(double relative_perturbation);
double laguerre_fault();
} // namespace testing

} // namespace nilmult

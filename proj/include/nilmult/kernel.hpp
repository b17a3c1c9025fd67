#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nilmult/grid.hpp"
#include "nilmult/group.hpp"
#include "nilmult/multiplier.hpp"

namespace nilmult {

enum class Method { closed_transverse, direct6d };

std::string to_string(Method m);
Method parse_method(const std::string &s);

/// ∫_{R^2} e^{i v·w} ℒ_n^{(0)}(|v|^2/|η|) dv in closed form:
/// π |η| (-1)^n ℒ_n^{(0)}(|η| |w|^2 / 4).
double transverse_fourier_closed(int n, double eta_norm, double w_norm);

/// Polar quadrature for the reference method.
struct DirectOptions {
  int n_radial = 96;
  int n_angular = 96;
  /// Gauss-Legendre nodes along ξ_par, placed on the support of m(n, ·, η)
  /// for each n separately.
  int n_parallel = 64;
};

/// The same transform by Gauss-Legendre in |v| and the trapezoid rule in
/// the angle.
double transverse_fourier_polar(int n, double eta_norm, double w_norm,
                                const DirectOptions &opt = {});

struct KernelOptions {
  GridSpec grid;
  Method method = Method::closed_transverse;
  /// Refuse grids whose phase diagnostic exceeds the limit.
  bool enforce_phase = true;
  int threads = 1;
  /// Lattice x-points per work unit (0 picks a default).
  int x_chunk = 0;
  /// Rings folded into one matrix product for the vertical y-axis.
  int ring_batch = 32;
  DirectOptions direct;
};

struct KernelDiagnostics {
  Method method = Method::closed_transverse;
  std::string symbol;
  long nodes = 0;
  int shells = 0;
  int n_mu = 0;
  double max_phase = 0.0;
  double phase_limit = 0.0;
  Extents extents;
  double seconds = 0.0;
  std::vector<Shell> shell_info; ///< shells without their ring lists
};

/// Kernel samples either at a list of points or on a product lattice.
struct KernelField {
  std::vector<Point> points;
  VectorXcd values; ///< one value per point (point-list fields)
  std::shared_ptr<const Lattice> lattice;
  MatrixXcd lattice_values; ///< x_count × y_count (lattice fields)
  KernelDiagnostics diagnostics;

  bool is_lattice() const { return static_cast<bool>(lattice); }
  Eigen::Index size() const {
    return is_lattice() ? lattice_values.size() : values.size();
  }
};

/// Rows [x_begin, x_begin + values.rows()) of the lattice field.
struct LatticeBlock {
  Eigen::Index x_begin;
  const MatrixXcd &values;
};

using BlockSink = std::function<void(const LatticeBlock &)>;

/// Kernel at arbitrary points.
KernelField kernel_eval(const SpectralSymbol &symbol,
                        const std::vector<Point> &points,
                        const KernelOptions &opt = {});

/// Kernel on a lattice, stored in memory.
KernelField kernel_eval(const SpectralSymbol &symbol, const Lattice &lattice,
                        const KernelOptions &opt = {});

/// Kernel on a lattice, handed to the sink block by block in x order.
/// Only the closed transverse method is supported here.
KernelDiagnostics kernel_stream(const SpectralSymbol &symbol,
                                const Lattice &lattice, const KernelOptions &opt,
                                const BlockSink &sink);

/// Kernel of F(L) truncated to the dyadic pieces k_min .. k_K, evaluated in
/// one pass with the combined symbol.
SpectralSymbol truncated_symbol(const Multiplier &f, const DyadicCutoff &chi,
                                int k_min);

KernelField kernel_eval_F(const Multiplier &f, const DyadicCutoff &chi,
                          const Lattice &lattice, int k_min,
                          const KernelOptions &opt = {});
KernelField kernel_eval_F(const Multiplier &f, const DyadicCutoff &chi,
                          const std::vector<Point> &points, int k_min,
                          const KernelOptions &opt = {});

/// (2^{k_min})^{3/2 - r}: size of the omitted dyadic tail, up to a constant.
double dyadic_tail_heuristic(int k_min, double r);

/// ((2π)^{-5} ∫∫ Σ_n |m(n,μ,η)|^2 |η| dμ dη)^{1/2} on the given grid.
double spectral_l2_norm(const SpectralSymbol &symbol, const EtaGrid &grid);

/// Convenience overload that builds a grid with zero extents.
double spectral_l2_norm(const SpectralSymbol &symbol, const GridSpec &spec);

} // namespace nilmult

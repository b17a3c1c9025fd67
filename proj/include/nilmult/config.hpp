#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nilmult/io.hpp"
#include "nilmult/kernel.hpp"
#include "nilmult/multiplier.hpp"

namespace nilmult {

/// Thrown for malformed or inconsistent configuration files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MultiplierSpec {
  std::string family = "bump"; ///< bump | zero
  double center = 2.5;
  double half_width = 1.5;
  double amplitude = 1.0;
  Interval support{1.0, 4.0}; ///< K

  Multiplier build() const;
};

struct LatticeConfig {
  std::string kind = "cartesian"; ///< cartesian | invariant
  int per_axis = 17;
  double x_extent = 6.0;
  double y_extent = 6.0;
  InvariantLatticeSpec invariant{80, 16.0, 128, 64, 32.0};

  Lattice build() const;
};

struct KernelConfig {
  std::string symbol = "F"; ///< F (truncated at grid.k_min) | piece
  int piece = 1;            ///< dyadic index of the piece
  LatticeConfig lattice;
  int export_stride = 4;
  bool plancherel = true;
  /// Off only for deliberately coarse comparison grids.
  bool enforce_phase = true;
  /// Point list used with the direct6d method.
  int points = 5;
  double point_extent = 1.5;
};

struct ScalingConfig {
  std::vector<double> r_values{0.0, 0.5, 1.0, 1.4};
  int k_lo = -4;
  int k_hi = 0;
  InvariantLatticeSpec lattice{80, 16.0, 128, 64, 32.0};
};

struct NormsConfig {
  std::vector<double> alpha_values{0.0, 1.9};
  std::vector<double> r_values{0.0, 1.4};
  double s = 3.1;
  int k_min = -4;
  double alpha1 = 1.6;
  double alpha2 = 0.3;
  double holder_r = 1.4;
  InvariantLatticeSpec lattice{80, 16.0, 128, 64, 32.0};
  bool doubling = false;
  int family = 0; ///< members of the equal-Sobolev family; 0 skips it
};

struct VerifyConfig {
  int points = 20;
};

struct ExperimentConfig {
  std::string experiment = "kernel"; ///< verify | kernel | scaling | norms
  MultiplierSpec multiplier;
  GridSpec grid;
  Method method = Method::closed_transverse;
  int threads = 1;
  std::string output = "out";
  std::uint64_t seed = 1;
  KernelConfig kernel;
  ScalingConfig scaling;
  NormsConfig norms;
  VerifyConfig verify;

  /// Throws ConfigError on violated invariants.
  void validate() const;
  KernelOptions kernel_options() const;
  OutputStamp stamp() const;
};

/// Unknown keys and type mismatches are ConfigErrors naming the offending
/// path. Missing keys keep their defaults.
ExperimentConfig parse_config(const Json &doc);
ExperimentConfig load_config(const std::filesystem::path &path);

/// The full effective configuration, including defaults.
Json to_json(const ExperimentConfig &c);

/// FNV-1a of the compact dump of to_json(c).
std::string config_hash(const ExperimentConfig &c);

} // namespace nilmult

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nilmult {

/// One named invariant: the worst residual over its cases against the
/// tolerance it is held to.
struct CheckRow {
  std::string suite;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  int cases = 0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckRow> rows;

  bool passed() const;
  std::vector<std::string> failures() const;
  void append(const VerifyReport &o);
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int random_points = 20; ///< group points for the matrix-coefficient check
};

VerifyReport verify_group(const VerifyOptions &opt);
VerifyReport verify_laguerre(const VerifyOptions &opt);
VerifyReport verify_hermite(const VerifyOptions &opt);
VerifyReport verify_bridge(const VerifyOptions &opt);
VerifyReport verify_sequence(const VerifyOptions &opt);
VerifyReport verify_representation(const VerifyOptions &opt);
VerifyReport verify_transverse(const VerifyOptions &opt);

/// Every suite above, in that order.
VerifyReport verify_all(const VerifyOptions &opt = {});

} // namespace nilmult

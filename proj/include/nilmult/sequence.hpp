#pragma once

#include <functional>
#include <vector>

#include "nilmult/types.hpp"

namespace nilmult {

/// Finitely supported complex sequence on Z. Leading and trailing exact
/// zeros are stripped, so two equal sequences have equal representations.
class FiniteSeq {
public:
  FiniteSeq() = default;
  FiniteSeq(int offset, std::vector<cdouble> values);

  static FiniteSeq unit(int n, cdouble value = 1.0);

  /// Coefficients f(begin) .. f(end - 1); empty means the zero sequence.
  int begin() const { return offset_; }
  int end() const { return offset_ + static_cast<int>(values_.size()); }
  bool empty() const { return values_.empty(); }
  const std::vector<cdouble> &values() const { return values_; }

  cdouble operator()(int n) const {
    return (n < begin() || n >= end()) ? cdouble{} : values_[n - offset_];
  }

  /// The same sequence with all coefficients at negative indices dropped.
  FiniteSeq restrict_to_naturals() const;

  bool operator==(const FiniteSeq &o) const = default;

  FiniteSeq &operator+=(const FiniteSeq &o);
  FiniteSeq &operator-=(const FiniteSeq &o);
  FiniteSeq &operator*=(cdouble c);

private:
  void normalize();

  int offset_ = 0;
  std::vector<cdouble> values_;
};

FiniteSeq operator+(FiniteSeq a, const FiniteSeq &b);
FiniteSeq operator-(FiniteSeq a, const FiniteSeq &b);
FiniteSeq operator*(cdouble c, FiniteSeq a);

/// Largest coefficient modulus of a - b.
double max_abs_diff(const FiniteSeq &a, const FiniteSeq &b);

cdouble sum(const FiniteSeq &f);

/// (τ^steps f)(n) = f(n + steps).
FiniteSeq shift(const FiniteSeq &f, int steps = 1);

/// δf = τf - f.
FiniteSeq diff(const FiniteSeq &f);

/// δ^k f.
FiniteSeq diff_pow(int k, const FiniteSeq &f);

/// (1+τ)^q on sequences indexed by N. The input is first restricted to N and
/// the output is supported in N. For q < 0 the Neumann series
/// Σ_l (-1)^l τ^l is summed exactly; it terminates because every term beyond
/// the support vanishes.
FiniteSeq one_plus_tau_pow(int q, const FiniteSeq &f);

/// k-th forward difference of a function sampled at the integers
/// n, n+1, .., n+k.
double forward_difference(int k, const std::function<double(double)> &f,
                          int n);

struct BridgeResult {
  double value;
  double error;
  bool converged;
};

/// ∫ g(n + s) dν_k(s) where ν_k is the law of a sum of k uniforms on [0, 1]
/// and g is the k-th derivative of a smooth function. For k = 0 the measure
/// is the point mass at 0 and the result is g(n).
BridgeResult diff_via_bridge(int k, const std::function<double(double)> &g,
                             int n);

} // namespace nilmult

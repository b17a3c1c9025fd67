#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace nilmult {

template <typename Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

using Vector3d = Vec3<double>;
using Matrix3d = Mat3<double>;
using VectorXd = Eigen::VectorXd;
using MatrixXd = Eigen::MatrixXd;
using cdouble = std::complex<double>;
using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Homogeneous dimension of N_{3,2} under (x, y) -> (t x, t^2 y).
inline constexpr int kHomogeneousDimension = 9;
/// Topological dimension.
inline constexpr int kTopologicalDimension = 6;

/// Neumaier-compensated accumulator. Summation order is the call order.
template <typename T> class CompensatedSum {
public:
  CompensatedSum &operator+=(const T &v) {
    add(v);
    return *this;
  }

  void add(const T &v) {
    if constexpr (std::is_floating_point_v<T>) {
      const T t = sum_ + v;
      if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
      else
        comp_ += (v - t) + sum_;
      sum_ = t;
    } else {
      re_.add(v.real());
      im_.add(v.imag());
    }
  }

  T value() const {
    if constexpr (std::is_floating_point_v<T>)
      return sum_ + comp_;
    else
      return T(re_.value(), im_.value());
  }

private:
  struct Empty {};
  using Part = std::conditional_t<std::is_floating_point_v<T>, Empty,
                                  CompensatedSum<double>>;
  T sum_{};
  T comp_{};
  [[no_unique_address]] Part re_{};
  [[no_unique_address]] Part im_{};
};

} // namespace nilmult

#include <doctest.h>

#include <cmath>
#include <memory>

#include "nilmult/norms.hpp"

using namespace nilmult;

namespace {

/// A Gaussian stored as a lattice field.
KernelField gaussian(const Lattice &l) {
  KernelField f;
  f.lattice = std::make_shared<const Lattice>(l);
  f.lattice_values.resize(l.x_count(), l.y_count());
  for (Eigen::Index ix = 0; ix < l.x_count(); ++ix)
    for (Eigen::Index iy = 0; iy < l.y_count(); ++iy) {
      const Point p = l.point(ix, iy);
      f.lattice_values(ix, iy) = std::exp(-0.5 * (p.x.squaredNorm() + p.y.squaredNorm()));
    }
  return f;
}

} // namespace

TEST_CASE("lattice quadrature of a Gaussian") {
  const double pi3 = std::pow(M_PI, 3);
  // ∫ |y|^{2r} e^{-|x|^2-|y|^2} = π^{3/2} 2π Γ(r + 3/2)
  auto y_moment = [](double r) { return std::pow(M_PI, 1.5) * 2 * M_PI * std::tgamma(r + 1.5); };

  SUBCASE("cartesian") {
    // trapezoid aliasing per axis is 2 exp(-π^2/h^2) at h = 0.7
    const KernelField g = gaussian(cartesian_lattice(21, 7.0, 7.0));
    const double tol = 12 * std::exp(-M_PI * M_PI / 0.49);
    CHECK(l2_norm(g) * l2_norm(g) == doctest::Approx(pi3).epsilon(tol));
    CHECK(l1_norm(g) == doctest::Approx(std::pow(2 * M_PI, 3)).epsilon(1e-9));
    CHECK(std::pow(y_weighted_l2_norm(g, 1.0), 2) == doctest::Approx(y_moment(1.0)).epsilon(1e-6));
    CHECK(weighted_l2_norm(g, 0.0, 0.0) == doctest::Approx(l2_norm(g)).epsilon(1e-14));
  }
  SUBCASE("invariant") {
    const KernelField g = gaussian(invariant_lattice({24, 8.0, 48, 24, 8.0}));
    CHECK(l2_norm(g) * l2_norm(g) == doctest::Approx(pi3).epsilon(1e-11));
    CHECK(l1_norm(g) == doctest::Approx(std::pow(2 * M_PI, 3)).epsilon(1e-11));
    CHECK(std::pow(y_weighted_l2_norm(g, 1.0), 2) == doctest::Approx(y_moment(1.0)).epsilon(1e-11));
    // |y|^{1.4} is not smooth on the axis v = 0
    CHECK(std::pow(y_weighted_l2_norm(g, 0.7), 2) == doctest::Approx(y_moment(0.7)).epsilon(1e-3));
    CHECK(weighted_l2_norm(g, 0.0, 0.0) == doctest::Approx(l2_norm(g)).epsilon(1e-14));
  }
}

TEST_CASE("weights") {
  const Weight w{1.0, 2.0, false};
  // |p|_δ = |x| + |y|^{1/2}
  CHECK(w(Vector3d(3, 4, 0), Vector3d(0, 0, 9)) == doctest::Approx((1 + 5 + 3) * 100.0));
  const Weight y{0.0, 1.5, true};
  CHECK(y(Vector3d(1, 0, 0), Vector3d(0, 4, 0)) == doctest::Approx(8.0));
}

TEST_CASE("streamed accumulation equals the stored field") {
  const Lattice l = invariant_lattice({6, 4.0, 8, 4, 5.0});
  const KernelField g = gaussian(l);
  NormAccumulator whole(l, {Weight{0.5, 1.4, false}});
  whole.add(g.lattice_values);
  NormAccumulator parts(l, {Weight{0.5, 1.4, false}});
  for (Eigen::Index x0 = 0; x0 < l.x_count(); x0 += 2) {
    const MatrixXcd block = g.lattice_values.middleRows(x0, 2);
    parts.add(LatticeBlock{x0, block});
  }
  CHECK(parts.l1() == doctest::Approx(whole.l1()).epsilon(1e-14));
  CHECK(parts.weighted_l2(0) == doctest::Approx(whole.weighted_l2(0)).epsilon(1e-14));
  CHECK(whole.weighted_l2(0) == doctest::Approx(weighted_l2_norm(g, 0.5, 1.4)).epsilon(1e-12));
}

TEST_CASE("Hölder chain") {
  const Lattice l = invariant_lattice({16, 6.0, 32, 16, 8.0});
  const KernelField g = gaussian(l);
  const HolderCheck h = holder_chain(g, 1.6, 0.3, 1.4);
  CHECK(h.holds());
  CHECK(h.bound == doctest::Approx(h.weighted_l2 * h.dual));
  CHECK(h.dual == doctest::Approx(std::sqrt(dual_weight_integral(l, 1.9, 1.4))));
  CHECK(h.l1 == doctest::Approx(l1_norm(g)));
}

TEST_CASE("point-list fields have no lattice norms") {
  KernelField f;
  f.points = {Point{}};
  f.values = VectorXcd::Ones(1);
  CHECK_THROWS(l1_norm(f));
}

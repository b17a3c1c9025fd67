#include <doctest.h>

#include <cmath>
#include <complex>

#include "../oracles.hpp"
#include "nilmult/kernel.hpp"
#include "nilmult/studies.hpp"

using namespace nilmult;

namespace {

KernelOptions toy_options() {
  KernelOptions o;
  o.grid.n_r = 4;
  o.grid.n_theta = 6;
  o.grid.n_phi = 8;
  o.grid.n_mu = 33;
  o.grid.auto_resolve = false;
  o.enforce_phase = false;
  return o;
}

SpectralSymbol piece() { return dyadic_piece_symbol(reference_bump(), make_chi(), 1.0); }

/// 2π ∫ r J0(r w) ℒ_n(r²/η) dr with the long-double Laguerre recurrence.
double hankel_oracle(int n, double eta, double w) {
  const double reach = std::sqrt(eta * (80.0 + 4.0 * n));
  return 2 * M_PI * oracle::panels(
                        [&](double r) {
                          return r * std::cyl_bessel_j(0.0, r * w) * oracle::laguerre_fn(n, 0, r * r / eta);
                        },
                        0.0, reach, 200);
}

} // namespace

TEST_CASE("closed transverse transform") {
  for (double eta : {0.5, 1.0, 2.0})
    for (double w : {0.0, 1.0, 2.0, 4.0}) {
      CHECK(transverse_fourier_closed(0, eta, w) ==
            doctest::Approx(2 * M_PI * eta * std::exp(-eta * w * w / 4)).epsilon(1e-13));
      for (int n = 0; n <= 10; ++n)
        CHECK(std::abs(transverse_fourier_closed(n, eta, w) - hankel_oracle(n, eta, w)) <=
              1e-8 * 2 * M_PI * eta);
    }
  CHECK_THROWS(transverse_fourier_closed(1, 0.0, 1.0));
}

TEST_CASE("method names") {
  CHECK(parse_method("direct6d") == Method::direct6d);
  CHECK(to_string(Method::closed_transverse) == "closed_transverse");
  CHECK_THROWS(parse_method("fft"));
}

TEST_CASE("kernel is linear in the symbol") {
  const Multiplier f = reference_bump();
  const DyadicCutoff chi = make_chi();
  auto sym = [&](double a, double b) {
    return radial_symbol([=](double l, double r) { return (a * f(l) + b * f(l) * f(l)) * chi(r); },
                         f.support(), 0.5, 2.0);
  };
  const std::vector<Point> pts = random_points(6, 2.0, 5);
  const KernelOptions o = toy_options();
  const VectorXcd k1 = kernel_eval(sym(1, 0), pts, o).values;
  const VectorXcd k2 = kernel_eval(sym(0, 1), pts, o).values;
  const VectorXcd k12 = kernel_eval(sym(2, -3), pts, o).values;
  CHECK((k12 - (2.0 * k1 - 3.0 * k2)).cwiseAbs().maxCoeff() <= 1e-12 * k12.cwiseAbs().maxCoeff());
}

TEST_CASE("zero symbol gives a zero kernel") {
  const Lattice l = cartesian_lattice(3, 1.0, 1.0);
  const KernelField z = kernel_eval(zero_symbol({1, 4}), l);
  CHECK(z.lattice_values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lattice, streamed and pointwise evaluation agree") {
  const Lattice l = cartesian_lattice(3, 1.5, 2.0);
  const SpectralSymbol s = piece();
  const KernelField field = kernel_eval(s, l);
  std::vector<Point> pts;
  for (Eigen::Index ix = 0; ix < l.x_count(); ix += 5)
    for (Eigen::Index iy = 0; iy < l.y_count(); iy += 4)
      pts.push_back(l.point(ix, iy));
  const KernelField direct = kernel_eval(s, pts);
  double worst = 0;
  std::size_t i = 0;
  for (Eigen::Index ix = 0; ix < l.x_count(); ix += 5)
    for (Eigen::Index iy = 0; iy < l.y_count(); iy += 4)
      worst = std::max(worst, std::abs(direct.values[i++] - field.lattice_values(ix, iy)));
  CHECK(worst <= 1e-12 * field.lattice_values.cwiseAbs().maxCoeff());
  // radial symbols have real kernels
  CHECK(field.lattice_values.imag().cwiseAbs().maxCoeff() <=
        1e-12 * field.lattice_values.cwiseAbs().maxCoeff());
}

TEST_CASE("axial path on the invariant lattice") {
  const InvariantLatticeSpec spec{4, 3.0, 6, 3, 4.0};
  const Lattice l = invariant_lattice(spec);
  const SpectralSymbol s = piece();
  const KernelField field = kernel_eval(s, l);
  std::vector<Point> pts;
  for (Eigen::Index ix = 0; ix < l.x_count(); ++ix)
    for (Eigen::Index iy = 0; iy < l.y_count(); iy += 3)
      pts.push_back(l.point(ix, iy));
  KernelOptions o;
  o.grid.n_phi = 24;
  const KernelField direct = kernel_eval(s, pts, o);
  double worst = 0;
  std::size_t i = 0;
  for (Eigen::Index ix = 0; ix < l.x_count(); ++ix)
    for (Eigen::Index iy = 0; iy < l.y_count(); iy += 3)
      worst = std::max(worst, std::abs(direct.values[i++] - field.lattice_values(ix, iy)));
  // different azimuthal grids converge to the same value
  CHECK(worst <= 1e-6 * field.lattice_values.cwiseAbs().maxCoeff());
}

TEST_CASE("threads do not change the bits") {
  const Lattice l = cartesian_lattice(3, 1.0, 1.0);
  KernelOptions a, b;
  a.x_chunk = b.x_chunk = 4;
  b.threads = 3;
  const MatrixXcd ka = kernel_eval(piece(), l, a).lattice_values;
  const MatrixXcd kb = kernel_eval(piece(), l, b).lattice_values;
  CHECK(ka == kb);
}

TEST_CASE("cross-method agreement on the toy grid") {
  const std::vector<Point> pts = random_points(3, 1.5, 11);
  KernelOptions o = toy_options();
  const VectorXcd closed = kernel_eval(piece(), pts, o).values;
  o.method = Method::direct6d;
  const VectorXcd direct = kernel_eval(piece(), pts, o).values;
  CHECK((closed - direct).cwiseAbs().maxCoeff() <= 0.02 * closed.cwiseAbs().maxCoeff());
}

TEST_CASE("guards") {
  const Lattice l = cartesian_lattice(3, 1.0, 1.0);
  KernelOptions o;
  o.method = Method::direct6d;
  CHECK_THROWS(kernel_stream(piece(), l, o, [](const LatticeBlock &) {}));

  const SpectralSymbol twisted = reparametrize(
      [](double lambda, const Vector3d &eta) { return cdouble(lambda * (1 + eta[0]), 0); }, {1, 4}, 0.5, 2.0);
  CHECK_THROWS(kernel_eval(twisted, invariant_lattice({})));

  GridSpec g;
  g.scale = 0.5; // coarser than the phase limit allows
  CHECK_THROWS_AS(build_eta_grid(g, piece(), Extents{6.0, 6.0}), std::runtime_error);

  g = GridSpec{};
  g.auto_resolve = false;
  CHECK_THROWS_AS(build_eta_grid(g, piece(), Extents{40.0, 400.0}), std::runtime_error);
  CHECK_THROWS_AS(laguerre_cap(4.0, 1e-4), std::out_of_range);
}

TEST_CASE("grid diagnostics") {
  const EtaGrid g = build_eta_grid(GridSpec{}, piece(), Extents{6.0, 6.0});
  CHECK(g.max_phase() <= g.phase_limit);
  CHECK(g.node_count() > 0);
  CHECK(!g.describe().empty());
  CHECK(mu_half_width(4.0, 1.0) == doctest::Approx(std::sqrt(3.0)));
  CHECK(laguerre_cap(4.0, 1.0) == 3);
}

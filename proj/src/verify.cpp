#include "nilmult/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "nilmult/group.hpp"
#include "nilmult/kernel.hpp"
#include "nilmult/quadrature.hpp"
#include "nilmult/representation.hpp"
#include "nilmult/sequence.hpp"
#include "nilmult/special.hpp"

namespace nilmult {

bool VerifyReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow &r) { return r.pass; });
}

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> out;
  for (const CheckRow &r : rows)
    if (!r.pass)
      out.push_back(r.name);
  return out;
}

void VerifyReport::append(const VerifyReport &o) {
  rows.insert(rows.end(), o.rows.begin(), o.rows.end());
}

namespace {

/// Tracks the worst normalised residual of one invariant. Residuals are
/// stored as |r| / scale so one tolerance covers all cases.
class Check {
public:
  Check(std::string suite, std::string name, double tol)
      : row_{std::move(suite), std::move(name), 0.0, tol, 0, true} {}

  void add(double residual, double scale = 1.0) {
    const double r = std::abs(residual) / scale;
    ++row_.cases;
    if (!(r <= row_.residual) || std::isnan(r))
      row_.residual = std::isnan(r) ? INFINITY : std::max(row_.residual, r);
  }

  CheckRow done() {
    row_.pass = row_.residual <= row_.tolerance;
    return row_;
  }

private:
  CheckRow row_;
};

struct Rng {
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  Vector3d vec(double bound) {
    return {uniform(-bound, bound), uniform(-bound, bound), uniform(-bound, bound)};
  }
  Point point(double bound) { return {vec(bound), vec(bound)}; }
  Vector3d unit() {
    Vector3d v;
    do
      v = vec(1.0);
    while (v.norm() < 0.1 || v.norm() > 1.0);
    return v.normalized();
  }
  Matrix3d rotation() { return axis_rotation(unit(), uniform(-kPi, kPi)); }

  std::mt19937_64 gen;
};

double point_diff(const Point &a, const Point &b) {
  return std::max((a.x - b.x).cwiseAbs().maxCoeff(), (a.y - b.y).cwiseAbs().maxCoeff());
}

} // namespace

VerifyReport verify_group(const VerifyOptions &opt) {
  Rng rng(opt.seed);
  Check assoc("group", "group_associativity", 1e-12);
  Check inv("group", "group_inverse", 1e-12);
  Check homog("group", "group_homogeneity", 1e-12);
  Check dil("group", "group_dilation_homomorphism", 1e-12);
  Check aut("group", "group_rotation_automorphism", 1e-12);
  for (int i = 0; i < 1000; ++i) {
    const Point p = rng.point(10.0), q = rng.point(10.0), r = rng.point(10.0);
    assoc.add(point_diff(multiply(multiply(p, q), r), multiply(p, multiply(q, r))));
    inv.add(point_diff(multiply(p, inverse(p)), Point{}));
    const double t = std::exp(rng.uniform(-2.0, 2.0));
    homog.add(homogeneous_norm(dilate(t, p)) - t * homogeneous_norm(p),
              t * homogeneous_norm(p));
    dil.add(point_diff(dilate(t, multiply(p, q)), multiply(dilate(t, p), dilate(t, q))),
            std::max(1.0, t * t));
  }
  for (int i = 0; i < 100; ++i) {
    const Matrix3d rot = rng.rotation();
    const Point p = rng.point(10.0), q = rng.point(10.0);
    aut.add(point_diff(rotate(rot, multiply(p, q)), multiply(rotate(rot, p), rotate(rot, q))));
  }
  return {{assoc.done(), inv.done(), homog.done(), dil.done(), aut.done()}};
}

VerifyReport verify_laguerre(const VerifyOptions &opt) {
  Check pm("laguerre", "laguerre_identity_pm", 1e-9);
  Check d_exact("laguerre", "laguerre_identity_d", 1e-9);
  Check d_fd("laguerre", "laguerre_identity_d_fd", 1e-6);
  for (int n = 0; n <= 20; ++n)
    for (int k = 0; k <= 6; ++k)
      for (int i = 0; i < 100; ++i) {
        const double t = 50.0 * i / 99.0;
        const double scale =
            1.0 + std::max({std::abs(laguerre_fn(n, k, t)), std::abs(laguerre_fn(n - 1, k + 1, t)),
                            std::abs(laguerre_fn(n, k + 1, t))});
        pm.add(laguerre_identity_pm(n, k, t), scale);
        const DerivativeResidual d = laguerre_identity_d(n, k, t);
        d_exact.add(d.exact, scale);
        d_fd.add(d.finite_difference, scale);
      }

  Check diag("laguerre", "laguerre_orthogonality_diagonal", 1e-6);
  Check off("laguerre", "laguerre_orthogonality_offdiagonal", 1e-8);
  for (int k = 0; k <= 4; ++k)
    for (int n = 0; n <= 10; ++n)
      for (int n2 = 0; n2 <= 10; ++n2) {
        const OrthogonalityResult o = laguerre_orthogonality(n, n2, k);
        if (n == n2)
          diag.add(o.value - o.expected, o.expected);
        else
          off.add(o.value);
      }

  Rng rng(opt.seed + 1);
  Check shift("laguerre", "laguerre_sum_shift", 1e-9);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cdouble> f(11);
    for (cdouble &c : f)
      c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const int k = trial % 4;
    const double t = rng.uniform(0.1, 10.0);
    const auto [lhs, rhs] = laguerre_sum_shift(f, k, t);
    shift.add(std::abs(lhs - rhs), std::max(1.0, std::abs(lhs)));
  }
  return {{pm.done(), d_exact.done(), d_fd.done(), diag.done(), off.done(), shift.done()}};
}

VerifyReport verify_hermite(const VerifyOptions &) {
  const GaussRule rule = gauss_hermite(48);
  Check ortho("hermite", "hermite_orthonormality", 1e-10);
  Check batch("hermite", "hermite_batch_consistency", 1e-13);
  for (int n = 0; n <= 15; ++n)
    for (int m = 0; m <= 15; ++m) {
      const double v = rule.apply([&](double t) {
        return std::exp(t * t) * hermite_fn(n, t) * hermite_fn(m, t);
      });
      ortho.add(v - (n == m ? 1.0 : 0.0));
    }
  for (double t = -8.0; t <= 8.0; t += 0.37) {
    const std::vector<double> all = hermite_fn_all(15, t);
    for (int n = 0; n <= 15; ++n)
      batch.add(all[n] - hermite_fn(n, t));
  }
  return {{ortho.done(), batch.done()}};
}

VerifyReport verify_bridge(const VerifyOptions &) {
  Check mass("bridge", "bridge_density_mass", 1e-12);
  for (int k = 1; k <= 4; ++k) {
    std::vector<double> breaks;
    for (int j = 0; j <= k; ++j)
      breaks.push_back(j);
    mass.add(integrate_piecewise([k](double s) { return bridge_density(k, s); }, breaks).value -
             1.0);
  }

  struct TestFn {
    std::function<double(double)> f;
    std::function<double(int, double)> deriv;
  };
  const std::vector<TestFn> fns{
      {[](double t) { return std::exp(-t / 3.0); },
       [](int k, double t) { return std::pow(-1.0 / 3.0, k) * std::exp(-t / 3.0); }},
      {[](double t) { return 1.0 / (1.0 + t); },
       [](int k, double t) {
         return (k % 2 ? -1.0 : 1.0) * std::tgamma(k + 1.0) / std::pow(1.0 + t, k + 1);
       }}};
  Check bridge("bridge", "difference_bridge", 1e-8);
  for (const TestFn &fn : fns)
    for (int k = 0; k <= 4; ++k)
      for (int n = 0; n <= 10; ++n) {
        const double lhs = forward_difference(k, fn.f, n);
        const BridgeResult rhs =
            diff_via_bridge(k, [&](double t) { return fn.deriv(k, t); }, n);
        bridge.add(lhs - rhs.value, std::abs(lhs));
      }
  return {{mass.done(), bridge.done()}};
}

VerifyReport verify_sequence(const VerifyOptions &opt) {
  Rng rng(opt.seed + 2);
  auto random_seq = [&](int lo, int len) {
    std::vector<cdouble> v(len);
    for (cdouble &c : v)
      c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return FiniteSeq(lo, v);
  };
  Check delta("sequence", "delta_is_shift_minus_identity", 1e-12);
  Check power("sequence", "delta_power_binomial", 1e-12);
  Check compose("sequence", "one_plus_tau_composition", 1e-12);
  Check round("sequence", "one_plus_tau_roundtrip", 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    const FiniteSeq f = random_seq(trial % 5 - 2, 8);
    delta.add(max_abs_diff(diff(f), shift(f) - f));
    for (int k = 0; k <= 4; ++k) {
      FiniteSeq expect;
      double binom = 1.0;
      for (int j = 0; j <= k; ++j) {
        expect += cdouble(((k - j) % 2 ? -1.0 : 1.0) * binom) * shift(f, j);
        binom = binom * (k - j) / (j + 1);
      }
      power.add(max_abs_diff(diff_pow(k, f), expect));
    }
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        compose.add(max_abs_diff(one_plus_tau_pow(a, one_plus_tau_pow(b, f)),
                                 one_plus_tau_pow(a + b, f)));
    round.add(max_abs_diff(one_plus_tau_pow(1, one_plus_tau_pow(-1, f)), f.restrict_to_naturals()));
  }
  return {{delta.done(), power.done(), compose.done(), round.done()}};
}

VerifyReport verify_representation(const VerifyOptions &opt) {
  Rng rng(opt.seed + 3);
  Check frame("representation", "frame_orthonormal", 1e-12);
  Check recon("representation", "xi_reconstruction", 1e-12);
  Check deriv("representation", "xi_derivatives_fd", 1e-5);
  for (int i = 0; i < 200; ++i) {
    Vector3d eta = rng.vec(2.0);
    if (eta.norm() < 0.25)
      eta = 0.25 * eta.normalized() + eta;
    const Vector3d xi = rng.vec(3.0);
    if (i < 100) {
      const EtaFrame f = eta_frame(eta);
      Matrix3d b;
      b << f.e, f.ebar, f.dir;
      frame.add((b.transpose() * b - Matrix3d::Identity()).cwiseAbs().maxCoeff());
      frame.add(b.determinant() - 1.0);
      const XiSplit s = xi_decompose(xi, eta);
      recon.add((s.parallel * f.dir + s.perp - xi).cwiseAbs().maxCoeff());
      recon.add(s.perp.dot(eta));
    }
    const XiDerivatives an = xi_decompose_derivatives(xi, eta);
    const double h = 1e-5;
    for (int j = 0; j < 3; ++j) {
      Vector3d ep = eta, em = eta;
      ep[j] += h;
      em[j] -= h;
      const XiSplit sp = xi_decompose(xi, ep), sm = xi_decompose(xi, em);
      const double fd_par = (sp.parallel - sm.parallel) / (2 * h);
      deriv.add(fd_par - an.parallel[j], 1.0 + std::abs(an.parallel[j]));
      for (int k = 0; k < 3; ++k) {
        const double fd = (sp.perp[k] - sm.perp[k]) / (2 * h);
        deriv.add(fd - an.perp(j, k), 1.0 + std::abs(an.perp(j, k)));
      }
      const double fd_q =
          (sp.perp.squaredNorm() / ep.norm() - sm.perp.squaredNorm() / em.norm()) / (2 * h);
      deriv.add(fd_q - an.perp_sq_over_norm[j], 1.0 + std::abs(an.perp_sq_over_norm[j]));
    }
  }

  // Unitarity and the homomorphism property on translates aligned with the grid.
  const RepGrid grid{12.0, 1.0 / 64.0};
  Check unitary("representation", "rep_unitarity", 1e-8);
  Check homo("representation", "rep_homomorphism", 1e-6);
  auto aligned = [&](const Vector3d &eta, double bound) {
    Point p = rng.point(bound);
    const EtaFrame f = eta_frame(eta);
    const double c = f.e.dot(p.x);
    p.x += (std::round(c / grid.step) * grid.step - c) * f.e;
    return p;
  };
  for (int i = 0; i < 10; ++i) {
    const Vector3d eta = rng.unit() * rng.uniform(0.5, 2.0);
    const double mu = rng.uniform(-1.0, 1.0);
    const RepVector phi = scaled_hermite(eta, i % 4, grid);
    const Point p = aligned(eta, 1.5), q = aligned(eta, 1.5);
    const RepVector pp = rep_apply(eta, mu, p, phi);
    unitary.add(pp.norm() - phi.norm(), phi.norm());
    const RepVector lhs = rep_apply(eta, mu, p, rep_apply(eta, mu, q, phi));
    const RepVector rhs = rep_apply(eta, mu, multiply(p, q), phi);
    homo.add((lhs.values - rhs.values).cwiseAbs().maxCoeff());
  }

  Check eigen("representation", "oscillator_eigen_residual", 1e-4);
  Check order("representation", "oscillator_second_order", 0.2);
  const Vector3d e1(1.0, 0.0, 0.0);
  for (int n = 0; n <= 5; ++n)
    for (double mu : {0.0, 1.0}) {
      double res[2];
      for (int level = 0; level < 2; ++level) {
        const RepGrid g{12.0, level == 0 ? 1e-2 : 5e-3};
        const RepVector h = scaled_hermite(e1, n, g);
        RepVector r = oscillator_apply(e1, mu, h);
        r.values -= (2.0 * n + 1.0 + mu * mu) * h.values;
        res[level] = r.norm();
      }
      // relative to the eigenvalue; the absolute residual grows like (2n+1)^2 h^2
      eigen.add(res[0], 2.0 * n + 1.0 + mu * mu);
      order.add(res[0] / res[1] / 4.0 - 1.0);
    }

  Check coeff("representation", "matrix_coefficient_routes", 1e-6);
  for (int i = 0; i < opt.random_points; ++i) {
    const Point p = rng.point(3.0 / std::sqrt(3.0));
    for (int n = 0; n <= 5; ++n) {
      const Vector3d eta = rng.unit() * rng.uniform(0.5, 2.0);
      const double mu = (i + n) % 2;
      const CoefficientResult direct = matrix_coefficient_direct(eta, mu, n, p);
      const cdouble closed = matrix_coefficient_closed(eta, mu, n, p);
      coeff.add(std::abs(direct.value - closed));
    }
  }
  return {{frame.done(), recon.done(), deriv.done(), unitary.done(), homo.done(),
           eigen.done(), order.done(), coeff.done()}};
}

VerifyReport verify_transverse(const VerifyOptions &) {
  Check tr("transverse", "transverse_closed_vs_polar", 1e-8);
  DirectOptions d;
  d.n_radial = 160;
  d.n_angular = 128;
  for (int n = 0; n <= 10; ++n)
    for (double eta : {0.5, 1.0, 2.0})
      for (double w : {0.0, 1.0, 2.0, 4.0})
        tr.add(transverse_fourier_closed(n, eta, w) - transverse_fourier_polar(n, eta, w, d),
               2.0 * kPi * eta);
  return {{tr.done()}};
}

VerifyReport verify_all(const VerifyOptions &opt) {
  VerifyReport r;
  r.append(verify_group(opt));
  r.append(verify_laguerre(opt));
  r.append(verify_hermite(opt));
  r.append(verify_bridge(opt));
  r.append(verify_sequence(opt));
  r.append(verify_representation(opt));
  r.append(verify_transverse(opt));
  return r;
}

} // namespace nilmult

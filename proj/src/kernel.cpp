#include "nilmult/kernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "nilmult/quadrature.hpp"
#include "nilmult/special.hpp"

namespace nilmult {

std::string to_string(Method m) {
  return m == Method::closed_transverse ? "closed_transverse" : "direct6d";
}

Method parse_method(const std::string &s) {
  if (s == "closed_transverse")
    return Method::closed_transverse;
  if (s == "direct6d")
    return Method::direct6d;
  throw std::invalid_argument("unknown method '" + s + "'");
}

double transverse_fourier_closed(int n, double eta_norm, double w_norm) {
  if (!(eta_norm > 0.0))
    throw std::invalid_argument("transverse_fourier_closed: |η| must be positive");
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return kPi * eta_norm * sign *
         laguerre_fn(n, 0, eta_norm * w_norm * w_norm / 4.0);
}

namespace {

using ArrayXd = Eigen::ArrayXd;
using Clock = std::chrono::steady_clock;

const double kPlancherel = 1.0 / std::pow(kTwoPi, 5);

// Radius beyond which ℒ_n(r^2/ρ) is negligible for n <= ncap.
double transverse_reach(double rho, int ncap) {
  return std::sqrt(rho * (60.0 + 4.0 * ncap));
}

// (2π/n) Σ_l cos(z cos ψ_l), the trapezoid value of 2π J_0(z).
double angular_average(double z, int n) {
  CompensatedSum<double> acc;
  for (int l = 0; l < n; ++l)
    acc += std::cos(z * std::cos(kTwoPi * l / n));
  return kTwoPi * acc.value() / n;
}

struct PolarTransverse {
  GaussRule unit = gauss_legendre(96, 0.0, 1.0);
  int n_angular = 96;

  explicit PolarTransverse(const DirectOptions &o)
      : unit(gauss_legendre(o.n_radial, 0.0, 1.0)), n_angular(o.n_angular) {}

  // T_n(s) for n = 0 .. ncap.
  void eval(double rho, int ncap, double s, std::vector<double> &out) const {
    const double reach = transverse_reach(rho, ncap);
    std::vector<CompensatedSum<double>> acc(ncap + 1);
    std::vector<double> lag(ncap + 1);
    for (Eigen::Index i = 0; i < unit.size(); ++i) {
      const double r = reach * unit.nodes[i];
      const double w = reach * unit.weights[i] * r * angular_average(r * s, n_angular);
      scaled_laguerre_all(ncap, r * r / rho, lag);
      for (int m = 0; m <= ncap; ++m) {
        const double fn = 2.0 * ((m % 2 == 0) ? 1.0 : -1.0) * lag[m];
        acc[m] += w * fn;
      }
    }
    out.resize(ncap + 1);
    for (int m = 0; m <= ncap; ++m)
      out[m] = acc[m].value();
  }
};

// Half μ-grid μ_q = q step, q = 0 .. Q, with trapezoid weights folded for
// the even integrand (the q and -q nodes are merged).
struct MuGrid {
  int count = 0;
  double step = 0.0;
  std::vector<double> nodes, weights;
};

MuGrid make_mu_grid(int n_mu, double half_width) {
  MuGrid g;
  const int q_top = (n_mu - 1) / 2;
  g.count = q_top + 1;
  g.step = half_width / q_top;
  for (int q = 0; q <= q_top; ++q) {
    g.nodes.push_back(q * g.step);
    g.weights.push_back((q == 0 || q == q_top) ? g.step : 2.0 * g.step);
  }
  return g;
}

// w_q m(n, μ_q, η) for n = 0 .. ncap.
struct SymbolTable {
  int ncap = 0;
  MuGrid mu;
  MatrixXd re, im;
  bool complex = false;
  bool zero = true;
};

SymbolTable make_table(const SpectralSymbol &symbol, double lambda_hi, int n_mu,
                       double rho, const Vector3d *eta) {
  SymbolTable t;
  t.ncap = laguerre_cap(lambda_hi, rho);
  t.mu = make_mu_grid(n_mu, mu_half_width(lambda_hi, rho));
  t.re = MatrixXd::Zero(t.ncap + 1, t.mu.count);
  if (symbol.is_zero() || t.mu.step == 0.0)
    return t;
  if (!eta) {
    for (int n = 0; n <= t.ncap; ++n)
      for (int q = 0; q < t.mu.count; ++q)
        t.re(n, q) = t.mu.weights[q] * symbol.radial_value(n, t.mu.nodes[q], rho);
  } else {
    t.im = MatrixXd::Zero(t.ncap + 1, t.mu.count);
    for (int n = 0; n <= t.ncap; ++n)
      for (int q = 0; q < t.mu.count; ++q) {
        const cdouble v = t.mu.weights[q] * symbol(n, t.mu.nodes[q], *eta);
        t.re(n, q) = v.real();
        t.im(n, q) = v.imag();
      }
    t.complex = (t.im.array() != 0.0).any();
  }
  t.zero = !(t.re.array() != 0.0).any() && !t.complex;
  return t;
}

struct Workspace {
  MatrixXd lag;
  MatrixXd proj;
  ArrayXd xpar, t, c_prev, c_cur, c_next, c1;
};

// Σ_n e^{-t} L_n(2t) Σ_q w_q m(n, μ_q) cos(μ_q x_par) for every x in the
// block; the result is written to re (and im for complex symbols).
void node_response(const MatrixXd &xs, const ArrayXd &sq, const Vector3d &dir,
                   double rho, const SymbolTable &tab, Workspace &ws,
                   Eigen::Ref<VectorXd> re, Eigen::Ref<VectorXd> im) {
  const Eigen::Index nx = xs.rows();
  const int ncap = tab.ncap;
  ws.xpar = (xs * dir).array();
  ws.t = (0.25 * rho) * (sq - ws.xpar.square()).max(0.0);
  ws.lag.resize(nx, ncap + 1);
  ws.lag.col(0) = (-ws.t).exp().matrix();
  if (ncap >= 1)
    ws.lag.col(1) = (ws.lag.col(0).array() * (1.0 - 2.0 * ws.t)).matrix();
  for (int m = 1; m < ncap; ++m)
    ws.lag.col(m + 1) = (((2.0 * m + 1.0) - 2.0 * ws.t) * ws.lag.col(m).array() -
                         m * ws.lag.col(m - 1).array()) /
                        (m + 1.0);

  // Chebyshev recurrence for cos(q θ), θ = step x_par.
  ws.c1 = (tab.mu.step * ws.xpar).cos();
  auto cosine_sum = [&](const MatrixXd &g, Eigen::Ref<VectorXd> out) {
    ws.proj.noalias() = ws.lag * g;
    ArrayXd acc = ws.proj.col(0).array();
    if (tab.mu.count > 1) {
      ws.c_prev = ArrayXd::Ones(nx);
      ws.c_cur = ws.c1;
      acc += ws.proj.col(1).array() * ws.c_cur;
      for (int q = 2; q < tab.mu.count; ++q) {
        ws.c_next = 2.0 * ws.c1 * ws.c_cur - ws.c_prev;
        acc += ws.proj.col(q).array() * ws.c_next;
        std::swap(ws.c_prev, ws.c_cur);
        std::swap(ws.c_cur, ws.c_next);
      }
    }
    out = acc.matrix();
  };
  cosine_sum(tab.re, re);
  if (tab.complex)
    cosine_sum(tab.im, im);
  else
    im.setZero();
}

Vector3d node_direction(const Ring &ring, int l) {
  const double phi = kTwoPi * l / ring.n_phi;
  return {ring.sin_theta * std::cos(phi), ring.sin_theta * std::sin(phi),
          ring.cos_theta};
}

void fill_diagnostics(KernelDiagnostics &d, const EtaGrid &grid,
                      const SpectralSymbol &symbol, Method m) {
  d.method = m;
  d.symbol = symbol.name;
  d.nodes = grid.node_count();
  d.shells = static_cast<int>(grid.shells.size());
  d.n_mu = grid.n_mu;
  d.max_phase = grid.max_phase();
  d.phase_limit = grid.phase_limit;
  d.extents = grid.extents;
  for (const Shell &s : grid.shells) {
    Shell copy = s;
    copy.rings.clear();
    d.shell_info.push_back(copy);
  }
}

// Neumaier accumulation over flat double views.
void compensated_add(Eigen::Ref<ArrayXd> sum, Eigen::Ref<ArrayXd> comp,
                     const Eigen::Ref<const ArrayXd> &v) {
  for (Eigen::Index i = 0; i < sum.size(); ++i) {
    const double s = sum[i];
    const double x = v[i];
    const double t = s + x;
    comp[i] += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    sum[i] = t;
  }
}

Eigen::Map<ArrayXd> flat(MatrixXcd &m) {
  return {reinterpret_cast<double *>(m.data()), 2 * m.size()};
}

// Per-ring symbol tables for radial symbols (shared by all nodes of a ring).
std::vector<std::vector<SymbolTable>> radial_tables(const SpectralSymbol &symbol,
                                                    const EtaGrid &grid) {
  std::vector<std::vector<SymbolTable>> out;
  for (const Shell &s : grid.shells) {
    std::vector<SymbolTable> row;
    for (const Ring &r : s.rings)
      row.push_back(make_table(symbol, grid.lambda_hi, grid.n_mu, r.rho, nullptr));
    out.push_back(std::move(row));
  }
  return out;
}

Extents point_extents(const std::vector<Point> &pts) {
  Extents e;
  for (const Point &p : pts) {
    e.x = std::max(e.x, p.x.norm());
    e.y = std::max(e.y, p.y.norm());
  }
  return e;
}

// Runs work(i) for i in [0, n) on up to `threads` threads, calling
// deliver(i, result) in index order.
template <typename Work, typename Deliver>
void ordered_parallel(int n, int threads, Work &&work, Deliver &&deliver) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (int i = 0; i < n; ++i)
      deliver(i, work(i));
    return;
  }
  for (int start = 0; start < n; start += threads) {
    const int stop = std::min(n, start + threads);
    std::vector<decltype(work(0))> results(stop - start);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(stop - start);
    for (int i = start; i < stop; ++i)
      pool.emplace_back([&, i] {
        try {
          results[i - start] = work(i);
        } catch (...) {
          errors[i - start] = std::current_exception();
        }
      });
    for (auto &t : pool)
      t.join();
    for (auto &e : errors)
      if (e)
        std::rethrow_exception(e);
    for (int i = start; i < stop; ++i)
      deliver(i, results[i - start]);
  }
}

} // namespace

double transverse_fourier_polar(int n, double eta_norm, double w_norm,
                                const DirectOptions &opt) {
  if (!(eta_norm > 0.0))
    throw std::invalid_argument("transverse_fourier_polar: |η| must be positive");
  PolarTransverse pt(opt);
  std::vector<double> out;
  pt.eval(eta_norm, n, w_norm, out);
  return out[n];
}

KernelField kernel_eval(const SpectralSymbol &symbol,
                        const std::vector<Point> &points,
                        const KernelOptions &opt) {
  const auto start = Clock::now();
  const EtaGrid grid = build_eta_grid(opt.grid, symbol, point_extents(points),
                                      opt.enforce_phase);
  KernelField field;
  field.points = points;
  fill_diagnostics(field.diagnostics, grid, symbol, opt.method);
  const Eigen::Index np = static_cast<Eigen::Index>(points.size());
  field.values = VectorXcd::Zero(np);
  if (symbol.is_zero() || np == 0)
    return field;

  MatrixXd xs(np, 3);
  for (Eigen::Index i = 0; i < np; ++i)
    xs.row(i) = points[i].x.transpose();
  const ArrayXd sq = xs.rowwise().squaredNorm().array();

  std::vector<CompensatedSum<cdouble>> acc(np);
  Workspace ws;
  VectorXd re(np), im(np);
  const bool radial = symbol.is_radial();
  const PolarTransverse polar(opt.direct);
  const GaussRule parallel = gauss_legendre(opt.direct.n_parallel, 0.0, 1.0);
  std::vector<double> trans;

  for (const Shell &shell : grid.shells) {
    for (const Ring &ring : shell.rings) {
      SymbolTable tab;
      if (radial)
        tab = make_table(symbol, grid.lambda_hi, grid.n_mu, ring.rho, nullptr);
      for (int l = 0; l < ring.n_phi; ++l) {
        const Vector3d dir = node_direction(ring, l);
        const Vector3d eta = ring.rho * dir;
        if (!radial)
          tab = make_table(symbol, grid.lambda_hi, grid.n_mu, ring.rho, &eta);
        if (tab.zero)
          continue;
        const double w = ring.weight * ring.rho * kPlancherel;
        if (opt.method == Method::closed_transverse) {
          node_response(xs, sq, dir, ring.rho, tab, ws, re, im);
        } else {
          // Reference: ξ_par by Gauss-Legendre on the support of each
          // m(n, ·, η), ξ_perp by polar quadrature.
          const Interval &lam = symbol.lambda_support;
          for (Eigen::Index i = 0; i < np; ++i) {
            const double xpar = xs.row(i).dot(dir);
            const double s = std::sqrt(std::max(0.0, sq[i] - xpar * xpar));
            polar.eval(ring.rho, tab.ncap, s, trans);
            cdouble v{};
            for (int n = 0; n <= tab.ncap; ++n) {
              const double level = (2 * n + 1) * ring.rho;
              if (level >= lam.hi)
                break;
              const double lo = std::sqrt(std::max(0.0, lam.lo - level));
              const double hi = std::sqrt(lam.hi - level);
              cdouble mn{};
              for (Eigen::Index q = 0; q < parallel.size(); ++q) {
                const double mu = lo + (hi - lo) * parallel.nodes[q];
                const cdouble m = radial ? cdouble(symbol.radial_value(n, mu, ring.rho))
                                         : symbol(n, mu, eta);
                mn += parallel.weights[q] * std::cos(mu * xpar) * m;
              }
              // the integrand is even in ξ_par
              v += 2.0 * (hi - lo) * mn * trans[n];
            }
            // (2π)^{-6} T_n = (2π)^{-5} |η| e^{-t} L_n(2t) / (2π|η|) ...
            v /= kTwoPi * ring.rho;
            re[i] = v.real();
            im[i] = v.imag();
          }
        }
        for (Eigen::Index i = 0; i < np; ++i) {
          const double ph = eta.dot(points[i].y);
          acc[i] += w * cdouble(re[i], im[i]) * cdouble(std::cos(ph), std::sin(ph));
        }
      }
    }
  }
  for (Eigen::Index i = 0; i < np; ++i)
    field.values[i] = acc[i].value();
  field.diagnostics.seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return field;
}

namespace {

// Planar phases e^{i ρ sinθ (cos φ y1 + sin φ y2)} for every node of the
// ring, stored transposed (planar point × node).
void planar_phases(const Lattice &lattice, const Ring &ring, MatrixXd &cos_t,
                   MatrixXd &sin_t) {
  const Eigen::Index np = static_cast<Eigen::Index>(lattice.planar.size());
  const int nphi = ring.n_phi;
  const double rp = ring.rho * ring.sin_theta;
  cos_t.resize(np, nphi);
  sin_t.resize(np, nphi);
  for (int l = 0; l < nphi; ++l) {
    const double phi = kTwoPi * l / nphi;
    const double c = rp * std::cos(phi), s = rp * std::sin(phi);
    if (lattice.planar_tensor()) {
      const Eigen::Index nu = lattice.planar_u.size(), nv = lattice.planar_v.size();
      const ArrayXd pu = c * lattice.planar_u.array(), pv = s * lattice.planar_v.array();
      const VectorXd cu = pu.cos().matrix(), su = pu.sin().matrix();
      const VectorXd cv = pv.cos().matrix(), sv = pv.sin().matrix();
      Eigen::Map<MatrixXd> re(cos_t.col(l).data(), nv, nu);
      Eigen::Map<MatrixXd> im(sin_t.col(l).data(), nv, nu);
      re.noalias() = cv * cu.transpose() - sv * su.transpose();
      im.noalias() = cv * su.transpose() + sv * cu.transpose();
    } else {
      for (Eigen::Index p = 0; p < np; ++p) {
        const double ph = c * lattice.planar[p][0] + s * lattice.planar[p][1];
        cos_t(p, l) = std::cos(ph);
        sin_t(p, l) = std::sin(ph);
      }
    }
  }
}

// x-rows [x0, x0 + xc) of the field, full node sweep.
MatrixXcd general_chunk(const SpectralSymbol &symbol, const EtaGrid &grid,
                        const std::vector<std::vector<SymbolTable>> &tables,
                        const Lattice &lattice, Eigen::Index x0, Eigen::Index xc,
                        int batch) {
  const Eigen::Index np = static_cast<Eigen::Index>(lattice.planar.size());
  const Eigen::Index nv = lattice.vertical.size();
  const bool radial = !tables.empty();
  MatrixXcd sum = MatrixXcd::Zero(xc * np, nv);
  MatrixXcd comp = MatrixXcd::Zero(xc * np, nv);
  MatrixXd xs(xc, 3);
  for (Eigen::Index i = 0; i < xc; ++i)
    xs.row(i) = lattice.xs[x0 + i].transpose();
  const ArrayXd sq = xs.rowwise().squaredNorm().array();
  Workspace ws;
  MatrixXcd shell_sum(xc * np, nv);
  MatrixXcd bb(xc * np, batch);
  MatrixXcd vb(batch, nv);
  MatrixXd a_re, a_im, e_cos, e_sin;
  MatrixXcd b_ring(xc, np);

  for (std::size_t si = 0; si < grid.shells.size(); ++si) {
    const Shell &shell = grid.shells[si];
    shell_sum.setZero();
    int filled = 0;
    auto flush = [&] {
      if (filled == 0)
        return;
      shell_sum.noalias() += bb.leftCols(filled) * vb.topRows(filled);
      filled = 0;
    };
    for (std::size_t ri = 0; ri < shell.rings.size(); ++ri) {
      const Ring &ring = shell.rings[ri];
      const int nphi = ring.n_phi;
      a_re.resize(xc, nphi);
      a_im.resize(xc, nphi);
      bool any = false, complex = false;
      SymbolTable own;
      for (int l = 0; l < nphi; ++l) {
        const Vector3d dir = node_direction(ring, l);
        const SymbolTable *tab = &own;
        if (radial) {
          tab = &tables[si][ri];
        } else {
          const Vector3d eta = ring.rho * dir;
          own = make_table(symbol, grid.lambda_hi, grid.n_mu, ring.rho, &eta);
        }
        if (tab->zero) {
          a_re.col(l).setZero();
          a_im.col(l).setZero();
          continue;
        }
        any = true;
        complex = complex || tab->complex;
        node_response(xs, sq, dir, ring.rho, *tab, ws, a_re.col(l), a_im.col(l));
      }
      if (!any)
        continue;
      const double w = ring.weight * ring.rho * kPlancherel;
      a_re *= w;
      a_im *= w;

      planar_phases(lattice, ring, e_cos, e_sin);
      b_ring.real().noalias() = a_re * e_cos.transpose();
      b_ring.imag().noalias() = a_re * e_sin.transpose();
      if (complex) {
        b_ring.real().noalias() -= a_im * e_sin.transpose();
        b_ring.imag().noalias() += a_im * e_cos.transpose();
      }
      bb.col(filled) = Eigen::Map<const VectorXcd>(b_ring.data(), xc * np);
      const double rz = ring.rho * ring.cos_theta;
      for (Eigen::Index k = 0; k < nv; ++k)
        vb(filled, k) = std::polar(1.0, rz * lattice.vertical[k]);
      if (++filled == batch)
        flush();
    }
    flush();
    compensated_add(flat(sum), flat(comp), flat(shell_sum));
  }
  flat(sum) += flat(comp);
  MatrixXcd out(xc, np * nv);
  for (Eigen::Index p = 0; p < np; ++p)
    for (Eigen::Index k = 0; k < nv; ++k)
      out.col(p * nv + k) = sum.col(k).segment(p * xc, xc);
  return out;
}

// Invariant lattice: the sphere of directions is taken with its pole on the
// x-axis, so x_par and |x_perp| depend on the polar angle only and the
// azimuthal sum over e^{i<η,y>} is the exact integral 2π J_0(ρ sinθ v).
MatrixXcd axial_chunk(const EtaGrid &grid,
                      const std::vector<std::vector<SymbolTable>> &tables,
                      const Lattice &lattice, Eigen::Index x0, Eigen::Index xc,
                      int batch) {
  const Eigen::Index nu = lattice.planar_u.size(), nv = lattice.planar_v.size();
  const Eigen::Index np = nu * nv;
  MatrixXcd sum = MatrixXcd::Zero(xc, np);
  MatrixXcd comp = MatrixXcd::Zero(xc, np);
  MatrixXd xs(xc, 3);
  for (Eigen::Index i = 0; i < xc; ++i)
    xs.row(i) = lattice.xs[x0 + i].transpose();
  const ArrayXd sq = xs.rowwise().squaredNorm().array();
  Workspace ws;
  VectorXd im(xc);
  MatrixXd a, e_re, e_im;
  MatrixXcd shell_sum(xc, np);
  VectorXd bessel(nv);

  for (std::size_t si = 0; si < grid.shells.size(); ++si) {
    const Shell &shell = grid.shells[si];
    const Eigen::Index nr = static_cast<Eigen::Index>(shell.rings.size());
    shell_sum.setZero();
    bool any = false;
    for (Eigen::Index r0 = 0; r0 < nr; r0 += batch) {
      const Eigen::Index nb = std::min<Eigen::Index>(batch, nr - r0);
      a.setZero(xc, nb);
      e_re.setZero(np, nb);
      e_im.setZero(np, nb);
      bool filled = false;
      for (Eigen::Index b = 0; b < nb; ++b) {
        const Ring &ring = shell.rings[r0 + b];
        const SymbolTable &tab = tables[si][r0 + b];
        if (tab.zero)
          continue;
        filled = true;
        const Vector3d dir(ring.cos_theta, ring.sin_theta, 0.0);
        node_response(xs, sq, dir, ring.rho, tab, ws, a.col(b), im);
        a.col(b) *= ring.weight * ring.n_phi * ring.rho * kPlancherel;
        const double ku = ring.rho * ring.cos_theta, kv = ring.rho * ring.sin_theta;
        for (Eigen::Index j = 0; j < nv; ++j)
          bessel[j] = std::cyl_bessel_j(0.0, kv * lattice.planar_v[j]);
        const ArrayXd pu = ku * lattice.planar_u.array();
        Eigen::Map<MatrixXd>(e_re.col(b).data(), nv, nu).noalias() =
            bessel * pu.cos().matrix().transpose();
        Eigen::Map<MatrixXd>(e_im.col(b).data(), nv, nu).noalias() =
            bessel * pu.sin().matrix().transpose();
      }
      if (!filled)
        continue;
      any = true;
      shell_sum.real().noalias() += a * e_re.transpose();
      shell_sum.imag().noalias() += a * e_im.transpose();
    }
    if (any)
      compensated_add(flat(sum), flat(comp), flat(shell_sum));
  }
  flat(sum) += flat(comp);
  return sum;
}

} // namespace

KernelDiagnostics kernel_stream(const SpectralSymbol &symbol,
                                const Lattice &lattice, const KernelOptions &opt,
                                const BlockSink &sink) {
  if (opt.method != Method::closed_transverse)
    throw std::invalid_argument(
        "kernel_stream: lattice evaluation supports closed_transverse only");
  const bool axial = lattice.kind == Lattice::Kind::invariant;
  if (axial && !symbol.is_radial() && !symbol.is_zero())
    throw std::invalid_argument(
        "kernel_stream: the invariant lattice needs a symbol depending on |η| only");
  if (axial && (!lattice.planar_tensor() || lattice.vertical.size() != 1 ||
                lattice.vertical[0] != 0.0))
    throw std::invalid_argument("kernel_stream: malformed invariant lattice");
  const auto start = Clock::now();
  const EtaGrid grid =
      build_eta_grid(opt.grid, symbol, lattice.extents(), opt.enforce_phase, axial);
  KernelDiagnostics diag;
  fill_diagnostics(diag, grid, symbol, opt.method);

  const Eigen::Index nx = lattice.x_count();
  Eigen::Index chunk = opt.x_chunk;
  if (chunk <= 0)
    chunk = axial ? nx
            : lattice.planar_tensor()
                ? lattice.planar_u.size() * lattice.planar_v.size()
                : 256;
  chunk = std::clamp<Eigen::Index>(chunk, 1, std::max<Eigen::Index>(nx, 1));
  const int n_chunks = static_cast<int>((nx + chunk - 1) / chunk);

  const auto tables = symbol.is_radial() ? radial_tables(symbol, grid)
                                         : std::vector<std::vector<SymbolTable>>{};
  const int batch = std::max(1, opt.ring_batch);

  auto work = [&](int c) -> MatrixXcd {
    const Eigen::Index x0 = c * chunk;
    const Eigen::Index xc = std::min(chunk, nx - x0);
    if (symbol.is_zero())
      return MatrixXcd::Zero(xc, lattice.y_count());
    if (axial)
      return axial_chunk(grid, tables, lattice, x0, xc, 8 * batch);
    return general_chunk(symbol, grid, tables, lattice, x0, xc, batch);
  };

  ordered_parallel(n_chunks, opt.threads, work, [&](int c, const MatrixXcd &m) {
    sink(LatticeBlock{c * chunk, m});
  });
  diag.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return diag;
}

KernelField kernel_eval(const SpectralSymbol &symbol, const Lattice &lattice,
                        const KernelOptions &opt) {
  KernelField field;
  field.lattice = std::make_shared<const Lattice>(lattice);
  field.lattice_values = MatrixXcd::Zero(lattice.x_count(), lattice.y_count());
  field.diagnostics = kernel_stream(symbol, lattice, opt, [&](const LatticeBlock &b) {
    field.lattice_values.middleRows(b.x_begin, b.values.rows()) = b.values;
  });
  return field;
}

SpectralSymbol truncated_symbol(const Multiplier &f, const DyadicCutoff &chi,
                                int k_min) {
  const int k_top = top_dyadic_index(f.support());
  if (k_min > k_top)
    throw std::invalid_argument("kernel_eval_F: k_min exceeds the top index");
  return dyadic_sum_symbol(f, chi, k_min, k_top);
}

KernelField kernel_eval_F(const Multiplier &f, const DyadicCutoff &chi,
                          const Lattice &lattice, int k_min,
                          const KernelOptions &opt) {
  KernelOptions o = opt;
  o.grid.k_min = k_min;
  return kernel_eval(truncated_symbol(f, chi, k_min), lattice, o);
}

KernelField kernel_eval_F(const Multiplier &f, const DyadicCutoff &chi,
                          const std::vector<Point> &points, int k_min,
                          const KernelOptions &opt) {
  KernelOptions o = opt;
  o.grid.k_min = k_min;
  return kernel_eval(truncated_symbol(f, chi, k_min), points, o);
}

double dyadic_tail_heuristic(int k_min, double r) {
  return std::pow(std::ldexp(1.0, k_min), 1.5 - r);
}

double spectral_l2_norm(const SpectralSymbol &symbol, const EtaGrid &grid) {
  if (symbol.is_zero())
    return 0.0;
  CompensatedSum<double> acc;
  for (const Shell &shell : grid.shells)
    for (const Ring &ring : shell.rings) {
      auto table_mass = [](const SymbolTable &t) {
        double s = 0.0;
        for (int n = 0; n <= t.ncap; ++n)
          for (int q = 0; q < t.mu.count; ++q) {
            // the table already carries one factor of the μ-weight
            const double w = t.mu.weights[q];
            const double re = t.re(n, q) / w;
            const double im = t.complex ? t.im(n, q) / w : 0.0;
            s += w * (re * re + im * im);
          }
        return s;
      };
      const double w = ring.weight * ring.rho * kPlancherel;
      if (symbol.is_radial()) {
        const SymbolTable t =
            make_table(symbol, grid.lambda_hi, grid.n_mu, ring.rho, nullptr);
        if (t.mu.step > 0.0)
          acc += w * ring.n_phi * table_mass(t);
      } else {
        for (int l = 0; l < ring.n_phi; ++l) {
          const Vector3d eta = ring.rho * node_direction(ring, l);
          const SymbolTable t =
              make_table(symbol, grid.lambda_hi, grid.n_mu, ring.rho, &eta);
          if (t.mu.step > 0.0)
            acc += w * table_mass(t);
        }
      }
    }
  return std::sqrt(acc.value());
}

double spectral_l2_norm(const SpectralSymbol &symbol, const GridSpec &spec) {
  return spectral_l2_norm(symbol, build_eta_grid(spec, symbol, Extents{}, false));
}

} // namespace nilmult

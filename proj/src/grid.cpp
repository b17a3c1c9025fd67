#include "nilmult/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nilmult/quadrature.hpp"
#include "nilmult/special.hpp"

namespace nilmult {

void GridSpec::validate() const {
  if (n_r < 1 || n_theta < 1 || n_phi < 1)
    throw std::invalid_argument("GridSpec: node counts must be positive");
  if (n_mu < 3 || n_mu % 2 == 0)
    throw std::invalid_argument("GridSpec: n_mu must be odd and at least 3");
  if (!(scale > 0.0))
    throw std::invalid_argument("GridSpec: scale must be positive");
  if (!(phase_limit > 0.0))
    throw std::invalid_argument("GridSpec: phase_limit must be positive");
  if (max_nodes < 1)
    throw std::invalid_argument("GridSpec: max_nodes must be positive");
}

double Shell::max_phase() const {
  return std::max({phase_radial, phase_polar, phase_azimuthal});
}

long EtaGrid::node_count() const {
  long n = 0;
  for (const Shell &s : shells)
    for (const Ring &r : s.rings)
      n += r.n_phi;
  return n;
}

double EtaGrid::max_phase() const {
  double m = 0.0;
  for (const Shell &s : shells)
    m = std::max(m, s.max_phase());
  return m;
}

std::string EtaGrid::describe() const {
  std::ostringstream os;
  os << "shells=" << shells.size() << " nodes=" << node_count()
     << " n_mu=" << n_mu << " max_phase=" << max_phase();
  return os.str();
}

int laguerre_cap(double lambda_hi, double rho) {
  const double q = std::floor((lambda_hi / rho - 1.0) / 2.0) + 2.0;
  if (q > kMaxDegree)
    throw std::out_of_range("laguerre_cap: |η| = " + std::to_string(rho) +
                            " needs Laguerre degrees above the cap");
  return static_cast<int>(std::max(q, 0.0));
}

double mu_half_width(double lambda_hi, double rho) {
  return std::sqrt(std::max(lambda_hi - rho, 0.0));
}

namespace {

// Largest gap in θ between consecutive polar nodes, including the poles.
double polar_gap(const GaussRule &cos_rule) {
  std::vector<double> th;
  th.reserve(cos_rule.size() + 2);
  th.push_back(0.0);
  for (Eigen::Index i = 0; i < cos_rule.size(); ++i)
    th.push_back(std::acos(std::clamp(cos_rule.nodes[i], -1.0, 1.0)));
  th.push_back(kPi);
  std::sort(th.begin(), th.end());
  double g = 0.0;
  for (std::size_t i = 1; i < th.size(); ++i)
    g = std::max(g, th[i] - th[i - 1]);
  return g;
}

int grow(int n) { return n + std::max(1, n / 8); }

int round_up_two_mod_four(int n) {
  while (n % 4 != 2)
    ++n;
  return n;
}

} // namespace

EtaGrid build_eta_grid(const GridSpec &spec, const SpectralSymbol &symbol,
                       const Extents &ext, bool enforce_phase,
                       bool count_rings) {
  spec.validate();
  const double lambda_hi = symbol.lambda_support.hi;
  if (!(lambda_hi > 0.0))
    throw std::invalid_argument("build_eta_grid: empty λ-support");
  EtaGrid grid;
  grid.n_mu = spec.n_mu;
  grid.lambda_hi = lambda_hi;
  grid.phase_limit = spec.phase_limit;
  grid.extents = ext;

  const double lower = symbol.eta_lo > 0.0 ? symbol.eta_lo
                                           : std::ldexp(1.0, spec.k_min - 1);
  const double upper = std::min(symbol.eta_hi, lambda_hi);
  if (!(upper > lower))
    return grid;
  const int j_lo = static_cast<int>(std::floor(std::log2(lower)));
  const int j_hi = static_cast<int>(std::ceil(std::log2(upper))) - 1;

  const double target = spec.phase_limit / spec.scale;
  const double root_lambda = std::sqrt(lambda_hi);
  auto scaled = [&](int n) {
    return std::max(1, static_cast<int>(std::ceil(n * spec.scale)));
  };

  long total = 0;
  for (int j = j_lo; j <= j_hi; ++j) {
    Shell sh{};
    sh.index = j;
    sh.lo = std::ldexp(1.0, j);
    sh.hi = std::ldexp(1.0, j + 1);
    const double rho_top = std::min(sh.hi, lambda_hi);
    const double radial_rate = ext.y + ext.x * root_lambda / (2.0 * sh.lo);
    const double angular_rate = rho_top * ext.y + root_lambda * ext.x;

    int n_r = scaled(spec.n_r);
    GaussRule radial = gauss_legendre(n_r, sh.lo, sh.hi);
    while (spec.auto_resolve &&
           max_node_gap(radial, sh.lo, sh.hi) * radial_rate > target) {
      n_r = grow(n_r);
      radial = gauss_legendre(n_r, sh.lo, sh.hi);
    }
    int n_theta = scaled(spec.n_theta);
    GaussRule polar = gauss_legendre(n_theta, -1.0, 1.0);
    while (spec.auto_resolve && polar_gap(polar) * angular_rate > target) {
      n_theta = grow(n_theta);
      polar = gauss_legendre(n_theta, -1.0, 1.0);
    }
    int n_phi = scaled(spec.n_phi);
    if (spec.auto_resolve)
      n_phi = std::max(n_phi, static_cast<int>(std::ceil(kTwoPi * angular_rate / target)));
    if (spec.break_quarter_turn)
      n_phi = round_up_two_mod_four(n_phi);

    sh.n_r = n_r;
    sh.n_theta = n_theta;
    sh.n_phi = n_phi;
    sh.phase_radial = max_node_gap(radial, sh.lo, sh.hi) * radial_rate;
    sh.phase_polar = polar_gap(polar) * angular_rate;
    sh.phase_azimuthal = kTwoPi / n_phi * angular_rate;

    for (int a = 0; a < n_r; ++a) {
      const double rho = radial.nodes[a];
      if (rho >= lambda_hi)
        continue;
      for (int b = 0; b < n_theta; ++b) {
        const double c = polar.nodes[b];
        Ring ring;
        ring.rho = rho;
        ring.cos_theta = c;
        ring.sin_theta = std::sqrt(std::max(0.0, 1.0 - c * c));
        ring.weight = rho * rho * radial.weights[a] * polar.weights[b] * kTwoPi / n_phi;
        ring.n_phi = n_phi;
        sh.rings.push_back(ring);
        total += count_rings ? 1 : n_phi;
      }
    }
    if (total > spec.max_nodes)
      throw std::runtime_error("build_eta_grid: more than " +
                               std::to_string(spec.max_nodes) +
                               (count_rings ? " η rings" : " η nodes") +
                               " needed for the requested extents");
    grid.shells.push_back(std::move(sh));
  }
  if (enforce_phase && grid.max_phase() > spec.phase_limit * (1.0 + 1e-12))
    throw std::runtime_error("build_eta_grid: phase increment " +
                             std::to_string(grid.max_phase()) +
                             " per node exceeds the limit " +
                             std::to_string(spec.phase_limit));
  return grid;
}

Vector3d Lattice::y_at(Eigen::Index iy) const {
  const Eigen::Index nv = vertical.size();
  const Eigen::Vector2d &p = planar[iy / nv];
  return {p[0], p[1], vertical[iy % nv]};
}

double Lattice::y_weight(Eigen::Index iy) const {
  const Eigen::Index nv = vertical.size();
  return planar_weights[iy / nv] * vertical_weights[iy % nv];
}

Extents Lattice::extents() const {
  Extents e;
  for (const Vector3d &x : xs)
    e.x = std::max(e.x, x.norm());
  double vmax = 0.0;
  for (Eigen::Index k = 0; k < vertical.size(); ++k)
    vmax = std::max(vmax, std::abs(vertical[k]));
  double pmax = 0.0;
  for (const auto &p : planar)
    pmax = std::max(pmax, p.norm());
  e.y = std::hypot(pmax, vmax);
  return e;
}

namespace {

VectorXd trapezoid_axis(int n, double extent, VectorXd &weights) {
  if (n < 2)
    throw std::invalid_argument("cartesian_lattice: need at least 2 points per axis");
  VectorXd nodes = VectorXd::LinSpaced(n, -extent, extent);
  const double h = 2.0 * extent / (n - 1);
  weights = VectorXd::Constant(n, h);
  weights[0] = weights[n - 1] = 0.5 * h;
  return nodes;
}

} // namespace

Lattice cartesian_lattice(int per_axis, double x_extent, double y_extent) {
  if (!(x_extent > 0.0) || !(y_extent > 0.0))
    throw std::invalid_argument("cartesian_lattice: extents must be positive");
  Lattice l;
  l.kind = Lattice::Kind::cartesian;
  VectorXd wx, wy;
  const VectorXd ax = trapezoid_axis(per_axis, x_extent, wx);
  const VectorXd ay = trapezoid_axis(per_axis, y_extent, wy);
  const int n = per_axis;
  l.xs.reserve(n * n * n);
  l.x_weights.resize(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        l.x_weights[l.xs.size()] = wx[i] * wx[j] * wx[k];
        l.xs.emplace_back(ax[i], ax[j], ax[k]);
      }
  l.planar_weights.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      l.planar_weights[l.planar.size()] = wy[i] * wy[j];
      l.planar.emplace_back(ay[i], ay[j]);
    }
  l.vertical = ay;
  l.vertical_weights = wy;
  l.planar_u = ay;
  l.planar_v = ay;
  std::ostringstream os;
  os << "cartesian " << n << "^3x" << n << "^3 |x_i|<=" << x_extent
     << " |y_i|<=" << y_extent;
  l.label = os.str();
  return l;
}

Lattice invariant_lattice(const InvariantLatticeSpec &s) {
  if (s.n_a < 1 || s.n_u < 1 || s.n_v < 1 || !(s.a_max > 0.0) || !(s.b_max > 0.0))
    throw std::invalid_argument("invariant_lattice: invalid specification");
  Lattice l;
  l.kind = Lattice::Kind::invariant;
  const GaussRule ra = gauss_legendre(s.n_a, 0.0, s.a_max);
  const GaussRule ru = gauss_legendre(s.n_u, -s.b_max, s.b_max);
  const GaussRule rv = gauss_legendre(s.n_v, 0.0, s.b_max);
  l.x_weights.resize(s.n_a);
  for (int i = 0; i < s.n_a; ++i) {
    const double a = ra.nodes[i];
    l.xs.emplace_back(a, 0.0, 0.0);
    l.x_weights[i] = 4.0 * kPi * a * a * ra.weights[i];
  }
  l.planar_weights.resize(s.n_u * s.n_v);
  for (int i = 0; i < s.n_u; ++i)
    for (int j = 0; j < s.n_v; ++j) {
      const double v = rv.nodes[j];
      l.planar_weights[l.planar.size()] = kTwoPi * v * ru.weights[i] * rv.weights[j];
      l.planar.emplace_back(ru.nodes[i], v);
    }
  l.planar_u = ru.nodes;
  l.planar_v = rv.nodes;
  l.vertical = VectorXd::Zero(1);
  l.vertical_weights = VectorXd::Ones(1);
  std::ostringstream os;
  os << "invariant a:" << s.n_a << "x[0," << s.a_max << "] u:" << s.n_u << "x[-"
     << s.b_max << "," << s.b_max << "] v:" << s.n_v << "x[0," << s.b_max << "]";
  l.label = os.str();
  return l;
}

} // namespace nilmult

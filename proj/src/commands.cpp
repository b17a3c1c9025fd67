#include "nilmult/commands.hpp"

#include <chrono>
#include <cmath>

#include "nilmult/norms.hpp"
#include "nilmult/studies.hpp"
#include "nilmult/verify.hpp"

namespace nilmult {

namespace fs = std::filesystem;

namespace {

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

constexpr double kCrossMethodTolerance = 0.02;

std::string cell(double v) { return format_double(v); }

Json sidecar_base(const ExperimentConfig &c) {
  return {{"stamp", to_json(c.stamp())}, {"config", to_json(c)}};
}

SpectralSymbol kernel_symbol(const ExperimentConfig &c) {
  const Multiplier f = c.multiplier.build();
  if (c.multiplier.family == "zero")
    return zero_symbol(c.multiplier.support);
  const DyadicCutoff chi = make_chi();
  if (c.kernel.symbol == "piece")
    return dyadic_piece_symbol(f, chi, std::ldexp(1.0, c.kernel.piece));
  return truncated_symbol(f, chi, c.grid.k_min);
}

void require_radial_family(const ExperimentConfig &c, const char *verb) {
  if (c.multiplier.family == "zero")
    throw ConfigError(std::string(verb) + ": needs a nonzero multiplier");
}

} // namespace

CommandResult cmd_verify(const ExperimentConfig &c, std::ostream &log) {
  VerifyOptions opt;
  opt.seed = c.seed;
  opt.random_points = c.verify.points;
  const VerifyReport report = verify_all(opt);

  const fs::path dir = c.output;
  CommandResult res;
  {
    CsvWriter csv(dir / "verify.csv", c.stamp(),
                  {"suite", "invariant", "residual", "tolerance", "cases", "pass"});
    for (const CheckRow &r : report.rows)
      csv.row({r.suite, r.name, cell(r.residual), cell(r.tolerance), std::to_string(r.cases),
               r.pass ? "true" : "false"});
  }
  Json side = sidecar_base(c);
  side["passed"] = report.passed();
  side["failures"] = report.failures();
  write_json(dir / "verify.json", side);
  res.files = {dir / "verify.csv", dir / "verify.json"};

  for (const CheckRow &r : report.rows)
    log << (r.pass ? "pass " : "FAIL ") << r.suite << '/' << r.name << " residual "
        << r.residual << " tol " << r.tolerance << '\n';
  res.failures = report.failures();
  res.exit_code = res.failures.empty() ? 0 : 1;
  for (const std::string &name : res.failures)
    log << "failed invariant: " << name << '\n';
  return res;
}

CommandResult cmd_kernel(const ExperimentConfig &c, std::ostream &log) {
  const Stopwatch clock;
  const SpectralSymbol symbol = kernel_symbol(c);
  const KernelOptions opt = c.kernel_options();
  const fs::path dir = c.output;
  Json side = sidecar_base(c);
  CommandResult res;

  if (c.method == Method::direct6d) {
    const std::vector<Point> pts =
        random_points(static_cast<std::size_t>(c.kernel.points), c.kernel.point_extent, c.seed);
    const KernelField direct = kernel_eval(symbol, pts, opt);
    KernelOptions closed_opt = opt;
    closed_opt.method = Method::closed_transverse;
    const KernelField closed = kernel_eval(symbol, pts, closed_opt);
    const DeviationReport dev = compare_values(direct.values, closed.values);
    write_kernel_csv(dir / "kernel.csv", c.stamp(), direct);
    side["diagnostics"] = to_json(direct.diagnostics);
    const bool agree = dev.relative() <= kCrossMethodTolerance;
    side["cross_method"] = {{"reference", to_string(Method::closed_transverse)},
                            {"max_abs_deviation", dev.max_abs},
                            {"relative_deviation", dev.relative()},
                            {"tolerance", kCrossMethodTolerance},
                            {"pass", agree}};
    side["rows"] = pts.size();
    log << "cross-method relative deviation " << dev.relative() << '\n';
    if (!agree) {
      res.exit_code = 1;
      res.failures.push_back("cross_method");
    }
  } else {
    const Lattice lattice = c.kernel.lattice.build();
    KernelCsvSink sink(dir / "kernel.csv", c.stamp(), lattice,
                       export_mask(lattice, c.kernel.export_stride));
    NormAccumulator acc(lattice, {});
    const KernelDiagnostics diag = kernel_stream(symbol, lattice, opt, [&](const LatticeBlock &b) {
      sink(b);
      acc.add(b);
    });
    sink.close();
    side["lattice"] = lattice.label;
    side["export_stride"] = c.kernel.export_stride;
    side["rows"] = sink.rows();
    side["diagnostics"] = to_json(diag);
    if (c.kernel.plancherel) {
      const double spectral = spectral_l2_norm(
          symbol, build_eta_grid(opt.grid, symbol, lattice.extents(), opt.enforce_phase,
                                         symbol.is_radial()));
      const double grid_l2 = acc.l2();
      const double rel = spectral > 0.0 ? std::abs(grid_l2 - spectral) / spectral : grid_l2;
      side["plancherel"] = {
          {"grid_l2", grid_l2}, {"spectral_l2", spectral}, {"relative_deviation", rel}};
      log << "plancherel grid " << grid_l2 << " spectral " << spectral << " rel " << rel << '\n';
    }
    log << sink.rows() << " rows, " << diag.nodes << " eta nodes\n";
  }
  write_json(dir / "kernel.json", side);
  res.files = {dir / "kernel.csv", dir / "kernel.json"};
  log << "kernel done in " << clock.seconds() << " s\n";
  return res;
}

CommandResult cmd_scaling(const ExperimentConfig &c, std::ostream &log) {
  require_radial_family(c, "scaling");
  ScalingOptions opt;
  opt.r_values = c.scaling.r_values;
  opt.k_lo = c.scaling.k_lo;
  opt.k_hi = c.scaling.k_hi;
  opt.lattice = c.scaling.lattice;
  opt.kernel = c.kernel_options();
  const ScalingStudy study = scaling_study(c.multiplier.build(), make_chi(), opt);

  const fs::path dir = c.output;
  {
    CsvWriter csv(dir / "scaling_norms.csv", c.stamp(), {"M", "r", "y_weighted_l2_squared"});
    for (const ScalingRow &r : study.rows)
      csv.row(std::vector<double>{r.M, r.r, r.value});
  }
  {
    CsvWriter csv(dir / "scaling_fits.csv", c.stamp(),
                  {"r", "expected_slope", "slope", "intercept", "rms_residual", "points"});
    for (const ScalingFit &f : study.fits) {
      csv.row(std::vector<double>{f.r, f.expected, f.fit.slope, f.fit.intercept,
                                  f.fit.rms_residual, static_cast<double>(f.fit.used)});
      log << "r " << f.r << " slope " << f.fit.slope << " expected " << f.expected << '\n';
    }
  }
  write_json(dir / "scaling.json", sidecar_base(c));
  CommandResult res;
  res.files = {dir / "scaling_norms.csv", dir / "scaling_fits.csv", dir / "scaling.json"};
  return res;
}

CommandResult cmd_norms(const ExperimentConfig &c, std::ostream &log) {
  require_radial_family(c, "norms");
  const Multiplier f = c.multiplier.build();
  const DyadicCutoff chi = make_chi();
  const KernelOptions opt = c.kernel_options();
  const NormsConfig &n = c.norms;
  const Lattice lattice = invariant_lattice(n.lattice);
  const KernelField field = kernel_eval_F(f, chi, lattice, n.k_min, opt);
  GridSpec spec = opt.grid;
  spec.k_min = n.k_min;
  const SpectralSymbol symbol = truncated_symbol(f, chi, n.k_min);
  const double spectral =
      spectral_l2_norm(symbol, build_eta_grid(spec, symbol, lattice.extents(), opt.enforce_phase,
                                         symbol.is_radial()));

  const fs::path dir = c.output;
  CommandResult res;
  const double l1 = l1_norm(field), l2 = l2_norm(field);
  {
    CsvWriter csv(dir / "norms.csv", c.stamp(),
                  {"alpha", "r", "l1", "l2", "weighted_l2", "spectral_l2"});
    for (double alpha : n.alpha_values)
      for (double r : n.r_values)
        csv.row(std::vector<double>{alpha, r, l1, l2, weighted_l2_norm(field, alpha, r), spectral});
  }
  const HolderCheck h = holder_chain(field, n.alpha1, n.alpha2, n.holder_r);
  {
    CsvWriter csv(dir / "holder.csv", c.stamp(),
                  {"alpha1", "alpha2", "r", "l1", "weighted_l2", "dual", "bound", "holds"});
    csv.row({cell(n.alpha1), cell(n.alpha2), cell(n.holder_r), cell(h.l1), cell(h.weighted_l2),
             cell(h.dual), cell(h.bound), h.holds() ? "true" : "false"});
  }
  log << "l1 " << l1 << " l2 " << l2 << " spectral l2 " << spectral << " holder bound "
      << h.bound << '\n';
  res.files = {dir / "norms.csv", dir / "holder.csv"};

  if (n.doubling) {
    CsvWriter csv(dir / "doubling.csv", c.stamp(),
                  {"check", "alpha", "r", "base", "refined", "relative_change"});
    for (double r : n.r_values) {
      const StabilityCheck ext = extent_doubling_check(f, chi, n.lattice, n.k_min, 0.0, r, opt);
      const StabilityCheck tail = dyadic_tail_check(f, chi, n.lattice, n.k_min, 2, 0.0, r, opt);
      csv.row({"extent_doubling", "0", cell(r), cell(ext.base), cell(ext.refined),
               cell(ext.relative_change())});
      csv.row({"dyadic_tail", "0", cell(r), cell(tail.base), cell(tail.refined),
               cell(tail.relative_change())});
      log << "r " << r << " doubling drift " << ext.relative_change() << " tail drift "
          << tail.relative_change() << '\n';
    }
    res.files.push_back(dir / "doubling.csv");
  }
  if (n.family > 0) {
    const FamilyStudy study =
        l1_family_study(equal_sobolev_family(n.family, n.s, c.multiplier.support), chi, n.s,
                        n.lattice, n.k_min, n.alpha1, n.alpha2, n.holder_r, opt);
    CsvWriter csv(dir / "family.csv", c.stamp(),
                  {"member", "sobolev_norm", "l1", "holder_bound", "holds"});
    for (const FamilyMember &m : study.members)
      csv.row({m.name, cell(m.sobolev), cell(m.l1), cell(m.holder.bound),
               m.holder.holds() ? "true" : "false"});
    log << "family l1 max/min " << study.ratio() << '\n';
    res.files.push_back(dir / "family.csv");
  }
  write_json(dir / "norms.json", sidecar_base(c));
  res.files.push_back(dir / "norms.json");
  return res;
}

CommandResult run_experiment(const ExperimentConfig &c, std::ostream &log) {
  if (c.experiment == "verify")
    return cmd_verify(c, log);
  if (c.experiment == "kernel")
    return cmd_kernel(c, log);
  if (c.experiment == "scaling")
    return cmd_scaling(c, log);
  if (c.experiment == "norms")
    return cmd_norms(c, log);
  throw ConfigError("experiment: unknown value '" + c.experiment + "'");
}

} // namespace nilmult

#include "nilmult/config.hpp"

#include <fstream>
#include <set>

namespace nilmult {

namespace {

/// Walks one JSON object, remembering which keys were consumed.
class Section {
public:
  Section(const Json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object())
      throw ConfigError(where() + ": expected an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() == 0)
      finish();
  }

  template <typename T> void get(const char *key, T &out) {
    const auto it = obj_.find(key);
    if (it == obj_.end())
      return;
    used_.insert(key);
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception &) {
      throw ConfigError(where() + "." + key + ": wrong type");
    }
  }

  bool has(const char *key) const { return obj_.contains(key); }

  const Json &child(const char *key) {
    used_.insert(key);
    return obj_.at(key);
  }

  std::string sub(const char *key) const { return where() + "." + key; }

  void finish() {
    for (const auto &item : obj_.items())
      if (!used_.count(item.key()))
        throw ConfigError(where() + ": unknown key '" + item.key() + "'");
  }

private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const Json &obj_;
  std::string path_;
  std::set<std::string> used_;
};

void read_interval(Section &s, const char *key, Interval &iv) {
  if (!s.has(key))
    return;
  std::vector<double> v;
  s.get(key, v);
  if (v.size() != 2)
    throw ConfigError(s.sub(key) + ": expected [lo, hi]");
  iv = {v[0], v[1]};
}

void read_invariant(const Json &j, const std::string &path, InvariantLatticeSpec &spec) {
  Section s(j, path);
  s.get("n_a", spec.n_a);
  s.get("a_max", spec.a_max);
  s.get("n_u", spec.n_u);
  s.get("n_v", spec.n_v);
  s.get("b_max", spec.b_max);
}

void read_lattice(const Json &j, const std::string &path, LatticeConfig &l) {
  Section s(j, path);
  s.get("kind", l.kind);
  s.get("per_axis", l.per_axis);
  s.get("x_extent", l.x_extent);
  s.get("y_extent", l.y_extent);
  if (s.has("invariant"))
    read_invariant(s.child("invariant"), s.sub("invariant"), l.invariant);
}

Json invariant_json(const InvariantLatticeSpec &s) {
  return {{"n_a", s.n_a}, {"a_max", s.a_max}, {"n_u", s.n_u}, {"n_v", s.n_v}, {"b_max", s.b_max}};
}

void check_invariant(const InvariantLatticeSpec &s, const std::string &path) {
  if (s.n_a < 1 || s.n_u < 1 || s.n_v < 1)
    throw ConfigError(path + ": node counts must be positive");
  if (!(s.a_max > 0.0) || !(s.b_max > 0.0))
    throw ConfigError(path + ": extents must be positive");
}

} // namespace

Multiplier MultiplierSpec::build() const {
  if (family == "zero")
    return Multiplier([](double) { return 0.0; }, support, "zero");
  return bump_multiplier(center, half_width, amplitude);
}

Lattice LatticeConfig::build() const {
  if (kind == "cartesian")
    return cartesian_lattice(per_axis, x_extent, y_extent);
  return invariant_lattice(invariant);
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> experiments{"verify", "kernel", "scaling", "norms"};
  if (!experiments.count(experiment))
    throw ConfigError("experiment: unknown value '" + experiment + "'");
  const Interval &k = multiplier.support;
  if (!(k.lo > 0.0) || !(k.hi > k.lo))
    throw ConfigError("multiplier.support: need 0 < min K < max K");
  if (multiplier.family == "bump") {
    if (!(multiplier.half_width > 0.0))
      throw ConfigError("multiplier.half_width: must be positive");
    if (multiplier.center - multiplier.half_width < k.lo ||
        multiplier.center + multiplier.half_width > k.hi)
      throw ConfigError("multiplier: bump support leaves K");
  } else if (multiplier.family != "zero") {
    throw ConfigError("multiplier.family: unknown value '" + multiplier.family + "'");
  }
  try {
    grid.validate();
  } catch (const std::exception &e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (threads < 1)
    throw ConfigError("threads: must be positive");
  if (kernel.symbol != "F" && kernel.symbol != "piece")
    throw ConfigError("kernel.symbol: unknown value '" + kernel.symbol + "'");
  if (kernel.lattice.kind == "cartesian") {
    if (kernel.lattice.per_axis < 2)
      throw ConfigError("kernel.lattice.per_axis: need at least 2");
    if (!(kernel.lattice.x_extent > 0.0) || !(kernel.lattice.y_extent > 0.0))
      throw ConfigError("kernel.lattice: extents must be positive");
  } else if (kernel.lattice.kind == "invariant") {
    check_invariant(kernel.lattice.invariant, "kernel.lattice.invariant");
  } else {
    throw ConfigError("kernel.lattice.kind: unknown value '" + kernel.lattice.kind + "'");
  }
  if (kernel.export_stride < 1)
    throw ConfigError("kernel.export_stride: must be positive");
  if (kernel.points < 1 || !(kernel.point_extent > 0.0))
    throw ConfigError("kernel.points: need a positive count and extent");
  if (scaling.r_values.empty())
    throw ConfigError("scaling.r: empty list");
  if (scaling.k_hi - scaling.k_lo < 2)
    throw ConfigError("scaling: need at least 3 values of M");
  check_invariant(scaling.lattice, "scaling.lattice");
  if (norms.alpha_values.empty() || norms.r_values.empty())
    throw ConfigError("norms: empty alpha or r list");
  check_invariant(norms.lattice, "norms.lattice");
  if (norms.family < 0)
    throw ConfigError("norms.family: must be non-negative");
  if (verify.points < 1)
    throw ConfigError("verify.points: must be positive");
}

KernelOptions ExperimentConfig::kernel_options() const {
  KernelOptions o;
  o.grid = grid;
  o.method = method;
  o.threads = threads;
  o.enforce_phase = kernel.enforce_phase;
  return o;
}

OutputStamp ExperimentConfig::stamp() const {
  OutputStamp s;
  s.config_hash = config_hash(*this);
  s.seed = seed;
  s.extra.emplace_back("experiment", experiment);
  s.extra.emplace_back("method", to_string(method));
  s.extra.emplace_back("grid", to_json(grid).dump());
  return s;
}

ExperimentConfig parse_config(const Json &doc) {
  ExperimentConfig c;
  {
    Section s(doc, "");
    s.get("experiment", c.experiment);
    s.get("threads", c.threads);
    s.get("output", c.output);
    s.get("seed", c.seed);
    if (s.has("method")) {
      std::string m;
      s.get("method", m);
      try {
        c.method = parse_method(m);
      } catch (const std::exception &) {
        throw ConfigError("method: unknown value '" + m + "'");
      }
    }
    if (s.has("multiplier")) {
      Section m(s.child("multiplier"), "multiplier");
      m.get("family", c.multiplier.family);
      m.get("center", c.multiplier.center);
      m.get("half_width", c.multiplier.half_width);
      m.get("amplitude", c.multiplier.amplitude);
      read_interval(m, "support", c.multiplier.support);
    }
    if (s.has("grid")) {
      Section g(s.child("grid"), "grid");
      g.get("n_r", c.grid.n_r);
      g.get("n_theta", c.grid.n_theta);
      g.get("n_phi", c.grid.n_phi);
      g.get("n_mu", c.grid.n_mu);
      g.get("k_min", c.grid.k_min);
      g.get("scale", c.grid.scale);
      g.get("auto_resolve", c.grid.auto_resolve);
      g.get("max_nodes", c.grid.max_nodes);
    }
    if (s.has("kernel")) {
      Section k(s.child("kernel"), "kernel");
      k.get("symbol", c.kernel.symbol);
      k.get("piece", c.kernel.piece);
      k.get("export_stride", c.kernel.export_stride);
      k.get("plancherel", c.kernel.plancherel);
      k.get("enforce_phase", c.kernel.enforce_phase);
      k.get("points", c.kernel.points);
      k.get("point_extent", c.kernel.point_extent);
      if (k.has("lattice"))
        read_lattice(k.child("lattice"), "kernel.lattice", c.kernel.lattice);
    }
    if (s.has("scaling")) {
      Section k(s.child("scaling"), "scaling");
      k.get("r", c.scaling.r_values);
      k.get("k_lo", c.scaling.k_lo);
      k.get("k_hi", c.scaling.k_hi);
      if (k.has("lattice"))
        read_invariant(k.child("lattice"), "scaling.lattice", c.scaling.lattice);
    }
    if (s.has("norms")) {
      Section k(s.child("norms"), "norms");
      k.get("alpha", c.norms.alpha_values);
      k.get("r", c.norms.r_values);
      k.get("s", c.norms.s);
      k.get("k_min", c.norms.k_min);
      k.get("alpha1", c.norms.alpha1);
      k.get("alpha2", c.norms.alpha2);
      k.get("holder_r", c.norms.holder_r);
      k.get("doubling", c.norms.doubling);
      k.get("family", c.norms.family);
      if (k.has("lattice"))
        read_invariant(k.child("lattice"), "norms.lattice", c.norms.lattice);
    }
    if (s.has("verify")) {
      Section k(s.child("verify"), "verify");
      k.get("points", c.verify.points);
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

Json to_json(const ExperimentConfig &c) {
  const LatticeConfig &l = c.kernel.lattice;
  return {
      {"experiment", c.experiment},
      {"multiplier",
       {{"family", c.multiplier.family},
        {"center", c.multiplier.center},
        {"half_width", c.multiplier.half_width},
        {"amplitude", c.multiplier.amplitude},
        {"support", {c.multiplier.support.lo, c.multiplier.support.hi}}}},
      {"grid",
       {{"n_r", c.grid.n_r},
        {"n_theta", c.grid.n_theta},
        {"n_phi", c.grid.n_phi},
        {"n_mu", c.grid.n_mu},
        {"k_min", c.grid.k_min},
        {"scale", c.grid.scale},
        {"auto_resolve", c.grid.auto_resolve},
        {"max_nodes", c.grid.max_nodes}}},
      {"method", to_string(c.method)},
      {"threads", c.threads},
      {"output", c.output},
      {"seed", c.seed},
      {"kernel",
       {{"symbol", c.kernel.symbol},
        {"piece", c.kernel.piece},
        {"export_stride", c.kernel.export_stride},
        {"plancherel", c.kernel.plancherel},
        {"enforce_phase", c.kernel.enforce_phase},
        {"points", c.kernel.points},
        {"point_extent", c.kernel.point_extent},
        {"lattice",
         {{"kind", l.kind},
          {"per_axis", l.per_axis},
          {"x_extent", l.x_extent},
          {"y_extent", l.y_extent},
          {"invariant", invariant_json(l.invariant)}}}}},
      {"scaling",
       {{"r", c.scaling.r_values},
        {"k_lo", c.scaling.k_lo},
        {"k_hi", c.scaling.k_hi},
        {"lattice", invariant_json(c.scaling.lattice)}}},
      {"norms",
       {{"alpha", c.norms.alpha_values},
        {"r", c.norms.r_values},
        {"s", c.norms.s},
        {"k_min", c.norms.k_min},
        {"alpha1", c.norms.alpha1},
        {"alpha2", c.norms.alpha2},
        {"holder_r", c.norms.holder_r},
        {"doubling", c.norms.doubling},
        {"family", c.norms.family},
        {"lattice", invariant_json(c.norms.lattice)}}},
      {"verify", {{"points", c.verify.points}}}};
}

std::string config_hash(const ExperimentConfig &c) {
  Json j = to_json(c);
  // Where the files go and how many threads write them do not change them.
  j.erase("output");
  j.erase("threads");
  return hex64(fnv1a(j.dump()));
}

} // namespace nilmult

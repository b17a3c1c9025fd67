#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nilmult/commands.hpp"
#include "nilmult/io.hpp"

using namespace nilmult;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  const fs::path p = fs::path(NILMULT_TEST_SCRATCH) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const fs::path &p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') {
      if (line.back() == '\r')
        line.pop_back();
      out.push_back(line);
    }
  return out;
}

} // namespace

TEST_CASE("shortest round-trip formatting") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    const std::string s = format_double(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("csv escaping") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("FNV-1a test vectors") {
  CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a("foobar")) == "85944171f73967e8");
}

TEST_CASE("config parsing") {
  const ExperimentConfig d = parse_config(Json::object());
  CHECK(d.multiplier.support.lo == 1.0);
  CHECK(d.kernel.lattice.per_axis == 17);

  const Json doc = Json::parse(R"({"experiment": "norms", "seed": 9,
      "norms": {"alpha": [0.5], "lattice": {"n_a": 8}}})");
  const ExperimentConfig c = parse_config(doc);
  CHECK(c.experiment == "norms");
  CHECK(c.seed == 9);
  CHECK(c.norms.alpha_values == std::vector<double>{0.5});
  CHECK(c.norms.lattice.n_a == 8);
  CHECK(c.norms.lattice.b_max == 32.0);

  auto error_of = [](const char *text) {
    try {
      parse_config(Json::parse(text));
    } catch (const ConfigError &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of(R"({"bogus": 1})").find("bogus") != std::string::npos);
  CHECK(error_of(R"({"grid": {"n_rr": 3}})").find("grid") != std::string::npos);
  CHECK(error_of(R"({"grid": {"n_r": "many"}})").find("grid.n_r") != std::string::npos);
  CHECK(error_of(R"({"multiplier": {"support": [4, 1]}})").find("support") != std::string::npos);
  CHECK(error_of(R"({"multiplier": {"support": [0, 4]}})").find("support") != std::string::npos);
  CHECK(error_of(R"({"multiplier": {"center": 3.5}})").find("multiplier") != std::string::npos);
  CHECK(error_of(R"({"method": "magic"})").find("method") != std::string::npos);
  CHECK(error_of(R"({"experiment": "kernel", "threads": 0})").find("threads") != std::string::npos);
}

TEST_CASE("config round trip and hash") {
  ExperimentConfig c;
  c.grid.n_mu = 33;
  c.norms.r_values = {0.0, 0.7};
  const ExperimentConfig back = parse_config(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(config_hash(back) == config_hash(c));

  ExperimentConfig other = c;
  other.output = "elsewhere";
  other.threads = 4;
  CHECK(config_hash(other) == config_hash(c));
  other.grid.n_mu = 34;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("comments are allowed in config files") {
  const fs::path dir = scratch("config_comments");
  std::ofstream(dir / "c.json") << "{\n  // coarse\n  \"grid\": {\"n_mu\": 17}\n}\n";
  CHECK(load_config(dir / "c.json").grid.n_mu == 17);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("csv writer") {
  const fs::path dir = scratch("csv");
  OutputStamp stamp{"abc", 5};
  {
    CsvWriter w(dir / "t.csv", stamp, {"a", "b"});
    w.row(std::vector<double>{1.5, -0.0});
    w.row({"x,y", "2"});
    CHECK_THROWS(w.row(std::vector<double>{1.0}));
  }
  const std::string text = slurp(dir / "t.csv");
  CHECK(text.find("# config_hash: abc\r\n") != std::string::npos);
  CHECK(text.find("# seed: 5\r\n") != std::string::npos);
  CHECK(text.find("a,b\r\n1.5,0\r\n\"x,y\",2\r\n") != std::string::npos);
}

TEST_CASE("export mask") {
  const Lattice l = cartesian_lattice(17, 6.0, 6.0);
  const ExportMask m = export_mask(l, 4);
  CHECK(m.count() == 15625); // 5 of 17 nodes per axis
  const Lattice inv = invariant_lattice({4, 2.0, 4, 2, 2.0});
  // every third x node times every third y node
  const auto every_third = [](Eigen::Index n) { return static_cast<std::size_t>((n + 2) / 3); };
  CHECK(export_mask(inv, 3).count() == every_third(inv.x_count()) * every_third(inv.y_count()));
}

TEST_CASE("zero multiplier writes an all-zero kernel") {
  ExperimentConfig c;
  c.multiplier.family = "zero";
  c.kernel.lattice.per_axis = 5;
  c.kernel.lattice.x_extent = c.kernel.lattice.y_extent = 1.0;
  c.kernel.export_stride = 1;
  c.output = scratch("zero").string();
  c.validate();
  std::ostringstream log;
  const CommandResult res = cmd_kernel(c, log);
  CHECK(res.exit_code == 0);
  const auto rows = data_lines(fs::path(c.output) / "kernel.csv");
  REQUIRE(rows.size() == 1 + 15625);
  CHECK(rows.front().rfind("x1,x2,x3,y1,y2,y3,re,im", 0) == 0);
  std::size_t nonzero = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    nonzero += !rows[i].ends_with(",0,0");
  CHECK(nonzero == 0);
}

TEST_CASE("identical configs give identical bytes") {
  ExperimentConfig c;
  c.grid.n_mu = 17;
  c.kernel.symbol = "piece";
  c.kernel.lattice.per_axis = 5;
  c.kernel.lattice.x_extent = c.kernel.lattice.y_extent = 1.5;
  c.kernel.export_stride = 1;
  std::ostringstream log;
  c.output = scratch("repro_a").string();
  cmd_kernel(c, log);
  const std::string first = slurp(fs::path(c.output) / "kernel.csv");
  c.output = scratch("repro_b").string();
  c.threads = 2;
  cmd_kernel(c, log);
  CHECK(first.size() > 1000);
  CHECK(first == slurp(fs::path(c.output) / "kernel.csv"));
}

TEST_CASE("shipped configs load") {
  int count = 0;
  for (const auto &entry : fs::directory_iterator(NILMULT_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
    ++count;
  }
  CHECK(count >= 5);
}

#include "nilmult/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace nilmult {

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  if (v == 0.0)
    v = 0.0; // drop the sign of -0
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4)
    s[i] = digits[v & 0xf];
  return s;
}

std::string csv_escape(const std::string &cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos)
    return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path &path, const OutputStamp &stamp,
                     const std::vector<std::string> &columns)
    : columns_(columns.size()) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_)
    throw std::runtime_error("cannot open " + path.string());
  buffer_ += "# nilmult " + stamp.version + "\r\n";
  buffer_ += "# config_hash: " + stamp.config_hash + "\r\n";
  buffer_ += "# seed: " + std::to_string(stamp.seed) + "\r\n";
  for (const auto &[k, v] : stamp.extra)
    buffer_ += "# " + k + ": " + v + "\r\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i)
      buffer_ += ',';
    buffer_ += csv_escape(columns[i]);
  }
  buffer_ += "\r\n";
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_)
    throw std::invalid_argument("CsvWriter: wrong number of cells");
  std::array<char, 32> buf;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i)
      buffer_ += ',';
    double v = values[i];
    if (std::isfinite(v)) {
      if (v == 0.0)
        v = 0.0;
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      buffer_.append(buf.data(), res.ptr);
    } else {
      buffer_ += format_double(v);
    }
  }
  buffer_ += "\r\n";
  ++rows_;
  flush_if_large();
}

void CsvWriter::row(const std::vector<std::string> &cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("CsvWriter: wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i)
      buffer_ += ',';
    buffer_ += csv_escape(cells[i]);
  }
  buffer_ += "\r\n";
  ++rows_;
  flush_if_large();
}

void CsvWriter::flush_if_large() {
  if (buffer_.size() < (1u << 22))
    return;
  out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  buffer_.clear();
}

void CsvWriter::close() {
  if (!out_.is_open())
    return;
  out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  buffer_.clear();
  out_.close();
  if (out_.fail())
    throw std::runtime_error("CsvWriter: write failed");
}

void write_json(const std::filesystem::path &path, const Json &doc) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open " + path.string());
  out << doc.dump(2) << '\n';
}

Json to_json(const GridSpec &g) {
  return {{"n_r", g.n_r},
          {"n_theta", g.n_theta},
          {"n_phi", g.n_phi},
          {"n_mu", g.n_mu},
          {"k_min", g.k_min},
          {"scale", g.scale},
          {"auto_resolve", g.auto_resolve},
          {"phase_limit", g.phase_limit},
          {"break_quarter_turn", g.break_quarter_turn},
          {"max_nodes", g.max_nodes}};
}

Json to_json(const Extents &e) { return {{"x", e.x}, {"y", e.y}}; }

Json to_json(const KernelDiagnostics &d) {
  Json shells = Json::array();
  for (const Shell &s : d.shell_info)
    shells.push_back({{"index", s.index},
                      {"lo", s.lo},
                      {"hi", s.hi},
                      {"n_r", s.n_r},
                      {"n_theta", s.n_theta},
                      {"n_phi", s.n_phi},
                      {"phase_radial", s.phase_radial},
                      {"phase_polar", s.phase_polar},
                      {"phase_azimuthal", s.phase_azimuthal}});
  return {{"method", to_string(d.method)},
          {"symbol", d.symbol},
          {"nodes", d.nodes},
          {"shells", d.shells},
          {"n_mu", d.n_mu},
          {"max_phase", d.max_phase},
          {"phase_limit", d.phase_limit},
          {"extents", to_json(d.extents)},
          {"shell_info", shells}};
}

Json to_json(const OutputStamp &s) {
  Json j = {{"version", s.version}, {"config_hash", s.config_hash}, {"seed", s.seed}};
  for (const auto &[k, v] : s.extra)
    j[k] = v;
  return j;
}

std::size_t ExportMask::count() const {
  std::size_t nx = 0, ny = 0;
  for (char c : x)
    nx += c != 0;
  for (char c : y)
    ny += c != 0;
  return nx * ny;
}

ExportMask export_mask(const Lattice &lattice, int stride) {
  if (stride < 1)
    throw std::invalid_argument("export_mask: stride must be positive");
  ExportMask m;
  m.x.assign(lattice.xs.size(), 0);
  m.y.assign(static_cast<std::size_t>(lattice.y_count()), 0);
  if (lattice.kind == Lattice::Kind::cartesian) {
    const auto n = static_cast<std::size_t>(lattice.vertical.size());
    auto on = [&](std::size_t i) { return i % static_cast<std::size_t>(stride) == 0; };
    for (std::size_t i = 0; i < m.x.size(); ++i)
      m.x[i] = on(i / (n * n)) && on(i / n % n) && on(i % n);
    for (std::size_t i = 0; i < m.y.size(); ++i)
      m.y[i] = on(i / (n * n)) && on(i / n % n) && on(i % n);
  } else {
    for (std::size_t i = 0; i < m.x.size(); i += stride)
      m.x[i] = 1;
    for (std::size_t i = 0; i < m.y.size(); i += stride)
      m.y[i] = 1;
  }
  return m;
}

namespace {

const std::vector<std::string> kKernelColumns{"x1", "x2", "x3", "y1", "y2", "y3", "re", "im"};

} // namespace

KernelCsvSink::KernelCsvSink(const std::filesystem::path &path, const OutputStamp &stamp,
                             const Lattice &lattice, ExportMask mask)
    : lattice_(lattice), mask_(std::move(mask)), csv_(path, stamp, kKernelColumns) {}

void KernelCsvSink::operator()(const LatticeBlock &block) {
  std::array<double, 8> cells;
  for (Eigen::Index r = 0; r < block.values.rows(); ++r) {
    const Eigen::Index ix = block.x_begin + r;
    if (!mask_.x[ix])
      continue;
    const Vector3d &x = lattice_.xs[ix];
    for (Eigen::Index iy = 0; iy < block.values.cols(); ++iy) {
      if (!mask_.y[iy])
        continue;
      const Vector3d y = lattice_.y_at(iy);
      const cdouble v = block.values(r, iy);
      cells = {x[0], x[1], x[2], y[0], y[1], y[2], v.real(), v.imag()};
      csv_.row(cells);
    }
  }
}

void write_kernel_csv(const std::filesystem::path &path, const OutputStamp &stamp,
                      const KernelField &field) {
  CsvWriter csv(path, stamp, kKernelColumns);
  std::array<double, 8> cells;
  if (field.is_lattice()) {
    const Lattice &l = *field.lattice;
    for (Eigen::Index ix = 0; ix < l.x_count(); ++ix)
      for (Eigen::Index iy = 0; iy < l.y_count(); ++iy) {
        const Vector3d y = l.y_at(iy);
        const cdouble v = field.lattice_values(ix, iy);
        cells = {l.xs[ix][0], l.xs[ix][1], l.xs[ix][2], y[0], y[1], y[2], v.real(), v.imag()};
        csv.row(cells);
      }
  } else {
    for (std::size_t i = 0; i < field.points.size(); ++i) {
      const Point &p = field.points[i];
      const cdouble v = field.values[static_cast<Eigen::Index>(i)];
      cells = {p.x[0], p.x[1], p.x[2], p.y[0], p.y[1], p.y[2], v.real(), v.imag()};
      csv.row(cells);
    }
  }
  csv.close();
}

} // namespace nilmult

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilmult/kernel.hpp"

namespace nilmult {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that reads back to the same double, '.' decimal
/// separator regardless of locale.
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

/// Identification embedded in every output file.
struct OutputStamp {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version = NILMULT_VERSION;
  /// Further "# key: value" lines, e.g. grid parameters.
  std::vector<std::pair<std::string, std::string>> extra;
};

/// RFC 4180 style CSV, preceded by '#' metadata lines. Rows are buffered
/// and flushed in large pieces so multi-gigabyte exports stay cheap.
class CsvWriter {
public:
  CsvWriter(const std::filesystem::path &path, const OutputStamp &stamp,
            const std::vector<std::string> &columns);
  ~CsvWriter();

  CsvWriter(const CsvWriter &) = delete;
  CsvWriter &operator=(const CsvWriter &) = delete;

  void row(std::span<const double> values);
  void row(const std::vector<std::string> &cells);
  void close();

  std::size_t rows() const { return rows_; }

private:
  void flush_if_large();

  std::ofstream out_;
  std::string buffer_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

/// Quotes a cell when it contains a comma, a quote or a line break.
std::string csv_escape(const std::string &cell);

void write_json(const std::filesystem::path &path, const Json &doc);

Json to_json(const GridSpec &g);
Json to_json(const Extents &e);
Json to_json(const KernelDiagnostics &d);
Json to_json(const OutputStamp &s);

/// Lattice points kept by a CSV export: on Cartesian lattices every
/// stride-th node along each axis, otherwise every stride-th flat index.
struct ExportMask {
  std::vector<char> x;
  std::vector<char> y;

  std::size_t count() const;
};

ExportMask export_mask(const Lattice &lattice, int stride);

/// Block sink that writes x1,x2,x3,y1,y2,y3,re,im rows for the masked
/// lattice points as the blocks arrive.
class KernelCsvSink {
public:
  KernelCsvSink(const std::filesystem::path &path, const OutputStamp &stamp,
                const Lattice &lattice, ExportMask mask);

  void operator()(const LatticeBlock &block);
  std::size_t rows() const { return csv_.rows(); }
  void close() { csv_.close(); }

private:
  const Lattice &lattice_;
  ExportMask mask_;
  CsvWriter csv_;
};

/// Writes a point-list field with the same columns.
void write_kernel_csv(const std::filesystem::path &path, const OutputStamp &stamp,
                      const KernelField &field);

} // namespace nilmult

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace otoclab {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit content digest, rendered as 16 hex digits. Used for config
/// hashes and golden-file comparisons.
std::string fnv1a64_hex(std::string_view bytes);

/// Shortest exact decimal rendering at 17 significant digits.
std::string format_g17(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

/// Fixed-schema CSV with a mandatory header row; numeric cells are rendered
/// by the caller so outputs stay byte-reproducible.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_; }
  const std::string& str() const { return body_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string body_;
};

struct SvgSeries {
  std::string label;
  std::string color;
  bool dashed = false;
  std::vector<std::pair<double, double>> points;  // already in plot coordinates
};

/// Minimal self-contained log-log SVG: caller passes log10 values.
std::string svg_loglog(const std::vector<SvgSeries>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::string& timestamp_comment);

}  // namespace otoclab

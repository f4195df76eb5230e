#include "core/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otoclab {

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write file: " + path);
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw io_error("cannot create directory " + path + ": " + ec.message());
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("csv row arity mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
  ++rows_;
}

namespace {
std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}
}  // namespace

std::string svg_loglog(const std::vector<SvgSeries>& series, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::string& timestamp_comment) {
  const double width = 640, height = 480, margin = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) {
    xmin = ymin = 0;
    xmax = ymax = 1;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  if (!timestamp_comment.empty()) os << "<!-- " << timestamp_comment << " -->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << title << "</text>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
     << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
     << height - margin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 16
     << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
     << "transform=\"rotate(-90 16 " << height / 2 << ")\">" << ylabel << "</text>\n";
  // axis ticks at the extremes
  os << "<text x=\"" << margin << "\" y=\"" << height - margin + 16
     << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt2(xmin) << "</text>\n";
  os << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 16
     << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt2(xmax) << "</text>\n";
  os << "<text x=\"" << margin - 6 << "\" y=\"" << height - margin
     << "\" font-size=\"10\" text-anchor=\"end\">" << fmt2(ymin) << "</text>\n";
  os << "<text x=\"" << margin - 6 << "\" y=\"" << margin + 4
     << "\" font-size=\"10\" text-anchor=\"end\">" << fmt2(ymax) << "</text>\n";

  double legend_y = margin;
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.points) os << fmt2(px(x)) << "," << fmt2(py(y)) << " ";
    os << "\"/>\n";
    for (auto [x, y] : s.points)
      os << "<circle cx=\"" << fmt2(px(x)) << "\" cy=\"" << fmt2(py(y))
         << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    os << "<text x=\"" << width - margin + 4 << "\" y=\"" << legend_y
       << "\" font-size=\"11\" fill=\"" << s.color << "\">" << s.label << "</text>\n";
    legend_y += 14;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace otoclab

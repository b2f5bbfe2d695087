// Copyright 2026 The spinorcqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "spinor/tools/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinor/qfunction.hpp"

#ifndef SPINOR_VERSION
#define SPINOR_VERSION "unknown"
#endif

namespace spinor::cli {

using nlohmann::json;

std::string version() { return SPINOR_VERSION; }

json provenance(const std::string& command, const json& resolved_config) {
  return {{"tool", "spinorsim"}, {"version", version()}, {"command", command}, {"config", resolved_config}};
}

void Table::add_row(std::vector<double> row) { rows.push_back(std::move(row)); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string Table::render(const json& prov) const {
  std::ostringstream os;
  os << "# spinorsim " << version() << "\n";
  os << "# provenance: " << prov.dump() << "\n";
  for (const auto& n : notes) os << "# " << n << "\n";
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "\t" : "") << columns[c];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "\t" : "") << format_number(r[c]);
    os << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

namespace {

constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

void frame(std::ostringstream& os, double x0, double x1, double y0, double y1, const std::string& xl,
           const std::string& yl, const std::string& title, double width) {
  const double pw = width - kLeft - kRight, ph = kH - kTop - kBottom;
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << num(pw) << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = k / 4.0;
    const double px = kLeft + fx * pw, py = kTop + ph - fx * ph;
    os << "<text x=\"" << num(px) << "\" y=\"" << num(kTop + ph + 16) << "\" font-size=\"11\" text-anchor=\"middle\">"
       << tick(x0 + fx * (x1 - x0)) << "</text>\n";
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
       << tick(y0 + fx * (y1 - y0)) << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kH - 12)
     << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(xl) << "</text>\n";
  os << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << num(kTop + ph / 2) << ")\">" << escape(yl) << "</text>\n";
  os << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"15\">" << escape(title) << "</text>\n";
}

std::string header(double width) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << kH << "\" viewBox=\"0 0 "
     << width << ' ' << kH << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

}  // namespace

std::string svg_line_plot(const std::vector<Series2D>& series, const std::string& x_label, const std::string& y_label,
                          const std::string& title) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.y[k])) continue;
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, s.y[k]);
      y1 = std::max(y1, s.y[k]);
    }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  std::ostringstream os;
  os << header(kW);
  frame(os, x0, x1, y0, y1, x_label, y_label, title, kW);
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  static const char* colours[] = {"#1f3b73", "#c0392b", "#1e8449", "#7d3c98", "#b9770e"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* col = colours[s % 5];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t k = 0; k < series[s].x.size(); ++k) {
      if (!std::isfinite(series[s].y[k])) continue;
      os << num(kLeft + (series[s].x[k] - x0) / (x1 - x0) * pw) << ','
         << num(kTop + ph - (series[s].y[k] - y0) / (y1 - y0) * ph) << ' ';
    }
    os << "\"/>\n";
    if (!series[s].label.empty())
      os << "<text x=\"" << num(kLeft + pw - 8) << "\" y=\"" << num(kTop + 16 + 14.0 * static_cast<double>(s))
         << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << col << "\">" << escape(series[s].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_heatmap(const std::vector<double>& x, const std::vector<double>& y, const Eigen::MatrixXd& values,
                        double lo, double hi, const std::string& x_label, const std::string& y_label,
                        const std::string& title) {
  const double width = kW + 70;  // room for the colour bar
  const double pw = width - kLeft - kRight - 70, ph = kH - kTop - kBottom;
  const double x0 = x.front(), x1 = x.size() > 1 ? x.back() : x.front() + 1.0;
  const double y0 = y.front(), y1 = y.size() > 1 ? y.back() : y.front() + 1.0;
  if (!(hi > lo)) hi = lo + 1.0;
  std::ostringstream os;
  os << header(width);
  const double cw = pw / static_cast<double>(x.size()), ch = ph / static_cast<double>(y.size());
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const std::string col = std::isfinite(v) ? colour_ramp((v - lo) / (hi - lo)) : "#cccccc";
      os << "<rect x=\"" << num(kLeft + static_cast<double>(j) * cw) << "\" y=\""
         << num(kTop + ph - static_cast<double>(i + 1) * ch) << "\" width=\"" << num(cw + 0.3) << "\" height=\""
         << num(ch + 0.3) << "\" fill=\"" << col << "\"/>\n";
    }
  os << "</g>\n";
  frame(os, x0, x1, y0, y1, x_label, y_label, title, width - 70);
  const double bx = width - 70;
  for (int k = 0; k < 50; ++k) {
    os << "<rect x=\"" << num(bx) << "\" y=\"" << num(kTop + ph - (k + 1) * ph / 50) << "\" width=\"16\" height=\""
       << num(ph / 50 + 0.3) << "\" fill=\"" << colour_ramp((k + 0.5) / 50.0) << "\"/>\n";
  }
  os << "<text x=\"" << num(bx + 20) << "\" y=\"" << num(kTop + 10) << "\" font-size=\"11\">" << tick(hi) << "</text>\n";
  os << "<text x=\"" << num(bx + 20) << "\" y=\"" << num(kTop + ph) << "\" font-size=\"11\">" << tick(lo) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace spinor::cli

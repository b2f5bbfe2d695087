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


#pragma once

// Output files: tab-separated tables with a commented provenance header,
// JSON records, and static SVG plots. All writers are deterministic so that a
// rerun with the same config reproduces the bytes.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace spinor::cli {

std::string version();

/// {"tool", "version", "command", "config"}; config is the resolved config.
nlohmann::json provenance(const std::string& command, const nlohmann::json& resolved_config);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;  // extra "# " header lines

  void add_row(std::vector<double> row);
  std::string render(const nlohmann::json& provenance) const;
};

/// Shortest round-trip formatting; NaN and infinities as nan, inf, -inf.
std::string format_number(double v);

void write_file(const std::string& path, const std::string& contents);

struct Series2D {
  std::string label;
  std::vector<double> x, y;
};

std::string svg_line_plot(const std::vector<Series2D>& series, const std::string& x_label, const std::string& y_label,
                          const std::string& title);

/// values(i, j) at (x[j], y[i]); colour scale spans [lo, hi].
std::string svg_heatmap(const std::vector<double>& x, const std::vector<double>& y, const Eigen::MatrixXd& values,
                        double lo, double hi, const std::string& x_label, const std::string& y_label,
                        const std::string& title);

}  // namespace spinor::cli

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace cli {

struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;

  const std::vector<double>& column(const std::string& name) const;
  bool all_finite() const;
};

std::string format_csv(const Table& t);
void write_file(const std::string& path, const std::string& content);

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> series;  // column names, x is column 0
};

std::string format_svg(const Table& t, const PlotSpec& spec);

}  // namespace cli

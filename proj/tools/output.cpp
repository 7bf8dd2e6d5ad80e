// SPDX-License-Identifier: Apache-2.0
#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cli {

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return cols[i];
  throw std::runtime_error("no column " + name);
}

bool Table::all_finite() const {
  for (const auto& c : cols)
    for (double v : c)
      if (!std::isfinite(v)) return false;
  return true;
}

namespace {

std::string num(double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
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

}  // namespace

std::string format_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.names.size(); ++c) out += (c ? "," : "") + t.names[c];
  out += '\n';
  const std::size_t rows = t.cols.empty() ? 0 : t.cols.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < t.cols.size(); ++c) out += (c ? "," : "") + num(t.cols[c][r]);
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path);
}

std::string format_svg(const Table& t, const PlotSpec& spec) {
  const double W = 720, H = 440, L = 80, R = 170, T = 40, B = 60;
  const auto& x = t.cols.front();
  double x0 = *std::min_element(x.begin(), x.end()), x1 = *std::max_element(x.begin(), x.end());
  double y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : spec.series)
    for (double v : t.column(s)) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W, "%g") + "\" height=\"" + num(H, "%g") +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(W / 2 - R / 2, "%g") + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(spec.title) + "</text>\n";
  s += "<rect x=\"" + num(L, "%g") + "\" y=\"" + num(T, "%g") + "\" width=\"" + num(W - L - R, "%g") +
       "\" height=\"" + num(H - T - B, "%g") + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
    s += "<line x1=\"" + num(px(xv), "%.2f") + "\" y1=\"" + num(H - B, "%g") + "\" x2=\"" + num(px(xv), "%.2f") +
         "\" y2=\"" + num(H - B + 5, "%g") + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(px(xv), "%.2f") + "\" y=\"" + num(H - B + 18, "%g") + "\" text-anchor=\"middle\">" +
         num(xv, "%.4g") + "</text>\n";
    s += "<line x1=\"" + num(L - 5, "%g") + "\" y1=\"" + num(py(yv), "%.2f") + "\" x2=\"" + num(L, "%g") +
         "\" y2=\"" + num(py(yv), "%.2f") + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(L - 8, "%g") + "\" y=\"" + num(py(yv) + 4, "%.2f") + "\" text-anchor=\"end\">" +
         num(yv, "%.4g") + "</text>\n";
  }
  s += "<text x=\"" + num(L + (W - L - R) / 2, "%g") + "\" y=\"" + num(H - 15, "%g") + "\" text-anchor=\"middle\">" +
       escape(spec.x_label) + "</text>\n";
  s += "<text transform=\"translate(20," + num(T + (H - T - B) / 2, "%g") +
       ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y_label) + "</text>\n";
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& y = t.column(spec.series[k]);
    const char* col = colors[k % 7];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < y.size(); ++i) s += (i ? " " : "") + num(px(x[i]), "%.2f") + "," + num(py(y[i]), "%.2f");
    s += "\"/>\n";
    double ly = T + 14 + 18.0 * k;
    s += "<line x1=\"" + num(W - R + 12, "%g") + "\" y1=\"" + num(ly, "%g") + "\" x2=\"" + num(W - R + 36, "%g") +
         "\" y2=\"" + num(ly, "%g") + "\" stroke=\"" + col + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num(W - R + 42, "%g") + "\" y=\"" + num(ly + 4, "%g") + "\">" + escape(spec.series[k]) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace cli

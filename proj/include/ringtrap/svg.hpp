// Minimal self-contained SVG rendering: single-panel line plots and
// heatmaps.  Conveniences for eyeballing traces; never acceptance artifacts.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "ringtrap/csv.hpp"
#include "ringtrap/errors.hpp"

namespace ringtrap {

struct PlotSpec {
  std::string x_column;
  std::vector<std::string> y_columns;
  std::string title;
  int width = 860;
  int height = 520;
};

namespace detail {

inline std::string svg_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

inline std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

struct AxisRange {
  double lo, hi;
  double map(double value, double pix_lo, double pix_hi) const {
    const double f = hi > lo ? (value - lo) / (hi - lo) : 0.5;
    return pix_lo + f * (pix_hi - pix_lo);
  }
};

}  // namespace detail

inline std::string render_line_plot(const CsvTable& table, const PlotSpec& spec) {
  if (table.rows.empty()) throw config_error("plot: no data rows");
  if (spec.y_columns.empty()) throw config_error("plot: no y columns declared");
  const std::size_t ix = table.column_index(spec.x_column);
  std::vector<std::size_t> iy;
  for (const auto& name : spec.y_columns) iy.push_back(table.column_index(name));

  detail::AxisRange xr{table.rows[0][ix], table.rows[0][ix]};
  detail::AxisRange yr{table.rows[0][iy[0]], table.rows[0][iy[0]]};
  for (const auto& row : table.rows) {
    xr.lo = std::min(xr.lo, row[ix]);
    xr.hi = std::max(xr.hi, row[ix]);
    for (std::size_t c : iy) {
      yr.lo = std::min(yr.lo, row[c]);
      yr.hi = std::max(yr.hi, row[c]);
    }
  }
  if (yr.hi == yr.lo) {
    yr.hi += 1.0;
    yr.lo -= 1.0;
  }

  const double ml = 72, mr = 18, mt = spec.title.empty() ? 18 : 40, mb = 52;
  const double x0 = ml, x1 = spec.width - mr;
  const double y0 = spec.height - mb, y1 = mt;  // y grows downward in SVG

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
       "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
       std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    s += "<text x=\"" + detail::svg_num((x0 + x1) / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         spec.title + "</text>\n";

  // Axes and ticks.
  s += "<line x1=\"" + detail::svg_num(x0) + "\" y1=\"" + detail::svg_num(y0) + "\" x2=\"" +
       detail::svg_num(x1) + "\" y2=\"" + detail::svg_num(y0) +
       "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + detail::svg_num(x0) + "\" y1=\"" + detail::svg_num(y0) + "\" x2=\"" +
       detail::svg_num(x0) + "\" y2=\"" + detail::svg_num(y1) +
       "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double px = xr.map(fx, x0, x1);
    s += "<line x1=\"" + detail::svg_num(px) + "\" y1=\"" + detail::svg_num(y0) + "\" x2=\"" +
         detail::svg_num(px) + "\" y2=\"" + detail::svg_num(y0 + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + detail::svg_num(px) + "\" y=\"" + detail::svg_num(y0 + 19) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         detail::tick_label(fx) + "</text>\n";
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 5.0;
    const double py = yr.map(fy, y0, y1);
    s += "<line x1=\"" + detail::svg_num(x0 - 5) + "\" y1=\"" + detail::svg_num(py) +
         "\" x2=\"" + detail::svg_num(x0) + "\" y2=\"" + detail::svg_num(py) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + detail::svg_num(x0 - 8) + "\" y=\"" + detail::svg_num(py + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         detail::tick_label(fy) + "</text>\n";
  }
  // Axis labels come straight from the column headers (units included there).
  s += "<text x=\"" + detail::svg_num((x0 + x1) / 2) + "\" y=\"" +
       detail::svg_num(spec.height - 12.0) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
       spec.x_column + "</text>\n";
  std::string ylabel;
  for (std::size_t i = 0; i < spec.y_columns.size(); ++i) {
    if (i) ylabel += ", ";
    ylabel += spec.y_columns[i];
  }
  s += "<text x=\"16\" y=\"" + detail::svg_num((y0 + y1) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
       detail::svg_num((y0 + y1) / 2) + ")\">" + ylabel + "</text>\n";

  static const char* kStrokes[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (std::size_t k = 0; k < iy.size(); ++k) {
    s += "<polyline fill=\"none\" stroke=\"";
    s += kStrokes[k % 5];
    s += "\" stroke-width=\"1.3\" points=\"";
    for (const auto& row : table.rows) {
      s += detail::svg_num(xr.map(row[ix], x0, x1));
      s += ',';
      s += detail::svg_num(yr.map(row[iy[k]], y0, y1));
      s += ' ';
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

// Grayscale heatmap of long-format (x, y, value) rows on a regular grid.
inline std::string render_heatmap(const CsvTable& table, const std::string& x_column,
                                  const std::string& y_column, const std::string& z_column,
                                  const std::string& title = {}) {
  if (table.rows.empty()) throw config_error("plot: no data rows");
  const std::size_t ix = table.column_index(x_column);
  const std::size_t iy = table.column_index(y_column);
  const std::size_t iz = table.column_index(z_column);

  std::vector<double> xs, ys;
  for (const auto& row : table.rows) {
    xs.push_back(row[ix]);
    ys.push_back(row[iy]);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  if (xs.size() * ys.size() != table.rows.size())
    throw config_error("plot: heatmap rows do not form a regular grid");

  double zmax = 0.0;
  for (const auto& row : table.rows) zmax = std::max(zmax, row[iz]);
  if (zmax <= 0.0) zmax = 1.0;

  const int width = 640, height = 640;
  const double mt = title.empty() ? 12.0 : 36.0;
  const double cell_w = (width - 24.0) / xs.size();
  const double cell_h = (height - mt - 12.0) / ys.size();

  auto find_index = [](const std::vector<double>& grid, double value) {
    return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), value) -
                                    grid.begin());
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
       "\" height=\"" + std::to_string(height) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    s += "<text x=\"" + std::to_string(width / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         title + "</text>\n";
  for (const auto& row : table.rows) {
    const std::size_t cx = find_index(xs, row[ix]);
    const std::size_t cy = find_index(ys, row[iy]);
    const int shade = static_cast<int>(std::lround(255.0 * (1.0 - row[iz] / zmax)));
    char color[8];
    std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, shade);
    s += "<rect x=\"" + detail::svg_num(12.0 + cx * cell_w) + "\" y=\"" +
         detail::svg_num(mt + (ys.size() - 1 - cy) * cell_h) + "\" width=\"" +
         detail::svg_num(cell_w + 0.5) + "\" height=\"" + detail::svg_num(cell_h + 0.5) +
         "\" fill=\"" + color + "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

// Reads a CSV, renders the declared columns, writes <csv stem>.svg next to
// it (or to out_path when given).  Returns the SVG path.
inline std::filesystem::path emit_plot(const std::filesystem::path& csv_path,
                                       const PlotSpec& spec,
                                       const std::filesystem::path& out_path = {}) {
  const CsvTable table = parse_csv(read_file(csv_path));
  const std::string svg = render_line_plot(table, spec);
  std::filesystem::path target = out_path;
  if (target.empty()) {
    target = csv_path;
    target.replace_extension(".svg");
  }
  atomic_write(target, svg);
  return target;
}

}  // namespace ringtrap

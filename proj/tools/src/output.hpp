#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlab/harness.hpp"

namespace dlab::cli {

using json = nlohmann::ordered_json;

/// %.15g, with "nan" / "inf" spelled out.
std::string format_number(double v);

/// Rows t, columns lambda; header `t\lambda,<lambda_1>,...`.
std::string scan_csv(const DecayScan& scan);

json fit_json(const DecayFit& fit);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotLine {
  std::string label;
  double slope = 0.0;
  double intercept = 0.0;  // log y = intercept + slope log x
  double x0 = 0.0;
  double x1 = 0.0;
  bool dashed = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<PlotLine> lines;
};

/// Log-log scatter as an SVG document; identical bytes for identical input.
/// Non-positive points are skipped. A plot with a single point gets a warning
/// annotation and no lines.
std::string render_svg(const Plot& plot);

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace dlab::cli

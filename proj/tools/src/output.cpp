#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace dlab::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string scan_csv(const DecayScan& scan) {
  std::string out = "t\\lambda";
  for (double l : scan.lambda_grid) out += "," + format_number(l);
  out += "\n";
  for (std::size_t i = 0; i < scan.t_grid.size(); ++i) {
    out += format_number(scan.t_grid[i]);
    for (std::size_t j = 0; j < scan.lambda_grid.size(); ++j) out += "," + format_number(scan.M(i, j));
    out += "\n";
  }
  return out;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

json fit_json(const DecayFit& f) {
  json j;
  j["variable"] = f.variable;
  j["at"] = f.at;
  j["slope"] = number_or_null(f.slope);
  j["intercept"] = number_or_null(f.intercept);
  j["stderr"] = number_or_null(f.stderr_);
  j["r_squared"] = number_or_null(f.r_squared);
  j["predicted"] = f.predicted;
  j["tolerance"] = f.tolerance;
  j["pass"] = f.pass;
  j["sharp"] = f.sharp;
  j["x"] = f.x;
  j["y"] = f.y;
  return j;
}

std::string render_svg(const Plot& plot) {
  const double W = 640, H = 480, left = 80, right = 160, top = 40, bottom = 60;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  std::size_t points = 0;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, std::log10(s.x[i]));
      xmax = std::max(xmax, std::log10(s.x[i]));
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
      ++points;
    }
  }
  if (points == 0) {
    xmin = ymin = 0.0;
    xmax = ymax = 1.0;
  }
  if (xmax - xmin < 1e-9) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-9) { ymin -= 0.5; ymax += 0.5; }
  const double pad_y = 0.05 * (ymax - ymin);
  ymin -= pad_y;
  ymax += pad_y;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << xml_escape(plot.title) << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  // decade ticks
  for (int d = static_cast<int>(std::ceil(xmin)); d <= static_cast<int>(std::floor(xmax)); ++d) {
    o << "<line x1=\"" << fmt("%.2f", px(d)) << "\" y1=\"" << top + ph << "\" x2=\"" << fmt("%.2f", px(d))
      << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt("%.2f", px(d)) << "\" y=\"" << top + ph + 18
      << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax)); ++d) {
    o << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt("%.2f", py(d)) << "\" x2=\"" << left
      << "\" y2=\"" << fmt("%.2f", py(d)) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left - 8 << "\" y=\"" << fmt("%.2f", py(d) + 4)
      << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
    << xml_escape(plot.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << top + ph / 2 << ")\">" << xml_escape(plot.y_label) << "</text>\n";

  o << "<defs><clipPath id=\"plot\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
    << "\" height=\"" << ph << "\"/></clipPath></defs>\n";
  if (points >= 2) {
    for (std::size_t k = 0; k < plot.lines.size(); ++k) {
      const auto& l = plot.lines[k];
      if (!(l.x0 > 0.0 && l.x1 > 0.0)) continue;
      const double lx0 = std::log10(l.x0), lx1 = std::log10(l.x1);
      const double ly0 = (l.intercept + l.slope * std::log(l.x0)) / std::log(10.0);
      const double ly1 = (l.intercept + l.slope * std::log(l.x1)) / std::log(10.0);
      o << "<line clip-path=\"url(#plot)\" x1=\"" << fmt("%.2f", px(lx0)) << "\" y1=\"" << fmt("%.2f", py(ly0))
        << "\" x2=\"" << fmt("%.2f", px(lx1)) << "\" y2=\"" << fmt("%.2f", py(ly1)) << "\" stroke=\""
        << (l.dashed ? "#555555" : kPalette[k % 7]) << "\""
        << (l.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    }
  } else {
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << top + 20
      << "\" text-anchor=\"middle\" fill=\"#b00000\">warning: fewer than 2 points, no fit line</text>\n";
  }
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << "<circle cx=\"" << fmt("%.2f", px(std::log10(s.x[i]))) << "\" cy=\""
        << fmt("%.2f", py(std::log10(s.y[i]))) << "\" r=\"3\" fill=\"" << kPalette[k % 7] << "\"/>\n";
    }
  }
  // legend
  double ly = top + 10;
  for (std::size_t k = 0; k < plot.series.size(); ++k, ly += 18) {
    o << "<circle cx=\"" << left + pw + 15 << "\" cy=\"" << ly << "\" r=\"4\" fill=\"" << kPalette[k % 7] << "\"/>\n";
    o << "<text x=\"" << left + pw + 25 << "\" y=\"" << ly + 4 << "\">" << xml_escape(plot.series[k].label)
      << "</text>\n";
  }
  if (points >= 2) {
    for (const auto& l : plot.lines) {
      if (!l.dashed) continue;
      o << "<line x1=\"" << left + pw + 8 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 22 << "\" y2=\"" << ly
        << "\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
      o << "<text x=\"" << left + pw + 25 << "\" y=\"" << ly + 4 << "\">" << xml_escape(l.label) << "</text>\n";
      ly += 18;
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace dlab::cli

#include "qmaj/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace qmaj {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& os, const std::vector<SvgSeries>& series, const std::string& title,
               const std::string& xlabel, const std::string& ylabel, bool loglog) {
  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      double x = s.x[i], y = s.y[i];
      if (loglog) {
        if (!(x > 0.0) || y == 0.0) continue;
        x = std::log10(x);
        y = std::log10(std::abs(y));
      }
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      pts[k].emplace_back(x, y);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) xmin = 0.0, xmax = 1.0;
  if (!(ymax > ymin)) ymin -= 0.5, ymax += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  os << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  os << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(title) << "</text>\n";
  os << "<rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\"" << coord(pw)
     << "\" height=\"" << coord(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  const std::string xl = loglog ? "log10 " + xlabel : xlabel;
  const std::string yl = loglog ? "log10 |" + ylabel + "|" : ylabel;
  os << "<text x=\"" << coord(kLeft + pw / 2) << "\" y=\"" << coord(kHeight - 12)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(xl) << "</text>\n";
  os << "<text x=\"16\" y=\"" << coord(kTop + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\" transform=\"rotate(-90 16 " << coord(kTop + ph / 2) << ")\">" << escape(yl) << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 4, yv = ymin + (ymax - ymin) * t / 4;
    os << "<text x=\"" << coord(px(xv)) << "\" y=\"" << coord(kTop + ph + 16)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << num(xv) << "</text>\n";
    os << "<text x=\"" << coord(kLeft - 6) << "\" y=\"" << coord(py(yv) + 3)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << num(yv) << "</text>\n";
  }
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts[k].size(); ++i)
      os << (i ? " " : "") << coord(px(pts[k][i].first)) << ',' << coord(py(pts[k][i].second));
    os << "\"/>\n";
    os << "<text x=\"" << coord(kLeft + pw - 8) << "\" y=\"" << coord(kTop + 16 + 14 * k)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
       << escape(series[k].label) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace qmaj

// SPDX-License-Identifier: Apache-2.0

#include "hems/charts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace hems::charts {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
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

// Tick step from {1, 2, 5} x 10^k giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

void write_svg(std::ostream& os, const Chart& chart, int width, int height) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const Series& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double ystep = nice_step(y1 - y0, 5);
  y0 = std::floor(y0 / ystep) * ystep;
  y1 = std::ceil(y1 / ystep) * ystep;
  const double xstep = nice_step(x1 - x0, 8);

  const double left = 70, right = 170, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
     << "font-size=\"15\">" << escape(chart.title) << "</text>\n";

  for (double y = y0; y <= y1 + ystep * 1e-6; y += ystep) {
    os << "<line x1=\"" << num(left) << "\" x2=\"" << num(left + pw) << "\" y1=\""
       << num(py(y)) << "\" y2=\"" << num(py(y)) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(y) + 4)
       << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
  }
  for (double x = std::ceil(x0 / xstep) * xstep; x <= x1 + xstep * 1e-6; x += xstep) {
    os << "<line x1=\"" << num(px(x)) << "\" x2=\"" << num(px(x)) << "\" y1=\"" << num(top)
       << "\" y2=\"" << num(top + ph) << "\" stroke=\"#eee\"/>\n";
    os << "<text x=\"" << num(px(x)) << "\" y=\"" << num(top + ph + 16)
       << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
  }
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 10.0)
     << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << num(top + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(chart.y_label) << "</text>\n";

  int legend_row = 0;
  for (const Series& s : chart.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.markers_only) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.y[i])) continue;
        os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
           << "\" r=\"3\" fill=\"" << s.color << "\" fill-opacity=\"0.8\"/>\n";
      }
    } else if (n > 0) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.3\"";
      if (s.dashed) os << " stroke-dasharray=\"5,3\"";
      os << " points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (i) os << ' ';
        os << num(px(s.x[i])) << ',' << num(py(s.y[i]));
      }
      os << "\"/>\n";
    }
    const double ly = top + 10 + 18 * legend_row++;
    os << "<rect x=\"" << num(left + pw + 12) << "\" y=\"" << num(ly - 8)
       << "\" width=\"14\" height=\"8\" fill=\"" << s.color << "\"/>\n";
    os << "<text x=\"" << num(left + pw + 32) << "\" y=\"" << num(ly) << "\">"
       << escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace hems::charts

// SPDX-License-Identifier: Apache-2.0
//
// Minimal static SVG charts for run and sweep reports. Output is a pure
// function of the inputs, so reruns are byte-identical.

#ifndef HEMS_CHARTS_HPP_
#define HEMS_CHARTS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace hems::charts {

struct Series {
  std::string name;
  std::string color;  // any SVG color
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
  bool markers_only = false;  // scatter
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

void write_svg(std::ostream& os, const Chart& chart, int width = 900, int height = 360);

}  // namespace hems::charts

#endif  // HEMS_CHARTS_HPP_

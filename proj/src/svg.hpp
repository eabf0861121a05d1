// Copyright 2026 The demodebias Authors
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

#ifndef DEMODEBIAS_SVG_HPP_
#define DEMODEBIAS_SVG_HPP_

#include <string>
#include <utility>
#include <vector>

namespace demodebias::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool markers = true;
  bool line = false;
  std::string color = "#1f77b4";
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

std::string LinePlot(const Axes& axes, const std::vector<Series>& series);

std::string BarChart(const std::string& title,
                     const std::vector<std::pair<std::string, double>>& bars,
                     const std::string& y_label);

}  // namespace demodebias::svg

#endif  // DEMODEBIAS_SVG_HPP_

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

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace demodebias::svg {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string LinePlot(const Axes& axes, const std::vector<Series>& series) {
  auto tx = [&](double v) { return axes.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return axes.log_y ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if ((axes.log_x && x <= 0) || (axes.log_y && y <= 0)) continue;
      x0 = std::min(x0, tx(x)); x1 = std::max(x1, tx(x));
      y0 = std::min(y0, ty(y)); y1 = std::max(y1, ty(y));
    }
  }
  if (!std::isfinite(x0)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
  if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const double pad_y = 0.05 * (y1 - y0);
  y0 -= pad_y; y1 += pad_y;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + ph - (ty(v) - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << kHeight << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << Num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << Escape(axes.title) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double vx = axes.log_x ? std::pow(10.0, fx) : fx;
    const double vy = axes.log_y ? std::pow(10.0, fy) : fy;
    o << "<text x=\"" << Num(px(vx)) << "\" y=\"" << Num(kTop + ph + 18)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << Label(vx) << "</text>\n";
    o << "<text x=\"" << Num(kLeft - 6) << "\" y=\"" << Num(py(vy) + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << Label(vy) << "</text>\n";
  }
  o << "<text x=\"" << Num(kLeft + pw / 2) << "\" y=\"" << Num(kHeight - 18)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << Escape(axes.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << Num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
    << " transform=\"rotate(-90 16 " << Num(kTop + ph / 2) << ")\">" << Escape(axes.y_label)
    << "</text>\n";
  double legend_y = kTop + 16;
  for (const Series& s : series) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : s.points) {
      if ((axes.log_x && p.first <= 0) || (axes.log_y && p.second <= 0)) continue;
      pts.push_back(p);
    }
    if (s.line && pts.size() > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
      for (const auto& [x, y] : pts) o << Num(px(x)) << ',' << Num(py(y)) << ' ';
      o << "\"/>\n";
    }
    if (s.markers) {
      for (const auto& [x, y] : pts) {
        o << "<circle cx=\"" << Num(px(x)) << "\" cy=\"" << Num(py(y)) << "\" r=\"4\" fill=\""
          << s.color << "\"/>\n";
      }
    }
    if (!s.label.empty()) {
      o << "<text x=\"" << Num(kLeft + pw - 8) << "\" y=\"" << Num(legend_y)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << s.color << "\">"
        << Escape(s.label) << "</text>\n";
      legend_y += 16;
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::string BarChart(const std::string& title,
                     const std::vector<std::pair<std::string, double>>& bars,
                     const std::string& y_label) {
  double ymax = 0.0;
  for (const auto& b : bars) ymax = std::max(ymax, b.second);
  if (ymax <= 0.0) ymax = 1.0;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double slot = bars.empty() ? pw : pw / static_cast<double>(bars.size());
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << kHeight << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << Num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << Escape(title) << "</text>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw
    << "\" y2=\"" << kTop + ph << "\" stroke=\"black\"/>\n";
  o << "<text x=\"16\" y=\"" << Num(kTop + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
    << " transform=\"rotate(-90 16 " << Num(kTop + ph / 2) << ")\">" << Escape(y_label)
    << "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = bars[i].second / ymax * ph;
    const double x = kLeft + slot * static_cast<double>(i) + 0.15 * slot;
    o << "<rect x=\"" << Num(x) << "\" y=\"" << Num(kTop + ph - h) << "\" width=\""
      << Num(0.7 * slot) << "\" height=\"" << Num(h) << "\" fill=\"#4c72b0\"/>\n";
    o << "<text x=\"" << Num(x + 0.35 * slot) << "\" y=\"" << Num(kTop + ph - h - 4)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << Label(bars[i].second) << "</text>\n";
    o << "<text x=\"" << Num(x + 0.35 * slot) << "\" y=\"" << Num(kTop + ph + 16)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << Escape(bars[i].first) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace demodebias::svg

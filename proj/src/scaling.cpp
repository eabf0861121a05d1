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

#include "scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "svg.hpp"

namespace demodebias {

using nlohmann::json;

double ToOptimalityGap(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    Fail(ErrorCode::kOutOfRange, "score " + std::to_string(score) + " outside [0, 1]");
  }
  const double gap = 1.0 - score;
  if (gap == 0.0) {
    Fail(ErrorCode::kPerfectScoreUnfittable, "a perfect score has zero gap");
  }
  return gap;
}

PowerLawFit FitPowerLaw(const std::vector<ScalingPoint>& points) {
  std::vector<std::pair<double, double>> xy;
  std::vector<std::string> excluded;
  for (const ScalingPoint& p : points) {
    if (!(p.x > 0.0)) Fail(ErrorCode::kOutOfRange, "scaling x must be > 0");
    try {
      xy.emplace_back(p.x, ToOptimalityGap(p.score));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPerfectScoreUnfittable) throw;
      excluded.push_back(p.label.empty() ? std::to_string(p.x) : p.label);
    }
  }
  PowerLawFit fit = FitPowerLawGaps(xy);
  fit.excluded = std::move(excluded);
  return fit;
}

PowerLawFit FitPowerLawGaps(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2) {
    Fail(ErrorCode::kInsufficientData, "power-law fit needs >= 2 points");
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, gap] : xy) {
    if (!(x > 0.0)) Fail(ErrorCode::kOutOfRange, "scaling x must be > 0");
    if (!(gap > 0.0)) Fail(ErrorCode::kNonPositiveGap, "gap must be > 0 for a log fit");
    mx += std::log(x);
    my += std::log(gap);
  }
  const double n = static_cast<double>(xy.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, gap] : xy) {
    const double dx = std::log(x) - mx, dy = std::log(gap) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) Fail(ErrorCode::kDegenerateX, "all x values are equal");
  PowerLawFit fit;
  fit.alpha = sxy / sxx;
  fit.beta = std::exp(my - fit.alpha * mx);
  fit.pearson_r = syy > 0.0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
  fit.points = xy;
  return fit;
}

double EvaluateFit(const PowerLawFit& fit, double x) {
  if (!(x > 0.0)) Fail(ErrorCode::kOutOfRange, "x must be > 0");
  return fit.beta * std::pow(x, fit.alpha);
}

FitComparison CompareFits(const PowerLawFit& a, const PowerLawFit& b,
                          double parallel_tolerance,
                          std::pair<double, double> fallback_range) {
  FitComparison c;
  c.delta_alpha = a.alpha - b.alpha;
  c.faster = c.delta_alpha < 0.0 ? "first" : c.delta_alpha > 0.0 ? "second" : "equal";
  auto range = [](const PowerLawFit& f) {
    double lo = f.points.front().first, hi = lo;
    for (const auto& p : f.points) {
      lo = std::min(lo, p.first);
      hi = std::max(hi, p.first);
    }
    return std::pair{lo, hi};
  };
  if (!a.points.empty() && !b.points.empty()) {
    const auto [alo, ahi] = range(a);
    const auto [blo, bhi] = range(b);
    c.x_low = std::max(alo, blo);
    c.x_high = std::min(ahi, bhi);
    if (c.x_low > c.x_high) std::swap(c.x_low, c.x_high);
  } else {
    c.x_low = fallback_range.first;
    c.x_high = fallback_range.second;
  }
  c.gap_ratio_low = EvaluateFit(a, c.x_low) / EvaluateFit(b, c.x_low);
  c.gap_ratio_high = EvaluateFit(a, c.x_high) / EvaluateFit(b, c.x_high);
  c.parallel = std::abs(c.delta_alpha) <= parallel_tolerance;
  std::ostringstream s;
  if (c.delta_alpha == 0.0 && a.beta == b.beta) {
    s << "identical scaling";
  } else if (c.parallel) {
    s << "parallel scaling with constant offset";
  } else {
    s << (c.faster == "first" ? "first" : "second") << " fit converges faster";
  }
  c.summary = s.str();
  return c;
}

std::vector<ScalingPoint> ParseScalingCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<ScalingPoint> points;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (header) {
      header = false;
      if (line.rfind("x", 0) == 0) continue;
    }
    std::istringstream row(line);
    std::string x, score, label;
    std::getline(row, x, ',');
    std::getline(row, score, ',');
    std::getline(row, label);
    try {
      std::size_t used = 0;
      ScalingPoint p;
      p.x = std::stod(x, &used);
      p.score = std::stod(score);
      p.label = label;
      points.push_back(p);
    } catch (const std::exception&) {
      Fail(ErrorCode::kParse, "scaling CSV line " + std::to_string(line_no) +
                                  ": expected x,score,label");
    }
  }
  return points;
}

json FitToJson(const PowerLawFit& fit) {
  json pts = json::array();
  for (const auto& [x, gap] : fit.points) pts.push_back(json::array({x, gap}));
  return json{{"alpha", fit.alpha},
              {"beta", fit.beta},
              {"r", fit.pearson_r},
              {"n_points", fit.points.size()},
              {"excluded", fit.excluded},
              {"points", std::move(pts)}};
}

json ComparisonToJson(const FitComparison& c) {
  return json{{"delta_alpha", c.delta_alpha},
              {"faster", c.faster},
              {"x_range", json::array({c.x_low, c.x_high})},
              {"gap_ratio", json::array({c.gap_ratio_low, c.gap_ratio_high})},
              {"parallel", c.parallel},
              {"summary", c.summary}};
}

std::string FitSvg(const std::vector<std::pair<std::string, PowerLawFit>>& fits,
                   const std::string& title) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::vector<svg::Series> series;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& [name, fit] = fits[i];
    const char* color = kColors[i % 4];
    svg::Series pts{name, fit.points, true, false, color};
    series.push_back(pts);
    if (fit.points.empty()) continue;
    double lo = fit.points.front().first, hi = lo;
    for (const auto& p : fit.points) {
      lo = std::min(lo, p.first);
      hi = std::max(hi, p.first);
    }
    svg::Series line;
    line.markers = false;
    line.line = true;
    line.color = color;
    char label[96];
    std::snprintf(label, sizeof(label), "y=%.3gx^%.3g (r=%.2f)", fit.beta, fit.alpha,
                  fit.pearson_r);
    line.label = label;
    for (int k = 0; k <= 20; ++k) {
      const double x = lo * std::pow(hi / lo, k / 20.0);
      line.points.emplace_back(x, EvaluateFit(fit, x));
    }
    series.push_back(line);
  }
  svg::Axes axes{title, "data size", "optimality gap", true, true};
  return svg::LinePlot(axes, series);
}

}  // namespace demodebias

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

// Power-law fits of optimality gap against data size: gap = beta * x^alpha
// by ordinary least squares in log-log space.

#ifndef DEMODEBIAS_SCALING_HPP_
#define DEMODEBIAS_SCALING_HPP_

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace demodebias {

struct ScalingPoint {
  double x = 0.0;
  double score = 0.0;
  std::string label;
};

struct PowerLawFit {
  double alpha = 0.0;
  double beta = 1.0;
  double pearson_r = 0.0;
  std::vector<std::pair<double, double>> points;  // (x, gap) used in the fit
  std::vector<std::string> excluded;              // labels of gap == 0 points
};

// 1 - score. Throws kPerfectScoreUnfittable for score == 1 and kOutOfRange
// for scores outside [0, 1].
double ToOptimalityGap(double score);

// Points with a perfect score are excluded and listed in `excluded`.
PowerLawFit FitPowerLaw(const std::vector<ScalingPoint>& points);

// Fit on raw (x, gap) pairs. Throws kNonPositiveGap, kDegenerateX and
// kInsufficientData (< 2 points).
PowerLawFit FitPowerLawGaps(const std::vector<std::pair<double, double>>& xy);

double EvaluateFit(const PowerLawFit& fit, double x);

struct FitComparison {
  double delta_alpha = 0.0;      // a.alpha - b.alpha
  std::string faster;            // "first", "second" or "equal"
  double x_low = 0.0, x_high = 0.0;
  double gap_ratio_low = 1.0;    // gap_a / gap_b at x_low
  double gap_ratio_high = 1.0;   // gap_a / gap_b at x_high
  bool parallel = false;         // |delta_alpha| <= tolerance
  std::string summary;
};

// Shared x-range comes from the fitted points; when either fit has none the
// caller's range is used.
FitComparison CompareFits(const PowerLawFit& a, const PowerLawFit& b,
                          double parallel_tolerance = 0.05,
                          std::pair<double, double> fallback_range = {1.0, 10.0});

std::vector<ScalingPoint> ParseScalingCsv(const std::string& text);
nlohmann::json FitToJson(const PowerLawFit& fit);
nlohmann::json ComparisonToJson(const FitComparison& c);
std::string FitSvg(const std::vector<std::pair<std::string, PowerLawFit>>& fits,
                   const std::string& title);

}  // namespace demodebias

#endif  // DEMODEBIAS_SCALING_HPP_

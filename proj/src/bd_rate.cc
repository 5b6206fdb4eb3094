// Copyright 2026 The tplcodec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "tplcodec/harness.h"

namespace tplcodec {

namespace {

constexpr int kDegree = 3;
constexpr int kTerms = kDegree + 1;

// log10(rate) as a cubic in t = (psnr - center) / scale.
struct LogRateFit {
  std::array<double, kTerms> coeff{};
  double center = 0.0;
  double scale = 1.0;
  double lo = 0.0;
  double hi = 0.0;

  // Integral over psnr in [a, b].
  double integrate(double a, double b) const {
    auto antideriv = [&](double psnr) {
      const double t = (psnr - center) / scale;
      double acc = 0.0;
      double tp = t;
      for (int k = 0; k < kTerms; ++k) {
        acc += coeff[k] * tp / (k + 1);
        tp *= t;
      }
      return acc * scale;
    };
    return antideriv(b) - antideriv(a);
  }
};

LogRateFit FitCurve(std::span<const RdPoint> curve) {
  if (curve.size() < static_cast<size_t>(kTerms)) {
    throw std::invalid_argument("bd_rate: each curve needs at least 4 points");
  }
  std::vector<RdPoint> pts(curve.begin(), curve.end());
  std::sort(pts.begin(), pts.end(), [](const RdPoint& a, const RdPoint& b) { return a.kbps < b.kbps; });
  for (size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].kbps > 0.0)) throw std::invalid_argument("bd_rate: rates must be positive");
    if (i > 0 && !(pts[i].psnr > pts[i - 1].psnr)) {
      throw std::invalid_argument("bd_rate: PSNR must increase strictly with rate");
    }
  }

  LogRateFit fit;
  fit.lo = pts.front().psnr;
  fit.hi = pts.back().psnr;
  fit.center = 0.5 * (fit.lo + fit.hi);
  fit.scale = std::max(0.5 * (fit.hi - fit.lo), 1e-9);

  Eigen::MatrixXd a(pts.size(), kTerms);
  Eigen::VectorXd y(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    const double t = (pts[i].psnr - fit.center) / fit.scale;
    double tp = 1.0;
    for (int k = 0; k < kTerms; ++k) {
      a(static_cast<Eigen::Index>(i), k) = tp;
      tp *= t;
    }
    y(static_cast<Eigen::Index>(i)) = std::log10(pts[i].kbps);
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  for (int k = 0; k < kTerms; ++k) fit.coeff[k] = c(k);
  return fit;
}

}  // namespace

BdResult bd_rate(std::span<const RdPoint> curve_a, std::span<const RdPoint> curve_b) {
  const LogRateFit a = FitCurve(curve_a);
  const LogRateFit b = FitCurve(curve_b);
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (!(hi > lo)) throw std::invalid_argument("bd_rate: curves share no PSNR interval");
  const double avg_diff = (b.integrate(lo, hi) - a.integrate(lo, hi)) / (hi - lo);
  return {100.0 * (std::pow(10.0, avg_diff) - 1.0)};
}

}  // namespace tplcodec

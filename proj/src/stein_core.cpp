// Copyright 2026 The stein-fisher Authors
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


#include "steinfisher/stein_core.hpp"

#include <algorithm>
#include <cmath>

#include "steinfisher/errors.hpp"
#include "steinfisher/random.hpp"

namespace steinfisher {

namespace {

const QuadratureOptions kContract{1e-10, 0.0, 4000, true};

}  // namespace

CovarianceCheckReport covariance_formula_check(const DistributionSpec& dist, const RealFn& alpha,
                                               const RealFn& alpha_prime, const RealFn& beta) {
  const auto& w = dist.mass_window;
  const double mean_beta = expectation(dist, beta);
  const RealFn centered = [&](double y) { return beta(y) - mean_beta; };

  const double lhs =
      quad([&](double x) { return alpha(x) * centered(x) * dist.density(x); }, w.lo, w.hi, kContract);
  const double rhs = quad(
      [&](double x) {
        const double slope = alpha_prime(x);
        if (slope == 0.0) return 0.0;
        return slope * upper_tail_integral(dist, centered, x, 0.0);
      },
      w.lo, w.hi, kContract);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

double l_operator(const DistributionSpec& dist, const RealFn& g, double x) {
  const double mean_g = expectation(dist, g);
  if (std::abs(mean_g) > 1e-8) {
    throw Error(ErrorCode::InvalidInput,
                "L operator needs a centered integrand, E g = " + std::to_string(mean_g));
  }
  const double p = dist.density(x);
  if (!(p >= 1e-300)) {
    throw Error(ErrorCode::DensityUnderflow, "density at " + std::to_string(x) + " underflows");
  }
  return upper_tail_integral(dist, g, x, mean_g) / p;
}

DecompositionReport decomposition_check(const VectorFn& statistic, const std::vector<VectorFn>& parts,
                                        const std::vector<DistributionSpec>& dists, std::size_t n_mc,
                                        std::uint64_t seed) {
  if (parts.size() != dists.size()) {
    throw Error(ErrorCode::InvalidInput, "need one decomposition part per coordinate");
  }
  const auto n = static_cast<Eigen::Index>(dists.size());
  auto draw = [&](Stream& s) {
    Eigen::VectorXd x(n);
    for (Eigen::Index k = 0; k < n; ++k) x[k] = dists[k].sample(s);
    return x;
  };

  DecompositionReport report;
  Stream stream(seed, substream_id({0xDEC0, 0}));
  std::vector<double> residual(n_mc);  // F - sum_k M_k per draw
  for (std::size_t i = 0; i < n_mc; ++i) {
    const Eigen::VectorXd x = draw(stream);
    double sum = 0.0;
    for (const auto& m : parts) sum += m(x);
    residual[i] = statistic(x) - sum;
  }
  double mean = 0.0;
  for (double r : residual) mean += r;
  mean /= static_cast<double>(std::max<std::size_t>(n_mc, 1));
  report.mean_estimate = mean;
  for (double r : residual) report.max_sum_defect = std::max(report.max_sum_defect, std::abs(r - mean));

  constexpr int kAnchors = 3;
  report.conditional_mean.assign(static_cast<std::size_t>(n), 0.0);
  report.conditional_mean_se.assign(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    Stream anchor_stream(seed, substream_id({0xDEC0, 1, static_cast<std::uint64_t>(k)}));
    for (int a = 0; a < kAnchors; ++a) {
      Eigen::VectorXd x = draw(anchor_stream);
      double sum = 0.0;
      double sum_sq = 0.0;
      for (std::size_t i = 0; i < n_mc; ++i) {
        x[k] = dists[k].sample(anchor_stream);
        const double v = parts[k](x);
        sum += v;
        sum_sq += v * v;
      }
      const double count = static_cast<double>(n_mc);
      const double m = sum / count;
      const double var = std::max(0.0, (sum_sq - count * m * m) / std::max(count - 1.0, 1.0));
      auto& best = report.conditional_mean[k];
      if (std::abs(m) >= best) {
        best = std::abs(m);
        report.conditional_mean_se[k] = std::sqrt(var / count);
      }
    }
  }
  return report;
}

}  // namespace steinfisher

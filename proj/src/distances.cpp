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


#include "steinfisher/distances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "steinfisher/distributions.hpp"
#include "steinfisher/errors.hpp"

namespace steinfisher {

DistanceReport convert(double fisher_value) {
  if (!(fisher_value >= 0.0) || !std::isfinite(fisher_value)) {
    throw Error(ErrorCode::InvalidInput,
                "Fisher information distance must be finite and nonnegative, got " +
                    std::to_string(fisher_value));
  }
  DistanceReport r;
  r.fisher = fisher_value;
  r.uniform_density = (1.0 + std::sqrt(6.0 / std::numbers::pi)) * std::sqrt(fisher_value);
  r.kl = fisher_value / 2.0;
  r.wasserstein2 = 2.0 * r.kl;
  r.total_variation = std::sqrt(2.0 * r.kl);
  r.kolmogorov = std::sqrt(fisher_value);
  return r;
}

double kolmogorov_empirical(std::span<const double> f_samples) {
  if (f_samples.size() < 10000) {
    throw Error(ErrorCode::InsufficientData, "empirical Kolmogorov distance needs 10000 samples, got " +
                                                 std::to_string(f_samples.size()));
  }
  std::vector<double> sorted(f_samples.begin(), f_samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double phi = normal_cdf(sorted[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / count - phi, phi - static_cast<double>(i) / count});
  }
  return worst;
}

}  // namespace steinfisher

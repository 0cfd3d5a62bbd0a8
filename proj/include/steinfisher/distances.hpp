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


#pragma once

#include <optional>
#include <span>

namespace steinfisher {

/// Bounds implied by a Fisher information distance I(F || Z). Values above a
/// trivial cap are kept as computed and flagged.
struct DistanceReport {
  double fisher;
  double uniform_density;  ///< sup |p_F - phi| <= (1 + sqrt(6/pi)) sqrt(I)
  double kl;               ///< I / 2
  double wasserstein2;     ///< W_2^2 <= 2 D
  double total_variation;  ///< sqrt(2 D)
  double kolmogorov;       ///< sqrt(I)
  std::optional<double> kolmogorov_empirical;

  bool total_variation_above_cap() const { return total_variation > 1.0; }
  bool kolmogorov_above_cap() const { return kolmogorov > 1.0; }
};

/// InvalidInput for a negative or non-finite value.
DistanceReport convert(double fisher_value);

/// sup_x |F_N(x) - Phi(x)| over the empirical cdf of at least 1e4 samples.
double kolmogorov_empirical(std::span<const double> f_samples);

}  // namespace steinfisher

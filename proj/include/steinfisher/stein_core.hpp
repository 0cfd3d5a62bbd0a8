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

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "steinfisher/distributions.hpp"

namespace steinfisher {

struct CovarianceCheckReport {
  double lhs;       ///< Cov(alpha(X), beta(X)) by direct quadrature.
  double rhs;       ///< int alpha'(x) int_x^inf (beta - E beta) p dy dx.
  double abs_diff;
};

/// Evaluates both sides of the Stein-type covariance identity by independent
/// quadratures. alpha must be bounded; beta integrable.
CovarianceCheckReport covariance_formula_check(const DistributionSpec& dist, const RealFn& alpha,
                                               const RealFn& alpha_prime, const RealFn& beta);

/// L g(x) = int_x^inf g(y) p(y) dy / p(x) for a centered integrand g.
/// Throws InvalidInput if g is not centered to 1e-8 and DensityUnderflow if
/// p(x) < 1e-300.
double l_operator(const DistributionSpec& dist, const RealFn& g, double x);

using VectorFn = std::function<double(const Eigen::VectorXd&)>;

struct DecompositionReport {
  /// max over draws of |sum_k M_k - (F - E F)|, with E F estimated by the
  /// sample mean of F - sum_k M_k (the parts act as zero-mean control variates).
  double max_sum_defect = 0.0;
  double mean_estimate = 0.0;
  /// Per coordinate: the largest |E_k[M_k]| over the frozen anchor points, and
  /// the Monte Carlo standard error at that anchor.
  std::vector<double> conditional_mean;
  std::vector<double> conditional_mean_se;
};

/// Monte Carlo diagnostics for a candidate decomposition {M_k} of F over the
/// product law of `dists`: the sum identity per draw, and E_k[M_k] = 0 at three
/// random anchors for the other coordinates.
DecompositionReport decomposition_check(const VectorFn& statistic, const std::vector<VectorFn>& parts,
                                        const std::vector<DistributionSpec>& dists, std::size_t n_mc,
                                        std::uint64_t seed);

}  // namespace steinfisher

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
#include <string>
#include <vector>

#include "steinfisher/distributions.hpp"

namespace steinfisher {

/// log E[exp(-x Y)] for a nonnegative Y, repeated `multiplicity` times in the product.
struct MgfFactor {
  RealFn log_mgf;
  double multiplicity = 1.0;
};

struct NegMomentQuery {
  double alpha = 1.0;
  std::vector<MgfFactor> factors;
  double tolerance = 1e-10;  ///< relative
};

/// E[R^-alpha] for R = sum of independent Y_k, as
/// Gamma(alpha)^-1 int_0^inf x^(alpha-1) prod_k E[exp(-x Y_k)] dx.
/// NotIntegrable when the product does not decay faster than x^-alpha between
/// x = 1e3 and x = 1e6.
double negative_moment(const NegMomentQuery& query);

/// Local decay exponent of the factor product between 1e3 and 1e6; +inf when
/// the product underflows there.
double decay_exponent(const std::vector<MgfFactor>& factors);

/// A nonnegative law with unit mean, known through its Laplace transform.
struct NonnegativeLaw {
  std::string name;
  RealFn log_mgf;
};

/// Y = X^2 with X standard normal.
NonnegativeLaw gaussian_square();
/// Y = 1.
NonnegativeLaw constant_one();
/// Y = tau(X) for X drawn from dist; the transform is a 1-D quadrature.
NonnegativeLaw stein_kernel_law(const DistributionSpec& dist);

struct TrendPoint {
  int n;
  std::optional<double> value;  ///< n^alpha E[S_n^-alpha], empty when not integrable
  std::string note;
};

std::vector<TrendPoint> ujmld_trend(const NonnegativeLaw& law, double alpha,
                                    const std::vector<int>& n_grid);

/// |E U|^2 + (p - 1) sum_k ||U - E_k U||_p^2. InvalidOrder if p < 2.
double mz_bound(const std::vector<double>& per_coordinate_norms, double mean_abs, double p);

struct MgfCheckPoint {
  double x;
  double lhs;  ///< E exp(-x tau(X)) by quadrature
  double rhs;  ///< (1 + x c^2)^(-1 / c^2)
  bool ok;
};

/// Compares the Laplace transform of tau(X) with the bound implied by
/// |tau'| <= c. `c` overrides the law's own bound; MissingKernelDerivativeBound
/// when neither is available.
std::vector<MgfCheckPoint> mgf_bound_check(const DistributionSpec& dist,
                                           const std::vector<double>& x_grid,
                                           std::optional<double> c = std::nullopt);

}  // namespace steinfisher

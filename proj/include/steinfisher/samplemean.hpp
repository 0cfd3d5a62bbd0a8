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
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "steinfisher/distributions.hpp"
#include "steinfisher/estimate.hpp"

namespace steinfisher {

/// Twice differentiable H with bounded H', H'' and H'(0) != 0.
struct SmoothLink {
  std::string name;
  RealFn h;
  RealFn h_prime;
  RealFn h_second;
  double h_prime_at_0;
  double sup_h_prime;
  double sup_h_second;

  /// H'' == 0, so E H(Xbar) and Var F are known exactly.
  bool linear() const { return sup_h_second == 0.0; }
};

SmoothLink identity_link();
SmoothLink sin_link();
SmoothLink tanh_link();
/// a x + b sin x; needs a + b != 0.
SmoothLink affine_sin_link(double a, double b);
/// "identity", "sin", "tanh", "affine_sin(a,b)".
SmoothLink link_from_name(std::string_view name);

struct PrePass {
  double mu_h;
  double sigma;
  double mu_se;
  double sigma_se;
};

/// Monte Carlo mean of H(Xbar) and standard deviation of sqrt(n) H(Xbar) over
/// `reps` >= 1e4 draws from the pre-pass substream of `seed`.
/// DegenerateVariance when sigma <= 3 SE.
PrePass pre_pass(const SmoothLink& link, const std::vector<DistributionSpec>& dists, std::size_t reps,
                 std::uint64_t seed);

struct SampleMeanModel {
  SmoothLink link;
  std::vector<DistributionSpec> dists;
  double mu_h = 0.0;
  double sigma = 1.0;
  double mu_se = 0.0;
  double sigma_se = 0.0;
  bool exact_moments = false;
};

/// Linear links get the exact centering and scale; other links run pre_pass.
SampleMeanModel make_sample_mean_model(SmoothLink link, std::vector<DistributionSpec> dists,
                                       std::size_t pre_pass_reps, std::uint64_t seed);

inline constexpr double kNablaGuard = 1e-10;

/// F = sqrt(n) (H(Xbar) - mu_h) / sigma.
double sample_mean_statistic(const SampleMeanModel& model, const Eigen::VectorXd& x);
/// nabla = H'(0) H'(Xbar) sum_k tau_k / (n sigma^2).
double nabla(const SampleMeanModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd nabla_gradient(const SampleMeanModel& model, const Eigen::VectorXd& x);

/// (F, H, nabla) with H = sum g_k / nabla + sum_k d_k nabla L_k g_k / nabla^2 and
/// g_k(x) = H'(0) x / (sigma sqrt(n)).
ScorePair evaluate_score_pair_sm(const SampleMeanModel& model, const Eigen::VectorXd& x);
ScorePair draw_score_pair_sm(const SampleMeanModel& model, Stream& stream);

struct LinearScoreDraw {
  double f;          ///< S_n
  double h_stein;    ///< identity-link representation
  double h_classic;  ///< sum_k rho_k(X_k) / sqrt(n)
  bool guarded;
};

LinearScoreDraw linear_sum_score(const std::vector<DistributionSpec>& dists, Stream& stream);

}  // namespace steinfisher

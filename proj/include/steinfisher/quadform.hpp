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
#include <vector>

#include <Eigen/Dense>

#include "steinfisher/distributions.hpp"
#include "steinfisher/estimate.hpp"

namespace steinfisher {

/// Dense symmetric matrix with vanishing diagonal, the coefficients of
/// F = sum_{u<v} a_uv X_u X_v.
class CoefficientMatrix {
 public:
  /// Validates symmetry (relative 1e-12) and a zero diagonal; throws InvalidInput.
  explicit CoefficientMatrix(const Eigen::MatrixXd& a);

  /// Reads only the strict upper triangle and mirrors it.
  static CoefficientMatrix from_upper_triangle(const Eigen::MatrixXd& a);

  const Eigen::MatrixXd& matrix() const { return a_; }
  Eigen::Index n() const { return a_.rows(); }
  /// sum_{u<v} a_uv^2, the variance of F for standardized inputs.
  double sigma2() const;

 private:
  struct Trusted {};
  CoefficientMatrix(Eigen::MatrixXd a, Trusted) : a_(std::move(a)) {}

  Eigen::MatrixXd a_;
};

/// Banded pattern a_uv = 1 for 0 < |u - v| <= bandwidth.
CoefficientMatrix banded_matrix(Eigen::Index n, Eigen::Index bandwidth);
/// Upper triangle filled with iid N(0, 1) entries from the given seed.
CoefficientMatrix random_matrix(Eigen::Index n, std::uint64_t seed);

struct QuadFormModel {
  /// Throws InvalidInput when sigma2 == 0 or the number of laws does not match n.
  QuadFormModel(CoefficientMatrix matrix, std::vector<DistributionSpec> dists, bool standardize = true);

  CoefficientMatrix matrix;
  std::vector<DistributionSpec> dists;
  double sigma2;
  bool standardize;
};

inline constexpr double kThetaGuard = 1e-10;

// Unstandardized algebra at a point x.
double quadform_value(const CoefficientMatrix& a, const Eigen::VectorXd& x);
/// M_k = X_k (A X)_k / 2; sums to F.
Eigen::VectorXd martingale_parts(const CoefficientMatrix& a, const Eigen::VectorXd& x);
/// L_k M_k = tau_k(X_k) (A X)_k / 2.
Eigen::VectorXd l_martingale_parts(const QuadFormModel& model, const Eigen::VectorXd& x);
/// Theta = sum_u (A X)_u^2 tau_u(X_u) / 2.
double theta(const QuadFormModel& model, const Eigen::VectorXd& x);
/// d_k Theta = (A w)_k + tau'_k(X_k) (A X)_k^2 / 2 with w_u = (A X)_u tau_u(X_u).
Eigen::VectorXd theta_gradient(const QuadFormModel& model, const Eigen::VectorXd& x);

/// (F, H, Theta) at x, standardized if the model says so. Theta below
/// kThetaGuard yields a guarded pair.
ScorePair evaluate_score_pair(const QuadFormModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd draw_inputs(const std::vector<DistributionSpec>& dists, Stream& stream);
ScorePair draw_score_pair(const QuadFormModel& model, Stream& stream);

struct MatrixFunctionals {
  double sum_row4;
  double trace4;
  double lambda_min;  ///< extreme eigenvalues of A^T A
  double lambda_max;
  double berry_factor;
  double structural_factor;
};

MatrixFunctionals matrix_functionals(const CoefficientMatrix& matrix);

/// Eigenvalues of A^T A in increasing order.
Eigen::VectorXd gram_eigenvalues(const CoefficientMatrix& matrix);

/// ||sigma^2 / Theta||_order for Gaussian inputs, from the Laplace transform
/// of the Gaussian quadratic form. NotIntegrable unless the number of positive
/// eigenvalues of A^T A exceeds 2 * order.
double gaussian_negative_moment_norm(const CoefficientMatrix& matrix, double order);

/// structural_factor * neg_norm8^3. The Fisher distance bound is an unknown
/// constant times this. ContractViolation if neg_norm8 < 1.
double fisher_bound_factor(const QuadFormModel& model, double neg_norm8);

}  // namespace steinfisher

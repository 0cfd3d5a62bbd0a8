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


#include "steinfisher/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steinfisher/errors.hpp"
#include "steinfisher/moments.hpp"

namespace steinfisher {

CoefficientMatrix::CoefficientMatrix(const Eigen::MatrixXd& a) : a_(a) {
  if (a.rows() != a.cols() || a.rows() < 2) {
    throw Error(ErrorCode::InvalidInput, "coefficient matrix must be square with n >= 2");
  }
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index u = 0; u < a.rows(); ++u) {
    if (a(u, u) != 0.0) {
      throw Error(ErrorCode::InvalidInput, "nonzero diagonal entry at " + std::to_string(u));
    }
    for (Eigen::Index v = u + 1; v < a.cols(); ++v) {
      if (std::abs(a(u, v) - a(v, u)) > 1e-12 * scale) {
        throw Error(ErrorCode::InvalidInput, "coefficient matrix is not symmetric at (" +
                                                 std::to_string(u) + ", " + std::to_string(v) + ")");
      }
    }
  }
  a_ = 0.5 * (a + a.transpose());
}

CoefficientMatrix CoefficientMatrix::from_upper_triangle(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 2) {
    throw Error(ErrorCode::InvalidInput, "coefficient matrix must be square with n >= 2");
  }
  Eigen::MatrixXd upper = a.triangularView<Eigen::StrictlyUpper>();
  return CoefficientMatrix(upper + upper.transpose(), Trusted{});
}

double CoefficientMatrix::sigma2() const { return 0.5 * a_.squaredNorm(); }

CoefficientMatrix banded_matrix(Eigen::Index n, Eigen::Index bandwidth) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = u + 1; v < n && v - u <= bandwidth; ++v) a(u, v) = 1.0;
  }
  return CoefficientMatrix::from_upper_triangle(a);
}

CoefficientMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  Stream stream(seed, substream_id({0x3A7, static_cast<std::uint64_t>(n)}));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index v = u + 1; v < n; ++v) a(u, v) = stream.normal();
  }
  return CoefficientMatrix::from_upper_triangle(a);
}

QuadFormModel::QuadFormModel(CoefficientMatrix m, std::vector<DistributionSpec> d, bool standardize_)
    : matrix(std::move(m)), dists(std::move(d)), sigma2(matrix.sigma2()), standardize(standardize_) {
  if (static_cast<Eigen::Index>(dists.size()) != matrix.n()) {
    throw Error(ErrorCode::InvalidInput, "need one law per coordinate of the quadratic form");
  }
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::InvalidInput, "degenerate quadratic form, sigma^2 = 0");
  for (const auto& dist : dists) {
    if (!dist.kernel.tau || !dist.kernel.tau_prime) {
      throw Error(ErrorCode::InvalidInput, dist.name + " carries no Stein kernel");
    }
  }
}

double quadform_value(const CoefficientMatrix& a, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(a.matrix() * x);
}

Eigen::VectorXd martingale_parts(const CoefficientMatrix& a, const Eigen::VectorXd& x) {
  return 0.5 * x.cwiseProduct(a.matrix() * x);
}

namespace {

Eigen::VectorXd kernel_values(const QuadFormModel& model, const Eigen::VectorXd& x) {
  Eigen::VectorXd tau(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) tau[k] = model.dists[k].tau(x[k]);
  return tau;
}

Eigen::VectorXd kernel_slopes(const QuadFormModel& model, const Eigen::VectorXd& x) {
  Eigen::VectorXd tau_prime(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) tau_prime[k] = model.dists[k].tau_prime(x[k]);
  return tau_prime;
}

}  // namespace

Eigen::VectorXd l_martingale_parts(const QuadFormModel& model, const Eigen::VectorXd& x) {
  return 0.5 * kernel_values(model, x).cwiseProduct(model.matrix.matrix() * x);
}

double theta(const QuadFormModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd ax = model.matrix.matrix() * x;
  return 0.5 * ax.cwiseAbs2().dot(kernel_values(model, x));
}

Eigen::VectorXd theta_gradient(const QuadFormModel& model, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd& a = model.matrix.matrix();
  const Eigen::VectorXd ax = a * x;
  const Eigen::VectorXd w = ax.cwiseProduct(kernel_values(model, x));
  return a * w + 0.5 * kernel_slopes(model, x).cwiseProduct(ax.cwiseAbs2());
}

ScorePair evaluate_score_pair(const QuadFormModel& model, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd& a = model.matrix.matrix();
  const Eigen::VectorXd ax = a * x;
  const Eigen::VectorXd tau = kernel_values(model, x);
  const Eigen::VectorXd lm = 0.5 * tau.cwiseProduct(ax);
  const Eigen::VectorXd grad =
      a * ax.cwiseProduct(tau) + 0.5 * kernel_slopes(model, x).cwiseProduct(ax.cwiseAbs2());

  // Under F -> F / sigma every M_k scales by 1/sigma, so Theta by 1/sigma^2
  // and Theta_{Theta,F} by 1/sigma^3.
  const double s = model.standardize ? std::sqrt(model.sigma2) : 1.0;
  const double f = 0.5 * x.dot(ax) / s;
  const double th = 0.5 * ax.cwiseAbs2().dot(tau) / (s * s);
  if (!(std::abs(th) >= kThetaGuard)) return guarded_pair(f, th);
  const double cross = grad.dot(lm) / (s * s * s);
  return {f, f / th + cross / (th * th), th, false};
}

Eigen::VectorXd draw_inputs(const std::vector<DistributionSpec>& dists, Stream& stream) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(dists.size()));
  for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = dists[k].sample(stream);
  return x;
}

ScorePair draw_score_pair(const QuadFormModel& model, Stream& stream) {
  return evaluate_score_pair(model, draw_inputs(model.dists, stream));
}

Eigen::VectorXd gram_eigenvalues(const CoefficientMatrix& matrix) {
  const Eigen::MatrixXd& a = matrix.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.transpose() * a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

MatrixFunctionals matrix_functionals(const CoefficientMatrix& matrix) {
  const Eigen::MatrixXd& a = matrix.matrix();
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Eigen::VectorXd lambda = gram_eigenvalues(matrix);
  MatrixFunctionals out;
  out.sum_row4 = a.rowwise().squaredNorm().squaredNorm();
  out.trace4 = gram.squaredNorm();
  out.lambda_min = lambda.minCoeff();
  out.lambda_max = lambda.maxCoeff();
  const double sigma2 = matrix.sigma2();
  out.berry_factor = (std::sqrt(out.sum_row4) + std::sqrt(out.trace4)) / sigma2;
  out.structural_factor = (out.sum_row4 + out.trace4) / (sigma2 * sigma2);
  return out;
}

double gaussian_negative_moment_norm(const CoefficientMatrix& matrix, double order) {
  if (!(order > 0.0)) throw Error(ErrorCode::InvalidOrder, "order must be positive");
  const Eigen::VectorXd lambda = gram_eigenvalues(matrix);
  const double floor = 1e-12 * std::max(lambda.maxCoeff(), 0.0);
  NegMomentQuery query;
  query.alpha = order;
  int positive = 0;
  for (double l : lambda) {
    if (l <= floor) continue;
    ++positive;
    query.factors.push_back({[l](double x) { return -0.5 * std::log1p(2.0 * l * x); }, 1.0});
  }
  if (!(0.5 * positive > order)) {
    throw Error(ErrorCode::NotIntegrable,
                std::to_string(positive) + " positive eigenvalues do not make order " +
                    std::to_string(order) + " integrable");
  }
  // E[(2 Theta)^-order] for Gaussian inputs, then ||sigma^2 / Theta||_order.
  const double inner = negative_moment(query);
  return 2.0 * matrix.sigma2() * std::pow(inner, 1.0 / order);
}

double fisher_bound_factor(const QuadFormModel& model, double neg_norm8) {
  if (!(neg_norm8 >= 1.0)) {
    throw Error(ErrorCode::ContractViolation,
                "||sigma^2 / Theta||_8 is at least 1 by Jensen, got " + std::to_string(neg_norm8));
  }
  return matrix_functionals(model.matrix).structural_factor * std::pow(neg_norm8, 3);
}

}  // namespace steinfisher

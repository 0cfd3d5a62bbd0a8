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


#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "steinfisher/errors.hpp"
#include "steinfisher/quadform.hpp"
#include "steinfisher/stein_core.hpp"

using namespace steinfisher;

TEST_CASE("covariance identity with smooth bounded alpha") {
  for (const auto& dist : {gaussian(), uniform(), exponential_centered(), student_t(20)}) {
    CAPTURE(dist.name);
    const auto r = covariance_formula_check(
        dist, [](double x) { return std::tanh(x + 0.3); },
        [](double x) { return 1.0 / (std::cosh(x + 0.3) * std::cosh(x + 0.3)); }, [](double x) { return x * x; });
    CHECK(r.abs_diff <= 1e-8);
    CHECK(std::abs(r.lhs) > 1e-3);
  }
}

TEST_CASE("L applied to the identity is the Stein kernel") {
  for (const auto& dist : {gaussian(), uniform(), student_t(20)}) {
    CAPTURE(dist.name);
    for (double x : {-1.0, 0.0, 0.8}) {
      CHECK(l_operator(dist, [](double y) { return y; }, x) == doctest::Approx(dist.tau(x)).epsilon(1e-9));
    }
  }
  // L(y^2 - 1) for the Gaussian is x.
  CHECK(l_operator(gaussian(), [](double y) { return y * y - 1.0; }, 0.7) == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("L operator contract") {
  try {
    l_operator(gaussian(), [](double y) { return y * y; }, 0.0);
    FAIL("uncentered integrand accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
  try {
    l_operator(gaussian(), [](double y) { return y; }, 40.0);
    FAIL("underflowing density accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DensityUnderflow);
  }
}

TEST_CASE("decomposition diagnostics for a quadratic form") {
  const auto a = banded_matrix(5, 2);
  const std::vector<DistributionSpec> dists(5, uniform());
  std::vector<VectorFn> parts;
  for (Eigen::Index k = 0; k < 5; ++k) {
    parts.push_back([a, k](const Eigen::VectorXd& x) { return 0.5 * x[k] * (a.matrix().row(k).dot(x)); });
  }
  const VectorFn f = [a](const Eigen::VectorXd& x) { return quadform_value(a, x); };
  const auto r = decomposition_check(f, parts, dists, 20000, 9);
  CHECK(r.max_sum_defect <= 1e-12);
  CHECK(std::abs(r.mean_estimate) <= 1e-12);
  for (std::size_t k = 0; k < 5; ++k) CHECK(r.conditional_mean[k] <= 4.0 * r.conditional_mean_se[k] + 1e-12);

  // A part with nonzero conditional mean is caught.
  auto broken = parts;
  broken[0] = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
  const auto bad = decomposition_check(f, broken, dists, 20000, 9);
  CHECK(bad.conditional_mean[0] > 10.0 * bad.conditional_mean_se[0]);

  CHECK_THROWS_AS(decomposition_check(f, std::vector<VectorFn>(2), dists, 10, 1), Error);
}

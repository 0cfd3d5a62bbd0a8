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
#include <limits>
#include <numbers>

#include "steinfisher/errors.hpp"
#include "steinfisher/quadrature.hpp"

using namespace steinfisher;

TEST_CASE("kronrod rule integrates polynomials up to degree 31 exactly") {
  for (int degree = 0; degree <= 31; ++degree) {
    auto monomial = [degree](double x) { return std::pow(x, degree); };
    const auto r = detail::gauss_kronrod21(monomial, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0 / (degree + 1)).epsilon(1e-14));
  }
}

TEST_CASE("improper integrals") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(quad([](double x) { return std::exp(-x); }, 0.0, inf) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quad([](double x) { return 1.0 / (1.0 + x * x); }, -inf, inf) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(quad([](double x) { return std::exp(x); }, -inf, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quad([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("reports failure instead of returning garbage") {
  QuadratureOptions opts;
  opts.max_intervals = 5;
  const auto wild = [](double x) { return std::sin(1.0 / x) / x; };
  CHECK_THROWS_AS(quad(wild, 1e-6, 1.0, opts), QuadratureFailure);
  opts.throw_on_failure = false;
  const auto r = integrate(wild, 1e-6, 1.0, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.error > opts.abs_tol);
}

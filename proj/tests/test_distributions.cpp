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
#include <numbers>

#include "oracle.hpp"
#include "steinfisher/distributions.hpp"
#include "steinfisher/errors.hpp"

using namespace steinfisher;

namespace {

struct Reference {
  DistributionSpec dist;
  oracle::Fn density;  // written independently of the catalog
  double lo, hi;
};

std::vector<Reference> references() {
  const double r3 = std::sqrt(3.0);
  return {
      {gaussian(), oracle::phi, -12.0, 12.0},
      {uniform(), [r3](double x) { return std::abs(x) <= r3 ? 1.0 / (2.0 * r3) : 0.0; }, -r3, r3},
      {exponential_centered(), [](double x) { return x >= -1.0 ? std::exp(-x - 1.0) : 0.0; }, -1.0, 45.0},
      {student_t(20), [](double x) { return oracle::student_t_density(x, 20); }, -60.0, 60.0},
  };
}

}  // namespace

TEST_CASE("closed-form kernels match the defining integral") {
  for (const auto& ref : references()) {
    CAPTURE(ref.dist.name);
    for (double x : {-2.0, -1.0, -0.5, 0.0, 0.3, 1.0, 1.5, 2.5}) {
      if (x <= ref.lo || x >= ref.hi) continue;
      CAPTURE(x);
      const double expected = oracle::stein_kernel(ref.density, ref.lo, ref.hi, x);
      CHECK(ref.dist.tau(x) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("kernels have unit mean and derivative tau'") {
  for (const auto& ref : references()) {
    CAPTURE(ref.dist.name);
    const double mean =
        oracle::gauss_legendre([&](double y) { return ref.dist.tau(y) * ref.density(y); }, ref.lo, ref.hi);
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-10));
    for (double x : {-1.2, 0.0, 0.7}) {
      const double fd = oracle::central_difference(ref.dist.kernel.tau, x);
      CHECK(ref.dist.tau_prime(x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("densities, cdfs and score agree with the reference laws") {
  for (const auto& ref : references()) {
    CAPTURE(ref.dist.name);
    for (double x : {-1.5, -0.2, 0.4, 1.1}) {
      if (x <= ref.lo) continue;
      CHECK(ref.dist.density(x) == doctest::Approx(ref.density(x)).epsilon(1e-12));
      const double cdf = oracle::gauss_legendre(ref.density, ref.lo, x, 4000);
      CHECK(ref.dist.cdf(x) == doctest::Approx(cdf).epsilon(1e-9));
      if (ref.dist.name != "uniform") {
        const double score = oracle::central_difference(
            [&](double y) { return std::log(ref.density(y)); }, x);
        CHECK(ref.dist.log_density_derivative(x) == doctest::Approx(score).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("pearson coefficients reproduce score and kernel") {
  for (const auto& ref : references()) {
    CAPTURE(ref.dist.name);
    REQUIRE(ref.dist.pearson);
    const auto& pc = *ref.dist.pearson;
    CHECK(pc.m == doctest::Approx(2.0 * pc.a1 + 1.0));
    CHECK(pc.k == doctest::Approx(pc.a2));
    for (double x : {-0.5, 0.25, 1.0}) {
      CHECK(pc.kernel(x) == doctest::Approx(ref.dist.tau(x)));
      CHECK(pc.score(x) == doctest::Approx(ref.dist.log_density_derivative(x)));
    }
  }
}

TEST_CASE("eighth moments") {
  for (const auto& ref : references()) {
    CAPTURE(ref.dist.name);
    REQUIRE(ref.dist.moment8.finite);
    const double m8 = oracle::gauss_legendre(
        [&](double y) { return std::pow(y, 8) * ref.density(y); }, ref.lo, ref.hi, 20000);
    CHECK(ref.dist.moment8.value == doctest::Approx(m8).epsilon(1e-6));
  }
}

TEST_CASE("samplers are standardized") {
  for (const auto& ref : references()) {
    CAPTURE(ref.dist.name);
    Stream s(11);
    const int n = 200000;
    double m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = ref.dist.sample(s);
      m1 += x;
      m2 += x * x;
    }
    CHECK(std::abs(m1 / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(m2 / n - 1.0) < 0.03);
  }
}

TEST_CASE("catalog lookup") {
  CHECK(catalog_get("uniform").name == "uniform");
  CHECK(catalog_get("student_t(20)").name == "student_t(20)");
  CHECK(catalog_get("student_t:30").name == "student_t(30)");
  CHECK_THROWS_AS(catalog_get("cauchy"), Error);
  try {
    catalog_get("laplace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInCatalog);
  }
  try {
    student_t(16);
    FAIL("dof 16 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MomentConditionViolated);
  }
  CHECK_FALSE(gaussian().kernel.tau_prime_bound.has_value());
  CHECK(*uniform().kernel.tau_prime_bound == doctest::Approx(std::sqrt(3.0)));
  CHECK(*exponential_centered().kernel.tau_prime_bound == 1.0);
}

TEST_CASE("kernel of a transformed law") {
  // Y Gaussian, f(y) = y + y^3 is increasing and centered.
  const auto f = [](double y) { return y + y * y * y; };
  const auto fp = [](double y) { return 1.0 + 3.0 * y * y; };
  const auto finv = [f](double x) {
    double lo = -20, hi = 20;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const SteinKernelForm k = kernel_of_transformed(gaussian(), f, finv, fp);
  CHECK(k.variant == KernelVariant::numeric);
  for (double y : {-1.0, 0.0, 0.5}) {
    // For the pushforward law: tau_f(f(y)) = f'(y) int_y^inf f phi / phi(y).
    const double tail = oracle::gauss_legendre([&](double t) { return f(t) * oracle::phi(t); }, y, 12.0);
    CHECK(k.tau(f(y)) == doctest::Approx(fp(y) * tail / oracle::phi(y)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(kernel_of_transformed(gaussian(), [](double y) { return y + 1.0; },
                                        [](double x) { return x - 1.0; }, [](double) { return 1.0; }),
                  Error);
}

TEST_CASE("quantile inverts the cdf") {
  const auto d = student_t(20);
  for (double p : {0.01, 0.3, 0.5, 0.9}) CHECK(d.cdf(quantile(d, p)) == doctest::Approx(p).epsilon(1e-10));
}

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
#include <vector>

#include "steinfisher/distances.hpp"
#include "steinfisher/distributions.hpp"
#include "steinfisher/errors.hpp"

using namespace steinfisher;

TEST_CASE("conversion ladder") {
  const DistanceReport zero = convert(0.0);
  CHECK(zero.uniform_density == 0.0);
  CHECK(zero.kl == 0.0);
  CHECK(zero.wasserstein2 == 0.0);
  CHECK(zero.total_variation == 0.0);

  const DistanceReport r = convert(0.02);
  CHECK(std::abs(r.kl - 0.01) <= 1e-12);
  CHECK(std::abs(r.total_variation - 0.141421) <= 1e-6);
  CHECK(std::abs(r.wasserstein2 - 0.02) <= 1e-12);
  CHECK(std::abs(r.uniform_density - 0.3368624) <= 1e-6);
  CHECK_FALSE(r.total_variation_above_cap());

  const DistanceReport big = convert(2.0);
  CHECK(big.kl == 1.0);
  CHECK(big.total_variation == doctest::Approx(std::sqrt(2.0)));
  CHECK(big.total_variation_above_cap());
  CHECK(big.kolmogorov_above_cap());

  CHECK_THROWS_AS(convert(-0.1), Error);
}

TEST_CASE("conversion is monotone and chained") {
  double previous_tv = -1;
  for (int i = 0; i <= 100; ++i) {
    const DistanceReport r = convert(i * 0.05);
    CHECK(r.kl <= r.fisher / 2.0);
    CHECK(r.total_variation <= std::sqrt(2.0 * r.kl) + 1e-15);
    CHECK(r.wasserstein2 <= 2.0 * r.kl + 1e-15);
    CHECK(r.total_variation >= previous_tv);
    previous_tv = r.total_variation;
  }
}

TEST_CASE("empirical kolmogorov distance") {
  Stream s(10);
  std::vector<double> z(100000);
  for (auto& v : z) v = s.normal();
  CHECK(kolmogorov_empirical(z) <= 0.01);
  CHECK(kolmogorov_empirical(std::vector<double>(10000, 0.0)) == 0.5);
  CHECK_THROWS_AS(kolmogorov_empirical(std::vector<double>(9999, 0.0)), Error);
}

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

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "oracle.hpp"
#include "steinfisher/errors.hpp"
#include "steinfisher/estimate.hpp"
#include "steinfisher/quadform.hpp"
#include "steinfisher/samplemean.hpp"

using namespace steinfisher;

namespace {

std::vector<ScorePair> sum_pairs(const DistributionSpec& dist, int n, std::size_t reps, std::uint64_t seed,
                                 std::uint64_t tag = kEvalTag) {
  const auto model = make_sample_mean_model(identity_link(), std::vector<DistributionSpec>(n, dist), 0, seed);
  const PairSource source = [&model](Stream& s) { return draw_score_pair_sm(model, s); };
  return draw_pairs(source, {seed, tag, static_cast<std::uint64_t>(n), reps});
}

}  // namespace

TEST_CASE("upper estimator") {
  const auto g = sum_pairs(gaussian(), 8, 5000, 1);
  const UpperEstimate zero = fisher_distance_upper(g);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.standard_error == 0.0);
  CHECK(zero.guarded_fraction == 0.0);

  std::vector<ScorePair> constant_h = g;
  for (auto& p : constant_h) p.h_value = 0.0;
  const UpperEstimate one = fisher_distance_upper(constant_h);
  CHECK(std::abs(one.estimate - 1.0) <= 4.0 * one.standard_error);

  std::vector<ScorePair> few(g.begin(), g.begin() + 999);
  try {
    fisher_distance_upper(few);
    FAIL("999 pairs accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientData);
  }
  std::vector<ScorePair> guarded = g;
  for (std::size_t i = 0; i < 60; ++i) guarded[i] = guarded_pair(guarded[i].f_value, 0.0);
  CHECK_THROWS_AS(fisher_distance_upper(guarded), GuardDominated);
  guarded.resize(5000);
  for (std::size_t i = 50; i < 60; ++i) guarded[i] = g[i];
  const UpperEstimate ok = fisher_distance_upper(guarded);
  CHECK(ok.guarded_fraction == doctest::Approx(0.01));
  CHECK(ok.used == 4950);
}

TEST_CASE("binned score for gaussian sums") {
  const auto fit = sum_pairs(gaussian(), 4, 100000, 2, kFitTag);
  const BinnedScore score = fit_score(fit);
  CHECK(score.bins() == 64);
  CHECK(score.bin_edges.size() == 65);
  for (std::size_t j = 1; j < score.bin_edges.size(); ++j) CHECK(score.bin_edges[j] > score.bin_edges[j - 1]);
  for (std::size_t j = 8; j < 56; ++j) {
    CHECK(std::abs(score.bin_means[j] + score.bin_centers[j]) <= 0.05);
  }
  const auto eval = sum_pairs(gaussian(), 4, 100000, 2);
  CHECK(fisher_distance_plugin(eval, score).estimate <= 0.01);
}

TEST_CASE("binned score recovers known scores at n = 1") {
  for (const auto& dist : {uniform(), student_t(20)}) {
    CAPTURE(dist.name);
    const auto pairs = sum_pairs(dist, 1, 100000, 3);
    const BinnedScore score = fit_score(pairs);
    const double lo = quantile(dist, 0.05), hi = quantile(dist, 0.95);
    for (std::size_t j = 0; j < score.bins(); ++j) {
      const double c = score.bin_centers[j];
      if (c < lo || c > hi) continue;
      const double truth = dist.name == "uniform"
                               ? 0.0
                               : oracle::central_difference(
                                     [](double y) { return std::log(oracle::student_t_density(y, 20)); }, c);
      CHECK(std::abs(score.bin_means[j] - truth) <= 0.1);
    }
  }
}

TEST_CASE("bins merge and respect ties") {
  std::vector<ScorePair> pairs;
  for (int i = 0; i < 12000; ++i) pairs.push_back({static_cast<double>(i % 3), 1.0, 1.0, false});
  const BinnedScore s = fit_score(pairs, {64, 50});
  CHECK(s.bins() == 3);
  CHECK(s.bin_counts == std::vector<std::size_t>{4000, 4000, 4000});
  CHECK(s.bin_edges[1] == 0.5);

  std::vector<ScorePair> skewed;
  for (int i = 0; i < 10000; ++i) skewed.push_back({i < 9990 ? 0.0 : 1.0 + i, -1.0, 1.0, false});
  const BinnedScore m = fit_score(skewed, {8, 50});
  CHECK(*std::min_element(m.bin_counts.begin(), m.bin_counts.end()) >= 50);

  CHECK_THROWS_AS(fit_score(std::vector<ScorePair>(9999)), Error);
}

TEST_CASE("density representation") {
  std::vector<double> grid;
  for (int i = -30; i <= 30; ++i) grid.push_back(i * 0.1);
  const auto g = sum_pairs(gaussian(), 4, 100000, 4);
  const DensityEstimate d = density_representation(g, grid);
  double worst = 0, trap = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(d.stein[i] - oracle::phi(grid[i])));
    if (i > 0) trap += 0.05 * (d.stein[i] + d.stein[i - 1]);
    const double bar = 3.0 * std::max(d.stein_se[i], d.histogram_se[i]);
    CHECK(std::abs(d.stein[i] - d.histogram[i]) <= bar + 0.01);
  }
  CHECK(worst <= 0.02);
  CHECK(std::abs(trap - (oracle::Phi(3.0) - oracle::Phi(-3.0))) <= 0.02);

  std::vector<double> inner;
  for (int i = -15; i <= 15; ++i) inner.push_back(i * 0.1);
  const DensityEstimate t = density_representation(sum_pairs(student_t(20), 1, 100000, 5), inner);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    CHECK(std::abs(t.stein[i] - oracle::student_t_density(inner[i], 20)) <= 0.05);
  }
  // A single uniform input has H = 0 on every draw: its kernel vanishes at the
  // edges of the support and the density jumps there, so the representation
  // cannot reproduce it. The histogram still does.
  const DensityEstimate u = density_representation(sum_pairs(uniform(), 1, 100000, 5), inner);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    CHECK(std::abs(u.stein[i]) <= 1e-12);
    CHECK(std::abs(u.histogram[i] - 0.5 / std::sqrt(3.0)) <= 0.05);
  }
}

TEST_CASE("rate fit") {
  const std::vector<double> n{8, 16, 32, 64, 128};
  std::vector<double> inv, root;
  for (double v : n) {
    inv.push_back(3.0 / v);
    root.push_back(2.0 / std::sqrt(v));
  }
  const RateFit a = fit_rate(n, inv);
  CHECK(a.slope == doctest::Approx(-1.0));
  CHECK(a.r_squared == doctest::Approx(1.0));
  CHECK(a.intercept == doctest::Approx(std::log(3.0)));
  CHECK(fit_rate(n, root).slope == doctest::Approx(-0.5));
  std::vector<double> bad = inv;
  bad[2] = 0.0;
  CHECK_THROWS_AS(fit_rate(n, bad), Error);
  CHECK_THROWS_AS(fit_rate(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("sampling is deterministic and independent of the thread count") {
  const auto model = make_sample_mean_model(identity_link(), std::vector<DistributionSpec>(5, uniform()), 0, 0);
  const PairSource source = [&model](Stream& s) { return draw_score_pair_sm(model, s); };
  SamplingPlan plan{99, kEvalTag, 5, 30000, 1000, 1};
  const auto one = draw_pairs(source, plan);
  plan.threads = 3;
  const auto three = draw_pairs(source, plan);
  REQUIRE(one.size() == three.size());
  bool same = true;
  for (std::size_t i = 0; i < one.size(); ++i) {
    same = same && one[i].f_value == three[i].f_value && one[i].h_value == three[i].h_value;
  }
  CHECK(same);
  CHECK(fisher_distance_upper(one).estimate == fisher_distance_upper(three).estimate);
}

TEST_CASE("fit and evaluation draws never share a substream") {
  std::mutex mu;
  std::set<std::uint64_t> fit_ids, eval_ids;
  std::set<std::uint64_t>* current = nullptr;
  const PairSource source = [&](Stream& s) {
    std::lock_guard<std::mutex> lock(mu);
    current->insert(s.substream());
    return ScorePair{s.normal(), 0.0, 1.0, false};
  };
  const SamplingPlan plan{5, kEvalTag, 16, 50000, 4096, 2};
  current = &eval_ids;
  draw_pairs(source, plan);
  current = &fit_ids;
  draw_pairs(source, fit_plan(plan));
  CHECK(eval_ids.size() == 13);
  CHECK(fit_ids.size() == 13);
  for (auto id : fit_ids) CHECK(eval_ids.count(id) == 0);
}

TEST_CASE("worker exceptions reach the caller") {
  const PairSource source = [](Stream&) -> ScorePair { throw Error(ErrorCode::InvalidInput, "boom"); };
  CHECK_THROWS_AS(draw_pairs(source, {1, kEvalTag, 1, 20000, 1000, 3}), Error);
}

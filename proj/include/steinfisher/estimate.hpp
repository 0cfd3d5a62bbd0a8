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
#include <span>
#include <vector>

#include "steinfisher/random.hpp"

namespace steinfisher {

/// One Monte Carlo draw of a statistic F together with the integrand H whose
/// conditional mean given F is minus the score of F. `aux` carries the
/// normalizer (Theta or nabla). Guarded draws have a NaN h_value.
struct ScorePair {
  double f_value = 0.0;
  double h_value = 0.0;
  double aux = 0.0;
  bool guarded = false;
};

ScorePair guarded_pair(double f_value, double aux);

// ---------------------------------------------------------------------------
// Estimators

struct UpperEstimate {
  double estimate;
  double standard_error;
  double guarded_fraction;
  std::size_t used;
};

/// Sample mean of (h - f)^2 over unguarded pairs, an upper estimate of the
/// Fisher information distance to N(0, 1). Needs at least 1000 unguarded pairs;
/// throws GuardDominated when more than 1% of the draws were guarded.
UpperEstimate fisher_distance_upper(std::span<const ScorePair> pairs);

struct BinConfig {
  int bins = 64;
  std::size_t min_count = 50;
};

/// Piecewise-constant score estimate: rho(x) = -mean(h) over the equal-mass
/// bin of f containing x.
struct BinnedScore {
  std::vector<double> bin_edges;   ///< bins + 1 entries; the outer two are -inf and +inf
  std::vector<double> bin_means;   ///< mean of -h per bin
  std::vector<double> bin_centers; ///< mean of f per bin
  std::vector<std::size_t> bin_counts;
  std::size_t min_count = 0;

  std::size_t bins() const { return bin_means.size(); }
  std::size_t bin_of(double x) const;
  double operator()(double x) const { return bin_means[bin_of(x)]; }
};

BinnedScore fit_score(std::span<const ScorePair> pairs, const BinConfig& config = {});

struct PluginEstimate {
  double estimate;
  double standard_error;
  std::size_t used;
};

/// mean (rho(f) + f)^2 over pairs that were not used to fit `score`.
PluginEstimate fisher_distance_plugin(std::span<const ScorePair> pairs, const BinnedScore& score);

struct DensityEstimate {
  std::vector<double> x;
  std::vector<double> stein;        ///< mean of 1{f > x} h
  std::vector<double> stein_se;
  std::vector<double> histogram;    ///< cell counts around each grid point
  std::vector<double> histogram_se;
};

DensityEstimate density_representation(std::span<const ScorePair> pairs,
                                       std::span<const double> x_grid);

struct RateFit {
  std::vector<double> n_values;
  std::vector<double> error_values;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log(error) on log(n).
RateFit fit_rate(std::span<const double> n_values, std::span<const double> error_values);

// ---------------------------------------------------------------------------
// Sampling pipeline

using PairSource = std::function<ScorePair(Stream&)>;

/// Draws are split into fixed-size shards; shard s of (seed, tag, n) reads the
/// substream hashed from that tuple, so results do not depend on thread count.
struct SamplingPlan {
  std::uint64_t seed = 0;
  std::uint64_t tag = 0;
  std::uint64_t n = 0;
  std::size_t reps = 0;
  std::size_t shard_size = 8192;
  int threads = 0;  ///< 0 picks default_thread_count()
};

inline constexpr std::uint64_t kEvalTag = 1;
inline constexpr std::uint64_t kFitTag = 2;
inline constexpr std::uint64_t kPrePassTag = 3;

/// Reads STEIN_FISHER_THREADS, falling back to the hardware concurrency.
int default_thread_count();

std::uint64_t shard_substream(const SamplingPlan& plan, std::size_t shard);

std::vector<ScorePair> draw_pairs(const PairSource& source, const SamplingPlan& plan);

/// Same plan with the fit tag, for the half that trains the binned score.
SamplingPlan fit_plan(SamplingPlan plan);

/// Generic sharded sampler used by draw_pairs and by non-ScorePair experiments.
template <class T>
std::vector<T> draw_sharded(const std::function<T(Stream&)>& source, const SamplingPlan& plan);

}  // namespace steinfisher

#include "steinfisher/detail/sharded.hpp"

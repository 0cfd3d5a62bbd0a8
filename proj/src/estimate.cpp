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


#include "steinfisher/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "steinfisher/errors.hpp"

namespace steinfisher {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ScorePair> unguarded(std::span<const ScorePair> pairs) {
  std::vector<ScorePair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (!p.guarded) out.push_back(p);
  }
  return out;
}

struct MeanSe {
  double mean;
  double se;
};

// Two-pass mean and standard error; summation order follows the input so
// identical inputs give identical bits.
MeanSe mean_and_se(const std::vector<double>& v) {
  const double count = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / count;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = v.size() > 1 ? ss / (count - 1.0) : 0.0;
  return {mean, std::sqrt(var / count)};
}

}  // namespace

ScorePair guarded_pair(double f_value, double aux) {
  return {f_value, std::numeric_limits<double>::quiet_NaN(), aux, true};
}

UpperEstimate fisher_distance_upper(std::span<const ScorePair> pairs) {
  std::vector<double> sq;
  sq.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.guarded) continue;
    const double d = p.h_value - p.f_value;
    sq.push_back(d * d);
  }
  if (sq.size() < 1000) {
    throw Error(ErrorCode::InsufficientData,
                "need at least 1000 unguarded pairs, got " + std::to_string(sq.size()));
  }
  const auto [mean, se] = mean_and_se(sq);
  const double fraction =
      static_cast<double>(pairs.size() - sq.size()) / static_cast<double>(pairs.size());
  if (fraction > 0.01) throw GuardDominated(fraction, mean);
  return {mean, se, fraction, sq.size()};
}

std::size_t BinnedScore::bin_of(double x) const {
  // bin_edges[0] = -inf, bin_edges.back() = +inf; bins are [e_j, e_{j+1}).
  const auto it = std::upper_bound(bin_edges.begin() + 1, bin_edges.end() - 1, x);
  return static_cast<std::size_t>(it - (bin_edges.begin() + 1));
}

BinnedScore fit_score(std::span<const ScorePair> pairs, const BinConfig& config) {
  std::vector<ScorePair> data = unguarded(pairs);
  if (data.size() < 10000) {
    throw Error(ErrorCode::InsufficientData,
                "score fit needs at least 10000 unguarded pairs, got " + std::to_string(data.size()));
  }
  if (config.bins < 1) throw Error(ErrorCode::InvalidInput, "bins must be positive");
  std::stable_sort(data.begin(), data.end(),
                   [](const ScorePair& a, const ScorePair& b) { return a.f_value < b.f_value; });
  const std::size_t total = data.size();

  // Cut points at equal mass, pushed forward past ties so that every edge lies
  // strictly between two distinct f values.
  std::vector<std::size_t> cuts{0};
  for (int j = 1; j < config.bins; ++j) {
    std::size_t idx = total * static_cast<std::size_t>(j) / static_cast<std::size_t>(config.bins);
    idx = std::max(idx, cuts.back() + 1);
    while (idx < total && data[idx].f_value == data[idx - 1].f_value) ++idx;
    if (idx >= total) break;
    cuts.push_back(idx);
  }
  cuts.push_back(total);

  // Merge underfull bins into their smaller neighbour.
  auto count = [&](std::size_t b) { return cuts[b + 1] - cuts[b]; };
  for (;;) {
    const std::size_t nb = cuts.size() - 1;
    if (nb <= 1) break;
    std::size_t worst = nb;
    for (std::size_t b = 0; b < nb; ++b) {
      if (count(b) < config.min_count && (worst == nb || count(b) < count(worst))) worst = b;
    }
    if (worst == nb) break;
    std::size_t drop;  // index into cuts of the boundary to remove
    if (worst == 0) {
      drop = 1;
    } else if (worst == nb - 1) {
      drop = worst;
    } else {
      drop = count(worst - 1) <= count(worst + 1) ? worst : worst + 1;
    }
    cuts.erase(cuts.begin() + static_cast<std::ptrdiff_t>(drop));
  }

  BinnedScore score;
  score.min_count = config.min_count;
  const std::size_t nb = cuts.size() - 1;
  score.bin_edges.push_back(-kInf);
  for (std::size_t b = 1; b < nb; ++b) {
    const std::size_t i = cuts[b];
    score.bin_edges.push_back(0.5 * (data[i - 1].f_value + data[i].f_value));
  }
  score.bin_edges.push_back(kInf);
  for (std::size_t b = 0; b < nb; ++b) {
    double sum_h = 0.0;
    double sum_f = 0.0;
    for (std::size_t i = cuts[b]; i < cuts[b + 1]; ++i) {
      sum_h += data[i].h_value;
      sum_f += data[i].f_value;
    }
    const double c = static_cast<double>(count(b));
    score.bin_means.push_back(-sum_h / c);
    score.bin_centers.push_back(sum_f / c);
    score.bin_counts.push_back(count(b));
  }
  return score;
}

PluginEstimate fisher_distance_plugin(std::span<const ScorePair> pairs, const BinnedScore& score) {
  std::vector<double> sq;
  sq.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.guarded) continue;
    const double d = score(p.f_value) + p.f_value;
    sq.push_back(d * d);
  }
  if (sq.size() < 1000) {
    throw Error(ErrorCode::InsufficientData,
                "need at least 1000 unguarded pairs, got " + std::to_string(sq.size()));
  }
  const auto [mean, se] = mean_and_se(sq);
  return {mean, se, sq.size()};
}

DensityEstimate density_representation(std::span<const ScorePair> pairs,
                                       std::span<const double> x_grid) {
  std::vector<ScorePair> data = unguarded(pairs);
  if (data.size() < 10000) {
    throw Error(ErrorCode::InsufficientData,
                "density estimate needs at least 10000 unguarded pairs, got " +
                    std::to_string(data.size()));
  }
  std::stable_sort(data.begin(), data.end(),
                   [](const ScorePair& a, const ScorePair& b) { return a.f_value < b.f_value; });
  const std::size_t total = data.size();
  const double count = static_cast<double>(total);

  // suffix[i] = sum of h over data[i..]
  std::vector<double> suffix(total + 1, 0.0);
  std::vector<double> suffix_sq(total + 1, 0.0);
  for (std::size_t i = total; i-- > 0;) {
    suffix[i] = suffix[i + 1] + data[i].h_value;
    suffix_sq[i] = suffix_sq[i + 1] + data[i].h_value * data[i].h_value;
  }
  auto first_above = [&](double x) {
    return static_cast<std::size_t>(
        std::upper_bound(data.begin(), data.end(), x,
                         [](double v, const ScorePair& p) { return v < p.f_value; }) -
        data.begin());
  };

  DensityEstimate est;
  const std::size_t m = x_grid.size();
  for (std::size_t j = 0; j < m; ++j) {
    const double x = x_grid[j];
    const std::size_t i = first_above(x);
    const double mean = suffix[i] / count;
    const double second = suffix_sq[i] / count;
    est.x.push_back(x);
    est.stein.push_back(mean);
    est.stein_se.push_back(std::sqrt(std::max(0.0, second - mean * mean) / count));

    const double left = j > 0 ? 0.5 * (x_grid[j - 1] + x) : (m > 1 ? x - 0.5 * (x_grid[1] - x) : x - 0.5);
    const double right =
        j + 1 < m ? 0.5 * (x + x_grid[j + 1]) : (m > 1 ? x + 0.5 * (x - x_grid[j - 1]) : x + 0.5);
    const double width = right - left;
    const double in_cell = static_cast<double>(first_above(right) - first_above(left));
    const double prob = in_cell / count;
    est.histogram.push_back(prob / width);
    est.histogram_se.push_back(std::sqrt(prob * (1.0 - prob) / count) / width);
  }
  return est;
}

RateFit fit_rate(std::span<const double> n_values, std::span<const double> error_values) {
  if (n_values.size() != error_values.size() || n_values.size() < 4) {
    throw Error(ErrorCode::InvalidInput, "rate fit needs at least 4 (n, error) points");
  }
  RateFit fit;
  fit.n_values.assign(n_values.begin(), n_values.end());
  fit.error_values.assign(error_values.begin(), error_values.end());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (!(error_values[i] > 0.0) || !(n_values[i] > 0.0)) {
      throw Error(ErrorCode::InvalidInput, "rate fit needs positive n and error values");
    }
    lx.push_back(std::log(n_values[i]));
    ly.push_back(std::log(error_values[i]));
  }
  const double k = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidInput, "rate fit needs distinct n values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

int default_thread_count() {
  if (const char* env = std::getenv("STEIN_FISHER_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::uint64_t shard_substream(const SamplingPlan& plan, std::size_t shard) {
  return substream_id({plan.tag, plan.n, static_cast<std::uint64_t>(shard)});
}

std::vector<ScorePair> draw_pairs(const PairSource& source, const SamplingPlan& plan) {
  return draw_sharded<ScorePair>(source, plan);
}

SamplingPlan fit_plan(SamplingPlan plan) {
  plan.tag = kFitTag;
  return plan;
}

}  // namespace steinfisher

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


#include "steinfisher/samplemean.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "steinfisher/errors.hpp"
#include "steinfisher/quadform.hpp"

namespace steinfisher {

SmoothLink identity_link() {
  return {"identity", [](double x) { return x; }, [](double) { return 1.0; },
          [](double) { return 0.0; }, 1.0, 1.0, 0.0};
}

SmoothLink sin_link() {
  return {"sin", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
          [](double x) { return -std::sin(x); }, 1.0, 1.0, 1.0};
}

SmoothLink tanh_link() {
  auto sech2 = [](double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
  };
  return {"tanh", [](double x) { return std::tanh(x); }, sech2,
          [sech2](double x) { return -2.0 * std::tanh(x) * sech2(x); }, 1.0, 1.0,
          4.0 / (3.0 * std::sqrt(3.0))};
}

SmoothLink affine_sin_link(double a, double b) {
  if (a + b == 0.0) throw Error(ErrorCode::InvalidInput, "affine_sin link needs a + b != 0");
  char buf[96];
  std::snprintf(buf, sizeof buf, "affine_sin(%g,%g)", a, b);
  return {buf, [a, b](double x) { return a * x + b * std::sin(x); },
          [a, b](double x) { return a + b * std::cos(x); },
          [b](double x) { return -b * std::sin(x); }, a + b, std::abs(a) + std::abs(b), std::abs(b)};
}

SmoothLink link_from_name(std::string_view name) {
  if (name == "identity") return identity_link();
  if (name == "sin") return sin_link();
  if (name == "tanh") return tanh_link();
  constexpr std::string_view prefix = "affine_sin(";
  if (name.substr(0, prefix.size()) == prefix && name.back() == ')') {
    std::string_view args = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    const auto comma = args.find(',');
    double a = 0.0, b = 0.0;
    if (comma != std::string_view::npos) {
      const auto first = args.substr(0, comma);
      const auto second = args.substr(comma + 1);
      const auto ra = std::from_chars(first.data(), first.data() + first.size(), a);
      const auto rb = std::from_chars(second.data(), second.data() + second.size(), b);
      if (ra.ec == std::errc() && ra.ptr == first.data() + first.size() && rb.ec == std::errc() &&
          rb.ptr == second.data() + second.size()) {
        return affine_sin_link(a, b);
      }
    }
  }
  throw Error(ErrorCode::InvalidInput, "unknown link '" + std::string(name) + "'");
}

PrePass pre_pass(const SmoothLink& link, const std::vector<DistributionSpec>& dists, std::size_t reps,
                 std::uint64_t seed) {
  if (reps < 10000) {
    throw Error(ErrorCode::InsufficientData, "pre-pass needs at least 10000 draws");
  }
  const double n = static_cast<double>(dists.size());
  const double rootn = std::sqrt(n);
  SamplingPlan plan{seed, kPrePassTag, dists.size(), reps};
  const std::function<double(Stream&)> source = [&](Stream& s) {
    double sum = 0.0;
    for (const auto& d : dists) sum += d.sample(s);
    return rootn * link.h(sum / n);
  };
  const std::vector<double> t = draw_sharded(source, plan);

  const double count = static_cast<double>(reps);
  double mean = 0.0;
  for (double v : t) mean += v;
  mean /= count;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : t) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / (count - 1.0);
  m4 /= count;
  const double sigma = std::sqrt(var);
  // Delta method on the sample variance.
  const double var_se = std::sqrt(std::max(m4 - var * var, 0.0) / count);
  const double sigma_se = sigma > 0.0 ? var_se / (2.0 * sigma) : 0.0;
  if (!(sigma > 3.0 * sigma_se)) {
    throw Error(ErrorCode::DegenerateVariance, "pre-pass sigma " + std::to_string(sigma) +
                                                   " is within 3 SE of zero");
  }
  return {mean / rootn, sigma, sigma / std::sqrt(count) / rootn, sigma_se};
}

SampleMeanModel make_sample_mean_model(SmoothLink link, std::vector<DistributionSpec> dists,
                                       std::size_t pre_pass_reps, std::uint64_t seed) {
  if (dists.empty()) throw Error(ErrorCode::InvalidInput, "sample mean over zero coordinates");
  if (link.h_prime_at_0 == 0.0) throw Error(ErrorCode::InvalidInput, "link needs H'(0) != 0");
  SampleMeanModel model;
  if (link.linear()) {
    // H(x) = H(0) + H'(0) x, and sqrt(n) Xbar has unit variance.
    model.mu_h = link.h(0.0);
    model.sigma = std::abs(link.h_prime_at_0);
    model.exact_moments = true;
  } else {
    const PrePass p = pre_pass(link, dists, pre_pass_reps, seed);
    model.mu_h = p.mu_h;
    model.sigma = p.sigma;
    model.mu_se = p.mu_se;
    model.sigma_se = p.sigma_se;
  }
  model.link = std::move(link);
  model.dists = std::move(dists);
  return model;
}

namespace {

struct Pieces {
  double n;
  double rootn;
  double xbar;
  double tau_sum;
};

Pieces pieces(const std::vector<DistributionSpec>& dists, const Eigen::VectorXd& x) {
  double sum = 0.0;
  double tau_sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    sum += x[k];
    tau_sum += dists[k].tau(x[k]);
  }
  const double n = static_cast<double>(x.size());
  return {n, std::sqrt(n), sum / n, tau_sum};
}

struct Scale {
  const SmoothLink& link;
  double mu_h;
  double sigma;
};

double nabla_from(const Scale& m, const Pieces& p) {
  return m.link.h_prime_at_0 * m.link.h_prime(p.xbar) * (p.tau_sum / p.n) / (m.sigma * m.sigma);
}

ScorePair evaluate(const Scale& m, const std::vector<DistributionSpec>& dists,
                   const Eigen::VectorXd& x) {
  const Pieces p = pieces(dists, x);
  const double c = m.link.h_prime_at_0;
  const double sigma = m.sigma;
  const double f = p.rootn * (m.link.h(p.xbar) - m.mu_h) / sigma;
  const double nb = nabla_from(m, p);
  if (!(std::abs(nb) >= kNablaGuard)) return guarded_pair(f, nb);

  const double sum_g = c * p.rootn * p.xbar / sigma;
  const double s2 = sigma * sigma;
  const double common = c * m.link.h_second(p.xbar) * p.tau_sum / (p.n * p.n);
  const double slope = c * m.link.h_prime(p.xbar) / p.n;
  const double lg_scale = c / (sigma * p.rootn);
  double cross = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double d_nabla = (common + slope * dists[k].tau_prime(x[k])) / s2;
    cross += d_nabla * (lg_scale * dists[k].tau(x[k]));
  }
  return {f, sum_g / nb + cross / (nb * nb), nb, false};
}

Scale scale_of(const SampleMeanModel& model) { return {model.link, model.mu_h, model.sigma}; }

}  // namespace

double sample_mean_statistic(const SampleMeanModel& model, const Eigen::VectorXd& x) {
  const Pieces p = pieces(model.dists, x);
  return p.rootn * (model.link.h(p.xbar) - model.mu_h) / model.sigma;
}

double nabla(const SampleMeanModel& model, const Eigen::VectorXd& x) {
  return nabla_from(scale_of(model), pieces(model.dists, x));
}

Eigen::VectorXd nabla_gradient(const SampleMeanModel& model, const Eigen::VectorXd& x) {
  const Pieces p = pieces(model.dists, x);
  const double c = model.link.h_prime_at_0;
  const double s2 = model.sigma * model.sigma;
  const double common = c * model.link.h_second(p.xbar) * p.tau_sum / (p.n * p.n);
  const double slope = c * model.link.h_prime(p.xbar) / p.n;
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    g[k] = (common + slope * model.dists[k].tau_prime(x[k])) / s2;
  }
  return g;
}

ScorePair evaluate_score_pair_sm(const SampleMeanModel& model, const Eigen::VectorXd& x) {
  return evaluate(scale_of(model), model.dists, x);
}

ScorePair draw_score_pair_sm(const SampleMeanModel& model, Stream& stream) {
  return evaluate(scale_of(model), model.dists, draw_inputs(model.dists, stream));
}

LinearScoreDraw linear_sum_score(const std::vector<DistributionSpec>& dists, Stream& stream) {
  static const SmoothLink identity = identity_link();
  const Eigen::VectorXd x = draw_inputs(dists, stream);
  const ScorePair pair = evaluate({identity, 0.0, 1.0}, dists, x);
  double classic = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) classic += dists[k].log_density_derivative(x[k]);
  classic /= std::sqrt(static_cast<double>(x.size()));
  return {pair.f_value, pair.h_value, classic, pair.guarded};
}

}  // namespace steinfisher

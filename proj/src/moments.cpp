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


#include "steinfisher/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "steinfisher/errors.hpp"

namespace steinfisher {

namespace {

constexpr double kProbeNear = 1e3;
constexpr double kProbeFar = 1e6;

double log_product(const std::vector<MgfFactor>& factors, double x) {
  double sum = 0.0;
  for (const auto& f : factors) sum += f.multiplicity * f.log_mgf(x);
  return sum;
}

// Abscissa where the product falls to 1/e; sets the integration scale.
double e_fold_point(const std::vector<MgfFactor>& factors) {
  double hi = 1.0;
  while (log_product(factors, hi) > -1.0 && hi < 1e300) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (log_product(factors, mid) > -1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

double decay_exponent(const std::vector<MgfFactor>& factors) {
  const double near = log_product(factors, kProbeNear);
  const double far = log_product(factors, kProbeFar);
  if (!std::isfinite(far) || far < -700.0) return std::numeric_limits<double>::infinity();
  return -(far - near) / std::log(kProbeFar / kProbeNear);
}

double negative_moment(const NegMomentQuery& query) {
  if (!(query.alpha > 0.0)) throw Error(ErrorCode::InvalidOrder, "alpha must be positive");
  if (query.factors.empty()) {
    throw Error(ErrorCode::NotIntegrable, "an empty product is not integrable");
  }
  const double decay = decay_exponent(query.factors);
  if (!(decay > query.alpha)) {
    throw Error(ErrorCode::NotIntegrable, "Laplace transform decays like x^-" + std::to_string(decay) +
                                              ", not faster than x^-" +
                                              std::to_string(query.alpha));
  }
  const double scale = e_fold_point(query.factors);
  const double log_front = query.alpha * std::log(scale) - std::lgamma(query.alpha);
  // x = scale * y
  auto integrand = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double log_value =
        log_front + (query.alpha - 1.0) * std::log(y) + log_product(query.factors, scale * y);
    return std::exp(log_value);
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = query.tolerance;
  opts.max_intervals = 20000;
  // Splitting at the scale keeps the peak away from the mapped endpoints.
  const double head = integrate(integrand, 0.0, 1.0, opts).value;
  const double tail = integrate(integrand, 1.0, std::numeric_limits<double>::infinity(), opts).value;
  return head + tail;
}

NonnegativeLaw gaussian_square() {
  return {"gaussian_square", [](double x) { return -0.5 * std::log1p(2.0 * x); }};
}

NonnegativeLaw constant_one() {
  return {"one", [](double x) { return -x; }};
}

NonnegativeLaw stein_kernel_law(const DistributionSpec& dist) {
  auto shared = std::make_shared<const DistributionSpec>(dist);
  const auto& w = shared->mass_window;
  double tau_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) {
    tau_min = std::min(tau_min, shared->tau(w.lo + (w.hi - w.lo) * i / 2000.0));
  }
  tau_min = std::max(tau_min, 0.0);
  auto log_mgf = [shared, tau_min](double x) {
    if (x == 0.0) return 0.0;
    QuadratureOptions opts{0.0, 1e-12, 4000, false};
    const auto& win = shared->mass_window;
    const double value = integrate(
        [&](double y) { return std::exp(-x * (shared->tau(y) - tau_min)) * shared->density(y); },
        win.lo, win.hi, opts).value;
    return std::log(value) - x * tau_min;
  };
  return {"stein_kernel:" + dist.name, log_mgf};
}

std::vector<TrendPoint> ujmld_trend(const NonnegativeLaw& law, double alpha,
                                    const std::vector<int>& n_grid) {
  std::vector<TrendPoint> out;
  for (int n : n_grid) {
    NegMomentQuery query;
    query.alpha = alpha;
    query.factors.push_back({law.log_mgf, static_cast<double>(n)});
    try {
      const double m = negative_moment(query);
      out.push_back({n, std::pow(static_cast<double>(n), alpha) * m, ""});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotIntegrable) throw;
      out.push_back({n, std::nullopt, e.what()});
    }
  }
  return out;
}

double mz_bound(const std::vector<double>& per_coordinate_norms, double mean_abs, double p) {
  if (!(p >= 2.0)) throw Error(ErrorCode::InvalidOrder, "the moment inequality needs p >= 2");
  double sum = 0.0;
  for (double v : per_coordinate_norms) sum += v * v;
  return mean_abs * mean_abs + (p - 1.0) * sum;
}

std::vector<MgfCheckPoint> mgf_bound_check(const DistributionSpec& dist,
                                           const std::vector<double>& x_grid,
                                           std::optional<double> c) {
  const std::optional<double> bound = c ? c : dist.kernel.tau_prime_bound;
  if (!bound || !(*bound > 0.0)) {
    throw Error(ErrorCode::MissingKernelDerivativeBound,
                dist.name + " has no positive bound on |tau'|; supply one");
  }
  const double c2 = *bound * *bound;
  const auto& w = dist.mass_window;
  std::vector<MgfCheckPoint> out;
  for (double x : x_grid) {
    const double lhs = quad(
        [&](double y) { return std::exp(-x * dist.tau(y)) * dist.density(y); }, w.lo, w.hi,
        QuadratureOptions{1e-12, 1e-12, 4000, true});
    const double rhs = std::pow(1.0 + x * c2, -1.0 / c2);
    out.push_back({x, lhs, rhs, lhs <= rhs + 1e-10});
  }
  return out;
}

}  // namespace steinfisher

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


#include "steinfisher/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "steinfisher/errors.hpp"

namespace steinfisher {

namespace {

constexpr double kTailDensity = 1e-16;
constexpr double kInf = std::numeric_limits<double>::infinity();

const QuadratureOptions kContract{1e-10, 0.0, 4000, true};
const QuadratureOptions kTail{1e-13, 1e-11, 4000, false};

// Point beyond which a unimodal density stays under kTailDensity, searched
// outward from `inner` in the direction of `sign`.
double tail_cut(const RealFn& density, double inner, double sign) {
  double step = 1.0;
  double near = inner;
  double far = inner + sign * step;
  while (density(far) >= kTailDensity) {
    near = far;
    step *= 2.0;
    far = inner + sign * step;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (near + far);
    if (density(mid) >= kTailDensity) {
      near = mid;
    } else {
      far = mid;
    }
  }
  return far;
}

Interval mass_window_of(const RealFn& density, Interval support) {
  Interval w = support;
  if (std::isinf(w.lo)) w.lo = tail_cut(density, std::isinf(w.hi) ? 0.0 : w.hi, -1.0);
  if (std::isinf(w.hi)) w.hi = tail_cut(density, std::isinf(support.lo) ? 0.0 : support.lo, 1.0);
  return w;
}

double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

DistributionSpec finish(DistributionSpec d) {
  d.mass_window = mass_window_of(d.density, d.support);
  return d;
}

SteinKernelForm pearson_kernel(const PearsonCoefficients& pc, std::optional<double> bound) {
  SteinKernelForm k;
  k.variant = KernelVariant::closed_form;
  k.tau = [pc](double x) { return pc.kernel(x); };
  k.tau_prime = [pc](double x) { return 2.0 * pc.a1 * x + pc.a2; };
  k.tau_prime_bound = bound;
  return k;
}

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

DistributionSpec gaussian() {
  DistributionSpec d;
  d.name = "gaussian";
  d.support = {-kInf, kInf};
  d.density = normal_pdf;
  d.log_density_derivative = [](double x) { return -x; };
  d.cdf = normal_cdf;
  d.sampler = [](Stream& s) { return s.normal(); };
  d.pearson = PearsonCoefficients{1.0, 0.0, 0.0, 0.0, 1.0};
  d.kernel = pearson_kernel(*d.pearson, std::nullopt);
  d.moment8 = {true, 105.0};
  return finish(std::move(d));
}

DistributionSpec uniform() {
  const double edge = std::sqrt(3.0);
  DistributionSpec d;
  d.name = "uniform";
  d.support = {-edge, edge};
  d.density = [edge](double x) { return (x >= -edge && x <= edge) ? 0.5 / edge : 0.0; };
  d.log_density_derivative = [](double) { return 0.0; };
  d.cdf = [edge](double x) { return std::clamp((x + edge) / (2.0 * edge), 0.0, 1.0); };
  d.sampler = [edge](Stream& s) { return edge * (2.0 * s.uniform() - 1.0); };
  d.pearson = PearsonCoefficients{0.0, 0.0, -0.5, 0.0, 1.5};
  d.kernel = pearson_kernel(*d.pearson, edge);
  d.moment8 = {true, 9.0};
  return finish(std::move(d));
}

DistributionSpec exponential_centered() {
  DistributionSpec d;
  d.name = "exponential_centered";
  d.support = {-1.0, kInf};
  d.density = [](double y) { return y >= -1.0 ? std::exp(-(y + 1.0)) : 0.0; };
  d.log_density_derivative = [](double) { return -1.0; };
  d.cdf = [](double y) { return y <= -1.0 ? 0.0 : -std::expm1(-(y + 1.0)); };
  d.sampler = [](Stream& s) { return -std::log(s.uniform()) - 1.0; };
  d.pearson = PearsonCoefficients{1.0, 1.0, 0.0, 1.0, 1.0};
  d.kernel = pearson_kernel(*d.pearson, 1.0);
  // E(E - 1)^8 is the derangement number !8.
  d.moment8 = {true, 14833.0};
  return finish(std::move(d));
}

DistributionSpec student_t(double dof) {
  if (!(dof > 16.0)) {
    throw Error(ErrorCode::MomentConditionViolated,
                "student_t needs more than 16 degrees of freedom for finite 8th moments of "
                "the kernel derivative");
  }
  const double scale = std::sqrt((dof - 2.0) / dof);
  const double log_norm = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                          0.5 * std::log(std::numbers::pi * (dof - 2.0));
  DistributionSpec d;
  char buf[64];
  std::snprintf(buf, sizeof buf, "student_t(%g)", dof);
  d.name = buf;
  d.support = {-kInf, kInf};
  d.density = [dof, log_norm](double x) {
    return std::exp(log_norm - 0.5 * (dof + 1.0) * std::log1p(x * x / (dof - 2.0)));
  };
  d.log_density_derivative = [dof](double x) { return -(dof + 1.0) * x / (dof - 2.0 + x * x); };
  d.cdf = [dof, scale](double x) {
    const double t = x / scale;
    const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
    return t >= 0.0 ? 1.0 - tail : tail;
  };
  d.sampler = [dof, scale](Stream& s) {
    const double z = s.normal();
    const double v = s.chi_square(dof);
    return scale * z / std::sqrt(v / dof);
  };
  d.pearson = PearsonCoefficients{(dof + 1.0) / (dof - 1.0), 0.0, 1.0 / (dof - 1.0), 0.0,
                                  (dof - 2.0) / (dof - 1.0)};
  d.kernel = pearson_kernel(*d.pearson, std::nullopt);
  const double m8 =
      105.0 * std::pow(dof - 2.0, 3) / ((dof - 4.0) * (dof - 6.0) * (dof - 8.0));
  d.moment8 = {true, m8};
  return finish(std::move(d));
}

DistributionSpec catalog_get(std::string_view name) {
  if (name == "gaussian") return gaussian();
  if (name == "uniform") return uniform();
  if (name == "exponential_centered") return exponential_centered();
  for (std::string_view prefix : {"student_t(", "student_t:"}) {
    if (name.substr(0, prefix.size()) != prefix) continue;
    std::string_view rest = name.substr(prefix.size());
    if (prefix.back() == '(') {
      if (rest.empty() || rest.back() != ')') break;
      rest.remove_suffix(1);
    }
    double dof = 0.0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), dof);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) break;
    return student_t(dof);
  }
  throw Error(ErrorCode::NotInCatalog, "unknown distribution '" + std::string(name) + "'");
}

std::vector<std::string> catalog_names() {
  return {"gaussian", "uniform", "exponential_centered", "student_t(<dof>)"};
}

double expectation(const DistributionSpec& dist, const RealFn& g) {
  return quad([&](double y) { return g(y) * dist.density(y); }, dist.mass_window.lo,
              dist.mass_window.hi, kContract);
}

double upper_tail_integral(const DistributionSpec& dist, const RealFn& g, double x,
                           double mean_g) {
  const auto& w = dist.mass_window;
  auto integrand = [&](double y) { return g(y) * dist.density(y); };
  if (x >= w.hi) return 0.0;
  if (x <= w.lo) return mean_g;
  if (dist.cdf(x) >= 0.5) return quad(integrand, x, w.hi, kTail);
  return mean_g - quad(integrand, w.lo, x, kTail);
}

double stein_kernel_by_quadrature(const DistributionSpec& dist, double x) {
  const double mean = expectation(dist, [](double y) { return y; });
  const double tail =
      upper_tail_integral(dist, [mean](double y) { return y - mean; }, x, 0.0);
  return tail / dist.density(x);
}

double quantile(const DistributionSpec& dist, double probability) {
  double lo = dist.mass_window.lo;
  double hi = dist.mass_window.hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (dist.cdf(mid) < probability) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SteinKernelForm kernel_of_transformed(const DistributionSpec& base, RealFn f, RealFn f_inverse,
                                      RealFn f_prime) {
  auto shared = std::make_shared<const DistributionSpec>(base);
  const double mean_f = expectation(*shared, f);
  if (std::abs(mean_f) > 1e-6) {
    throw Error(ErrorCode::NotCentered,
                "E f(Y) = " + std::to_string(mean_f) + " is not zero; center f first");
  }
  auto tau = [shared, f, f_inverse, f_prime, mean_f](double x) {
    const double y = f_inverse(x);
    const double tail = upper_tail_integral(*shared, f, y, mean_f);
    return f_prime(y) * tail / shared->density(y);
  };
  SteinKernelForm k;
  k.variant = KernelVariant::numeric;
  k.tau = tau;
  k.tau_prime = [tau](double x) {
    const double h = 1e-4 * (1.0 + std::abs(x));
    return (tau(x + h) - tau(x - h)) / (2.0 * h);
  };
  return k;
}

}  // namespace steinfisher

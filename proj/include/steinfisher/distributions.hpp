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

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "steinfisher/quadrature.hpp"
#include "steinfisher/random.hpp"

namespace steinfisher {

using RealFn = std::function<double(double)>;

struct Interval {
  double lo;
  double hi;

  bool interior(double x) const { return x > lo && x < hi; }
};

enum class KernelVariant { closed_form, numeric };

struct SteinKernelForm {
  KernelVariant variant = KernelVariant::closed_form;
  RealFn tau;
  RealFn tau_prime;
  /// c with |tau'| <= c almost surely, when such a constant exists.
  std::optional<double> tau_prime_bound;
};

/// p'/p = -(m x + k) / (a1 x^2 + a2 x + a3). When the law is centered with
/// m = 2 a1 + 1 and k = a2 the Stein kernel is the denominator.
struct PearsonCoefficients {
  double m;
  double k;
  double a1;
  double a2;
  double a3;

  double kernel(double x) const { return (a1 * x + a2) * x + a3; }
  double score(double x) const { return -(m * x + k) / kernel(x); }
};

struct Moment8 {
  bool finite;
  double value;
};

/// A standardized univariate law. Immutable once built; samplers take the
/// stream explicitly so a distribution can be shared across threads.
struct DistributionSpec {
  std::string name;
  Interval support;
  RealFn density;
  RealFn log_density_derivative;
  RealFn cdf;
  std::function<double(Stream&)> sampler;
  SteinKernelForm kernel;
  Moment8 moment8;
  std::optional<PearsonCoefficients> pearson;
  /// Support with the tails cut where the density drops below 1e-16.
  Interval mass_window;

  double tau(double x) const { return kernel.tau(x); }
  double tau_prime(double x) const { return kernel.tau_prime(x); }
  double sample(Stream& stream) const { return sampler(stream); }
};

DistributionSpec gaussian();
/// Uniform on [-sqrt(3), sqrt(3)].
DistributionSpec uniform();
/// Exp(1) - 1.
DistributionSpec exponential_centered();
/// sqrt((dof - 2) / dof) * t_dof; requires dof > 16.
DistributionSpec student_t(double dof);

/// Looks up "gaussian", "uniform", "exponential_centered" or "student_t(<dof>)".
DistributionSpec catalog_get(std::string_view name);
std::vector<std::string> catalog_names();

/// Stein kernel of f(Y) for increasing f with E f(Y) = 0, evaluated by
/// quadrature: tau(x) = f'(y) * int_y^inf f p_Y / p_Y(y) with y = f^{-1}(x).
SteinKernelForm kernel_of_transformed(const DistributionSpec& base, RealFn f, RealFn f_inverse,
                                      RealFn f_prime);

// Integration under the catalog's quadrature contract (absolute tolerance 1e-10
// over the mass window).
double expectation(const DistributionSpec& dist, const RealFn& g);

/// int_x^hi g(y) p(y) dy. Integrates whichever side of x carries less mass and
/// uses `mean_g` (the full integral) to recover the requested tail.
double upper_tail_integral(const DistributionSpec& dist, const RealFn& g, double x, double mean_g);

/// Stein kernel straight from its definition, int_x^inf (y - EY) p(y) dy / p(x).
double stein_kernel_by_quadrature(const DistributionSpec& dist, double x);

double quantile(const DistributionSpec& dist, double probability);

double normal_cdf(double x);
double normal_pdf(double x);
/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

}  // namespace steinfisher

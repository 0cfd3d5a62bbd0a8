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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "steinfisher/errors.hpp"

namespace steinfisher {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 4000;
  bool throw_on_failure = true;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 10/21 abscissae and weights on [-1, 1] (positive half).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600507221700, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
};

inline bool operator<(const Segment& a, const Segment& b) { return a.error < b.error; }

template <class F>
Segment gauss_kronrod21(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_center = f(center);
  double kronrod = kKronrodWeights[10] * f_center;
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f_lo = f(center - dx);
    const double f_hi = f(center + dx);
    kronrod += kKronrodWeights[j] * (f_lo + f_hi);
    abs_sum += kKronrodWeights[j] * (std::abs(f_lo) + std::abs(f_hi));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f_lo + f_hi);
  }
  const double value = kronrod * half;
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(half);
  const double error = std::max(std::abs((kronrod - gauss) * half), roundoff);
  return {lo, hi, value, error};
}

template <class G>
QuadratureResult adaptive_finite(G& g, double lo, double hi, const QuadratureOptions& opts) {
  std::vector<Segment> heap;
  heap.reserve(static_cast<std::size_t>(opts.max_intervals) + 1);
  heap.push_back(gauss_kronrod21(g, lo, hi));
  double total = heap.front().value;
  double total_error = heap.front().error;
  auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

  while (total_error > tolerance() && static_cast<int>(heap.size()) < opts.max_intervals) {
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    heap.pop_back();
    const Segment left = gauss_kronrod21(g, worst.lo, mid);
    const Segment right = gauss_kronrod21(g, mid, worst.hi);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());

    // Re-sum instead of updating incrementally so cancellation cannot accumulate.
    total = 0.0;
    total_error = 0.0;
    for (const auto& s : heap) {
      total += s.value;
      total_error += s.error;
    }
  }

  QuadratureResult result{total, total_error, static_cast<int>(heap.size()),
                          total_error <= tolerance()};
  if (!result.converged && opts.throw_on_failure) {
    throw QuadratureFailure(total_error, tolerance());
  }
  return result;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [lo, hi]. Either endpoint may be
/// infinite; infinite ranges are mapped onto a finite interval before subdivision.
/// Stops once the summed error estimate falls below max(abs_tol, rel_tol*|I|).
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureOptions& opts = {}) {
  if (lo == hi) return {0.0, 0.0, 0, true};
  if (lo > hi) {
    auto r = integrate(f, hi, lo, opts);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  auto safe = [](double v) { return std::isfinite(v) ? v : 0.0; };

  if (!lo_inf && !hi_inf) {
    auto g = [&](double x) { return f(x); };
    return detail::adaptive_finite(g, lo, hi, opts);
  }
  if (!lo_inf) {
    auto g = [&](double t) {
      const double s = 1.0 - t;
      const double x = lo + t / s;
      return std::isfinite(x) ? safe(f(x) / (s * s)) : 0.0;
    };
    return detail::adaptive_finite(g, 0.0, 1.0, opts);
  }
  if (!hi_inf) {
    auto g = [&](double t) {
      const double x = hi - (1.0 - t) / t;
      return std::isfinite(x) ? safe(f(x) / (t * t)) : 0.0;
    };
    return detail::adaptive_finite(g, 0.0, 1.0, opts);
  }
  auto g = [&](double t) {
    const double s = 1.0 - t * t;
    const double x = t / s;
    return std::isfinite(x) ? safe(f(x) * (1.0 + t * t) / (s * s)) : 0.0;
  };
  return detail::adaptive_finite(g, -1.0, 1.0, opts);
}

/// Convenience wrapper returning only the value.
template <class F>
double quad(F&& f, double lo, double hi, const QuadratureOptions& opts = {}) {
  return integrate(std::forward<F>(f), lo, hi, opts).value;
}

}  // namespace steinfisher

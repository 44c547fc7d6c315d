// Copyright 2026 The privleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privleak/projections.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "boost/math/tools/toms748_solve.hpp"
#include "privleak/info_theory.h"

namespace privleak {

std::vector<double> ProjectSimplex(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = std::max(v[j] - theta, 0.0);
    total += w[j];
  }
  // Clean up rounding so the output sums to one to machine precision.
  if (total > 0.0) {
    for (double& e : w) e /= total;
  }
  return w;
}

std::vector<double> TemperatureScale(std::span<const double> v, double beta) {
  const std::size_t n = v.size();
  std::vector<double> w(n, 0.0);
  if (beta == 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
    return w;
  }
  double top = -std::numeric_limits<double>::infinity();
  for (double e : v) {
    if (e > 0.0) top = std::max(top, beta * std::log(e));
  }
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (v[j] > 0.0) {
      w[j] = std::exp(beta * std::log(v[j]) - top);
      total += w[j];
    }
  }
  for (double& e : w) e /= total;
  return w;
}

namespace {

std::vector<double> Floored(std::span<const double> v) {
  std::vector<double> out(v.size());
  double total = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = std::max(v[j], kProbabilityFloor);
    total += out[j];
  }
  for (double& e : out) e /= total;
  return out;
}

}  // namespace

absl::StatusOr<EntropyProjection> ProjectEntropy(
    std::span<const double> v, double target,
    const EntropyProjectionConfig& config) {
  const double max_entropy = std::log(static_cast<double>(v.size()));
  if (!(target >= 0.0) || target > max_entropy + config.tolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "entropy target %.10g is outside [0, %.10g]", target, max_entropy));
  }
  if (std::abs(Entropy(v) - target) < config.tolerance) {
    return EntropyProjection{std::vector<double>(v.begin(), v.end()), 1.0};
  }
  if (target >= max_entropy - 0.5 * config.tolerance) {
    return EntropyProjection{TemperatureScale(v, 0.0), 0.0};
  }

  const std::vector<double> base = Floored(v);
  // Work in u = log(beta); f is nonincreasing in u.
  auto f = [&](double u) {
    return Entropy(TemperatureScale(base, std::exp(u))) - target;
  };
  double lo = std::log(config.beta_low);
  double hi = std::log(config.beta_high);
  double f_lo = f(lo);
  double f_hi = f(hi);
  for (int k = 0; k < config.max_bracket_expansions && f_lo < 0.0; ++k) {
    lo -= std::log(10.0);
    f_lo = f(lo);
  }
  for (int k = 0; k < config.max_bracket_expansions && f_hi > 0.0; ++k) {
    hi += std::log(10.0);
    f_hi = f(hi);
  }
  if (f_lo < 0.0 || f_hi > 0.0) {
    return absl::OutOfRangeError(absl::StrFormat(
        "entropy target %.10g not bracketed; reachable range is "
        "[%.10g, %.10g]",
        target, f_hi + target, f_lo + target));
  }

  auto finish = [&](double u) {
    const double beta = std::exp(u);
    return EntropyProjection{TemperatureScale(base, beta), beta};
  };
  if (std::abs(f_lo) < config.tolerance) return finish(lo);
  if (std::abs(f_hi) < config.tolerance) return finish(hi);

  if (config.root_finder == RootFinder::kBrent) {
    std::uintmax_t iterations = config.max_iterations;
    auto done = [&](double a, double b) {
      return std::abs(b - a) < 1e-15 * std::max(1.0, std::abs(a));
    };
    try {
      auto [a, b] = boost::math::tools::toms748_solve(
          f, lo, hi, f_lo, f_hi, done, iterations);
      const double fa = f(a);
      const double fb = f(b);
      if (std::abs(fa) < config.tolerance || std::abs(fb) < config.tolerance) {
        return finish(std::abs(fa) <= std::abs(fb) ? a : b);
      }
      // Narrow the bracket for the bisection pass below.
      if (fa >= 0.0 && fb <= 0.0) {
        lo = a;
        hi = b;
      }
    } catch (const std::exception&) {
      // Fall through to bisection on the original bracket.
    }
  }

  double best_u = lo;
  double best_f = f_lo;
  for (int k = 0; k < 4 * config.max_iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) < std::abs(best_f)) {
      best_u = mid;
      best_f = fm;
    }
    if (std::abs(fm) < config.tolerance) break;
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  if (std::abs(best_f) >= config.tolerance) {
    return absl::InternalError(absl::StrFormat(
        "entropy projection stalled %.3g nats from the target", best_f));
  }
  return finish(best_u);
}

}  // namespace privleak

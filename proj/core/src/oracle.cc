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

#include "privleak/oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace privleak {
namespace {

// Number of compositions of `steps` into `parts` nonnegative parts, capped
// just above `cap` to avoid overflow.
std::uint64_t CompositionCount(int steps, int parts, std::uint64_t cap) {
  // C(steps + parts - 1, parts - 1), built incrementally.
  std::uint64_t c = 1;
  const int k = parts - 1;
  for (int j = 1; j <= k; ++j) {
    c = c * static_cast<std::uint64_t>(steps + j) / static_cast<std::uint64_t>(j);
    if (c > cap) return cap + 1;
  }
  return c;
}

double PlainEntropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

// I(A; Y) from a joint table p(a, y) laid out row-major.
double MiFromJoint(const std::vector<double>& joint, int rows, int cols) {
  std::vector<double> pa(rows, 0.0), py(cols, 0.0);
  for (int a = 0; a < rows; ++a) {
    for (int y = 0; y < cols; ++y) {
      pa[a] += joint[a * cols + y];
      py[y] += joint[a * cols + y];
    }
  }
  double mi = 0.0;
  for (int a = 0; a < rows; ++a) {
    for (int y = 0; y < cols; ++y) {
      const double v = joint[a * cols + y];
      if (v > 0.0) mi += v * std::log(v / (pa[a] * py[y]));
    }
  }
  return std::max(mi, 0.0);
}

// Calls fn(weights) for every composition of `steps` into weights.size()
// parts, last part filling the remainder.
template <typename Fn>
void ForEachComposition(std::vector<int>& weights, std::size_t pos,
                        int remaining, Fn& fn) {
  if (pos + 1 == weights.size()) {
    weights[pos] = remaining;
    fn(weights);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    weights[pos] = k;
    ForEachComposition(weights, pos + 1, remaining - k, fn);
  }
}

}  // namespace

absl::StatusOr<OracleValue> BruteForceLeakage(const ProblemSpace& space,
                                              const Mechanism& mechanism,
                                              double entropy_bound,
                                              int grid_steps) {
  const std::size_t size = space.universe_size();
  if (size > kOracleMaxUniverse) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "oracle universe %d exceeds the cap of %d", size, kOracleMaxUniverse));
  }
  if (grid_steps < 1 || grid_steps > kOracleMaxGridSteps) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "grid steps %d outside [1, %d]", grid_steps, kOracleMaxGridSteps));
  }
  if (mechanism.input_size() != size ||
      static_cast<int>(mechanism.output_size()) != space.output_size()) {
    return absl::InvalidArgumentError("mechanism does not match the space");
  }
  const std::uint64_t count =
      CompositionCount(grid_steps, static_cast<int>(size), kOracleMaxGridPoints);
  if (count > kOracleMaxGridPoints) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "grid of %d steps over %d datasets exceeds %d points", grid_steps,
        size, kOracleMaxGridPoints));
  }

  const int m = space.output_size();
  const int n = space.record_count();
  OracleValue best;
  std::vector<double> p(size);
  std::vector<double> joint;
  auto visit = [&](const std::vector<int>& w) {
    ++best.points;
    for (std::size_t x = 0; x < size; ++x) {
      p[x] = static_cast<double>(w[x]) / grid_steps;
    }
    if (PlainEntropy(p) < entropy_bound - 1e-12) return;
    for (int i = 0; i < n; ++i) {
      const int ni = space.alphabet_size(i);
      joint.assign(static_cast<std::size_t>(ni) * m, 0.0);
      for (std::size_t x = 0; x < size; ++x) {
        if (p[x] == 0.0) continue;
        const int a = space.Digit(x, i);
        for (int y = 0; y < m; ++y) joint[a * m + y] += p[x] * mechanism(x, y);
      }
      const double mi = MiFromJoint(joint, ni, m);
      if (mi > best.leakage) {
        best.leakage = mi;
        best.worst_record = i;
      }
    }
  };
  std::vector<int> weights(size, 0);
  ForEachComposition(weights, 0, grid_steps, visit);
  return best;
}

absl::StatusOr<OracleValue> EnumerateExtremeConditionals(
    const ProblemSpace& space, const Mechanism& mechanism, int record,
    int marginal_grid) {
  if (record < 0 || record >= space.record_count()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("record %d out of range", record));
  }
  if (marginal_grid < 1) {
    return absl::InvalidArgumentError("marginal grid must be positive");
  }
  if (mechanism.input_size() != space.universe_size() ||
      static_cast<int>(mechanism.output_size()) != space.output_size()) {
    return absl::InvalidArgumentError("mechanism does not match the space");
  }
  const int ni = space.alphabet_size(record);
  const std::uint64_t rest = space.rest_size(record);
  std::uint64_t matrices = 1;
  for (int a = 0; a < ni; ++a) {
    matrices *= rest;
    if (matrices > kOracleMaxConditionals) {
      return absl::ResourceExhaustedError(absl::StrFormat(
          "%d^%d deterministic conditionals exceed the cap of %d", rest, ni,
          kOracleMaxConditionals));
    }
  }

  const int m = space.output_size();
  OracleValue best;
  best.worst_record = record;
  std::vector<std::uint64_t> choice(ni, 0);
  std::vector<double> joint(static_cast<std::size_t>(ni) * m);
  std::vector<int> weights(ni, 0);
  for (std::uint64_t k = 0; k < matrices; ++k) {
    std::uint64_t code = k;
    for (int a = 0; a < ni; ++a) {
      choice[a] = code % rest;
      code /= rest;
    }
    ++best.points;
    auto visit = [&](const std::vector<int>& w) {
      for (int a = 0; a < ni; ++a) {
        const std::size_t x = space.JoinIndex(record, a, choice[a]);
        const double pa = static_cast<double>(w[a]) / marginal_grid;
        for (int y = 0; y < m; ++y) joint[a * m + y] = pa * mechanism(x, y);
      }
      best.leakage = std::max(best.leakage, MiFromJoint(joint, ni, m));
    };
    ForEachComposition(weights, 0, marginal_grid, visit);
  }
  return best;
}

double BscDistortionInverse(double leakage) {
  const double target = std::clamp(leakage, 0.0, std::numbers::ln2);
  auto capacity = [](double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
    return std::numbers::ln2 - h;
  };
  // Capacity falls from ln 2 at p = 0 to 0 at p = 1/2.
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (capacity(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (target <= 0.0) return 0.5;
  if (target >= std::numbers::ln2) return 0.0;
  return 0.5 * (lo + hi);
}

}  // namespace privleak

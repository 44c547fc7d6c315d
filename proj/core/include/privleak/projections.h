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

#ifndef PRIVLEAK_PROJECTIONS_H_
#define PRIVLEAK_PROJECTIONS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace privleak {

// Euclidean projection onto the probability simplex (sort-and-threshold).
std::vector<double> ProjectSimplex(std::span<const double> v);

// w_j proportional to v_j^beta, computed in the log domain. Zero entries of
// `v` stay zero for beta > 0.
std::vector<double> TemperatureScale(std::span<const double> v, double beta);

enum class RootFinder { kBrent, kBisection };

struct EntropyProjectionConfig {
  double tolerance = 1e-8;
  int max_iterations = 200;
  double beta_low = 1e-6;
  double beta_high = 1e6;
  int max_bracket_expansions = 10;
  RootFinder root_finder = RootFinder::kBrent;
};

struct EntropyProjection {
  std::vector<double> distribution;
  double beta = 1.0;  // 0 stands for the uniform limit.
};

// Moves `v` along the temperature path until its entropy equals `target`.
// Inputs are floored at the log floor and renormalized first; a `v` whose
// entropy already matches is returned as is. Fails with OutOfRange when the
// target lies outside the entropy range reachable on the expanded bracket.
absl::StatusOr<EntropyProjection> ProjectEntropy(
    std::span<const double> v, double target,
    const EntropyProjectionConfig& config = {});

}  // namespace privleak

#endif  // PRIVLEAK_PROJECTIONS_H_

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

// Brute-force verifiers. They walk the full joint simplex or the extreme
// conditionals directly and share no code with the solvers beyond the
// domain types.

#ifndef PRIVLEAK_ORACLE_H_
#define PRIVLEAK_ORACLE_H_

#include <cstddef>
#include <cstdint>

#include "absl/status/statusor.h"
#include "privleak/space.h"

namespace privleak {

inline constexpr std::size_t kOracleMaxUniverse = 16;
inline constexpr int kOracleMaxGridSteps = 50;
inline constexpr std::uint64_t kOracleMaxGridPoints = 50'000'000;
inline constexpr std::uint64_t kOracleMaxConditionals = 4096;

struct OracleValue {
  double leakage = 0.0;  // nats
  int worst_record = 0;
  std::uint64_t points = 0;  // grid points or matrices visited
};

// Max over records and over grid points p = k / grid_steps of the joint
// simplex with H(p) >= entropy_bound of I(X_i; Y). A lower bound on the
// true worst-case leakage.
absl::StatusOr<OracleValue> BruteForceLeakage(const ProblemSpace& space,
                                              const Mechanism& mechanism,
                                              double entropy_bound,
                                              int grid_steps);

// Max of I(X_i; Y) over every deterministic conditional p(x_{-i} | x_i)
// and every marginal on a grid with `marginal_grid` steps.
absl::StatusOr<OracleValue> EnumerateExtremeConditionals(
    const ProblemSpace& space, const Mechanism& mechanism, int record,
    int marginal_grid);

// The p in [0, 1/2] with ln 2 - H_b(p) = leakage, to 1e-10. Inputs outside
// [0, ln 2] are clamped.
double BscDistortionInverse(double leakage);

}  // namespace privleak

#endif  // PRIVLEAK_ORACLE_H_

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

// Reference mechanisms with closed-form flip probabilities, and loading of
// mechanisms and priors from matrix files.

#ifndef PRIVLEAK_MECHANISMS_H_
#define PRIVLEAK_MECHANISMS_H_

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privleak/query.h"
#include "privleak/space.h"

namespace privleak {

// Releases f(x) with probability 1 - p and spreads p evenly over the other
// outputs. Requires 0 <= p <= 1/2.
absl::StatusOr<Mechanism> BuildBsc(const ProblemSpace& space,
                                   const Query& query, double p);

// Flip probability of the Laplace mechanism with scale 1/epsilon,
// thresholded at 1/2 for a binary query: exp(-epsilon / 2) / 2.
double LaplaceFlipProbability(double epsilon);

// Flip probability of the exponential mechanism with indicator utility on
// a binary output: 1 / (exp(epsilon / 2) + 1).
double ExponentialFlipProbability(double epsilon);

// Total flip mass of the indicator-utility exponential mechanism on m
// outputs: (m - 1) / (exp(epsilon / 2) + m - 1).
double ExponentialFlipMass(double epsilon, int outputs);

// Binary outputs only; other output sizes are Unimplemented.
absl::StatusOr<Mechanism> BuildLaplaceThresholded(const ProblemSpace& space,
                                                  const Query& query,
                                                  double epsilon);

// Binary outputs, or any output size when `extended` is set.
absl::StatusOr<Mechanism> BuildExponential(const ProblemSpace& space,
                                           const Query& query, double epsilon,
                                           bool extended = false);

// Leakage of a binary symmetric channel on a uniform input: ln 2 - H_b(p).
double BscCapacityClosedForm(double p);

absl::StatusOr<Mechanism> LoadMechanism(const std::string& path);
// Also checks the dimensions against `space`.
absl::StatusOr<Mechanism> LoadMechanism(const std::string& path,
                                        const ProblemSpace& space);
absl::StatusOr<JointPrior> LoadPrior(const std::string& path);

// Parsed form of "bsc:p", "laplace:eps", "exp:eps" or "file:path".
struct MechanismSpec {
  enum class Kind { kBsc, kLaplace, kExponential, kFile };
  Kind kind = Kind::kBsc;
  double parameter = 0.0;
  std::string path;

  std::string Describe() const;
};

absl::StatusOr<MechanismSpec> ParseMechanismSpec(absl::string_view text);

absl::StatusOr<Mechanism> RealizeMechanism(const MechanismSpec& spec,
                                           const ProblemSpace& space,
                                           const Query& query,
                                           bool extended = false);

}  // namespace privleak

#endif  // PRIVLEAK_MECHANISMS_H_

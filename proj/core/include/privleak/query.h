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

#ifndef PRIVLEAK_QUERY_H_
#define PRIVLEAK_QUERY_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privleak/matrix.h"
#include "privleak/space.h"

namespace privleak {

// Deterministic query f: X -> {0, ..., m-1} evaluated by dataset index.
class Query {
 public:
  enum class Kind { kModularSum, kPairwiseProduct, kTable };

  // f(x) = sum_i x_i mod `modulus`.
  static Query ModularSum(int modulus);
  static Query Parity() { return ModularSum(2); }
  // f(x) = sum_{i<j} x_i x_j.
  static Query PairwiseProduct();
  // f(x) = outputs[x].
  static Query Table(std::vector<int> outputs);

  Kind kind() const { return kind_; }
  int modulus() const { return modulus_; }

  int Evaluate(const ProblemSpace& space, std::size_t x) const;

  // Checks f(x) in [0, |Y|) for every dataset.
  absl::Status Validate(const ProblemSpace& space) const;

  std::string Describe() const;

 private:
  Query(Kind kind, int modulus, std::vector<int> table)
      : kind_(kind), modulus_(modulus), table_(std::move(table)) {}

  Kind kind_;
  int modulus_;
  std::vector<int> table_;
};

// Output-space distortion d(f(x), y), zero on the diagonal.
class DistortionMetric {
 public:
  enum class Kind { kAbsoluteDifference, kTable };

  static DistortionMetric AbsoluteDifference();
  // Requires a square nonnegative matrix with a zero diagonal.
  static absl::StatusOr<DistortionMetric> Table(Matrix table);

  Kind kind() const { return kind_; }
  double operator()(int exact, int released) const;

 private:
  DistortionMetric(Kind kind, Matrix table)
      : kind_(kind), table_(std::move(table)) {}

  Kind kind_;
  Matrix table_;
};

// q(f(x) | x) = 1.
Mechanism ExactRelease(const ProblemSpace& space, const Query& query);

// Every row uniform over the outputs.
Mechanism UniformMechanism(const ProblemSpace& space);

// p0(x) * d(f(x), y); the gradient of the expected distortion in q.
Matrix DistortionWeights(const ProblemSpace& space, const JointPrior& truth,
                         const Query& query, const DistortionMetric& metric);

// sum_{x,y} p0(x) q(y|x) d(f(x), y).
double ExpectedDistortion(const ProblemSpace& space, const JointPrior& truth,
                          const Mechanism& mechanism, const Query& query,
                          const DistortionMetric& metric);

}  // namespace privleak

#endif  // PRIVLEAK_QUERY_H_

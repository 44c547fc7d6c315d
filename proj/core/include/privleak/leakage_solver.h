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

// Maximal per-record leakage under an entropy-bounded adversary:
//
//   L(b) = max_i max_{p : H(p) >= b} I(X_i; Y).
//
// The outer loop alternates over records. For each record it runs an
// entropy-penalized Blahut-Arimoto update of the marginal p(x_i), then
// either a search over deterministic conditionals (when the marginal alone
// carries enough entropy) or projected gradient coordinate ascent over the
// rows of p(x_{-i} | x_i) along their entropy boundaries.

#ifndef PRIVLEAK_LEAKAGE_SOLVER_H_
#define PRIVLEAK_LEAKAGE_SOLVER_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "privleak/matrix.h"
#include "privleak/projections.h"
#include "privleak/space.h"

namespace privleak {

struct LeakageConfig {
  double entropy_bound = 0.0;  // b, nats
  double tolerance = 1e-6;
  int max_outer_iterations = 1000;
  int max_inner_iterations = 200;
  double ba_step_size = 0.1;  // multiplier step in the marginal update
  double gd_initial_step = 1.0;
  double backtrack_factor = 0.5;
  double entropy_tolerance = 1e-8;
  int restarts = 5;
  std::uint64_t seed = 0;
};

struct LeakageResult {
  double leakage = 0.0;
  int worst_record = 0;
  JointPrior optimal_prior;
  // Incumbent value after every outer iteration of the winning restart.
  std::vector<double> trace;
  bool feasible = false;
  int restarts_used = 0;
  int iterations = 0;
};

// Joint entropy slack tolerated when accepting candidate priors.
inline constexpr double kEntropySlack = 1e-7;

// Entropy row k of the view must carry so that the joint entropy reaches
// `b` with the other rows held fixed. Requires marginal[k] > 0.
double ComputeCik(const RecordView& view, double b, int k);

struct MarginalUpdate {
  std::vector<double> marginal;
  double leakage = 0.0;
};

// Marginal update with the conditionals of `view` held fixed. The returned
// marginal keeps H(X) >= b whenever the input did and never has lower
// mutual information than the input.
MarginalUpdate OptimizeMarginal(const ProblemSpace& space,
                                const RecordView& view,
                                const Mechanism& mechanism,
                                const LeakageConfig& config);

struct ConditionalUpdate {
  Matrix conditional;
  double leakage = 0.0;
  std::vector<double> trace;
};

// Row-wise coordinate ascent over the conditionals of `view` with the
// marginal held fixed. The input conditionals must be feasible. Returns
// FailedPrecondition when some row would need more entropy than its
// alphabet allows.
absl::StatusOr<ConditionalUpdate> OptimizeConditionals(
    const ProblemSpace& space, const RecordView& view,
    const Mechanism& mechanism, const LeakageConfig& config,
    const EntropyProjectionConfig& projection = {});

// Best deterministic conditional matrix for the marginal of `view`. Exact
// enumeration when n_{-i}^{n_i} <= 4096, coordinate ascent otherwise.
ConditionalUpdate BestDeterministicConditionals(const ProblemSpace& space,
                                                const RecordView& view,
                                                const Mechanism& mechanism);

// Full solve with restarts. Restart 0 starts from the uniform prior; the
// rest start from seeded random feasible priors.
absl::StatusOr<LeakageResult> MaxLeakage(const ProblemSpace& space,
                                         const Mechanism& mechanism,
                                         const LeakageConfig& config);

// Single run of the alternating loop from `initial`, which must satisfy the
// entropy bound.
absl::StatusOr<LeakageResult> MaxLeakageFrom(const ProblemSpace& space,
                                             const Mechanism& mechanism,
                                             const LeakageConfig& config,
                                             const JointPrior& initial);

}  // namespace privleak

#endif  // PRIVLEAK_LEAKAGE_SOLVER_H_

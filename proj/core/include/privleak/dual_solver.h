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

// Minimal distortion under bounded leakage: the smallest expected
// distortion of any mechanism whose worst-case leakage stays below L.

#ifndef PRIVLEAK_DUAL_SOLVER_H_
#define PRIVLEAK_DUAL_SOLVER_H_

#include <vector>

#include "absl/status/statusor.h"
#include "privleak/leakage_solver.h"
#include "privleak/mechanism_descent.h"
#include "privleak/query.h"
#include "privleak/space.h"
#include "privleak/tradeoff.h"

namespace privleak {

struct DualConfig {
  double leakage_bound = 0.1;  // L, nats
  double entropy_bound = 0.0;  // b
  double outer_tolerance = 1e-4;
  double constraint_tolerance = 1e-3;
  double penalty_init = 1.0;
  double penalty_factor = 1.5;
  double constraint_margin = 0.01;
  int max_outer_rounds = 12;
  int max_penalty_rounds = 30;
  // Averages the penalty instead of scaling it when the audited leakage
  // crosses the bound on consecutive rounds.
  bool zigzag_damping = false;
  LeakageConfig leakage;  // its entropy bound is overridden by entropy_bound
  DescentConfig descent;
};

// (softplus(max_i I(X_i;Y) - L))^2 for a single prior; the gradient flows
// through the lowest-index worst record.
PenaltyValue PenaltyLeakage(const ProblemSpace& space, const JointPrior& prior,
                            const Mechanism& mechanism, double bound);

// Exponentiated gradient descent on E[d] + lambda * penalty, where the
// penalty takes the worst record over every prior in `pool`.
DescentResult DualExpGradient(const ProblemSpace& space,
                              const std::vector<JointPrior>& pool,
                              const JointPrior& truth, const Query& query,
                              const DistortionMetric& metric,
                              const Mechanism& initial, double lambda,
                              const DualConfig& config);

struct DualUpdateStats {
  int descent_steps = 0;
  int armijo_violations = 0;
  int stalls = 0;
};

// Adaptive smooth-penalty update. `lambda` is read and adapted in place so
// the outer loop and this update share one multiplier.
Mechanism DualMechanismUpdate(const ProblemSpace& space,
                              const std::vector<JointPrior>& pool,
                              const JointPrior& truth, const Query& query,
                              const DistortionMetric& metric,
                              const Mechanism& initial, const DualConfig& config,
                              double* lambda, DualUpdateStats* stats = nullptr);

absl::StatusOr<TradeoffPoint> DualSolve(const ProblemSpace& space,
                                        const JointPrior& truth,
                                        const Query& query,
                                        const DistortionMetric& metric,
                                        const DualConfig& config);

std::vector<absl::StatusOr<TradeoffPoint>> DualSweep(
    const ProblemSpace& space, const JointPrior& truth, const Query& query,
    const DistortionMetric& metric, const DualConfig& config,
    const std::vector<double>& bounds, int jobs);

}  // namespace privleak

#endif  // PRIVLEAK_DUAL_SOLVER_H_

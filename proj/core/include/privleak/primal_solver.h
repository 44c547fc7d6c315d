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

// Leakage-distortion tradeoff: the smallest worst-case leakage of any
// mechanism whose expected distortion under the true data distribution p0
// stays below D. Alternates an adversarial prior update (the leakage
// solver) with a smooth-penalty mechanism update driven by exponentiated
// gradient descent.

#ifndef PRIVLEAK_PRIMAL_SOLVER_H_
#define PRIVLEAK_PRIMAL_SOLVER_H_

#include <vector>

#include "absl/status/statusor.h"
#include "privleak/leakage_solver.h"
#include "privleak/mechanism_descent.h"
#include "privleak/query.h"
#include "privleak/space.h"
#include "privleak/tradeoff.h"

namespace privleak {

struct PrimalConfig {
  double distortion_bound = 0.0;  // D
  double entropy_bound = 0.0;     // b
  double penalty_init = 1.0;
  double penalty_factor = 1.5;
  double constraint_margin = 0.01;
  double tolerance = 1e-4;  // change in audited leakage between rounds
  int min_outer_rounds = 3;
  int max_outer_rounds = 12;
  int max_penalty_rounds = 30;
  LeakageConfig leakage;  // its entropy bound is overridden by entropy_bound
  DescentConfig descent;
};

// (softplus(E - D))^2 with E the expected distortion under p0.
PenaltyValue PenaltyDistortion(const ProblemSpace& space,
                               const JointPrior& truth,
                               const Mechanism& mechanism, const Query& query,
                               const DistortionMetric& metric, double bound);

// max_i I(X_i; Y) + lambda * PenaltyDistortion for a single adversarial
// prior; the leakage gradient is taken at the lowest-index worst record.
PenaltyValue MechanismObjectiveGrad(const ProblemSpace& space,
                                    const JointPrior& prior,
                                    const JointPrior& truth,
                                    const Mechanism& mechanism, double lambda,
                                    double bound, const Query& query,
                                    const DistortionMetric& metric);

// Mixture of exact release and uniform rows with the largest uniform weight
// whose expected distortion stays within `bound`. Fails when even exact
// release exceeds the bound.
absl::StatusOr<Mechanism> InitialPrimalMechanism(
    const ProblemSpace& space, const JointPrior& truth, const Query& query,
    const DistortionMetric& metric, double bound);

struct MechanismUpdateStats {
  int descent_steps = 0;
  int armijo_violations = 0;
  int stalls = 0;
};

// Adaptive smooth-penalty update against every prior in `pool`, starting
// from `initial`. Returns the best penalized iterate whose distortion is
// within the margin, or `initial` when no iterate qualifies.
Mechanism UpdateMechanism(const ProblemSpace& space,
                          const std::vector<JointPrior>& pool,
                          const JointPrior& truth, const Query& query,
                          const DistortionMetric& metric,
                          const Mechanism& initial, const PrimalConfig& config,
                          MechanismUpdateStats* stats = nullptr);

absl::StatusOr<TradeoffPoint> PrimalTradeoff(const ProblemSpace& space,
                                             const JointPrior& truth,
                                             const Query& query,
                                             const DistortionMetric& metric,
                                             const PrimalConfig& config);

// Solves every bound in parallel, then enforces monotonicity: a mechanism
// feasible at a tighter bound is feasible at every looser one, so a looser
// point whose leakage is worse inherits the better mechanism.
std::vector<absl::StatusOr<TradeoffPoint>> PrimalSweep(
    const ProblemSpace& space, const JointPrior& truth, const Query& query,
    const DistortionMetric& metric, const PrimalConfig& config,
    const std::vector<double>& bounds, int jobs);

}  // namespace privleak

#endif  // PRIVLEAK_PRIMAL_SOLVER_H_

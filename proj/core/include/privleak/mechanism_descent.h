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

// Shared machinery for mechanism design: smooth penalties, exponentiated
// gradient descent with backtracking, and worst-case leakage over a pool of
// adversarial priors.

#ifndef PRIVLEAK_MECHANISM_DESCENT_H_
#define PRIVLEAK_MECHANISM_DESCENT_H_

#include <functional>
#include <vector>

#include "privleak/matrix.h"
#include "privleak/space.h"

namespace privleak {

// ln(1 + e^z), stable for large |z|.
double Softplus(double z);
double Sigmoid(double z);

// Objective over mechanisms. Returns the value and, when `grad` is not
// null, writes the |X| x |Y| gradient into it.
using MechanismObjective =
    std::function<double(const Mechanism& mechanism, Matrix* grad)>;

// q'(y|x) proportional to q(y|x) exp(-eta g(y|x)), row by row in the log
// domain. Zero entries are lifted to the probability floor first.
Mechanism ExpGradientStep(const Mechanism& mechanism, const Matrix& grad,
                          double eta);

// Squared gradient norm in the local geometry of the step:
// sum_x sum_y q(y|x) (g(y|x) - sum_y' q(y'|x) g(y'|x))^2. This is the
// first-order decrease rate of an exponentiated step, so the sufficient
// decrease test is always satisfiable for a small enough step.
double LocalGradientNormSquared(const Mechanism& mechanism,
                                const Matrix& grad);

struct DescentConfig {
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double armijo_constant = 0.5;
  double min_step = 1e-12;
  int max_iterations = 200;
  double tolerance = 1e-6;  // L1 change of the mechanism
};

struct DescentResult {
  Mechanism mechanism;
  double objective = 0.0;
  int iterations = 0;
  // Accepted steps whose objective rose; zero by construction.
  int armijo_violations = 0;
  // True when backtracking ran below min_step.
  bool stalled = false;
  std::vector<double> trace;
};

DescentResult ExpGradientDescent(const Mechanism& initial,
                                 const MechanismObjective& objective,
                                 const DescentConfig& config);

// Worst per-record leakage over every (prior, record) pair of a prior pool.
struct PoolWorst {
  double leakage = 0.0;
  int prior = 0;
  int record = 0;
};

// Ties go to the earliest prior, then the lowest record.
PoolWorst PoolLeakage(const ProblemSpace& space,
                      const std::vector<JointPrior>& pool,
                      const Mechanism& mechanism);

}  // namespace privleak

#endif  // PRIVLEAK_MECHANISM_DESCENT_H_

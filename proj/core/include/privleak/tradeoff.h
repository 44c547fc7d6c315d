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

#ifndef PRIVLEAK_TRADEOFF_H_
#define PRIVLEAK_TRADEOFF_H_

#include <vector>

#include "privleak/matrix.h"
#include "privleak/space.h"

namespace privleak {

// Smooth penalty value and its gradient with respect to the mechanism.
struct PenaltyValue {
  double value = 0.0;
  Matrix grad;
};

// One solved point of a primal or dual sweep. For primal points the
// achieved value is the leakage and the residual is distortion minus the
// bound; for dual points the achieved value is the distortion and the
// residual is leakage minus the bound.
struct TradeoffPoint {
  double bound_requested = 0.0;
  double value_achieved = 0.0;
  double constraint_residual = 0.0;
  double leakage = 0.0;
  double distortion = 0.0;
  Mechanism mechanism;
  JointPrior prior;
  int iterations = 0;
  // Incumbent traces of every leakage audit run during the solve.
  std::vector<std::vector<double>> audit_traces;
  int armijo_violations = 0;
  int descent_stalls = 0;
  // Set when a sweep replaced this point by a better one from a looser
  // bound.
  bool carried_forward = false;
};

}  // namespace privleak

#endif  // PRIVLEAK_TRADEOFF_H_

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

// Entropy, per-record mutual information and their analytic gradients. All
// quantities are in nats.

#ifndef PRIVLEAK_INFO_THEORY_H_
#define PRIVLEAK_INFO_THEORY_H_

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "privleak/matrix.h"
#include "privleak/space.h"

namespace privleak {

// Probabilities are clipped to this floor inside every logarithm.
inline constexpr double kProbabilityFloor = 1e-10;

inline double SafeLog(double p) {
  return std::log(p < kProbabilityFloor ? kProbabilityFloor : p);
}

inline double NatsToBits(double nats) { return nats / std::numbers::ln2; }

// -sum p log p with 0 log 0 = 0.
double Entropy(std::span<const double> p);
double BinaryEntropy(double p);

// H(X_i) + sum_a p(a) H(X_{-i} | a).
double JointEntropyViaChain(const RecordView& view);

// I(X_i; Y) for the record of `view`.
double MutualInformation(const ProblemSpace& space, const RecordView& view,
                         const Mechanism& mechanism);

// Same quantity from a precomputed output channel.
double MutualInformation(std::span<const double> marginal,
                         const OutputChannel& channel);

double RecordLeakage(const ProblemSpace& space, const JointPrior& prior,
                     const Mechanism& mechanism, int record);

std::vector<double> RecordLeakages(const ProblemSpace& space,
                                   const JointPrior& prior,
                                   const Mechanism& mechanism);

struct WorstRecord {
  int record = 0;
  double leakage = 0.0;
};

// Largest per-record leakage; ties go to the lowest record index.
WorstRecord MaxRecordLeakage(const ProblemSpace& space,
                             const JointPrior& prior,
                             const Mechanism& mechanism);

// dI(X_i;Y)/dq(y|x) = p(x) log(p(y|x_i) / p(y)).
Matrix GradMiMechanism(const ProblemSpace& space, const JointPrior& prior,
                       const Mechanism& mechanism, int record);

// dI/dp(a) = sum_y p(y|a) log(p(y|a) / p(y)) - 1, conditionals held fixed.
std::vector<double> GradMiMarginal(const ProblemSpace& space,
                                   const RecordView& view,
                                   const Mechanism& mechanism);

// dI/dp(x_{-i} | a) for row a = `row` of the conditional matrix, marginal
// held fixed: p(a) sum_y q(y|a, x_{-i}) log(p(y|a) / p(y)).
std::vector<double> GradMiConditionalRow(const ProblemSpace& space,
                                         const RecordView& view,
                                         const Mechanism& mechanism, int row);

// dH/dp(x) = -log p(x) - 1.
std::vector<double> GradEntropyJoint(const JointPrior& prior);

// dH/dp(a) = H(X_{-i} | a) - log p(a) - 1.
std::vector<double> GradEntropyMarginal(const RecordView& view);

// dH/dp(x_{-i} | a) = -p(a) (log(p(a) p(x_{-i} | a)) + 1).
std::vector<double> GradEntropyConditionalRow(const RecordView& view,
                                              int row);

enum class EntropyTarget { kJoint, kMarginal, kConditionalRow };

// Dispatches on `target`. `record` and `row` are ignored where unused.
std::vector<double> GradEntropy(EntropyTarget target,
                                const ProblemSpace& space,
                                const JointPrior& prior, int record = 0,
                                int row = 0);

}  // namespace privleak

#endif  // PRIVLEAK_INFO_THEORY_H_

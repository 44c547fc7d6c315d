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

#include "privleak/info_theory.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "privleak/query.h"
#include "reference.h"

namespace privleak {
namespace {

namespace ref = ::privleak::reference;

Mechanism Bsc2(double p) {
  Matrix m(4, 2);
  for (int x = 0; x < 4; ++x) {
    const int f = __builtin_popcount(x) % 2;
    m(x, f) = 1.0 - p;
    m(x, 1 - f) = p;
  }
  return *Mechanism::Create(m);
}

TEST(EntropyTest, KnownValues) {
  EXPECT_DOUBLE_EQ(Entropy(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_NEAR(Entropy(std::vector<double>(8, 0.125)), std::log(8.0), 1e-15);
  EXPECT_NEAR(BinaryEntropy(0.5), std::numbers::ln2, 1e-15);
  EXPECT_NEAR(NatsToBits(std::numbers::ln2), 1.0, 1e-15);
}

TEST(EntropyTest, ChainRuleMatchesJointEntropy) {
  std::mt19937_64 rng(3);
  ProblemSpace space = *ProblemSpace::Create({2, 3, 2}, 2);
  JointPrior p = *JointPrior::Create(ref::Dirichlet(rng, 12));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(JointEntropyViaChain(ExtractView(space, p, i)),
                ref::Entropy({p.probs().begin(), p.probs().end()}), 1e-12);
  }
}

TEST(MutualInformationTest, BscUniformPriorIsZeroForParity) {
  // One parity bit says nothing about a single uniform record when the
  // other record is uniform too.
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  EXPECT_NEAR(MaxRecordLeakage(space, JointPrior::Uniform(4), Bsc2(0.1)).leakage,
              0.0, 1e-15);
}

TEST(MutualInformationTest, PointMassOnRestGivesCapacity) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  // x_1 fixed at 0, x_0 uniform: Y is x_0 through a BSC.
  JointPrior p = *JointPrior::Create({0.5, 0.0, 0.5, 0.0});
  EXPECT_NEAR(RecordLeakage(space, p, Bsc2(0.1), 0), ref::BscCapacity(0.1),
              1e-12);
  EXPECT_NEAR(RecordLeakage(space, p, Bsc2(0.1), 1), 0.0, 1e-15);
  WorstRecord w = MaxRecordLeakage(space, p, Bsc2(0.1));
  EXPECT_EQ(w.record, 0);
}

TEST(MutualInformationTest, MatchesReferenceOnRandomInstances) {
  std::mt19937_64 rng(17);
  ProblemSpace space = *ProblemSpace::Create({3, 2, 2}, 3);
  for (int t = 0; t < 20; ++t) {
    const ref::Vec prior = ref::Dirichlet(rng, 12);
    const ref::Mat q = ref::RandomChannel(rng, 12, 3);
    Matrix qm(12, 3);
    for (int x = 0; x < 12; ++x) {
      for (int y = 0; y < 3; ++y) qm(x, y) = q[x][y];
    }
    const Mechanism mech = *Mechanism::Create(qm);
    const JointPrior jp = *JointPrior::Create(prior);
    const std::vector<double> all = RecordLeakages(space, jp, mech);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(all[i], ref::RecordMi({3, 2, 2}, prior, q, i), 1e-12);
    }
  }
}

TEST(MutualInformationTest, ConstantMechanismLeaksNothing) {
  std::mt19937_64 rng(2);
  ProblemSpace space = *ProblemSpace::Binary(3, 2);
  JointPrior p = *JointPrior::Create(ref::Dirichlet(rng, 8));
  const double row[] = {0.3, 0.7};
  const Mechanism c = *Mechanism::Constant(8, row);
  EXPECT_NEAR(MaxRecordLeakage(space, p, c).leakage, 0.0, 1e-15);
}

TEST(GradientTest, ZeroMassRowsHaveZeroMechanismGradient) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  JointPrior p = *JointPrior::Create({0.5, 0.0, 0.5, 0.0});
  Matrix g = GradMiMechanism(space, p, Bsc2(0.2), 0);
  EXPECT_EQ(g(1, 0), 0.0);
  EXPECT_EQ(g(3, 1), 0.0);
}

TEST(GradientTest, ConstantMechanismMarginalGradientIsMinusOne) {
  std::mt19937_64 rng(4);
  ProblemSpace space = *ProblemSpace::Binary(3, 2);
  JointPrior p = *JointPrior::Create(ref::Dirichlet(rng, 8));
  const double row[] = {0.4, 0.6};
  const std::vector<double> g = GradMiMarginal(
      space, ExtractView(space, p, 1), *Mechanism::Constant(8, row));
  for (double v : g) EXPECT_NEAR(v, -1.0, 1e-12);
}

TEST(GradientTest, SymmetricBscGivesEqualMarginalEntries) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  JointPrior p = *JointPrior::Create({0.25, 0.25, 0.25, 0.25});
  const std::vector<double> g =
      GradMiMarginal(space, ExtractView(space, p, 0), Bsc2(0.3));
  EXPECT_NEAR(g[0], g[1], 1e-15);
}

TEST(GradientTest, UniformPriorEntropyGradientIsConstant) {
  const std::vector<double> g = GradEntropyJoint(JointPrior::Uniform(8));
  for (double v : g) EXPECT_NEAR(v, std::log(8.0) - 1.0, 1e-12);
}

TEST(GradientTest, DispatcherAgreesWithDirectCalls) {
  std::mt19937_64 rng(8);
  ProblemSpace space = *ProblemSpace::Create({2, 3}, 2);
  JointPrior p = *JointPrior::Create(ref::Dirichlet(rng, 6, 0.1));
  const RecordView view = ExtractView(space, p, 1);
  EXPECT_EQ(GradEntropy(EntropyTarget::kJoint, space, p), GradEntropyJoint(p));
  EXPECT_EQ(GradEntropy(EntropyTarget::kMarginal, space, p, 1),
            GradEntropyMarginal(view));
  EXPECT_EQ(GradEntropy(EntropyTarget::kConditionalRow, space, p, 1, 2),
            GradEntropyConditionalRow(view, 2));
}

TEST(GradientTest, MechanismGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(23);
  ProblemSpace space = *ProblemSpace::Create({2, 3}, 3);
  const ref::Vec prior = ref::Dirichlet(rng, 6, 0.1);
  const ref::Mat q = ref::RandomChannel(rng, 6, 3, 0.1);
  Matrix qm(6, 3);
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 3; ++y) qm(x, y) = q[x][y];
  }
  const Matrix g = GradMiMechanism(space, *JointPrior::Create(prior),
                                   *Mechanism::Create(qm), 1);
  constexpr double h = 1e-6;
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 3; ++y) {
      ref::Mat up = q, down = q;
      up[x][y] += h;
      down[x][y] -= h;
      const double fd = (ref::RecordMi({2, 3}, prior, up, 1) -
                         ref::RecordMi({2, 3}, prior, down, 1)) /
                        (2 * h);
      EXPECT_NEAR(g(x, y), fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

}  // namespace
}  // namespace privleak

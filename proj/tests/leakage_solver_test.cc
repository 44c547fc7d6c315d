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

#include "privleak/leakage_solver.h"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "privleak/info_theory.h"
#include "privleak/mechanisms.h"
#include "privleak/oracle.h"
#include "privleak/query.h"
#include "reference.h"

namespace privleak {
namespace {

namespace ref = ::privleak::reference;

void ExpectNondecreasing(const std::vector<double>& trace) {
  for (std::size_t k = 1; k < trace.size(); ++k) {
    EXPECT_GE(trace[k], trace[k - 1]) << "at " << k;
  }
}

TEST(ComputeCikTest, UniformPriorAtMaximumNeedsFullRowEntropy) {
  ProblemSpace space = *ProblemSpace::Binary(3, 2);
  RecordView view = ExtractView(space, JointPrior::Uniform(8), 0);
  EXPECT_NEAR(ComputeCik(view, std::log(8.0), 0), std::log(4.0), 1e-12);
  // With b = 0 no row needs any entropy.
  EXPECT_LE(ComputeCik(view, 0.0, 1), 0.0);
}

TEST(MaxLeakageTest, ZeroBoundGivesBscCapacity) {
  for (int n : {2, 4}) {
    ProblemSpace space = *ProblemSpace::Binary(n, 2);
    for (double p : {0.1, 0.3}) {
      absl::StatusOr<LeakageResult> r =
          MaxLeakage(space, *BuildBsc(space, Query::Parity(), p), {});
      ASSERT_TRUE(r.ok()) << r.status();
      EXPECT_NEAR(r->leakage, ref::BscCapacity(p), 1e-6);
      EXPECT_TRUE(r->feasible);
      ExpectNondecreasing(r->trace);
    }
  }
}

TEST(MaxLeakageTest, MaximumBoundForcesUniformPrior) {
  ProblemSpace space = *ProblemSpace::Binary(3, 2);
  LeakageConfig c;
  c.entropy_bound = std::log(8.0);
  absl::StatusOr<LeakageResult> r =
      MaxLeakage(space, *BuildBsc(space, Query::Parity(), 0.2), c);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->leakage, 0.0, 1e-9);
  for (double v : r->optimal_prior.probs()) EXPECT_NEAR(v, 0.125, 1e-9);
}

TEST(MaxLeakageTest, RejectsBoundAboveLogUniverse) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  LeakageConfig c;
  c.entropy_bound = std::log(4.0) + 0.01;
  EXPECT_FALSE(
      MaxLeakage(space, *BuildBsc(space, Query::Parity(), 0.2), c).ok());
}

TEST(MaxLeakageTest, RejectsMismatchedMechanism) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  ProblemSpace other = *ProblemSpace::Binary(3, 2);
  EXPECT_FALSE(
      MaxLeakage(space, *BuildBsc(other, Query::Parity(), 0.2), {}).ok());
}

TEST(MaxLeakageTest, NeverBelowBruteForceOracle) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  for (double p : {0.1, 0.3}) {
    const Mechanism m = *BuildBsc(space, Query::Parity(), p);
    for (double b : {0.25, 0.75, 1.2}) {
      LeakageConfig c;
      c.entropy_bound = b;
      absl::StatusOr<LeakageResult> r = MaxLeakage(space, m, c);
      absl::StatusOr<OracleValue> o = BruteForceLeakage(space, m, b, 30);
      ASSERT_TRUE(r.ok() && o.ok());
      EXPECT_GE(r->leakage, o->leakage - 1e-9) << "p=" << p << " b=" << b;
      EXPECT_GE(Entropy(r->optimal_prior.probs()), b - 1e-6);
      ExpectNondecreasing(r->trace);
    }
  }
}

TEST(MaxLeakageTest, HighBoundMatchesGridSearch) {
  // Two binary records top out at log 4 < 1.5 nats, so 1.2 is used here.
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  const Mechanism m = *BuildBsc(space, Query::Parity(), 0.1);
  LeakageConfig c;
  c.entropy_bound = 1.2;
  absl::StatusOr<LeakageResult> r = MaxLeakage(space, m, c);
  absl::StatusOr<OracleValue> o = BruteForceLeakage(space, m, 1.2, 50);
  ASSERT_TRUE(r.ok() && o.ok());
  // The grid only reaches a lower bound; the optimum sits just off it.
  EXPECT_GE(r->leakage, o->leakage - 1e-9);
  EXPECT_LE(r->leakage, o->leakage + 0.02);
  EXPECT_NEAR(r->leakage, 0.116192, 1e-4);
  c.entropy_bound = 1.5;
  EXPECT_EQ(MaxLeakage(space, m, c).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(MaxLeakageTest, SameSeedIsDeterministic) {
  ProblemSpace space = *ProblemSpace::Binary(3, 2);
  const Mechanism m = *BuildBsc(space, Query::Parity(), 0.2);
  LeakageConfig c;
  c.entropy_bound = 1.0;
  c.seed = 99;
  absl::StatusOr<LeakageResult> a = MaxLeakage(space, m, c);
  absl::StatusOr<LeakageResult> b = MaxLeakage(space, m, c);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->leakage, b->leakage);
  EXPECT_EQ(a->optimal_prior, b->optimal_prior);
}

TEST(OptimizeMarginalTest, NeverLowersInformationOrEntropyFeasibility) {
  std::mt19937_64 rng(31);
  ProblemSpace space = *ProblemSpace::Binary(3, 2);
  const Mechanism m = *BuildBsc(space, Query::Parity(), 0.2);
  for (int t = 0; t < 20; ++t) {
    JointPrior p = *JointPrior::Create(ref::Dirichlet(rng, 8, 0.2));
    LeakageConfig c;
    c.entropy_bound = Entropy(p.probs()) - 0.05;
    RecordView view = ExtractView(space, p, 0);
    const double before = MutualInformation(space, view, m);
    MarginalUpdate u = OptimizeMarginal(space, view, m, c);
    EXPECT_GE(u.leakage, before - 1e-12);
    view.marginal = u.marginal;
    EXPECT_GE(JointEntropyViaChain(view), c.entropy_bound - kEntropySlack);
  }
}

TEST(OptimizeConditionalsTest, UnboundedCaseMatchesEnumeration) {
  // With b = 0 every c_i^k is nonpositive and rows become unit vectors.
  std::mt19937_64 rng(41);
  ProblemSpace space = *ProblemSpace::Create({2, 2, 2}, 2);
  const Mechanism m = *BuildBsc(space, Query::Parity(), 0.15);
  JointPrior p = *JointPrior::Create(ref::Dirichlet(rng, 8, 0.2));
  RecordView view = ExtractView(space, p, 0);
  LeakageConfig c;
  absl::StatusOr<ConditionalUpdate> u =
      OptimizeConditionals(space, view, m, c);
  ASSERT_TRUE(u.ok()) << u.status();
  for (std::size_t a = 0; a < 2; ++a) {
    int ones = 0;
    for (std::size_t r = 0; r < 4; ++r) ones += u->conditional(a, r) == 1.0;
    EXPECT_EQ(ones, 1);
  }
  // Exhaustive: 4^2 deterministic matrices at this marginal.
  double best = 0.0;
  for (int r0 = 0; r0 < 4; ++r0) {
    for (int r1 = 0; r1 < 4; ++r1) {
      RecordView v = view;
      v.conditional = Matrix(2, 4);
      v.conditional(0, r0) = 1.0;
      v.conditional(1, r1) = 1.0;
      best = std::max(best, MutualInformation(space, v, m));
    }
  }
  EXPECT_NEAR(u->leakage, best, 1e-12);
  ExpectNondecreasing(u->trace);
}

TEST(OptimizeConditionalsTest, MaximumEntropyForcesUniformRows) {
  ProblemSpace space = *ProblemSpace::Binary(3, 2);
  const Mechanism m = *BuildBsc(space, Query::Parity(), 0.2);
  RecordView view = ExtractView(space, JointPrior::Uniform(8), 1);
  LeakageConfig c;
  c.entropy_bound = std::log(8.0) - 1e-9;
  absl::StatusOr<ConditionalUpdate> u = OptimizeConditionals(space, view, m, c);
  ASSERT_TRUE(u.ok()) << u.status();
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_NEAR(u->conditional(0, r), 0.25, 1e-4);
  }
}

TEST(OptimizeConditionalsTest, InfeasibleRowIsReported) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  const Mechanism m = *BuildBsc(space, Query::Parity(), 0.2);
  // A skewed marginal leaves too little room for b = log 4.
  JointPrior p = *JointPrior::Create({0.45, 0.45, 0.05, 0.05});
  LeakageConfig c;
  c.entropy_bound = std::log(4.0) - 1e-3;
  EXPECT_EQ(
      OptimizeConditionals(space, ExtractView(space, p, 0), m, c).status().code(),
      absl::StatusCode::kFailedPrecondition);
}

TEST(BestDeterministicConditionalsTest, ExactForSmallSpaces) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  const Mechanism m = *BuildBsc(space, Query::Parity(), 0.1);
  RecordView view = ExtractView(space, JointPrior::Uniform(4), 0);
  ConditionalUpdate u = BestDeterministicConditionals(space, view, m);
  EXPECT_NEAR(u.leakage, ref::BscCapacity(0.1), 1e-12);
}

}  // namespace
}  // namespace privleak

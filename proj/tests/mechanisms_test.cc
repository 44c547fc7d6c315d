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

#include "privleak/mechanisms.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privleak/leakage_solver.h"
#include "reference.h"

namespace privleak {
namespace {

namespace ref = ::privleak::reference;
using ::testing::HasSubstr;

TEST(BuildBscTest, RowsFollowTheQuery) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  const Mechanism m = *BuildBsc(space, Query::Parity(), 0.3);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.7);  // f = 0
  EXPECT_DOUBLE_EQ(m(1, 1), 0.7);  // f = 1
  EXPECT_DOUBLE_EQ(m(1, 0), 0.3);
  EXPECT_EQ(*BuildBsc(space, Query::Parity(), 0.0),
            ExactRelease(space, Query::Parity()));
}

TEST(BuildBscTest, SpreadsFlipMassOverWrongOutputs) {
  ProblemSpace space = *ProblemSpace::Binary(2, 3);
  const Mechanism m = *BuildBsc(space, Query::ModularSum(3), 0.3);
  EXPECT_DOUBLE_EQ(m(0, 0), 0.7);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.15);
  EXPECT_DOUBLE_EQ(m(0, 2), 0.15);
}

TEST(BuildBscTest, RejectsFlipAboveHalf) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  EXPECT_FALSE(BuildBsc(space, Query::Parity(), 0.6).ok());
  EXPECT_FALSE(BuildBsc(space, Query::Parity(), -0.1).ok());
}

TEST(BuildBscTest, DistortionEqualsFlipProbability) {
  ProblemSpace space = *ProblemSpace::Binary(3, 2);
  for (double p : {0.0, 0.1, 0.35, 0.5}) {
    EXPECT_NEAR(ExpectedDistortion(space, JointPrior::Uniform(8),
                                   *BuildBsc(space, Query::Parity(), p),
                                   Query::Parity(),
                                   DistortionMetric::AbsoluteDifference()),
                p, 1e-15);
  }
}

TEST(FlipProbabilityTest, ClosedForms) {
  EXPECT_NEAR(LaplaceFlipProbability(1.0), 0.3033, 1e-4);
  EXPECT_NEAR(LaplaceFlipProbability(2.0), 0.5 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(ExponentialFlipProbability(1.0), 0.3775, 1e-4);
  EXPECT_NEAR(ExponentialFlipProbability(1e-9), 0.5, 1e-9);
  for (double eps : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    EXPECT_GT(ExponentialFlipProbability(eps), LaplaceFlipProbability(eps));
  }
  EXPECT_NEAR(ExponentialFlipMass(1.0, 2), ExponentialFlipProbability(1.0),
              1e-15);
}

TEST(BscCapacityTest, KnownValues) {
  EXPECT_NEAR(BscCapacityClosedForm(0.1), 0.368, 1e-3);
  EXPECT_NEAR(BscCapacityClosedForm(0.3), 0.0823, 1e-4);
  EXPECT_NEAR(BscCapacityClosedForm(0.5), 0.0, 1e-15);
}

TEST(ReferenceMechanismsTest, AuditAtZeroMatchesClosedForm) {
  ProblemSpace space = *ProblemSpace::Binary(4, 2);
  for (double eps : {0.5, 1.0, 2.0}) {
    absl::StatusOr<LeakageResult> l = MaxLeakage(
        space, *BuildLaplaceThresholded(space, Query::Parity(), eps), {});
    absl::StatusOr<LeakageResult> e =
        MaxLeakage(space, *BuildExponential(space, Query::Parity(), eps), {});
    ASSERT_TRUE(l.ok() && e.ok());
    EXPECT_NEAR(l->leakage, ref::BscCapacity(0.5 * std::exp(-eps / 2)), 1e-3);
    EXPECT_NEAR(e->leakage,
                ref::BscCapacity(1.0 / (std::exp(eps / 2) + 1.0)), 1e-3);
  }
}

TEST(ReferenceMechanismsTest, NonBinaryOutputs) {
  ProblemSpace space = *ProblemSpace::Binary(2, 3);
  const Query q = Query::ModularSum(3);
  EXPECT_EQ(BuildLaplaceThresholded(space, q, 1.0).status().code(),
            absl::StatusCode::kUnimplemented);
  EXPECT_EQ(BuildExponential(space, q, 1.0).status().code(),
            absl::StatusCode::kUnimplemented);
  absl::StatusOr<Mechanism> ext = BuildExponential(space, q, 1.0, true);
  ASSERT_TRUE(ext.ok());
  EXPECT_NEAR(1.0 - (*ext)(0, 0), 2.0 / (std::exp(0.5) + 2.0), 1e-15);
  EXPECT_FALSE(BuildExponential(space, q, -1.0, true).ok());
}

TEST(MechanismSpecTest, ParsesAllKinds) {
  absl::StatusOr<MechanismSpec> s = ParseMechanismSpec("bsc:0.25");
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->kind, MechanismSpec::Kind::kBsc);
  EXPECT_EQ(s->parameter, 0.25);
  EXPECT_EQ(s->Describe(), "bsc:0.25");
  EXPECT_EQ(ParseMechanismSpec("laplace:1")->kind,
            MechanismSpec::Kind::kLaplace);
  EXPECT_EQ(ParseMechanismSpec("exp:2")->kind,
            MechanismSpec::Kind::kExponential);
  EXPECT_EQ(ParseMechanismSpec("file:/tmp/a.mat")->path, "/tmp/a.mat");
  EXPECT_FALSE(ParseMechanismSpec("bsc").ok());
  EXPECT_FALSE(ParseMechanismSpec("gauss:1").ok());
  EXPECT_FALSE(ParseMechanismSpec("bsc:abc").ok());
  EXPECT_FALSE(ParseMechanismSpec("file:").ok());
}

class LoadMechanismTest : public ::testing::Test {
 protected:
  std::string Write(const std::string& text) {
    path_ = (std::filesystem::temp_directory_path() /
             ("privleak_mech_" + std::to_string(counter_++) + ".mat"))
                .string();
    std::ofstream(path_) << text;
    return path_;
  }
  void TearDown() override { std::remove(path_.c_str()); }

  std::string path_;
  int counter_ = 0;
};

TEST_F(LoadMechanismTest, LoadsAndChecksDimensions) {
  const std::string path =
      Write("4 2\n0.7 0.3\n0.3 0.7\n0.3 0.7\n0.7 0.3\n");
  EXPECT_TRUE(LoadMechanism(path, *ProblemSpace::Binary(2, 2)).ok());
  absl::StatusOr<Mechanism> bad = LoadMechanism(path, *ProblemSpace::Binary(3, 2));
  ASSERT_FALSE(bad.ok());
  EXPECT_THAT(bad.status().message(), HasSubstr("4x2"));
}

TEST_F(LoadMechanismTest, RejectsBadRowWithIndex) {
  absl::StatusOr<Mechanism> m =
      LoadMechanism(Write("2 2\n0.5 0.5\n0.45 0.45\n"));
  ASSERT_FALSE(m.ok());
  EXPECT_THAT(m.status().message(), HasSubstr("row 1"));
}

TEST_F(LoadMechanismTest, LoadsPriorColumn) {
  absl::StatusOr<JointPrior> p = LoadPrior(Write("2 1\n0.25\n0.75\n"));
  ASSERT_TRUE(p.ok());
  EXPECT_DOUBLE_EQ((*p)[1], 0.75);
  EXPECT_FALSE(LoadPrior(Write("1 2\n0.5 0.5\n")).ok());
}

TEST(RealizeMechanismTest, DispatchesByKind) {
  ProblemSpace space = *ProblemSpace::Binary(2, 2);
  absl::StatusOr<Mechanism> m = RealizeMechanism(
      *ParseMechanismSpec("laplace:1"), space, Query::Parity());
  ASSERT_TRUE(m.ok());
  EXPECT_NEAR((*m)(0, 1), LaplaceFlipProbability(1.0), 1e-15);
}

}  // namespace
}  // namespace privleak

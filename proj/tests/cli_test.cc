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

#include "cli.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "reference.h"

namespace privleak::cli {
namespace {

namespace ref = ::privleak::reference;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Exec(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Data rows keyed by column name, skipping '#' lines.
std::vector<std::map<std::string, std::string>> Rows(const std::string& csv) {
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  for (absl::string_view line : absl::StrSplit(csv, '\n', absl::SkipEmpty())) {
    if (line[0] == '#') continue;
    std::vector<std::string> cells = absl::StrSplit(line, ',');
    if (header.empty()) {
      header = cells;
      continue;
    }
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) {
      row[header[k]] = cells[k];
    }
    rows.push_back(row);
  }
  return rows;
}

double Num(const std::string& s) {
  double v = std::nan("");
  EXPECT_TRUE(absl::SimpleAtod(s, &v)) << s;
  return v;
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST(ParseGridTest, ValuesRangesAndMax) {
  EXPECT_THAT(*ParseGrid("0.5", 1.0), ElementsAre(0.5));
  EXPECT_THAT(*ParseGrid("0,0.5,max", 2.0), ElementsAre(0.0, 0.5, 2.0));
  EXPECT_THAT(*ParseGrid("0:1:3", 9.0), ElementsAre(0.0, 0.5, 1.0));
  EXPECT_THAT(*ParseGrid("0:max:2", 4.0), ElementsAre(0.0, 4.0));
  EXPECT_FALSE(ParseGrid("", 1.0).ok());
  EXPECT_FALSE(ParseGrid("a", 1.0).ok());
  EXPECT_FALSE(ParseGrid("0:1", 1.0).ok());
  EXPECT_FALSE(ParseGrid("0:1:0", 1.0).ok());
  EXPECT_FALSE(ParseGrid("max", std::nan("")).ok());
}

TEST(AuditTest, BscAtZeroBound) {
  CliRun r = Exec({"audit", "--mech", "bsc:0.3", "--n", "4", "--query", "parity",
                "--b", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = Rows(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(Num(rows[0]["leakage_nats"]), 0.0823, 1e-4);
  EXPECT_NEAR(Num(rows[0]["leakage_bits"]),
              Num(rows[0]["leakage_nats"]) / std::numbers::ln2, 1e-7);
  EXPECT_EQ(rows[0]["units"], "nats");
  EXPECT_EQ(rows[0]["feasible"], "1");
  EXPECT_THAT(r.out, HasSubstr("# command=audit"));
}

TEST(AuditTest, BitsFlagChangesDisplayOnly) {
  CliRun r = Exec({"audit", "--mech", "bsc:0.1", "--n", "2", "--bits"});
  ASSERT_EQ(r.code, 0);
  auto rows = Rows(r.out);
  EXPECT_EQ(rows[0]["units"], "bits");
  EXPECT_NEAR(Num(rows[0]["leakage_nats"]), ref::BscCapacity(0.1), 1e-6);
  EXPECT_NEAR(Num(rows[0]["leakage_display"]),
              ref::BscCapacity(0.1) / std::numbers::ln2, 1e-6);
}

TEST(AuditTest, RowsKeepInputOrder) {
  CliRun r = Exec({"audit", "--mech", "exp:1,laplace:1", "--n", "2", "--b",
                "1.0,0", "--jobs", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = Rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0]["mechanism"], "exp:1");
  EXPECT_EQ(Num(rows[0]["b"]), 1.0);
  EXPECT_EQ(Num(rows[1]["b"]), 0.0);
  EXPECT_EQ(rows[3]["mechanism"], "laplace:1");
}

TEST(AuditTest, ConstantMechanismFromFileInfersRecords) {
  const std::string path = TempPath("privleak_cli_const.mat");
  std::ofstream(path) << "4 2\n0.5 0.5\n0.5 0.5\n0.5 0.5\n0.5 0.5\n";
  CliRun r = Exec({"audit", "--mech", "file:" + path, "--b", "0.5"});
  std::remove(path.c_str());
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = Rows(r.out);
  EXPECT_EQ(rows[0]["n"], "2");
  EXPECT_NEAR(Num(rows[0]["leakage_nats"]), 0.0, 1e-12);
}

TEST(AuditTest, ErrorsExitNonzero) {
  EXPECT_NE(Exec({"audit", "--mech", "file:/nonexistent.mat"}).code, 0);
  EXPECT_NE(Exec({"audit", "--mech", "bsc:0.7"}).code, 0);
  EXPECT_NE(Exec({"audit", "--mech", "laplace:1", "--query", "modsum:3"}).code,
            0);
  EXPECT_NE(Exec({"audit", "--query", "median"}).code, 0);
  EXPECT_NE(Exec({"audit", "--n", "2", "--b", "5"}).code, 0);
  EXPECT_NE(Exec({"nosuch"}).code, 0);
  EXPECT_NE(Exec({}).code, 0);
}

TEST(AuditTest, WritesToOutFile) {
  const std::string path = TempPath("privleak_cli_out.csv");
  CliRun r = Exec({"audit", "--n", "2", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  std::remove(path.c_str());
  EXPECT_EQ(Rows(text.str()).size(), 1u);
}

TEST(ConfigTest, FileSuppliesDefaultsAndFlagsWin) {
  const std::string path = TempPath("privleak_cli.conf");
  std::ofstream(path) << "mech=bsc:0.1\nn=2\nrestarts=2\n";
  CliRun from_file = Exec({"audit", "--config", path});
  CliRun flag_wins = Exec({"audit", "--config", path, "--mech", "bsc:0.3"});
  std::remove(path.c_str());
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  ASSERT_EQ(flag_wins.code, 0) << flag_wins.err;
  EXPECT_EQ(Rows(from_file.out)[0]["mechanism"], "bsc:0.1");
  EXPECT_EQ(Rows(from_file.out)[0]["restarts_used"], "2");
  EXPECT_EQ(Rows(flag_wins.out)[0]["mechanism"], "bsc:0.3");
}

TEST(ConfigTest, FileAcceptsCommaLists) {
  const std::string path = TempPath("privleak_cli_lists.conf");
  std::ofstream(path) << "mech=bsc:0.1,bsc:0.2\nn=2\nb=0,0.5\nrestarts=2\n";
  CliRun r = Exec({"audit", "--config", path});
  std::remove(path.c_str());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Rows(r.out).size(), 4u);
}

TEST(ConfigTest, SeedFallsBackToEnvironment) {
  setenv("PRIVLEAK_SEED", "4242", 1);
  CliRun env = Exec({"audit", "--n", "2"});
  CliRun flag = Exec({"audit", "--n", "2", "--seed", "7"});
  unsetenv("PRIVLEAK_SEED");
  EXPECT_THAT(env.out, HasSubstr("# seed=4242"));
  EXPECT_THAT(flag.out, HasSubstr("# seed=7"));
}

TEST(SweepBTest, RowCountAndShape) {
  CliRun r = Exec({"sweep-b", "--n", "2,3", "--mech", "bsc:0.1,bsc:0.3",
                "--grid", "5", "--restarts", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = Rows(r.out);
  ASSERT_EQ(rows.size(), 2u * 2u * 5u);
  // First row of each curve is b = 0, last is log |X|.
  EXPECT_EQ(Num(rows[0]["b"]), 0.0);
  EXPECT_NEAR(Num(rows[4]["b"]), std::log(4.0), 1e-8);
  EXPECT_LE(Num(rows[4]["leakage_nats"]), 0.005);
  // The p = 0.1 curve starts highest.
  EXPECT_GT(Num(rows[0]["leakage_nats"]), Num(rows[5]["leakage_nats"]));
}

TEST(PrimalTest, FlagsInfeasibleRowsOnlyUnderStrict) {
  CliRun r = Exec({"primal", "--n", "2", "--b", "0", "--D", "0.1,0.3",
                "--restarts", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = Rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  for (auto& row : rows) {
    EXPECT_LE(Num(row["D_achieved"]), Num(row["D_requested"]) + 0.01);
    EXPECT_LE(Num(row["leakage_nats"]),
              Num(row["baseline_leakage_nats"]) + 1e-6);
  }
  EXPECT_NEAR(Num(rows[0]["bsc_p"]), 0.1, 1e-12);
  EXPECT_NEAR(Num(rows[0]["laplace_eps"]), -2.0 * std::log(0.2), 1e-7);
}

TEST(DualTest, LooseBoundCostsNothing) {
  CliRun r = Exec({"dual", "--n", "2", "--L", "0.2,0.8", "--restarts", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = Rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LE(Num(rows[0]["L_achieved_nats"]), 0.2 + 1e-3);
  EXPECT_NEAR(Num(rows[1]["distortion"]), 0.0, 1e-12);
  EXPECT_EQ(rows[1]["feasible"], "1");
}

TEST(CompareTest, FamiliesAtMatchedDistortion) {
  CliRun r = Exec({"compare", "--n", "2", "--p", "0.2", "--eps", "1",
                "--restarts", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = Rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["mechanism"], "bsc");
  EXPECT_EQ(rows[1]["mechanism"], "laplace");
  EXPECT_EQ(rows[2]["mechanism"], "exp");
  // Every family here is a flip channel, so distortion equals p.
  for (auto& row : rows) {
    EXPECT_NEAR(Num(row["distortion"]), Num(row["flip_p"]), 1e-12);
    EXPECT_NEAR(Num(row["leakage_nats"]), ref::BscCapacity(Num(row["flip_p"])),
                1e-6);
  }
}

TEST(Table3Test, HasTwelveRowsWithReferences) {
  CliRun r = Exec({"table3", "--restarts", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = Rows(r.out);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0]["mechanism"], "laplace");
  EXPECT_EQ(Num(rows[0]["reference_nats"]), 0.079);
  EXPECT_EQ(Num(rows[1]["tolerance_nats"]), 0.005);
  EXPECT_NEAR(Num(rows[0]["closed_form_nats"]),
              ref::BscCapacity(0.5 * std::exp(-0.5)), 1e-8);
  EXPECT_NEAR(Num(rows[11]["leakage_nats"]), 0.0, 1e-6);
}

TEST(StrictTest, InfeasibleRowsFailUnderStrict) {
  // A zero leakage budget with exact-release distortion: dual rows are
  // feasible, so use an impossible primal distortion instead.
  CliRun lax = Exec({"primal", "--n", "2", "--b", "0", "--D", "-0.5",
                  "--restarts", "1"});
  CliRun strict = Exec({"primal", "--n", "2", "--b", "0", "--D", "-0.5",
                     "--restarts", "1", "--strict"});
  EXPECT_EQ(lax.code, 0) << lax.err;
  EXPECT_EQ(strict.code, kExitInfeasible);
}

}  // namespace
}  // namespace privleak::cli

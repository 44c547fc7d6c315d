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

// Batch experiment harness behind the privleak binary. Every subcommand
// writes a headered CSV: provenance lines start with '#', values are in nats
// and a units column names the display units.

#ifndef PRIVLEAK_TOOLS_CLI_H_
#define PRIVLEAK_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privleak/leakage_solver.h"

namespace privleak::cli {

// Exit codes besides 0 (success).
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 3;

// Parses "0.1", "0,0.5,1", "lo:hi:count" (inclusive, evenly spaced) or any
// comma-separated mix. The token "max" stands for `max_value`.
absl::StatusOr<std::vector<double>> ParseGrid(absl::string_view text,
                                              double max_value);

// One cell of the entropy-bound table for the thresholded Laplace and
// exponential mechanisms on n = 4 parity.
struct Table3Cell {
  std::string mechanism;  // "laplace" or "exp"
  double epsilon = 1.0;
  double entropy_bound = 0.0;
  double flip_probability = 0.0;
  double reference = 0.0;  // published value; NaN when epsilon != 1
  double tolerance = 0.01;
  double closed_form = 0.0;  // ln 2 - H_b(p); NaN unless b = 0
  LeakageResult result;
};

// Cells in row order: b in {0, 0.5, 1, 1.5, 2, ln 16}, Laplace then
// exponential within each b.
absl::StatusOr<std::vector<Table3Cell>> ComputeTable3(
    double epsilon, const LeakageConfig& base, int jobs);

// Runs one command line (without the program name). Returns the exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace privleak::cli

#endif  // PRIVLEAK_TOOLS_CLI_H_

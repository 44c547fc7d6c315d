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

#include "privleak/matrix_io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace privleak {
namespace {

std::vector<absl::string_view> Tokens(absl::string_view line) {
  return absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
}

absl::Status NormalizeSpan(std::span<double> v, absl::string_view what) {
  double total = 0.0;
  for (double e : v) total += e;
  if (std::abs(total - 1.0) > kFileMassTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s sums to %.9g, not 1", what, total));
  }
  for (double& e : v) e /= total;
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Matrix> ParseStochasticMatrix(absl::string_view text) {
  std::vector<std::vector<absl::string_view>> lines;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(Tokens(line));
  }
  if (lines.empty() || lines[0].size() != 2) {
    return absl::InvalidArgumentError(
        "matrix header must be a line holding the row and column counts");
  }
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!absl::SimpleAtoi(lines[0][0], &rows) ||
      !absl::SimpleAtoi(lines[0][1], &cols) || rows == 0 || cols == 0) {
    return absl::InvalidArgumentError("malformed matrix header");
  }
  if (lines.size() - 1 != rows) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "header declares %d rows but the file holds %d", rows,
        lines.size() - 1));
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& tokens = lines[r + 1];
    if (tokens.size() != cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d has %d entries, expected %d", r, tokens.size(), cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!absl::SimpleAtod(tokens[c], &v) || !std::isfinite(v) || v < 0.0) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "row %d column %d: '%s' is not a nonnegative number", r, c,
            tokens[c]));
      }
      m(r, c) = v;
    }
  }
  if (cols == 1) {
    if (absl::Status s = NormalizeSpan(m.data(), "prior column"); !s.ok()) {
      return s;
    }
    return m;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (absl::Status s = NormalizeSpan(m.Row(r), absl::StrFormat("row %d", r));
        !s.ok()) {
      return s;
    }
  }
  return m;
}

absl::StatusOr<Matrix> ReadStochasticMatrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<Matrix> m = ParseStochasticMatrix(buffer.str());
  if (!m.ok()) {
    return absl::Status(m.status().code(),
                        absl::StrFormat("%s: %s", path, m.status().message()));
  }
  return m;
}

std::string FormatMatrix(const Matrix& matrix) {
  std::string out = absl::StrFormat("%d %d\n", matrix.rows(), matrix.cols());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      absl::StrAppendFormat(&out, c == 0 ? "%.17g" : " %.17g", matrix(r, c));
    }
    out += '\n';
  }
  return out;
}

absl::Status WriteMatrix(const std::string& path, const Matrix& matrix) {
  std::ofstream out(path);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write '%s'", path));
  }
  out << FormatMatrix(matrix);
  return out ? absl::OkStatus()
             : absl::InternalError(absl::StrFormat("write to '%s' failed",
                                                   path));
}

}  // namespace privleak

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

// Plain-text stochastic matrix files. The first line holds the row and
// column counts; each following line holds one row of whitespace-separated
// decimals. Priors are stored as a single column. Lines starting with '#'
// are ignored.

#ifndef PRIVLEAK_MATRIX_IO_H_
#define PRIVLEAK_MATRIX_IO_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privleak/matrix.h"

namespace privleak {

// Rows (or, for a single-column file, the whole column) may deviate from
// unit mass by this much and are renormalized on load.
inline constexpr double kFileMassTolerance = 1e-6;

absl::StatusOr<Matrix> ParseStochasticMatrix(absl::string_view text);
absl::StatusOr<Matrix> ReadStochasticMatrix(const std::string& path);

std::string FormatMatrix(const Matrix& matrix);
absl::Status WriteMatrix(const std::string& path, const Matrix& matrix);

}  // namespace privleak

#endif  // PRIVLEAK_MATRIX_IO_H_

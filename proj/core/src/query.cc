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

#include "privleak/query.h"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "absl/strings/str_format.h"

namespace privleak {

Query Query::ModularSum(int modulus) {
  return Query(Kind::kModularSum, modulus, {});
}

Query Query::PairwiseProduct() { return Query(Kind::kPairwiseProduct, 0, {}); }

Query Query::Table(std::vector<int> outputs) {
  return Query(Kind::kTable, 0, std::move(outputs));
}

int Query::Evaluate(const ProblemSpace& space, std::size_t x) const {
  switch (kind_) {
    case Kind::kModularSum: {
      long long sum = 0;
      for (int i = 0; i < space.record_count(); ++i) sum += space.Digit(x, i);
      return static_cast<int>(sum % modulus_);
    }
    case Kind::kPairwiseProduct: {
      long long sum = 0;
      long long prefix = 0;
      for (int i = 0; i < space.record_count(); ++i) {
        const int d = space.Digit(x, i);
        sum += prefix * d;
        prefix += d;
      }
      return static_cast<int>(sum);
    }
    case Kind::kTable:
      return table_[x];
  }
  return 0;
}

absl::Status Query::Validate(const ProblemSpace& space) const {
  if (kind_ == Kind::kModularSum && modulus_ < 1) {
    return absl::InvalidArgumentError("modulus must be positive");
  }
  if (kind_ == Kind::kTable && table_.size() != space.universe_size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("query table has %d entries for %d datasets",
                        table_.size(), space.universe_size()));
  }
  for (std::size_t x = 0; x < space.universe_size(); ++x) {
    const int y = Evaluate(space, x);
    if (y < 0 || y >= space.output_size()) {
      return absl::OutOfRangeError(absl::StrFormat(
          "query value %d at dataset %d is outside [0, %d)", y, x,
          space.output_size()));
    }
  }
  return absl::OkStatus();
}

std::string Query::Describe() const {
  switch (kind_) {
    case Kind::kModularSum:
      return modulus_ == 2 ? "parity" : absl::StrFormat("modsum:%d", modulus_);
    case Kind::kPairwiseProduct:
      return "pairwise";
    case Kind::kTable:
      return "table";
  }
  return "";
}

DistortionMetric DistortionMetric::AbsoluteDifference() {
  return DistortionMetric(Kind::kAbsoluteDifference, Matrix());
}

absl::StatusOr<DistortionMetric> DistortionMetric::Table(Matrix table) {
  if (table.rows() != table.cols() || table.empty()) {
    return absl::InvalidArgumentError("distortion table must be square");
  }
  for (std::size_t a = 0; a < table.rows(); ++a) {
    for (std::size_t b = 0; b < table.cols(); ++b) {
      if (!(table(a, b) >= 0.0) || !std::isfinite(table(a, b))) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "distortion entry (%d, %d) must be finite and nonnegative", a, b));
      }
    }
    if (table(a, a) != 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("distortion diagonal entry %d is nonzero", a));
    }
  }
  return DistortionMetric(Kind::kTable, std::move(table));
}

double DistortionMetric::operator()(int exact, int released) const {
  if (kind_ == Kind::kAbsoluteDifference) {
    return static_cast<double>(std::abs(released - exact));
  }
  return table_(exact, released);
}

Mechanism ExactRelease(const ProblemSpace& space, const Query& query) {
  Matrix rows(space.universe_size(), space.output_size());
  for (std::size_t x = 0; x < rows.rows(); ++x) {
    rows(x, query.Evaluate(space, x)) = 1.0;
  }
  return Mechanism::Normalized(std::move(rows));
}

Mechanism UniformMechanism(const ProblemSpace& space) {
  return Mechanism::Normalized(Matrix(space.universe_size(),
                                      space.output_size(), 1.0));
}

Matrix DistortionWeights(const ProblemSpace& space, const JointPrior& truth,
                         const Query& query, const DistortionMetric& metric) {
  const int m = space.output_size();
  Matrix w(space.universe_size(), m);
  for (std::size_t x = 0; x < w.rows(); ++x) {
    const int fx = query.Evaluate(space, x);
    for (int y = 0; y < m; ++y) w(x, y) = truth[x] * metric(fx, y);
  }
  return w;
}

double ExpectedDistortion(const ProblemSpace& space, const JointPrior& truth,
                          const Mechanism& mechanism, const Query& query,
                          const DistortionMetric& metric) {
  const int m = space.output_size();
  double total = 0.0;
  for (std::size_t x = 0; x < space.universe_size(); ++x) {
    if (truth[x] == 0.0) continue;
    const int fx = query.Evaluate(space, x);
    double row = 0.0;
    for (int y = 0; y < m; ++y) row += mechanism(x, y) * metric(fx, y);
    total += truth[x] * row;
  }
  return total;
}

}  // namespace privleak

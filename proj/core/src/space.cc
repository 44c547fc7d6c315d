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

#include "privleak/space.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"

namespace privleak {
namespace {

void NormalizeInPlace(std::span<double> v) {
  double total = 0.0;
  for (double& e : v) {
    if (!(e > 0.0)) e = 0.0;
    total += e;
  }
  if (total <= 0.0) {
    const double u = 1.0 / static_cast<double>(v.size());
    for (double& e : v) e = u;
    return;
  }
  for (double& e : v) e /= total;
}

absl::Status CheckSimplex(std::span<const double> v, double tol,
                          absl::string_view what) {
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k]) || v[k] < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s: entry %d is negative or not finite", what, k));
    }
    total += v[k];
  }
  if (std::abs(total - 1.0) > tol) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: sums to %.12g, not 1", what, total));
  }
  return absl::OkStatus();
}

}  // namespace

ProblemSpace::ProblemSpace(std::vector<int> sizes, int output_size)
    : sizes_(std::move(sizes)), output_size_(output_size) {
  strides_.assign(sizes_.size(), 1);
  std::size_t stride = 1;
  for (int i = static_cast<int>(sizes_.size()) - 1; i >= 0; --i) {
    strides_[i] = stride;
    stride *= static_cast<std::size_t>(sizes_[i]);
  }
  universe_ = stride;
}

absl::StatusOr<ProblemSpace> ProblemSpace::Create(
    std::vector<int> alphabet_sizes, int output_size,
    std::size_t universe_cap) {
  if (alphabet_sizes.empty()) {
    return absl::InvalidArgumentError("at least one record is required");
  }
  if (output_size < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("output size %d is below 2", output_size));
  }
  std::size_t universe = 1;
  for (std::size_t i = 0; i < alphabet_sizes.size(); ++i) {
    if (alphabet_sizes[i] < 2) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "record %d has alphabet size %d; sizes must be at least 2", i,
          alphabet_sizes[i]));
    }
    universe *= static_cast<std::size_t>(alphabet_sizes[i]);
    if (universe > universe_cap) {
      return absl::OutOfRangeError(absl::StrFormat(
          "dataset universe exceeds the cap of %d", universe_cap));
    }
  }
  return ProblemSpace(std::move(alphabet_sizes), output_size);
}

absl::StatusOr<ProblemSpace> ProblemSpace::Binary(int record_count,
                                                  int output_size) {
  if (record_count < 1) {
    return absl::InvalidArgumentError("at least one record is required");
  }
  return Create(std::vector<int>(record_count, 2), output_size);
}

absl::StatusOr<std::size_t> ProblemSpace::EncodeIndex(
    std::span<const int> symbols) const {
  if (symbols.size() != sizes_.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected %d symbols, got %d", sizes_.size(), symbols.size()));
  }
  std::size_t x = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (symbols[i] < 0 || symbols[i] >= sizes_[i]) {
      return absl::OutOfRangeError(absl::StrFormat(
          "symbol %d of record %d is outside [0, %d)", symbols[i], i,
          sizes_[i]));
    }
    x = x * sizes_[i] + static_cast<std::size_t>(symbols[i]);
  }
  return x;
}

std::vector<int> ProblemSpace::DecodeIndex(std::size_t x) const {
  std::vector<int> symbols(sizes_.size());
  for (int i = 0; i < record_count(); ++i) symbols[i] = Digit(x, i);
  return symbols;
}

absl::StatusOr<JointPrior> JointPrior::Create(std::vector<double> probs) {
  if (probs.empty()) return absl::InvalidArgumentError("empty prior");
  if (absl::Status s = CheckSimplex(probs, kSimplexTolerance, "prior");
      !s.ok()) {
    return s;
  }
  NormalizeInPlace(probs);
  return JointPrior(std::move(probs));
}

JointPrior JointPrior::Normalized(std::vector<double> weights) {
  NormalizeInPlace(weights);
  return JointPrior(std::move(weights));
}

JointPrior JointPrior::Uniform(std::size_t size) {
  return JointPrior(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

absl::StatusOr<Mechanism> Mechanism::Create(Matrix rows) {
  if (rows.empty()) return absl::InvalidArgumentError("empty mechanism");
  for (std::size_t x = 0; x < rows.rows(); ++x) {
    if (absl::Status s = CheckSimplex(rows.Row(x), kSimplexTolerance,
                                      absl::StrFormat("mechanism row %d", x));
        !s.ok()) {
      return s;
    }
    NormalizeInPlace(rows.Row(x));
  }
  return Mechanism(std::move(rows));
}

Mechanism Mechanism::Normalized(Matrix weights) {
  for (std::size_t x = 0; x < weights.rows(); ++x) {
    NormalizeInPlace(weights.Row(x));
  }
  return Mechanism(std::move(weights));
}

absl::StatusOr<Mechanism> Mechanism::Constant(std::size_t input_size,
                                              std::span<const double> row) {
  Matrix rows(input_size, row.size());
  for (std::size_t x = 0; x < input_size; ++x) {
    std::copy(row.begin(), row.end(), rows.Row(x).begin());
  }
  return Create(std::move(rows));
}

Mechanism MixMechanisms(const Mechanism& a, const Mechanism& b,
                        double weight) {
  Matrix out(a.input_size(), a.output_size());
  auto dst = out.data();
  auto pa = a.rows().data();
  auto pb = b.rows().data();
  for (std::size_t k = 0; k < dst.size(); ++k) {
    dst[k] = (1.0 - weight) * pa[k] + weight * pb[k];
  }
  return Mechanism::Normalized(std::move(out));
}

RecordView ExtractView(const ProblemSpace& space, const JointPrior& prior,
                       int record) {
  const int ni = space.alphabet_size(record);
  const std::size_t rest = space.rest_size(record);
  RecordView view;
  view.record_index = record;
  view.marginal.assign(ni, 0.0);
  view.conditional = Matrix(ni, rest);
  for (int a = 0; a < ni; ++a) {
    double mass = 0.0;
    for (std::size_t r = 0; r < rest; ++r) {
      const double p = prior[space.JoinIndex(record, a, r)];
      view.conditional(a, r) = p;
      mass += p;
    }
    view.marginal[a] = mass;
    auto row = view.conditional.Row(a);
    if (mass > 0.0) {
      for (double& e : row) e /= mass;
    } else {
      for (double& e : row) e = 1.0 / static_cast<double>(rest);
    }
  }
  return view;
}

JointPrior ComposeView(const ProblemSpace& space, const RecordView& view) {
  const int i = view.record_index;
  std::vector<double> probs(space.universe_size());
  for (std::size_t x = 0; x < probs.size(); ++x) {
    const int a = space.Digit(x, i);
    probs[x] = view.marginal[a] * view.conditional(a, space.RestIndex(x, i));
  }
  return JointPrior::Normalized(std::move(probs));
}

OutputChannel ComputeOutputChannel(const ProblemSpace& space,
                                   const RecordView& view,
                                   const Mechanism& mechanism) {
  const int i = view.record_index;
  const int ni = space.alphabet_size(i);
  const std::size_t rest = space.rest_size(i);
  const std::size_t m = mechanism.output_size();
  OutputChannel channel;
  channel.given_record = Matrix(ni, m);
  channel.output.assign(m, 0.0);
  for (int a = 0; a < ni; ++a) {
    auto out = channel.given_record.Row(a);
    for (std::size_t r = 0; r < rest; ++r) {
      const double w = view.conditional(a, r);
      if (w == 0.0) continue;
      auto q = mechanism.Row(space.JoinIndex(i, a, r));
      for (std::size_t y = 0; y < m; ++y) out[y] += w * q[y];
    }
    for (std::size_t y = 0; y < m; ++y) {
      channel.output[y] += view.marginal[a] * out[y];
    }
  }
  return channel;
}

}  // namespace privleak

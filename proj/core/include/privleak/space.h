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

// Domain types for discrete dataset universes: the product space of record
// alphabets, adversarial priors over it, mechanisms (channels) from it to a
// finite output alphabet, and the per-record marginal/conditional
// factorization of a prior.
//
// Datasets are addressed by a mixed-radix index with record 0 as the
// slowest-varying digit, so for alphabet sizes (2, 3) the dataset (1, 2) has
// index 1 * 3 + 2 = 5. Mechanism and prior files rely on this order.

#ifndef PRIVLEAK_SPACE_H_
#define PRIVLEAK_SPACE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "privleak/matrix.h"

namespace privleak {

inline constexpr std::size_t kDefaultUniverseCap = std::size_t{1} << 24;

// Tolerance on the total mass of a probability vector or channel row.
inline constexpr double kSimplexTolerance = 1e-9;

class ProblemSpace {
 public:
  // Rejects alphabets or outputs smaller than 2, and universes larger than
  // `universe_cap`.
  static absl::StatusOr<ProblemSpace> Create(
      std::vector<int> alphabet_sizes, int output_size,
      std::size_t universe_cap = kDefaultUniverseCap);

  // n binary records.
  static absl::StatusOr<ProblemSpace> Binary(int record_count,
                                             int output_size);

  int record_count() const { return static_cast<int>(sizes_.size()); }
  int alphabet_size(int i) const { return sizes_[i]; }
  std::span<const int> alphabet_sizes() const { return sizes_; }
  int output_size() const { return output_size_; }
  std::size_t universe_size() const { return universe_; }

  // Number of joint assignments of the records other than `i`.
  std::size_t rest_size(int i) const { return universe_ / sizes_[i]; }

  absl::StatusOr<std::size_t> EncodeIndex(std::span<const int> symbols) const;
  std::vector<int> DecodeIndex(std::size_t x) const;

  // Symbol of record `i` in dataset `x`.
  int Digit(std::size_t x, int i) const {
    return static_cast<int>((x / strides_[i]) % sizes_[i]);
  }

  // Index of x_{-i} in [0, rest_size(i)), keeping the mixed-radix order of
  // the remaining records.
  std::size_t RestIndex(std::size_t x, int i) const {
    const std::size_t stride = strides_[i];
    return (x / (stride * sizes_[i])) * stride + x % stride;
  }

  // Inverse of (Digit, RestIndex).
  std::size_t JoinIndex(int i, int symbol, std::size_t rest) const {
    const std::size_t stride = strides_[i];
    return (rest / stride) * stride * sizes_[i] +
           static_cast<std::size_t>(symbol) * stride + rest % stride;
  }

 private:
  ProblemSpace(std::vector<int> sizes, int output_size);

  std::vector<int> sizes_;
  std::vector<std::size_t> strides_;
  int output_size_ = 0;
  std::size_t universe_ = 0;
};

// Adversary belief p(x) over the dataset universe.
class JointPrior {
 public:
  JointPrior() = default;

  // Requires nonnegative entries summing to 1 within kSimplexTolerance; the
  // stored vector is renormalized exactly.
  static absl::StatusOr<JointPrior> Create(std::vector<double> probs);

  // Clamps negatives to zero and divides by the total. The total must be
  // positive.
  static JointPrior Normalized(std::vector<double> weights);

  static JointPrior Uniform(std::size_t size);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t x) const { return probs_[x]; }

  friend bool operator==(const JointPrior&, const JointPrior&) = default;

 private:
  explicit JointPrior(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

// Row-stochastic channel q(y|x), one row per dataset.
class Mechanism {
 public:
  Mechanism() = default;

  static absl::StatusOr<Mechanism> Create(Matrix rows);

  // Per-row version of JointPrior::Normalized.
  static Mechanism Normalized(Matrix weights);

  // Every row equal to `row`.
  static absl::StatusOr<Mechanism> Constant(std::size_t input_size,
                                            std::span<const double> row);

  std::size_t input_size() const { return rows_.rows(); }
  std::size_t output_size() const { return rows_.cols(); }
  const Matrix& rows() const { return rows_; }
  std::span<const double> Row(std::size_t x) const { return rows_.Row(x); }
  double operator()(std::size_t x, std::size_t y) const { return rows_(x, y); }

  friend bool operator==(const Mechanism&, const Mechanism&) = default;

 private:
  explicit Mechanism(Matrix rows) : rows_(std::move(rows)) {}

  Matrix rows_;
};

// (1 - weight) * a + weight * b, row by row.
Mechanism MixMechanisms(const Mechanism& a, const Mechanism& b, double weight);

// Factorization p(x) = p(x_i) p(x_{-i} | x_i) of a prior around record i.
// Rows of `conditional` whose marginal entry is zero hold the uniform row.
struct RecordView {
  int record_index = 0;
  std::vector<double> marginal;  // n_i
  Matrix conditional;            // n_i x n_{-i}
};

RecordView ExtractView(const ProblemSpace& space, const JointPrior& prior,
                       int record);

JointPrior ComposeView(const ProblemSpace& space, const RecordView& view);

// p(y | x_i) for every symbol of the view's record, plus p(y).
struct OutputChannel {
  Matrix given_record;         // n_i x |Y|
  std::vector<double> output;  // |Y|
};

OutputChannel ComputeOutputChannel(const ProblemSpace& space,
                                   const RecordView& view,
                                   const Mechanism& mechanism);

}  // namespace privleak

#endif  // PRIVLEAK_SPACE_H_

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

namespace privleak {

double Entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double BinaryEntropy(double p) {
  const double q[2] = {p, 1.0 - p};
  return Entropy(q);
}

double JointEntropyViaChain(const RecordView& view) {
  double h = Entropy(view.marginal);
  for (std::size_t a = 0; a < view.marginal.size(); ++a) {
    if (view.marginal[a] > 0.0) {
      h += view.marginal[a] * Entropy(view.conditional.Row(a));
    }
  }
  return h;
}

double MutualInformation(std::span<const double> marginal,
                         const OutputChannel& channel) {
  const std::size_t m = channel.output.size();
  double total = 0.0;
  for (std::size_t a = 0; a < marginal.size(); ++a) {
    if (marginal[a] <= 0.0) continue;
    double d = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      const double pya = channel.given_record(a, y);
      if (pya > 0.0) d += pya * (SafeLog(pya) - SafeLog(channel.output[y]));
    }
    total += marginal[a] * d;
  }
  return total < 0.0 ? 0.0 : total;
}

double MutualInformation(const ProblemSpace& space, const RecordView& view,
                         const Mechanism& mechanism) {
  return MutualInformation(view.marginal,
                           ComputeOutputChannel(space, view, mechanism));
}

double RecordLeakage(const ProblemSpace& space, const JointPrior& prior,
                     const Mechanism& mechanism, int record) {
  return MutualInformation(space, ExtractView(space, prior, record),
                           mechanism);
}

std::vector<double> RecordLeakages(const ProblemSpace& space,
                                   const JointPrior& prior,
                                   const Mechanism& mechanism) {
  std::vector<double> out(space.record_count());
  for (int i = 0; i < space.record_count(); ++i) {
    out[i] = RecordLeakage(space, prior, mechanism, i);
  }
  return out;
}

WorstRecord MaxRecordLeakage(const ProblemSpace& space,
                             const JointPrior& prior,
                             const Mechanism& mechanism) {
  WorstRecord worst{0, -1.0};
  for (int i = 0; i < space.record_count(); ++i) {
    const double v = RecordLeakage(space, prior, mechanism, i);
    if (v > worst.leakage) worst = {i, v};
  }
  return worst;
}

Matrix GradMiMechanism(const ProblemSpace& space, const JointPrior& prior,
                       const Mechanism& mechanism, int record) {
  const RecordView view = ExtractView(space, prior, record);
  const OutputChannel ch = ComputeOutputChannel(space, view, mechanism);
  const std::size_t m = mechanism.output_size();
  Matrix log_ratio(view.marginal.size(), m);
  for (std::size_t a = 0; a < view.marginal.size(); ++a) {
    for (std::size_t y = 0; y < m; ++y) {
      log_ratio(a, y) =
          SafeLog(ch.given_record(a, y)) - SafeLog(ch.output[y]);
    }
  }
  Matrix grad(space.universe_size(), m);
  for (std::size_t x = 0; x < grad.rows(); ++x) {
    if (prior[x] == 0.0) continue;
    const int a = space.Digit(x, record);
    for (std::size_t y = 0; y < m; ++y) {
      grad(x, y) = prior[x] * log_ratio(a, y);
    }
  }
  return grad;
}

std::vector<double> GradMiMarginal(const ProblemSpace& space,
                                   const RecordView& view,
                                   const Mechanism& mechanism) {
  const OutputChannel ch = ComputeOutputChannel(space, view, mechanism);
  std::vector<double> grad(view.marginal.size());
  for (std::size_t a = 0; a < grad.size(); ++a) {
    double d = 0.0;
    for (std::size_t y = 0; y < ch.output.size(); ++y) {
      const double pya = ch.given_record(a, y);
      if (pya > 0.0) d += pya * (SafeLog(pya) - SafeLog(ch.output[y]));
    }
    grad[a] = d - 1.0;
  }
  return grad;
}

std::vector<double> GradMiConditionalRow(const ProblemSpace& space,
                                         const RecordView& view,
                                         const Mechanism& mechanism,
                                         int row) {
  const int i = view.record_index;
  const std::size_t rest = space.rest_size(i);
  std::vector<double> grad(rest, 0.0);
  const double pa = view.marginal[row];
  if (pa <= 0.0) return grad;
  const OutputChannel ch = ComputeOutputChannel(space, view, mechanism);
  const std::size_t m = mechanism.output_size();
  std::vector<double> log_ratio(m);
  for (std::size_t y = 0; y < m; ++y) {
    log_ratio[y] = SafeLog(ch.given_record(row, y)) - SafeLog(ch.output[y]);
  }
  for (std::size_t r = 0; r < rest; ++r) {
    auto q = mechanism.Row(space.JoinIndex(i, row, r));
    double s = 0.0;
    for (std::size_t y = 0; y < m; ++y) s += q[y] * log_ratio[y];
    grad[r] = pa * s;
  }
  return grad;
}

std::vector<double> GradEntropyJoint(const JointPrior& prior) {
  std::vector<double> grad(prior.size());
  for (std::size_t x = 0; x < grad.size(); ++x) {
    grad[x] = -SafeLog(prior[x]) - 1.0;
  }
  return grad;
}

std::vector<double> GradEntropyMarginal(const RecordView& view) {
  std::vector<double> grad(view.marginal.size());
  for (std::size_t a = 0; a < grad.size(); ++a) {
    grad[a] = Entropy(view.conditional.Row(a)) - SafeLog(view.marginal[a]) -
              1.0;
  }
  return grad;
}

std::vector<double> GradEntropyConditionalRow(const RecordView& view,
                                              int row) {
  const double pa = view.marginal[row];
  auto c = view.conditional.Row(row);
  std::vector<double> grad(c.size());
  for (std::size_t r = 0; r < c.size(); ++r) {
    grad[r] = -pa * (SafeLog(pa * c[r]) + 1.0);
  }
  return grad;
}

std::vector<double> GradEntropy(EntropyTarget target,
                                const ProblemSpace& space,
                                const JointPrior& prior, int record,
                                int row) {
  switch (target) {
    case EntropyTarget::kJoint:
      return GradEntropyJoint(prior);
    case EntropyTarget::kMarginal:
      return GradEntropyMarginal(ExtractView(space, prior, record));
    case EntropyTarget::kConditionalRow:
      return GradEntropyConditionalRow(ExtractView(space, prior, record), row);
  }
  return {};
}

}  // namespace privleak

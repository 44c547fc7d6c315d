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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "privleak/info_theory.h"

namespace privleak {
namespace {

// Marginal entries below this are treated as zero mass.
constexpr double kZeroMass = 1e-12;
// Deterministic conditionals are enumerated exactly up to this many
// matrices.
constexpr double kEnumerationCap = 4096.0;

// p(y | a) for every a, from the conditional rows alone.
Matrix ChannelRows(const ProblemSpace& space, const RecordView& view,
                   const Mechanism& mechanism) {
  return ComputeOutputChannel(space, view, mechanism).given_record;
}

double MiFromChannel(std::span<const double> marginal, const Matrix& channel) {
  const std::size_t m = channel.cols();
  std::vector<double> py(m, 0.0);
  for (std::size_t a = 0; a < marginal.size(); ++a) {
    for (std::size_t y = 0; y < m; ++y) py[y] += marginal[a] * channel(a, y);
  }
  double total = 0.0;
  for (std::size_t a = 0; a < marginal.size(); ++a) {
    if (marginal[a] <= 0.0) continue;
    double d = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      const double p = channel(a, y);
      if (p > 0.0) d += p * (SafeLog(p) - SafeLog(py[y]));
    }
    total += marginal[a] * d;
  }
  return std::max(total, 0.0);
}

double JointEntropy(std::span<const double> marginal,
                    std::span<const double> row_entropy) {
  double h = Entropy(marginal);
  for (std::size_t a = 0; a < marginal.size(); ++a) {
    h += marginal[a] * row_entropy[a];
  }
  return h;
}

// Unit vector for row `a` that maximizes the leakage with the other rows of
// `view` fixed; ties go to the lowest index.
std::size_t BestUnitRow(const ProblemSpace& space, const RecordView& view,
                        const Mechanism& mechanism, int a, double* value) {
  const int i = view.record_index;
  const std::size_t rest = space.rest_size(i);
  Matrix channel = ChannelRows(space, view, mechanism);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t r = 0; r < rest; ++r) {
    auto q = mechanism.Row(space.JoinIndex(i, a, r));
    std::copy(q.begin(), q.end(), channel.Row(a).begin());
    const double v = MiFromChannel(view.marginal, channel);
    if (v > best_value) {
      best_value = v;
      best = r;
    }
  }
  *value = best_value;
  return best;
}

void SetUnitRow(Matrix& conditional, int a, std::size_t r) {
  auto row = conditional.Row(a);
  std::fill(row.begin(), row.end(), 0.0);
  row[r] = 1.0;
}

// Largest weight t in [0, 1] with H((1 - t) from + t to) >= b, assuming the
// start point is feasible. Entropy is concave along the segment.
std::vector<double> MixToEntropy(std::span<const double> from,
                                 std::span<const double> to,
                                 std::span<const double> row_entropy,
                                 double b) {
  auto at = [&](double t) {
    std::vector<double> p(from.size());
    for (std::size_t a = 0; a < p.size(); ++a) {
      p[a] = (1.0 - t) * from[a] + t * to[a];
    }
    return p;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (JointEntropy(at(mid), row_entropy) >= b) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return at(lo);
}

// Moves joint entropy between rows k and l along their temperature paths,
// keeping p_k H_k + p_l H_l fixed. Row-wise ascent alone stalls when one
// row has collapsed to a vertex and another carries the whole entropy
// budget; shifting entropy between the two escapes that corner. Returns the
// new leakage; `work` is only modified on improvement.
double TransferEntropy(const ProblemSpace& space, RecordView& work,
                       const Mechanism& mechanism, int k, int l,
                       double max_row_entropy, double current,
                       const LeakageConfig& config,
                       const EntropyProjectionConfig& projection) {
  const double pk = work.marginal[k];
  const double pl = work.marginal[l];
  const std::vector<double> row_k(work.conditional.Row(k).begin(),
                                  work.conditional.Row(k).end());
  const std::vector<double> row_l(work.conditional.Row(l).begin(),
                                  work.conditional.Row(l).end());
  const double hk = Entropy(row_k);
  const double hl = Entropy(row_l);
  const double t_low = -std::min(pk * hk, pl * (max_row_entropy - hl));
  const double t_high = std::min(pk * (max_row_entropy - hk), pl * hl);
  if (t_high - t_low < 1e-12) return current;

  const double slack = 0.5 * config.entropy_tolerance;
  auto evaluate = [&](double t, bool keep) {
    const double target_k =
        std::clamp(hk + t / pk + slack, 0.0, max_row_entropy);
    const double target_l =
        std::clamp(hl - t / pl + slack, 0.0, max_row_entropy);
    absl::StatusOr<EntropyProjection> wk =
        ProjectEntropy(row_k, target_k, projection);
    absl::StatusOr<EntropyProjection> wl =
        ProjectEntropy(row_l, target_l, projection);
    if (!wk.ok() || !wl.ok()) return -1.0;
    if (pk * Entropy(wk->distribution) + pl * Entropy(wl->distribution) <
        pk * hk + pl * hl - config.entropy_tolerance) {
      return -1.0;
    }
    std::copy(wk->distribution.begin(), wk->distribution.end(),
              work.conditional.Row(k).begin());
    std::copy(wl->distribution.begin(), wl->distribution.end(),
              work.conditional.Row(l).begin());
    const double v = MutualInformation(space, work, mechanism);
    if (!keep) {
      std::copy(row_k.begin(), row_k.end(), work.conditional.Row(k).begin());
      std::copy(row_l.begin(), row_l.end(), work.conditional.Row(l).begin());
    }
    return v;
  };

  constexpr int kGrid = 16;
  double best_t = 0.0;
  double best_v = current;
  const double spacing = (t_high - t_low) / kGrid;
  for (int g = 0; g <= kGrid; ++g) {
    const double t = t_low + g * spacing;
    const double v = evaluate(t, false);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  // Golden-section refinement around the best grid point.
  double a = std::max(t_low, best_t - spacing);
  double b = std::min(t_high, best_t + spacing);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = evaluate(c, false);
  double fd = evaluate(d, false);
  for (int it = 0; it < 40 && b - a > 1e-12; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = evaluate(c, false);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = evaluate(d, false);
    }
  }
  if (fc > best_v) {
    best_v = fc;
    best_t = c;
  }
  if (fd > best_v) {
    best_v = fd;
    best_t = d;
  }
  if (best_v <= current) return current;
  const double kept = evaluate(best_t, true);
  if (kept < current) {
    std::copy(row_k.begin(), row_k.end(), work.conditional.Row(k).begin());
    std::copy(row_l.begin(), row_l.end(), work.conditional.Row(l).begin());
    return current;
  }
  return kept;
}

JointPrior RandomFeasiblePrior(const ProblemSpace& space, double b,
                               std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::exponential_distribution<double> gamma1(1.0);
  std::vector<double> w(space.universe_size());
  for (double& e : w) e = gamma1(rng);
  JointPrior prior = JointPrior::Normalized(std::move(w));
  if (Entropy(prior.probs()) >= b) return prior;
  const double max_h = std::log(static_cast<double>(space.universe_size()));
  absl::StatusOr<EntropyProjection> lifted =
      ProjectEntropy(prior.probs(), std::min(b + 1e-8, max_h));
  if (!lifted.ok()) return JointPrior::Uniform(space.universe_size());
  return JointPrior::Normalized(std::move(lifted->distribution));
}

}  // namespace

double ComputeCik(const RecordView& view, double b, int k) {
  const double pk = view.marginal[k];
  double others = 0.0;
  for (std::size_t l = 0; l < view.marginal.size(); ++l) {
    if (static_cast<int>(l) == k || view.marginal[l] == 0.0) continue;
    others += view.marginal[l] / pk * Entropy(view.conditional.Row(l));
  }
  return (b - Entropy(view.marginal)) / pk - others;
}

MarginalUpdate OptimizeMarginal(const ProblemSpace& space,
                                const RecordView& view,
                                const Mechanism& mechanism,
                                const LeakageConfig& config) {
  const std::size_t ni = view.marginal.size();
  const double b = config.entropy_bound;
  const Matrix channel = ChannelRows(space, view, mechanism);
  const std::size_t m = channel.cols();
  std::vector<double> row_entropy(ni);
  for (std::size_t a = 0; a < ni; ++a) {
    row_entropy[a] = Entropy(view.conditional.Row(a));
  }

  const std::vector<double> start = view.marginal;
  const double start_value = MiFromChannel(start, channel);
  MarginalUpdate best{start, start_value};

  std::vector<double> p = start;
  std::vector<double> py(m);
  std::vector<double> logits(ni);
  double s = 0.0;
  double previous = start_value;
  for (int t = 0; t < config.max_inner_iterations; ++t) {
    std::fill(py.begin(), py.end(), 0.0);
    for (std::size_t a = 0; a < ni; ++a) {
      for (std::size_t y = 0; y < m; ++y) py[y] += p[a] * channel(a, y);
    }
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < ni; ++a) {
      if (p[a] <= 0.0) continue;
      double d = 0.0;
      for (std::size_t y = 0; y < m; ++y) {
        const double c = channel(a, y);
        if (c > 0.0) d += c * (SafeLog(c) - SafeLog(py[y]));
      }
      const double log_p = SafeLog(p[a]);
      logits[a] = log_p + d / (1.0 + s) +
                  s / (1.0 + s) * (row_entropy[a] - log_p);
      top = std::max(top, logits[a]);
    }
    double total = 0.0;
    for (std::size_t a = 0; a < ni; ++a) {
      p[a] = p[a] > 0.0 ? std::exp(logits[a] - top) : 0.0;
      total += p[a];
    }
    for (double& e : p) e /= total;

    const double h = JointEntropy(p, row_entropy);
    s = std::max(0.0, s - config.ba_step_size * (h - b));
    const double value = MiFromChannel(p, channel);
    if (h >= b && value > best.leakage) best = {p, value};
    if (std::abs(value - previous) < config.tolerance) break;
    previous = value;
  }

  // An infeasible final iterate is pulled back toward the feasible start.
  if (JointEntropy(p, row_entropy) < b) {
    std::vector<double> restored = MixToEntropy(start, p, row_entropy, b);
    const double value = MiFromChannel(restored, channel);
    if (value > best.leakage && JointEntropy(restored, row_entropy) >= b) {
      best = {std::move(restored), value};
    }
  }
  return best;
}

absl::StatusOr<ConditionalUpdate> OptimizeConditionals(
    const ProblemSpace& space, const RecordView& view,
    const Mechanism& mechanism, const LeakageConfig& config,
    const EntropyProjectionConfig& projection) {
  const int ni = static_cast<int>(view.marginal.size());
  const std::size_t rest = space.rest_size(view.record_index);
  const double max_row_entropy = std::log(static_cast<double>(rest));
  const double b = config.entropy_bound;

  RecordView work = view;
  double value = MutualInformation(space, work, mechanism);
  ConditionalUpdate best{work.conditional, value, {value}};

  for (int t = 0; t < config.max_inner_iterations; ++t) {
    const double previous = value;
    for (int k = 0; k < ni; ++k) {
      if (work.marginal[k] < kZeroMass) {
        double unused = 0.0;
        SetUnitRow(work.conditional, k,
                   BestUnitRow(space, work, mechanism, k, &unused));
        continue;
      }
      const double c = ComputeCik(work, b, k);
      if (c > max_row_entropy + 1e-9) {
        return absl::FailedPreconditionError(absl::StrFormat(
            "row %d needs entropy %.6g above its maximum %.6g", k, c,
            max_row_entropy));
      }
      if (c <= 0.0) {
        double unused = 0.0;
        SetUnitRow(work.conditional, k,
                   BestUnitRow(space, work, mechanism, k, &unused));
        continue;
      }
      const double target =
          std::min(c + 0.5 * config.entropy_tolerance, max_row_entropy);
      const double current = MutualInformation(space, work, mechanism);
      const std::vector<double> grad =
          GradMiConditionalRow(space, work, mechanism, k);
      const std::vector<double> row(work.conditional.Row(k).begin(),
                                    work.conditional.Row(k).end());
      double eta = config.gd_initial_step;
      for (int iter = 0; iter < config.max_inner_iterations; ++iter) {
        std::vector<double> step(rest);
        for (std::size_t r = 0; r < rest; ++r) step[r] = row[r] + eta * grad[r];
        std::vector<double> candidate = ProjectSimplex(step);
        absl::StatusOr<EntropyProjection> projected =
            ProjectEntropy(candidate, target, projection);
        if (projected.ok()) {
          candidate = std::move(projected->distribution);
        } else if (Entropy(candidate) < c) {
          eta *= config.backtrack_factor;
          continue;
        }
        std::copy(candidate.begin(), candidate.end(),
                  work.conditional.Row(k).begin());
        if (MutualInformation(space, work, mechanism) >= current) break;
        std::copy(row.begin(), row.end(), work.conditional.Row(k).begin());
        eta *= config.backtrack_factor;
      }
    }
    value = MutualInformation(space, work, mechanism);
    for (int k = 0; k < ni; ++k) {
      if (work.marginal[k] < kZeroMass) continue;
      for (int l = k + 1; l < ni; ++l) {
        if (work.marginal[l] < kZeroMass) continue;
        value = TransferEntropy(space, work, mechanism, k, l,
                                max_row_entropy, value, config, projection);
      }
    }
    if (value > best.leakage) {
      best.leakage = value;
      best.conditional = work.conditional;
    }
    best.trace.push_back(best.leakage);
    if (std::abs(value - previous) <= config.tolerance) break;
  }
  return best;
}

ConditionalUpdate BestDeterministicConditionals(const ProblemSpace& space,
                                                const RecordView& view,
                                                const Mechanism& mechanism) {
  const int i = view.record_index;
  const int ni = static_cast<int>(view.marginal.size());
  const std::size_t rest = space.rest_size(i);
  const std::size_t m = mechanism.output_size();

  std::vector<int> active;
  for (int a = 0; a < ni; ++a) {
    if (view.marginal[a] >= kZeroMass) active.push_back(a);
  }
  RecordView work = view;
  for (int a = 0; a < ni; ++a) SetUnitRow(work.conditional, a, 0);

  if (std::pow(static_cast<double>(rest), active.size()) <= kEnumerationCap) {
    Matrix channel(ni, m);
    for (int a = 0; a < ni; ++a) {
      auto q = mechanism.Row(space.JoinIndex(i, a, 0));
      std::copy(q.begin(), q.end(), channel.Row(a).begin());
    }
    std::vector<std::size_t> choice(active.size(), 0);
    std::vector<std::size_t> best_choice = choice;
    double best_value = -1.0;
    while (true) {
      for (std::size_t j = 0; j < active.size(); ++j) {
        auto q = mechanism.Row(space.JoinIndex(i, active[j], choice[j]));
        std::copy(q.begin(), q.end(), channel.Row(active[j]).begin());
      }
      const double v = MiFromChannel(work.marginal, channel);
      if (v > best_value) {
        best_value = v;
        best_choice = choice;
      }
      // Odometer increment, last active row fastest.
      std::size_t j = active.size();
      while (j > 0 && ++choice[j - 1] == rest) choice[--j] = 0;
      if (j == 0) break;
    }
    for (std::size_t j = 0; j < active.size(); ++j) {
      SetUnitRow(work.conditional, active[j], best_choice[j]);
    }
    return {work.conditional, best_value, {best_value}};
  }

  double value = MutualInformation(space, work, mechanism);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool changed = false;
    for (int a : active) {
      double v = 0.0;
      const std::size_t r = BestUnitRow(space, work, mechanism, a, &v);
      if (v > value + 1e-15) {
        SetUnitRow(work.conditional, a, r);
        value = v;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return {work.conditional, value, {value}};
}

absl::StatusOr<LeakageResult> MaxLeakageFrom(const ProblemSpace& space,
                                             const Mechanism& mechanism,
                                             const LeakageConfig& config,
                                             const JointPrior& initial) {
  const double b = config.entropy_bound;
  if (Entropy(initial.probs()) < b - 1e-6) {
    return absl::InvalidArgumentError(
        "initial prior violates the entropy bound");
  }
  JointPrior current = initial;
  WorstRecord incumbent = MaxRecordLeakage(space, current, mechanism);
  LeakageResult result;
  result.trace.push_back(incumbent.leakage);

  for (int k = 0; k < config.max_outer_iterations; ++k) {
    const double previous = incumbent.leakage;
    JointPrior best_candidate = current;
    for (int i = 0; i < space.record_count(); ++i) {
      RecordView view = ExtractView(space, current, i);
      view.marginal = OptimizeMarginal(space, view, mechanism, config).marginal;
      if (b > Entropy(view.marginal)) {
        absl::StatusOr<ConditionalUpdate> update =
            OptimizeConditionals(space, view, mechanism, config);
        if (!update.ok()) continue;
        view.conditional = std::move(update->conditional);
      } else {
        view.conditional =
            BestDeterministicConditionals(space, view, mechanism).conditional;
      }
      JointPrior candidate = ComposeView(space, view);
      if (Entropy(candidate.probs()) < b - kEntropySlack) continue;
      const WorstRecord value = MaxRecordLeakage(space, candidate, mechanism);
      if (value.leakage > incumbent.leakage) {
        incumbent = value;
        best_candidate = std::move(candidate);
      }
    }
    current = std::move(best_candidate);
    result.trace.push_back(incumbent.leakage);
    result.iterations = k + 1;
    if (std::abs(incumbent.leakage - previous) < config.tolerance) break;
  }

  result.optimal_prior = current;
  result.worst_record = incumbent.record;
  result.leakage = RecordLeakage(space, current, mechanism, incumbent.record);
  result.feasible = Entropy(current.probs()) >= b - 1e-6;
  result.restarts_used = 1;
  return result;
}

absl::StatusOr<LeakageResult> MaxLeakage(const ProblemSpace& space,
                                         const Mechanism& mechanism,
                                         const LeakageConfig& config) {
  const double max_h = std::log(static_cast<double>(space.universe_size()));
  const double b = config.entropy_bound;
  if (b < 0.0 || b > max_h + 1e-12) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "entropy bound %.6g is outside [0, log|X|] = [0, %.6g]", b, max_h));
  }
  if (mechanism.input_size() != space.universe_size() ||
      static_cast<int>(mechanism.output_size()) != space.output_size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "mechanism is %dx%d but the space needs %dx%d",
        mechanism.input_size(), mechanism.output_size(),
        space.universe_size(), space.output_size()));
  }
  const int restarts = std::max(1, config.restarts);
  LeakageResult best;
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    const JointPrior initial =
        r == 0 ? JointPrior::Uniform(space.universe_size())
               : RandomFeasiblePrior(space, b, config.seed, r);
    absl::StatusOr<LeakageResult> run =
        MaxLeakageFrom(space, mechanism, config, initial);
    if (!run.ok()) return run.status();
    if (!have_best || run->leakage > best.leakage) {
      best = *std::move(run);
      have_best = true;
    }
  }
  best.restarts_used = restarts;
  return best;
}

}  // namespace privleak

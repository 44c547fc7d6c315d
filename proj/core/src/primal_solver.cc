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

#include "privleak/primal_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "privleak/info_theory.h"
#include "privleak/parallel.h"

namespace privleak {
namespace {

void AddScaled(Matrix& dst, const Matrix& src, double scale) {
  auto d = dst.data();
  auto s = src.data();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] += scale * s[k];
}

struct Audit {
  double leakage = 0.0;
  JointPrior prior;
  std::vector<double> trace;
};

absl::StatusOr<Audit> RunAudit(const ProblemSpace& space,
                               const Mechanism& mechanism,
                               const LeakageConfig& config) {
  absl::StatusOr<LeakageResult> r = MaxLeakage(space, mechanism, config);
  if (!r.ok()) return r.status();
  return Audit{r->leakage, std::move(r->optimal_prior), std::move(r->trace)};
}

}  // namespace

PenaltyValue PenaltyDistortion(const ProblemSpace& space,
                               const JointPrior& truth,
                               const Mechanism& mechanism, const Query& query,
                               const DistortionMetric& metric, double bound) {
  const double e =
      ExpectedDistortion(space, truth, mechanism, query, metric);
  const double sp = Softplus(e - bound);
  PenaltyValue out{sp * sp, DistortionWeights(space, truth, query, metric)};
  const double scale = 2.0 * sp * Sigmoid(e - bound);
  for (double& g : out.grad.data()) g *= scale;
  return out;
}

PenaltyValue MechanismObjectiveGrad(const ProblemSpace& space,
                                    const JointPrior& prior,
                                    const JointPrior& truth,
                                    const Mechanism& mechanism, double lambda,
                                    double bound, const Query& query,
                                    const DistortionMetric& metric) {
  const WorstRecord worst = MaxRecordLeakage(space, prior, mechanism);
  PenaltyValue penalty =
      PenaltyDistortion(space, truth, mechanism, query, metric, bound);
  PenaltyValue out{worst.leakage + lambda * penalty.value,
                   GradMiMechanism(space, prior, mechanism, worst.record)};
  AddScaled(out.grad, penalty.grad, lambda);
  return out;
}

absl::StatusOr<Mechanism> InitialPrimalMechanism(
    const ProblemSpace& space, const JointPrior& truth, const Query& query,
    const DistortionMetric& metric, double bound) {
  const Mechanism exact = ExactRelease(space, query);
  const Mechanism uniform = UniformMechanism(space);
  const double e_exact =
      ExpectedDistortion(space, truth, exact, query, metric);
  const double e_uniform =
      ExpectedDistortion(space, truth, uniform, query, metric);
  if (e_exact > bound + 1e-12) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "distortion bound %.6g is below the exact-release distortion %.6g",
        bound, e_exact));
  }
  double theta = 1.0;
  if (e_uniform > bound) theta = (bound - e_exact) / (e_uniform - e_exact);
  return MixMechanisms(exact, uniform, std::clamp(theta, 0.0, 1.0));
}

Mechanism UpdateMechanism(const ProblemSpace& space,
                          const std::vector<JointPrior>& pool,
                          const JointPrior& truth, const Query& query,
                          const DistortionMetric& metric,
                          const Mechanism& initial, const PrimalConfig& config,
                          MechanismUpdateStats* stats) {
  const double bound = config.distortion_bound;
  const double margin = config.constraint_margin;
  const Matrix weights = DistortionWeights(space, truth, query, metric);
  double lambda = config.penalty_init;

  auto objective = [&](const Mechanism& q, Matrix* grad) {
    const PoolWorst worst = PoolLeakage(space, pool, q);
    const double e = ExpectedDistortion(space, truth, q, query, metric);
    const double sp = Softplus(e - bound);
    if (grad != nullptr) {
      *grad = GradMiMechanism(space, pool[worst.prior], q, worst.record);
      AddScaled(*grad, weights, lambda * 2.0 * sp * Sigmoid(e - bound));
    }
    return worst.leakage + lambda * sp * sp;
  };

  Mechanism q = initial;
  Mechanism best = initial;
  double best_j = std::numeric_limits<double>::infinity();
  double e_prev = std::numeric_limits<double>::infinity();
  for (int round = 0; round < config.max_penalty_rounds; ++round) {
    DescentResult step = ExpGradientDescent(q, objective, config.descent);
    if (stats != nullptr) {
      stats->descent_steps += step.iterations;
      stats->armijo_violations += step.armijo_violations;
      stats->stalls += step.stalled ? 1 : 0;
    }
    const double e =
        ExpectedDistortion(space, truth, step.mechanism, query, metric);
    const double sp = Softplus(e - bound);
    const double j = PoolLeakage(space, pool, step.mechanism).leakage +
                     lambda * sp * sp;
    if (e <= bound + margin && j < best_j) {
      best_j = j;
      best = step.mechanism;
    }
    if (e > bound + margin) {
      lambda *= config.penalty_factor;
    } else if (e < bound - margin) {
      lambda /= config.penalty_factor;
    }
    q = std::move(step.mechanism);
    if (std::abs(e - e_prev) < config.tolerance && e <= bound + margin) break;
    e_prev = e;
  }
  return best;
}

absl::StatusOr<TradeoffPoint> PrimalTradeoff(const ProblemSpace& space,
                                             const JointPrior& truth,
                                             const Query& query,
                                             const DistortionMetric& metric,
                                             const PrimalConfig& config) {
  if (config.distortion_bound < 0.0) {
    return absl::InvalidArgumentError("distortion bound must be nonnegative");
  }
  if (absl::Status s = query.Validate(space); !s.ok()) return s;
  const double bound = config.distortion_bound;
  const double margin = config.constraint_margin;
  absl::StatusOr<Mechanism> start =
      InitialPrimalMechanism(space, truth, query, metric, bound);
  if (!start.ok()) return start.status();

  LeakageConfig leakage = config.leakage;
  leakage.entropy_bound = config.entropy_bound;

  TradeoffPoint point;
  point.bound_requested = bound;
  std::optional<TradeoffPoint> incumbent;
  std::vector<JointPrior> pool;
  MechanismUpdateStats stats;
  Mechanism q = *start;
  double previous = std::numeric_limits<double>::infinity();
  int rounds = 0;
  for (int k = 0; k < config.max_outer_rounds; ++k) {
    absl::StatusOr<Audit> audit = RunAudit(space, q, leakage);
    if (!audit.ok()) return audit.status();
    point.audit_traces.push_back(audit->trace);
    rounds = k + 1;
    const double e = ExpectedDistortion(space, truth, q, query, metric);
    if (e <= bound + margin &&
        (!incumbent || audit->leakage < incumbent->leakage)) {
      incumbent = TradeoffPoint{};
      incumbent->mechanism = q;
      incumbent->prior = audit->prior;
      incumbent->leakage = audit->leakage;
      incumbent->distortion = e;
    }
    pool.push_back(std::move(audit->prior));
    if (rounds >= config.min_outer_rounds &&
        std::abs(audit->leakage - previous) <= config.tolerance) {
      break;
    }
    previous = audit->leakage;
    if (k + 1 == config.max_outer_rounds) break;
    q = UpdateMechanism(space, pool, truth, query, metric, q, config, &stats);
  }

  // Spend leftover distortion budget on noise: mixing toward uniform rows
  // cannot raise the worst-case leakage, which is convex in the mechanism.
  const Mechanism uniform = UniformMechanism(space);
  const double e_uniform =
      ExpectedDistortion(space, truth, uniform, query, metric);
  if (incumbent->distortion < bound && e_uniform > incumbent->distortion) {
    const double theta =
        std::min(1.0, (bound - incumbent->distortion) /
                          (e_uniform - incumbent->distortion));
    Mechanism mixed = MixMechanisms(incumbent->mechanism, uniform, theta);
    absl::StatusOr<Audit> audit = RunAudit(space, mixed, leakage);
    if (!audit.ok()) return audit.status();
    point.audit_traces.push_back(audit->trace);
    if (audit->leakage <= incumbent->leakage) {
      incumbent->mechanism = std::move(mixed);
      incumbent->prior = std::move(audit->prior);
      incumbent->leakage = audit->leakage;
      incumbent->distortion =
          ExpectedDistortion(space, truth, incumbent->mechanism, query, metric);
    }
  }

  point.mechanism = std::move(incumbent->mechanism);
  point.prior = std::move(incumbent->prior);
  point.leakage = incumbent->leakage;
  point.distortion = incumbent->distortion;
  point.value_achieved = point.leakage;
  point.constraint_residual = point.distortion - bound;
  point.iterations = rounds;
  point.armijo_violations = stats.armijo_violations;
  point.descent_stalls = stats.stalls;
  return point;
}

std::vector<absl::StatusOr<TradeoffPoint>> PrimalSweep(
    const ProblemSpace& space, const JointPrior& truth, const Query& query,
    const DistortionMetric& metric, const PrimalConfig& config,
    const std::vector<double>& bounds, int jobs) {
  std::vector<absl::StatusOr<TradeoffPoint>> out(
      bounds.size(), absl::UnknownError("not solved"));
  ParallelFor(bounds.size(), jobs, [&](std::size_t k) {
    PrimalConfig c = config;
    c.distortion_bound = bounds[k];
    out[k] = PrimalTradeoff(space, truth, query, metric, c);
  });
  std::vector<std::size_t> order(bounds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return bounds[a] < bounds[b];
  });
  const TradeoffPoint* best = nullptr;
  for (std::size_t k : order) {
    if (!out[k].ok()) continue;
    TradeoffPoint& p = *out[k];
    if (best != nullptr && best->leakage < p.leakage) {
      p.mechanism = best->mechanism;
      p.prior = best->prior;
      p.leakage = best->leakage;
      p.distortion = best->distortion;
      p.value_achieved = p.leakage;
      p.constraint_residual = p.distortion - p.bound_requested;
      p.carried_forward = true;
    }
    if (best == nullptr || p.leakage <= best->leakage) best = &p;
  }
  return out;
}

}  // namespace privleak

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

#include "privleak/dual_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "absl/status/status.h"
#include "privleak/info_theory.h"
#include "privleak/parallel.h"

namespace privleak {
namespace {

void AddScaled(Matrix& dst, const Matrix& src, double scale) {
  auto d = dst.data();
  auto s = src.data();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] += scale * s[k];
}

struct Candidate {
  Mechanism mechanism;
  JointPrior prior;
  double leakage = 0.0;
  double distortion = 0.0;
};

}  // namespace

PenaltyValue PenaltyLeakage(const ProblemSpace& space, const JointPrior& prior,
                            const Mechanism& mechanism, double bound) {
  const WorstRecord worst = MaxRecordLeakage(space, prior, mechanism);
  const double sp = Softplus(worst.leakage - bound);
  PenaltyValue out{sp * sp,
                   GradMiMechanism(space, prior, mechanism, worst.record)};
  const double scale = 2.0 * sp * Sigmoid(worst.leakage - bound);
  for (double& g : out.grad.data()) g *= scale;
  return out;
}

DescentResult DualExpGradient(const ProblemSpace& space,
                              const std::vector<JointPrior>& pool,
                              const JointPrior& truth, const Query& query,
                              const DistortionMetric& metric,
                              const Mechanism& initial, double lambda,
                              const DualConfig& config) {
  const Matrix weights = DistortionWeights(space, truth, query, metric);
  const double bound = config.leakage_bound;
  auto objective = [&](const Mechanism& q, Matrix* grad) {
    const PoolWorst worst = PoolLeakage(space, pool, q);
    const double sp = Softplus(worst.leakage - bound);
    if (grad != nullptr) {
      *grad = weights;
      AddScaled(*grad,
                GradMiMechanism(space, pool[worst.prior], q, worst.record),
                lambda * 2.0 * sp * Sigmoid(worst.leakage - bound));
    }
    return ExpectedDistortion(space, truth, q, query, metric) +
           lambda * sp * sp;
  };
  return ExpGradientDescent(initial, objective, config.descent);
}

Mechanism DualMechanismUpdate(const ProblemSpace& space,
                              const std::vector<JointPrior>& pool,
                              const JointPrior& truth, const Query& query,
                              const DistortionMetric& metric,
                              const Mechanism& initial, const DualConfig& config,
                              double* lambda, DualUpdateStats* stats) {
  const double bound = config.leakage_bound;
  const double margin = config.constraint_margin;
  Mechanism q = initial;
  Mechanism best = initial;
  double best_j = std::numeric_limits<double>::infinity();
  double i_prev = std::numeric_limits<double>::infinity();
  for (int round = 0; round < config.max_penalty_rounds; ++round) {
    DescentResult step = DualExpGradient(space, pool, truth, query, metric, q,
                                         *lambda, config);
    if (stats != nullptr) {
      stats->descent_steps += step.iterations;
      stats->armijo_violations += step.armijo_violations;
      stats->stalls += step.stalled ? 1 : 0;
    }
    const double leak = PoolLeakage(space, pool, step.mechanism).leakage;
    const double e =
        ExpectedDistortion(space, truth, step.mechanism, query, metric);
    const double sp = Softplus(leak - bound);
    const double j = e + *lambda * sp * sp;
    if (j < best_j) {
      best_j = j;
      best = step.mechanism;
    }
    if (leak > bound + margin) {
      *lambda *= config.penalty_factor;
    } else if (leak < bound - margin) {
      *lambda /= config.penalty_factor;
    }
    q = std::move(step.mechanism);
    if (std::abs(leak - i_prev) < config.outer_tolerance &&
        std::abs(leak - bound) < config.constraint_tolerance) {
      break;
    }
    i_prev = leak;
  }
  return best;
}

absl::StatusOr<TradeoffPoint> DualSolve(const ProblemSpace& space,
                                        const JointPrior& truth,
                                        const Query& query,
                                        const DistortionMetric& metric,
                                        const DualConfig& config) {
  if (!(config.leakage_bound > 0.0)) {
    return absl::InvalidArgumentError("leakage bound must be positive");
  }
  if (absl::Status s = query.Validate(space); !s.ok()) return s;
  const double bound = config.leakage_bound;
  LeakageConfig leakage = config.leakage;
  leakage.entropy_bound = config.entropy_bound;

  TradeoffPoint point;
  point.bound_requested = bound;
  auto audit = [&](const Mechanism& q) -> absl::StatusOr<Candidate> {
    absl::StatusOr<LeakageResult> r = MaxLeakage(space, q, leakage);
    if (!r.ok()) return r.status();
    point.audit_traces.push_back(r->trace);
    return Candidate{q, std::move(r->optimal_prior), r->leakage,
                     ExpectedDistortion(space, truth, q, query, metric)};
  };

  const Mechanism exact = ExactRelease(space, query);
  Mechanism q = exact;
  double lambda = config.penalty_init;
  double lambda_prev = lambda;
  double side_prev = 0.0;
  double d_prev = std::numeric_limits<double>::infinity();
  std::vector<JointPrior> pool;
  std::optional<Candidate> incumbent;
  Candidate last;
  DualUpdateStats stats;
  int rounds = 0;
  for (int k = 0; k < config.max_outer_rounds; ++k) {
    absl::StatusOr<Candidate> current = audit(q);
    if (!current.ok()) return current.status();
    rounds = k + 1;
    last = *current;
    if (current->leakage <= bound &&
        (!incumbent || current->distortion < incumbent->distortion)) {
      incumbent = *current;
    }
    pool.push_back(current->prior);

    const double leak = current->leakage;
    const double side = leak > bound ? 1.0 : -1.0;
    const double before = lambda;
    if (leak > bound + 0.5 * config.constraint_tolerance) {
      lambda *= config.penalty_factor;
    } else if (leak < bound - 0.5 * config.constraint_tolerance) {
      lambda /= config.penalty_factor;
    }
    if (config.zigzag_damping && side_prev != 0.0 && side != side_prev) {
      lambda = 0.5 * (before + lambda_prev);
    }
    lambda_prev = before;
    side_prev = side;

    q = DualMechanismUpdate(space, pool, truth, query, metric, q, config,
                            &lambda, &stats);
    const double d = ExpectedDistortion(space, truth, q, query, metric);
    const bool settled =
        d_prev == 0.0 ? std::abs(d - d_prev) < 1e-9
                      : std::abs(d - d_prev) / d_prev < config.outer_tolerance;
    if (settled && std::abs(leak - bound) < config.constraint_tolerance) break;
    d_prev = d;
  }
  {
    absl::StatusOr<Candidate> current = audit(q);
    if (!current.ok()) return current.status();
    last = *current;
    if (current->leakage <= bound &&
        (!incumbent || current->distortion < incumbent->distortion)) {
      incumbent = *current;
    }
  }

  // Slide along a straight path until the audited leakage meets the bound:
  // toward exact release while there is slack, toward uniform rows when the
  // best mechanism found is still infeasible. The feasible end is kept.
  const bool slack = incumbent.has_value();
  Candidate base = slack ? *incumbent : last;
  const Mechanism target = slack ? exact : UniformMechanism(space);
  double lo = 0.0;
  double hi = 1.0;
  std::optional<Candidate> best = incumbent;
  absl::StatusOr<Candidate> end = audit(target);
  if (!end.ok()) return end.status();
  if (!slack) {
    best = *end;
  } else if (end->leakage <= bound) {
    best = *end;
    lo = hi;
  }
  for (int it = 0; it < 30 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    absl::StatusOr<Candidate> c =
        audit(MixMechanisms(base.mechanism, target, mid));
    if (!c.ok()) return c.status();
    const bool feasible = c->leakage <= bound;
    if (feasible && c->distortion < best->distortion) best = *c;
    // Toward exact release feasibility is lost as the weight grows; toward
    // uniform rows it is gained.
    if (feasible == slack) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  point.mechanism = std::move(best->mechanism);
  point.prior = std::move(best->prior);
  point.leakage = best->leakage;
  point.distortion = best->distortion;
  point.value_achieved = point.distortion;
  point.constraint_residual = point.leakage - bound;
  point.iterations = rounds;
  point.armijo_violations = stats.armijo_violations;
  point.descent_stalls = stats.stalls;
  return point;
}

std::vector<absl::StatusOr<TradeoffPoint>> DualSweep(
    const ProblemSpace& space, const JointPrior& truth, const Query& query,
    const DistortionMetric& metric, const DualConfig& config,
    const std::vector<double>& bounds, int jobs) {
  std::vector<absl::StatusOr<TradeoffPoint>> out(
      bounds.size(), absl::UnknownError("not solved"));
  ParallelFor(bounds.size(), jobs, [&](std::size_t k) {
    DualConfig c = config;
    c.leakage_bound = bounds[k];
    out[k] = DualSolve(space, truth, query, metric, c);
  });
  return out;
}

}  // namespace privleak

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

#include "privleak/mechanism_descent.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "privleak/info_theory.h"

namespace privleak {

double Softplus(double z) {
  if (z > 30.0) return z + std::exp(-z);
  return std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Mechanism ExpGradientStep(const Mechanism& mechanism, const Matrix& grad,
                          double eta) {
  const std::size_t rows = mechanism.input_size();
  const std::size_t m = mechanism.output_size();
  Matrix out(rows, m);
  std::vector<double> logits(m);
  for (std::size_t x = 0; x < rows; ++x) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < m; ++y) {
      // Zero entries sit at the log floor so the step can revive them.
      logits[y] = SafeLog(mechanism(x, y)) - eta * grad(x, y);
      top = std::max(top, logits[y]);
    }
    for (std::size_t y = 0; y < m; ++y) {
      out(x, y) = std::exp(logits[y] - top);
    }
  }
  return Mechanism::Normalized(std::move(out));
}

double LocalGradientNormSquared(const Mechanism& mechanism,
                                const Matrix& grad) {
  double total = 0.0;
  for (std::size_t x = 0; x < mechanism.input_size(); ++x) {
    double mean = 0.0;
    for (std::size_t y = 0; y < mechanism.output_size(); ++y) {
      mean += mechanism(x, y) * grad(x, y);
    }
    for (std::size_t y = 0; y < mechanism.output_size(); ++y) {
      const double d = grad(x, y) - mean;
      total += mechanism(x, y) * d * d;
    }
  }
  return total;
}

DescentResult ExpGradientDescent(const Mechanism& initial,
                                 const MechanismObjective& objective,
                                 const DescentConfig& config) {
  DescentResult result;
  result.mechanism = initial;
  Matrix grad(initial.input_size(), initial.output_size());
  double value = objective(result.mechanism, &grad);
  result.trace.push_back(value);
  double eta = config.initial_step;
  for (int t = 0; t < config.max_iterations; ++t) {
    const double norm2 = LocalGradientNormSquared(result.mechanism, grad);
    if (norm2 == 0.0) break;
    bool accepted = false;
    Mechanism next;
    double next_value = 0.0;
    while (eta >= config.min_step) {
      next = ExpGradientStep(result.mechanism, grad, eta);
      next_value = objective(next, nullptr);
      if (next_value <= value - config.armijo_constant * eta * norm2) {
        accepted = true;
        break;
      }
      eta *= config.backtrack_factor;
    }
    if (!accepted) {
      result.stalled = true;
      break;
    }
    if (next_value > value) ++result.armijo_violations;
    double change = 0.0;
    auto a = next.rows().data();
    auto b = result.mechanism.rows().data();
    for (std::size_t k = 0; k < a.size(); ++k) change += std::abs(a[k] - b[k]);
    result.mechanism = std::move(next);
    value = objective(result.mechanism, &grad);
    result.trace.push_back(value);
    result.iterations = t + 1;
    eta = config.initial_step / std::sqrt(static_cast<double>(t + 2));
    if (change < config.tolerance) break;
  }
  result.objective = value;
  return result;
}

PoolWorst PoolLeakage(const ProblemSpace& space,
                      const std::vector<JointPrior>& pool,
                      const Mechanism& mechanism) {
  PoolWorst worst{-1.0, 0, 0};
  for (std::size_t k = 0; k < pool.size(); ++k) {
    for (int i = 0; i < space.record_count(); ++i) {
      const double v = RecordLeakage(space, pool[k], mechanism, i);
      if (v > worst.leakage) worst = {v, static_cast<int>(k), i};
    }
  }
  if (worst.leakage < 0.0) worst.leakage = 0.0;
  return worst;
}

}  // namespace privleak

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

// Reference computations for tests. Everything here is written from the
// definitions with plain loops and its own index decoding, so a bug in the
// library cannot leak into the expected values.

#ifndef PRIVLEAK_TESTS_REFERENCE_H_
#define PRIVLEAK_TESTS_REFERENCE_H_

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

namespace privleak::reference {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline double Entropy(const Vec& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

inline double BinaryEntropy(double p) { return Entropy({p, 1.0 - p}); }

inline double BscCapacity(double p) {
  return std::numbers::ln2 - BinaryEntropy(p);
}

// The p in [0, 1/2] with ln 2 - H_b(p) = c, by bisection.
inline double BscInverse(double c) {
  double lo = 0.0, hi = 0.5;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (BscCapacity(mid) > c ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Symbol of record i in dataset x, record 0 most significant.
inline int Symbol(const std::vector<int>& sizes, std::size_t x, int i) {
  for (int j = static_cast<int>(sizes.size()) - 1; j > i; --j) x /= sizes[j];
  return static_cast<int>(x % sizes[i]);
}

inline std::size_t UniverseSize(const std::vector<int>& sizes) {
  std::size_t u = 1;
  for (int s : sizes) u *= s;
  return u;
}

// I(X_i; Y) from the joint prior and an (unnormalized is fine) channel,
// through the table p(x_i, y).
inline double RecordMi(const std::vector<int>& sizes, const Vec& prior,
                       const Mat& q, int i) {
  const int ni = sizes[i];
  const std::size_t m = q[0].size();
  Mat joint(ni, Vec(m, 0.0));
  Vec pa(ni, 0.0), py(m, 0.0);
  for (std::size_t x = 0; x < prior.size(); ++x) {
    const int a = Symbol(sizes, x, i);
    pa[a] += prior[x];
    for (std::size_t y = 0; y < m; ++y) {
      joint[a][y] += prior[x] * q[x][y];
      py[y] += prior[x] * q[x][y];
    }
  }
  // Conditional form so that off-simplex inputs give the analytic
  // extension the gradients are derived from.
  double mi = 0.0;
  for (int a = 0; a < ni; ++a) {
    if (pa[a] <= 0.0) continue;
    for (std::size_t y = 0; y < m; ++y) {
      const double pya = joint[a][y] / pa[a];
      if (joint[a][y] > 0.0) mi += joint[a][y] * std::log(pya / py[y]);
    }
  }
  return mi;
}

// Builds the joint prior from a marginal over record i and conditional
// rows over the other records (in their mixed-radix order).
inline Vec ComposePrior(const std::vector<int>& sizes, int i,
                        const Vec& marginal, const Mat& conditional) {
  const std::size_t u = UniverseSize(sizes);
  Vec prior(u, 0.0);
  // Index of x_{-i} among the remaining records, in their own order.
  for (std::size_t x = 0; x < u; ++x) {
    std::size_t rest = 0;
    for (int j = 0; j < static_cast<int>(sizes.size()); ++j) {
      if (j == i) continue;
      rest = rest * sizes[j] + Symbol(sizes, x, j);
    }
    const int a = Symbol(sizes, x, i);
    prior[x] = marginal[a] * conditional[a][rest];
  }
  return prior;
}

inline Vec Dirichlet(std::mt19937_64& rng, std::size_t n, double floor = 0.0) {
  std::gamma_distribution<double> g(1.0, 1.0);
  Vec v(n);
  double total = 0.0;
  for (double& e : v) total += (e = g(rng) + floor);
  for (double& e : v) e /= total;
  return v;
}

inline Mat RandomChannel(std::mt19937_64& rng, std::size_t rows,
                         std::size_t cols, double floor = 0.0) {
  Mat q(rows);
  for (auto& r : q) r = Dirichlet(rng, cols, floor);
  return q;
}

}  // namespace privleak::reference

#endif  // PRIVLEAK_TESTS_REFERENCE_H_

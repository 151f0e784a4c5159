/*
 * Copyright 2026 The Handbrain Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HANDBRAIN_TESTS_ORACLES_U_ORACLE_HPP_
#define HANDBRAIN_TESTS_ORACLES_U_ORACLE_HPP_

#include <algorithm>
#include <cstdint>
#include <vector>

namespace oracle {

// U as the number of (a, b) pairs with a > b, ties counting one half.
inline double u_by_pairs(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a) {
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  }
  return u;
}

// Null distribution of U by walking every n-subset of n + m ranks.
inline std::vector<double> enumerate_u_counts(std::size_t n, std::size_t m) {
  const std::size_t total = n + m;
  std::vector<double> counts(n * m + 1, 0.0);
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n) continue;
    // U = sum over first-sample ranks of the second-sample ranks below.
    std::size_t u = 0, below = 0;
    for (std::size_t r = 0; r < total; ++r) {
      if (mask & (1u << r)) u += below;
      else ++below;
    }
    counts[u] += 1.0;
  }
  return counts;
}

// Two-sided exact p for tie-free samples: doubled smaller tail, capped at 1.
inline double exact_p_by_enumeration(const std::vector<double>& a, const std::vector<double>& b) {
  const auto counts = enumerate_u_counts(a.size(), b.size());
  const double u = u_by_pairs(a, b);
  double total = 0.0, lower = 0.0, upper = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    total += counts[k];
    if (static_cast<double>(k) <= u) lower += counts[k];
    if (static_cast<double>(k) >= u) upper += counts[k];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

}  // namespace oracle

#endif  // HANDBRAIN_TESTS_ORACLES_U_ORACLE_HPP_

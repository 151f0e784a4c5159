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

#ifndef HANDBRAIN_STATS_STATS_HPP_
#define HANDBRAIN_STATS_STATS_HPP_

#include <string>
#include <vector>

#include "handbrain/features/features.hpp"
#include "json.hpp"

namespace handbrain::stats {

enum class UMethod { kExact, kNormal };

std::string_view to_string(UMethod m);

struct UTestResult {
  double u = 0.0;      // for the first sample
  double u_alt = 0.0;  // n*m - u
  double p = 1.0;      // two-sided
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  UMethod method = UMethod::kExact;
};

// Pairs with n*m above this use the normal approximation.
inline constexpr std::size_t kExactLimit = 400;

// Rank-sum U with midranks. The exact null distribution is used when
// n*m <= 400 and no two values tie; otherwise the normal approximation with
// tie-corrected variance and continuity correction. Throws UsageError on an
// empty sample.
UTestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

// Number of ways to place n first-sample values among n + m so that U
// equals u, for u = 0..n*m.
std::vector<double> exact_u_counts(std::size_t n, std::size_t m);

struct VariableResult {
  std::string name;
  std::string column;
  bool sufficient = false;
  UTestResult test;  // a = switch turns, b = other turns
  bool significant = false;
};

struct Report {
  std::size_t turns = 0;
  std::size_t switch_turns = 0;
  double alpha = 0.05;
  std::vector<VariableResult> variables;
};

// Reduces rows to each turn's final sample and compares switch turns with
// the rest on dispersion, entropy, dwell ratio, fragility, surprise and the
// turn's evaluation change. Throws DataError when a column is absent.
Report analysis_report(const features::Dataset& data, double alpha = 0.05);

std::vector<features::FeatureRow> final_samples(const features::Dataset& data);

nlohmann::json to_json(const Report& r);
std::string to_markdown(const Report& r);

}  // namespace handbrain::stats

#endif  // HANDBRAIN_STATS_STATS_HPP_

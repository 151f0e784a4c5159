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

#include "handbrain/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace handbrain::stats {

std::string_view to_string(UMethod m) { return m == UMethod::kExact ? "exact" : "normal"; }

std::vector<double> exact_u_counts(std::size_t n, std::size_t m) {
  // f[j][u]: arrangements of i first-sample and j second-sample values with
  // statistic u, built up over i. Adding a first-sample value above all j
  // second-sample ones adds j to U.
  std::vector<std::vector<double>> f(m + 1, std::vector<double>(n * m + 1, 0.0));
  for (std::size_t j = 0; j <= m; ++j) f[j][0] = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<std::vector<double>> g(m + 1, std::vector<double>(n * m + 1, 0.0));
    g[0][0] = 1.0;
    for (std::size_t j = 1; j <= m; ++j) {
      for (std::size_t u = 0; u <= i * j; ++u) {
        double c = g[j - 1][u];
        if (u >= j) c += f[j][u - j];
        g[j][u] = c;
      }
    }
    f = std::move(g);
  }
  return f[m];
}

UTestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw UsageError("Mann-Whitney U needs two non-empty samples");
  const std::size_t n = a.size(), m = b.size(), total = n + m;

  std::vector<std::pair<double, int>> all;
  all.reserve(total);
  for (double x : a) all.emplace_back(x, 0);
  for (double x : b) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j < total && all[j].first == all[i].first) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const double t = static_cast<double>(j - i);
    if (t > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second == 0) rank_sum_a += midrank;
    }
    i = j;
  }

  UTestResult r;
  r.n = n;
  r.m = m;
  const double nm = static_cast<double>(n) * static_cast<double>(m);
  r.u = rank_sum_a - static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  r.u_alt = nm - r.u;
  r.mean_a = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  r.mean_b = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(m);

  if (!ties && n * m <= kExactLimit) {
    r.method = UMethod::kExact;
    const auto counts = exact_u_counts(n, m);
    const double all_ways = std::accumulate(counts.begin(), counts.end(), 0.0);
    const auto u = static_cast<std::size_t>(std::llround(r.u));
    double lower = 0.0, upper = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (k <= u) lower += counts[k];
      if (k >= u) upper += counts[k];
    }
    r.p = std::min(1.0, 2.0 * std::min(lower, upper) / all_ways);
    return r;
  }

  r.method = UMethod::kNormal;
  const double N = static_cast<double>(total);
  const double var = nm / 12.0 * ((N + 1.0) - tie_term / (N * (N - 1.0)));
  if (!(var > 0.0)) {
    r.p = 1.0;
    return r;
  }
  const double z = std::max(0.0, std::abs(r.u - nm / 2.0) - 0.5) / std::sqrt(var);
  r.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct Variable {
  const char* name;
  const char* column;  // empty for the turn's evaluation change
};

constexpr Variable kVariables[] = {
    {"gaze dispersion (px)", "cur_dispersion"},
    {"gaze entropy (bits)", "cur_gaze_entropy"},
    {"dwell ratio", "cur_dwell_ratio"},
    {"fragility", "cur_fragility"},
    {"mean surprise", "cur_surprise_mean"},
    {"evaluation change (cp)", ""},
};

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt_p(double p) {
  char buf[64];
  if (p < 0.001) {
    std::snprintf(buf, sizeof buf, "%.2e", p);
  } else {
    std::snprintf(buf, sizeof buf, "%.3f", p);
  }
  return buf;
}

}  // namespace

std::vector<features::FeatureRow> final_samples(const features::Dataset& data) {
  std::map<std::pair<std::string, int>, std::size_t> last;
  std::vector<std::pair<std::string, int>> order;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto key = std::make_pair(data.rows[i].session_id, data.rows[i].turn);
    auto it = last.find(key);
    if (it == last.end()) {
      last.emplace(key, i);
      order.push_back(key);
    } else if (data.rows[i].sample_s >= data.rows[it->second].sample_s) {
      it->second = i;
    }
  }
  std::vector<features::FeatureRow> out;
  out.reserve(order.size());
  for (const auto& key : order) out.push_back(data.rows[last[key]]);
  return out;
}

Report analysis_report(const features::Dataset& data, double alpha) {
  const auto turns = final_samples(data);
  Report report;
  report.alpha = alpha;
  report.turns = turns.size();
  for (const auto& t : turns) report.switch_turns += t.label_switch ? 1 : 0;

  for (const auto& v : kVariables) {
    VariableResult res;
    res.name = v.name;
    res.column = *v.column ? v.column : "turn_eval_delta_cp";
    std::optional<std::size_t> col;
    if (*v.column) {
      col = data.column(v.column);
      if (!col) throw DataError("dataset has no column '" + std::string(v.column) + "'");
    }
    std::vector<double> sw, other;
    for (const auto& t : turns) {
      std::optional<double> x = col ? t.values[*col] : std::optional<double>(t.turn_eval_delta_cp);
      if (!x) continue;
      (t.label_switch ? sw : other).push_back(*x);
    }
    res.sufficient = sw.size() >= 2 && other.size() >= 2;
    if (res.sufficient) {
      res.test = mann_whitney_u(sw, other);
      res.significant = res.test.p < alpha;
    } else {
      res.test.n = sw.size();
      res.test.m = other.size();
    }
    report.variables.push_back(res);
  }
  return report;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : r.variables) {
    nlohmann::json j{{"variable", v.name}, {"column", v.column}, {"n_switch", v.test.n}, {"n_no_switch", v.test.m}};
    if (!v.sufficient) {
      j["status"] = "insufficient data";
    } else {
      j["status"] = "ok";
      j["mean_switch"] = v.test.mean_a;
      j["mean_no_switch"] = v.test.mean_b;
      j["U_switch"] = v.test.u;
      j["U_no_switch"] = v.test.u_alt;
      j["p"] = v.test.p;
      j["method"] = to_string(v.test.method);
      j["significant"] = v.significant;
    }
    vars.push_back(j);
  }
  return {{"turns", r.turns}, {"switch_turns", r.switch_turns}, {"alpha", r.alpha}, {"variables", vars}};
}

std::string to_markdown(const Report& r) {
  std::ostringstream out;
  out << "# Switch vs no-switch turns\n\n";
  out << r.turns << " turns, " << r.switch_turns << " with a mode switch. Two-sided Mann-Whitney U, alpha = "
      << fmt(r.alpha, 2) << ".\n\n";
  out << "| variable | switch mean (n) | no-switch mean (n) | U (switch) | U (no switch) | p | method | |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& v : r.variables) {
    if (!v.sufficient) {
      out << "| " << v.name << " | (" << v.test.n << ") | (" << v.test.m << ") | | | | | insufficient data |\n";
      continue;
    }
    out << "| " << v.name << " | " << fmt(v.test.mean_a, 3) << " (" << v.test.n << ") | " << fmt(v.test.mean_b, 3)
        << " (" << v.test.m << ") | " << fmt(v.test.u, 1) << " | " << fmt(v.test.u_alt, 1) << " | "
        << fmt_p(v.test.p) << " | " << to_string(v.test.method) << " | " << (v.significant ? "significant" : "")
        << " |\n";
  }
  return out.str();
}

}  // namespace handbrain::stats

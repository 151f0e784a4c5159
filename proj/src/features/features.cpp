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

#include "handbrain/features/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "handbrain/chess/position.hpp"
#include "handbrain/fragility/fragility.hpp"
#include "handbrain/session/machine.hpp"

namespace handbrain::features {

bool BoardRect::contains(double x, double y) const {
  return x >= x0 && x < x0 + size && y >= y0 && y < y0 + size;
}

int BoardRect::cell(double x, double y) const {
  if (!contains(x, y)) return kOffBoardCell;
  const double step = size / 8.0;
  const int col = std::min(7, static_cast<int>((x - x0) / step));
  const int row = std::min(7, static_cast<int>((y - y0) / step));
  return row * 8 + col;
}

namespace {

std::vector<GazeSample> valid_only(std::span<const GazeSample> window) {
  std::vector<GazeSample> out;
  out.reserve(window.size());
  for (const auto& s : window) {
    if (s.valid) out.push_back(s);
  }
  return out;
}

// Linear interpolation between closest ranks.
double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

std::optional<double> vertical_dispersion(std::span<const GazeSample> window) {
  std::vector<double> ys;
  for (const auto& s : window) {
    if (s.valid) ys.push_back(s.y);
  }
  if (ys.empty()) return std::nullopt;
  std::sort(ys.begin(), ys.end());
  if (ys.size() < 40) return ys.back() - ys.front();
  const double lo = percentile(ys, 0.025);
  const double hi = percentile(ys, 0.975);
  double min_y = hi, max_y = lo;
  for (double y : ys) {
    if (y < lo || y > hi) continue;
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  return std::max(0.0, max_y - min_y);
}

std::optional<double> gaze_entropy(std::span<const GazeSample> window, const BoardRect& board) {
  std::array<int, kOffBoardCell + 1> counts{};
  int n = 0;
  for (const auto& s : window) {
    if (!s.valid) continue;
    ++counts[board.cell(s.x, s.y)];
    ++n;
  }
  if (n == 0) return std::nullopt;
  double h = 0.0;
  for (int c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

double dwell_ratio(std::span<const GazeSample> window, const BoardRect& board, double thinking_time_s) {
  if (!(thinking_time_s > 0.0)) throw UsageError("dwell_ratio: thinking time must be positive");
  if (window.empty()) return 0.0;
  std::vector<Millis> gaps;
  for (std::size_t i = 1; i < window.size(); ++i) gaps.push_back(window[i].t - window[i - 1].t);
  Millis last = 0;
  if (!gaps.empty()) {
    std::vector<Millis> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    last = sorted[sorted.size() / 2];
  }
  double on_board_ms = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const auto& s = window[i];
    if (!s.valid || !board.contains(s.x, s.y)) continue;
    on_board_ms += static_cast<double>(i + 1 < window.size() ? gaps[i] : last);
  }
  return std::clamp(on_board_ms / 1000.0 / thinking_time_s, 0.0, 1.0);
}

int count_fixations(std::span<const GazeSample> window, const FixationParams& params) {
  const auto pts = valid_only(window);
  const double r2 = params.radius_px * params.radius_px;
  auto fits = [&](std::size_t i, std::size_t j) {
    double cx = 0.0, cy = 0.0;
    for (std::size_t k = i; k <= j; ++k) {
      cx += pts[k].x;
      cy += pts[k].y;
    }
    const double n = static_cast<double>(j - i + 1);
    cx /= n;
    cy /= n;
    for (std::size_t k = i; k <= j; ++k) {
      const double dx = pts[k].x - cx, dy = pts[k].y - cy;
      if (dx * dx + dy * dy > r2) return false;
    }
    return true;
  };
  int count = 0;
  std::size_t i = 0;
  while (i < pts.size()) {
    std::size_t j = i;
    while (j + 1 < pts.size() && fits(i, j + 1)) ++j;
    if (pts[j].t - pts[i].t >= params.min_duration_ms) {
      ++count;
      i = j + 1;
    } else {
      ++i;
    }
  }
  return count;
}

std::optional<double> mean_surprise(std::span<const EmotionSample> emotions, Millis t0, Millis t1) {
  if (!(t0 < t1)) throw UsageError("mean_surprise: window start must precede its end");
  std::vector<double> xs;
  for (const auto& e : emotions) {
    if (e.t >= t0 && e.t <= t1) xs.push_back(e.surprise());
  }
  return mean_of(xs);
}

// ---------------------------------------------------------------------------

PositionInfo describe_position(const std::string& fen, const engine::Evaluation& eval) {
  const auto pos = chess::Position::from_fen(fen);
  PositionInfo info;
  info.eval_cp = eval.as_centipawns();
  info.fragility = fragility::fragility_score(pos);
  info.decisive = std::abs(info.eval_cp) >= kDecisiveEvalCp || chess::is_bare_king_imbalance(pos);
  return info;
}

PositionInfo PositionAnnotator::operator()(const std::string& fen) {
  if (auto it = cache_.find(fen); it != cache_.end()) return it->second;
  const auto info = describe_position(fen, evaluator_.evaluate(chess::Position::from_fen(fen)));
  cache_.emplace(fen, info);
  return info;
}

bool is_task_feature(std::string_view name) {
  return name == "elapsed_s" || name.find("eval") != std::string_view::npos ||
         name.find("fragility") != std::string_view::npos;
}

std::vector<std::string> default_feature_names() {
  return {kFeatureNames.begin(), kFeatureNames.end()};
}

std::optional<std::size_t> Dataset::column(std::string_view name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return i;
  }
  return std::nullopt;
}

Dataset Dataset::select(const std::vector<std::string>& names) const {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    auto c = column(n);
    if (!c) throw DataError("dataset has no column '" + n + "'");
    idx.push_back(*c);
  }
  Dataset out{names, {}};
  out.rows.reserve(rows.size());
  for (const auto& r : rows) {
    FeatureRow s = r;
    s.values.clear();
    for (auto i : idx) s.values.push_back(r.values[i]);
    out.rows.push_back(std::move(s));
  }
  return out;
}

namespace {

// Behavioural samples tagged with the time their batch was logged, so a
// cutoff can hide samples the server had not yet received.
template <class Sample>
struct Stream {
  std::vector<std::pair<Millis, Sample>> items;  // (batch t, sample), ordered by sample t

  void sort() {
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second.t < b.second.t; });
  }

  std::vector<Sample> window(Millis lo, Millis hi, Millis cutoff) const {
    std::vector<Sample> out;
    auto it = std::lower_bound(items.begin(), items.end(), lo,
                               [](const auto& item, Millis t) { return item.second.t < t; });
    for (; it != items.end() && it->second.t <= hi; ++it) {
      if (it->first <= cutoff) out.push_back(it->second);
    }
    return out;
  }
};

struct Streams {
  Stream<GazeSample> gaze;
  Stream<EmotionSample> emotion;
};

Streams collect_streams(const session::SessionLog& log) {
  Streams s;
  for (const auto& e : log) {
    if (const auto* g = std::get_if<session::GazeBatch>(&e.payload)) {
      for (const auto& x : g->samples) s.gaze.items.emplace_back(e.t, x);
    } else if (const auto* m = std::get_if<session::EmotionBatch>(&e.payload)) {
      for (const auto& x : m->samples) s.emotion.items.emplace_back(e.t, x);
    }
  }
  s.gaze.sort();
  s.emotion.sort();
  return s;
}

struct Sample {
  Millis start_t;
  Millis cutoff;
  double elapsed_s;
  const std::string& fen;
};

FeatureVector compute(const std::vector<session::TurnRecord>& prior_all, const Sample& at, const Streams& streams,
                      const PositionInfoFn& info, const ExtractParams& params) {
  const std::size_t k = static_cast<std::size_t>(params.k);
  const std::size_t first = prior_all.size() > k ? prior_all.size() - k : 0;

  std::vector<double> disp, fix, surprise, eval_delta, frag;
  for (std::size_t i = first; i < prior_all.size(); ++i) {
    const auto& p = prior_all[i];
    const auto gaze = streams.gaze.window(p.start_t, p.mode_t, at.cutoff);
    if (auto d = vertical_dispersion(gaze)) disp.push_back(*d);
    fix.push_back(count_fixations(gaze, params.fixation));
    if (p.start_t < p.mode_t) {
      const auto emo = streams.emotion.window(p.start_t, p.mode_t, at.cutoff);
      if (auto m = mean_surprise(emo, p.start_t, p.mode_t)) surprise.push_back(*m);
    }
    const auto before = info(p.fen_before);
    eval_delta.push_back(info(p.fen_after).eval_cp - before.eval_cp);
    frag.push_back(before.fragility);
  }

  const auto gaze = streams.gaze.window(at.start_t, at.cutoff, at.cutoff);
  const auto cur_disp = vertical_dispersion(gaze);
  std::optional<double> cur_surprise;
  if (at.start_t < at.cutoff) {
    cur_surprise = mean_surprise(streams.emotion.window(at.start_t, at.cutoff, at.cutoff), at.start_t, at.cutoff);
  }
  std::optional<double> dwell;
  if (at.elapsed_s > 0.0) dwell = dwell_ratio(gaze, params.board, at.elapsed_s);
  const auto now = info(at.fen);

  std::optional<double> disp_delta;
  if (cur_disp && !disp.empty()) disp_delta = *cur_disp - *mean_of(disp);
  std::optional<double> frag_max;
  if (!frag.empty()) frag_max = *std::max_element(frag.begin(), frag.end());
  std::optional<double> delta_last;
  if (!eval_delta.empty()) delta_last = eval_delta.back();

  return {
      disp_delta,
      mean_of(fix),
      mean_of(surprise),
      mean_of(eval_delta),
      delta_last,
      mean_of(frag),
      frag_max,
      gaze_entropy(gaze, params.board),
      cur_disp,
      dwell,
      cur_surprise,
      at.elapsed_s,
      static_cast<double>(now.eval_cp),
      now.fragility,
      static_cast<double>(count_fixations(gaze, params.fixation)),
  };
}

void check_k(int k) {
  if (k != 3 && k != 5) throw UsageError("k must be 3 or 5, got " + std::to_string(k));
}

}  // namespace

std::string session_id_of(const session::SessionLog& log, const std::string& fallback) {
  if (!log.empty()) {
    if (const auto* s = std::get_if<session::SessionStart>(&log.front().payload)) {
      if (s->meta.is_object() && s->meta.contains("session_id") && s->meta["session_id"].is_string()) {
        return s->meta["session_id"].get<std::string>();
      }
    }
  }
  return fallback;
}

std::vector<FeatureRow> build_feature_rows(const session::SessionLog& log, const std::string& session_id,
                                           const PositionInfoFn& info, const ExtractParams& params) {
  check_k(params.k);
  const auto state = session::replay_session(log, session::ReplayMode::kPrefix);
  const auto streams = collect_streams(log);
  std::vector<FeatureRow> rows;
  std::vector<session::TurnRecord> prior;
  for (std::size_t i = 0; i < state.turns.size(); ++i) {
    const auto& turn = state.turns[i];
    if (i > 0) prior.push_back(state.turns[i - 1]);
    if (turn.turn == 1) continue;
    const auto before = info(turn.fen_before);
    if (before.decisive) continue;

    FeatureRow base;
    base.session_id = session_id;
    base.turn = turn.turn;
    base.thinking_time_s = turn.thinking_time_s();
    base.turn_eval_delta_cp = info(turn.fen_after).eval_cp - before.eval_cp;
    base.label_mode = turn.mode;
    base.label_switch = turn.mode != state.turns[i - 1].mode;

    const Millis whole = (turn.mode_t - turn.start_t) / 1000;
    auto emit = [&](Millis cutoff, double elapsed) {
      FeatureRow row = base;
      row.sample_s = elapsed;
      row.values = compute(prior, Sample{turn.start_t, cutoff, elapsed, turn.fen_before}, streams, info, params);
      rows.push_back(std::move(row));
    };
    if (whole < 1) {
      emit(turn.mode_t, base.thinking_time_s);
    } else {
      for (Millis e = 1; e <= whole; ++e) emit(turn.start_t + e * 1000, static_cast<double>(e));
    }
  }
  return rows;
}

std::optional<FeatureVector> live_features(const session::SessionLog& log, Millis now, const PositionInfoFn& info,
                                           const ExtractParams& params) {
  check_k(params.k);
  const auto state = session::replay_session(log, session::ReplayMode::kPrefix);
  if (state.phase != session::Phase::kAwaitModeChoice) return std::nullopt;
  const Millis whole = (now - state.turn_start_t) / 1000;
  if (whole < 1) return std::nullopt;
  const auto streams = collect_streams(log);
  const std::string fen = state.position.fen();
  return compute(state.turns, Sample{state.turn_start_t, state.turn_start_t + whole * 1000,
                                     static_cast<double>(whole), fen},
                 streams, info, params);
}

// ---------------------------------------------------------------------------

DatasetSplit split_dataset(const Dataset& data, std::uint64_t seed, double train_fraction) {
  if (data.rows.empty()) throw DataError("cannot split an empty dataset");
  std::vector<std::string> order;
  std::map<std::string, std::set<int>> turns;
  for (const auto& r : data.rows) {
    if (!turns.count(r.session_id)) order.push_back(r.session_id);
    turns[r.session_id].insert(r.turn);
  }

  std::mt19937_64 rng(seed);
  std::vector<Segment> segments;
  std::size_t total = 0;
  for (const auto& id : order) {
    const std::vector<int> ts(turns[id].begin(), turns[id].end());
    total += ts.size();
    for (std::size_t i = 0; i < ts.size();) {
      const std::size_t len = 3 + rng() % 3;
      const std::size_t end = std::min(ts.size(), i + len);
      segments.push_back(Segment{id, std::vector<int>(ts.begin() + i, ts.begin() + end), false});
      i = end;
    }
  }
  std::vector<std::size_t> perm(segments.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);

  const auto target = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(total)));
  std::size_t in_train = 0;
  for (auto i : perm) {
    if (in_train >= target) break;
    segments[i].train = true;
    in_train += segments[i].turns.size();
  }

  std::set<std::pair<std::string, int>> train_turns;
  for (const auto& s : segments) {
    if (!s.train) continue;
    for (int t : s.turns) train_turns.emplace(s.session_id, t);
  }
  DatasetSplit split;
  split.seed = seed;
  split.train.feature_names = data.feature_names;
  split.test.feature_names = data.feature_names;
  for (const auto& r : data.rows) {
    (train_turns.count({r.session_id, r.turn}) ? split.train : split.test).rows.push_back(r);
  }
  split.segments = std::move(segments);
  return split;
}

nlohmann::json manifest_json(const DatasetSplit& split) {
  nlohmann::json games = nlohmann::json::object();
  std::size_t train = 0, test = 0;
  for (const auto& s : split.segments) {
    games[s.session_id].push_back({{"turns", s.turns}, {"partition", s.train ? "train" : "test"}});
    (s.train ? train : test) += s.turns.size();
  }
  return {{"seed", split.seed},
          {"train_turns", train},
          {"test_turns", test},
          {"train_rows", split.train.rows.size()},
          {"test_rows", split.test.rows.size()},
          {"games", games}};
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 7> kMetaColumns = {
    "session_id", "turn", "sample_s", "thinking_time_s", "turn_eval_delta_cp", "label_switch", "label_mode"};

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw DataError(where + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < kMetaColumns.size(); ++i) out << (i ? "," : "") << kMetaColumns[i];
  for (const auto& n : data.feature_names) out << ',' << n;
  out << '\n';
  for (const auto& r : data.rows) {
    if (r.session_id.find_first_of(",\"\n\r") != std::string::npos) {
      throw DataError("session id '" + r.session_id + "' cannot be written to CSV");
    }
    if (r.values.size() != data.feature_names.size()) throw DataError("row width does not match the header");
    out << r.session_id << ',' << r.turn << ',' << fmt(r.sample_s) << ',' << fmt(r.thinking_time_s) << ','
        << fmt(r.turn_eval_delta_cp) << ',' << (r.label_switch ? 1 : 0) << ',' << session::to_string(r.label_mode);
    for (const auto& v : r.values) {
      out << ',';
      if (v) out << fmt(*v);
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(out, data);
  if (!out) throw DataError("write failed: " + path.string());
}

Dataset read_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  if (header.size() < kMetaColumns.size() ||
      !std::equal(kMetaColumns.begin(), kMetaColumns.end(), header.begin())) {
    throw DataError(source + ":1: header must start with session_id,turn,sample_s,...");
  }
  Dataset data;
  data.feature_names.assign(header.begin() + kMetaColumns.size(), header.end());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto f = split_fields(line);
    if (f.size() != header.size()) {
      throw DataError(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(f.size()));
    }
    FeatureRow r;
    r.session_id = f[0];
    const double turn = parse_double(f[1], where);
    if (turn != std::floor(turn)) throw DataError(where + ": turn must be an integer");
    r.turn = static_cast<int>(turn);
    r.sample_s = parse_double(f[2], where);
    r.thinking_time_s = parse_double(f[3], where);
    r.turn_eval_delta_cp = parse_double(f[4], where);
    if (f[5] != "0" && f[5] != "1") throw DataError(where + ": label_switch must be 0 or 1");
    r.label_switch = f[5] == "1";
    const auto mode = session::parse_mode(f[6]);
    if (!mode) throw DataError(where + ": unknown label_mode '" + f[6] + "'");
    r.label_mode = *mode;
    for (std::size_t i = kMetaColumns.size(); i < f.size(); ++i) {
      if (f[i].empty()) {
        r.values.emplace_back(std::nullopt);
      } else {
        r.values.emplace_back(parse_double(f[i], where));
      }
    }
    data.rows.push_back(std::move(r));
  }
  return data;
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_csv(in, path.string());
}

}  // namespace handbrain::features

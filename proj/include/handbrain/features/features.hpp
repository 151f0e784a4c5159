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

#ifndef HANDBRAIN_FEATURES_FEATURES_HPP_
#define HANDBRAIN_FEATURES_FEATURES_HPP_

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "handbrain/engine/engine.hpp"
#include "handbrain/session/events.hpp"
#include "json.hpp"

namespace handbrain::features {

using session::EmotionSample;
using session::GazeSample;
using session::Millis;

// Screen rectangle of the board, split into 8x8 cells.
struct BoardRect {
  double x0 = 100.0;
  double y0 = 100.0;
  double size = 800.0;

  bool contains(double x, double y) const;
  // 0..63 for on-board points, 64 for everything else.
  int cell(double x, double y) const;
};

inline constexpr int kOffBoardCell = 64;

struct FixationParams {
  Millis min_duration_ms = 100;
  double radius_px = 50.0;
};

// Range of valid y values, trimmed to the 2.5..97.5 percentile band once
// there are at least 40 of them. nullopt when no sample is valid.
std::optional<double> vertical_dispersion(std::span<const GazeSample> window);

// Shannon entropy in bits of valid samples over the 64 board cells plus one
// off-board cell.
std::optional<double> gaze_entropy(std::span<const GazeSample> window, const BoardRect& board = {});

// Seconds of on-board gaze divided by `thinking_time_s`, clamped to [0, 1].
// Each sample lasts until the next one; the last one gets the median gap.
// Throws UsageError when thinking_time_s <= 0.
double dwell_ratio(std::span<const GazeSample> window, const BoardRect& board, double thinking_time_s);

// Dispersion-threshold fixations among valid samples.
int count_fixations(std::span<const GazeSample> window, const FixationParams& params = {});

// Mean surprise over samples with t in [t0, t1]. Throws UsageError unless
// t0 < t1.
std::optional<double> mean_surprise(std::span<const EmotionSample> emotions, Millis t0, Millis t1);

// ---------------------------------------------------------------------------
// Position annotations

struct PositionInfo {
  int eval_cp = 0;  // White's point of view
  double fragility = 0.0;
  bool decisive = false;
};

using PositionInfoFn = std::function<PositionInfo(const std::string& fen)>;

// Evaluates positions with an evaluator engine and caches by FEN.
class PositionAnnotator {
 public:
  explicit PositionAnnotator(engine::Engine& evaluator) : evaluator_(evaluator) {}

  PositionInfo operator()(const std::string& fen);
  PositionInfoFn fn() {
    return [this](const std::string& fen) { return (*this)(fen); };
  }

 private:
  engine::Engine& evaluator_;
  std::unordered_map<std::string, PositionInfo> cache_;
};

inline constexpr int kDecisiveEvalCp = 1000;

PositionInfo describe_position(const std::string& fen, const engine::Evaluation& eval);

// ---------------------------------------------------------------------------
// Rows

inline constexpr std::array<std::string_view, 15> kFeatureNames = {
    "loc_dispersion_delta", "loc_fixations_mean", "loc_surprise_mean",
    "loc_eval_delta_mean",  "loc_eval_delta_last", "loc_fragility_mean",
    "loc_fragility_max",    "cur_gaze_entropy",    "cur_dispersion",
    "cur_dwell_ratio",      "cur_surprise_mean",   "elapsed_s",
    "cur_eval_cp",          "cur_fragility",       "cur_fixations",
};

// Evaluation, fragility and time columns; dropped by the no-task ablation.
bool is_task_feature(std::string_view name);

using FeatureVector = std::vector<std::optional<double>>;

struct FeatureRow {
  std::string session_id;
  int turn = 0;
  double sample_s = 0.0;  // elapsed seconds at the sample point
  double thinking_time_s = 0.0;
  double turn_eval_delta_cp = 0.0;
  bool label_switch = false;
  session::ControlMode label_mode = session::ControlMode::kBrain;
  FeatureVector values;

  bool operator==(const FeatureRow&) const = default;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<FeatureRow> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  // Keeps only the named columns, in the given order. Throws DataError on an
  // unknown name.
  Dataset select(const std::vector<std::string>& names) const;
  bool operator==(const Dataset&) const = default;
};

std::vector<std::string> default_feature_names();

struct ExtractParams {
  int k = 3;
  BoardRect board;
  FixationParams fixation;
};

// One row per whole second of thinking time (or a single row at the decision
// for sub-second turns). Skips turn 1 and turns that start in a decisive
// position. Columns follow kFeatureNames. Throws UsageError unless k is 3 or
// 5; replay errors propagate.
std::vector<FeatureRow> build_feature_rows(const session::SessionLog& log, const std::string& session_id,
                                           const PositionInfoFn& info, const ExtractParams& params = {});

// Features of the turn in progress at `now`, sampled at the last whole second
// of thinking time. nullopt unless the session awaits a mode choice.
std::optional<FeatureVector> live_features(const session::SessionLog& log, Millis now,
                                           const PositionInfoFn& info, const ExtractParams& params = {});

// Session id from SessionStart.meta["session_id"], else `fallback`.
std::string session_id_of(const session::SessionLog& log, const std::string& fallback);

// ---------------------------------------------------------------------------
// Split

struct Segment {
  std::string session_id;
  std::vector<int> turns;
  bool train = false;

  bool operator==(const Segment&) const = default;
};

struct DatasetSplit {
  Dataset train;
  Dataset test;
  std::vector<Segment> segments;
  std::uint64_t seed = 0;
};

// Cuts each session's turns into runs of 3-5 consecutive turns and assigns
// shuffled runs to train until the train share reaches `train_fraction` of
// all turns. Throws DataError on an empty dataset.
DatasetSplit split_dataset(const Dataset& data, std::uint64_t seed, double train_fraction = 0.7);

nlohmann::json manifest_json(const DatasetSplit& split);

// ---------------------------------------------------------------------------
// CSV

void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_csv(std::istream& in, const std::string& source = "<stream>");
Dataset read_csv(const std::filesystem::path& path);

}  // namespace handbrain::features

#endif  // HANDBRAIN_FEATURES_FEATURES_HPP_

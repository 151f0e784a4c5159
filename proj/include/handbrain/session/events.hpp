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

#ifndef HANDBRAIN_SESSION_EVENTS_HPP_
#define HANDBRAIN_SESSION_EVENTS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "handbrain/chess/types.hpp"
#include "json.hpp"

namespace handbrain::session {

using chess::Color;
using chess::Move;
using chess::PieceType;

// Milliseconds since session start.
using Millis = std::int64_t;

enum class ControlMode { kHand, kBrain };
enum class Actor { kHuman, kAi };

std::string_view to_string(ControlMode mode);
std::string_view to_string(Actor actor);
std::optional<ControlMode> parse_mode(std::string_view text);
std::optional<Actor> parse_actor(std::string_view text);

// Screen-space gaze sample in pixels. Invalid samples are tracker dropouts.
struct GazeSample {
  Millis t = 0;
  double x = 0.0;
  double y = 0.0;
  bool valid = true;

  bool operator==(const GazeSample&) const = default;
};

inline constexpr std::array<std::string_view, 7> kEmotionLabels = {
    "angry", "disgust", "fear", "happy", "sad", "surprise", "neutral"};
inline constexpr std::size_t kSurpriseIndex = 5;

struct EmotionSample {
  Millis t = 0;
  std::array<double, 7> p{};

  double surprise() const { return p[kSurpriseIndex]; }
  bool operator==(const EmotionSample&) const = default;
};

struct SessionStart {
  Color player = Color::kWhite;
  // Empty for the standard start position.
  std::string fen;
  nlohmann::json meta = nlohmann::json::object();

  bool operator==(const SessionStart&) const = default;
};

struct OpponentMove {
  Move move;
  bool operator==(const OpponentMove&) const = default;
};

struct ModeChosen {
  ControlMode mode = ControlMode::kBrain;
  bool operator==(const ModeChosen&) const = default;
};

struct PieceTypeChosen {
  Actor by = Actor::kHuman;
  PieceType type = PieceType::kPawn;
  bool operator==(const PieceTypeChosen&) const = default;
};

struct MoveMade {
  Actor by = Actor::kHuman;
  Move move;
  bool operator==(const MoveMade&) const = default;
};

struct GazeBatch {
  std::vector<GazeSample> samples;
  nlohmann::json meta = nlohmann::json::object();
  bool operator==(const GazeBatch&) const = default;
};

struct EmotionBatch {
  std::vector<EmotionSample> samples;
  bool operator==(const EmotionBatch&) const = default;
};

struct PredictionEmitted {
  int turn = 0;
  double elapsed_s = 0.0;
  double p_switch = 0.0;
  bool operator==(const PredictionEmitted&) const = default;
};

struct SessionEnd {
  std::string result;  // "1-0", "0-1", "1/2-1/2" or "*"
  std::string reason;
  bool operator==(const SessionEnd&) const = default;
};

using EventPayload = std::variant<SessionStart, OpponentMove, ModeChosen, PieceTypeChosen, MoveMade,
                                  GazeBatch, EmotionBatch, PredictionEmitted, SessionEnd>;

struct SessionEvent {
  std::int64_t seq = 0;
  Millis t = 0;
  EventPayload payload;

  std::string_view kind() const;
  bool operator==(const SessionEvent&) const = default;
};

using SessionLog = std::vector<SessionEvent>;

// One JSON object per event: {"seq", "t", "kind", ...payload fields}.
nlohmann::json to_json(const SessionEvent& event);
// Throws DataError naming the offending field.
SessionEvent event_from_json(const nlohmann::json& j);

}  // namespace handbrain::session

#endif  // HANDBRAIN_SESSION_EVENTS_HPP_

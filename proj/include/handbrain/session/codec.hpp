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

#ifndef HANDBRAIN_SESSION_CODEC_HPP_
#define HANDBRAIN_SESSION_CODEC_HPP_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "handbrain/session/machine.hpp"
#include "json.hpp"

// Wire messages between the game server and a UI client. Every message is a
// JSON object with a "kind" field. Fields a decoder does not know are kept in
// `extra` and written back on encode.
namespace handbrain::session::wire {

// Client to server.
struct ChooseMode {
  ControlMode mode = ControlMode::kBrain;
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const ChooseMode&) const = default;
};

struct ChoosePiece {
  PieceType piece = PieceType::kPawn;
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const ChoosePiece&) const = default;
};

struct SubmitMove {
  std::string uci;
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const SubmitMove&) const = default;
};

struct GazeBatch {
  std::vector<GazeSample> samples;
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const GazeBatch&) const = default;
};

struct EmotionBatch {
  std::vector<EmotionSample> samples;
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const EmotionBatch&) const = default;
};

struct Resign {
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const Resign&) const = default;
};

// Server to client.
struct State {
  std::string session_id;
  std::string fen;
  std::string phase;
  int turn = 0;
  Millis t = 0;
  Color player = Color::kWhite;
  std::optional<PieceType> constraint;
  std::vector<PieceType> legal_piece_types;
  std::vector<std::string> legal_moves;
  std::vector<ControlMode> modes;
  std::string last_move;
  std::string result;
  std::string reason;
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const State&) const = default;
};

struct Prediction {
  int turn = 0;
  double elapsed_s = 0.0;
  double p_switch = 0.0;
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const Prediction&) const = default;
};

struct ErrorReply {
  std::string code;
  std::string message;
  std::string path;  // JSON pointer into the offending message, if any
  nlohmann::json extra = nlohmann::json::object();
  bool operator==(const ErrorReply&) const = default;
};

using Message = std::variant<ChooseMode, ChoosePiece, SubmitMove, GazeBatch, EmotionBatch, Resign, State,
                             Prediction, ErrorReply>;

std::string_view kind_of(const Message& m);

std::string encode(const Message& m);
nlohmann::json to_json(const Message& m);
// Throws util::SchemaError with the JSON-pointer path of the violation.
Message decode(std::string_view text);
Message from_json(const nlohmann::json& j);

// Full snapshot for the client: position, phase and what is legal now.
State make_state(const SessionState& s, const std::string& session_id, Millis now);

}  // namespace handbrain::session::wire

#endif  // HANDBRAIN_SESSION_CODEC_HPP_

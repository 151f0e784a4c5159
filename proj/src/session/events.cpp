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

#include "handbrain/session/events.hpp"

#include "handbrain/util/json_fields.hpp"

namespace handbrain::session {

using nlohmann::json;
using util::SchemaError;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Move parse_move_field(const json& j, std::string_view key) {
  const std::string text = util::require_string(j, key);
  auto m = Move::parse_uci(text);
  if (!m) throw SchemaError(util::child_path("", key), "not a UCI move: '" + text + "'");
  return *m;
}

PieceType parse_piece_field(const json& j, std::string_view key) {
  const std::string text = util::require_string(j, key);
  auto t = chess::piece_type_from_string(text);
  if (!t) throw SchemaError(util::child_path("", key), "unknown piece type '" + text + "'");
  return *t;
}

Actor parse_actor_field(const json& j) {
  const std::string text = util::require_string(j, "by");
  auto a = parse_actor(text);
  if (!a) throw SchemaError("/by", "expected \"human\" or \"ai\"");
  return *a;
}

json gaze_to_json(const GazeSample& s) { return json::array({s.t, s.x, s.y, s.valid ? 1 : 0}); }

GazeSample gaze_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) throw SchemaError(path, "gaze sample must be [t, x, y, valid]");
  if (!j[0].is_number_integer()) throw SchemaError(path + "/0", "expected integer ms");
  GazeSample s;
  s.t = j[0].get<Millis>();
  s.x = util::as_number(j[1], path + "/1");
  s.y = util::as_number(j[2], path + "/2");
  if (!j[3].is_number_integer() || (j[3] != 0 && j[3] != 1)) throw SchemaError(path + "/3", "expected 0 or 1");
  s.valid = j[3] == 1;
  return s;
}

json emotion_to_json(const EmotionSample& s) {
  json out = json::array({s.t});
  for (double p : s.p) out.push_back(p);
  return out;
}

EmotionSample emotion_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 8) throw SchemaError(path, "emotion sample must be [t, p0..p6]");
  if (!j[0].is_number_integer()) throw SchemaError(path + "/0", "expected integer ms");
  EmotionSample s;
  s.t = j[0].get<Millis>();
  for (std::size_t i = 0; i < 7; ++i) s.p[i] = util::as_number(j[i + 1], util::child_path(path, i + 1));
  return s;
}

}  // namespace

std::string_view to_string(ControlMode mode) { return mode == ControlMode::kHand ? "hand" : "brain"; }
std::string_view to_string(Actor actor) { return actor == Actor::kHuman ? "human" : "ai"; }

std::optional<ControlMode> parse_mode(std::string_view text) {
  if (text == "hand") return ControlMode::kHand;
  if (text == "brain") return ControlMode::kBrain;
  return std::nullopt;
}

std::optional<Actor> parse_actor(std::string_view text) {
  if (text == "human") return Actor::kHuman;
  if (text == "ai") return Actor::kAi;
  return std::nullopt;
}

std::string_view SessionEvent::kind() const {
  return std::visit(Overloaded{
                        [](const SessionStart&) { return "session_start"; },
                        [](const OpponentMove&) { return "opponent_move"; },
                        [](const ModeChosen&) { return "mode_chosen"; },
                        [](const PieceTypeChosen&) { return "piece_type_chosen"; },
                        [](const MoveMade&) { return "move_made"; },
                        [](const GazeBatch&) { return "gaze_batch"; },
                        [](const EmotionBatch&) { return "emotion_batch"; },
                        [](const PredictionEmitted&) { return "prediction"; },
                        [](const SessionEnd&) { return "session_end"; },
                    },
                    payload);
}

json to_json(const SessionEvent& event) {
  json j{{"seq", event.seq}, {"t", event.t}, {"kind", event.kind()}};
  std::visit(Overloaded{
                 [&](const SessionStart& e) {
                   j["player"] = chess::to_string(e.player);
                   if (!e.fen.empty()) j["fen"] = e.fen;
                   j["meta"] = e.meta;
                 },
                 [&](const OpponentMove& e) { j["move"] = e.move.uci(); },
                 [&](const ModeChosen& e) { j["mode"] = to_string(e.mode); },
                 [&](const PieceTypeChosen& e) {
                   j["by"] = to_string(e.by);
                   j["piece"] = chess::to_string(e.type);
                 },
                 [&](const MoveMade& e) {
                   j["by"] = to_string(e.by);
                   j["move"] = e.move.uci();
                 },
                 [&](const GazeBatch& e) {
                   json samples = json::array();
                   for (const auto& s : e.samples) samples.push_back(gaze_to_json(s));
                   j["samples"] = std::move(samples);
                   j["meta"] = e.meta;
                 },
                 [&](const EmotionBatch& e) {
                   json samples = json::array();
                   for (const auto& s : e.samples) samples.push_back(emotion_to_json(s));
                   j["samples"] = std::move(samples);
                 },
                 [&](const PredictionEmitted& e) {
                   j["turn"] = e.turn;
                   j["elapsed_s"] = e.elapsed_s;
                   j["p_switch"] = e.p_switch;
                 },
                 [&](const SessionEnd& e) {
                   j["result"] = e.result;
                   j["reason"] = e.reason;
                 },
             },
             event.payload);
  return j;
}

SessionEvent event_from_json(const json& j) {
  SessionEvent e;
  e.seq = util::require_int(j, "seq");
  e.t = util::require_int(j, "t");
  const std::string kind = util::require_string(j, "kind");
  if (kind == "session_start") {
    SessionStart s;
    const std::string player = util::require_string(j, "player");
    auto color = chess::color_from_string(player);
    if (!color) throw SchemaError("/player", "expected \"white\" or \"black\"");
    s.player = *color;
    if (j.contains("fen")) s.fen = util::require_string(j, "fen");
    if (j.contains("meta")) s.meta = j.at("meta");
    e.payload = std::move(s);
  } else if (kind == "opponent_move") {
    e.payload = OpponentMove{parse_move_field(j, "move")};
  } else if (kind == "mode_chosen") {
    auto mode = parse_mode(util::require_string(j, "mode"));
    if (!mode) throw SchemaError("/mode", "expected \"hand\" or \"brain\"");
    e.payload = ModeChosen{*mode};
  } else if (kind == "piece_type_chosen") {
    e.payload = PieceTypeChosen{parse_actor_field(j), parse_piece_field(j, "piece")};
  } else if (kind == "move_made") {
    e.payload = MoveMade{parse_actor_field(j), parse_move_field(j, "move")};
  } else if (kind == "gaze_batch") {
    GazeBatch b;
    const auto& samples = util::require_array(j, "samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      b.samples.push_back(gaze_from_json(samples[i], util::child_path("/samples", i)));
    }
    if (j.contains("meta")) b.meta = j.at("meta");
    e.payload = std::move(b);
  } else if (kind == "emotion_batch") {
    EmotionBatch b;
    const auto& samples = util::require_array(j, "samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      b.samples.push_back(emotion_from_json(samples[i], util::child_path("/samples", i)));
    }
    e.payload = std::move(b);
  } else if (kind == "prediction") {
    e.payload = PredictionEmitted{static_cast<int>(util::require_int(j, "turn")),
                                  util::require_number(j, "elapsed_s"), util::require_number(j, "p_switch")};
  } else if (kind == "session_end") {
    e.payload = SessionEnd{util::require_string(j, "result"), util::require_string(j, "reason")};
  } else {
    throw SchemaError("/kind", "unknown event kind '" + kind + "'");
  }
  return e;
}

}  // namespace handbrain::session

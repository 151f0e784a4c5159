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

#include "handbrain/session/codec.hpp"

#include <initializer_list>

#include "handbrain/util/json_fields.hpp"

namespace handbrain::session::wire {

using nlohmann::json;
using util::SchemaError;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json collect_extra(const json& j, std::initializer_list<std::string_view> known) {
  json extra = json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "kind") continue;
    bool is_known = false;
    for (auto k : known) is_known = is_known || it.key() == k;
    if (!is_known) extra[it.key()] = it.value();
  }
  return extra;
}

void merge_extra(json& j, const json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    if (!j.contains(it.key())) j[it.key()] = it.value();
  }
}

PieceType piece_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a piece type name");
  auto t = chess::piece_type_from_string(v.get<std::string>());
  if (!t) throw SchemaError(path, "unknown piece type '" + v.get<std::string>() + "'");
  return *t;
}

ControlMode mode_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected \"hand\" or \"brain\"");
  auto m = parse_mode(v.get<std::string>());
  if (!m) throw SchemaError(path, "expected \"hand\" or \"brain\"");
  return *m;
}

// Samples share the log's compact array encoding.
std::vector<GazeSample> gaze_samples(const json& j) {
  json wrapper{{"seq", 0}, {"t", 0}, {"kind", "gaze_batch"}, {"samples", util::require_array(j, "samples")}};
  return std::get<session::GazeBatch>(event_from_json(wrapper).payload).samples;
}

std::vector<EmotionSample> emotion_samples(const json& j) {
  json wrapper{{"seq", 0}, {"t", 0}, {"kind", "emotion_batch"}, {"samples", util::require_array(j, "samples")}};
  return std::get<session::EmotionBatch>(event_from_json(wrapper).payload).samples;
}

json samples_json(const std::vector<GazeSample>& samples) {
  return to_json(SessionEvent{0, 0, session::GazeBatch{samples, json::object()}})["samples"];
}

json samples_json(const std::vector<EmotionSample>& samples) {
  return to_json(SessionEvent{0, 0, session::EmotionBatch{samples}})["samples"];
}

}  // namespace

std::string_view kind_of(const Message& m) {
  return std::visit(Overloaded{
                        [](const ChooseMode&) { return "choose_mode"; },
                        [](const ChoosePiece&) { return "choose_piece"; },
                        [](const SubmitMove&) { return "move"; },
                        [](const GazeBatch&) { return "gaze_batch"; },
                        [](const EmotionBatch&) { return "emotion_batch"; },
                        [](const Resign&) { return "resign"; },
                        [](const State&) { return "state"; },
                        [](const Prediction&) { return "prediction"; },
                        [](const ErrorReply&) { return "error"; },
                    },
                    m);
}

json to_json(const Message& m) {
  json j{{"kind", kind_of(m)}};
  const json* extra = nullptr;
  std::visit(Overloaded{
                 [&](const ChooseMode& x) {
                   j["mode"] = to_string(x.mode);
                   extra = &x.extra;
                 },
                 [&](const ChoosePiece& x) {
                   j["piece"] = chess::to_string(x.piece);
                   extra = &x.extra;
                 },
                 [&](const SubmitMove& x) {
                   j["uci"] = x.uci;
                   extra = &x.extra;
                 },
                 [&](const GazeBatch& x) {
                   j["samples"] = samples_json(x.samples);
                   extra = &x.extra;
                 },
                 [&](const EmotionBatch& x) {
                   j["samples"] = samples_json(x.samples);
                   extra = &x.extra;
                 },
                 [&](const Resign& x) { extra = &x.extra; },
                 [&](const State& x) {
                   j["session_id"] = x.session_id;
                   j["fen"] = x.fen;
                   j["phase"] = x.phase;
                   j["turn"] = x.turn;
                   j["t"] = x.t;
                   j["player"] = chess::to_string(x.player);
                   j["constraint"] = x.constraint ? json(chess::to_string(*x.constraint)) : json(nullptr);
                   j["legal_piece_types"] = json::array();
                   for (PieceType t : x.legal_piece_types) j["legal_piece_types"].push_back(chess::to_string(t));
                   j["legal_moves"] = x.legal_moves;
                   j["modes"] = json::array();
                   for (ControlMode c : x.modes) j["modes"].push_back(to_string(c));
                   j["last_move"] = x.last_move;
                   j["result"] = x.result;
                   j["reason"] = x.reason;
                   extra = &x.extra;
                 },
                 [&](const Prediction& x) {
                   j["turn"] = x.turn;
                   j["elapsed_s"] = x.elapsed_s;
                   j["p_switch"] = x.p_switch;
                   extra = &x.extra;
                 },
                 [&](const ErrorReply& x) {
                   j["code"] = x.code;
                   j["message"] = x.message;
                   j["path"] = x.path;
                   extra = &x.extra;
                 },
             },
             m);
  merge_extra(j, *extra);
  return j;
}

std::string encode(const Message& m) { return to_json(m).dump(); }

Message from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "message must be a JSON object");
  const std::string kind = util::require_string(j, "kind");
  if (kind == "choose_mode") {
    return ChooseMode{mode_at(util::require_field(j, "mode"), "/mode"), collect_extra(j, {"mode"})};
  }
  if (kind == "choose_piece") {
    return ChoosePiece{piece_at(util::require_field(j, "piece"), "/piece"), collect_extra(j, {"piece"})};
  }
  if (kind == "move") {
    const std::string uci = util::require_string(j, "uci");
    if (!chess::Move::parse_uci(uci)) throw SchemaError("/uci", "not a UCI move: '" + uci + "'");
    return SubmitMove{uci, collect_extra(j, {"uci"})};
  }
  if (kind == "gaze_batch") return GazeBatch{gaze_samples(j), collect_extra(j, {"samples"})};
  if (kind == "emotion_batch") return EmotionBatch{emotion_samples(j), collect_extra(j, {"samples"})};
  if (kind == "resign") return Resign{collect_extra(j, {})};
  if (kind == "state") {
    State s;
    s.session_id = util::require_string(j, "session_id");
    s.fen = util::require_string(j, "fen");
    s.phase = util::require_string(j, "phase");
    s.turn = static_cast<int>(util::require_int(j, "turn"));
    s.t = util::require_int(j, "t");
    auto player = chess::color_from_string(util::require_string(j, "player"));
    if (!player) throw SchemaError("/player", "expected \"white\" or \"black\"");
    s.player = *player;
    const json& c = util::require_field(j, "constraint");
    if (!c.is_null()) s.constraint = piece_at(c, "/constraint");
    const json& types = util::require_array(j, "legal_piece_types");
    for (std::size_t i = 0; i < types.size(); ++i) {
      s.legal_piece_types.push_back(piece_at(types[i], util::child_path("/legal_piece_types", i)));
    }
    const json& moves = util::require_array(j, "legal_moves");
    for (std::size_t i = 0; i < moves.size(); ++i) {
      if (!moves[i].is_string()) throw SchemaError(util::child_path("/legal_moves", i), "expected a string");
      s.legal_moves.push_back(moves[i].get<std::string>());
    }
    const json& modes = util::require_array(j, "modes");
    for (std::size_t i = 0; i < modes.size(); ++i) {
      s.modes.push_back(mode_at(modes[i], util::child_path("/modes", i)));
    }
    s.last_move = util::require_string(j, "last_move");
    s.result = util::require_string(j, "result");
    s.reason = util::require_string(j, "reason");
    s.extra = collect_extra(j, {"session_id", "fen", "phase", "turn", "t", "player", "constraint",
                                "legal_piece_types", "legal_moves", "modes", "last_move", "result", "reason"});
    return s;
  }
  if (kind == "prediction") {
    return Prediction{static_cast<int>(util::require_int(j, "turn")), util::require_number(j, "elapsed_s"),
                      util::require_number(j, "p_switch"), collect_extra(j, {"turn", "elapsed_s", "p_switch"})};
  }
  if (kind == "error") {
    return ErrorReply{util::require_string(j, "code"), util::require_string(j, "message"),
                      j.contains("path") ? util::require_string(j, "path") : std::string(),
                      collect_extra(j, {"code", "message", "path"})};
  }
  throw SchemaError("/kind", "unknown message kind '" + kind + "'");
}

Message decode(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

State make_state(const SessionState& s, const std::string& session_id, Millis now) {
  State out;
  out.session_id = session_id;
  out.fen = s.position.fen();
  out.phase = std::string(to_string(s.phase));
  out.turn = s.turn;
  out.t = now;
  out.player = s.player;
  out.constraint = s.constraint;
  out.modes = s.modes;
  out.result = s.result;
  out.reason = s.reason;
  out.last_move = s.last_move;
  if (s.phase == Phase::kAwaitPieceType) {
    for (PieceType t : chess::kAllPieceTypes) {
      if (!chess::legal_moves_of_type(s.position, t).empty()) out.legal_piece_types.push_back(t);
    }
  }
  if (s.phase == Phase::kAwaitHumanMove) {
    out.legal_piece_types.push_back(*s.constraint);
    for (const auto& m : chess::legal_moves_of_type(s.position, s.constraint)) out.legal_moves.push_back(m.uci());
  }
  return out;
}

}  // namespace handbrain::session::wire

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

#include "handbrain/session/machine.hpp"

#include <cmath>

namespace handbrain::session {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Code = ProtocolErrorCode;

[[noreturn]] void fail(Code code, const std::string& what) { throw ProtocolError(code, what); }

void expect_phase(const SessionState& s, Phase want, std::string_view what) {
  if (s.phase != want) {
    fail(Code::kOutOfPhase, std::string(what) + " not allowed in phase " + std::string(to_string(s.phase)));
  }
}

void expect_live(const SessionState& s, std::string_view what) {
  if (s.phase == Phase::kNotStarted || s.phase == Phase::kFinished) {
    fail(Code::kOutOfPhase, std::string(what) + " not allowed in phase " + std::string(to_string(s.phase)));
  }
}

std::string type_name(PieceType t) { return std::string(chess::to_string(t)); }

void begin_player_turn(SessionState& s, Millis t) {
  s.turn += 1;
  s.turn_start_t = t;
  s.constraint.reset();
  s.current_mode.reset();
  s.phase = Phase::kAwaitModeChoice;
}

// Resolves `move` against the legal list, checking the piece-type
// constraint if any.
Move resolve(const SessionState& s, const Move& move, std::optional<PieceType> constraint) {
  auto legal = chess::find_legal_move(s.position, move);
  if (!legal) fail(Code::kIllegalMove, "illegal move " + move.uci() + " in " + s.position.fen());
  if (constraint && legal->piece != *constraint) {
    fail(Code::kConstraintViolation, "move " + move.uci() + " must use a " + type_name(*constraint) + ", not a " +
                                         type_name(legal->piece));
  }
  return *legal;
}

void play(SessionState& s, const Move& legal) {
  s.position = chess::apply_generated_move(s.position, legal);
  s.last_move = legal.uci();
  s.repetitions[s.position.repetition_key()] += 1;
}

void complete_turn(SessionState& s, const Move& legal, Millis t, Actor piece_by) {
  TurnRecord r;
  r.turn = s.turn;
  r.mode = *s.current_mode;
  r.start_t = s.turn_start_t;
  r.mode_t = s.mode_t;
  r.move_t = t;
  r.piece_by = piece_by;
  r.piece = legal.piece;
  r.move = legal;
  r.fen_before = s.position.fen();
  play(s, legal);
  r.fen_after = s.position.fen();
  s.turns.push_back(std::move(r));
  s.modes.push_back(*s.current_mode);
  s.constraint.reset();
  s.phase = Phase::kOpponentThinking;
}

void check_gaze(const std::vector<GazeSample>& samples, Millis t) {
  Millis prev = INT64_MIN;
  for (const auto& g : samples) {
    if (g.t < prev) fail(Code::kBadPayload, "gaze samples out of order");
    if (g.t > t) fail(Code::kBadPayload, "gaze sample later than its batch");
    if (!std::isfinite(g.x) || !std::isfinite(g.y)) fail(Code::kBadPayload, "non-finite gaze coordinate");
    prev = g.t;
  }
}

void check_emotions(const std::vector<EmotionSample>& samples, Millis t) {
  Millis prev = INT64_MIN;
  for (const auto& e : samples) {
    if (e.t < prev) fail(Code::kBadPayload, "emotion samples out of order");
    if (e.t > t) fail(Code::kBadPayload, "emotion sample later than its batch");
    double sum = 0.0;
    for (double p : e.p) {
      if (!(p >= 0.0 && p <= 1.0)) fail(Code::kBadPayload, "emotion probability outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) fail(Code::kBadPayload, "emotion probabilities do not sum to 1");
    prev = e.t;
  }
}

}  // namespace

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kNotStarted: return "not_started";
    case Phase::kAwaitModeChoice: return "await_mode_choice";
    case Phase::kAwaitTeammatePiece: return "await_teammate_piece";
    case Phase::kAwaitPieceType: return "await_piece_type";
    case Phase::kAwaitTeammateMove: return "await_teammate_move";
    case Phase::kAwaitHumanMove: return "await_human_move";
    case Phase::kOpponentThinking: return "opponent_thinking";
    case Phase::kFinished: return "finished";
  }
  return "unknown";
}

std::string_view to_string(ProtocolErrorCode code) {
  switch (code) {
    case Code::kOutOfPhase: return "out_of_phase";
    case Code::kConstraintViolation: return "constraint_violation";
    case Code::kIllegalMove: return "illegal_move";
    case Code::kTimeWentBackwards: return "time_went_backwards";
    case Code::kBadSequence: return "bad_sequence";
    case Code::kBadPayload: return "bad_payload";
  }
  return "unknown";
}

std::optional<SessionEnd> terminal_outcome(const SessionState& s) {
  if (s.phase == Phase::kNotStarted || s.phase == Phase::kFinished) return std::nullopt;
  const auto status = chess::game_status(s.position);
  if (status == chess::GameStatus::kCheckmate) {
    return SessionEnd{s.position.side_to_move() == Color::kWhite ? "0-1" : "1-0", "checkmate"};
  }
  if (status == chess::GameStatus::kStalemate) return SessionEnd{"1/2-1/2", "stalemate"};
  auto it = s.repetitions.find(s.position.repetition_key());
  if (it != s.repetitions.end() && it->second >= 3) return SessionEnd{"1/2-1/2", "threefold repetition"};
  if (s.position.halfmove_clock() >= 100) return SessionEnd{"1/2-1/2", "fifty-move rule"};
  return std::nullopt;
}

SessionState apply_event(SessionState s, const SessionEvent& e) {
  if (e.seq != s.next_seq) {
    fail(Code::kBadSequence, "expected seq " + std::to_string(s.next_seq) + ", got " + std::to_string(e.seq));
  }
  if (e.t < s.last_t) {
    fail(Code::kTimeWentBackwards, "t=" + std::to_string(e.t) + " precedes " + std::to_string(s.last_t));
  }
  if (s.phase != Phase::kNotStarted && e.t < 0) fail(Code::kTimeWentBackwards, "negative timestamp");
  // Once the rules have ended the game only the end marker may follow.
  const auto pending = terminal_outcome(s);
  if (pending && !std::holds_alternative<SessionEnd>(e.payload)) {
    fail(Code::kOutOfPhase, "game is over (" + pending->reason + "); expected session_end");
  }

  std::visit(
      Overloaded{
          [&](const SessionStart& ev) {
            expect_phase(s, Phase::kNotStarted, "session_start");
            if (e.t < 0) fail(Code::kTimeWentBackwards, "negative timestamp");
            try {
              s.position = ev.fen.empty() ? chess::Position::start() : chess::Position::from_fen(ev.fen);
            } catch (const chess::FenError& err) {
              fail(Code::kBadPayload, err.what());
            }
            s.player = ev.player;
            s.repetitions[s.position.repetition_key()] = 1;
            s.turn_start_t = e.t;
            if (s.position.side_to_move() == s.player) {
              begin_player_turn(s, e.t);
            } else {
              s.phase = Phase::kOpponentThinking;
            }
          },
          [&](const OpponentMove& ev) {
            expect_phase(s, Phase::kOpponentThinking, "opponent_move");
            play(s, resolve(s, ev.move, std::nullopt));
            begin_player_turn(s, e.t);
          },
          [&](const ModeChosen& ev) {
            expect_phase(s, Phase::kAwaitModeChoice, "mode_chosen");
            s.current_mode = ev.mode;
            s.mode_t = e.t;
            s.phase = ev.mode == ControlMode::kHand ? Phase::kAwaitTeammatePiece : Phase::kAwaitPieceType;
          },
          [&](const PieceTypeChosen& ev) {
            expect_phase(s, ev.by == Actor::kAi ? Phase::kAwaitTeammatePiece : Phase::kAwaitPieceType,
                         ev.by == Actor::kAi ? "teammate piece_type_chosen" : "human piece_type_chosen");
            if (chess::legal_moves_of_type(s.position, ev.type).empty()) {
              fail(Code::kConstraintViolation, "no legal move for a " + type_name(ev.type));
            }
            s.constraint = ev.type;
            s.phase = ev.by == Actor::kAi ? Phase::kAwaitHumanMove : Phase::kAwaitTeammateMove;
          },
          [&](const MoveMade& ev) {
            expect_phase(s, ev.by == Actor::kHuman ? Phase::kAwaitHumanMove : Phase::kAwaitTeammateMove,
                         ev.by == Actor::kHuman ? "human move_made" : "teammate move_made");
            const Move legal = resolve(s, ev.move, s.constraint);
            complete_turn(s, legal, e.t, ev.by == Actor::kHuman ? Actor::kAi : Actor::kHuman);
          },
          [&](const GazeBatch& ev) {
            expect_live(s, "gaze_batch");
            check_gaze(ev.samples, e.t);
          },
          [&](const EmotionBatch& ev) {
            expect_live(s, "emotion_batch");
            check_emotions(ev.samples, e.t);
          },
          [&](const PredictionEmitted& ev) {
            expect_phase(s, Phase::kAwaitModeChoice, "prediction");
            if (ev.turn != s.turn) fail(Code::kBadPayload, "prediction for turn " + std::to_string(ev.turn));
            if (!(ev.p_switch >= 0.0 && ev.p_switch <= 1.0)) fail(Code::kBadPayload, "p_switch outside [0, 1]");
            if (!(ev.elapsed_s >= 0.0)) fail(Code::kBadPayload, "negative elapsed_s");
          },
          [&](const SessionEnd& ev) {
            expect_live(s, "session_end");
            if (pending && (ev.result != pending->result || ev.reason != pending->reason)) {
              fail(Code::kBadPayload, "session_end disagrees with the position (" + pending->reason + ")");
            }
            if (ev.result != "1-0" && ev.result != "0-1" && ev.result != "1/2-1/2" && ev.result != "*") {
              fail(Code::kBadPayload, "unknown result '" + ev.result + "'");
            }
            s.result = ev.result;
            s.reason = ev.reason;
            s.constraint.reset();
            s.phase = Phase::kFinished;
          },
      },
      e.payload);

  s.last_t = e.t;
  s.next_seq += 1;
  return s;
}

StepResult step(const SessionState& state, const Intent& in, Agents& agents) {
  StepResult out{state, {}};
  auto emit = [&](Millis t, EventPayload payload) {
    SessionEvent e{out.state.next_seq, t, std::move(payload)};
    out.state = apply_event(std::move(out.state), e);
    out.events.push_back(std::move(e));
  };
  auto end_if_over = [&](Millis t) {
    if (auto end = terminal_outcome(out.state)) emit(t, *end);
  };
  auto need = [](engine::Engine* e, const char* role) -> engine::Engine& {
    if (!e) throw UsageError(std::string("no ") + role + " engine configured");
    return *e;
  };

  std::visit(Overloaded{
                 [&](const intent::Start& i) {
                   emit(i.t, SessionStart{i.player, i.fen, i.meta});
                   end_if_over(i.t);
                 },
                 [&](const intent::ChooseMode& i) {
                   emit(i.t, ModeChosen{i.mode});
                   if (i.mode == ControlMode::kHand) {
                     const PieceType type = need(agents.teammate, "teammate").pick_piece_type(out.state.position);
                     emit(i.t, PieceTypeChosen{Actor::kAi, type});
                   }
                 },
                 [&](const intent::ChoosePiece& i) {
                   emit(i.t, PieceTypeChosen{Actor::kHuman, i.type});
                   const Move m = need(agents.teammate, "teammate").best_move(out.state.position, i.type);
                   emit(i.t, MoveMade{Actor::kAi, m});
                   end_if_over(i.t);
                 },
                 [&](const intent::SubmitMove& i) {
                   auto m = Move::parse_uci(i.uci);
                   if (!m) fail(Code::kBadPayload, "not a UCI move: '" + i.uci + "'");
                   emit(i.t, MoveMade{Actor::kHuman, *m});
                   end_if_over(i.t);
                 },
                 [&](const intent::OpponentTurn& i) {
                   expect_phase(out.state, Phase::kOpponentThinking, "opponent turn");
                   const Move m = need(agents.opponent, "opponent").best_move(out.state.position, std::nullopt);
                   emit(i.t, OpponentMove{m});
                   end_if_over(i.t);
                 },
                 [&](const intent::SubmitGaze& i) { emit(i.t, GazeBatch{i.samples, i.meta}); },
                 [&](const intent::SubmitEmotion& i) { emit(i.t, EmotionBatch{i.samples}); },
                 [&](const intent::EmitPrediction& i) {
                   emit(i.t, PredictionEmitted{out.state.turn, i.elapsed_s, i.p_switch});
                 },
                 [&](const intent::Resign& i) {
                   expect_live(out.state, "resign");
                   emit(i.t, SessionEnd{out.state.player == Color::kWhite ? "0-1" : "1-0", "resignation"});
                 },
                 [&](const intent::Abort& i) { emit(i.t, SessionEnd{"*", i.reason}); },
             },
             in);
  return out;
}

std::optional<std::string> check_invariants(const SessionState& s) {
  if (s.modes.size() != s.turns.size()) return "mode history and turn records differ in length";
  for (std::size_t i = 0; i < s.turns.size(); ++i) {
    const auto& r = s.turns[i];
    if (r.turn != static_cast<int>(i) + 1) return "turn records are not consecutive";
    if (r.mode != s.modes[i]) return "turn record mode differs from history";
    if (!(r.start_t <= r.mode_t && r.mode_t <= r.move_t)) return "turn timestamps not monotone";
    const Actor expected = r.mode == ControlMode::kHand ? Actor::kAi : Actor::kHuman;
    if (r.piece_by != expected) return "piece chooser does not match the mode";
    if (r.move.piece != r.piece) return "move does not match the chosen piece type";
  }
  switch (s.phase) {
    case Phase::kNotStarted:
      if (s.turn != 0 || !s.turns.empty()) return "progress before start";
      break;
    case Phase::kAwaitModeChoice:
      if (s.current_mode || s.constraint) return "stale turn data while awaiting mode";
      if (static_cast<int>(s.modes.size()) != s.turn - 1) return "mode history length != completed turns";
      if (s.position.side_to_move() != s.player) return "awaiting the player but opponent to move";
      break;
    case Phase::kAwaitPieceType:
      if (s.current_mode != ControlMode::kBrain || s.constraint) return "inconsistent brain turn";
      break;
    case Phase::kAwaitHumanMove:
      if (s.current_mode != ControlMode::kHand || !s.constraint) return "inconsistent hand turn";
      if (chess::legal_moves_of_type(s.position, s.constraint).empty()) return "constraint has no legal move";
      break;
    case Phase::kAwaitTeammatePiece:
    case Phase::kAwaitTeammateMove:
      return "transient phase escaped a step";
    case Phase::kOpponentThinking:
      if (s.position.side_to_move() == s.player) return "opponent thinking on the player's move";
      if (static_cast<int>(s.modes.size()) != s.turn) return "mode history length != completed turns";
      break;
    case Phase::kFinished:
      if (s.result.empty()) return "finished without a result";
      break;
  }
  return std::nullopt;
}

SessionState replay_session(const SessionLog& log, ReplayMode mode) {
  if (log.empty() || !std::holds_alternative<SessionStart>(log.front().payload)) {
    throw ReplayError(0, "missing SessionStart");
  }
  SessionState s;
  for (std::size_t i = 0; i < log.size(); ++i) {
    try {
      s = apply_event(std::move(s), log[i]);
    } catch (const ProtocolError& err) {
      throw ReplayError(i, std::string(log[i].kind()) + ": " + err.what());
    }
  }
  const std::size_t n = log.size();
  if (s.phase == Phase::kAwaitTeammatePiece) throw ReplayError(n, "log ends before the teammate's piece choice");
  if (s.phase == Phase::kAwaitTeammateMove) throw ReplayError(n, "log ends before the teammate's move");
  if (auto end = terminal_outcome(s)) throw ReplayError(n, "missing session_end after " + end->reason);
  if (mode == ReplayMode::kComplete && !s.finished()) throw ReplayError(n, "missing session_end");
  return s;
}

std::vector<bool> switch_labels(const std::vector<ControlMode>& modes) {
  std::vector<bool> out;
  for (std::size_t i = 1; i < modes.size(); ++i) out.push_back(modes[i] != modes[i - 1]);
  return out;
}

}  // namespace handbrain::session

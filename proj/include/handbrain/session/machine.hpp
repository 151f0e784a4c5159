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

#ifndef HANDBRAIN_SESSION_MACHINE_HPP_
#define HANDBRAIN_SESSION_MACHINE_HPP_

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "handbrain/chess/position.hpp"
#include "handbrain/engine/engine.hpp"
#include "handbrain/session/events.hpp"

namespace handbrain::session {

// kAwaitTeammatePiece and kAwaitTeammateMove only exist between the events
// of a single step; a state returned by step() is never in them.
enum class Phase {
  kNotStarted,
  kAwaitModeChoice,
  kAwaitTeammatePiece,
  kAwaitPieceType,
  kAwaitTeammateMove,
  kAwaitHumanMove,
  kOpponentThinking,
  kFinished,
};

std::string_view to_string(Phase phase);

enum class ProtocolErrorCode {
  kOutOfPhase,
  kConstraintViolation,
  kIllegalMove,
  kTimeWentBackwards,
  kBadSequence,
  kBadPayload,
};

std::string_view to_string(ProtocolErrorCode code);

class ProtocolError : public DataError {
 public:
  ProtocolError(ProtocolErrorCode code, const std::string& what) : DataError(what), code_(code) {}
  ProtocolErrorCode code() const { return code_; }

 private:
  ProtocolErrorCode code_;
};

// One completed player turn.
struct TurnRecord {
  int turn = 0;
  ControlMode mode = ControlMode::kBrain;
  Millis start_t = 0;  // previous opponent move, or session start
  Millis mode_t = 0;   // mode choice
  Millis move_t = 0;
  Actor piece_by = Actor::kHuman;
  PieceType piece = PieceType::kPawn;
  Move move;
  std::string fen_before;
  std::string fen_after;

  double thinking_time_s() const { return static_cast<double>(mode_t - start_t) / 1000.0; }
  bool operator==(const TurnRecord&) const = default;
};

struct SessionState {
  Phase phase = Phase::kNotStarted;
  chess::Position position = chess::Position::start();
  Color player = Color::kWhite;
  // Player turn index, 1-based; 0 before the first turn starts.
  int turn = 0;
  std::optional<PieceType> constraint;
  std::optional<ControlMode> current_mode;
  std::vector<ControlMode> modes;
  std::vector<TurnRecord> turns;
  Millis turn_start_t = 0;
  Millis mode_t = 0;
  Millis last_t = 0;
  std::int64_t next_seq = 0;
  std::map<std::string, int> repetitions;
  std::string last_move;  // UCI of the most recent move by either side
  std::string result;
  std::string reason;

  bool finished() const { return phase == Phase::kFinished; }
  bool operator==(const SessionState&) const = default;
};

namespace intent {

struct Start {
  Millis t = 0;
  Color player = Color::kWhite;
  std::string fen;
  nlohmann::json meta = nlohmann::json::object();
};
struct ChooseMode {
  Millis t = 0;
  ControlMode mode = ControlMode::kBrain;
};
struct ChoosePiece {
  Millis t = 0;
  PieceType type = PieceType::kPawn;
};
struct SubmitMove {
  Millis t = 0;
  std::string uci;
};
struct OpponentTurn {
  Millis t = 0;
};
struct SubmitGaze {
  Millis t = 0;
  std::vector<GazeSample> samples;
  nlohmann::json meta = nlohmann::json::object();
};
struct SubmitEmotion {
  Millis t = 0;
  std::vector<EmotionSample> samples;
};
struct EmitPrediction {
  Millis t = 0;
  double elapsed_s = 0.0;
  double p_switch = 0.0;
};
struct Resign {
  Millis t = 0;
};
struct Abort {
  Millis t = 0;
  std::string reason = "aborted";
};

}  // namespace intent

using Intent = std::variant<intent::Start, intent::ChooseMode, intent::ChoosePiece, intent::SubmitMove,
                            intent::OpponentTurn, intent::SubmitGaze, intent::SubmitEmotion,
                            intent::EmitPrediction, intent::Resign, intent::Abort>;

// Engines consulted by step(). Either may be null if the caller never
// issues intents that need it.
struct Agents {
  engine::Engine* teammate = nullptr;
  engine::Engine* opponent = nullptr;
};

struct StepResult {
  SessionState state;
  std::vector<SessionEvent> events;
};

// Folds one logged event into the state. Throws ProtocolError when the event
// is not legal in the current state.
SessionState apply_event(SessionState state, const SessionEvent& event);

// Validates `in` against `state`, consults the agents, and returns the new
// state plus emitted events. On any error the input state is untouched
// because nothing is returned.
StepResult step(const SessionState& state, const Intent& in, Agents& agents);

// Result and reason if the position ends the game by rule (mate, stalemate,
// threefold repetition, fifty-move rule).
std::optional<SessionEnd> terminal_outcome(const SessionState& state);

// Internal consistency check used by tests; returns a description of the
// first violated invariant.
std::optional<std::string> check_invariants(const SessionState& state);

class ReplayError : public DataError {
 public:
  ReplayError(std::size_t index, const std::string& what)
      : DataError("event " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

enum class ReplayMode {
  kComplete,  // the log must end with SessionEnd
  kPrefix,    // an unfinished session is fine, but not a half-finished turn
};

// Rebuilds the session purely from events. Throws ReplayError naming the
// offending index; a missing event is reported at index log.size().
SessionState replay_session(const SessionLog& log, ReplayMode mode = ReplayMode::kComplete);

// Per completed turn from the second on: true when the mode differs from the
// previous turn's.
std::vector<bool> switch_labels(const std::vector<ControlMode>& modes);

}  // namespace handbrain::session

#endif  // HANDBRAIN_SESSION_MACHINE_HPP_

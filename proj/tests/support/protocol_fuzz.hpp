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

#ifndef HANDBRAIN_TESTS_SUPPORT_PROTOCOL_FUZZ_HPP_
#define HANDBRAIN_TESTS_SUPPORT_PROTOCOL_FUZZ_HPP_

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "handbrain/session/machine.hpp"
#include "support/scripted_agents.hpp"

namespace testing {

using namespace handbrain;
using namespace handbrain::session;

struct Harness {
  testing::HashEngine teammate;
  testing::HashEngine opponent;
  Agents agents{&teammate, &opponent};
  SessionState state;
  SessionLog log;

  void run(const Intent& in) {
    auto r = step(state, in, agents);
    state = std::move(r.state);
    log.insert(log.end(), r.events.begin(), r.events.end());
  }
};

inline std::set<std::pair<Phase, Phase>> allowed_transitions(const Intent& in) {
  using P = Phase;
  const std::vector<P> live = {P::kAwaitModeChoice, P::kAwaitPieceType, P::kAwaitHumanMove, P::kOpponentThinking};
  std::set<std::pair<P, P>> out;
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, intent::Start>) {
          out = {{P::kNotStarted, P::kAwaitModeChoice}, {P::kNotStarted, P::kOpponentThinking},
                 {P::kNotStarted, P::kFinished}};
        } else if constexpr (std::is_same_v<T, intent::ChooseMode>) {
          out = {{P::kAwaitModeChoice, i.mode == ControlMode::kHand ? P::kAwaitHumanMove : P::kAwaitPieceType}};
        } else if constexpr (std::is_same_v<T, intent::ChoosePiece>) {
          out = {{P::kAwaitPieceType, P::kOpponentThinking}, {P::kAwaitPieceType, P::kFinished}};
        } else if constexpr (std::is_same_v<T, intent::SubmitMove>) {
          out = {{P::kAwaitHumanMove, P::kOpponentThinking}, {P::kAwaitHumanMove, P::kFinished}};
        } else if constexpr (std::is_same_v<T, intent::OpponentTurn>) {
          out = {{P::kOpponentThinking, P::kAwaitModeChoice}, {P::kOpponentThinking, P::kFinished}};
        } else if constexpr (std::is_same_v<T, intent::EmitPrediction>) {
          out = {{P::kAwaitModeChoice, P::kAwaitModeChoice}};
        } else if constexpr (std::is_same_v<T, intent::SubmitGaze> || std::is_same_v<T, intent::SubmitEmotion>) {
          for (P p : live) out.insert({p, p});
        } else {
          for (P p : live) out.insert({p, P::kFinished});
        }
      },
      in);
  return out;
}

inline Intent random_intent(std::mt19937_64& rng, const SessionState& s, Millis& clock) {
  // Mostly forward time, occasionally backwards.
  const Millis t = (rng() % 20 == 0) ? clock - 1 - static_cast<Millis>(rng() % 500)
                                     : (clock += static_cast<Millis>(rng() % 3000));
  const auto legal = chess::legal_moves(s.position);
  switch (rng() % 12) {
    case 0:
      return intent::Start{t, rng() % 4 == 0 ? chess::Color::kBlack : chess::Color::kWhite, "", {}};
    case 1:
    case 2:
      return intent::ChooseMode{t, rng() % 2 ? ControlMode::kHand : ControlMode::kBrain};
    case 3:
      return intent::ChoosePiece{t, chess::kAllPieceTypes[rng() % 6]};
    case 4:
    case 5: {
      if (legal.empty() || rng() % 6 == 0) return intent::SubmitMove{t, rng() % 2 ? "e2e5" : "zz"};
      if (s.constraint && rng() % 3) {
        const auto typed = chess::legal_moves_of_type(s.position, s.constraint);
        return intent::SubmitMove{t, typed[rng() % typed.size()].uci()};
      }
      return intent::SubmitMove{t, legal[rng() % legal.size()].uci()};
    }
    case 6:
    case 7:
      return intent::OpponentTurn{t};
    case 8: {
      intent::SubmitGaze g{t, {}, {}};
      for (int i = 0; i < 4; ++i) g.samples.push_back({t - 100 + 25 * i, 400.0 + i, 300.0, i != 2});
      if (rng() % 5 == 0) std::swap(g.samples[0], g.samples[3]);
      return g;
    }
    case 9: {
      intent::SubmitEmotion e{t, {}};
      EmotionSample sample{t, {0.1, 0.1, 0.1, 0.1, 0.1, 0.2, 0.3}};
      if (rng() % 5 == 0) sample.p[0] = 0.5;
      e.samples.push_back(sample);
      return e;
    }
    case 10:
      return intent::EmitPrediction{t, 1.0, (rng() % 13) / 10.0};
    default:
      if (rng() % 4) return intent::OpponentTurn{t};
      return rng() % 2 ? Intent{intent::Resign{t}} : Intent{intent::Abort{t, "aborted"}};
  }
}

struct FuzzTally {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t bad_transitions = 0;
  std::size_t mutated_on_reject = 0;
  std::size_t invariant_failures = 0;
  std::size_t replay_mismatches = 0;
};

// Feeds `sequences` random intent sequences of 5..44 intents to fresh
// sessions and counts contract violations.
inline FuzzTally fuzz_protocol(int sequences, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FuzzTally tally;
  for (int seq = 0; seq < sequences; ++seq) {
    Harness h;
    Millis clock = 0;
    const int length = 5 + static_cast<int>(rng() % 40);
    for (int k = 0; k < length; ++k) {
      const Intent in = random_intent(rng, h.state, clock);
      const SessionState before = h.state;
      try {
        auto r = step(h.state, in, h.agents);
        if (!allowed_transitions(in).count({before.phase, r.state.phase})) ++tally.bad_transitions;
        if (check_invariants(r.state)) ++tally.invariant_failures;
        h.state = std::move(r.state);
        h.log.insert(h.log.end(), r.events.begin(), r.events.end());
        ++tally.accepted;
      } catch (const ProtocolError&) {
        ++tally.rejected;
        if (!(h.state == before)) ++tally.mutated_on_reject;
      }
    }
    if (!h.log.empty() && !(replay_session(h.log, ReplayMode::kPrefix) == h.state)) ++tally.replay_mismatches;
  }
  return tally;
}

}  // namespace testing

#endif  // HANDBRAIN_TESTS_SUPPORT_PROTOCOL_FUZZ_HPP_

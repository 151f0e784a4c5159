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

#include "handbrain/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "handbrain/chess/position.hpp"
#include "handbrain/engine/builtin.hpp"
#include "handbrain/fragility/fragility.hpp"
#include "handbrain/session/machine.hpp"
#include "handbrain/util/hash.hpp"

namespace handbrain::sim {

using session::ControlMode;
using session::Millis;

void TruthPolicy::validate() const {
  for (double c : {bias, fragility, eval, entropy, elapsed, prev_brain}) {
    if (!std::isfinite(c)) throw UsageError("policy coefficients must be finite");
  }
  if (!(noise >= 0.0 && noise < 0.5)) throw UsageError("policy noise must be in [0, 0.5)");
}

TruthPolicy TruthPolicy::fragility_driven(double cut) {
  TruthPolicy p;
  p.fragility = 1.0;
  p.bias = -cut;
  p.link = Link::kThreshold;
  return p;
}

TruthPolicy TruthPolicy::fragility_and_eval() {
  TruthPolicy p;
  p.fragility = 150.0;
  p.eval = 0.8;
  p.bias = -3.3;
  return p;
}

TruthPolicy policy_preset(const std::string& name) {
  if (name == "fragility") return TruthPolicy::fragility_driven();
  if (name == "mixed") return TruthPolicy::fragility_and_eval();
  throw UsageError("unknown policy preset '" + name + "' (expected fragility or mixed)");
}

void to_json(nlohmann::json& j, const TruthPolicy& p) {
  j = nlohmann::json{{"bias", p.bias},
                     {"fragility", p.fragility},
                     {"eval", p.eval},
                     {"entropy", p.entropy},
                     {"elapsed", p.elapsed},
                     {"prev_brain", p.prev_brain},
                     {"noise", p.noise},
                     {"link", p.link == Link::kLogistic ? "logistic" : "threshold"}};
}

void from_json(const nlohmann::json& j, TruthPolicy& p) {
  if (!j.is_object()) throw UsageError("policy must be a JSON object");
  p = TruthPolicy{};
  for (const auto& [key, value] : j.items()) {
    if (key == "link") {
      const auto link = value.get<std::string>();
      if (link == "logistic") p.link = Link::kLogistic;
      else if (link == "threshold") p.link = Link::kThreshold;
      else throw UsageError("unknown policy link '" + link + "'");
      continue;
    }
    double* field = key == "bias"         ? &p.bias
                    : key == "fragility"  ? &p.fragility
                    : key == "eval"       ? &p.eval
                    : key == "entropy"    ? &p.entropy
                    : key == "elapsed"    ? &p.elapsed
                    : key == "prev_brain" ? &p.prev_brain
                    : key == "noise"      ? &p.noise
                                          : nullptr;
    if (!field) throw UsageError("unknown policy field '" + key + "'");
    if (!value.is_number()) throw UsageError("policy field '" + key + "' must be a number");
    *field = value.get<double>();
  }
  p.validate();
}

double switch_logit(const TruthPolicy& p, const TurnInputs& in) {
  return p.bias + p.fragility * in.fragility + p.eval * (in.eval_cp / 100.0) + p.entropy * in.entropy_target +
         p.elapsed * in.thinking_s + p.prev_brain * (in.prev_brain ? 1.0 : 0.0);
}

double switch_probability(const TruthPolicy& p, const TurnInputs& in) {
  const double z = switch_logit(p, in);
  const double base = p.link == Link::kThreshold ? (z > 0.0 ? 1.0 : 0.0) : 1.0 / (1.0 + std::exp(-z));
  return base * (1.0 - p.noise) + (1.0 - base) * p.noise;
}

engine::EngineConfig default_opponent() {
  auto cfg = engine::EngineConfig::opponent();
  cfg.humanlike = true;
  cfg.elo = 1500;
  return cfg;
}

void SimConfig::validate() const {
  policy.validate();
  teammate.validate();
  opponent.validate();
  evaluator.validate();
  if (turns < 2) throw UsageError("a simulated session needs at least 2 turns");
  if (!(thinking_min_s > 0.0 && thinking_min_s <= thinking_max_s)) throw UsageError("bad thinking-time bounds");
  if (!(thinking_sigma >= 0.0) || !(thinking_median_s > 0.0)) throw UsageError("bad thinking-time distribution");
  if (!(gaze_period_ms >= 1.0) || emotion_period_ms < 1) throw UsageError("sample periods must be >= 1 ms");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw UsageError("dropout must be in [0, 1)");
}

std::uint64_t session_seed(std::uint64_t seed, int index) {
  return util::fnv1a64("session:" + std::to_string(seed) + ":" + std::to_string(index));
}

namespace {

struct Screen {
  features::BoardRect board;
  session::Color player;

  std::pair<double, double> centre(chess::Square sq) const {
    const double cell = board.size / 8.0;
    const int col = player == session::Color::kWhite ? sq.file() : 7 - sq.file();
    const int row = player == session::Color::kWhite ? 7 - sq.rank() : sq.rank();
    return {board.x0 + (col + 0.5) * cell, board.y0 + (row + 0.5) * cell};
  }
};

class Generator {
 public:
  explicit Generator(const SimConfig& cfg)
      : cfg_(cfg),
        rng_(cfg.seed),
        teammate_(engine::make_engine(with_seed(cfg.teammate, cfg.seed ^ 0x7465616dULL))),
        opponent_(engine::make_engine(with_seed(cfg.opponent, cfg.seed ^ 0x6f70706fULL))),
        evaluator_(engine::make_engine(cfg.evaluator)),
        agents_{teammate_.get(), opponent_.get()} {}

  session::SessionLog run() {
    const std::string id = cfg_.session_id.empty() ? "sim-" + std::to_string(cfg_.seed) : cfg_.session_id;
    nlohmann::json meta{{"session_id", id},
                        {"simulator",
                         {{"version", 1},
                          {"seed", cfg_.seed},
                          {"policy", cfg_.policy},
                          {"evaluator", cfg_.evaluator},
                          {"teammate", cfg_.teammate},
                          {"opponent", cfg_.opponent}}}};
    apply(session::intent::Start{0, session::Color::kWhite, "", meta});
    std::optional<ControlMode> prev;
    std::optional<int> prev_eval;
    while (state_.phase == session::Phase::kAwaitModeChoice && state_.turn <= cfg_.turns) {
      const auto fen = state_.position.fen();
      TurnInputs in;
      in.eval_cp = evaluator_->evaluate(state_.position).as_centipawns();
      in.fragility = fragility::fragility_score(state_.position);
      in.entropy_target = uniform(0.0, 1.0);
      in.thinking_s = thinking_time();
      ControlMode mode;
      if (!prev) {
        mode = uniform(0.0, 1.0) < 0.5 ? ControlMode::kHand : ControlMode::kBrain;
      } else {
        in.prev_brain = *prev == ControlMode::kBrain;
        const bool sw = uniform(0.0, 1.0) < switch_probability(cfg_.policy, in);
        mode = sw ? other(*prev) : *prev;
      }
      const double swing = prev_eval ? std::abs(in.eval_cp - *prev_eval) : 0.0;
      think(in, swing);
      play_turn(mode);
      prev = mode;
      prev_eval = in.eval_cp;
    }
    if (!state_.finished()) apply(session::intent::Abort{state_.last_t + 1, "turn limit"});
    return std::move(log_);
  }

 private:
  static engine::EngineConfig with_seed(engine::EngineConfig c, std::uint64_t seed) {
    c.seed = seed;
    return c;
  }
  static ControlMode other(ControlMode m) { return m == ControlMode::kHand ? ControlMode::kBrain : ControlMode::kHand; }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng_); }
  Millis uniform_ms(Millis lo, Millis hi) { return std::uniform_int_distribution<Millis>(lo, hi)(rng_); }

  double thinking_time() {
    const double t = cfg_.thinking_median_s * std::exp(cfg_.thinking_sigma * normal(0.0, 1.0));
    // Whole milliseconds, so the logged thinking time reproduces it exactly.
    return static_cast<double>(std::llround(std::clamp(t, cfg_.thinking_min_s, cfg_.thinking_max_s) * 1000.0)) /
           1000.0;
  }

  void apply(const session::Intent& in) {
    auto r = session::step(state_, in, agents_);
    state_ = std::move(r.state);
    log_.insert(log_.end(), r.events.begin(), r.events.end());
  }

  // Gaze wanders between squares involved in candidate moves; a higher
  // entropy target spreads it over more of them and widens each burst.
  std::vector<session::GazeSample> gaze_stream(Millis start, Millis end, double h) {
    const Screen screen{cfg_.board, state_.player};
    std::vector<chess::Square> squares;
    for (const auto& m : chess::legal_moves(state_.position)) {
      for (auto sq : {m.from, m.to}) {
        if (std::find(squares.begin(), squares.end(), sq) == squares.end()) squares.push_back(sq);
      }
    }
    for (std::size_t i = squares.size(); i > 1; --i) std::swap(squares[i - 1], squares[rng_() % i]);
    const std::size_t used =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(1.0 + h * (squares.size() - 1.0))));
    const double spread = 8.0 + 30.0 * h;

    std::vector<session::GazeSample> out;
    double t = static_cast<double>(start);
    double fix_end = t;
    double cx = 0.0, cy = 0.0;
    while (t <= static_cast<double>(end)) {
      if (t >= fix_end) {
        fix_end = t + std::max(80.0, -280.0 * std::log(1.0 - uniform(0.0, 0.999)));
        if (uniform(0.0, 1.0) < 0.03 + 0.05 * h) {
          cx = cfg_.board.x0 + cfg_.board.size + 60.0 + uniform(0.0, 80.0);
          cy = cfg_.board.y0 + uniform(0.0, cfg_.board.size);
        } else {
          std::tie(cx, cy) = screen.centre(squares[rng_() % used]);
        }
      }
      session::GazeSample s{static_cast<Millis>(std::llround(t)), cx + normal(0.0, spread),
                            cy + normal(0.0, spread), true};
      if (cfg_.dropout > 0.0 && uniform(0.0, 1.0) < cfg_.dropout) s.valid = false;
      if (out.empty() || s.t > out.back().t) out.push_back(s);
      t += cfg_.gaze_period_ms;
    }
    return out;
  }

  // Surprise jumps after a large evaluation swing and decays over ~2 s.
  std::vector<session::EmotionSample> emotion_stream(Millis start, Millis end, double swing) {
    const double spike = std::min(0.6, swing / 500.0);
    std::vector<session::EmotionSample> out;
    for (Millis t = start; t <= end; t += cfg_.emotion_period_ms) {
      const double decay = std::exp(-static_cast<double>(t - start) / 2000.0);
      const double s = std::clamp(0.05 + spike * decay + normal(0.0, 0.02), 0.0, 0.95);
      std::array<double, 7> w{};
      double sum = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (i == session::kSurpriseIndex) continue;
        w[i] = 0.2 + uniform(0.0, 1.0) + (i == 6 ? 2.0 : 0.0);
        sum += w[i];
      }
      session::EmotionSample e{t, {}};
      for (std::size_t i = 0; i < w.size(); ++i) e.p[i] = i == session::kSurpriseIndex ? s : w[i] / sum * (1.0 - s);
      out.push_back(e);
    }
    return out;
  }

  void think(const TurnInputs& in, double swing) {
    const Millis start = state_.turn_start_t;
    const Millis mode_t = start + std::max<Millis>(1, std::llround(in.thinking_s * 1000.0));
    const auto gaze = gaze_stream(start, mode_t, in.entropy_target);
    const auto emotion = emotion_stream(start, mode_t, swing);
    std::size_t gi = 0, ei = 0;
    bool first = true;
    auto post = [&](Millis until) {
      std::vector<session::GazeSample> g;
      while (gi < gaze.size() && gaze[gi].t <= until) g.push_back(gaze[gi++]);
      std::vector<session::EmotionSample> e;
      while (ei < emotion.size() && emotion[ei].t <= until) e.push_back(emotion[ei++]);
      if (!g.empty()) {
        nlohmann::json meta = nlohmann::json::object();
        if (first) meta = {{"turn", state_.turn}, {"entropy_target", in.entropy_target}};
        first = false;
        apply(session::intent::SubmitGaze{until, std::move(g), meta});
      }
      if (!e.empty()) apply(session::intent::SubmitEmotion{until, std::move(e)});
    };
    for (Millis b = start + 1000; b < mode_t; b += 1000) post(b);
    post(mode_t);
    mode_t_ = mode_t;
  }

  void play_turn(ControlMode mode) {
    apply(session::intent::ChooseMode{mode_t_, mode});
    const std::uint64_t seed = cfg_.seed ^ util::fnv1a64(state_.position.fen() + "#human");
    Millis move_t;
    if (mode == ControlMode::kBrain) {
      const auto pick = engine::fallback_move(state_.position, std::nullopt, seed).piece;
      move_t = mode_t_ + uniform_ms(300, 1500);
      apply(session::intent::ChoosePiece{move_t, pick});
    } else {
      const auto move = engine::fallback_move(state_.position, state_.constraint, seed);
      move_t = mode_t_ + uniform_ms(500, 3000);
      apply(session::intent::SubmitMove{move_t, move.uci()});
    }
    if (state_.phase == session::Phase::kOpponentThinking) {
      apply(session::intent::OpponentTurn{move_t + uniform_ms(200, 1200)});
    }
  }

  const SimConfig& cfg_;
  std::mt19937_64 rng_;
  std::unique_ptr<engine::Engine> teammate_;
  std::unique_ptr<engine::Engine> opponent_;
  std::unique_ptr<engine::Engine> evaluator_;
  session::Agents agents_;
  session::SessionState state_;
  session::SessionLog log_;
  Millis mode_t_ = 0;
};

}  // namespace

session::SessionLog generate_session(const SimConfig& cfg) {
  cfg.validate();
  return Generator(cfg).run();
}

std::vector<TurnTruth> truth_labels(const session::SessionLog& log, const TruthPolicy& policy) {
  if (log.empty()) throw DataError("empty log");
  const auto* start = std::get_if<session::SessionStart>(&log.front().payload);
  if (!start || !start->meta.contains("simulator")) throw DataError("log was not written by the simulator");
  engine::EngineConfig eval_cfg;
  try {
    eval_cfg = start->meta["simulator"].at("evaluator").get<engine::EngineConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("simulator metadata: ") + e.what());
  }
  auto evaluator = engine::make_engine(eval_cfg);

  std::map<int, double> entropy;
  for (const auto& e : log) {
    if (const auto* g = std::get_if<session::GazeBatch>(&e.payload)) {
      if (g->meta.contains("entropy_target")) {
        entropy[g->meta.at("turn").get<int>()] = g->meta.at("entropy_target").get<double>();
      }
    }
  }
  const auto state = session::replay_session(log, session::ReplayMode::kPrefix);
  std::vector<TurnTruth> out;
  for (std::size_t i = 1; i < state.turns.size(); ++i) {
    const auto& rec = state.turns[i];
    auto h = entropy.find(rec.turn);
    if (h == entropy.end()) throw DataError("turn " + std::to_string(rec.turn) + " has no entropy target");
    const auto pos = chess::Position::from_fen(rec.fen_before);
    TurnTruth t;
    t.turn = rec.turn;
    t.inputs.eval_cp = evaluator->evaluate(pos).as_centipawns();
    t.inputs.fragility = fragility::fragility_score(pos);
    t.inputs.entropy_target = h->second;
    t.inputs.thinking_s = rec.thinking_time_s();
    t.inputs.prev_brain = state.turns[i - 1].mode == ControlMode::kBrain;
    t.p_switch = switch_probability(policy, t.inputs);
    t.switched = rec.mode != state.turns[i - 1].mode;
    out.push_back(t);
  }
  return out;
}

}  // namespace handbrain::sim

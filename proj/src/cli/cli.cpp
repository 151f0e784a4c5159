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

#include "handbrain/cli/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "handbrain/chess/pgn.hpp"
#include "handbrain/cli/pipeline.hpp"
#include "handbrain/fragility/fragility.hpp"
#include "handbrain/session/log.hpp"
#include "handbrain/session/machine.hpp"
#include "handbrain/session/server.hpp"
#include "handbrain/stats/stats.hpp"

namespace handbrain::cli {

namespace fs = std::filesystem;

namespace {

// JSON config files: top-level keys preset global flags, nested objects
// preset a subcommand's flags, e.g. {"seed": 7, "train": {"depth": 3}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw DataError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw DataError("config file: unsupported value " + v.dump());
  }

  static void collect(const nlohmann::json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        collect(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct Globals {
  std::uint64_t seed = 0;
  bool verbose = false;
};

class Diag {
 public:
  Diag(std::ostream& err, const bool& verbose) : err_(err), verbose_(verbose) {}
  template <typename... Args>
  void info(const Args&... args) const {
    if (!verbose_) return;
    err_ << "handbrain: ";
    (err_ << ... << args);
    err_ << '\n';
  }

 private:
  std::ostream& err_;
  const bool& verbose_;
};

engine::EngineConfig load_engine(const std::string& path, engine::EngineConfig fallback) {
  if (path.empty()) return fallback;
  std::ifstream in(path);
  if (!in) throw DataError("cannot open engine config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    if (j.is_object() && !j.contains("role")) {
      nlohmann::json role;
      to_json(role, fallback);
      j["role"] = role["role"];
    }
    return j.get<engine::EngineConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

features::Dataset load_dataset(const std::string& path) {
  if (!fs::is_regular_file(path)) throw DataError("no such data file: " + path);
  return features::read_csv(fs::path(path));
}

// Sibling path with a suffix before the extension: data.csv -> data.train.csv.
fs::path sibling(const fs::path& p, const std::string& tag, const std::string& ext) {
  return p.parent_path() / (p.stem().string() + "." + tag + ext);
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  int sessions = 40;
  int turns = 30;
  std::string policy;
  std::string preset = "fragility";
  std::string logdir;
  double dropout = 0.0;
  std::string teammate, opponent, evaluator;
};

void cmd_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out, const Diag& diag) {
  sim::SimConfig base;
  base.policy = a.policy.empty() ? sim::policy_preset(a.preset) : read_json_file(a.policy).get<sim::TruthPolicy>();
  base.turns = a.turns;
  base.dropout = a.dropout;
  base.teammate = load_engine(a.teammate, base.teammate);
  base.opponent = load_engine(a.opponent, base.opponent);
  base.evaluator = load_engine(a.evaluator, base.evaluator);
  base.validate();
  diag.info("simulating ", a.sessions, " sessions of up to ", a.turns, " turns, seed ", g.seed);
  const auto logs = simulate_corpus(base, a.sessions, g.seed);
  write_corpus(logs, a.logdir);
  std::size_t turns = 0;
  for (const auto& l : logs) turns += session::replay_session(l.log).turns.size();
  out << "wrote " << logs.size() << " sessions (" << turns << " turns) to " << a.logdir << "\n";
}

struct ExtractArgs {
  std::string logdir;
  int k = 3;
  std::string out = "data.csv";
  double train_fraction = 0.7;
  std::string evaluator;
};

void cmd_extract(const ExtractArgs& a, const Globals& g, std::ostream& out, const Diag& diag) {
  if (!(a.train_fraction > 0.0 && a.train_fraction < 1.0)) throw UsageError("--train-fraction must be in (0, 1)");
  const auto logs = read_corpus(a.logdir);
  diag.info("extracting features from ", logs.size(), " logs");
  features::ExtractParams params;
  params.k = a.k;
  const auto data = extract_dataset(logs, load_engine(a.evaluator, engine::EngineConfig::evaluator()), params);
  if (data.rows.empty()) throw DataError("the logs produced no feature rows");
  const auto split = features::split_dataset(data, g.seed, a.train_fraction);
  const fs::path path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  features::write_csv(path, data);
  features::write_csv(sibling(path, "train", ".csv"), split.train);
  features::write_csv(sibling(path, "test", ".csv"), split.test);
  write_text(sibling(path, "split", ".json"), features::manifest_json(split).dump(2) + "\n");
  out << "wrote " << data.rows.size() << " rows (" << split.train.rows.size() << " train, " << split.test.rows.size()
      << " test) to " << path.string() << "\n";
}

struct TrainArgs {
  std::string data;
  std::string out = "model.json";
  bool no_task_features = false;
  bool tune = false;
  learner::TrainParams params;
};

void cmd_train(const TrainArgs& a, const Globals& g, std::ostream& out, const Diag& diag) {
  auto data = load_dataset(a.data);
  data = data.select(model_features(data.feature_names, !a.no_task_features));
  auto params = a.params;
  params.seed = g.seed;
  params.validate();
  if (a.tune) {
    const auto result = learner::tune(data, params);
    for (const auto& [p, f1] : result.trials) {
      diag.info("tune depth=", p.depth, " gamma=", p.loss.gamma, " beta=", p.loss.beta, " f1=", fixed(f1, 4));
    }
    params = result.best;
  }
  diag.info("training on ", data.rows.size(), " rows, ", data.feature_names.size(), " features");
  const auto model = learner::train(data, params);
  learner::save_model(a.out, model);
  out << "wrote model " << model.digest() << " (" << model.trees.size() << " trees, "
      << model.feature_names.size() << " features) to " << a.out << "\n";
}

struct EvalArgs {
  std::string model;
  std::string data;
  std::string out;
  double threshold = 0.5;
};

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (!(a.threshold > 0.0 && a.threshold < 1.0)) throw UsageError("--threshold must be in (0, 1)");
  const auto model = learner::load_model(a.model);
  const auto data = learner::align(load_dataset(a.data), model);
  const auto metrics = learner::evaluate_metrics(model, data, a.threshold);
  const auto report = metrics_report(model, metrics, data.rows.size()).dump(2) + "\n";
  if (a.out.empty()) {
    out << report;
    return;
  }
  write_text(a.out, report);
  out << "accuracy " << fixed(metrics.accuracy, 4) << "  f1 " << fixed(metrics.f1, 4) << "\n\n";
  out << "feature                  gain\n";
  for (const auto& [name, gain] : metrics.importance) {
    out << std::left << std::setw(24) << name << " " << fixed(gain, 4) << "\n";
  }
}

struct AnalyzeArgs {
  std::string data;
  std::string out;
  double alpha = 0.05;
};

void cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw UsageError("--alpha must be in (0, 1)");
  const auto report = stats::analysis_report(load_dataset(a.data), a.alpha);
  if (a.out.empty()) {
    out << stats::to_markdown(report);
  } else if (fs::path(a.out).extension() == ".md") {
    write_text(a.out, stats::to_markdown(report));
  } else {
    write_text(a.out, stats::to_json(report).dump(2) + "\n");
  }
}

struct FragilityArgs {
  std::string fen;
  std::string pgn;
};

void cmd_fragility(const FragilityArgs& a, std::ostream& out) {
  if (!a.fen.empty()) {
    const auto pos = chess::Position::from_fen(a.fen);
    const auto report = fragility::analyze(pos);
    out << "score " << fixed(report.score, 6) << "\n\n";
    out << "square piece        attacked betweenness\n";
    for (std::size_t i = 0; i < report.graph.nodes.size(); ++i) {
      const auto& n = report.graph.nodes[i];
      const std::string piece = std::string(chess::to_string(n.piece.color)) + " " + std::string(chess::to_string(n.piece.type));
      out << std::left << std::setw(6) << n.square.name() << " " << std::setw(12) << piece << " "
          << std::setw(8) << (report.attacked[i] ? "yes" : "no") << " " << fixed(report.betweenness[i], 6) << "\n";
    }
    return;
  }
  std::ifstream in(a.pgn, std::ios::binary);
  if (!in) throw DataError("cannot open " + a.pgn);
  std::stringstream text;
  text << in.rdbuf();
  out << "game,ply,fen,score\n";
  const auto games = chess::read_pgn(text.str());
  for (std::size_t g = 0; g < games.size(); ++g) {
    auto pos = games[g].start;
    for (std::size_t ply = 0; ply <= games[g].moves.size(); ++ply) {
      out << g + 1 << "," << ply << "," << pos.fen() << "," << fixed(fragility::fragility_score(pos), 6) << "\n";
      if (ply < games[g].moves.size()) pos = chess::apply_move(pos, games[g].moves[ply]);
    }
  }
}

struct ReplayArgs {
  std::string log;
  std::optional<int> turn;
  bool json = false;
};

void cmd_replay(const ReplayArgs& a, std::ostream& out) {
  const auto log = session::read_log(a.log);
  const auto state = session::replay_session(log, session::ReplayMode::kPrefix);
  if (a.turn) {
    const int k = *a.turn;
    if (k < 1 || k > static_cast<int>(state.turns.size()) + 1) {
      throw UsageError("--turn must be between 1 and " + std::to_string(state.turns.size() + 1));
    }
    // Board at the start of turn k; one past the last turn is the final board.
    out << (k <= static_cast<int>(state.turns.size()) ? state.turns[static_cast<std::size_t>(k - 1)].fen_before
                                                      : state.position.fen())
        << "\n";
    return;
  }
  if (a.json) {
    nlohmann::json turns = nlohmann::json::array();
    for (const auto& t : state.turns) {
      turns.push_back({{"turn", t.turn},
                       {"mode", session::to_string(t.mode)},
                       {"piece", chess::to_string(t.piece)},
                       {"move", t.move.uci()},
                       {"thinking_time_s", t.thinking_time_s()},
                       {"fen_before", t.fen_before},
                       {"fen_after", t.fen_after}});
    }
    out << nlohmann::json{{"phase", session::to_string(state.phase)},
                          {"result", state.result},
                          {"fen", state.position.fen()},
                          {"events", log.size()},
                          {"turns", turns}}
               .dump(2)
        << "\n";
    return;
  }
  for (const auto& t : state.turns) {
    out << std::right << std::setw(3) << t.turn << "  " << std::left << std::setw(5) << session::to_string(t.mode) << " "
        << std::setw(6) << chess::to_string(t.piece) << " " << std::setw(5) << t.move.uci() << " "
        << fixed(t.thinking_time_s(), 3) << "s  " << t.fen_after << "\n";
  }
  out << "phase " << session::to_string(state.phase);
  if (!state.result.empty()) out << "  result " << state.result;
  out << "\nfen " << state.position.fen() << "\n";
}

struct ServeArgs {
  std::string address = "127.0.0.1";
  int port = 8080;
  std::string teammate, opponent, evaluator;
  std::string logdir = ".";
  std::string model;
  std::string player = "white";
  int k = 3;
  int threads = 2;
  double max_seconds = 0.0;
};

void cmd_serve(const ServeArgs& a, std::ostream& out, const Diag& diag) {
  session::ServerConfig cfg;
  cfg.address = a.address;
  if (a.port < 0 || a.port > 65535) throw UsageError("--port must be in [0, 65535]");
  cfg.port = static_cast<std::uint16_t>(a.port);
  cfg.teammate = load_engine(a.teammate, cfg.teammate);
  cfg.opponent = load_engine(a.opponent, cfg.opponent);
  cfg.logdir = a.logdir;
  const auto player = chess::color_from_string(a.player);
  if (!player) throw UsageError("--player must be white or black");
  cfg.player = *player;
  cfg.threads = a.threads;
  fs::create_directories(cfg.logdir);

  std::shared_ptr<learner::BoostedModel> model;
  std::shared_ptr<engine::Engine> evaluator;
  std::shared_ptr<features::PositionAnnotator> annotator;
  auto lock = std::make_shared<std::mutex>();
  if (!a.model.empty()) {
    model = std::make_shared<learner::BoostedModel>(learner::load_model(a.model));
    evaluator = engine::make_engine(load_engine(a.evaluator, engine::EngineConfig::evaluator()));
    annotator = std::make_shared<features::PositionAnnotator>(*evaluator);
    features::ExtractParams params;
    params.k = a.k;
    const auto names = features::default_feature_names();
    std::vector<std::size_t> cols;
    for (const auto& n : model->feature_names) {
      const auto it = std::find(names.begin(), names.end(), n);
      if (it == names.end()) throw DataError("model feature '" + n + "' is not a live feature");
      cols.push_back(static_cast<std::size_t>(it - names.begin()));
    }
    cfg.predictor = [=](const session::SessionLog& log, session::Millis now) -> std::optional<double> {
      std::lock_guard<std::mutex> guard(*lock);
      const auto x = features::live_features(log, now, annotator->fn(), params);
      if (!x) return std::nullopt;
      features::FeatureVector v;
      for (auto c : cols) v.push_back((*x)[c]);
      return model->predict_proba(v);
    };
  }

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  session::Server server(cfg);
  out << "listening on ws://" << a.address << ":" << server.port() << "\n" << std::flush;
  diag.info("logs go to ", cfg.logdir.string(), model ? ", predictions on" : ", predictions off");
  std::thread worker([&] { server.run(); });
  if (a.max_seconds > 0.0) {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(a.max_seconds);
    timespec poll{0, 50'000'000};
    while (std::chrono::steady_clock::now() < deadline) {
      if (sigtimedwait(&signals, nullptr, &poll) > 0) break;
    }
  } else {
    int sig = 0;
    sigwait(&signals, &sig);
  }
  server.stop();
  worker.join();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
}

int exit_code(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::kUsage: return kExitUsage;
    case ErrorCategory::kData: return kExitData;
    case ErrorCategory::kEngine: return kExitEngine;
  }
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hand-and-brain chess: game server, simulator and switch-prediction pipeline", "handbrain"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file presetting any flag; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed for simulation, splits and training")->capture_default_str();
  app.add_flag("-v,--verbose", g.verbose, "Progress messages on standard error");
  const Diag diag(err, g.verbose);

  ServeArgs serve;
  auto* s = app.add_subcommand("serve", "WebSocket game server");
  s->add_option("--address", serve.address, "Listen address")->capture_default_str();
  s->add_option("--port", serve.port, "Listen port (0 picks a free one)")->capture_default_str();
  s->add_option("--teammate", serve.teammate, "Teammate engine config (JSON file)");
  s->add_option("--opponent", serve.opponent, "Opponent engine config (JSON file)");
  s->add_option("--evaluator", serve.evaluator, "Evaluator engine config for live features (JSON file)");
  s->add_option("--logdir", serve.logdir, "Directory for session logs")->capture_default_str();
  s->add_option("--model", serve.model, "Switch model; enables live predictions");
  s->add_option("--k", serve.k, "Local window in turns")->check(CLI::IsMember({3, 5}))->capture_default_str();
  s->add_option("--player", serve.player, "Colour of the human team")->check(CLI::IsMember({"white", "black"}))
      ->capture_default_str();
  s->add_option("--threads", serve.threads, "I/O threads")->check(CLI::Range(1, 64))->capture_default_str();
  s->add_option("--max-seconds", serve.max_seconds, "Stop after this many seconds (0 runs until interrupted)")
      ->capture_default_str();

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Generate synthetic session logs");
  si->add_option("--sessions", sim.sessions, "Number of sessions")->check(CLI::PositiveNumber)->capture_default_str();
  si->add_option("--turns", sim.turns, "Turn limit per session")->check(CLI::Range(2, 500))->capture_default_str();
  si->add_option("--policy", sim.policy, "Switching policy (JSON file); overrides --preset");
  si->add_option("--preset", sim.preset, "Built-in policy")->check(CLI::IsMember({"fragility", "mixed"}))
      ->capture_default_str();
  si->add_option("--logdir", sim.logdir, "Output directory")->required();
  si->add_option("--dropout", sim.dropout, "Fraction of invalid gaze samples")->capture_default_str();
  si->add_option("--teammate", sim.teammate, "Teammate engine config (JSON file)");
  si->add_option("--opponent", sim.opponent, "Opponent engine config (JSON file)");
  si->add_option("--evaluator", sim.evaluator, "Evaluator engine config (JSON file)");

  ExtractArgs ex;
  auto* e = app.add_subcommand("extract", "Feature rows and train/test split from session logs");
  e->add_option("--logdir", ex.logdir, "Directory of *.jsonl session logs")->required();
  e->add_option("--k", ex.k, "Local window in turns")->check(CLI::IsMember({3, 5}))->capture_default_str();
  e->add_option("--out", ex.out, "Dataset CSV; .train.csv, .test.csv and .split.json are written beside it")
      ->capture_default_str();
  e->add_option("--train-fraction", ex.train_fraction, "Share of turns in the training split")->capture_default_str();
  e->add_option("--evaluator", ex.evaluator, "Evaluator engine config (JSON file)");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Fit the switch classifier");
  t->add_option("--data", tr.data, "Training CSV")->required();
  t->add_option("--out", tr.out, "Model file")->capture_default_str();
  t->add_flag("--no-task-features", tr.no_task_features, "Drop evaluation, fragility and time columns");
  t->add_flag("--tune", tr.tune, "Grid search over depth, gamma and beta on a held-out tail");
  t->add_option("--trees", tr.params.trees, "Boosting rounds")->capture_default_str();
  t->add_option("--depth", tr.params.depth, "Maximum tree depth")->capture_default_str();
  t->add_option("--learning-rate", tr.params.learning_rate, "Shrinkage")->capture_default_str();
  t->add_option("--min-leaf", tr.params.min_leaf, "Minimum samples per leaf")->capture_default_str();
  t->add_option("--lambda", tr.params.lambda, "L2 penalty on leaf values")->capture_default_str();
  t->add_option("--subsample", tr.params.subsample, "Row sampling rate per tree")->capture_default_str();
  t->add_option("--gamma", tr.params.loss.gamma, "Focal-loss focusing parameter")->capture_default_str();
  t->add_option("--alpha", tr.params.loss.alpha, "Focal-loss weight")->capture_default_str();
  t->add_option("--beta", tr.params.loss.beta, "Time-weight exponent")->capture_default_str();

  EvalArgs ev;
  auto* v = app.add_subcommand("eval", "Score a model on a dataset");
  v->add_option("--model", ev.model, "Model file")->required();
  v->add_option("--data", ev.data, "Test CSV")->required();
  v->add_option("--out", ev.out, "Metrics JSON file (default: standard output)");
  v->add_option("--threshold", ev.threshold, "Decision threshold on the switch probability")->capture_default_str();

  AnalyzeArgs an;
  auto* n = app.add_subcommand("analyze", "Mann-Whitney comparison of switch and no-switch turns");
  n->add_option("--data", an.data, "Dataset CSV")->required();
  n->add_option("--out", an.out, "Report file, .md for markdown, otherwise JSON (default: markdown on stdout)");
  n->add_option("--alpha", an.alpha, "Significance level")->capture_default_str();

  FragilityArgs fr;
  auto* f = app.add_subcommand("fragility", "Fragility score of a position or of every position in a PGN");
  auto* fen = f->add_option("--fen", fr.fen, "Position in FEN");
  auto* pgn = f->add_option("--pgn", fr.pgn, "PGN file; prints one CSV line per position");
  fen->excludes(pgn);
  f->require_option(1);

  ReplayArgs rp;
  auto* r = app.add_subcommand("replay", "Replay a session log");
  r->add_option("--log", rp.log, "Session log (JSON Lines)")->required();
  r->add_option("--turn", rp.turn, "Print only the board at the start of this turn");
  r->add_flag("--json", rp.json, "Print the replay as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& ex) {
    err << "handbrain: " << ex.what() << "\n";
    return exit_code(ex);
  }

  try {
    if (*s) cmd_serve(serve, out, diag);
    else if (*si) cmd_simulate(sim, g, out, diag);
    else if (*e) cmd_extract(ex, g, out, diag);
    else if (*t) cmd_train(tr, g, out, diag);
    else if (*v) cmd_eval(ev, out);
    else if (*n) cmd_analyze(an, out);
    else if (*f) cmd_fragility(fr, out);
    else if (*r) cmd_replay(rp, out);
  } catch (const Error& ex) {
    err << "handbrain: " << ex.what() << "\n";
    return exit_code(ex);
  } catch (const nlohmann::json::exception& ex) {
    err << "handbrain: " << ex.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& ex) {
    err << "handbrain: " << ex.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace handbrain::cli

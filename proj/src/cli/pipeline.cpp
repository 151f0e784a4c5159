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

#include "handbrain/cli/pipeline.hpp"

#include <cstdio>

#include "handbrain/session/log.hpp"

namespace handbrain::cli {

std::vector<NamedLog> simulate_corpus(const sim::SimConfig& base, int sessions, std::uint64_t seed) {
  if (sessions < 1) throw UsageError("need at least one session");
  std::vector<NamedLog> out;
  out.reserve(static_cast<std::size_t>(sessions));
  for (int i = 0; i < sessions; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "sim-%llu-%04d", static_cast<unsigned long long>(seed), i);
    sim::SimConfig cfg = base;
    cfg.seed = sim::session_seed(seed, i);
    cfg.session_id = name;
    out.push_back({name, sim::generate_session(cfg)});
  }
  return out;
}

std::vector<std::filesystem::path> write_corpus(const std::vector<NamedLog>& logs,
                                                const std::filesystem::path& logdir) {
  std::filesystem::create_directories(logdir);
  std::vector<std::filesystem::path> paths;
  for (const auto& l : logs) {
    paths.push_back(logdir / (l.name + ".jsonl"));
    session::write_log(paths.back(), l.log);
  }
  return paths;
}

std::vector<NamedLog> read_corpus(const std::filesystem::path& logdir) {
  if (!std::filesystem::is_directory(logdir)) throw DataError("no such log directory: " + logdir.string());
  std::vector<NamedLog> out;
  for (const auto& path : session::list_logs(logdir)) out.push_back({path.stem().string(), session::read_log(path)});
  if (out.empty()) throw DataError("no session logs in " + logdir.string());
  return out;
}

features::Dataset extract_dataset(const std::vector<NamedLog>& logs, const engine::EngineConfig& evaluator,
                                  const features::ExtractParams& params) {
  auto engine = engine::make_engine(evaluator);
  features::PositionAnnotator annotator(*engine);
  features::Dataset data{features::default_feature_names(), {}};
  for (const auto& l : logs) {
    auto rows = features::build_feature_rows(l.log, features::session_id_of(l.log, l.name), annotator.fn(), params);
    data.rows.insert(data.rows.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  return data;
}

std::vector<std::string> model_features(const std::vector<std::string>& names, bool task_features) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (task_features || !features::is_task_feature(n)) out.push_back(n);
  }
  return out;
}

Outcome train_and_evaluate(const features::DatasetSplit& split, const learner::TrainParams& params,
                           bool task_features) {
  const auto names = model_features(split.train.feature_names, task_features);
  Outcome o;
  o.model = learner::train(split.train.select(names), params);
  o.metrics = learner::evaluate_metrics(o.model, learner::align(split.test, o.model));
  return o;
}

nlohmann::json metrics_report(const learner::BoostedModel& model, const learner::Metrics& metrics,
                              std::size_t test_rows) {
  auto j = learner::to_json(metrics);
  j["model_digest"] = model.digest();
  j["test_rows"] = test_rows;
  j["features"] = model.feature_names;
  return j;
}

}  // namespace handbrain::cli

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

#ifndef HANDBRAIN_CLI_PIPELINE_HPP_
#define HANDBRAIN_CLI_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "handbrain/features/features.hpp"
#include "handbrain/learner/learner.hpp"
#include "handbrain/sim/simulator.hpp"

namespace handbrain::cli {

struct NamedLog {
  std::string name;  // used as the session id when the log carries none
  session::SessionLog log;
};

// Session `i` of the corpus uses session_seed(seed, i) and the id
// "sim-<seed>-<i>" (index zero-padded to four digits).
std::vector<NamedLog> simulate_corpus(const sim::SimConfig& base, int sessions, std::uint64_t seed);
// Writes each log as <logdir>/<name>.jsonl and returns the paths.
std::vector<std::filesystem::path> write_corpus(const std::vector<NamedLog>& logs, const std::filesystem::path& logdir);
std::vector<NamedLog> read_corpus(const std::filesystem::path& logdir);

// Feature rows of every log in order, annotated by one shared evaluator.
features::Dataset extract_dataset(const std::vector<NamedLog>& logs, const engine::EngineConfig& evaluator,
                                  const features::ExtractParams& params = {});

// Feature columns a model trains on; the ablation drops task features.
std::vector<std::string> model_features(const std::vector<std::string>& names, bool task_features);

struct Outcome {
  learner::BoostedModel model;
  learner::Metrics metrics;
};

// Trains on split.train restricted to model_features() and scores split.test.
Outcome train_and_evaluate(const features::DatasetSplit& split, const learner::TrainParams& params,
                           bool task_features);

// Metrics file contents: the metrics plus model digest and test size.
nlohmann::json metrics_report(const learner::BoostedModel& model, const learner::Metrics& metrics,
                              std::size_t test_rows);

}  // namespace handbrain::cli

#endif  // HANDBRAIN_CLI_PIPELINE_HPP_

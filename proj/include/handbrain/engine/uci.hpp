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

#ifndef HANDBRAIN_ENGINE_UCI_HPP_
#define HANDBRAIN_ENGINE_UCI_HPP_

#include <chrono>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "handbrain/engine/engine.hpp"

namespace handbrain::engine {

// Child process with line-oriented stdin/stdout pipes. Killed on destruction.
class ChildProcess {
 public:
  explicit ChildProcess(const std::vector<std::string>& argv);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  void write_line(const std::string& line);
  // Returns nullopt on timeout; throws EngineError on EOF.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// Parsed `info` line fields we care about.
struct UciInfo {
  std::optional<int> depth;
  std::optional<int> score_cp;    // side to move's point of view
  std::optional<int> score_mate;  // moves, signed, side to move's point of view
};

std::optional<UciInfo> parse_info_line(const std::string& line);

class UciEngine : public Engine {
 public:
  // Starts the process and completes the uci/isready handshake. Throws
  // EngineError (or EngineTimeout) when the engine does not answer.
  explicit UciEngine(EngineConfig cfg);
  ~UciEngine() override;

  Evaluation evaluate(const Position& pos) override;
  Move best_move(const Position& pos, std::optional<PieceType> constraint) override;
  const EngineConfig& config() const override { return cfg_; }

  const std::set<std::string>& options() const { return options_; }
  const std::string& name() const { return name_; }

 private:
  struct GoResult {
    std::string bestmove;
    UciInfo last_info;
  };

  std::string expect(const std::string& token, std::chrono::milliseconds timeout);
  GoResult go(const Position& pos, const std::vector<Move>& searchmoves);
  std::chrono::milliseconds analysis_timeout() const;

  EngineConfig cfg_;
  ChildProcess process_;
  std::set<std::string> options_;
  std::string name_;
  std::mutex mutex_;
};

}  // namespace handbrain::engine

#endif  // HANDBRAIN_ENGINE_UCI_HPP_

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

#ifndef HANDBRAIN_SESSION_SERVER_HPP_
#define HANDBRAIN_SESSION_SERVER_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

#include "handbrain/engine/engine.hpp"
#include "handbrain/session/events.hpp"

namespace handbrain::session {

// Switch probability for the turn in progress, given the log so far and the
// current session time. Returning nullopt skips that tick.
using Predictor = std::function<std::optional<double>(const SessionLog& log, Millis now)>;

struct ServerConfig {
  std::string address = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  engine::EngineConfig teammate = engine::EngineConfig::teammate();
  engine::EngineConfig opponent = engine::EngineConfig::opponent();
  std::filesystem::path logdir = ".";
  Color player = Color::kWhite;
  Predictor predictor;
  int threads = 2;
};

// WebSocket game server. Each connection is one session with its own
// engines and log file; a dropped connection aborts its session.
class Server {
 public:
  explicit Server(ServerConfig cfg);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Bound port (useful when the config asked for 0).
  std::uint16_t port() const;
  // Serves until stop() is called.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace handbrain::session

#endif  // HANDBRAIN_SESSION_SERVER_HPP_

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

#ifndef HANDBRAIN_SESSION_LOG_HPP_
#define HANDBRAIN_SESSION_LOG_HPP_

#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "handbrain/session/events.hpp"

namespace handbrain::session {

// JSON Lines: one event per line, UTF-8, keys in a fixed order.
std::string to_jsonl_line(const SessionEvent& event);

// Throws DataError with a 1-based line number on malformed input.
SessionLog read_jsonl(std::istream& in, const std::string& source = "<stream>");
SessionLog read_log(const std::filesystem::path& path);
void write_log(const std::filesystem::path& path, const SessionLog& log);

// Session log files (*.jsonl) directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> list_logs(const std::filesystem::path& dir);

// Appends events as they happen and flushes each line.
class LogWriter {
 public:
  explicit LogWriter(const std::filesystem::path& path);
  void append(const SessionEvent& event);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace handbrain::session

#endif  // HANDBRAIN_SESSION_LOG_HPP_

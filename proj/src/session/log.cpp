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

#include "handbrain/session/log.hpp"

#include <algorithm>

#include "handbrain/error.hpp"

namespace handbrain::session {

namespace fs = std::filesystem;

std::string to_jsonl_line(const SessionEvent& event) {
  // nlohmann::json sorts object keys, which keeps lines byte-stable.
  return to_json(event).dump() + "\n";
}

SessionLog read_jsonl(std::istream& in, const std::string& source) {
  SessionLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      log.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(source + ":" + std::to_string(lineno) + ": invalid JSON: " + e.what());
    } catch (const DataError& e) {
      throw DataError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return log;
}

SessionLog read_log(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open log " + path.string());
  return read_jsonl(in, path.string());
}

void write_log(const fs::path& path, const SessionLog& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write log " + path.string());
  for (const auto& e : log) out << to_jsonl_line(e);
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<fs::path> list_logs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

LogWriter::LogWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw DataError("cannot open log for writing: " + path.string());
}

void LogWriter::append(const SessionEvent& event) {
  out_ << to_jsonl_line(event);
  out_.flush();
  if (!out_) throw DataError("write failed for " + path_.string());
}

}  // namespace handbrain::session

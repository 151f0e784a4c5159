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

#ifndef HANDBRAIN_ERROR_HPP_
#define HANDBRAIN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace handbrain {

// Coarse failure classes. The CLI maps them onto process exit codes.
enum class ErrorCategory {
  kUsage = 1,
  kData = 2,
  kEngine = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what)
      : Error(ErrorCategory::kUsage, what) {}
};

// Malformed input files, logs, positions or datasets.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what)
      : Error(ErrorCategory::kData, what) {}
};

// Engine process unreachable, handshake failures, analysis timeouts.
class EngineError : public Error {
 public:
  explicit EngineError(const std::string& what)
      : Error(ErrorCategory::kEngine, what) {}
};

class EngineTimeout : public EngineError {
 public:
  explicit EngineTimeout(const std::string& what) : EngineError(what) {}
};

}  // namespace handbrain

#endif  // HANDBRAIN_ERROR_HPP_

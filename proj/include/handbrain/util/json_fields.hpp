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

#ifndef HANDBRAIN_UTIL_JSON_FIELDS_HPP_
#define HANDBRAIN_UTIL_JSON_FIELDS_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "handbrain/error.hpp"
#include "json.hpp"

namespace handbrain::util {

// Schema violation at a JSON-pointer path such as "/samples/3/1".
class SchemaError : public DataError {
 public:
  SchemaError(std::string path, const std::string& what)
      : DataError((path.empty() ? std::string("/") : path) + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline std::string child_path(std::string_view parent, std::string_view key) {
  std::string out(parent);
  out += '/';
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

inline std::string child_path(std::string_view parent, std::size_t index) {
  return std::string(parent) + "/" + std::to_string(index);
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, std::string_view key,
                                           std::string_view path = "") {
  if (!obj.is_object()) throw SchemaError(std::string(path), "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(child_path(path, key), "missing required field");
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, std::string_view key,
                                  std::string_view path = "") {
  const auto& v = require_field(obj, key, path);
  if (!v.is_string()) throw SchemaError(child_path(path, key), "expected a string");
  return v.get<std::string>();
}

inline std::int64_t require_int(const nlohmann::json& obj, std::string_view key,
                                std::string_view path = "") {
  const auto& v = require_field(obj, key, path);
  if (!v.is_number_integer()) throw SchemaError(child_path(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

inline double as_number(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

inline double require_number(const nlohmann::json& obj, std::string_view key,
                             std::string_view path = "") {
  return as_number(require_field(obj, key, path), child_path(path, key));
}

inline bool require_bool(const nlohmann::json& obj, std::string_view key, std::string_view path = "") {
  const auto& v = require_field(obj, key, path);
  if (!v.is_boolean()) throw SchemaError(child_path(path, key), "expected a boolean");
  return v.get<bool>();
}

inline const nlohmann::json& require_array(const nlohmann::json& obj, std::string_view key,
                                           std::string_view path = "") {
  const auto& v = require_field(obj, key, path);
  if (!v.is_array()) throw SchemaError(child_path(path, key), "expected an array");
  return v;
}

}  // namespace handbrain::util

#endif  // HANDBRAIN_UTIL_JSON_FIELDS_HPP_

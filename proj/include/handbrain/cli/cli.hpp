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

#ifndef HANDBRAIN_CLI_CLI_HPP_
#define HANDBRAIN_CLI_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace handbrain::cli {

// Exit codes: 0 success, 1 usage, 2 data or format, 3 engine or transport.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitEngine = 3;

// Runs one command. `args` excludes the program name. Results go to `out`
// or files, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace handbrain::cli

#endif  // HANDBRAIN_CLI_CLI_HPP_

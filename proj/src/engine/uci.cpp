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

#include "handbrain/engine/uci.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

namespace handbrain::engine {

using Clock = std::chrono::steady_clock;

ChildProcess::ChildProcess(const std::vector<std::string>& argv) {
  if (argv.empty()) throw EngineError("empty engine command");
  int in_pipe[2];
  int out_pipe[2];
  int err_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw EngineError(std::string("pipe: ") + std::strerror(errno));
  }
  pid_ = fork();
  if (pid_ < 0) throw EngineError(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    std::vector<char*> args;
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    const int err = errno;
    (void)!write(err_pipe[1], &err, sizeof err);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  int exec_errno = 0;
  const ssize_t n = read(err_pipe[0], &exec_errno, sizeof exec_errno);
  close(err_pipe[0]);
  if (n == sizeof exec_errno) {
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
    close(to_child_);
    close(from_child_);
    throw EngineError("cannot start engine '" + argv[0] + "': " + std::strerror(exec_errno));
  }
  signal(SIGPIPE, SIG_IGN);
}

ChildProcess::~ChildProcess() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    // Give a well-behaved engine a moment to exit after stdin closes.
    for (int i = 0; i < 20; ++i) {
      if (waitpid(pid_, nullptr, WNOHANG) == pid_) return;
      usleep(5000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
  }
}

void ChildProcess::write_line(const std::string& line) {
  std::string data = line + "\n";
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t n = write(to_child_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EngineError(std::string("engine write failed: ") + std::strerror(errno));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

std::optional<std::string> ChildProcess::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw EngineError(std::string("poll: ") + std::strerror(errno));
    }
    if (rc == 0) return std::nullopt;
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EngineError(std::string("engine read failed: ") + std::strerror(errno));
    }
    if (n == 0) throw EngineError("engine process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::optional<UciInfo> parse_info_line(const std::string& line) {
  std::istringstream in(line);
  std::string tok;
  if (!(in >> tok) || tok != "info") return std::nullopt;
  UciInfo info;
  while (in >> tok) {
    if (tok == "depth") {
      int d;
      if (in >> d) info.depth = d;
    } else if (tok == "score") {
      std::string kind;
      int value;
      if (in >> kind >> value) {
        if (kind == "cp") info.score_cp = value;
        if (kind == "mate") info.score_mate = value;
      }
    } else if (tok == "pv" || tok == "string") {
      break;
    }
  }
  return info;
}

namespace {

std::vector<std::string> split_command(const std::string& path) {
  std::istringstream in(path);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

UciEngine::UciEngine(EngineConfig cfg) : cfg_(std::move(cfg)), process_(split_command(cfg_.path)) {
  cfg_.validate();
  const auto handshake = std::chrono::milliseconds(cfg_.handshake_timeout_ms);
  process_.write_line("uci");
  const auto deadline = Clock::now() + handshake;
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    auto line = process_.read_line(std::max(left, std::chrono::milliseconds(0)));
    if (!line) throw EngineTimeout("UCI handshake timed out waiting for 'uciok'");
    if (*line == "uciok") break;
    std::istringstream in(*line);
    std::string tok;
    in >> tok;
    if (tok == "id") {
      std::string what;
      in >> what;
      if (what == "name") {
        std::getline(in >> std::ws, name_);
      }
    } else if (tok == "option") {
      std::string name_kw;
      in >> name_kw;
      std::string word;
      std::string option;
      while (in >> word && word != "type") option += (option.empty() ? "" : " ") + word;
      options_.insert(option);
    }
  }
  if (cfg_.elo && options_.count("UCI_Elo")) {
    if (options_.count("UCI_LimitStrength")) {
      process_.write_line("setoption name UCI_LimitStrength value true");
    }
    process_.write_line("setoption name UCI_Elo value " + std::to_string(*cfg_.elo));
  }
  process_.write_line("isready");
  expect("readyok", handshake);
}

UciEngine::~UciEngine() {
  try {
    process_.write_line("quit");
  } catch (...) {
  }
}

std::string UciEngine::expect(const std::string& token, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    auto line = process_.read_line(std::max(left, std::chrono::milliseconds(0)));
    if (!line) throw EngineTimeout("timed out waiting for '" + token + "'");
    if (line->rfind(token, 0) == 0) return *line;
  }
}

std::chrono::milliseconds UciEngine::analysis_timeout() const {
  const int base = cfg_.movetime_ms ? *cfg_.movetime_ms : 0;
  return std::chrono::milliseconds(base + cfg_.analysis_timeout_ms);
}

UciEngine::GoResult UciEngine::go(const Position& pos, const std::vector<Move>& searchmoves) {
  process_.write_line("position fen " + pos.fen());
  std::string cmd = "go";
  if (cfg_.depth) cmd += " depth " + std::to_string(*cfg_.depth);
  if (cfg_.movetime_ms) cmd += " movetime " + std::to_string(*cfg_.movetime_ms);
  if (!searchmoves.empty()) {
    cmd += " searchmoves";
    for (const Move& m : searchmoves) cmd += " " + m.uci();
  }
  process_.write_line(cmd);

  GoResult result;
  const auto deadline = Clock::now() + analysis_timeout();
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    auto line = process_.read_line(std::max(left, std::chrono::milliseconds(0)));
    if (!line) {
      process_.write_line("stop");
      throw EngineTimeout("analysis timed out after " + std::to_string(analysis_timeout().count()) + " ms");
    }
    if (auto info = parse_info_line(*line)) {
      if (info->score_cp || info->score_mate) result.last_info = *info;
      continue;
    }
    if (line->rfind("bestmove", 0) == 0) {
      std::istringstream in(*line);
      std::string kw;
      in >> kw >> result.bestmove;
      return result;
    }
  }
}

Evaluation UciEngine::evaluate(const Position& pos) {
  std::lock_guard lock(mutex_);
  const GoResult r = go(pos, {});
  const int sign = pos.side_to_move() == chess::Color::kWhite ? 1 : -1;
  const int depth = r.last_info.depth.value_or(0);
  if (r.last_info.score_mate) {
    const int moves = *r.last_info.score_mate;
    const int plies = moves > 0 ? 2 * moves - 1 : -2 * moves;
    const bool mover_mates = moves > 0;
    return Evaluation::mate((mover_mates ? 1 : -1) * sign * plies, depth);
  }
  if (!r.last_info.score_cp) throw EngineError("engine returned no score");
  return Evaluation::centipawns(sign * *r.last_info.score_cp, depth);
}

Move UciEngine::best_move(const Position& pos, std::optional<PieceType> constraint) {
  std::lock_guard lock(mutex_);
  std::vector<Move> allowed;
  if (constraint) {
    allowed = chess::legal_moves_of_type(pos, constraint);
    if (allowed.empty()) throw NoMoveOfTypeError(*constraint);
  }
  const GoResult r = go(pos, allowed);
  auto parsed = Move::parse_uci(r.bestmove);
  if (!parsed) throw EngineError("engine returned unusable bestmove '" + r.bestmove + "'");
  auto legal = chess::find_legal_move(pos, *parsed);
  if (!legal) throw EngineError("engine returned illegal bestmove '" + r.bestmove + "'");
  if (constraint && legal->piece != *constraint) {
    throw EngineError("engine ignored searchmoves restriction: " + r.bestmove);
  }
  return *legal;
}

}  // namespace handbrain::engine

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

// Minimal UCI engine backed by the builtin search. Used by the engine tests.
//
//   mock_uci_engine [--hang-handshake | --hang-go | --mate-score]
//
// Every received command is echoed to stderr prefixed with "<< " so tests can
// inspect traffic when they fail.

#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "handbrain/engine/builtin.hpp"

using namespace handbrain;

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "";
  chess::Position pos = chess::Position::start();
  int elo = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    std::cerr << "<< " << line << "\n";
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    if (cmd == "uci") {
      if (mode == "--hang-handshake") continue;
      std::cout << "id name MockEngine\n"
                << "id author test\n"
                << "option name UCI_LimitStrength type check default false\n"
                << "option name UCI_Elo type spin default 1500 min 800 max 2800\n"
                << "option name Hash type spin default 16 min 1 max 1024\n"
                << "uciok" << std::endl;
    } else if (cmd == "setoption") {
      std::string kw, name, value_kw;
      int value = 0;
      in >> kw >> name >> value_kw;
      if (name == "UCI_Elo" && in >> value) elo = value;
    } else if (cmd == "isready") {
      std::cout << "readyok" << std::endl;
    } else if (cmd == "position") {
      std::string kind;
      in >> kind;
      if (kind == "startpos") {
        pos = chess::Position::start();
      } else {
        std::string fen, part;
        for (int i = 0; i < 6 && in >> part; ++i) fen += (i ? " " : "") + part;
        pos = chess::Position::from_fen(fen);
      }
    } else if (cmd == "go") {
      if (mode == "--hang-go") continue;
      int depth = 1;
      std::optional<chess::PieceType> constraint;
      std::string tok;
      while (in >> tok) {
        if (tok == "depth") in >> depth;
        if (tok == "movetime") {
          int ms;
          in >> ms;
          depth = 2;
        }
        if (tok == "searchmoves") {
          std::string mv;
          in >> mv;
          auto legal = chess::find_legal_move(pos, *chess::Move::parse_uci(mv));
          constraint = legal->piece;
          break;
        }
      }
      const auto r = engine::search(pos, constraint, depth);
      if (mode == "--mate-score") {
        std::cout << "info depth " << depth << " score mate -2 pv " << r.best->uci() << "\n";
      } else {
        std::cout << "info depth " << depth << " score cp " << r.score << " nodes " << r.nodes
                  << " pv " << r.best->uci() << "\n";
      }
      std::cout << "info string elo " << elo << "\n";
      std::cout << "bestmove " << r.best->uci() << std::endl;
    } else if (cmd == "quit") {
      return 0;
    }
  }
  return 0;
}

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

#ifndef HANDBRAIN_CHESS_FAMILIARIZATION_HPP_
#define HANDBRAIN_CHESS_FAMILIARIZATION_HPP_

#include <string_view>
#include <vector>

namespace handbrain::chess {

struct NamedPosition {
  std::string_view name;
  std::string_view fen;
};

// Warm-up positions for a participant's first turns with the teammate. These
// are substitutes: well-known balanced opening positions with White to move
// and a near-zero engine evaluation, not the positions of any published study.
inline std::vector<NamedPosition> familiarization_positions() {
  return {
      {"italian-game (substitute)",
       "r1bqk1nr/pppp1ppp/2n5/2b1p3/2B1P3/5N2/PPPP1PPP/RNBQK2R w KQkq - 4 4"},
      {"queens-gambit-declined (substitute)",
       "rnbqkb1r/ppp2ppp/4pn2/3p4/2PP4/2N5/PP2PPPP/R1BQKBNR w KQkq - 2 4"},
      {"ruy-lopez-berlin (substitute)",
       "r1bqkb1r/pppp1ppp/2n2n2/1B2p3/4P3/5N2/PPPP1PPP/RNBQK2R w KQkq - 4 4"},
      {"english-four-knights (substitute)",
       "r1bqkb1r/pppp1ppp/2n2n2/4p3/2P5/2N2N2/PP1PPPPP/R1BQKB1R w KQkq - 4 4"},
  };
}

}  // namespace handbrain::chess

#endif  // HANDBRAIN_CHESS_FAMILIARIZATION_HPP_

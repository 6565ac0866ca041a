// Copyright 2026 The drmg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON documents for games, policies and run records, and the CSV tables
// written by the CLI. Doubles are printed in shortest round-trip form, so
// every value reads back bit for bit.

#ifndef DRMG_IO_H_
#define DRMG_IO_H_

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "drmg/experiment.h"
#include "drmg/game.h"

namespace drmg {

using Json = nlohmann::json;

inline constexpr const char* kGameFormat = "drmg-game/1";
inline constexpr const char* kRunFormat = "drmg-run/1";
inline constexpr const char* kRegretCsvHeader = "# drmg-regret-csv v1";
inline constexpr const char* kSweepCsvHeader = "# drmg-sweep-csv v1";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json game_to_json(const LinearMarkovGame& game);
// Shape errors surface as ValidationError from the game constructor; value
// problems (negative mass and so on) are left for validate().
LinearMarkovGame game_from_json(const Json& doc);

Json policy_to_json(const JointPolicy& policy);
JointPolicy policy_from_json(const Json& doc);

Json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const Json& doc);

Json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const Json& doc);

// Two-space indented document with a trailing newline.
std::string dump_document(const Json& doc);
Json read_document(const std::string& path);
void write_text(const std::string& path, const std::string& text);

std::string format_double(double x);

// Columns k (1-based episode count), gap_player_<i>, cumulative, where
// cumulative is the max over players of the per-player running sums.
std::string regret_csv(const RegretCurve& curve);
// Columns rho, algo, player, value, average.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace drmg

#endif  // DRMG_IO_H_

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

#include "drmg/io.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace drmg {
namespace {

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Vector json_vector(const Json& doc) {
  if (!doc.is_array()) throw FormatError("expected an array of numbers");
  Vector v(static_cast<int>(doc.size()));
  for (std::size_t k = 0; k < doc.size(); ++k) v(static_cast<int>(k)) = doc[k].get<double>();
  return v;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

Matrix json_matrix(const Json& doc, int cols_if_empty) {
  if (!doc.is_array()) throw FormatError("expected an array of rows");
  const int rows = static_cast<int>(doc.size());
  const int cols = rows == 0 ? cols_if_empty : static_cast<int>(doc[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Vector row = json_vector(doc[r]);
    if (row.size() != cols) throw FormatError("ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

void expect_format(const Json& doc, const char* format) {
  if (!doc.is_object() || !doc.contains("format") || doc["format"] != format) {
    throw FormatError(std::string("document is not in format ") + format);
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
}

}  // namespace

Json game_to_json(const LinearMarkovGame& game) {
  const GameDefinition& def = game.definition();
  Json doc;
  doc["format"] = kGameFormat;
  doc["action_counts"] = def.action_counts;
  doc["num_states"] = def.num_states;
  doc["horizon"] = def.horizon;
  doc["initial_state"] = def.initial_state;
  doc["fail_state"] = def.fail_state ? Json(*def.fail_state) : Json(nullptr);
  doc["state_names"] = def.state_names;
  doc["features"] = matrix_json(def.features);
  doc["factors"] = Json::array();
  for (const Matrix& f : def.factors) doc["factors"].push_back(matrix_json(f));
  doc["rewards"] = Json::array();
  for (const auto& per_step : def.rewards) {
    Json player = Json::array();
    for (const Vector& r : per_step) player.push_back(vector_json(r));
    doc["rewards"].push_back(player);
  }
  return doc;
}

LinearMarkovGame game_from_json(const Json& doc) {
  expect_format(doc, kGameFormat);
  GameDefinition def = guarded([&] {
    GameDefinition d;
    d.action_counts = doc.at("action_counts").get<std::vector<int>>();
    d.num_states = doc.at("num_states").get<int>();
    d.horizon = doc.at("horizon").get<int>();
    d.initial_state = doc.at("initial_state").get<int>();
    if (doc.contains("fail_state") && !doc["fail_state"].is_null()) {
      d.fail_state = doc["fail_state"].get<int>();
    }
    if (doc.contains("state_names")) {
      d.state_names = doc["state_names"].get<std::vector<std::string>>();
    }
    d.features = json_matrix(doc.at("features"), 0);
    for (const Json& f : doc.at("factors")) d.factors.push_back(json_matrix(f, d.num_states));
    for (const Json& player : doc.at("rewards")) {
      std::vector<Vector> per_step;
      for (const Json& r : player) per_step.push_back(json_vector(r));
      d.rewards.push_back(std::move(per_step));
    }
    return d;
  });
  return LinearMarkovGame(std::move(def));
}

Json policy_to_json(const JointPolicy& policy) {
  Json probs = Json::array();
  for (int h = 0; h < policy.horizon(); ++h) {
    Json step = Json::array();
    for (int s = 0; s < policy.num_states(); ++s) step.push_back(vector_json(policy.at(h, s)));
    probs.push_back(step);
  }
  return Json{{"horizon", policy.horizon()},
              {"num_states", policy.num_states()},
              {"num_joint_actions", policy.num_joint_actions()},
              {"probs", probs}};
}

JointPolicy policy_from_json(const Json& doc) {
  return guarded([&] {
    JointPolicy policy(doc.at("horizon").get<int>(), doc.at("num_states").get<int>(),
                       doc.at("num_joint_actions").get<int>());
    const Json& probs = doc.at("probs");
    if (static_cast<int>(probs.size()) != policy.horizon()) throw FormatError("policy shape");
    for (int h = 0; h < policy.horizon(); ++h) {
      if (static_cast<int>(probs[h].size()) != policy.num_states()) {
        throw FormatError("policy shape");
      }
      for (int s = 0; s < policy.num_states(); ++s) {
        policy.at(h, s) = json_vector(probs[h][s]);
        if (policy.at(h, s).size() != policy.num_joint_actions()) {
          throw FormatError("policy shape");
        }
      }
    }
    return policy;
  });
}

Json run_config_to_json(const RunConfig& cfg) {
  Json doc;
  doc["env"] = cfg.env;
  doc["params"] = cfg.params;
  doc["algo"] = cfg.algo;
  doc["episodes"] = cfg.episodes;
  doc["sigma"] = cfg.sigma;
  doc["seed"] = cfg.seed;
  doc["lambda"] = cfg.lambda;
  doc["c_beta"] = cfg.c_beta;
  doc["delta"] = cfg.delta;
  doc["epsilon"] = cfg.epsilon ? Json(*cfg.epsilon) : Json(nullptr);
  doc["beta"] = cfg.beta ? Json(*cfg.beta) : Json(nullptr);
  doc["rho_grid"] = cfg.rho_grid;
  doc["snapshot_stride"] = cfg.snapshot_stride;
  return doc;
}

RunConfig run_config_from_json(const Json& doc) {
  return guarded([&] {
    RunConfig cfg;
    cfg.env = doc.at("env").get<std::string>();
    cfg.params = doc.at("params").get<EnvParams>();
    cfg.algo = doc.at("algo").get<std::string>();
    cfg.episodes = doc.at("episodes").get<int>();
    cfg.sigma = doc.at("sigma").get<std::vector<double>>();
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.lambda = doc.at("lambda").get<double>();
    cfg.c_beta = doc.at("c_beta").get<double>();
    cfg.delta = doc.at("delta").get<double>();
    if (!doc.at("epsilon").is_null()) cfg.epsilon = doc["epsilon"].get<double>();
    if (!doc.at("beta").is_null()) cfg.beta = doc["beta"].get<std::vector<double>>();
    cfg.rho_grid = doc.at("rho_grid").get<std::vector<double>>();
    cfg.snapshot_stride = doc.at("snapshot_stride").get<int>();
    return cfg;
  });
}

Json run_record_to_json(const RunRecord& record) {
  Json doc;
  doc["format"] = kRunFormat;
  doc["config"] = run_config_to_json(record.config);
  doc["beta"] = record.beta;
  doc["caps"] = record.caps;
  doc["epsilon"] = record.epsilon;
  doc["policy_episodes"] = record.policy_episodes;
  doc["policies"] = Json::array();
  for (const JointPolicy& p : record.policies) doc["policies"].push_back(policy_to_json(p));
  doc["trajectories"] = Json::array();
  for (const EpisodeRecord& ep : record.trajectories) {
    doc["trajectories"].push_back(Json{{"states", ep.states},
                                       {"actions", ep.actions},
                                       {"rewards", ep.rewards},
                                       {"final_state", ep.final_state}});
  }
  doc["regret"] = Json{{"gaps", record.regret.gaps},
                       {"cumulative", record.regret.cumulative},
                       {"regret", record.regret.regret}};
  doc["evaluation"] = Json::array();
  for (const PerturbationRow& row : record.evaluation) {
    doc["evaluation"].push_back(
        Json{{"rho", row.rho}, {"values", row.values}, {"average", row.average}});
  }
  if (record.wall_clock_seconds) doc["wall_clock_seconds"] = *record.wall_clock_seconds;
  return doc;
}

RunRecord run_record_from_json(const Json& doc) {
  expect_format(doc, kRunFormat);
  return guarded([&] {
    RunRecord record;
    record.config = run_config_from_json(doc.at("config"));
    record.beta = doc.at("beta").get<std::vector<double>>();
    record.caps = doc.at("caps").get<std::vector<double>>();
    record.epsilon = doc.at("epsilon").get<double>();
    record.policy_episodes = doc.at("policy_episodes").get<std::vector<int>>();
    for (const Json& p : doc.at("policies")) record.policies.push_back(policy_from_json(p));
    for (const Json& t : doc.at("trajectories")) {
      EpisodeRecord ep;
      ep.states = t.at("states").get<std::vector<int>>();
      ep.actions = t.at("actions").get<std::vector<int>>();
      ep.rewards = t.at("rewards").get<std::vector<std::vector<double>>>();
      ep.final_state = t.at("final_state").get<int>();
      record.trajectories.push_back(std::move(ep));
    }
    const Json& regret = doc.at("regret");
    record.regret.gaps = regret.at("gaps").get<std::vector<std::vector<double>>>();
    record.regret.cumulative = regret.at("cumulative").get<std::vector<std::vector<double>>>();
    record.regret.regret = regret.at("regret").get<std::vector<double>>();
    for (const Json& row : doc.at("evaluation")) {
      record.evaluation.push_back(PerturbationRow{row.at("rho").get<double>(),
                                                  row.at("values").get<std::vector<double>>(),
                                                  row.at("average").get<double>()});
    }
    if (doc.contains("wall_clock_seconds")) {
      record.wall_clock_seconds = doc["wall_clock_seconds"].get<double>();
    }
    return record;
  });
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

Json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed for " + path);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string regret_csv(const RegretCurve& curve) {
  std::ostringstream out;
  out << kRegretCsvHeader << "\n" << "k";
  for (int i = 0; i < curve.num_players(); ++i) out << ",gap_player_" << i;
  out << ",cumulative\n";
  for (int k = 0; k < curve.episodes(); ++k) {
    out << k + 1;
    for (double g : curve.gaps[k]) out << "," << format_double(g);
    out << "," << format_double(curve.regret[k]) << "\n";
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepCsvHeader << "\n" << "rho,algo,player,value,average\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.rho) << "," << r.algo << "," << r.player << ","
        << format_double(r.value) << "," << format_double(r.average) << "\n";
  }
  return out.str();
}

}  // namespace drmg

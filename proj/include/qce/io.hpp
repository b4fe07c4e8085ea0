#pragma once

#include <string>

#include <json.hpp>

#include "qce/channel_games.hpp"
#include "qce/classical.hpp"
#include "qce/cusc.hpp"
#include "qce/mc_sim.hpp"
#include "qce/state_games.hpp"

namespace qce {

using json = nlohmann::ordered_json;

// Rounds to 12 significant digits; non-finite values become null in JSON.
double round12(double v);
json number(double v);

json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json real_matrix_to_json(const RealMatrix& m);  // nested rows
RealMatrix real_matrix_from_json(const json& j);

json density_to_json(const DensityOperator& rho);
DensityOperator density_from_json(const json& j);

json channel_to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const json& j);

json state_game_to_json(const StateGameSpec& g);
StateGameSpec state_game_from_json(const json& j);

json channel_game_to_json(const ChannelGameSpec& g);
ChannelGameSpec channel_game_from_json(const json& j);

// One row per Alice symbol, comma separated; '#' starts a comment line.
ClassicalJoint joint_from_csv(const std::string& text);
std::string joint_to_csv(const ClassicalJoint& p);

json verdict_to_json(const CuscVerdict& v);
json report_to_json(const RewardReport& r);
json sim_to_json(const SimResult& s);
SimResult sim_from_json(const json& j);
json classical_verdict_to_json(const ClassicalVerdict& v);

}  // namespace qce

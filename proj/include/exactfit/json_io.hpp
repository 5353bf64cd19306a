#pragma once

#include "exactfit/convexfit.hpp"
#include "exactfit/nets.hpp"
#include "exactfit/rational.hpp"
#include "exactfit/reductions.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace exactfit::io {

using AnyNetwork = std::variant<nets::ReluNetwork, nets::LTNetwork>;

/// Rationals travel as decimal-free strings "p/q" or "p"; integer JSON
/// numbers are accepted on input, floating-point numbers never are.
nlohmann::json rat_to_json(const Rat& r);
Rat rat_from_json(const nlohmann::json& j);

std::string activation_name(nets::Activation a);
nets::Activation activation_from_name(const std::string& name);

nlohmann::json to_json(const nets::Instance& inst);
nets::Instance instance_from_json(const nlohmann::json& j);

nlohmann::json to_json(const nets::ReluNetwork& net);
nlohmann::json to_json(const nets::LTNetwork& net);
AnyNetwork network_from_json(const nlohmann::json& j);

nlohmann::json to_json(const reduce::PoitsFormula& formula);
reduce::PoitsFormula formula_from_json(const nlohmann::json& j);

nlohmann::json to_json(const reduce::TruthAssignment& assignment);
reduce::TruthAssignment assignment_from_json(const nlohmann::json& j);

nlohmann::json to_json(const reduce::HsepInput& input);
reduce::HsepInput hsep_from_json(const nlohmann::json& j);

nlohmann::json to_json(const convex::SearchLog& log);
convex::SearchLog search_log_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace exactfit::io

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "inp2cpa/attack_studio.hpp"
#include "inp2cpa/cyber_topology.hpp"
#include "inp2cpa/inp_model.hpp"
#include "inp2cpa/resilience.hpp"

namespace inp2cpa {

// Topology snapshot: {"provenance", "nodes": [{id, sensors, actuators,
// controls}], "links": [{source, destination, sensors}]}. Sensors are
// "ELEMENT:QUANTITY" strings, controls are canonical control statements.
nlohmann::json topology_to_json(const CyberTopology& topology);
CyberTopology topology_from_json(const nlohmann::json& doc);

nlohmann::json model_to_json(const InpModel& model);
nlohmann::json attack_to_json(const AttackSpec& attack);
nlohmann::json params_to_json(const resilience::DiversityParams& params);

// Applies the keys present in `doc` on top of `base`.
resilience::DiversityParams params_from_json(const nlohmann::json& doc, resilience::DiversityParams base);

nlohmann::json report_to_json(const resilience::ResilienceReport& report);

// Rows = graphs, columns = lambda values, six decimals.
struct TableRow {
    std::string label;
    std::vector<double> values;
};
std::string tgd_table(const std::vector<double>& lambdas, const std::vector<TableRow>& rows);

// Per-pair k_sd / EPD listing.
std::string pair_table(const resilience::ResilienceReport& report);

// Lambda list such as "0.2,1,5".
std::vector<double> parse_lambda_list(const std::string& text);

}  // namespace inp2cpa

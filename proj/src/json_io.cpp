#include "inp2cpa/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "inp2cpa/error.hpp"
#include "inp2cpa/text.hpp"

namespace inp2cpa {

using nlohmann::json;

namespace {

json sensor_array(const std::set<SensorRef>& sensors) {
    json arr = json::array();
    for (const auto& s : sensors) arr.push_back(format_sensor(s));
    return arr;
}

[[noreturn]] void bad_snapshot(const std::string& why) {
    throw Error(ErrorCode::MalformedRow, "topology snapshot: " + why);
}

std::set<SensorRef> sensors_from(const json& node) {
    std::set<SensorRef> out;
    if (!node.contains("sensors")) return out;
    for (const auto& item : node.at("sensors")) {
        if (!item.is_string()) bad_snapshot("sensors must be strings like \"T1:LEVEL\"");
        auto s = parse_sensor(item.get<std::string>());
        if (!s) bad_snapshot("bad sensor '" + item.get<std::string>() + "'");
        out.insert(*s);
    }
    return out;
}

std::string string_field(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_string()) bad_snapshot(std::string("missing string field '") + key + "'");
    return obj.at(key).get<std::string>();
}

json trigger_to_json(const Trigger& trigger) {
    if (const auto* lvl = std::get_if<NodeLevel>(&trigger)) {
        return {{"type", "node"}, {"node", lvl->node}, {"relation", to_string(lvl->relation)},
                {"threshold", lvl->threshold}};
    }
    if (const auto* t = std::get_if<AtTime>(&trigger)) return {{"type", "time"}, {"hours", t->hours}};
    return {{"type", "clocktime"}, {"hour_of_day", std::get<AtClockTime>(trigger).hour_of_day}};
}

json action_to_json(const ControlAction& action) {
    switch (action.type) {
    case ControlAction::Type::open: return "OPEN";
    case ControlAction::Type::closed: return "CLOSED";
    case ControlAction::Type::setting: return json{{"setting", action.setting}};
    }
    return nullptr;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

json topology_to_json(const CyberTopology& topology) {
    json nodes = json::array();
    for (const auto& n : topology.nodes) {
        json controls = json::array();
        for (const auto& c : n.controls) controls.push_back(format_control(c));
        nodes.push_back({{"id", n.id},
                         {"sensors", sensor_array(n.sensors)},
                         {"actuators", json(std::vector<std::string>(n.actuators.begin(), n.actuators.end()))},
                         {"controls", controls}});
    }
    json links = json::array();
    for (const auto& l : topology.links) {
        links.push_back({{"source", l.source}, {"destination", l.destination}, {"sensors", sensor_array(l.sensors)}});
    }
    return {{"provenance", topology.provenance}, {"nodes", nodes}, {"links", links}};
}

CyberTopology topology_from_json(const json& doc) {
    if (!doc.is_object()) bad_snapshot("expected an object");
    CyberTopology topo;
    if (doc.contains("provenance") && doc.at("provenance").is_string()) {
        topo.provenance = doc.at("provenance").get<std::string>();
    }
    for (const auto& n : doc.value("nodes", json::array())) {
        CyberNode node;
        node.id = normalize_id(string_field(n, "id"));
        node.sensors = sensors_from(n);
        for (const auto& a : n.value("actuators", json::array())) {
            if (!a.is_string()) bad_snapshot("actuators must be strings");
            node.actuators.insert(text::to_upper(a.get<std::string>()));
        }
        for (const auto& c : n.value("controls", json::array())) {
            if (!c.is_string()) bad_snapshot("controls must be control statements");
            node.controls.push_back(parse_control(c.get<std::string>()));
        }
        if (topo.find_node(node.id)) bad_snapshot("duplicate node '" + node.id + "'");
        topo.nodes.push_back(std::move(node));
    }
    for (const auto& l : doc.value("links", json::array())) {
        CyberLink link{normalize_id(string_field(l, "source")), normalize_id(string_field(l, "destination")),
                       sensors_from(l)};
        if (topo.find_link(link.source, link.destination)) {
            bad_snapshot("duplicate link " + link.source + "->" + link.destination);
        }
        topo.links.push_back(std::move(link));
    }
    return topo;
}

json model_to_json(const InpModel& model) {
    json elements = json::object();
    for (auto kind : kAllElementKinds) elements[std::string(to_string(kind))] = inventory(model, kind);
    json controls = json::array();
    for (const auto& c : model.controls) {
        controls.push_back({{"statement", format_control(c)},
                            {"target", c.target_link},
                            {"action", action_to_json(c.action)},
                            {"trigger", trigger_to_json(c.trigger)}});
    }
    return {{"title", model.title}, {"source", model.source_name}, {"elements", elements}, {"controls", controls}};
}

json attack_to_json(const AttackSpec& a) {
    return {{"id", a.id},
            {"kind", to_string(a.kind)},
            {"target", format_target(a.target)},
            {"start", format_condition(a.window.start)},
            {"end", format_condition(a.window.end)},
            {"payload", format_payload(a.payload)}};
}

json params_to_json(const resilience::DiversityParams& p) {
    json out = {{"lambda", p.lambda},
                {"t_ksd", p.t_ksd},
                {"mode", resilience::to_string(p.mode)},
                {"k_paths", p.k_paths},
                {"max_paths", p.bounds.max_paths}};
    out["max_hops"] = p.bounds.max_hops ? json(*p.bounds.max_hops) : json(nullptr);
    return out;
}

resilience::DiversityParams params_from_json(const json& doc, resilience::DiversityParams p) {
    auto number = [&](const char* key) {
        const auto& v = doc.at(key);
        if (!v.is_number()) throw Error(ErrorCode::BadCommand, std::string(key) + " must be a number");
        return v.get<double>();
    };
    auto count = [&](const char* key) {
        const auto& v = doc.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw Error(ErrorCode::BadCommand, std::string(key) + " must be a non-negative integer");
        }
        return v.get<std::size_t>();
    };
    if (doc.contains("lambda")) p.lambda = number("lambda");
    if (doc.contains("t_ksd")) p.t_ksd = number("t_ksd");
    if (doc.contains("mode")) {
        const auto& v = doc.at("mode");
        auto m = v.is_string() ? resilience::mode_from_string(v.get<std::string>()) : std::nullopt;
        if (!m) throw Error(ErrorCode::BadCommand, "mode must be alg2_max or eq3_cumulative");
        p.mode = *m;
    }
    if (doc.contains("k_paths")) p.k_paths = count("k_paths");
    if (doc.contains("max_paths")) p.bounds.max_paths = count("max_paths");
    if (doc.contains("max_hops")) {
        if (doc.at("max_hops").is_null()) {
            p.bounds.max_hops.reset();
        } else {
            p.bounds.max_hops = count("max_hops");
        }
    }
    resilience::check(p);
    return p;
}

json report_to_json(const resilience::ResilienceReport& r) {
    json pairs = json::array();
    for (const auto& rec : r.pairs) {
        pairs.push_back({{"source", rec.source}, {"destination", rec.destination}, {"k_sd", rec.k_sd}, {"epd", rec.epd}});
    }
    return {{"lambdas", r.lambdas}, {"tgd", r.tgd}, {"params", params_to_json(r.params)}, {"pairs", pairs}};
}

std::string tgd_table(const std::vector<double>& lambdas, const std::vector<TableRow>& rows) {
    std::vector<std::vector<std::string>> grid;
    grid.push_back({"lambda"});
    for (double l : lambdas) grid.back().push_back(text::format_number(l));
    for (const auto& r : rows) {
        grid.push_back({r.label});
        for (double v : r.values) grid.back().push_back(fixed6(v));
    }
    std::vector<std::size_t> width;
    for (const auto& row : grid) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (const auto& row : grid) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += "  ";
            line += row[i] + std::string(width[i] - row[i].size(), ' ');
        }
        line.erase(line.find_last_not_of(' ') + 1);
        out += line + '\n';
    }
    return out;
}

std::string pair_table(const resilience::ResilienceReport& r) {
    std::ostringstream out;
    out << "source destination k_sd";
    for (double l : r.lambdas) out << " epd@" << text::format_number(l);
    out << '\n';
    for (const auto& rec : r.pairs) {
        out << rec.source << ' ' << rec.destination << ' ' << fixed6(rec.k_sd);
        for (double e : rec.epd) out << ' ' << fixed6(e);
        out << '\n';
    }
    return out.str();
}

std::vector<double> parse_lambda_list(const std::string& list) {
    std::vector<double> out;
    for (const auto& item : text::split(list, ',')) {
        auto v = text::parse_number(text::trim(item));
        if (!v || !(*v > 0.0)) throw Error(ErrorCode::InvalidParams, "lambda '" + item + "' is not a positive number");
        out.push_back(*v);
    }
    return out;
}

}  // namespace inp2cpa

#include "inp2cpa/cyber_topology.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "inp2cpa/error.hpp"
#include "inp2cpa/text.hpp"

namespace inp2cpa {

std::string_view to_string(Quantity q) {
    switch (q) {
    case Quantity::pressure: return "PRESSURE";
    case Quantity::level: return "LEVEL";
    case Quantity::flow: return "FLOW";
    case Quantity::status: return "STATUS";
    }
    return "?";
}

std::optional<Quantity> quantity_from_string(std::string_view name) {
    for (auto q : {Quantity::pressure, Quantity::level, Quantity::flow, Quantity::status}) {
        if (text::iequals(name, to_string(q))) return q;
    }
    return std::nullopt;
}

bool supports(ElementKind kind, Quantity q) {
    switch (q) {
    case Quantity::level: return kind == ElementKind::tank || kind == ElementKind::reservoir;
    case Quantity::pressure: return is_node_kind(kind);
    case Quantity::flow:
    case Quantity::status: return is_link_kind(kind);
    }
    return false;
}

std::string format_sensor(const SensorRef& s) { return s.element + ":" + std::string(to_string(s.quantity)); }

std::optional<SensorRef> parse_sensor(std::string_view token) {
    const auto colon = token.rfind(':');
    if (colon == std::string_view::npos || colon == 0) return std::nullopt;
    auto q = quantity_from_string(token.substr(colon + 1));
    if (!q) return std::nullopt;
    return SensorRef{text::to_upper(token.substr(0, colon)), *q};
}

std::string_view to_string(Diagnostic::Severity s) { return s == Diagnostic::Severity::error ? "error" : "warning"; }

bool is_valid_node_id(std::string_view id) {
    if (id.empty() || id == "-" || id.find("->") != std::string_view::npos) return false;
    return std::none_of(id.begin(), id.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == ';' || c == ',' || c == ':' || c == '[';
    });
}

std::string normalize_id(std::string_view id) { return text::to_upper(text::trim(id)); }

const CyberNode* CyberTopology::find_node(std::string_view id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const CyberNode& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

const CyberLink* CyberTopology::find_link(std::string_view source, std::string_view destination) const {
    auto it = std::find_if(links.begin(), links.end(), [&](const CyberLink& l) {
        return l.source == source && l.destination == destination;
    });
    return it == links.end() ? nullptr : &*it;
}

namespace {

// Reason the sensor does not resolve, or empty.
std::string sensor_problem(const SensorRef& s, const InpModel& model) {
    const NetworkElement* e = nullptr;
    for (const auto& el : model.elements) {
        if (el.id == s.element && supports(el.kind, s.quantity)) return {};
        if (el.id == s.element) e = &el;
    }
    if (!e) return "sensor element '" + s.element + "' is not in the model";
    return std::string(to_string(e->kind)) + " '" + s.element + "' has no " + std::string(to_string(s.quantity));
}

std::string actuator_problem(const std::string& id, const InpModel& model) {
    if (model.find_link(id)) return {};
    return "actuator '" + id + "' is not a pipe, pump or valve in the model";
}

bool rule_in_model(const ControlRule& rule, const InpModel& model) {
    return std::find(model.controls.begin(), model.controls.end(), rule) != model.controls.end();
}

SensorRef trigger_sensor(const NodeLevel& cond, const InpModel& model) {
    const auto* node = model.find_node(cond.node);
    if (!node) throw Error(ErrorCode::DanglingReference, "control watches unknown node '" + cond.node + "'");
    const auto q = node->kind == ElementKind::junction ? Quantity::pressure : Quantity::level;
    return SensorRef{cond.node, q};
}

}  // namespace

CyberTopology derive_baseline_topology(const std::vector<ControlRule>& rules, const InpModel& model) {
    CyberTopology topo;
    topo.provenance = model.source_name;
    std::map<std::string, std::size_t> node_for_link;
    for (const auto& rule : rules) {
        if (!model.find_link(rule.target_link)) {
            throw Error(ErrorCode::DanglingReference, "control targets unknown link '" + rule.target_link + "'");
        }
        auto [it, inserted] = node_for_link.try_emplace(rule.target_link, topo.nodes.size());
        if (inserted) {
            CyberNode node;
            node.id = "PLC_" + rule.target_link;
            node.actuators.insert(rule.target_link);
            topo.nodes.push_back(std::move(node));
        }
        auto& node = topo.nodes[it->second];
        if (const auto* cond = std::get_if<NodeLevel>(&rule.trigger)) {
            node.sensors.insert(trigger_sensor(*cond, model));
        }
        node.controls.push_back(rule);
    }
    return topo;
}

CyberTopology add_cyber_node(const CyberTopology& topology, CyberNode node, const InpModel& model) {
    node.id = normalize_id(node.id);
    if (!is_valid_node_id(node.id)) {
        throw Error(ErrorCode::BadCommand, "'" + node.id + "' is not a usable node id");
    }
    if (topology.find_node(node.id)) {
        throw Error(ErrorCode::DuplicateId, "node '" + node.id + "' already exists");
    }
    for (const auto& s : node.sensors) {
        if (auto why = sensor_problem(s, model); !why.empty()) throw Error(ErrorCode::DanglingReference, why);
    }
    for (const auto& a : node.actuators) {
        if (auto why = actuator_problem(a, model); !why.empty()) throw Error(ErrorCode::DanglingReference, why);
    }
    for (const auto& rule : node.controls) {
        if (!rule_in_model(rule, model)) {
            throw Error(ErrorCode::DanglingReference, "control '" + format_control(rule) + "' is not in the model");
        }
    }
    CyberTopology out = topology;
    out.nodes.push_back(std::move(node));
    return out;
}

CyberTopology add_cyber_link(const CyberTopology& topology, CyberLink link) {
    link.source = normalize_id(link.source);
    link.destination = normalize_id(link.destination);
    if (link.source == link.destination) {
        throw Error(ErrorCode::UnknownEndpoint, "link from '" + link.source + "' to itself");
    }
    const auto* source = topology.find_node(link.source);
    for (const auto* id : {&link.source, &link.destination}) {
        if (!topology.find_node(*id)) throw Error(ErrorCode::UnknownEndpoint, "no node '" + *id + "'");
    }
    if (topology.find_link(link.source, link.destination)) {
        throw Error(ErrorCode::DuplicateLink, "link " + link.source + "->" + link.destination + " already exists");
    }
    for (const auto& s : link.sensors) {
        if (!source->sensors.count(s)) {
            throw Error(ErrorCode::SensorNotAtSource,
                        "'" + link.source + "' does not sense " + format_sensor(s));
        }
    }
    CyberTopology out = topology;
    out.links.push_back(std::move(link));
    return out;
}

CyberTopology remove_cyber_node(const CyberTopology& topology, std::string_view raw_id) {
    const auto id = normalize_id(raw_id);
    if (!topology.find_node(id)) throw Error(ErrorCode::NotFound, "no node '" + id + "'");
    for (const auto& l : topology.links) {
        if (l.source == id || l.destination == id) {
            throw Error(ErrorCode::InUse, "node '" + id + "' still has link " + l.source + "->" + l.destination);
        }
    }
    CyberTopology out = topology;
    std::erase_if(out.nodes, [&](const CyberNode& n) { return n.id == id; });
    return out;
}

CyberTopology remove_cyber_link(const CyberTopology& topology, std::string_view raw_source,
                                std::string_view raw_destination) {
    const auto source = normalize_id(raw_source);
    const auto destination = normalize_id(raw_destination);
    if (!topology.find_link(source, destination)) {
        throw Error(ErrorCode::NotFound, "no link " + source + "->" + destination);
    }
    CyberTopology out = topology;
    std::erase_if(out.links, [&](const CyberLink& l) { return l.source == source && l.destination == destination; });
    return out;
}

LogicalGraph to_logical_graph(const CyberTopology& topology) {
    LogicalGraph g;
    for (const auto& n : topology.nodes) g.vertices.push_back(n.id);
    std::sort(g.vertices.begin(), g.vertices.end());
    for (const auto& l : topology.links) g.directed_edges.emplace(l.source, l.destination);
    return g;
}

std::vector<Diagnostic> validate(const CyberTopology& topology, const InpModel& model) {
    using Sev = Diagnostic::Severity;
    std::vector<Diagnostic> out;
    std::map<std::string, int> seen_nodes;
    for (const auto& n : topology.nodes) {
        if (++seen_nodes[n.id] == 2) out.push_back({Sev::error, n.id, "duplicate node id"});
        if (!is_valid_node_id(n.id)) out.push_back({Sev::error, n.id, "node id is not a single token"});
        for (const auto& s : n.sensors) {
            if (auto why = sensor_problem(s, model); !why.empty()) out.push_back({Sev::error, n.id, why});
        }
        for (const auto& a : n.actuators) {
            if (auto why = actuator_problem(a, model); !why.empty()) out.push_back({Sev::error, n.id, why});
        }
        for (const auto& rule : n.controls) {
            if (!rule_in_model(rule, model)) {
                out.push_back({Sev::error, n.id, "control '" + format_control(rule) + "' is not in the model"});
            }
        }
    }

    std::set<std::pair<std::string, std::string>> seen_links;
    std::map<std::string, int> out_degree;
    for (const auto& l : topology.links) {
        const auto subject = l.source + "->" + l.destination;
        if (!seen_links.emplace(l.source, l.destination).second) {
            out.push_back({Sev::error, subject, "duplicate link"});
        }
        if (l.source == l.destination) out.push_back({Sev::error, subject, "self-loop"});
        const auto* src = topology.find_node(l.source);
        if (!src) out.push_back({Sev::error, subject, "unknown source node '" + l.source + "'"});
        if (!topology.find_node(l.destination)) {
            out.push_back({Sev::error, subject, "unknown destination node '" + l.destination + "'"});
        }
        for (const auto& s : l.sensors) {
            if (src && !src->sensors.count(s)) {
                out.push_back({Sev::error, subject, "carries " + format_sensor(s) + " not sensed at source"});
            }
        }
        ++out_degree[l.source];
    }

    for (const auto& n : topology.nodes) {
        if (!n.sensors.empty() && out_degree[n.id] == 0) {
            out.push_back({Sev::warning, n.id, "sensed data goes nowhere (no outgoing links)"});
        }
    }
    return out;
}

}  // namespace inp2cpa

#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "inp2cpa/inp_model.hpp"

namespace inp2cpa {

enum class Quantity { pressure, level, flow, status };

std::string_view to_string(Quantity q);
std::optional<Quantity> quantity_from_string(std::string_view name);

// Whether an element of `kind` can report `q`.
bool supports(ElementKind kind, Quantity q);

struct SensorRef {
    std::string element;
    Quantity quantity = Quantity::level;

    auto operator<=>(const SensorRef&) const = default;
    bool operator==(const SensorRef&) const = default;
};

// "T1:LEVEL"
std::string format_sensor(const SensorRef& s);
std::optional<SensorRef> parse_sensor(std::string_view token);

struct CyberNode {
    std::string id;
    std::set<SensorRef> sensors;
    std::set<std::string> actuators;
    std::vector<ControlRule> controls;

    bool operator==(const CyberNode&) const = default;
};

struct CyberLink {
    std::string source;
    std::string destination;
    std::set<SensorRef> sensors;

    bool operator==(const CyberLink&) const = default;
};

// Nodes and links kept in insertion order; that order is what gets rendered.
struct CyberTopology {
    std::vector<CyberNode> nodes;
    std::vector<CyberLink> links;
    std::string provenance;

    const CyberNode* find_node(std::string_view id) const;
    const CyberLink* find_link(std::string_view source, std::string_view destination) const;

    bool operator==(const CyberTopology&) const = default;
};

// The graph-theoretic projection: vertices sorted, edges as ordered pairs.
struct LogicalGraph {
    std::vector<std::string> vertices;
    std::set<std::pair<std::string, std::string>> directed_edges;

    bool operator==(const LogicalGraph&) const = default;
};

// One node named PLC_<link> per controlled link. Links are left empty:
// plant connectivity is user knowledge.
CyberTopology derive_baseline_topology(const std::vector<ControlRule>& rules, const InpModel& model);

CyberTopology add_cyber_node(const CyberTopology& topology, CyberNode node, const InpModel& model);
CyberTopology add_cyber_link(const CyberTopology& topology, CyberLink link);

// Removal refuses (InUse) while links still touch the node.
CyberTopology remove_cyber_node(const CyberTopology& topology, std::string_view id);
CyberTopology remove_cyber_link(const CyberTopology& topology, std::string_view source, std::string_view destination);

LogicalGraph to_logical_graph(const CyberTopology& topology);

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string subject;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

std::string_view to_string(Diagnostic::Severity s);

// Empty iff every invariant holds and every reference resolves against
// `model`. Nodes that sense something but send nothing get a warning.
std::vector<Diagnostic> validate(const CyberTopology& topology, const InpModel& model);

// Cyber node ids are upper-cased and must be usable as a single .cpa token.
bool is_valid_node_id(std::string_view id);
std::string normalize_id(std::string_view id);

}  // namespace inp2cpa

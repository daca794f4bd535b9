#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace inp2cpa {

enum class ElementKind { junction, reservoir, tank, pipe, pump, valve };

inline constexpr ElementKind kAllElementKinds[] = {
    ElementKind::junction, ElementKind::reservoir, ElementKind::tank,
    ElementKind::pipe,     ElementKind::pump,      ElementKind::valve,
};

std::string_view to_string(ElementKind kind);
std::optional<ElementKind> element_kind_from_string(std::string_view name);

constexpr bool is_node_kind(ElementKind k) {
    return k == ElementKind::junction || k == ElementKind::reservoir || k == ElementKind::tank;
}
constexpr bool is_link_kind(ElementKind k) { return !is_node_kind(k); }

// Pumps and valves are the actuators a PLC drives.
constexpr bool is_actuatable(ElementKind k) { return k == ElementKind::pump || k == ElementKind::valve; }

constexpr bool is_sensable(ElementKind k) {
    return k == ElementKind::junction || k == ElementKind::tank || k == ElementKind::pipe ||
           k == ElementKind::pump;
}

struct NetworkElement {
    std::string id;
    ElementKind kind{};
    // Remaining tokens of the source line, carried verbatim.
    std::vector<std::string> fields;

    bool operator==(const NetworkElement&) const = default;
};

struct ControlAction {
    enum class Type { open, closed, setting };
    Type type = Type::open;
    double setting = 0.0;  // only meaningful for Type::setting

    static ControlAction open() { return {Type::open, 0.0}; }
    static ControlAction closed() { return {Type::closed, 0.0}; }
    static ControlAction with_setting(double v) { return {Type::setting, v}; }

    bool operator==(const ControlAction&) const = default;
};

enum class Relation { above, below };

std::string_view to_string(Relation r);

struct NodeLevel {
    std::string node;
    Relation relation = Relation::below;
    double threshold = 0.0;  // model units, never converted

    bool operator==(const NodeLevel&) const = default;
};

struct AtTime {
    double hours = 0.0;  // since simulation start
    bool operator==(const AtTime&) const = default;
};

struct AtClockTime {
    double hour_of_day = 0.0;  // [0, 24)
    bool operator==(const AtClockTime&) const = default;
};

using Trigger = std::variant<NodeLevel, AtTime, AtClockTime>;

struct ControlRule {
    std::string target_link;
    ControlAction action;
    Trigger trigger;

    bool operator==(const ControlRule&) const = default;
};

// A section the reader does not interpret, kept line-for-line.
struct OpaqueSection {
    std::string name;
    std::vector<std::string> lines;

    bool operator==(const OpaqueSection&) const = default;
};

struct InpModel {
    std::string title;
    // Grouped by kind (kAllElementKinds order), source order within a kind.
    std::vector<NetworkElement> elements;
    std::vector<ControlRule> controls;
    std::vector<OpaqueSection> opaque_sections;
    std::string source_name;

    const NetworkElement* find_node(std::string_view id) const;
    const NetworkElement* find_link(std::string_view id) const;

    bool operator==(const InpModel&) const = default;
};

// Reads the sections this toolkit needs. Identifiers are upper-cased.
// Throws Error{MalformedSection | MalformedControl | DanglingReference | DuplicateId}.
InpModel parse_inp(std::string_view text, std::string source_name = {});

// Controls in source order.
const std::vector<ControlRule>& extract_control_rules(const InpModel& model);

// Sorted identifiers of every element of `kind`.
std::vector<std::string> inventory(const InpModel& model, ElementKind kind);

// Writes the recognized subset back out; parse_inp(serialize_inp(m)) == m
// up to source_name.
std::string serialize_inp(const InpModel& model);

// One control statement in canonical form, e.g. "LINK PU1 OPEN IF NODE T1 BELOW 4".
std::string format_control(const ControlRule& rule);

// Parses a single control statement (no reference resolution).
// `line` is attached to any error raised.
ControlRule parse_control(std::string_view statement, std::optional<int> line = std::nullopt);

// Hours from an EPANET time token: decimal hours or h:mm[:ss].
std::optional<double> parse_hours(std::string_view token);

}  // namespace inp2cpa

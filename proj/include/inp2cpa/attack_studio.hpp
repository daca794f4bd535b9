#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "inp2cpa/cyber_topology.hpp"
#include "inp2cpa/inp_model.hpp"

namespace inp2cpa {

enum class AttackKind { communication, control, sensor, actuator };

std::string_view to_string(AttackKind kind);  // upper-case .cpa token
std::optional<AttackKind> attack_kind_from_string(std::string_view name);

// Targets, one per attack kind.
struct LinkRef {
    std::string source;
    std::string destination;
    bool operator==(const LinkRef&) const = default;
};
struct ControlRef {
    std::size_t index = 0;  // 1-based position in the model's [CONTROLS]
    bool operator==(const ControlRef&) const = default;
};
struct ActuatorRef {
    std::string element;
    bool operator==(const ActuatorRef&) const = default;
};
using AttackTarget = std::variant<LinkRef, ControlRef, SensorRef, ActuatorRef>;

// hours == +inf is the open-ended END sentinel; only valid as a window end.
struct TimeCondition {
    double hours = 0.0;
    bool operator==(const TimeCondition&) const = default;
};
struct ValueCondition {
    SensorRef sensor;
    Relation relation = Relation::below;
    double threshold = 0.0;
    bool operator==(const ValueCondition&) const = default;
};
using Condition = std::variant<TimeCondition, ValueCondition>;

inline constexpr double kEndOfHorizon = std::numeric_limits<double>::infinity();

struct AttackWindow {
    Condition start;
    Condition end;
    bool operator==(const AttackWindow&) const = default;
};

// Value written over a sensor reading or a relayed message.
struct Injection {
    enum class Mode { constant, offset };
    Mode mode = Mode::constant;
    double value = 0.0;
    bool operator==(const Injection&) const = default;
};

// Injection for sensor/communication, ControlRule for control (the
// replacement logic), ControlAction for actuator (the forced state).
using AttackPayload = std::variant<Injection, ControlRule, ControlAction>;

struct AttackSpec {
    std::string id;
    AttackKind kind = AttackKind::sensor;
    AttackTarget target;
    AttackWindow window;
    AttackPayload payload;

    bool operator==(const AttackSpec&) const = default;
};

// Loosely-typed attack parameters, exactly as typed on the command line or
// sent by a client. Each field uses the .cpa token spelling:
//   target  "A->B" | "C3" | "T1:LEVEL" | "PU1"
//   start   "10" | "TIME 10" | "T1:LEVEL BELOW 3"     end additionally "END"
//   value   "4.5" | "CONSTANT 4.5" | "OFFSET -1" | "OPEN" | "SETTING 0.8" |
//           "LINK PU1 CLOSED IF NODE T1 ABOVE 5"
struct AttackParams {
    std::optional<std::string> target;
    std::optional<std::string> start;
    std::optional<std::string> end;
    std::optional<std::string> value;
    bool offset = false;  // treat a bare numeric value as an offset
};

// "ATK<n>" with n one past the largest numeric suffix already in use.
std::string next_attack_id(const std::vector<AttackSpec>& existing);

// Throws UnknownTarget, IncompleteParams or InvalidWindow.
AttackSpec build_attack(AttackKind kind, const AttackParams& params, const CyberTopology& topology,
                        const InpModel& model, const std::vector<AttackSpec>& existing = {});

// Problems with `spec` against the cyber layer, and against the model when
// one is supplied. Empty when the attack is valid.
std::vector<std::string> attack_problems(const AttackSpec& spec, const CyberTopology& topology,
                                         const InpModel* model = nullptr);

Condition parse_condition(std::string_view text);
std::string format_condition(const Condition& c);
std::string format_target(const AttackTarget& t);
std::string format_payload(const AttackPayload& p);

using CpaOptions = std::vector<std::pair<std::string, std::string>>;

struct CpaScenario {
    CyberTopology topology;  // skeleton: no controls, no provenance
    std::vector<AttackSpec> attacks;
    CpaOptions options;

    bool operator==(const CpaScenario&) const = default;
};

// Byte-stable .cpa text. Throws ValidationFailed listing every problem.
std::string render_cpa(const CyberTopology& topology, const std::vector<AttackSpec>& attacks,
                       const CpaOptions& options = {});

// Throws MalformedSection, MalformedRow or UnknownAttackKind with line numbers.
CpaScenario parse_cpa(std::string_view text);

// What survives a render/parse round trip.
CyberTopology skeleton(const CyberTopology& topology);

}  // namespace inp2cpa

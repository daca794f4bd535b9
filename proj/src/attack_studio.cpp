#include "inp2cpa/attack_studio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "inp2cpa/error.hpp"
#include "inp2cpa/text.hpp"

namespace inp2cpa {

std::string_view to_string(AttackKind kind) {
    switch (kind) {
    case AttackKind::communication: return "COMMUNICATION";
    case AttackKind::control: return "CONTROL";
    case AttackKind::sensor: return "SENSOR";
    case AttackKind::actuator: return "ACTUATOR";
    }
    return "?";
}

std::optional<AttackKind> attack_kind_from_string(std::string_view name) {
    for (auto k : {AttackKind::communication, AttackKind::control, AttackKind::sensor, AttackKind::actuator}) {
        if (text::iequals(name, to_string(k))) return k;
    }
    return std::nullopt;
}

namespace {

constexpr std::string_view kNodesHeader = "[CYBERNODES]";
constexpr std::string_view kLinksHeader = "[CYBERLINKS]";
constexpr std::string_view kAttacksHeader = "[CYBERATTACKS]";
constexpr std::string_view kOptionsHeader = "[CYBEROPTIONS]";

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

std::string sensor_list(const std::set<SensorRef>& sensors) {
    if (sensors.empty()) return "-";
    std::vector<std::string> items;
    for (const auto& s : sensors) items.push_back(format_sensor(s));
    return join(items, ",");
}

std::string id_list(const std::set<std::string>& ids) {
    if (ids.empty()) return "-";
    return join({ids.begin(), ids.end()}, ",");
}

bool is_end(const Condition& c) {
    const auto* t = std::get_if<TimeCondition>(&c);
    return t && std::isinf(t->hours);
}

std::optional<double> number_or_time(std::string_view token) { return parse_hours(token); }

[[noreturn]] void incomplete(const std::string& what) { throw Error(ErrorCode::IncompleteParams, what); }

std::optional<std::size_t> parse_index(std::string_view token) {
    if (!token.empty() && (token.front() == 'C' || token.front() == 'c')) token.remove_prefix(1);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) return std::nullopt;
    return value;
}

AttackTarget parse_target(AttackKind kind, std::string_view token) {
    token = text::trim(token);
    switch (kind) {
    case AttackKind::communication: {
        const auto arrow = token.find("->");
        if (arrow == std::string_view::npos || arrow == 0 || arrow + 2 >= token.size()) {
            throw Error(ErrorCode::UnknownTarget, "communication target must look like SOURCE->DESTINATION");
        }
        return LinkRef{normalize_id(token.substr(0, arrow)), normalize_id(token.substr(arrow + 2))};
    }
    case AttackKind::control: {
        auto idx = parse_index(token);
        if (!idx || *idx == 0) throw Error(ErrorCode::UnknownTarget, "control target must look like C<n>");
        return ControlRef{*idx};
    }
    case AttackKind::sensor: {
        auto s = parse_sensor(token);
        if (!s) throw Error(ErrorCode::UnknownTarget, "sensor target must look like ELEMENT:QUANTITY");
        return *s;
    }
    case AttackKind::actuator:
        if (token.empty()) throw Error(ErrorCode::UnknownTarget, "empty actuator target");
        return ActuatorRef{text::to_upper(token)};
    }
    throw Error(ErrorCode::UnknownAttackKind, "unknown attack kind");
}

AttackPayload parse_payload(AttackKind kind, std::string_view raw, bool offset) {
    const auto tokens = text::split_ws(raw);
    if (tokens.empty()) incomplete("missing attack value");
    const auto head = text::to_upper(tokens.front());
    switch (kind) {
    case AttackKind::sensor:
    case AttackKind::communication: {
        Injection inj;
        std::string_view number = tokens.front();
        if (tokens.size() == 2 && (head == "CONSTANT" || head == "OFFSET")) {
            inj.mode = head == "OFFSET" ? Injection::Mode::offset : Injection::Mode::constant;
            number = tokens[1];
        } else if (tokens.size() == 1) {
            inj.mode = offset ? Injection::Mode::offset : Injection::Mode::constant;
        } else {
            incomplete("expected '<value>', 'CONSTANT <value>' or 'OFFSET <value>'");
        }
        auto v = text::parse_number(number);
        if (!v) incomplete("injected value '" + std::string(number) + "' is not a number");
        inj.value = *v;
        return inj;
    }
    case AttackKind::actuator: {
        if (tokens.size() == 1 && head == "OPEN") return ControlAction::open();
        if (tokens.size() == 1 && head == "CLOSED") return ControlAction::closed();
        std::string_view number = tokens.front();
        if (tokens.size() == 2 && head == "SETTING") {
            number = tokens[1];
        } else if (tokens.size() != 1) {
            incomplete("expected OPEN, CLOSED or SETTING <value>");
        }
        auto v = text::parse_number(number);
        if (!v) incomplete("expected OPEN, CLOSED or SETTING <value>");
        return ControlAction::with_setting(*v);
    }
    case AttackKind::control:
        try {
            return parse_control(raw);
        } catch (const Error& e) {
            throw Error(ErrorCode::IncompleteParams, "replacement control: " + e.detail());
        }
    }
    incomplete("missing attack value");
}

void check_window(const AttackWindow& w) {
    if (is_end(w.start)) throw Error(ErrorCode::InvalidWindow, "an attack cannot start at END");
    for (const auto* c : {&w.start, &w.end}) {
        if (const auto* t = std::get_if<TimeCondition>(c); t && t->hours < 0.0) {
            throw Error(ErrorCode::InvalidWindow, "window times must be non-negative");
        }
    }
    const auto* s = std::get_if<TimeCondition>(&w.start);
    const auto* e = std::get_if<TimeCondition>(&w.end);
    if (s && e && !(s->hours < e->hours)) {
        throw Error(ErrorCode::InvalidWindow, "window start must precede its end");
    }
}

std::string quantity_problem(const SensorRef& s, const InpModel& model) {
    for (const auto& e : model.elements) {
        if (e.id == s.element && supports(e.kind, s.quantity)) return {};
    }
    return format_sensor(s) + " does not exist in the model";
}

}  // namespace

Condition parse_condition(std::string_view raw) {
    const auto tokens = text::split_ws(raw);
    if (tokens.size() == 1) {
        if (text::iequals(tokens[0], "END")) return TimeCondition{kEndOfHorizon};
        if (auto h = number_or_time(tokens[0])) return TimeCondition{*h};
    } else if (tokens.size() == 2 && text::iequals(tokens[0], "TIME")) {
        if (auto h = number_or_time(tokens[1])) return TimeCondition{*h};
    } else if (tokens.size() == 3) {
        auto sensor = parse_sensor(tokens[0]);
        auto threshold = text::parse_number(tokens[2]);
        const auto rel = text::to_upper(tokens[1]);
        if (sensor && threshold && (rel == "ABOVE" || rel == "BELOW")) {
            return ValueCondition{*sensor, rel == "ABOVE" ? Relation::above : Relation::below, *threshold};
        }
    }
    throw Error(ErrorCode::InvalidWindow,
                "condition '" + std::string(text::trim(raw)) + "' is not 'TIME <h>', 'END' or '<sensor> ABOVE|BELOW <v>'");
}

std::string format_condition(const Condition& c) {
    if (const auto* t = std::get_if<TimeCondition>(&c)) {
        return std::isinf(t->hours) ? "END" : "TIME " + text::format_number(t->hours);
    }
    const auto& v = std::get<ValueCondition>(c);
    return format_sensor(v.sensor) + " " + std::string(to_string(v.relation)) + " " + text::format_number(v.threshold);
}

std::string format_target(const AttackTarget& t) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, LinkRef>) {
                return x.source + "->" + x.destination;
            } else if constexpr (std::is_same_v<T, ControlRef>) {
                return "C" + std::to_string(x.index);
            } else if constexpr (std::is_same_v<T, SensorRef>) {
                return format_sensor(x);
            } else {
                return x.element;
            }
        },
        t);
}

std::string format_payload(const AttackPayload& p) {
    if (const auto* inj = std::get_if<Injection>(&p)) {
        return std::string(inj->mode == Injection::Mode::offset ? "OFFSET " : "CONSTANT ") +
               text::format_number(inj->value);
    }
    if (const auto* rule = std::get_if<ControlRule>(&p)) return format_control(*rule);
    const auto& action = std::get<ControlAction>(p);
    switch (action.type) {
    case ControlAction::Type::open: return "OPEN";
    case ControlAction::Type::closed: return "CLOSED";
    case ControlAction::Type::setting: return "SETTING " + text::format_number(action.setting);
    }
    return {};
}

std::string next_attack_id(const std::vector<AttackSpec>& existing) {
    std::size_t highest = 0;
    for (const auto& a : existing) {
        if (a.id.size() > 3 && a.id.compare(0, 3, "ATK") == 0) {
            std::size_t n = 0;
            const auto* first = a.id.data() + 3;
            const auto* last = a.id.data() + a.id.size();
            if (auto [ptr, ec] = std::from_chars(first, last, n); ec == std::errc{} && ptr == last) {
                highest = std::max(highest, n);
            }
        }
    }
    return "ATK" + std::to_string(highest + 1);
}

std::vector<std::string> attack_problems(const AttackSpec& spec, const CyberTopology& topology,
                                         const InpModel* model) {
    std::vector<std::string> problems;
    const auto where = spec.id + ": ";
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, LinkRef>) {
                if (!topology.find_link(t.source, t.destination)) {
                    problems.push_back(where + "no cyberlink " + t.source + "->" + t.destination);
                }
            } else if constexpr (std::is_same_v<T, ControlRef>) {
                if (t.index == 0 || (model && t.index > model->controls.size())) {
                    problems.push_back(where + "no control C" + std::to_string(t.index));
                }
            } else if constexpr (std::is_same_v<T, SensorRef>) {
                const bool sensed = std::any_of(topology.nodes.begin(), topology.nodes.end(),
                                                [&](const CyberNode& n) { return n.sensors.count(t) > 0; });
                if (!sensed) problems.push_back(where + "no cyber node senses " + format_sensor(t));
            } else {
                const bool driven = std::any_of(topology.nodes.begin(), topology.nodes.end(),
                                                [&](const CyberNode& n) { return n.actuators.count(t.element) > 0; });
                if (!driven) problems.push_back(where + "no cyber node actuates " + t.element);
            }
        },
        spec.target);

    const bool target_matches_kind = [&] {
        switch (spec.kind) {
        case AttackKind::communication: return std::holds_alternative<LinkRef>(spec.target);
        case AttackKind::control: return std::holds_alternative<ControlRef>(spec.target);
        case AttackKind::sensor: return std::holds_alternative<SensorRef>(spec.target);
        case AttackKind::actuator: return std::holds_alternative<ActuatorRef>(spec.target);
        }
        return false;
    }();
    if (!target_matches_kind) problems.push_back(where + "target does not fit the attack kind");

    if (model) {
        if (const auto* s = std::get_if<SensorRef>(&spec.target)) {
            if (auto why = quantity_problem(*s, *model); !why.empty()) problems.push_back(where + why);
        }
        if (const auto* a = std::get_if<ActuatorRef>(&spec.target); a && !model->find_link(a->element)) {
            problems.push_back(where + a->element + " is not a link in the model");
        }
        for (const auto* c : {&spec.window.start, &spec.window.end}) {
            if (const auto* v = std::get_if<ValueCondition>(c)) {
                if (auto why = quantity_problem(v->sensor, *model); !why.empty()) problems.push_back(where + why);
            }
        }
        if (const auto* rule = std::get_if<ControlRule>(&spec.payload)) {
            if (!model->find_link(rule->target_link)) {
                problems.push_back(where + "replacement control targets unknown link " + rule->target_link);
            }
            if (const auto* lvl = std::get_if<NodeLevel>(&rule->trigger); lvl && !model->find_node(lvl->node)) {
                problems.push_back(where + "replacement control watches unknown node " + lvl->node);
            }
        }
    }
    try {
        check_window(spec.window);
    } catch (const Error& e) {
        problems.push_back(where + e.detail());
    }
    return problems;
}

namespace {

// A bare element id names the sensor when exactly one sensed quantity matches.
SensorRef resolve_sensor(std::string_view token, const CyberTopology& topology) {
    token = text::trim(token);
    if (token.find(':') != std::string_view::npos) return std::get<SensorRef>(parse_target(AttackKind::sensor, token));
    const auto element = text::to_upper(token);
    std::set<SensorRef> matches;
    for (const auto& node : topology.nodes) {
        for (const auto& s : node.sensors) {
            if (s.element == element) matches.insert(s);
        }
    }
    if (matches.empty()) throw Error(ErrorCode::UnknownTarget, "no cyber node senses " + element);
    if (matches.size() > 1) {
        throw Error(ErrorCode::UnknownTarget, element + " is sensed as several quantities; name one as ELEMENT:QUANTITY");
    }
    return *matches.begin();
}

}  // namespace

AttackSpec build_attack(AttackKind kind, const AttackParams& params, const CyberTopology& topology,
                        const InpModel& model, const std::vector<AttackSpec>& existing) {
    if (!params.target || text::trim(*params.target).empty()) incomplete("missing attack target");
    if (!params.start || text::trim(*params.start).empty()) incomplete("missing window start");
    if (!params.end || text::trim(*params.end).empty()) incomplete("missing window end");
    if (!params.value || text::trim(*params.value).empty()) incomplete("missing attack value");

    AttackSpec spec;
    spec.id = next_attack_id(existing);
    spec.kind = kind;
    spec.target = kind == AttackKind::sensor ? resolve_sensor(*params.target, topology)
                                              : parse_target(kind, *params.target);
    spec.window = {parse_condition(*params.start), parse_condition(*params.end)};
    check_window(spec.window);
    spec.payload = parse_payload(kind, *params.value, params.offset);

    if (auto problems = attack_problems(spec, topology, &model); !problems.empty()) {
        throw Error(ErrorCode::UnknownTarget, join(problems, "; "));
    }
    return spec;
}

CyberTopology skeleton(const CyberTopology& topology) {
    CyberTopology out = topology;
    out.provenance.clear();
    for (auto& n : out.nodes) n.controls.clear();
    return out;
}

std::string render_cpa(const CyberTopology& topology, const std::vector<AttackSpec>& attacks,
                       const CpaOptions& options) {
    std::vector<std::string> problems;
    std::set<std::string> node_ids;
    for (const auto& n : topology.nodes) {
        if (!is_valid_node_id(n.id)) problems.push_back("node id '" + n.id + "' is not a single token");
        if (!node_ids.insert(n.id).second) problems.push_back("duplicate node " + n.id);
    }
    std::set<std::pair<std::string, std::string>> link_ids;
    for (const auto& l : topology.links) {
        if (!node_ids.count(l.source) || !node_ids.count(l.destination)) {
            problems.push_back("link " + l.source + "->" + l.destination + " references an undeclared node");
        }
        if (!link_ids.emplace(l.source, l.destination).second) {
            problems.push_back("duplicate link " + l.source + "->" + l.destination);
        }
    }
    std::set<std::string> attack_ids;
    for (const auto& a : attacks) {
        if (!attack_ids.insert(a.id).second) problems.push_back("duplicate attack id " + a.id);
        auto more = attack_problems(a, topology);
        problems.insert(problems.end(), more.begin(), more.end());
    }
    for (const auto& [key, value] : options) {
        if (key.empty() || text::split_ws(key).size() != 1) problems.push_back("option key '" + key + "' is not a token");
    }
    if (!problems.empty()) throw Error(ErrorCode::ValidationFailed, join(problems, "; "));

    std::ostringstream out;
    out << kNodesHeader << '\n';
    for (const auto& n : topology.nodes) {
        out << n.id << ' ' << sensor_list(n.sensors) << ' ' << id_list(n.actuators) << '\n';
    }
    out << '\n' << kLinksHeader << '\n';
    for (const auto& l : topology.links) {
        out << l.source << ' ' << l.destination << ' ' << sensor_list(l.sensors) << '\n';
    }
    out << '\n' << kAttacksHeader << '\n';
    for (const auto& a : attacks) {
        out << a.id << ' ' << to_string(a.kind) << ' ' << format_target(a.target) << ' '
            << format_condition(a.window.start) << ' ' << format_condition(a.window.end) << ' '
            << format_payload(a.payload) << '\n';
    }
    out << '\n' << kOptionsHeader << '\n';
    for (const auto& [key, value] : options) {
        out << key;
        for (const auto& tok : text::split_ws(value)) out << ' ' << tok;
        out << '\n';
    }
    return out.str();
}

namespace {

[[noreturn]] void malformed_row(int line, const std::string& why) { throw Error(ErrorCode::MalformedRow, why, line); }

std::set<SensorRef> parse_sensor_list(const std::string& token, int line) {
    std::set<SensorRef> out;
    if (token == "-") return out;
    for (const auto& item : text::split(token, ',')) {
        auto s = parse_sensor(item);
        if (!s) malformed_row(line, "bad sensor '" + item + "'");
        out.insert(*s);
    }
    return out;
}

// Number of tokens a condition starting at tokens[i] spans.
std::size_t condition_width(const std::vector<std::string>& tokens, std::size_t i) {
    if (i >= tokens.size()) return 0;
    if (text::iequals(tokens[i], "END")) return 1;
    if (text::iequals(tokens[i], "TIME")) return 2;
    return 3;
}

AttackSpec parse_attack_row(const std::vector<std::string>& tokens, int line) {
    if (tokens.size() < 2) malformed_row(line, "attack row needs id, kind, target, start, end, payload");
    AttackSpec spec;
    spec.id = text::to_upper(tokens[0]);
    auto kind = attack_kind_from_string(tokens[1]);
    if (!kind) throw Error(ErrorCode::UnknownAttackKind, "unknown attack kind '" + tokens[1] + "'", line);
    spec.kind = *kind;
    if (tokens.size() < 6) malformed_row(line, "attack row needs id, kind, target, start, end, payload");

    auto slice = [&](std::size_t from, std::size_t count) {
        if (from + count > tokens.size()) malformed_row(line, "attack row ends early");
        std::vector<std::string> part(tokens.begin() + static_cast<std::ptrdiff_t>(from),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(from + count));
        return join(part, " ");
    };

    try {
        spec.target = parse_target(spec.kind, tokens[2]);
        std::size_t i = 3;
        const auto start_width = condition_width(tokens, i);
        spec.window.start = parse_condition(slice(i, start_width));
        i += start_width;
        const auto end_width = condition_width(tokens, i);
        spec.window.end = parse_condition(slice(i, end_width));
        i += end_width;
        if (i >= tokens.size()) malformed_row(line, "attack row has no payload");
        spec.payload = parse_payload(spec.kind, slice(i, tokens.size() - i), false);
    } catch (const Error& e) {
        if (e.line()) throw;
        malformed_row(line, e.detail());
    }
    return spec;
}

}  // namespace

CpaScenario parse_cpa(std::string_view input) {
    CpaScenario scenario;
    enum class Section { none, nodes, links, attacks, options } section = Section::none;
    int line_no = 0;
    for (auto raw : text::lines(input)) {
        ++line_no;
        auto content = raw;
        if (auto pos = content.find(';'); pos != std::string_view::npos) content = content.substr(0, pos);
        content = text::trim(content);
        if (content.empty()) continue;

        if (content.front() == '[') {
            const auto header = text::to_upper(content);
            if (header == kNodesHeader) section = Section::nodes;
            else if (header == kLinksHeader) section = Section::links;
            else if (header == kAttacksHeader) section = Section::attacks;
            else if (header == kOptionsHeader) section = Section::options;
            else throw Error(ErrorCode::MalformedSection, "unknown section '" + std::string(content) + "'", line_no);
            continue;
        }

        const auto tokens = text::split_ws(content);
        switch (section) {
        case Section::none:
            throw Error(ErrorCode::MalformedSection, "row before the first section header", line_no);
        case Section::nodes: {
            if (tokens.size() != 3) malformed_row(line_no, "node row needs id, sensors, actuators");
            CyberNode node;
            node.id = normalize_id(tokens[0]);
            node.sensors = parse_sensor_list(tokens[1], line_no);
            if (tokens[2] != "-") {
                for (const auto& a : text::split(tokens[2], ',')) node.actuators.insert(text::to_upper(a));
            }
            if (scenario.topology.find_node(node.id)) malformed_row(line_no, "duplicate node " + node.id);
            scenario.topology.nodes.push_back(std::move(node));
            break;
        }
        case Section::links: {
            if (tokens.size() != 3) malformed_row(line_no, "link row needs source, destination, sensors");
            CyberLink link{normalize_id(tokens[0]), normalize_id(tokens[1]), parse_sensor_list(tokens[2], line_no)};
            if (scenario.topology.find_link(link.source, link.destination)) {
                malformed_row(line_no, "duplicate link " + link.source + "->" + link.destination);
            }
            scenario.topology.links.push_back(std::move(link));
            break;
        }
        case Section::attacks:
            scenario.attacks.push_back(parse_attack_row(tokens, line_no));
            break;
        case Section::options: {
            std::vector<std::string> rest(tokens.begin() + 1, tokens.end());
            scenario.options.emplace_back(tokens[0], join(rest, " "));
            break;
        }
        }
    }
    return scenario;
}

}  // namespace inp2cpa

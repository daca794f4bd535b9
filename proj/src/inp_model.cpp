#include "inp2cpa/inp_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "inp2cpa/error.hpp"
#include "inp2cpa/text.hpp"

namespace inp2cpa {

std::string_view to_string(ElementKind kind) {
    switch (kind) {
    case ElementKind::junction: return "junction";
    case ElementKind::reservoir: return "reservoir";
    case ElementKind::tank: return "tank";
    case ElementKind::pipe: return "pipe";
    case ElementKind::pump: return "pump";
    case ElementKind::valve: return "valve";
    }
    return "?";
}

std::optional<ElementKind> element_kind_from_string(std::string_view name) {
    for (auto k : kAllElementKinds) {
        if (text::iequals(name, to_string(k))) return k;
    }
    return std::nullopt;
}

std::string_view to_string(Relation r) { return r == Relation::above ? "ABOVE" : "BELOW"; }

const NetworkElement* InpModel::find_node(std::string_view id) const {
    for (const auto& e : elements) {
        if (is_node_kind(e.kind) && e.id == id) return &e;
    }
    return nullptr;
}

const NetworkElement* InpModel::find_link(std::string_view id) const {
    for (const auto& e : elements) {
        if (is_link_kind(e.kind) && e.id == id) return &e;
    }
    return nullptr;
}

namespace {

std::string_view section_name(ElementKind kind) {
    switch (kind) {
    case ElementKind::junction: return "JUNCTIONS";
    case ElementKind::reservoir: return "RESERVOIRS";
    case ElementKind::tank: return "TANKS";
    case ElementKind::pipe: return "PIPES";
    case ElementKind::pump: return "PUMPS";
    case ElementKind::valve: return "VALVES";
    }
    return "";
}

std::optional<ElementKind> kind_for_section(std::string_view name) {
    for (auto k : kAllElementKinds) {
        if (section_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view strip_comment(std::string_view line) {
    const auto pos = line.find(';');
    if (pos != std::string_view::npos) line = line.substr(0, pos);
    return text::trim(line);
}

bool is_section_name(std::string_view name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
    });
}

[[noreturn]] void malformed_control(std::string_view statement, std::optional<int> line, std::string_view why) {
    throw Error(ErrorCode::MalformedControl,
                std::string(why) + ": '" + std::string(text::trim(statement)) + "'", line);
}

ControlAction parse_action(const std::string& token, std::string_view statement, std::optional<int> line) {
    if (token == "OPEN") return ControlAction::open();
    if (token == "CLOSED") return ControlAction::closed();
    if (auto v = text::parse_number(token)) return ControlAction::with_setting(*v);
    malformed_control(statement, line, "expected OPEN, CLOSED or a setting");
}

// Hour-of-day from a CLOCKTIME value and optional AM/PM marker.
std::optional<double> clock_hours(std::string_view value, std::optional<std::string_view> meridiem) {
    auto hours = parse_hours(value);
    if (!hours) return std::nullopt;
    if (!meridiem) {
        if (*hours < 0.0 || *hours >= 24.0) return std::nullopt;
        return hours;
    }
    if (*hours < 0.0 || *hours >= 13.0) return std::nullopt;
    double h = *hours >= 12.0 ? *hours - 12.0 : *hours;  // 12 AM is midnight, 12 PM is noon
    if (*meridiem == "PM") h += 12.0;
    return h;
}

}  // namespace

std::optional<double> parse_hours(std::string_view token) {
    if (token.find(':') == std::string_view::npos) return text::parse_number(token);
    const auto parts = text::split(token, ':');
    if (parts.size() > 3) return std::nullopt;
    double total = 0.0;
    double scale = 1.0;
    for (const auto& part : parts) {
        if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            return std::nullopt;
        }
        total += *text::parse_number(part) * scale;
        scale /= 60.0;
    }
    return total;
}

ControlRule parse_control(std::string_view statement, std::optional<int> line) {
    std::vector<std::string> tok;
    for (auto& t : text::split_ws(statement)) tok.push_back(text::to_upper(t));

    if (tok.size() < 4 || tok[0] != "LINK") {
        if (!tok.empty() && (tok[0] == "RULE" || tok[0] == "IF")) {
            malformed_control(statement, line, "multi-clause rules are not supported");
        }
        malformed_control(statement, line, "expected 'LINK <id> <action> IF|AT ...'");
    }

    ControlRule rule;
    rule.target_link = tok[1];
    rule.action = parse_action(tok[2], statement, line);

    if (tok[3] == "IF") {
        if (tok.size() != 8 || tok[4] != "NODE") {
            malformed_control(statement, line, "expected 'IF NODE <id> ABOVE|BELOW <value>'");
        }
        NodeLevel cond;
        cond.node = tok[5];
        if (tok[6] == "ABOVE") {
            cond.relation = Relation::above;
        } else if (tok[6] == "BELOW") {
            cond.relation = Relation::below;
        } else {
            malformed_control(statement, line, "expected ABOVE or BELOW");
        }
        auto threshold = text::parse_number(tok[7]);
        if (!threshold) malformed_control(statement, line, "threshold is not a finite number");
        cond.threshold = *threshold;
        rule.trigger = cond;
        return rule;
    }

    if (tok[3] == "AT" && tok.size() >= 6) {
        if (tok[4] == "TIME" && tok.size() == 6) {
            auto hours = parse_hours(tok[5]);
            if (!hours || *hours < 0.0) malformed_control(statement, line, "TIME must be a non-negative time");
            rule.trigger = AtTime{*hours};
            return rule;
        }
        if (tok[4] == "CLOCKTIME" && (tok.size() == 6 || tok.size() == 7)) {
            std::optional<std::string_view> meridiem;
            if (tok.size() == 7) {
                if (tok[6] != "AM" && tok[6] != "PM") malformed_control(statement, line, "expected AM or PM");
                meridiem = tok[6];
            }
            auto hours = clock_hours(tok[5], meridiem);
            if (!hours) malformed_control(statement, line, "CLOCKTIME must be a time of day");
            rule.trigger = AtClockTime{*hours};
            return rule;
        }
    }
    malformed_control(statement, line, "expected 'AT TIME <t>' or 'AT CLOCKTIME <t> [AM|PM]'");
}

std::string format_control(const ControlRule& rule) {
    std::string out = "LINK " + rule.target_link + " ";
    switch (rule.action.type) {
    case ControlAction::Type::open: out += "OPEN"; break;
    case ControlAction::Type::closed: out += "CLOSED"; break;
    case ControlAction::Type::setting: out += text::format_number(rule.action.setting); break;
    }
    if (const auto* lvl = std::get_if<NodeLevel>(&rule.trigger)) {
        out += " IF NODE " + lvl->node + " " + std::string(to_string(lvl->relation)) + " " +
               text::format_number(lvl->threshold);
    } else if (const auto* t = std::get_if<AtTime>(&rule.trigger)) {
        out += " AT TIME " + text::format_number(t->hours);
    } else {
        out += " AT CLOCKTIME " + text::format_number(std::get<AtClockTime>(rule.trigger).hour_of_day);
    }
    return out;
}

InpModel parse_inp(std::string_view text, std::string source_name) {
    InpModel model;
    model.source_name = std::move(source_name);

    std::vector<std::string> title_lines;
    std::vector<int> control_lines;
    std::map<ElementKind, std::vector<NetworkElement>> by_kind;
    std::set<std::string> node_ids;
    std::set<std::string> link_ids;

    std::string section;
    bool in_section = false;
    bool opaque = false;
    int line_no = 0;
    for (auto raw : text::lines(text)) {
        ++line_no;
        const auto content = strip_comment(raw);
        if (!content.empty() && content.front() == '[') {
            if (content.back() != ']' || !is_section_name(content.substr(1, content.size() - 2))) {
                throw Error(ErrorCode::MalformedSection,
                            "bad section header '" + std::string(content) + "'", line_no);
            }
            section = text::to_upper(content.substr(1, content.size() - 2));
            in_section = true;
            if (section == "END") break;
            opaque = !kind_for_section(section) && section != "TITLE" && section != "CONTROLS" &&
                     section != "RULES";
            if (opaque) model.opaque_sections.push_back({section, {}});
            continue;
        }
        if (!in_section) {
            if (content.empty()) continue;
            throw Error(ErrorCode::MalformedSection, "content before the first section header", line_no);
        }
        if (opaque) {
            model.opaque_sections.back().lines.emplace_back(raw);
            continue;
        }
        if (content.empty()) continue;

        if (section == "TITLE") {
            title_lines.emplace_back(content);
        } else if (section == "CONTROLS") {
            model.controls.push_back(parse_control(content, line_no));
            control_lines.push_back(line_no);
        } else if (section == "RULES") {
            throw Error(ErrorCode::MalformedControl, "[RULES] blocks are not supported", line_no);
        } else if (auto kind = kind_for_section(section)) {
            auto tokens = text::split_ws(content);
            NetworkElement element;
            element.id = text::to_upper(tokens.front());
            element.kind = *kind;
            element.fields.assign(tokens.begin() + 1, tokens.end());
            auto& ids = is_node_kind(*kind) ? node_ids : link_ids;
            if (!ids.insert(element.id).second) {
                throw Error(ErrorCode::DuplicateId, "identifier '" + element.id + "' defined twice", line_no);
            }
            by_kind[*kind].push_back(std::move(element));
        }
    }

    for (auto& s : model.opaque_sections) {
        while (!s.lines.empty() && text::trim(s.lines.back()).empty()) s.lines.pop_back();
    }
    for (std::size_t i = 0; i < title_lines.size(); ++i) {
        if (i) model.title += '\n';
        model.title += title_lines[i];
    }
    for (auto kind : kAllElementKinds) {
        auto it = by_kind.find(kind);
        if (it == by_kind.end()) continue;
        std::move(it->second.begin(), it->second.end(), std::back_inserter(model.elements));
    }

    for (std::size_t i = 0; i < model.controls.size(); ++i) {
        const auto& rule = model.controls[i];
        if (!link_ids.count(rule.target_link)) {
            throw Error(ErrorCode::DanglingReference, "control targets unknown link '" + rule.target_link + "'",
                        control_lines[i]);
        }
        if (const auto* lvl = std::get_if<NodeLevel>(&rule.trigger); lvl && !node_ids.count(lvl->node)) {
            throw Error(ErrorCode::DanglingReference, "control watches unknown node '" + lvl->node + "'",
                        control_lines[i]);
        }
    }
    return model;
}

const std::vector<ControlRule>& extract_control_rules(const InpModel& model) { return model.controls; }

std::vector<std::string> inventory(const InpModel& model, ElementKind kind) {
    std::vector<std::string> ids;
    for (const auto& e : model.elements) {
        if (e.kind == kind) ids.push_back(e.id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::string serialize_inp(const InpModel& model) {
    std::ostringstream out;
    out << "[TITLE]\n";
    if (!model.title.empty()) out << model.title << '\n';
    for (auto kind : kAllElementKinds) {
        out << '\n' << '[' << section_name(kind) << "]\n";
        for (const auto& e : model.elements) {
            if (e.kind != kind) continue;
            out << e.id;
            for (const auto& f : e.fields) out << ' ' << f;
            out << '\n';
        }
    }
    out << "\n[CONTROLS]\n";
    for (const auto& rule : model.controls) out << format_control(rule) << '\n';
    for (const auto& section : model.opaque_sections) {
        out << "\n[" << section.name << "]\n";
        for (const auto& line : section.lines) out << line << '\n';
    }
    out << "\n[END]\n";
    return out.str();
}

}  // namespace inp2cpa

#pragma once

// Seeded random inputs shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "inp2cpa/attack_studio.hpp"
#include "inp2cpa/cyber_topology.hpp"
#include "inp2cpa/inp_model.hpp"

namespace testgen {

// Directed G(n, p) on vertices V0..V{n-1}.
inline inp2cpa::LogicalGraph random_graph(std::mt19937_64& rng, int n, double p) {
    std::bernoulli_distribution edge(p);
    inp2cpa::LogicalGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back("V" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && edge(rng)) g.directed_edges.insert({g.vertices[i], g.vertices[j]});
        }
    }
    return g;
}

// Same graph under a random bijection onto fresh names.
inline inp2cpa::LogicalGraph relabel(const inp2cpa::LogicalGraph& g, std::mt19937_64& rng) {
    std::vector<std::string> names;
    std::uniform_int_distribution<int> letter(0, 25);
    while (names.size() < g.vertices.size()) {
        std::string name;
        for (int k = 0; k < 4; ++k) name += static_cast<char>('A' + letter(rng));
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
    std::shuffle(names.begin(), names.end(), rng);
    auto rename = [&](const std::string& v) {
        const auto it = std::find(g.vertices.begin(), g.vertices.end(), v);
        return names[static_cast<std::size_t>(it - g.vertices.begin())];
    };
    inp2cpa::LogicalGraph out;
    for (const auto& v : g.vertices) out.vertices.push_back(rename(v));
    std::sort(out.vertices.begin(), out.vertices.end());
    for (const auto& [a, b] : g.directed_edges) out.directed_edges.insert({rename(a), rename(b)});
    return out;
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& items) {
    std::uniform_int_distribution<std::size_t> idx(0, items.size() - 1);
    return items[idx(rng)];
}

// A value with a short decimal spelling, like the numbers people type.
inline double typed_value(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> v(-5000, 5000);
    std::uniform_int_distribution<int> scale(0, 3);
    double x = v(rng);
    for (int i = scale(rng); i > 0; --i) x /= 10;
    return x;
}

// A random full-precision double, which must also survive the text format.
inline double raw_value(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> v(-1e4, 1e4);
    return v(rng);
}

struct Scenario {
    inp2cpa::CyberTopology topology;
    std::vector<inp2cpa::AttackSpec> attacks;
};

// A valid (topology, attacks) pair over `model`, built directly from the
// data types so that the text format is not used to construct it.
inline Scenario random_scenario(std::mt19937_64& rng, const inp2cpa::InpModel& model) {
    using namespace inp2cpa;
    std::vector<SensorRef> sensable;
    std::vector<std::string> links;
    for (const auto& e : model.elements) {
        for (auto q : {Quantity::pressure, Quantity::level, Quantity::flow, Quantity::status}) {
            if (supports(e.kind, q)) sensable.push_back({e.id, q});
        }
        if (is_link_kind(e.kind)) links.push_back(e.id);
    }
    std::uniform_int_distribution<int> node_count(1, 6);
    std::uniform_int_distribution<int> small(0, 3);
    std::bernoulli_distribution coin(0.5);

    Scenario sc;
    const int n = node_count(rng);
    for (int i = 0; i < n; ++i) {
        CyberNode node;
        node.id = (coin(rng) ? "PLC" : "SCADA_") + std::to_string(i);
        for (int k = small(rng); k > 0; --k) node.sensors.insert(pick(rng, sensable));
        for (int k = small(rng) % 3; k > 0; --k) node.actuators.insert(pick(rng, links));
        sc.topology.nodes.push_back(std::move(node));
    }
    std::bernoulli_distribution edge(0.35);
    for (const auto& a : sc.topology.nodes) {
        for (const auto& b : sc.topology.nodes) {
            if (a.id == b.id || !edge(rng)) continue;
            CyberLink l{a.id, b.id, {}};
            for (const auto& s : a.sensors) {
                if (coin(rng)) l.sensors.insert(s);
            }
            sc.topology.links.push_back(std::move(l));
        }
    }
    std::shuffle(sc.topology.links.begin(), sc.topology.links.end(), rng);

    std::vector<SensorRef> sensed;
    std::vector<std::string> driven;
    for (const auto& node : sc.topology.nodes) {
        sensed.insert(sensed.end(), node.sensors.begin(), node.sensors.end());
        driven.insert(driven.end(), node.actuators.begin(), node.actuators.end());
    }

    auto condition = [&](bool is_end) -> Condition {
        std::uniform_int_distribution<int> form(0, 3);
        switch (form(rng)) {
        case 0:
            if (is_end) return TimeCondition{kEndOfHorizon};
            [[fallthrough]];
        case 1: return TimeCondition{std::abs(typed_value(rng))};
        default:
            if (sensed.empty()) return TimeCondition{std::abs(raw_value(rng))};
            return ValueCondition{pick(rng, sensed), coin(rng) ? Relation::above : Relation::below, raw_value(rng)};
        }
    };
    auto action = [&]() -> ControlAction {
        std::uniform_int_distribution<int> form(0, 2);
        switch (form(rng)) {
        case 0: return {ControlAction::Type::open, 0.0};
        case 1: return {ControlAction::Type::closed, 0.0};
        default: return {ControlAction::Type::setting, typed_value(rng)};
        }
    };

    std::uniform_int_distribution<int> attack_count(0, 6);
    std::uniform_int_distribution<int> kinds(0, 3);
    for (int i = attack_count(rng); i > 0; --i) {
        AttackSpec a;
        a.kind = static_cast<AttackKind>(kinds(rng));
        switch (a.kind) {
        case AttackKind::communication:
            if (sc.topology.links.empty()) continue;
            {
                const auto& l = pick(rng, sc.topology.links);
                a.target = LinkRef{l.source, l.destination};
            }
            a.payload = Injection{coin(rng) ? Injection::Mode::offset : Injection::Mode::constant, raw_value(rng)};
            break;
        case AttackKind::control: {
            if (model.controls.empty()) continue;
            std::uniform_int_distribution<std::size_t> idx(1, model.controls.size());
            a.target = ControlRef{idx(rng)};
            ControlRule rule = model.controls[idx(rng) - 1];
            rule.action = action();
            a.payload = rule;
            break;
        }
        case AttackKind::sensor:
            if (sensed.empty()) continue;
            a.target = pick(rng, sensed);
            a.payload = Injection{coin(rng) ? Injection::Mode::offset : Injection::Mode::constant, typed_value(rng)};
            break;
        case AttackKind::actuator:
            if (driven.empty()) continue;
            a.target = ActuatorRef{pick(rng, driven)};
            a.payload = action();
            break;
        }
        a.window.start = condition(false);
        a.window.end = condition(true);
        if (const auto* s = std::get_if<TimeCondition>(&a.window.start)) {
            if (const auto* e = std::get_if<TimeCondition>(&a.window.end); e && e->hours <= s->hours) {
                a.window.end = TimeCondition{kEndOfHorizon};
            }
        }
        a.id = next_attack_id(sc.attacks);
        sc.attacks.push_back(std::move(a));
    }
    return sc;
}

}  // namespace testgen

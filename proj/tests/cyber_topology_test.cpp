#include <doctest.h>

#include <map>

#include "inp2cpa/cyber_topology.hpp"
#include "inp2cpa/error.hpp"
#include "support/fixtures.hpp"

using namespace inp2cpa;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

CyberNode plain(std::string id) { return CyberNode{std::move(id), {}, {}, {}}; }

const SensorRef kT1{"T1", Quantity::level};

}  // namespace

TEST_CASE("sensor tokens") {
    CHECK(format_sensor(kT1) == "T1:LEVEL");
    CHECK(parse_sensor("t1:level") == kT1);
    CHECK(parse_sensor("J422:PRESSURE") == SensorRef{"J422", Quantity::pressure});
    CHECK_FALSE(parse_sensor("T1"));
    CHECK_FALSE(parse_sensor("T1:DEPTH"));
    CHECK_FALSE(parse_sensor(":LEVEL"));
    CHECK(supports(ElementKind::tank, Quantity::level));
    CHECK_FALSE(supports(ElementKind::junction, Quantity::level));
    CHECK(supports(ElementKind::pump, Quantity::flow));
    CHECK_FALSE(supports(ElementKind::pipe, Quantity::pressure));
}

TEST_CASE("baseline from two rules on one pump") {
    const auto m = fixtures::ctown();
    std::vector<ControlRule> rules(m.controls.begin(), m.controls.begin() + 2);
    const auto t = derive_baseline_topology(rules, m);
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.nodes[0].id == "PLC_PU1");
    CHECK(t.nodes[0].sensors == std::set<SensorRef>{kT1});
    CHECK(t.nodes[0].actuators == std::set<std::string>{"PU1"});
    CHECK(t.nodes[0].controls == rules);
    CHECK(t.links.empty());
    CHECK(t.provenance == "ctown_subset.inp");
}

TEST_CASE("baseline of no rules is empty") {
    const auto t = derive_baseline_topology({}, fixtures::ctown());
    CHECK(t.nodes.empty());
    CHECK(t.links.empty());
}

TEST_CASE("baseline groups by controlled link") {
    const auto m = fixtures::ctown();
    const auto t = derive_baseline_topology(m.controls, m);

    // Independent grouping: bucket the rules by target, then compare.
    std::map<std::string, std::vector<ControlRule>> by_link;
    std::vector<std::string> order;
    for (const auto& r : m.controls) {
        if (!by_link.count(r.target_link)) order.push_back(r.target_link);
        by_link[r.target_link].push_back(r);
    }
    REQUIRE(t.nodes.size() == order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& n = t.nodes[i];
        CHECK(n.id == "PLC_" + order[i]);
        CHECK(n.controls == by_link[order[i]]);
        CHECK(n.actuators == std::set<std::string>{order[i]});
        std::set<SensorRef> expected;
        for (const auto& r : by_link[order[i]]) {
            if (const auto* lvl = std::get_if<NodeLevel>(&r.trigger)) {
                const auto* node = m.find_node(lvl->node);
                expected.insert({lvl->node, node->kind == ElementKind::junction ? Quantity::pressure : Quantity::level});
            }
        }
        CHECK(n.sensors == expected);
    }
}

TEST_CASE("baseline rejects rules the model does not know") {
    const auto m = fixtures::ctown();
    CHECK(code_of([&] { derive_baseline_topology({parse_control("LINK X9 OPEN AT TIME 1")}, m); }) ==
          ErrorCode::DanglingReference);
    CHECK(code_of([&] { derive_baseline_topology({parse_control("LINK PU1 OPEN IF NODE T9 BELOW 1")}, m); }) ==
          ErrorCode::DanglingReference);
}

TEST_CASE("adding nodes") {
    const auto m = fixtures::ctown();
    const auto base = derive_baseline_topology({m.controls[0], m.controls[6]}, m);
    REQUIRE(base.nodes.size() == 2);
    const auto grown = add_cyber_node(base, plain("scada"), m);
    CHECK(grown.nodes.size() == 3);
    CHECK(grown.nodes.back().id == "SCADA");
    CHECK(base.nodes.size() == 2);

    CHECK(code_of([&] { add_cyber_node(base, plain("PLC_PU1"), m); }) == ErrorCode::DuplicateId);
    CHECK(code_of([&] { add_cyber_node(grown, plain("SCADA"), m); }) == ErrorCode::DuplicateId);
    CHECK(code_of([&] { add_cyber_node(base, CyberNode{"X", {{"T9", Quantity::level}}, {}, {}}, m); }) ==
          ErrorCode::DanglingReference);
    CHECK(code_of([&] { add_cyber_node(base, CyberNode{"X", {{"J280", Quantity::level}}, {}, {}}, m); }) ==
          ErrorCode::DanglingReference);
    CHECK(code_of([&] { add_cyber_node(base, CyberNode{"X", {}, {"T1"}, {}}, m); }) == ErrorCode::DanglingReference);
    CHECK(code_of([&] { add_cyber_node(base, plain("A B"), m); }) == ErrorCode::BadCommand);
    CHECK(code_of([&] { add_cyber_node(base, plain("-"), m); }) == ErrorCode::BadCommand);
}

TEST_CASE("adding links") {
    const auto m = fixtures::ctown();
    auto t = add_cyber_node({}, CyberNode{"PLC_T1", {kT1}, {}, {}}, m);
    t = add_cyber_node(t, CyberNode{"PLC_PU1", {}, {"PU1"}, {}}, m);
    const auto linked = add_cyber_link(t, {"PLC_T1", "PLC_PU1", {kT1}});
    CHECK(linked.links.size() == 1);
    CHECK(t.links.empty());

    CHECK(code_of([&] { add_cyber_link(linked, {"PLC_T1", "PLC_PU1", {}}); }) == ErrorCode::DuplicateLink);
    CHECK(code_of([&] { add_cyber_link(t, {"PLC_PU1", "PLC_PU1", {}}); }) == ErrorCode::UnknownEndpoint);
    CHECK(code_of([&] { add_cyber_link(t, {"PLC_T1", "NOPE", {}}); }) == ErrorCode::UnknownEndpoint);
    CHECK(code_of([&] { add_cyber_link(t, {"PLC_PU1", "PLC_T1", {kT1}}); }) == ErrorCode::SensorNotAtSource);
    // The reverse direction is a different link.
    CHECK(add_cyber_link(linked, {"PLC_PU1", "PLC_T1", {}}).links.size() == 2);
}

TEST_CASE("removing") {
    const auto m = fixtures::ctown();
    auto t = add_cyber_node({}, plain("A"), m);
    t = add_cyber_node(t, plain("B"), m);
    t = add_cyber_link(t, {"A", "B", {}});
    CHECK(code_of([&] { remove_cyber_node(t, "A"); }) == ErrorCode::InUse);
    CHECK(code_of([&] { remove_cyber_node(t, "C"); }) == ErrorCode::NotFound);
    CHECK(code_of([&] { remove_cyber_link(t, "B", "A"); }) == ErrorCode::NotFound);
    const auto unlinked = remove_cyber_link(t, "A", "B");
    CHECK(unlinked.links.empty());
    CHECK(remove_cyber_node(unlinked, "a").nodes.size() == 1);
}

TEST_CASE("logical graph") {
    const auto m = fixtures::ctown();
    auto t = add_cyber_node({}, plain("B"), m);
    t = add_cyber_node(t, plain("A"), m);
    CHECK(to_logical_graph(t).directed_edges.empty());
    t = add_cyber_link(t, {"A", "B", {}});
    auto g = to_logical_graph(t);
    CHECK(g.vertices == std::vector<std::string>{"A", "B"});
    CHECK(g.directed_edges == std::set<std::pair<std::string, std::string>>{{"A", "B"}});
    t = add_cyber_link(t, {"B", "A", {}});
    g = to_logical_graph(t);
    CHECK(g.directed_edges.size() == 2);
    CHECK(g.vertices.size() == t.nodes.size());
    CHECK(g.directed_edges.size() == t.links.size());
}

TEST_CASE("validate") {
    const auto m = fixtures::ctown();
    auto t = add_cyber_node({}, CyberNode{"PLC_T1", {kT1}, {}, {}}, m);
    t = add_cyber_node(t, CyberNode{"PLC_PU1", {}, {"PU1"}, {}}, m);

    auto d = validate(t, m);
    REQUIRE(d.size() == 1);
    CHECK(d[0].severity == Diagnostic::Severity::warning);
    CHECK(d[0].subject == "PLC_T1");

    t = add_cyber_link(t, {"PLC_T1", "PLC_PU1", {kT1}});
    CHECK(validate(t, m).empty());

    // Links can only dangle when built by hand, e.g. from a snapshot.
    auto broken = t;
    broken.nodes.pop_back();
    d = validate(broken, m);
    REQUIRE(d.size() == 1);
    CHECK(d[0].severity == Diagnostic::Severity::error);
}

TEST_CASE("node ids") {
    CHECK(is_valid_node_id("PLC_1"));
    CHECK(is_valid_node_id("SCADA-2"));
    for (const char* bad : {"", "-", "A B", "A;B", "A,B", "A:B", "[A", "A->B"}) {
        CAPTURE(bad);
        CHECK_FALSE(is_valid_node_id(bad));
    }
    CHECK(normalize_id(" plc_1 ") == "PLC_1");
}

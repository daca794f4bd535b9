#include "inp2cpa/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "inp2cpa/attack_studio.hpp"
#include "inp2cpa/error.hpp"
#include "inp2cpa/http_service.hpp"
#include "inp2cpa/json_io.hpp"
#include "inp2cpa/resilience.hpp"
#include "inp2cpa/text.hpp"

namespace inp2cpa {

std::string version_string() { return "inp2cpa 1.0.0"; }

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
}

InpModel load_model(const std::string& path) {
    return parse_inp(read_file(path), fs::path(path).filename().string());
}

// A topology snapshot (.json) or the cyber layer of a .cpa file.
CyberTopology load_topology(const std::string& path) {
    const auto contents = read_file(path);
    if (fs::path(path).extension() == ".cpa") return parse_cpa(contents).topology;
    try {
        auto topo = topology_from_json(nlohmann::json::parse(contents));
        if (topo.provenance.empty()) topo.provenance = fs::path(path).stem().string();
        return topo;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRow, std::string("not a topology snapshot: ") + e.what());
    }
}

void print_control_summary(const InpModel& model, std::ostream& out) {
    if (!model.title.empty()) out << "title: " << text::split(model.title, '\n').front() << '\n';
    out << "elements:";
    for (auto kind : kAllElementKinds) out << ' ' << to_string(kind) << '=' << inventory(model, kind).size();
    out << '\n' << "controls: " << model.controls.size() << '\n';
    for (std::size_t i = 0; i < model.controls.size(); ++i) {
        out << "  C" << (i + 1) << ' ' << format_control(model.controls[i]) << '\n';
    }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_file(path, text);
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Convert EPANET .inp models into cyber-physical attack scenarios (.cpa) and score cyber topologies"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    std::string inp_path, cpa_path, output, format = "table", topology_out;

    auto* parse = app.add_subcommand("parse", "Summarize the controls and elements of an .inp file");
    parse->add_option("inp", inp_path, "EPANET .inp file")->required();
    parse->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

    auto* gen = app.add_subcommand("gen", "Write the baseline .cpa derived from the .inp controls");
    gen->add_option("inp", inp_path, "EPANET .inp file")->required();
    gen->add_option("-o,--output", output, "Output .cpa (default stdout)");
    gen->add_option("--topology-out", topology_out, "Also write the baseline topology snapshot (JSON)");

    std::string kind, target, start, end, value;
    bool offset = false;
    auto* attack = app.add_subcommand("attack", "Append an attack to a .cpa file");
    attack->add_option("cpa", cpa_path, ".cpa file to extend")->required();
    attack->add_option("--inp", inp_path, "Model the scenario was generated from")->required();
    attack->add_option("--kind", kind, "communication | control | sensor | actuator")->required();
    attack->add_option("--target", target, "A->B | C<n> | ELEMENT[:QUANTITY] | ELEMENT");
    attack->add_option("--start", start, "Hours, 'TIME <h>' or '<sensor> ABOVE|BELOW <v>'");
    attack->add_option("--end", end, "As --start, or END");
    attack->add_option("--value", value, "Injected value, forced state or replacement control");
    attack->add_flag("--offset", offset, "Inject the value as an offset to the true reading");
    attack->add_option("-o,--output", output, "Write here instead of rewriting the input");

    std::string source, destination, sensors;
    auto* link = app.add_subcommand("link", "Add a cyberlink to a .cpa file");
    link->add_option("cpa", cpa_path, ".cpa file to extend")->required();
    link->add_option("--source", source, "Sending node")->required();
    link->add_option("--destination", destination, "Receiving node")->required();
    link->add_option("--sensors", sensors, "Comma-separated carried sensors, e.g. T1:LEVEL");
    link->add_option("-o,--output", output, "Write here instead of rewriting the input");

    std::string topology_path, lambda_list = "0.2,1,5", mode = "alg2_max";
    double t_ksd = 0.0;
    std::size_t k_paths = 3, max_paths = 10'000, max_hops = 0;
    bool pairs = false;
    auto* res = app.add_subcommand("resilience", "Score a topology with total graph diversity");
    res->add_option("topology", topology_path, "Topology snapshot (.json) or .cpa")->required();
    res->add_option("--lambda", lambda_list, "Comma-separated lambda values");
    res->add_option("--mode", mode, "alg2_max or eq3_cumulative")
        ->check(CLI::IsMember({"alg2_max", "eq3_cumulative"}));
    res->add_option("--t-ksd", t_ksd, "Diversity threshold in [0,1)");
    res->add_option("--k-paths", k_paths, "Paths summed in eq3_cumulative mode");
    res->add_option("--max-paths", max_paths, "Simple-path budget per vertex pair");
    res->add_option("--max-hops", max_hops, "Longest path considered (0: vertex count)");
    res->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
    res->add_flag("--pairs", pairs, "Also list k_sd and EPD per vertex pair");

    std::string host = "127.0.0.1", snapshot_dir;
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Serve editing sessions over HTTP");
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--snapshot-dir", snapshot_dir, "Persist sessions here and restore them on start");

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*parse) {
            const auto model = load_model(inp_path);
            if (format == "json") {
                out << model_to_json(model).dump(2) << '\n';
            } else {
                print_control_summary(model, out);
            }
        } else if (*gen) {
            const auto model = load_model(inp_path);
            const auto topo = derive_baseline_topology(extract_control_rules(model), model);
            emit(render_cpa(topo, {}), output, out);
            if (!topology_out.empty()) write_file(topology_out, topology_to_json(topo).dump(2) + "\n");
        } else if (*attack) {
            auto kind_value = attack_kind_from_string(kind);
            if (!kind_value) throw Error(ErrorCode::UnknownAttackKind, "unknown attack kind '" + kind + "'");
            const auto model = load_model(inp_path);
            auto scenario = parse_cpa(read_file(cpa_path));
            AttackParams params;
            if (attack->count("--target")) params.target = target;
            if (attack->count("--start")) params.start = start;
            if (attack->count("--end")) params.end = end;
            if (attack->count("--value")) params.value = value;
            params.offset = offset;
            scenario.attacks.push_back(build_attack(*kind_value, params, scenario.topology, model, scenario.attacks));
            write_file(output.empty() ? cpa_path : output,
                       render_cpa(scenario.topology, scenario.attacks, scenario.options));
            out << "added " << scenario.attacks.back().id << '\n';
        } else if (*link) {
            auto scenario = parse_cpa(read_file(cpa_path));
            CyberLink l{source, destination, {}};
            if (!sensors.empty()) {
                for (const auto& item : text::split(sensors, ',')) {
                    auto s = parse_sensor(text::trim(item));
                    if (!s) throw Error(ErrorCode::SensorNotAtSource, "bad sensor '" + item + "'");
                    l.sensors.insert(*s);
                }
            }
            scenario.topology = add_cyber_link(scenario.topology, l);
            write_file(output.empty() ? cpa_path : output,
                       render_cpa(scenario.topology, scenario.attacks, scenario.options));
        } else if (*res) {
            const auto topo = load_topology(topology_path);
            resilience::DiversityParams params;
            params.t_ksd = t_ksd;
            params.k_paths = k_paths;
            params.bounds.max_paths = max_paths;
            if (max_hops > 0) params.bounds.max_hops = max_hops;
            params.mode = *resilience::mode_from_string(mode);
            const auto report =
                resilience::resilience_report(to_logical_graph(topo), parse_lambda_list(lambda_list), params);
            if (format == "json") {
                out << report_to_json(report).dump(2) << '\n';
            } else {
                const auto label = topo.provenance.empty() ? fs::path(topology_path).stem().string() : topo.provenance;
                out << tgd_table(report.lambdas, {{label, report.tgd}});
                if (pairs) out << '\n' << pair_table(report);
            }
        } else if (*serve) {
            std::optional<fs::path> dir;
            if (!snapshot_dir.empty()) dir = snapshot_dir;
            SessionStore store(dir);
            HttpService service(store);
            const int bound = service.bind(host, port);
            if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
            err << "serving on http://" << host << ':' << bound << " (" << store.size() << " restored sessions)\n";
            if (!service.listen()) throw Error(ErrorCode::Io, "server stopped unexpectedly");
        }
    } catch (const Error& e) {
        err << "error: ";
        if (!inp_path.empty() && (e.code() == ErrorCode::MalformedSection || e.code() == ErrorCode::MalformedControl ||
                                  e.code() == ErrorCode::DanglingReference || e.code() == ErrorCode::DuplicateId) &&
            e.line()) {
            err << inp_path << ':' << *e.line() << ": ";
        } else if (!cpa_path.empty() && e.line()) {
            err << cpa_path << ':' << *e.line() << ": ";
        }
        err << to_string(e.code()) << ": " << e.detail() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace inp2cpa

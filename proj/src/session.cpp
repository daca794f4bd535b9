#include "inp2cpa/session.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "inp2cpa/error.hpp"
#include "inp2cpa/json_io.hpp"
#include "inp2cpa/text.hpp"

namespace inp2cpa {

using nlohmann::json;

std::string_view to_string(CommandKind kind) {
    switch (kind) {
    case CommandKind::add_node: return "add_node";
    case CommandKind::remove_node: return "remove_node";
    case CommandKind::add_link: return "add_link";
    case CommandKind::remove_link: return "remove_link";
    case CommandKind::add_attack: return "add_attack";
    case CommandKind::remove_attack: return "remove_attack";
    case CommandKind::set_params: return "set_params";
    }
    return "?";
}

Command parse_command(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string()) {
        throw Error(ErrorCode::BadCommand, "command must be an object with a string 'kind'");
    }
    const auto name = doc.at("kind").get<std::string>();
    for (auto k : {CommandKind::add_node, CommandKind::remove_node, CommandKind::add_link, CommandKind::remove_link,
                   CommandKind::add_attack, CommandKind::remove_attack, CommandKind::set_params}) {
        if (name == to_string(k)) {
            Command c{k, doc.value("payload", json::object())};
            if (!c.payload.is_object()) throw Error(ErrorCode::BadCommand, "payload must be an object");
            return c;
        }
    }
    throw Error(ErrorCode::BadCommand, "unknown command kind '" + name + "'");
}

namespace {

std::string required_string(const json& payload, const char* key) {
    if (!payload.contains(key) || !payload.at(key).is_string()) {
        throw Error(ErrorCode::BadCommand, std::string("payload needs string field '") + key + "'");
    }
    return payload.at(key).get<std::string>();
}

std::optional<std::string> optional_string(const json& payload, const char* key) {
    if (!payload.contains(key) || payload.at(key).is_null()) return std::nullopt;
    const auto& v = payload.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return text::format_number(v.get<double>());
    throw Error(ErrorCode::BadCommand, std::string("field '") + key + "' must be a string or number");
}

std::vector<double> lambdas_from(const json& v) {
    if (!v.is_array()) throw Error(ErrorCode::BadCommand, "lambdas must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw Error(ErrorCode::BadCommand, "lambdas must be an array of numbers");
        out.push_back(x.get<double>());
    }
    if (out.empty()) throw Error(ErrorCode::InvalidParams, "at least one lambda is required");
    for (double l : out) {
        if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidParams, "lambda must be a positive number");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Attacks must keep validating after a topology edit.
void require_attacks_valid(const Session& next) {
    for (const auto& a : next.attacks) {
        auto problems = attack_problems(a, next.topology, &next.model);
        if (!problems.empty()) throw Error(ErrorCode::InUse, problems.front());
    }
}

void apply_in_place(Session& s, const Command& c) {
    const auto& p = c.payload;
    switch (c.kind) {
    case CommandKind::add_node: {
        json doc = {{"nodes", json::array({p})}};
        auto parsed = topology_from_json(doc);
        s.topology = add_cyber_node(s.topology, parsed.nodes.front(), s.model);
        break;
    }
    case CommandKind::remove_node:
        s.topology = remove_cyber_node(s.topology, required_string(p, "id"));
        require_attacks_valid(s);
        break;
    case CommandKind::add_link: {
        json doc = {{"nodes", json::array()}, {"links", json::array({p})}};
        auto parsed = topology_from_json(doc);
        s.topology = add_cyber_link(s.topology, parsed.links.front());
        break;
    }
    case CommandKind::remove_link:
        s.topology = remove_cyber_link(s.topology, required_string(p, "source"), required_string(p, "destination"));
        require_attacks_valid(s);
        break;
    case CommandKind::add_attack: {
        const auto kind_name = required_string(p, "kind");
        auto kind = attack_kind_from_string(kind_name);
        if (!kind) throw Error(ErrorCode::UnknownAttackKind, "unknown attack kind '" + kind_name + "'");
        AttackParams params;
        params.target = optional_string(p, "target");
        params.start = optional_string(p, "start");
        params.end = optional_string(p, "end");
        params.value = optional_string(p, "value");
        params.offset = p.value("offset", false);
        s.attacks.push_back(build_attack(*kind, params, s.topology, s.model, s.attacks));
        break;
    }
    case CommandKind::remove_attack: {
        const auto id = text::to_upper(required_string(p, "id"));
        const auto before = s.attacks.size();
        std::erase_if(s.attacks, [&](const AttackSpec& a) { return a.id == id; });
        if (s.attacks.size() == before) throw Error(ErrorCode::NotFound, "no attack '" + id + "'");
        break;
    }
    case CommandKind::set_params:
        if (p.contains("lambdas")) s.lambdas = lambdas_from(p.at("lambdas"));
        s.params = params_from_json(p, s.params);
        break;
    }
}

}  // namespace

Session create_session(std::string inp_text, std::string id, std::string source_name) {
    Session s;
    s.id = std::move(id);
    s.model = parse_inp(inp_text, std::move(source_name));
    s.inp_text = std::move(inp_text);
    s.topology = derive_baseline_topology(extract_control_rules(s.model), s.model);
    return s;
}

Session apply(const Session& session, const Command& command) {
    Session next = session;
    try {
        apply_in_place(next, command);
    } catch (const Error& e) {
        throw Error(e.code(), std::string(to_string(command.kind)) + ": " + e.detail(), e.line());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadCommand, std::string(to_string(command.kind)) + ": " + e.what());
    }
    ++next.revision;
    return next;
}

resilience::ResilienceReport report(const Session& session, const std::optional<std::vector<double>>& lambdas) {
    return resilience::resilience_report(to_logical_graph(session.topology), lambdas.value_or(session.lambdas),
                                         session.params);
}

std::string export_cpa(const Session& session) { return render_cpa(session.topology, session.attacks); }

json session_to_json(const Session& s) {
    json attacks = json::array();
    for (const auto& a : s.attacks) attacks.push_back(attack_to_json(a));
    json diagnostics = json::array();
    for (const auto& d : validate(s.topology, s.model)) {
        diagnostics.push_back({{"severity", to_string(d.severity)}, {"subject", d.subject}, {"message", d.message}});
    }
    return {{"id", s.id},
            {"revision", s.revision},
            {"model", model_to_json(s.model)},
            {"topology", topology_to_json(s.topology)},
            {"attacks", attacks},
            {"params", params_to_json(s.params)},
            {"lambdas", s.lambdas},
            {"diagnostics", diagnostics}};
}

std::string random_session_id() {
    static thread_local std::mt19937_64 rng{[] {
        std::random_device rd;
        std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
        return std::mt19937_64(seq);
    }()};
    std::ostringstream out;
    out << std::hex;
    for (int i = 0; i < 2; ++i) {
        const auto word = rng();
        for (int shift = 60; shift >= 0; shift -= 4) out << ((word >> shift) & 0xF);
    }
    return out.str();
}

SessionStore::SessionStore(std::optional<std::filesystem::path> snapshot_dir) : snapshot_dir_(std::move(snapshot_dir)) {
    if (snapshot_dir_) {
        std::filesystem::create_directories(*snapshot_dir_);
        restore();
    }
}

Session SessionStore::create(std::string inp_text, std::string source_name) {
    auto entry = std::make_shared<Entry>();
    std::string id;
    {
        std::shared_lock lock(map_mutex_);
        do {
            id = random_session_id();
        } while (sessions_.count(id));
    }
    entry->session = create_session(std::move(inp_text), id, std::move(source_name));
    persist(entry->session);
    Session copy = entry->session;
    std::unique_lock lock(map_mutex_);
    sessions_.emplace(id, std::move(entry));
    return copy;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no session '" + id + "'");
    return it->second;
}

Session SessionStore::get(const std::string& id) const {
    auto entry = find(id);
    std::lock_guard lock(entry->read);
    return entry->session;
}

Session SessionStore::apply(const std::string& id, const Command& command) {
    auto entry = find(id);
    std::lock_guard writer(entry->write);
    Session current;
    {
        std::lock_guard lock(entry->read);
        current = entry->session;
    }
    Session next = inp2cpa::apply(current, command);
    persist(next);
    {
        std::lock_guard lock(entry->read);
        entry->session = next;
    }
    return next;
}

std::size_t SessionStore::size() const {
    std::shared_lock lock(map_mutex_);
    return sessions_.size();
}

void SessionStore::persist(const Session& s) const {
    if (!snapshot_dir_) return;
    const json doc = {{"id", s.id},
                      {"source_name", s.model.source_name},
                      {"inp", s.inp_text},
                      {"topology", topology_to_json(s.topology)},
                      {"cpa", export_cpa(s)},
                      {"params", params_to_json(s.params)},
                      {"lambdas", s.lambdas},
                      {"revision", s.revision}};
    const auto path = *snapshot_dir_ / (s.id + ".json");
    const auto tmp = *snapshot_dir_ / (s.id + ".json.tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << doc.dump(2) << '\n';
        if (!out) throw Error(ErrorCode::Io, "cannot write snapshot " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void SessionStore::restore() {
    for (const auto& file : std::filesystem::directory_iterator(*snapshot_dir_)) {
        if (file.path().extension() != ".json") continue;
        std::ifstream in(file.path(), std::ios::binary);
        const auto doc = json::parse(in);
        auto entry = std::make_shared<Entry>();
        auto& s = entry->session;
        s = create_session(doc.at("inp").get<std::string>(), doc.at("id").get<std::string>(),
                           doc.at("source_name").get<std::string>());
        s.topology = topology_from_json(doc.at("topology"));
        s.attacks = parse_cpa(doc.at("cpa").get<std::string>()).attacks;
        s.params = params_from_json(doc.at("params"), s.params);
        s.lambdas = lambdas_from(doc.at("lambdas"));
        s.revision = doc.at("revision").get<std::uint64_t>();
        sessions_.emplace(s.id, std::move(entry));
    }
}

}  // namespace inp2cpa

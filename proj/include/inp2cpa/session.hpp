#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "inp2cpa/attack_studio.hpp"
#include "inp2cpa/cyber_topology.hpp"
#include "inp2cpa/inp_model.hpp"
#include "inp2cpa/resilience.hpp"

namespace inp2cpa {

struct Session {
    std::string id;
    std::string inp_text;
    InpModel model;
    CyberTopology topology;
    std::vector<AttackSpec> attacks;
    resilience::DiversityParams params;
    std::vector<double> lambdas{0.2, 1.0, 5.0};
    std::uint64_t revision = 0;
};

enum class CommandKind { add_node, remove_node, add_link, remove_link, add_attack, remove_attack, set_params };

std::string_view to_string(CommandKind kind);

struct Command {
    CommandKind kind = CommandKind::add_node;
    nlohmann::json payload = nlohmann::json::object();
};

// {"kind": "add_link", "payload": {...}}; throws BadCommand.
Command parse_command(const nlohmann::json& doc);

// Parses the model and derives the baseline topology; revision 0.
Session create_session(std::string inp_text, std::string id, std::string source_name = "upload.inp");

// Pure: returns the next state with revision + 1, or throws leaving `session`
// untouched. Errors keep their code and gain the command name as context.
Session apply(const Session& session, const Command& command);

// Report over the session's topology; `lambdas` overrides the session list.
resilience::ResilienceReport report(const Session& session, const std::optional<std::vector<double>>& lambdas = {});

// Same bytes as render_cpa on the session's topology and attacks.
std::string export_cpa(const Session& session);

nlohmann::json session_to_json(const Session& session);

// Many sessions; mutations of one session are serialized, readers always see
// a whole revision. With a snapshot directory every revision is written
// through to <dir>/<id>.json and restored on construction.
class SessionStore {
public:
    explicit SessionStore(std::optional<std::filesystem::path> snapshot_dir = std::nullopt);

    Session create(std::string inp_text, std::string source_name = "upload.inp");
    Session get(const std::string& id) const;
    Session apply(const std::string& id, const Command& command);
    std::size_t size() const;

private:
    struct Entry {
        std::mutex write;
        mutable std::mutex read;
        Session session;
    };

    std::shared_ptr<Entry> find(const std::string& id) const;
    void persist(const Session& session) const;
    void restore();

    std::optional<std::filesystem::path> snapshot_dir_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

// 128-bit random hex token.
std::string random_session_id();

}  // namespace inp2cpa

#include "inp2cpa/http_service.hpp"

#include <filesystem>

#include <httplib.h>

#include "inp2cpa/error.hpp"
#include "inp2cpa/json_io.hpp"

namespace inp2cpa {

using nlohmann::json;

namespace {

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::MalformedSection:
    case ErrorCode::MalformedControl:
    case ErrorCode::MalformedRow:
    case ErrorCode::BadCommand: return 400;
    default: return 422;
    }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
    json body = {{"code", to_string(e.code())}, {"message", e.detail()}};
    if (e.line()) body["line"] = *e.line();
    send_json(res, body, status_for(e.code()));
}

// Runs a handler, mapping library and JSON failures to error payloads.
template <typename F>
httplib::Server::Handler guarded(F&& f) {
    return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const json::exception& e) {
            send_error(res, Error(ErrorCode::BadCommand, e.what()));
        }
    };
}

std::string attachment_name(const Session& s) {
    auto stem = std::filesystem::path(s.model.source_name).stem().string();
    if (stem.empty()) stem = "scenario";
    return stem + ".cpa";
}

}  // namespace

HttpService::HttpService(SessionStore& store) : store_(store), server_(std::make_unique<httplib::Server>()) {
    routes();
}

HttpService::~HttpService() = default;

void HttpService::routes() {
    auto& srv = *server_;
    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Expose-Headers", "X-Revision, Content-Disposition"}});
    srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    srv.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto name = req.has_param("name") ? req.get_param_value("name") : std::string("upload.inp");
        const auto s = store_.create(req.body, name);
        send_json(res, {{"id", s.id}, {"revision", s.revision}}, 201);
    }));

    srv.Get(R"(/sessions/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        send_json(res, session_to_json(store_.get(req.matches[1])));
    }));

    srv.Post(R"(/sessions/([0-9a-f]+)/commands)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto command = parse_command(json::parse(req.body));
        send_json(res, session_to_json(store_.apply(req.matches[1], command)));
    }));

    srv.Get(R"(/sessions/([0-9a-f]+)/report)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto s = store_.get(req.matches[1]);
        std::optional<std::vector<double>> lambdas;
        if (req.has_param("lambda")) lambdas = parse_lambda_list(req.get_param_value("lambda"));
        auto body = report_to_json(report(s, lambdas));
        body["revision"] = s.revision;
        send_json(res, body);
    }));

    srv.Get(R"(/sessions/([0-9a-f]+)/export\.cpa)", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const auto s = store_.get(req.matches[1]);
        res.set_header("Content-Disposition", "attachment; filename=\"" + attachment_name(s) + "\"");
        res.set_header("X-Revision", std::to_string(s.revision));
        res.set_content(export_cpa(s), "text/plain");
    }));
}

int HttpService::bind(const std::string& host, int port) {
    if (port == 0) return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpService::listen() { return server_->listen_after_bind(); }

void HttpService::stop() { server_->stop(); }

}  // namespace inp2cpa

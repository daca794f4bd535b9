#pragma once

#include <memory>
#include <string>

#include "inp2cpa/session.hpp"

namespace httplib {
class Server;
}

namespace inp2cpa {

// HTTP front for a SessionStore:
//   POST /sessions                      body: .inp text  -> {"id", "revision"}
//   GET  /sessions/{id}                 full state
//   POST /sessions/{id}/commands        one Command      -> full state
//   GET  /sessions/{id}/report?lambda=  resilience report
//   GET  /sessions/{id}/export.cpa      .cpa attachment
// Failures answer {"code", "message", "line"?}.
class HttpService {
public:
    explicit HttpService(SessionStore& store);
    ~HttpService();

    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    // Binds host:port (port 0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    // Blocks serving requests until stop().
    bool listen();
    void stop();

private:
    void routes();

    SessionStore& store_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace inp2cpa

#pragma once

// HTTP front end over api::Api.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>

#include "mathwb/api.hpp"

namespace mathwb::service {

struct ServiceConfig {
    std::filesystem::path snapshot;
    int port = 8080;
    std::string host = "0.0.0.0";
    api::Config api;

    /// MATHWB_SNAPSHOT (required), MATHWB_PORT plus the api::Config
    /// variables. Throws std::invalid_argument.
    static ServiceConfig from_env();
};

class Service {
public:
    /// `log` receives one JSON line per request; it must outlive the service.
    Service(std::shared_ptr<api::Api> api, std::ostream& log);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds `host:port` (port 0 picks a free port) and returns the bound
    /// port. Throws std::runtime_error when binding fails.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Requires a successful bind().
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mathwb::service

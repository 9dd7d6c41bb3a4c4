#include "mathwb/service.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <ostream>

#include "httplib.h"

namespace mathwb::service {

using nlohmann::ordered_json;

ServiceConfig ServiceConfig::from_env() {
    ServiceConfig c;
    const char* snapshot = std::getenv("MATHWB_SNAPSHOT");
    if (!snapshot || !*snapshot) throw std::invalid_argument("MATHWB_SNAPSHOT is not set");
    c.snapshot = snapshot;
    if (const char* port = std::getenv("MATHWB_PORT"); port && *port) {
        char* end = nullptr;
        const long p = std::strtol(port, &end, 10);
        if (*end != '\0' || p < 0 || p > 65535) throw std::invalid_argument("MATHWB_PORT: bad port");
        c.port = static_cast<int>(p);
    }
    c.api = api::Config::from_env();
    return c;
}

struct Service::Impl {
    std::shared_ptr<api::Api> api;
    std::ostream& log;
    std::mutex log_mu;
    httplib::Server server;

    Impl(std::shared_ptr<api::Api> a, std::ostream& l) : api(std::move(a)), log(l) {}

    static std::optional<std::string> param(const httplib::Request& req, const char* name) {
        if (!req.has_param(name)) return std::nullopt;
        return req.get_param_value(name);
    }

    static void send(httplib::Response& res, const api::Response& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    }

    void routes() {
        server.Get(R"(/v1/page/([^/]+)/html)", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, api->page(req.matches[1].str(), param(req, "lang"), true));
        });
        server.Get(R"(/v1/page/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, api->page(req.matches[1].str(), param(req, "lang"), false));
        });
        server.Get("/v1/render", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, api->render(param(req, "tex"), param(req, "format")));
        });
        server.Get("/v1/lookup", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, api->lookup(param(req, "tex")));
        });
        server.Get("/v1/suggest", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, api->suggest(param(req, "tex"), param(req, "limit"), param(req, "lang")));
        });
        server.Post(R"(/v1/items/([^/]+)/parts)", [this](const httplib::Request& req, httplib::Response& res) {
            send(res, api->add_part(req.matches[1].str(), req.body));
        });
        server.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
            send(res, api->health());
        });
        server.set_read_timeout(std::chrono::seconds(30));
        server.set_write_timeout(std::chrono::seconds(30));
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) {
                const char* code = res.status == 404 ? "not_found" : "http_error";
                res.set_content(ordered_json{{"error", code}}.dump(), "application/json");
            }
        });
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string detail = "unknown";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                detail = e.what();
            } catch (...) {
            }
            res.status = 500;
            res.set_content(ordered_json{{"error", "internal"}, {"detail", detail}}.dump(), "application/json");
        });
        server.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
            ordered_json line{{"method", req.method}, {"path", req.path}, {"status", res.status},
                              {"bytes", res.body.size()}};
            std::lock_guard lock(log_mu);
            log << line.dump() << '\n';
            log.flush();
        });
    }
};

Service::Service(std::shared_ptr<api::Api> api, std::ostream& log)
    : impl_(std::make_unique<Impl>(std::move(api), log)) {
    impl_->routes();
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host.c_str());
        if (bound < 0) throw std::runtime_error("cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host.c_str(), port)) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void Service::listen() {
    if (!impl_->server.listen_after_bind()) throw std::runtime_error("listen failed");
}

void Service::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const {
    impl_->server.wait_until_ready();
}

}  // namespace mathwb::service

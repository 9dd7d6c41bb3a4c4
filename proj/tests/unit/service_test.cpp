#include <gtest/gtest.h>

#include <atomic>
#include <future>

#include "harness.hpp"
#include "mathwb/mathml.hpp"
#include "testing.hpp"

namespace mathwb::service {
namespace {

using nlohmann::json;

class ServiceTest : public ::testing::Test {
protected:
    void SetUp() override {
        snapshot_ = std::make_unique<testing::TempSnapshot>(testing::snapshot_fixture());
        api_ = std::make_shared<api::Api>(kb::KnowledgeBase::open(snapshot_->path()));
        service_ = std::make_unique<testing::RunningService>(api_);
    }
    void TearDown() override {
        service_.reset();
        snapshot_.reset();
    }

    httplib::Result get(const std::string& path, const httplib::Params& params = {}) {
        auto c = service_->client();
        return c.Get(path, params, httplib::Headers{});
    }

    std::unique_ptr<testing::TempSnapshot> snapshot_;
    std::shared_ptr<api::Api> api_;
    std::unique_ptr<testing::RunningService> service_;
};

TEST_F(ServiceTest, PageJson) {
    auto res = get("/v1/page/Q35875", {{"lang", "en"}});
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
    const json body = json::parse(res->body);
    EXPECT_EQ(body["label"], "mass–energy equivalence");
    EXPECT_EQ(body["parts"].size(), 3u);
    EXPECT_EQ(res->body, api_->page("Q35875", "en", false).body);
}

TEST_F(ServiceTest, PageDefaultsToConfiguredLanguage) {
    auto res = get("/v1/page/Q35875");
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body)["lang"], "en");
}

TEST_F(ServiceTest, PageErrors) {
    auto unknown = get("/v1/page/Q0");
    ASSERT_TRUE(unknown);
    EXPECT_EQ(unknown->status, 404);
    EXPECT_EQ(unknown->body, R"({"error":"unknown_qid"})");

    auto bad_qid = get("/v1/page/X1");
    EXPECT_EQ(bad_qid->status, 422);
    EXPECT_EQ(json::parse(bad_qid->body)["error"], "bad_qid");

    auto bad_lang = get("/v1/page/Q35875", {{"lang", "EN!"}});
    EXPECT_EQ(bad_lang->status, 422);
    EXPECT_EQ(json::parse(bad_lang->body)["error"], "bad_lang");

    auto no_formula = get("/v1/page/Q2111");
    EXPECT_EQ(no_formula->status, 422);
    EXPECT_EQ(json::parse(no_formula->body)["error"], "no_defining_formula");
}

TEST_F(ServiceTest, PageHtml) {
    auto res = get("/v1/page/Q35875/html", {{"lang", "en"}});
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type"), "text/html; charset=utf-8");
    EXPECT_NE(res->body.find("<h1 lang=\"en\">mass–energy equivalence</h1>"), std::string::npos);
    EXPECT_EQ(get("/v1/page/Q0/html")->status, 404);
}

TEST_F(ServiceTest, Render) {
    auto mathml = get("/v1/render", {{"tex", "E=mc^2"}, {"format", "mathml"}});
    ASSERT_TRUE(mathml);
    EXPECT_EQ(mathml->status, 200);
    EXPECT_EQ(mathml->body, mathml::render_mathml(tex::parse("E=mc^2")));

    auto text = get("/v1/render", {{"tex", "E=mc^2"}, {"format", "text"}});
    EXPECT_EQ(text->body, "E equals m c to the power 2");

    auto ast = get("/v1/render", {{"tex", "x"}, {"format", "ast"}});
    EXPECT_EQ(json::parse(ast->body)["kind"], "identifier");

    auto bad = get("/v1/render", {{"tex", "\\frak x"}});
    EXPECT_EQ(bad->status, 422);
    const json err = json::parse(bad->body);
    EXPECT_EQ(err["error"], "unknown_control_sequence");
    EXPECT_EQ(err["offset"], 0);
    EXPECT_EQ(err["detail"], "frak");

    EXPECT_EQ(get("/v1/render", {{"tex", "x"}, {"format", "svg"}})->status, 422);
    EXPECT_EQ(get("/v1/render")->status, 400);
}

TEST_F(ServiceTest, RenderRawEncodedQuery) {
    auto c = service_->client();
    auto res = c.Get("/v1/render?tex=E%3Dmc%5E2&format=mathml");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, mathml::render_mathml(tex::parse("E=mc^2")));
}

TEST_F(ServiceTest, Lookup) {
    auto hit = get("/v1/lookup", {{"tex", "E = mc^{2}"}});
    EXPECT_EQ(hit->status, 200);
    EXPECT_EQ(hit->body, R"({"qid":"Q35875"})");
    auto miss = get("/v1/lookup", {{"tex", "zzz"}});
    EXPECT_EQ(miss->status, 404);
    EXPECT_EQ(get("/v1/lookup", {{"tex", "{"}})->status, 422);
}

TEST_F(ServiceTest, Suggest) {
    auto res = get("/v1/suggest", {{"tex", "m"}, {"limit", "2"}, {"lang", "de"}});
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const json body = json::parse(res->body);
    ASSERT_EQ(body.size(), 1u);
    EXPECT_EQ(body[0]["qid"], "Q11423");
    EXPECT_EQ(body[0]["label"], "Masse");
    EXPECT_EQ(body[0]["basis"], "exact");
    EXPECT_EQ(get("/v1/suggest", {{"tex", "m"}, {"limit", "0"}})->status, 422);
    EXPECT_EQ(get("/v1/suggest", {{"tex", "m"}, {"limit", "abc"}})->status, 422);
}

TEST_F(ServiceTest, AddPart) {
    auto c = service_->client();
    const std::string body = R"({"fragment":"E","part_qid":"Q46276"})";
    auto created = c.Post("/v1/items/Q35875/parts", body, "application/json");
    ASSERT_TRUE(created);
    EXPECT_EQ(created->status, 201);
    const json parts = json::parse(created->body);
    ASSERT_EQ(parts.size(), 4u);
    EXPECT_EQ(parts[3], json::parse(R"({"qid":"Q46276","fragment":"E"})"));

    EXPECT_EQ(json::parse(get("/v1/page/Q35875")->body)["parts"].size(), 4u);
    EXPECT_EQ(kb::load_snapshot(snapshot_->path()).get_item(Qid::from("Q35875"))->parts.size(), 4u);

    auto dup = c.Post("/v1/items/Q35875/parts", R"({"fragment":"{E} ","part_qid":"Q46276"})", "application/json");
    EXPECT_EQ(dup->status, 409);
    EXPECT_EQ(c.Post("/v1/items/Q0/parts", body, "application/json")->status, 404);
    EXPECT_EQ(c.Post("/v1/items/Q35875/parts", "{bad", "application/json")->status, 400);
    EXPECT_EQ(c.Post("/v1/items/Q35875/parts", R"({"fragment":"\\frak","part_qid":"Q1"})", "application/json")->status,
              422);
}

TEST_F(ServiceTest, SuggestionsSeeNewParts) {
    auto before = json::parse(get("/v1/suggest", {{"tex", "\\Omega"}})->body);
    EXPECT_TRUE(before.empty());
    auto c = service_->client();
    ASSERT_EQ(c.Post("/v1/items/Q35875/parts", R"({"fragment":"\\Omega","part_qid":"Q2111"})", "application/json")
                  ->status,
              201);
    auto after = json::parse(get("/v1/suggest", {{"tex", "\\Omega"}})->body);
    ASSERT_EQ(after.size(), 1u);
    EXPECT_EQ(after[0]["qid"], "Q2111");
}

TEST_F(ServiceTest, Health) {
    auto res = get("/v1/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, R"({"status":"ok","items":33})");
}

TEST_F(ServiceTest, UnknownRouteIsJson) {
    auto res = get("/v2/nothing");
    EXPECT_EQ(res->status, 404);
    EXPECT_EQ(json::parse(res->body)["error"], "not_found");
}

TEST_F(ServiceTest, RequestLog) {
    get("/v1/health");
    get("/v1/page/Q0");
    service_->stop();
    std::istringstream lines(service_->log());
    std::string line;
    std::vector<json> entries;
    while (std::getline(lines, line)) entries.push_back(json::parse(line));
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_EQ(entries[0]["path"], "/v1/health");
    EXPECT_EQ(entries[0]["status"], 200);
    EXPECT_EQ(entries[1]["status"], 404);
    EXPECT_EQ(entries[1]["method"], "GET");
}

TEST_F(ServiceTest, IdempotentAndConcurrentGets) {
    const std::string first = get("/v1/page/Q1899432", {{"lang", "en"}})->body;
    std::vector<std::future<std::string>> futures;
    for (int i = 0; i < 32; ++i) {
        futures.push_back(std::async(std::launch::async, [this] {
            auto res = get("/v1/page/Q1899432", {{"lang", "en"}});
            return res ? res->body : std::string("<failed>");
        }));
    }
    for (auto& f : futures) EXPECT_EQ(f.get(), first);
}

class RemoteBackedApi : public ::testing::Test {
protected:
    void SetUp() override {
        remote_.Get(R"(/entities/items/(Q\d+))", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            const std::string qid = req.matches[1];
            if (qid == "Q77") {
                res.set_content(
                    R"({"id":"Q77","labels":{"fr":"loi"},"statements":{"P2534":[{"value":{"content":"E=mc^2"}}],)"
                    R"("P527":[{"value":{"content":"Q2111"},"qualifiers":[{"property":{"id":"P7235"},)"
                    R"("value":{"content":"c"}}]}]}})",
                    "application/json");
            } else if (qid == "Q78") {
                res.set_content(R"({"id":"Q78"})", "application/json");
            } else {
                res.status = 404;
            }
        });
        port_ = remote_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { remote_.listen_after_bind(); });
        remote_.wait_until_ready();
    }
    void TearDown() override {
        remote_.stop();
        thread_.join();
    }

    api::Api make_api(std::chrono::seconds ttl) {
        api::Config config;
        config.remote_url = "http://127.0.0.1:" + std::to_string(port_);
        config.cache_ttl = ttl;
        return api::Api(kb::KnowledgeBase::open(testing::snapshot_fixture()), config);
    }

    httplib::Server remote_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> hits_{0};
};

TEST_F(RemoteBackedApi, LocalMissIsFetchedAndCached) {
    api::Api api = make_api(std::chrono::seconds(300));
    const auto first = api.page("Q77", "en", false);
    ASSERT_EQ(first.status, 200) << first.body;
    const json body = json::parse(first.body);
    EXPECT_EQ(body["label"], "loi");
    EXPECT_EQ(body["parts"][0]["label"], "speed of light");
    EXPECT_EQ(hits_.load(), 1);
    EXPECT_EQ(api.page("Q77", "en", false).body, first.body);
    EXPECT_EQ(hits_.load(), 1);

    // Local items never reach the remote.
    EXPECT_EQ(api.page("Q35875", "en", false).status, 200);
    EXPECT_EQ(hits_.load(), 1);
}

TEST_F(RemoteBackedApi, ExpiredEntriesAreRefetched) {
    api::Api api = make_api(std::chrono::seconds(0));
    api.page("Q77", "en", false);
    api.page("Q77", "en", false);
    EXPECT_EQ(hits_.load(), 2);
}

TEST_F(RemoteBackedApi, RemoteFailures) {
    api::Api api = make_api(std::chrono::seconds(300));
    EXPECT_EQ(api.page("Q79", "en", false).status, 404);
    const auto bad = api.page("Q78", "en", false);
    EXPECT_EQ(bad.status, 502);
    EXPECT_EQ(json::parse(bad.body)["error"], "remote_error");
}

TEST(ServiceConfig, FromEnvironment) {
    ::unsetenv("MATHWB_SNAPSHOT");
    EXPECT_THROW(ServiceConfig::from_env(), std::invalid_argument);
    ::setenv("MATHWB_SNAPSHOT", "/tmp/x.jsonl", 1);
    ::setenv("MATHWB_PORT", "9090", 1);
    ::setenv("MATHWB_DEFAULT_LANG", "de", 1);
    ::setenv("MATHWB_CACHE_TTL_SECS", "12", 1);
    const ServiceConfig c = ServiceConfig::from_env();
    EXPECT_EQ(c.port, 9090);
    EXPECT_EQ(c.api.default_lang, "de");
    EXPECT_EQ(c.api.cache_ttl, std::chrono::seconds(12));
    ::setenv("MATHWB_PORT", "nope", 1);
    EXPECT_THROW(ServiceConfig::from_env(), std::invalid_argument);
    ::unsetenv("MATHWB_PORT");
    ::unsetenv("MATHWB_DEFAULT_LANG");
    ::unsetenv("MATHWB_CACHE_TTL_SECS");
    const ServiceConfig d = ServiceConfig::from_env();
    EXPECT_EQ(d.port, 8080);
    EXPECT_EQ(d.api.default_lang, "en");
    EXPECT_EQ(d.api.cache_ttl, std::chrono::seconds(300));
    ::unsetenv("MATHWB_SNAPSHOT");
}

}  // namespace
}  // namespace mathwb::service

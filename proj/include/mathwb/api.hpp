#pragma once

// Request handling shared by the HTTP service and the CLI. Every method
// returns the exact payload both front ends emit.

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "mathwb/kb.hpp"
#include "mathwb/page.hpp"
#include "mathwb/remote.hpp"
#include "mathwb/suggest.hpp"

namespace mathwb::api {

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

struct Config {
    std::string default_lang = "en";
    std::optional<std::string> remote_url;
    std::chrono::seconds cache_ttl{300};
    std::string wiki = "enwiki";
    kb::PropertyConfig properties;
    suggest::Weights weights;
    std::size_t default_limit = 10;
    std::size_t max_limit = 100;

    /// Reads MATHWB_DEFAULT_LANG, MATHWB_REMOTE_URL, MATHWB_CACHE_TTL_SECS.
    /// Throws std::invalid_argument on malformed values.
    static Config from_env();
};

nlohmann::ordered_json ast_to_json(const tex::MathNode& node);

class Api {
public:
    Api(std::shared_ptr<kb::KnowledgeBase> kb, Config config = {});

    Response page(std::string_view qid, std::optional<std::string> lang, bool html);
    Response render(std::optional<std::string> tex, std::optional<std::string> format);
    Response lookup(std::optional<std::string> tex);
    Response suggest(std::optional<std::string> tex, std::optional<std::string> limit,
                     std::optional<std::string> lang);
    Response add_part(std::string_view qid, std::string_view body);
    Response health();

    const Config& config() const noexcept { return config_; }
    const std::shared_ptr<kb::KnowledgeBase>& knowledge_base() const noexcept { return kb_; }

private:
    struct CachedItem {
        kb::Item item;
        std::chrono::steady_clock::time_point fetched;
    };

    std::shared_ptr<const suggest::SuggestionIndex> index();
    std::optional<kb::Item> remote_item(const Qid& qid);

    std::shared_ptr<kb::KnowledgeBase> kb_;
    Config config_;

    std::mutex index_mu_;
    std::shared_ptr<const suggest::SuggestionIndex> index_;
    std::uint64_t index_version_ = 0;

    std::mutex cache_mu_;
    std::map<Qid, CachedItem> cache_;
};

}  // namespace mathwb::api

#include "mathwb/api.hpp"

#include <charconv>
#include <cstdlib>

#include "mathwb/mathml.hpp"

namespace mathwb::api {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kJson = "application/json";

Response json_response(int status, const ordered_json& body) {
    return Response{status, kJson, body.dump()};
}

Response error(int status, std::string_view code, std::optional<std::string> detail = std::nullopt) {
    ordered_json body{{"error", code}};
    if (detail) body["detail"] = *detail;
    return json_response(status, body);
}

Response tex_error(const tex::TexError& e) {
    ordered_json body{{"error", tex::error_code_name(e.code())}, {"offset", e.offset()},
                      {"detail", e.detail()}};
    return json_response(422, body);
}

std::optional<std::size_t> parse_size(std::string_view text) {
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) return std::nullopt;
    return value;
}

std::string_view kind_name(tex::NodeKind kind) {
    switch (kind) {
        case tex::NodeKind::Row: return "row";
        case tex::NodeKind::Identifier: return "identifier";
        case tex::NodeKind::Number: return "number";
        case tex::NodeKind::Operator: return "operator";
        case tex::NodeKind::Fraction: return "fraction";
        case tex::NodeKind::Sqrt: return "sqrt";
        case tex::NodeKind::Script: return "script";
        case tex::NodeKind::Text: return "text";
    }
    return "row";
}

std::string_view variant_name(tex::IdentifierVariant v) {
    switch (v) {
        case tex::IdentifierVariant::Plain: return "plain";
        case tex::IdentifierVariant::Calligraphic: return "calligraphic";
        case tex::IdentifierVariant::Greek: return "greek";
    }
    return "plain";
}

}  // namespace

Config Config::from_env() {
    Config c;
    if (const char* lang = std::getenv("MATHWB_DEFAULT_LANG"); lang && *lang) {
        if (!kb::is_language_code(lang)) throw std::invalid_argument("MATHWB_DEFAULT_LANG: bad language code");
        c.default_lang = lang;
    }
    if (const char* url = std::getenv("MATHWB_REMOTE_URL"); url && *url) c.remote_url = url;
    if (const char* ttl = std::getenv("MATHWB_CACHE_TTL_SECS"); ttl && *ttl) {
        auto v = parse_size(ttl);
        if (!v) throw std::invalid_argument("MATHWB_CACHE_TTL_SECS: not a non-negative integer");
        c.cache_ttl = std::chrono::seconds(*v);
    }
    return c;
}

ordered_json ast_to_json(const tex::MathNode& node) {
    ordered_json j;
    j["kind"] = kind_name(node.kind());
    j["tex"] = tex::canonical_tex(node);
    switch (node.kind()) {
        case tex::NodeKind::Identifier:
            j["value"] = node.value();
            j["variant"] = variant_name(node.variant());
            break;
        case tex::NodeKind::Number:
        case tex::NodeKind::Operator:
        case tex::NodeKind::Text:
            j["value"] = node.value();
            break;
        case tex::NodeKind::Script:
            j["has_sub"] = node.has_sub();
            j["has_sup"] = node.has_sup();
            break;
        default:
            break;
    }
    if (!node.children().empty()) {
        j["children"] = ordered_json::array();
        for (const auto& c : node.children()) j["children"].push_back(ast_to_json(c));
    }
    return j;
}

Api::Api(std::shared_ptr<kb::KnowledgeBase> kb, Config config)
    : kb_(std::move(kb)), config_(std::move(config)) {}

std::shared_ptr<const suggest::SuggestionIndex> Api::index() {
    std::lock_guard lock(index_mu_);
    const std::uint64_t version = kb_->version();
    if (!index_ || index_version_ != version) {
        index_ = std::make_shared<const suggest::SuggestionIndex>(suggest::SuggestionIndex::build(*kb_->snapshot()));
        index_version_ = version;
    }
    return index_;
}

std::optional<kb::Item> Api::remote_item(const Qid& qid) {
    if (!config_.remote_url) return std::nullopt;
    const auto now = std::chrono::steady_clock::now();
    {
        std::lock_guard lock(cache_mu_);
        if (auto it = cache_.find(qid); it != cache_.end() && now - it->second.fetched < config_.cache_ttl) {
            return it->second.item;
        }
    }
    try {
        kb::Item item = kb::fetch_remote(qid, *config_.remote_url, config_.properties);
        std::lock_guard lock(cache_mu_);
        cache_.insert_or_assign(qid, CachedItem{item, now});
        return item;
    } catch (const kb::RemoteError& e) {
        if (e.code() == kb::RemoteErrorCode::NotFound) return std::nullopt;
        throw;
    }
}

Response Api::page(std::string_view qid_text, std::optional<std::string> lang, bool html) {
    auto qid = Qid::parse(qid_text);
    if (!qid) return error(422, "bad_qid", "'" + std::string(qid_text) + "' is not a qid");
    const std::string language = lang.value_or(config_.default_lang);
    if (!kb::is_language_code(language)) return error(422, "bad_lang", "'" + language + "' is not a language code");

    page::PageOptions options;
    options.wiki = config_.wiki;
    if (config_.remote_url) options.fallback = [this](const Qid& q) { return remote_item(q); };

    try {
        const page::PageModel model = page::build_page_model(*qid, language, *kb_->snapshot(), options);
        if (html) return Response{200, "text/html; charset=utf-8", page::render_page_html(model)};
        return json_response(200, page::page_to_json(model));
    } catch (const page::PageError& e) {
        if (e.code() == page::PageErrorCode::UnknownQid) return error(404, "unknown_qid");
        return error(422, "no_defining_formula", e.what());
    } catch (const kb::RemoteError& e) {
        return error(502, "remote_error", e.what());
    } catch (const tex::TexError& e) {
        return tex_error(e);
    } catch (const kb::KbError& e) {
        return error(422, "invalid_fragment", e.what());
    }
}

Response Api::render(std::optional<std::string> tex, std::optional<std::string> format) {
    if (!tex) return error(400, "missing_parameter", "tex");
    const std::string fmt = format.value_or("mathml");
    if (fmt != "mathml" && fmt != "text" && fmt != "ast") {
        return error(422, "bad_format", "format must be mathml, text or ast");
    }
    try {
        const tex::FormulaAst ast = tex::parse(*tex);
        if (fmt == "mathml") return Response{200, "application/mathml+xml; charset=utf-8", mathml::render_mathml(ast)};
        if (fmt == "text") return Response{200, "text/plain; charset=utf-8", mathml::render_alt_text(ast)};
        return json_response(200, ast_to_json(ast.root));
    } catch (const tex::TexError& e) {
        return tex_error(e);
    }
}

Response Api::lookup(std::optional<std::string> tex) {
    if (!tex) return error(400, "missing_parameter", "tex");
    try {
        if (auto qid = kb_->snapshot()->lookup_by_formula(*tex)) {
            return json_response(200, ordered_json{{"qid", qid->str()}});
        }
        return error(404, "not_found");
    } catch (const tex::TexError& e) {
        return tex_error(e);
    }
}

Response Api::suggest(std::optional<std::string> tex, std::optional<std::string> limit,
                      std::optional<std::string> lang) {
    if (!tex) return error(400, "missing_parameter", "tex");
    std::size_t n = config_.default_limit;
    if (limit) {
        auto v = parse_size(*limit);
        if (!v || *v < 1 || *v > config_.max_limit) {
            return error(422, "bad_limit", "limit must be an integer in [1, " + std::to_string(config_.max_limit) + "]");
        }
        n = *v;
    }
    const std::string language = lang.value_or(config_.default_lang);
    if (!kb::is_language_code(language)) return error(422, "bad_lang", "'" + language + "' is not a language code");

    try {
        const tex::FormulaAst element = tex::parse(*tex);
        const auto idx = index();
        const auto snap = kb_->snapshot();
        ordered_json out = ordered_json::array();
        for (const auto& s : idx->suggest(element, n, config_.weights)) {
            ordered_json row{{"qid", s.qid.str()}, {"score", s.score}, {"basis", suggest::basis_name(s.basis)}};
            const kb::Item* item = snap->get_item(s.qid);
            auto label = item ? kb::pick_language(item->labels, language) : std::nullopt;
            row["label"] = label ? ordered_json(label->text) : ordered_json(nullptr);
            row["label_lang"] = label ? ordered_json(label->lang) : ordered_json(nullptr);
            out.push_back(std::move(row));
        }
        return json_response(200, out);
    } catch (const tex::TexError& e) {
        return tex_error(e);
    }
}

Response Api::add_part(std::string_view qid_text, std::string_view body) {
    auto qid = Qid::parse(qid_text);
    if (!qid) return error(422, "bad_qid", "'" + std::string(qid_text) + "' is not a qid");
    json request;
    try {
        request = json::parse(body);
    } catch (const json::exception& e) {
        return error(400, "bad_json", e.what());
    }
    if (!request.is_object() || !request.contains("fragment") || !request["fragment"].is_string() ||
        !request.contains("part_qid") || !request["part_qid"].is_string()) {
        return error(422, "bad_request", "expected {\"fragment\": string, \"part_qid\": string}");
    }
    auto part_qid = Qid::parse(request["part_qid"].get<std::string>());
    if (!part_qid) return error(422, "bad_qid", "part_qid is not a qid");
    const std::string fragment = request["fragment"].get<std::string>();
    if (fragment.empty()) return error(422, "invalid_fragment", "fragment is empty");

    try {
        const kb::Item updated = kb_->put_part(*qid, fragment, *part_qid);
        ordered_json parts = ordered_json::array();
        for (const auto& p : updated.parts) parts.push_back(ordered_json{{"qid", p.part_qid.str()}, {"fragment", p.fragment}});
        return json_response(201, parts);
    } catch (const kb::KbError& e) {
        switch (e.code()) {
            case kb::KbErrorCode::UnknownQid: return error(404, "unknown_qid");
            case kb::KbErrorCode::DuplicatePart: return error(409, "duplicate_part", e.what());
            case kb::KbErrorCode::InvalidFragment: return error(422, "invalid_fragment", e.what());
            default: return error(500, "storage_error", e.what());
        }
    }
}

Response Api::health() {
    return json_response(200, ordered_json{{"status", "ok"}, {"items", kb_->snapshot()->size()}});
}

}  // namespace mathwb::api

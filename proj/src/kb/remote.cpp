#include "mathwb/remote.hpp"

#include "httplib.h"

namespace mathwb::kb {

using nlohmann::json;

namespace {

[[noreturn]] void mapping_error(const std::string& detail) {
    throw RemoteError(RemoteErrorCode::MappingError, "mapping error: " + detail);
}

std::map<std::string, std::string> text_map(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_object()) mapping_error(std::string("missing ") + key + " object");
    std::map<std::string, std::string> out;
    for (const auto& [lang, value] : it->items()) {
        // Older entity JSON nests {"language": .., "value": ..}.
        if (value.is_string()) {
            out.emplace(lang, value.get<std::string>());
        } else if (value.is_object() && value.contains("value") && value["value"].is_string()) {
            out.emplace(lang, value["value"].get<std::string>());
        } else {
            mapping_error(std::string(key) + "." + lang + " is not a string");
        }
        if (!is_language_code(lang)) mapping_error("bad language code '" + lang + "'");
    }
    return out;
}

const json* statements_for(const json& doc, const std::string& property) {
    auto st = doc.find("statements");
    if (st == doc.end()) return nullptr;
    if (!st->is_object()) mapping_error("statements is not an object");
    auto it = st->find(property);
    if (it == st->end()) return nullptr;
    if (!it->is_array()) mapping_error("statements." + property + " is not an array");
    return &*it;
}

// `content` of a statement or qualifier value, when it has one.
std::optional<std::string> value_content(const json& node) {
    auto v = node.find("value");
    if (v == node.end() || !v->is_object()) return std::nullopt;
    auto c = v->find("content");
    if (c == v->end()) return std::nullopt;
    if (c->is_string()) return c->get<std::string>();
    if (c->is_object() && c->contains("id") && (*c)["id"].is_string()) return (*c)["id"].get<std::string>();
    return std::nullopt;
}

Qid content_qid(const std::optional<std::string>& content, const std::string& property) {
    if (!content) mapping_error(property + " statement without value");
    auto q = Qid::parse(*content);
    if (!q) mapping_error(property + " value '" + *content + "' is not a qid");
    return *q;
}

std::vector<Qid> qid_statements(const json& doc, const std::string& property) {
    std::vector<Qid> out;
    if (const json* st = statements_for(doc, property)) {
        for (const auto& s : *st) {
            std::optional<std::string> content = value_content(s);
            // "somevalue"/"novalue" statements carry no content.
            if (!content) continue;
            out.push_back(content_qid(content, property));
        }
    }
    return out;
}

}  // namespace

Item map_wikibase_item(const json& doc, const PropertyConfig& props) {
    if (!doc.is_object()) mapping_error("document is not an object");
    auto id = doc.find("id");
    if (id == doc.end() || !id->is_string()) mapping_error("missing id");
    auto qid = Qid::parse(id->get<std::string>());
    if (!qid) mapping_error("id '" + id->get<std::string>() + "' is not a qid");

    Item item{*qid, {}, {}, {}, {}, {}, {}, {}};
    item.labels = text_map(doc, "labels");
    if (doc.contains("descriptions")) item.descriptions = text_map(doc, "descriptions");
    item.instance_of = qid_statements(doc, props.instance_of);
    item.subclass_of = qid_statements(doc, props.subclass_of);

    if (const json* st = statements_for(doc, props.defining_formula)) {
        for (const auto& s : *st) {
            if (auto tex = value_content(s)) {
                item.defining_formula = *tex;
                break;
            }
        }
    }

    if (const json* st = statements_for(doc, props.has_part)) {
        for (const auto& s : *st) {
            std::optional<std::string> content = value_content(s);
            if (!content) continue;
            const Qid part = content_qid(content, props.has_part);
            auto quals = s.find("qualifiers");
            if (quals == s.end() || !quals->is_array()) continue;
            for (const auto& q : *quals) {
                auto prop = q.find("property");
                if (prop == q.end() || !prop->is_object() || prop->value("id", "") != props.fragment_qualifier) {
                    continue;
                }
                if (auto fragment = value_content(q); fragment && !fragment->empty()) {
                    try {
                        tex::parse(*fragment);
                    } catch (const tex::TexError& e) {
                        mapping_error("fragment '" + *fragment + "': " + e.what());
                    }
                    item.parts.push_back(PartStatement{part, *fragment});
                }
            }
        }
    }

    if (auto links = doc.find("sitelinks"); links != doc.end()) {
        if (!links->is_object()) mapping_error("sitelinks is not an object");
        for (const auto& [wiki, link] : links->items()) {
            std::string title;
            if (link.is_object() && link.contains("title") && link["title"].is_string()) {
                title = link["title"].get<std::string>();
            } else if (link.is_string()) {
                title = link.get<std::string>();
            } else {
                mapping_error("sitelinks." + wiki + " has no title");
            }
            SiteLink sl;
            // A section redirect target appears as "Article#Section".
            if (auto hash = title.find('#'); hash != std::string::npos) {
                sl.title = title.substr(0, hash);
                sl.section = title.substr(hash + 1);
            } else {
                sl.title = title;
            }
            if (sl.title.empty()) mapping_error("sitelinks." + wiki + " has an empty title");
            item.sitelinks.emplace(wiki, std::move(sl));
        }
    }
    return item;
}

Item fetch_remote(const Qid& qid, std::string_view endpoint_url, const PropertyConfig& props,
                  std::chrono::milliseconds timeout) {
    std::string url(endpoint_url);
    while (!url.empty() && url.back() == '/') url.pop_back();
    const std::string scheme = "http://";
    if (url.compare(0, scheme.size(), scheme) != 0) {
        throw RemoteError(RemoteErrorCode::NetworkError, "unsupported endpoint url '" + url + "'");
    }
    const std::size_t path_start = url.find('/', scheme.size());
    const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    const std::string path = prefix + "/entities/items/" + qid.str();
    auto res = client.Get(path);
    if (!res) {
        throw RemoteError(RemoteErrorCode::NetworkError,
                          "GET " + origin + path + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status == 404) throw RemoteError(RemoteErrorCode::NotFound, qid.str() + " not found at " + origin);
    if (res->status != 200) {
        throw RemoteError(RemoteErrorCode::NetworkError,
                          "GET " + origin + path + " returned HTTP " + std::to_string(res->status));
    }
    json doc;
    try {
        doc = json::parse(res->body);
    } catch (const json::exception& e) {
        mapping_error(std::string("invalid JSON: ") + e.what());
    }
    Item item = map_wikibase_item(doc, props);
    if (item.qid != qid) mapping_error("requested " + qid.str() + " but received " + item.qid.str());
    return item;
}

}  // namespace mathwb::kb

#include <algorithm>

#include "mathwb/kb.hpp"

namespace mathwb::kb {

using nlohmann::json;
using nlohmann::ordered_json;

KbError::KbError(KbErrorCode code, std::string message, std::optional<std::size_t> line)
    : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + message : message),
      code_(code),
      line_(line) {}

bool is_language_code(std::string_view code) {
    std::size_t i = 0;
    std::size_t primary = 0;
    while (i < code.size() && code[i] >= 'a' && code[i] <= 'z') ++i, ++primary;
    if (primary < 2 || primary > 8) return false;
    while (i < code.size()) {
        if (code[i] != '-') return false;
        ++i;
        std::size_t len = 0;
        while (i < code.size() && ((code[i] >= 'a' && code[i] <= 'z') || (code[i] >= '0' && code[i] <= '9'))) {
            ++i, ++len;
        }
        if (len < 1 || len > 8) return false;
    }
    return true;
}

std::optional<LocalizedText> pick_language(const std::map<std::string, std::string>& texts,
                                           std::string_view lang) {
    if (texts.empty()) return std::nullopt;
    if (auto it = texts.find(std::string(lang)); it != texts.end()) return LocalizedText{it->second, it->first};
    if (auto it = texts.find("en"); it != texts.end()) return LocalizedText{it->second, it->first};
    const auto& first = *texts.begin();
    return LocalizedText{first.second, first.first};
}

LocalizedText label_for(const Item& item, std::string_view lang) {
    if (auto t = pick_language(item.labels, lang)) return *t;
    throw KbError(KbErrorCode::NoLabel, "item " + item.qid.str() + " has no labels");
}

std::optional<LocalizedText> description_for(const Item& item, std::string_view lang) {
    return pick_language(item.descriptions, lang);
}

namespace {

[[noreturn]] void schema_error(const std::string& what) {
    throw KbError(KbErrorCode::ParseError, what);
}

Qid qid_field(const json& j, const char* where) {
    if (!j.is_string()) schema_error(std::string(where) + ": qid must be a string");
    auto q = Qid::parse(j.get<std::string>());
    if (!q) schema_error(std::string(where) + ": malformed qid '" + j.get<std::string>() + "'");
    return *q;
}

std::map<std::string, std::string> text_map(const json& j, const char* where) {
    std::map<std::string, std::string> out;
    if (j.is_null()) return out;
    if (!j.is_object()) schema_error(std::string(where) + " must be an object");
    for (const auto& [lang, text] : j.items()) {
        if (!is_language_code(lang)) schema_error(std::string(where) + ": bad language code '" + lang + "'");
        if (!text.is_string()) schema_error(std::string(where) + "." + lang + " must be a string");
        out.emplace(lang, text.get<std::string>());
    }
    return out;
}

std::vector<Qid> qid_list(const json& j, const char* where) {
    std::vector<Qid> out;
    if (j.is_null()) return out;
    if (!j.is_array()) schema_error(std::string(where) + " must be an array");
    for (const auto& q : j) out.push_back(qid_field(q, where));
    return out;
}

const json& member(const json& obj, const char* key) {
    static const json kNull;
    auto it = obj.find(key);
    return it == obj.end() ? kNull : *it;
}

}  // namespace

Item item_from_json(const json& j) {
    if (!j.is_object()) schema_error("item must be a JSON object");
    Item item{qid_field(member(j, "qid"), "qid"), {}, {}, {}, {}, {}, {}, {}};
    item.labels = text_map(member(j, "labels"), "labels");
    item.descriptions = text_map(member(j, "descriptions"), "descriptions");
    item.instance_of = qid_list(member(j, "instance_of"), "instance_of");
    item.subclass_of = qid_list(member(j, "subclass_of"), "subclass_of");

    if (const json& f = member(j, "defining_formula"); !f.is_null()) {
        if (!f.is_string()) schema_error("defining_formula must be a string");
        item.defining_formula = f.get<std::string>();
    }

    if (const json& parts = member(j, "parts"); !parts.is_null()) {
        if (!parts.is_array()) schema_error("parts must be an array");
        for (const auto& p : parts) {
            if (!p.is_object()) schema_error("part must be an object");
            const json& fragment = member(p, "fragment");
            if (!fragment.is_string() || fragment.get<std::string>().empty()) {
                schema_error("part fragment must be a non-empty string");
            }
            item.parts.push_back(PartStatement{qid_field(member(p, "qid"), "parts.qid"),
                                               fragment.get<std::string>()});
        }
    }

    if (const json& links = member(j, "sitelinks"); !links.is_null()) {
        if (!links.is_object()) schema_error("sitelinks must be an object");
        for (const auto& [wiki, link] : links.items()) {
            if (!link.is_object()) schema_error("sitelink must be an object");
            const json& title = member(link, "title");
            if (!title.is_string() || title.get<std::string>().empty()) {
                schema_error("sitelink title must be a non-empty string");
            }
            SiteLink sl{title.get<std::string>(), std::nullopt};
            if (const json& section = member(link, "section"); !section.is_null()) {
                if (!section.is_string()) schema_error("sitelink section must be a string");
                sl.section = section.get<std::string>();
            }
            item.sitelinks.emplace(wiki, std::move(sl));
        }
    }
    return item;
}

ordered_json item_to_json(const Item& item) {
    ordered_json j;
    j["qid"] = item.qid.str();
    j["labels"] = ordered_json::object();
    for (const auto& [lang, text] : item.labels) j["labels"][lang] = text;
    j["descriptions"] = ordered_json::object();
    for (const auto& [lang, text] : item.descriptions) j["descriptions"][lang] = text;
    j["instance_of"] = ordered_json::array();
    for (const auto& q : item.instance_of) j["instance_of"].push_back(q.str());
    if (item.defining_formula) j["defining_formula"] = *item.defining_formula;
    j["parts"] = ordered_json::array();
    for (const auto& p : item.parts) {
        j["parts"].push_back(ordered_json{{"qid", p.part_qid.str()}, {"fragment", p.fragment}});
    }
    j["subclass_of"] = ordered_json::array();
    for (const auto& q : item.subclass_of) j["subclass_of"].push_back(q.str());
    j["sitelinks"] = ordered_json::object();
    for (const auto& [wiki, link] : item.sitelinks) {
        ordered_json l{{"title", link.title}};
        if (link.section) l["section"] = *link.section;
        j["sitelinks"][wiki] = std::move(l);
    }
    return j;
}

namespace {

std::string underscored(std::string s) {
    std::replace(s.begin(), s.end(), ' ', '_');
    return s;
}

}  // namespace

std::string article_path(const SiteLink& link) {
    std::string path = "/wiki/" + underscored(link.title);
    if (link.section) path += "#" + underscored(*link.section);
    return path;
}

std::optional<ResolvedLink> resolve_article_link(const Item& item, std::string_view wiki,
                                                 const Snapshot& store, int max_depth) {
    const std::string wiki_key(wiki);
    if (auto it = item.sitelinks.find(wiki_key); it != item.sitelinks.end()) {
        return ResolvedLink{article_path(it->second), LinkVia::Direct, item.qid};
    }

    std::vector<Qid> visited{item.qid};
    auto seen = [&](const Qid& q) { return std::find(visited.begin(), visited.end(), q) != visited.end(); };

    std::vector<Qid> level;
    for (const auto& q : item.subclass_of) {
        if (!seen(q)) {
            visited.push_back(q);
            level.push_back(q);
        }
    }
    for (int depth = 1; depth <= max_depth && !level.empty(); ++depth) {
        std::sort(level.begin(), level.end());
        std::vector<Qid> next;
        for (const auto& q : level) {
            const Item* parent = store.get_item(q);
            if (!parent) continue;
            if (auto it = parent->sitelinks.find(wiki_key); it != parent->sitelinks.end()) {
                return ResolvedLink{article_path(it->second), LinkVia::Subclass, parent->qid};
            }
            for (const auto& up : parent->subclass_of) {
                if (!seen(up)) {
                    visited.push_back(up);
                    next.push_back(up);
                }
            }
        }
        level = std::move(next);
    }
    return std::nullopt;
}

}  // namespace mathwb::kb

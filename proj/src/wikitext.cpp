#include "mathwb/wikitext.hpp"

#include <cctype>

#include "mathwb/kb.hpp"

namespace mathwb::wikitext {

namespace {

std::string describe(ExtractErrorCode code, std::size_t offset, const std::string& value) {
    std::string msg = code == ExtractErrorCode::UnclosedMathTag ? "unclosed math tag" : "malformed qid";
    if (!value.empty()) msg += " '" + value + "'";
    return msg + " at offset " + std::to_string(offset);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool starts_with_ci(std::string_view doc, std::size_t at, std::string_view word) {
    if (at + word.size() > doc.size()) return false;
    for (std::size_t k = 0; k < word.size(); ++k) {
        if (lower(doc[at + k]) != word[k]) return false;
    }
    return true;
}

// `<math` at `at`, followed by a delimiter (or the end of input).
bool is_open_tag(std::string_view doc, std::size_t at) {
    if (!starts_with_ci(doc, at, "<math")) return false;
    const std::size_t next = at + 5;
    return next >= doc.size() || is_space(doc[next]) || doc[next] == '>' || doc[next] == '/';
}

// Length of a `</math\s*>` closing tag at `at`, or 0.
std::size_t close_tag_length(std::string_view doc, std::size_t at) {
    if (!starts_with_ci(doc, at, "</math")) return 0;
    std::size_t k = at + 6;
    while (k < doc.size() && is_space(doc[k])) ++k;
    if (k < doc.size() && doc[k] == '>') return k + 1 - at;
    return 0;
}

struct OpenTag {
    std::map<std::string, std::string> attributes;
    std::size_t end = 0;  // one past '>'
    bool self_closing = false;
};

OpenTag parse_open_tag(std::string_view doc, std::size_t start) {
    OpenTag tag;
    std::size_t i = start + 5;
    const std::size_t n = doc.size();
    auto unclosed = [&] { return ExtractError(ExtractErrorCode::UnclosedMathTag, start); };

    while (true) {
        while (i < n && is_space(doc[i])) ++i;
        if (i >= n) throw unclosed();
        if (doc[i] == '>') {
            tag.end = i + 1;
            return tag;
        }
        if (doc[i] == '/' && i + 1 < n && doc[i + 1] == '>') {
            tag.end = i + 2;
            tag.self_closing = true;
            return tag;
        }
        std::string name;
        while (i < n && !is_space(doc[i]) && doc[i] != '=' && doc[i] != '>' &&
               !(doc[i] == '/' && i + 1 < n && doc[i + 1] == '>')) {
            name += lower(doc[i]);
            ++i;
        }
        if (name.empty()) {
            // Stray '/' or similar; skip it.
            ++i;
            continue;
        }
        while (i < n && is_space(doc[i])) ++i;
        std::string value;
        if (i < n && doc[i] == '=') {
            ++i;
            while (i < n && is_space(doc[i])) ++i;
            if (i >= n) throw unclosed();
            if (doc[i] == '"' || doc[i] == '\'') {
                const char quote = doc[i];
                const std::size_t close = doc.find(quote, i + 1);
                if (close == std::string_view::npos) throw unclosed();
                value = std::string(doc.substr(i + 1, close - i - 1));
                i = close + 1;
            } else {
                while (i < n && !is_space(doc[i]) && doc[i] != '>' &&
                       !(doc[i] == '/' && i + 1 < n && doc[i + 1] == '>')) {
                    value += doc[i];
                    ++i;
                }
            }
        }
        tag.attributes.emplace(std::move(name), std::move(value));
    }
}

}  // namespace

ExtractError::ExtractError(ExtractErrorCode code, std::size_t offset, std::string value)
    : std::runtime_error(describe(code, offset, value)),
      code_(code),
      offset_(offset),
      value_(std::move(value)) {}

std::vector<FormulaOccurrence> extract_math_tags(std::string_view doc) {
    std::vector<FormulaOccurrence> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t start = doc.find('<', pos);
        if (start == std::string_view::npos) break;
        if (!is_open_tag(doc, start)) {
            pos = start + 1;
            continue;
        }
        OpenTag tag = parse_open_tag(doc, start);

        FormulaOccurrence occ;
        if (auto it = tag.attributes.find("qid"); it != tag.attributes.end()) {
            occ.qid = Qid::parse(it->second);
            if (!occ.qid) throw ExtractError(ExtractErrorCode::MalformedQid, start, it->second);
        }
        occ.attributes = std::move(tag.attributes);

        if (tag.self_closing) {
            occ.span = {start, tag.end};
            out.push_back(std::move(occ));
            pos = tag.end;
            continue;
        }

        std::size_t k = tag.end;
        std::size_t close_len = 0;
        for (; k < doc.size(); ++k) {
            if (doc[k] != '<') continue;
            if ((close_len = close_tag_length(doc, k)) != 0) break;
            // Math tags do not nest.
            if (is_open_tag(doc, k)) throw ExtractError(ExtractErrorCode::UnclosedMathTag, start);
        }
        if (close_len == 0) throw ExtractError(ExtractErrorCode::UnclosedMathTag, start);

        occ.tex = std::string(doc.substr(tag.end, k - tag.end));
        occ.span = {start, k + close_len};
        pos = occ.span.end;
        out.push_back(std::move(occ));
    }
    return out;
}

namespace {

std::vector<LinkedOccurrence> link_impl(std::span<const FormulaOccurrence> occurrences,
                                        const kb::Snapshot* store) {
    std::vector<LinkedOccurrence> out;
    out.reserve(occurrences.size());
    for (const auto& occ : occurrences) {
        LinkedOccurrence linked{occ, std::nullopt, LinkSource::None, std::nullopt};
        std::optional<tex::FormulaAst> ast;
        try {
            ast = tex::parse(occ.tex);
        } catch (const tex::TexError& e) {
            linked.error = e.what();
        }
        if (occ.qid) {
            linked.qid = occ.qid;
            linked.source = LinkSource::Explicit;
        } else if (ast && store) {
            if (auto q = store->lookup_by_formula(*ast)) {
                linked.qid = q;
                linked.source = LinkSource::Formula;
            }
        }
        out.push_back(std::move(linked));
    }
    return out;
}

}  // namespace

std::vector<LinkedOccurrence> link_occurrences(std::span<const FormulaOccurrence> occurrences,
                                               const kb::Snapshot& store) {
    return link_impl(occurrences, &store);
}

std::vector<LinkedOccurrence> link_occurrences(std::span<const FormulaOccurrence> occurrences) {
    return link_impl(occurrences, nullptr);
}

}  // namespace mathwb::wikitext

#pragma once

// Special-page model for one formula item in one language.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mathwb/kb.hpp"
#include "mathwb/matcher.hpp"

namespace mathwb::page {

struct PartRow {
    Qid part_qid;
    std::string fragment_tex;
    std::string fragment_mathml;
    std::optional<kb::LocalizedText> label;
    std::optional<kb::LocalizedText> description;
    std::optional<kb::ResolvedLink> article;
    std::vector<matcher::MatchPosition> matches;
    friend bool operator==(const PartRow&, const PartRow&) = default;
};

struct PageModel {
    Qid qid;
    std::string lang;  // requested language
    std::string formula_tex;
    std::string formula_mathml;
    std::string formula_alt_text;
    kb::LocalizedText label;  // falls back to the qid itself for unlabeled items
    std::optional<kb::LocalizedText> description;
    std::optional<kb::LocalizedText> type_label;
    std::vector<PartRow> parts;
    friend bool operator==(const PageModel&, const PageModel&) = default;
};

enum class PageErrorCode { UnknownQid, NoDefiningFormula };

class PageError : public std::runtime_error {
public:
    PageError(PageErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    PageErrorCode code() const noexcept { return code_; }

private:
    PageErrorCode code_;
};

/// Consulted for items missing from the local store.
using ItemFallback = std::function<std::optional<kb::Item>(const Qid&)>;

struct PageOptions {
    std::string wiki = "enwiki";  // sitelink family for article links
    ItemFallback fallback;
};

PageModel build_page_model(const Qid& qid, std::string_view lang, const kb::Snapshot& store,
                           const PageOptions& options = {});

nlohmann::ordered_json page_to_json(const PageModel& model);

/// Self-contained HTML document for the model.
std::string render_page_html(const PageModel& model);

}  // namespace mathwb::page

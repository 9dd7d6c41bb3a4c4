#pragma once

// Extraction of <math> tags from wikitext and linking them to items.

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mathwb/qid.hpp"
#include "mathwb/tex.hpp"

namespace mathwb::kb {
class Snapshot;
}

namespace mathwb::wikitext {

struct FormulaOccurrence {
    std::string tex;       // verbatim tag body
    std::optional<Qid> qid;
    tex::Span span;        // the whole tag, `<math` through `</math>`
    std::map<std::string, std::string> attributes;  // names lower-cased
};

enum class ExtractErrorCode { UnclosedMathTag, MalformedQid };

class ExtractError : public std::runtime_error {
public:
    ExtractError(ExtractErrorCode code, std::size_t offset, std::string value = {});

    ExtractErrorCode code() const noexcept { return code_; }
    std::size_t offset() const noexcept { return offset_; }
    const std::string& value() const noexcept { return value_; }

private:
    ExtractErrorCode code_;
    std::size_t offset_;
    std::string value_;
};

std::vector<FormulaOccurrence> extract_math_tags(std::string_view wikitext);

enum class LinkSource { None, Explicit, Formula };

struct LinkedOccurrence {
    FormulaOccurrence occurrence;
    std::optional<Qid> qid;
    LinkSource source = LinkSource::None;
    std::optional<std::string> error;  // parse failure of the body
};

/// Explicit qid attributes win; otherwise the body is looked up by
/// canonical hash among the store's defining formulas.
std::vector<LinkedOccurrence> link_occurrences(std::span<const FormulaOccurrence> occurrences,
                                               const kb::Snapshot& store);

/// Same, without a store: only explicit qids are reported.
std::vector<LinkedOccurrence> link_occurrences(std::span<const FormulaOccurrence> occurrences);

}  // namespace mathwb::wikitext

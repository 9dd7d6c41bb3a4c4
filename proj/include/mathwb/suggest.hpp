#pragma once

// Ranked annotation candidates from corpus statistics.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mathwb/kb.hpp"
#include "mathwb/qid.hpp"
#include "mathwb/tex.hpp"

namespace mathwb::suggest {

struct Weights {
    double exact = 2.0;
    double label = 1.0;
};

enum class Basis { Exact, Label, Both };

std::string_view basis_name(Basis basis);

struct Suggestion {
    Qid qid;
    double score = 0;
    Basis basis = Basis::Exact;
    friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

/// Lower-cases ASCII and splits on whitespace and '-'.
std::vector<std::string> label_tokens(std::string_view label);

class SuggestionIndex {
public:
    SuggestionIndex() = default;

    /// Counts every part statement by fragment hash and indexes the tokens
    /// of every label in every language. Statements naming items absent
    /// from the store are not counted.
    static SuggestionIndex build(const kb::Snapshot& store);

    const std::map<std::uint64_t, std::map<Qid, std::uint64_t>>& fragment_counts() const noexcept {
        return fragment_counts_;
    }
    const std::map<std::string, std::set<Qid>>& tokens() const noexcept { return label_tokens_; }

    /// score = exact * N_exact + label * N_label, zero scores dropped,
    /// sorted by score descending then qid ascending, at most `limit`.
    std::vector<Suggestion> suggest(const tex::FormulaAst& element, std::size_t limit,
                                    const Weights& weights = {}) const;

private:
    std::map<std::uint64_t, std::map<Qid, std::uint64_t>> fragment_counts_;
    std::map<std::string, std::set<Qid>> label_tokens_;
};

}  // namespace mathwb::suggest

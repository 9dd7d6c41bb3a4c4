#include "mathwb/suggest.hpp"

#include <algorithm>
#include <cctype>

namespace mathwb::suggest {

std::string_view basis_name(Basis basis) {
    switch (basis) {
        case Basis::Exact: return "exact";
        case Basis::Label: return "label";
        case Basis::Both: return "both";
    }
    return "exact";
}

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::vector<std::string> label_tokens(std::string_view label) {
    std::vector<std::string> out;
    std::string current;
    for (char c : label) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '-') {
            if (!current.empty()) out.push_back(ascii_lower(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(ascii_lower(current));
    return out;
}

SuggestionIndex SuggestionIndex::build(const kb::Snapshot& store) {
    SuggestionIndex index;
    for (const auto& [qid, item] : store.items()) {
        for (const auto& part : item.parts) {
            if (!store.get_item(part.part_qid)) continue;
            const std::uint64_t key = tex::canonical_hash(tex::parse(part.fragment));
            ++index.fragment_counts_[key][part.part_qid];
        }
        for (const auto& [lang, label] : item.labels) {
            for (auto& token : label_tokens(label)) index.label_tokens_[std::move(token)].insert(qid);
        }
    }
    return index;
}

std::vector<Suggestion> SuggestionIndex::suggest(const tex::FormulaAst& element, std::size_t limit,
                                                 const Weights& weights) const {
    const tex::MathNode root = tex::normalize(element.root);
    const std::string tex = tex::canonical_tex(root);

    std::map<Qid, std::pair<std::uint64_t, std::uint64_t>> tallies;  // (N_exact, N_label)
    if (auto it = fragment_counts_.find(tex::fnv1a64(tex)); it != fragment_counts_.end()) {
        for (const auto& [qid, count] : it->second) tallies[qid].first = count;
    }
    if (auto it = label_tokens_.find(ascii_lower(tex)); it != label_tokens_.end()) {
        for (const auto& qid : it->second) tallies[qid].second = 1;
    }

    std::vector<Suggestion> out;
    for (const auto& [qid, t] : tallies) {
        const double score = weights.exact * static_cast<double>(t.first) +
                             weights.label * static_cast<double>(t.second);
        if (score <= 0) continue;
        const Basis basis = t.first > 0 && t.second > 0 ? Basis::Both : t.first > 0 ? Basis::Exact : Basis::Label;
        out.push_back(Suggestion{qid, score, basis});
    }
    std::stable_sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.qid < b.qid;
    });
    if (out.size() > limit) out.erase(out.begin() + static_cast<std::ptrdiff_t>(limit), out.end());
    return out;
}

}  // namespace mathwb::suggest

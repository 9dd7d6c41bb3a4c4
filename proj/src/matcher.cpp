#include "mathwb/matcher.hpp"

#include <algorithm>

namespace mathwb::matcher {

using tex::MathNode;
using tex::NodeKind;

namespace {

void search(const MathNode& fragment, const MathNode& node, std::vector<std::size_t>& path,
            std::vector<MatchPosition>& out) {
    if (node == fragment) out.push_back(MatchPosition{path, 1});

    const auto kids = node.children();
    const bool run_search = node.kind() == NodeKind::Row && fragment.kind() == NodeKind::Row &&
                            fragment.children().size() >= 2 &&
                            fragment.children().size() < kids.size();
    const std::size_t k = fragment.children().size();

    for (std::size_t i = 0; i < kids.size(); ++i) {
        path.push_back(i);
        if (run_search && i + k <= kids.size() &&
            std::equal(fragment.children().begin(), fragment.children().end(), kids.begin() + i)) {
            out.push_back(MatchPosition{path, k});
        }
        search(fragment, kids[i], path, out);
        path.pop_back();
    }
}

}  // namespace

std::vector<MatchPosition> match_fragment(const MathNode& fragment, const MathNode& formula) {
    std::vector<MatchPosition> out;
    std::vector<std::size_t> path;
    search(fragment, formula, path, out);
    return out;
}

std::vector<MatchPosition> match_fragment(const tex::FormulaAst& fragment, const tex::FormulaAst& formula) {
    return match_fragment(tex::normalize(fragment.root), tex::normalize(formula.root));
}

std::vector<PartMatches> annotate_formula(const tex::FormulaAst& formula,
                                          std::span<const kb::PartStatement> parts) {
    std::vector<PartMatches> out;
    out.reserve(parts.size());
    for (const auto& part : parts) {
        tex::FormulaAst fragment = [&] {
            try {
                return tex::parse(part.fragment);
            } catch (const tex::TexError& e) {
                throw kb::KbError(kb::KbErrorCode::InvalidFragment,
                                  "invalid fragment '" + part.fragment + "': " + e.what());
            }
        }();
        out.push_back(PartMatches{part, match_fragment(fragment, formula)});
    }
    return out;
}

}  // namespace mathwb::matcher

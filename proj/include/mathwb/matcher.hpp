#pragma once

// Structural search of a fragment inside a formula tree.

#include <cstddef>
#include <span>
#include <vector>

#include "mathwb/kb.hpp"
#include "mathwb/tex.hpp"

namespace mathwb::matcher {

/// `path` addresses a node by child indices from the root (see
/// tex::MathNode for the child layout). With length 1 the node itself
/// matched; with length k > 1 the node's parent is a Row and the k
/// consecutive siblings starting at the node matched.
struct MatchPosition {
    std::vector<std::size_t> path;
    std::size_t length = 1;
    friend bool operator==(const MatchPosition&, const MatchPosition&) = default;
};

/// All positions, depth-first, left to right. Runs are reported only when
/// they are a proper part of their Row. Both trees are normalized first.
std::vector<MatchPosition> match_fragment(const tex::FormulaAst& fragment, const tex::FormulaAst& formula);
/// Same, on trees the caller has already normalized.
std::vector<MatchPosition> match_fragment(const tex::MathNode& fragment, const tex::MathNode& formula);

struct PartMatches {
    kb::PartStatement part;
    std::vector<MatchPosition> matches;
};

/// One entry per part, in order, including parts that match nowhere.
/// Unparseable fragments raise kb::KbError(InvalidFragment).
std::vector<PartMatches> annotate_formula(const tex::FormulaAst& formula,
                                          std::span<const kb::PartStatement> parts);

}  // namespace mathwb::matcher

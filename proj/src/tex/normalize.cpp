#include <utility>

#include "mathwb/tex.hpp"

namespace mathwb::tex {

namespace {

bool is_empty_row(const MathNode& n) {
    return n.kind() == NodeKind::Row && n.children().empty();
}

MathNode normalize_row(const MathNode& row) {
    std::vector<MathNode> flat;
    for (const auto& child : row.children()) {
        MathNode c = normalize(child);
        if (c.kind() == NodeKind::Row) {
            for (const auto& g : c.children()) flat.push_back(g);
        } else {
            flat.push_back(std::move(c));
        }
    }

    // Adjacent digit runs ("1 2", "{1}{2}") read as one number.
    std::vector<MathNode> merged;
    for (auto& c : flat) {
        if (c.kind() == NodeKind::Number && !merged.empty() &&
            merged.back().kind() == NodeKind::Number) {
            merged.back() = MathNode::number(merged.back().value() + c.value());
        } else {
            merged.push_back(std::move(c));
        }
    }

    if (merged.size() == 1) return std::move(merged.front());
    return MathNode::row(std::move(merged));
}

}  // namespace

MathNode normalize(MathNode node) {
    switch (node.kind()) {
        case NodeKind::Row:
            return normalize_row(node);
        case NodeKind::Fraction:
            return MathNode::fraction(normalize(node.numerator()), normalize(node.denominator()));
        case NodeKind::Sqrt:
            return MathNode::sqrt(normalize(node.radicand()));
        case NodeKind::Script: {
            std::optional<MathNode> sub;
            std::optional<MathNode> sup;
            if (node.sub()) {
                MathNode s = normalize(*node.sub());
                if (!is_empty_row(s)) sub = std::move(s);
            }
            if (node.sup()) {
                MathNode s = normalize(*node.sup());
                if (!is_empty_row(s)) sup = std::move(s);
            }
            return MathNode::script(normalize(node.base()), std::move(sub), std::move(sup));
        }
        case NodeKind::Identifier:
        case NodeKind::Number:
        case NodeKind::Operator:
        case NodeKind::Text:
            break;
    }
    return node;
}

FormulaAst normalize(FormulaAst ast) {
    ast.root = normalize(std::move(ast.root));
    return ast;
}

}  // namespace mathwb::tex

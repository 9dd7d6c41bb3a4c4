#include <gtest/gtest.h>

#include <random>

#include "mathwb/matcher.hpp"
#include "testing.hpp"

namespace mathwb::matcher {
namespace {

using tex::MathNode;
using tex::parse;

using Positions = std::vector<MatchPosition>;

Positions match(std::string_view fragment, std::string_view formula) {
    return match_fragment(parse(fragment), parse(formula));
}

std::string describe(const Positions& positions) {
    std::string out;
    for (const auto& p : positions) {
        out += "[";
        for (auto i : p.path) out += std::to_string(i) + ",";
        out += "]x" + std::to_string(p.length) + " ";
    }
    return out;
}

MathNode random_formula(std::mt19937& rng) {
    while (true) {
        MathNode t = tex::normalize(testing::random_tree(rng, 1 + static_cast<int>(rng() % 30)));
        if (t.node_count() <= 30) return t;
    }
}

TEST(Match, ComplexTermRun) {
    EXPECT_EQ(match("\\frac12m_0v^2", "E_k=\\frac12m_0v^2"), (Positions{{{2}, 3}}));
}

TEST(Match, WholeFormula) {
    EXPECT_EQ(match("E=mc^2", "E=mc^2"), (Positions{{{}, 1}}));
    EXPECT_EQ(match("x", "x"), (Positions{{{}, 1}}));
}

TEST(Match, ScriptBase) {
    EXPECT_EQ(match("c", "E=mc^2"), (Positions{{{3, 0}, 1}}));
    EXPECT_EQ(match("c^2", "E=mc^2"), (Positions{{{3}, 1}}));
    EXPECT_EQ(match("E", "E=mc^2"), (Positions{{{0}, 1}}));
}

TEST(Match, OverlappingAndRepeated) {
    EXPECT_EQ(match("aa", "aaa"), (Positions{{{0}, 2}, {{1}, 2}}));
    EXPECT_EQ(match("x", "x+\\frac{x}{x}"), (Positions{{{0}, 1}, {{2, 0}, 1}, {{2, 1}, 1}}));
}

TEST(Match, StructuralOnly) {
    EXPECT_TRUE(match("mc", "cm").empty());
    EXPECT_TRUE(match("\\mbox{ch}", "\\mbox{td}").empty());
    EXPECT_EQ(match("\\mbox{ch}", "\\mbox{ch}(x)").size(), 1u);
    EXPECT_TRUE(match("z", "E=mc^2").empty());
}

TEST(Match, RunInsideFraction) {
    EXPECT_EQ(match("b^2-4ac", "\\sqrt{b^2-4ac}"), (Positions{{{0}, 1}}));
    EXPECT_EQ(match("4a", "x=\\frac{-b\\pm\\sqrt{b^2-4ac}}{2a}"), (Positions{{{2, 0, 3, 0, 2}, 2}}));
}

TEST(Match, PositionsAddressValidNodes) {
    std::mt19937 rng(17);
    for (int i = 0; i < 300; ++i) {
        const MathNode formula = random_formula(rng);
        const MathNode fragment = testing::random_fragment(rng, formula);
        for (const auto& p : match_fragment(fragment, formula)) {
            ASSERT_GE(p.length, 1u);
            ASSERT_NE(formula.at(p.path), nullptr);
            if (p.length > 1) {
                ASSERT_FALSE(p.path.empty());
                const std::vector<std::size_t> parent_path(p.path.begin(), p.path.end() - 1);
                const MathNode* parent = formula.at(parent_path);
                ASSERT_EQ(parent->kind(), tex::NodeKind::Row);
                ASSERT_LE(p.path.back() + p.length, parent->children().size());
            }
        }
    }
}

TEST(MatchProperty, AgreesWithBruteForceOracle) {
    std::mt19937 rng(2025);
    for (int i = 0; i < 1000; ++i) {
        const MathNode formula = random_formula(rng);
        const MathNode fragment = testing::random_fragment(rng, formula);
        const Positions got = match_fragment(fragment, formula);
        const Positions want = testing::brute_force_matches(fragment, formula);
        ASSERT_EQ(got, want) << tex::canonical_tex(fragment) << " in " << tex::canonical_tex(formula)
                             << "\n got " << describe(got) << "\nwant " << describe(want);
    }
}

TEST(MatchProperty, Reflexive) {
    std::mt19937 rng(5);
    for (int i = 0; i < 500; ++i) {
        const MathNode formula = random_formula(rng);
        const Positions got = match_fragment(formula, formula);
        ASSERT_FALSE(got.empty());
        EXPECT_EQ(got.front(), (MatchPosition{{}, 1}));
    }
}

TEST(MatchProperty, NormalizationInvariance) {
    std::mt19937 rng(6);
    for (int i = 0; i < 500; ++i) {
        const MathNode raw_formula = testing::random_tree(rng, 20);
        const MathNode raw_fragment = testing::random_tree(rng, 3);
        const Positions via_ast =
            match_fragment(tex::FormulaAst{raw_fragment, ""}, tex::FormulaAst{raw_formula, ""});
        EXPECT_EQ(via_ast, match_fragment(tex::normalize(raw_fragment), tex::normalize(raw_formula)));
    }
}

TEST(MatchProperty, MonotoneContainment) {
    std::mt19937 rng(7);
    const MathNode a = MathNode::identifier("q");
    for (int i = 0; i < 500; ++i) {
        const MathNode formula = random_formula(rng);
        const MathNode fragment = testing::random_fragment(rng, formula);
        if (match_fragment(fragment, formula).empty()) continue;
        const MathNode contexts[] = {
            MathNode::row({a, formula, a}),
            MathNode::fraction(formula, a),
            MathNode::sqrt(formula),
            MathNode::script(formula, a, std::nullopt),
            MathNode::row({MathNode::fraction(a, MathNode::row({formula, a})), a}),
        };
        for (const auto& context : contexts) {
            const MathNode wrapped = tex::normalize(context);
            EXPECT_FALSE(match_fragment(fragment, wrapped).empty())
                << tex::canonical_tex(fragment) << " in " << tex::canonical_tex(wrapped);
        }
    }
}

TEST(Annotate, MassEnergyParts) {
    const std::vector<kb::PartStatement> parts{
        {Qid::from("Q11379"), "E"}, {Qid::from("Q11423"), "m"}, {Qid::from("Q2111"), "c"}, {Qid::from("Q1"), "z"}};
    const auto result = annotate_formula(parse("E=mc^2"), parts);
    ASSERT_EQ(result.size(), 4u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(result[i].matches.size(), 1u);
    EXPECT_TRUE(result[3].matches.empty());
    EXPECT_EQ(result[3].part, parts[3]);
    EXPECT_TRUE(annotate_formula(parse("E=mc^2"), {}).empty());
}

TEST(Annotate, InvalidFragment) {
    const std::vector<kb::PartStatement> parts{{Qid::from("Q1"), "\\badcmd"}};
    try {
        annotate_formula(parse("x"), parts);
        FAIL();
    } catch (const kb::KbError& e) {
        EXPECT_EQ(e.code(), kb::KbErrorCode::InvalidFragment);
    }
}

}  // namespace
}  // namespace mathwb::matcher

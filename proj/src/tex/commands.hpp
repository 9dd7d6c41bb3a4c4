#pragma once

#include <array>
#include <string_view>
#include <utility>

namespace mathwb::tex::detail {

struct GreekLetter {
    std::string_view name;
    std::string_view glyph;
};

inline constexpr std::array<GreekLetter, 35> kGreekLetters{{
    {"alpha", "α"},   {"beta", "β"},    {"gamma", "γ"},   {"delta", "δ"},
    {"epsilon", "ε"}, {"zeta", "ζ"},    {"eta", "η"},     {"theta", "θ"},
    {"iota", "ι"},    {"kappa", "κ"},   {"lambda", "λ"},  {"mu", "μ"},
    {"nu", "ν"},      {"xi", "ξ"},      {"omicron", "ο"}, {"pi", "π"},
    {"rho", "ρ"},     {"sigma", "σ"},   {"tau", "τ"},     {"upsilon", "υ"},
    {"phi", "φ"},     {"chi", "χ"},     {"psi", "ψ"},     {"omega", "ω"},
    {"Gamma", "Γ"},   {"Delta", "Δ"},   {"Theta", "Θ"},   {"Lambda", "Λ"},
    {"Xi", "Ξ"},      {"Pi", "Π"},      {"Sigma", "Σ"},   {"Upsilon", "ϒ"},
    {"Phi", "Φ"},     {"Psi", "Ψ"},     {"Omega", "Ω"},
}};

// Symbol commands become Operator nodes.
struct SymbolCommand {
    std::string_view name;
    std::string_view glyph;
    std::string_view words;
};

inline constexpr std::array<SymbolCommand, 10> kSymbolCommands{{
    {"bullet", "•", "bullet"},
    {"ldots", "…", "dots"},
    {"cdot", "⋅", "dot"},
    {"times", "×", "times"},
    {"pm", "±", "plus or minus"},
    {"leq", "≤", "less than or equal to"},
    {"geq", "≥", "greater than or equal to"},
    {"neq", "≠", "not equal to"},
    {"infty", "∞", "infinity"},
    {"partial", "∂", "partial"},
}};

inline constexpr std::array<std::string_view, 4> kStructuralCommands{
    "frac", "sqrt", "mbox", "mathcal"};

inline constexpr std::string_view kOperatorChars = "=+-*/()[]!,.;<>|";

inline const GreekLetter* find_greek(std::string_view name) {
    for (const auto& g : kGreekLetters) {
        if (g.name == name) return &g;
    }
    return nullptr;
}

inline const SymbolCommand* find_symbol(std::string_view name) {
    for (const auto& s : kSymbolCommands) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

inline bool is_ascii_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace mathwb::tex::detail

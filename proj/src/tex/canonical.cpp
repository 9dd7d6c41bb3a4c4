#include <cstdio>

#include "commands.hpp"
#include "mathwb/tex.hpp"

namespace mathwb::tex {

namespace {

using detail::is_ascii_digit;
using detail::is_ascii_letter;

// True when `out` ends in a control word, so a following letter would be
// absorbed into the command name.
bool ends_with_control_word(const std::string& out) {
    std::size_t i = out.size();
    while (i > 0 && is_ascii_letter(out[i - 1])) --i;
    return i < out.size() && i > 0 && out[i - 1] == '\\';
}

void append(std::string& out, const std::string& piece) {
    if (!piece.empty() && is_ascii_letter(piece.front()) && ends_with_control_word(out)) {
        out += ' ';
    }
    out += piece;
}

std::string braced(const MathNode& n) { return "{" + canonical_tex(n) + "}"; }

std::string script_base(const MathNode& base) {
    if (base.kind() == NodeKind::Row || base.kind() == NodeKind::Script) return braced(base);
    return canonical_tex(base);
}

}  // namespace

std::string canonical_tex(const MathNode& node) {
    switch (node.kind()) {
        case NodeKind::Row: {
            std::string out;
            for (const auto& c : node.children()) {
                std::string piece = canonical_tex(c);
                // Keep a number from fusing with a preceding digit run.
                if (!out.empty() && is_ascii_digit(out.back()) && !piece.empty() &&
                    is_ascii_digit(piece.front())) {
                    piece = "{" + piece + "}";
                }
                append(out, piece);
            }
            return out;
        }
        case NodeKind::Identifier:
            switch (node.variant()) {
                case IdentifierVariant::Plain: return node.value();
                case IdentifierVariant::Greek: return "\\" + node.value();
                case IdentifierVariant::Calligraphic: return "\\mathcal{" + node.value() + "}";
            }
            return node.value();
        case NodeKind::Number:
        case NodeKind::Operator:
            return node.value();
        case NodeKind::Fraction:
            return "\\frac" + braced(node.numerator()) + braced(node.denominator());
        case NodeKind::Sqrt:
            return "\\sqrt" + braced(node.radicand());
        case NodeKind::Script: {
            std::string out = script_base(node.base());
            if (node.sub()) out += "_" + braced(*node.sub());
            if (node.sup()) out += "^" + braced(*node.sup());
            return out;
        }
        case NodeKind::Text:
            return "\\mbox{" + node.value() + "}";
    }
    return {};
}

std::string canonical_tex(const FormulaAst& ast) { return canonical_tex(ast.root); }

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t canonical_hash(const FormulaAst& ast) {
    return fnv1a64(canonical_tex(normalize(ast.root)));
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace mathwb::tex

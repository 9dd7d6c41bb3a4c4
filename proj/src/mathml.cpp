#include "mathwb/mathml.hpp"

#include "tex/commands.hpp"

namespace mathwb::mathml {

using tex::IdentifierVariant;
using tex::MathNode;
using tex::NodeKind;

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

namespace {

std::string operator_glyph(const std::string& symbol) {
    if (symbol.size() > 1 && symbol.front() == '\\') {
        if (const auto* s = tex::detail::find_symbol(symbol.substr(1))) return std::string(s->glyph);
    }
    if (symbol == "-") return "−";
    return xml_escape(symbol);
}

void emit(const MathNode& n, std::string& out) {
    auto wrap = [&](std::string_view tag) {
        out += '<';
        out += tag;
        out += '>';
        for (const auto& c : n.children()) emit(c, out);
        out += "</";
        out += tag;
        out += '>';
    };
    switch (n.kind()) {
        case NodeKind::Row: wrap("mrow"); break;
        case NodeKind::Identifier:
            switch (n.variant()) {
                case IdentifierVariant::Plain: out += "<mi>" + xml_escape(n.value()) + "</mi>"; break;
                case IdentifierVariant::Calligraphic:
                    out += "<mi mathvariant=\"script\">" + xml_escape(n.value()) + "</mi>";
                    break;
                case IdentifierVariant::Greek:
                    out += "<mi>" + std::string(tex::greek_glyph(n.value()).value_or(n.value())) + "</mi>";
                    break;
            }
            break;
        case NodeKind::Number: out += "<mn>" + n.value() + "</mn>"; break;
        case NodeKind::Operator: out += "<mo>" + operator_glyph(n.value()) + "</mo>"; break;
        case NodeKind::Fraction: wrap("mfrac"); break;
        case NodeKind::Sqrt: wrap("msqrt"); break;
        case NodeKind::Script:
            // Child order base, sub, sup matches the msubsup argument order.
            wrap(n.sub() && n.sup() ? "msubsup" : n.sub() ? "msub" : "msup");
            break;
        case NodeKind::Text: out += "<mtext>" + xml_escape(n.value()) + "</mtext>"; break;
    }
}

std::string operator_words(const std::string& symbol) {
    if (symbol.size() > 1 && symbol.front() == '\\') {
        if (const auto* s = tex::detail::find_symbol(symbol.substr(1))) return std::string(s->words);
    }
    static constexpr std::pair<std::string_view, std::string_view> kWords[] = {
        {"=", "equals"},       {"+", "plus"},         {"-", "minus"},
        {"*", "star"},         {"/", "divided by"},   {"<", "less than"},
        {">", "greater than"}, {"(", "open paren"},   {")", "close paren"},
        {"[", "open bracket"}, {"]", "close bracket"}, {"|", "vertical bar"},
        {"!", "factorial"},    {",", "comma"},        {".", "dot"},
        {";", "semicolon"},
    };
    for (const auto& [sym, words] : kWords) {
        if (sym == symbol) return std::string(words);
    }
    return symbol;
}

// Text content with markup characters spelled out and whitespace collapsed.
std::string text_words(const std::string& content) {
    std::string out;
    for (char c : content) {
        if (c == '<') out += " less than ";
        else if (c == '>') out += " greater than ";
        else if (c == '&') out += " and ";
        else out += c;
    }
    return out;
}

std::string words(const MathNode& n) {
    switch (n.kind()) {
        case NodeKind::Row: {
            std::string out;
            for (const auto& c : n.children()) {
                if (!out.empty()) out += ' ';
                out += words(c);
            }
            return out;
        }
        case NodeKind::Identifier:
            if (n.variant() == IdentifierVariant::Calligraphic) return "script " + n.value();
            return n.value();
        case NodeKind::Number: return n.value();
        case NodeKind::Operator: return operator_words(n.value());
        case NodeKind::Fraction:
            return "fraction " + words(n.numerator()) + " over " + words(n.denominator());
        case NodeKind::Sqrt: return "square root of " + words(n.radicand());
        case NodeKind::Script: {
            std::string out = words(n.base());
            if (n.sub()) out += " sub " + words(*n.sub());
            if (n.sup()) out += " to the power " + words(*n.sup());
            return out;
        }
        case NodeKind::Text: return text_words(n.value());
    }
    return {};
}

std::string collapse_spaces(const std::string& in) {
    std::string out;
    for (char c : in) {
        const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
        if (space) {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += c;
        }
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

}  // namespace

std::string render_mathml(const tex::FormulaAst& ast) {
    std::string out = "<math>";
    emit(ast.root, out);
    out += "</math>";
    return out;
}

std::string render_alt_text(const tex::FormulaAst& ast) {
    std::string text = collapse_spaces(words(ast.root));
    return text.empty() ? "blank" : text;
}

RenderedFormula render(const tex::FormulaAst& ast) {
    return RenderedFormula{render_mathml(ast), render_alt_text(ast), ast.source_tex};
}

}  // namespace mathwb::mathml

#include "mathwb/tex.hpp"

#include <algorithm>
#include <cstdio>

#include "commands.hpp"

namespace mathwb::tex {

using detail::is_ascii_digit;
using detail::is_ascii_letter;

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownControlSequence: return "unknown_control_sequence";
        case ErrorCode::IllegalCharacter: return "illegal_character";
        case ErrorCode::UnexpectedEnd: return "unexpected_end";
        case ErrorCode::UnbalancedBraces: return "unbalanced_braces";
        case ErrorCode::EmptyFormula: return "empty_formula";
        case ErrorCode::MisplacedScript: return "misplaced_script";
        case ErrorCode::EmptyArgument: return "empty_argument";
    }
    return "tex_error";
}

namespace {

std::string describe(ErrorCode code, std::size_t offset, const std::string& detail) {
    std::string msg{error_code_name(code)};
    msg += " at offset " + std::to_string(offset);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

TexError::TexError(ErrorCode code, std::size_t offset, std::string detail)
    : std::runtime_error(describe(code, offset, detail)),
      code_(code),
      offset_(offset),
      detail_(std::move(detail)) {}

bool is_supported_command(std::string_view name) {
    return detail::find_greek(name) != nullptr || detail::find_symbol(name) != nullptr ||
           std::find(detail::kStructuralCommands.begin(), detail::kStructuralCommands.end(),
                     name) != detail::kStructuralCommands.end();
}

std::optional<std::string_view> greek_glyph(std::string_view name) {
    if (const auto* g = detail::find_greek(name)) return g->glyph;
    return std::nullopt;
}

std::vector<Token> tokenize(std::string_view input) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = input.size();
    auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
        tokens.push_back(Token{kind, std::string(input.substr(begin, end - begin)), {begin, end}});
    };

    while (i < n) {
        const char c = input[i];
        if (is_space(c)) {
            ++i;
        } else if (c == '\\') {
            std::size_t j = i + 1;
            while (j < n && is_ascii_letter(input[j])) ++j;
            if (j == i + 1) {
                // Control symbol (\, \{ ...): none are supported.
                std::string name = j < n ? std::string(1, input[j]) : std::string();
                throw TexError(ErrorCode::UnknownControlSequence, i, name);
            }
            std::string_view name = input.substr(i + 1, j - i - 1);
            if (!is_supported_command(name)) {
                throw TexError(ErrorCode::UnknownControlSequence, i, std::string(name));
            }
            push(TokenKind::ControlSequence, i, j);
            i = j;
        } else if (is_ascii_letter(c)) {
            push(TokenKind::Letter, i, i + 1);
            ++i;
        } else if (is_ascii_digit(c)) {
            std::size_t j = i;
            while (j < n && is_ascii_digit(input[j])) ++j;
            push(TokenKind::Digits, i, j);
            i = j;
        } else if (c == '{') {
            push(TokenKind::BraceOpen, i, i + 1);
            ++i;
        } else if (c == '}') {
            push(TokenKind::BraceClose, i, i + 1);
            ++i;
        } else if (c == '^') {
            push(TokenKind::Superscript, i, i + 1);
            ++i;
        } else if (c == '_') {
            push(TokenKind::Subscript, i, i + 1);
            ++i;
        } else if (detail::kOperatorChars.find(c) != std::string_view::npos) {
            push(TokenKind::Operator, i, i + 1);
            ++i;
        } else {
            char buf[8];
            std::snprintf(buf, sizeof buf, "0x%02X", static_cast<unsigned char>(c));
            throw TexError(ErrorCode::IllegalCharacter, i, buf);
        }
    }
    return tokens;
}

}  // namespace mathwb::tex

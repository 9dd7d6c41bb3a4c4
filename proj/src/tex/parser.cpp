#include <utility>

#include "commands.hpp"
#include "mathwb/tex.hpp"

namespace mathwb::tex {

// ---- MathNode ----------------------------------------------------------

MathNode MathNode::row(std::vector<MathNode> children) {
    MathNode n;
    n.kind_ = NodeKind::Row;
    n.children_ = std::move(children);
    return n;
}

MathNode MathNode::identifier(std::string name, IdentifierVariant variant) {
    MathNode n;
    n.kind_ = NodeKind::Identifier;
    n.value_ = std::move(name);
    n.variant_ = variant;
    return n;
}

MathNode MathNode::number(std::string literal) {
    MathNode n;
    n.kind_ = NodeKind::Number;
    n.value_ = std::move(literal);
    return n;
}

MathNode MathNode::op(std::string symbol) {
    MathNode n;
    n.kind_ = NodeKind::Operator;
    n.value_ = std::move(symbol);
    return n;
}

MathNode MathNode::fraction(MathNode numerator, MathNode denominator) {
    MathNode n;
    n.kind_ = NodeKind::Fraction;
    n.children_.push_back(std::move(numerator));
    n.children_.push_back(std::move(denominator));
    return n;
}

MathNode MathNode::sqrt(MathNode radicand) {
    MathNode n;
    n.kind_ = NodeKind::Sqrt;
    n.children_.push_back(std::move(radicand));
    return n;
}

MathNode MathNode::script(MathNode base, std::optional<MathNode> sub,
                          std::optional<MathNode> sup) {
    if (!sub && !sup) return base;
    MathNode n;
    n.kind_ = NodeKind::Script;
    n.children_.push_back(std::move(base));
    if (sub) {
        n.has_sub_ = true;
        n.children_.push_back(std::move(*sub));
    }
    if (sup) {
        n.has_sup_ = true;
        n.children_.push_back(std::move(*sup));
    }
    return n;
}

MathNode MathNode::text(std::string content) {
    MathNode n;
    n.kind_ = NodeKind::Text;
    n.value_ = std::move(content);
    return n;
}

MathNode MathNode::with_children(std::vector<MathNode> children) const {
    MathNode n = *this;
    n.children_ = std::move(children);
    return n;
}

std::size_t MathNode::node_count() const noexcept {
    std::size_t count = 1;
    for (const auto& c : children_) count += c.node_count();
    return count;
}

const MathNode* MathNode::at(std::span<const std::size_t> path) const noexcept {
    const MathNode* node = this;
    for (std::size_t index : path) {
        if (index >= node->children_.size()) return nullptr;
        node = &node->children_[index];
    }
    return node;
}

// ---- Parser ------------------------------------------------------------

namespace {

class Parser {
public:
    Parser(std::span<const Token> tokens, std::string_view source)
        : tokens_(tokens), source_(source) {}

    MathNode parse_formula() {
        std::vector<MathNode> items = parse_row(/*open_brace=*/std::nullopt);
        if (items.empty()) throw TexError(ErrorCode::EmptyFormula, 0, "");
        return MathNode::row(std::move(items));
    }

private:
    struct Atom {
        MathNode node;
        std::optional<MathNode> sub;
        std::optional<MathNode> sup;
    };

    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }

    void advance() {
        ++pos_;
        digit_offset_ = 0;
    }

    // Items of a row up to (and consuming) the matching close brace, or up to
    // the end of input for the top level.
    std::vector<MathNode> parse_row(std::optional<std::size_t> open_brace) {
        std::vector<Atom> atoms;
        while (true) {
            if (at_end()) {
                if (open_brace) throw TexError(ErrorCode::UnbalancedBraces, *open_brace, "unclosed '{'");
                break;
            }
            const Token& tok = peek();
            if (tok.kind == TokenKind::BraceClose) {
                if (!open_brace) throw TexError(ErrorCode::UnbalancedBraces, tok.span.begin, "unmatched '}'");
                advance();
                break;
            }
            if (tok.kind == TokenKind::Superscript || tok.kind == TokenKind::Subscript) {
                const bool is_sup = tok.kind == TokenKind::Superscript;
                const std::size_t at = tok.span.begin;
                if (atoms.empty()) throw TexError(ErrorCode::MisplacedScript, at, "script without base");
                advance();
                MathNode arg = parse_argument(is_sup ? "^" : "_", at);
                auto& slot = is_sup ? atoms.back().sup : atoms.back().sub;
                if (slot) {
                    throw TexError(ErrorCode::MisplacedScript, at,
                                   is_sup ? "double superscript" : "double subscript");
                }
                slot = std::move(arg);
                continue;
            }
            atoms.push_back(Atom{parse_atom(), std::nullopt, std::nullopt});
        }

        std::vector<MathNode> out;
        out.reserve(atoms.size());
        for (auto& a : atoms) {
            out.push_back(MathNode::script(std::move(a.node), std::move(a.sub), std::move(a.sup)));
        }
        return out;
    }

    MathNode parse_group() {
        const std::size_t open = peek().span.begin;
        advance();
        return MathNode::row(parse_row(open));
    }

    // A command or script argument: a braced group or one token. A digit run
    // contributes a single digit.
    MathNode parse_argument(std::string_view owner, std::size_t owner_offset) {
        if (at_end()) {
            throw TexError(ErrorCode::UnexpectedEnd, owner_offset,
                           "missing argument for " + std::string(owner));
        }
        const Token& tok = peek();
        switch (tok.kind) {
            case TokenKind::BraceOpen: {
                const std::size_t open = tok.span.begin;
                MathNode group = parse_group();
                if (group.children().empty()) {
                    throw TexError(ErrorCode::EmptyArgument, open,
                                   "empty argument for " + std::string(owner));
                }
                return group;
            }
            case TokenKind::BraceClose:
                throw TexError(ErrorCode::UnexpectedEnd, owner_offset,
                               "missing argument for " + std::string(owner));
            case TokenKind::Superscript:
            case TokenKind::Subscript:
                throw TexError(ErrorCode::MisplacedScript, tok.span.begin,
                               "script as argument of " + std::string(owner));
            case TokenKind::Digits: {
                std::string digit(1, tok.text[digit_offset_]);
                if (++digit_offset_ >= tok.text.size()) advance();
                return MathNode::number(std::move(digit));
            }
            default:
                return parse_atom();
        }
    }

    MathNode parse_atom() {
        const Token& tok = peek();
        switch (tok.kind) {
            case TokenKind::Letter: {
                MathNode n = MathNode::identifier(tok.text);
                advance();
                return n;
            }
            case TokenKind::Digits: {
                MathNode n = MathNode::number(tok.text.substr(digit_offset_));
                advance();
                return n;
            }
            case TokenKind::Operator: {
                MathNode n = MathNode::op(tok.text);
                advance();
                return n;
            }
            case TokenKind::BraceOpen:
                return parse_group();
            case TokenKind::ControlSequence:
                return parse_command();
            default:
                // Braces and scripts are handled by the callers.
                throw TexError(ErrorCode::UnexpectedEnd, tok.span.begin, "unexpected token");
        }
    }

    MathNode parse_command() {
        const Token& tok = peek();
        const std::size_t at = tok.span.begin;
        const std::string name = tok.text.substr(1);
        advance();

        if (const auto* g = detail::find_greek(name)) {
            return MathNode::identifier(std::string(g->name), IdentifierVariant::Greek);
        }
        if (detail::find_symbol(name)) return MathNode::op("\\" + name);
        if (name == "frac") {
            MathNode num = parse_argument("\\frac", at);
            MathNode den = parse_argument("\\frac", at);
            return MathNode::fraction(std::move(num), std::move(den));
        }
        if (name == "sqrt") return MathNode::sqrt(parse_argument("\\sqrt", at));
        if (name == "mathcal") return make_calligraphic(parse_argument("\\mathcal", at));
        if (name == "mbox") return parse_mbox(at);
        throw TexError(ErrorCode::UnknownControlSequence, at, name);
    }

    // \mbox takes its braced argument verbatim from the source.
    MathNode parse_mbox(std::size_t at) {
        if (at_end() || peek().kind == TokenKind::BraceClose) {
            throw TexError(ErrorCode::UnexpectedEnd, at, "missing argument for \\mbox");
        }
        const Token& tok = peek();
        if (tok.kind != TokenKind::BraceOpen) {
            if (tok.kind == TokenKind::Superscript || tok.kind == TokenKind::Subscript) {
                throw TexError(ErrorCode::MisplacedScript, tok.span.begin, "script as argument of \\mbox");
            }
            std::string content = tok.text.substr(digit_offset_);
            advance();
            return MathNode::text(std::move(content));
        }
        const std::size_t open = tok.span.begin;
        int depth = 0;
        for (std::size_t j = pos_; j < tokens_.size(); ++j) {
            if (tokens_[j].kind == TokenKind::BraceOpen) ++depth;
            if (tokens_[j].kind == TokenKind::BraceClose && --depth == 0) {
                const std::size_t begin = tokens_[pos_].span.end;
                const std::size_t end = tokens_[j].span.begin;
                pos_ = j;
                advance();
                if (begin == end) throw TexError(ErrorCode::EmptyArgument, open, "empty \\mbox");
                return MathNode::text(std::string(source_.substr(begin, end - begin)));
            }
        }
        throw TexError(ErrorCode::UnbalancedBraces, open, "unclosed '{'");
    }

    static MathNode make_calligraphic(const MathNode& node) {
        if (node.kind() == NodeKind::Identifier && node.variant() == IdentifierVariant::Plain) {
            return MathNode::identifier(node.value(), IdentifierVariant::Calligraphic);
        }
        if (node.children().empty()) return node;
        std::vector<MathNode> kids;
        for (const auto& c : node.children()) kids.push_back(make_calligraphic(c));
        return node.with_children(std::move(kids));
    }

    std::span<const Token> tokens_;
    std::string_view source_;
    std::size_t pos_ = 0;
    std::size_t digit_offset_ = 0;
};

}  // namespace

FormulaAst parse(std::span<const Token> tokens, std::string_view source) {
    Parser parser(tokens, source);
    return FormulaAst{normalize(parser.parse_formula()), std::string(source)};
}

FormulaAst parse(std::string_view source) {
    const std::vector<Token> tokens = tokenize(source);
    return parse(tokens, source);
}

}  // namespace mathwb::tex

#pragma once

// LaTeX math subset: tokenizer, parser, normalization and canonical form.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mathwb::tex {

enum class TokenKind {
    ControlSequence,
    Letter,
    Digits,
    Operator,
    BraceOpen,
    BraceClose,
    Superscript,
    Subscript,
};

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    friend bool operator==(const Span&, const Span&) = default;
};

/// One lexical unit. For control sequences `text` holds the full source
/// (backslash included); the command name is text.substr(1).
struct Token {
    TokenKind kind;
    std::string text;
    Span span;
    friend bool operator==(const Token&, const Token&) = default;
};

enum class ErrorCode {
    UnknownControlSequence,
    IllegalCharacter,
    UnexpectedEnd,
    UnbalancedBraces,
    EmptyFormula,
    MisplacedScript,
    EmptyArgument,
};

/// Stable snake_case name, used in JSON error bodies.
std::string_view error_code_name(ErrorCode code);

class TexError : public std::runtime_error {
public:
    TexError(ErrorCode code, std::size_t offset, std::string detail);

    ErrorCode code() const noexcept { return code_; }
    std::size_t offset() const noexcept { return offset_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::size_t offset_;
    std::string detail_;
};

enum class NodeKind { Row, Identifier, Number, Operator, Fraction, Sqrt, Script, Text };

enum class IdentifierVariant { Plain, Calligraphic, Greek };

/// A node of the formula tree.
///
/// All node kinds share one representation so that a path of child indices
/// addresses any node uniformly:
///   Row      children = elements
///   Fraction children = [numerator, denominator]
///   Sqrt     children = [radicand]
///   Script   children = [base, sub (if present), sup (if present)]
/// Leaves carry their payload in value(): identifier name (Greek letters by
/// command name, e.g. "alpha"), digit literal, operator source text
/// (e.g. "=" or "\cdot"), or literal text content.
class MathNode {
public:
    static MathNode row(std::vector<MathNode> children);
    static MathNode identifier(std::string name,
                               IdentifierVariant variant = IdentifierVariant::Plain);
    static MathNode number(std::string literal);
    static MathNode op(std::string symbol);
    static MathNode fraction(MathNode numerator, MathNode denominator);
    static MathNode sqrt(MathNode radicand);
    static MathNode script(MathNode base, std::optional<MathNode> sub,
                           std::optional<MathNode> sup);
    static MathNode text(std::string content);

    NodeKind kind() const noexcept { return kind_; }
    const std::string& value() const noexcept { return value_; }
    IdentifierVariant variant() const noexcept { return variant_; }
    std::span<const MathNode> children() const noexcept { return children_; }

    bool has_sub() const noexcept { return has_sub_; }
    bool has_sup() const noexcept { return has_sup_; }
    const MathNode& base() const { return children_.at(0); }
    const MathNode* sub() const { return has_sub_ ? &children_.at(1) : nullptr; }
    const MathNode* sup() const {
        return has_sup_ ? &children_.at(has_sub_ ? 2 : 1) : nullptr;
    }
    const MathNode& numerator() const { return children_.at(0); }
    const MathNode& denominator() const { return children_.at(1); }
    const MathNode& radicand() const { return children_.at(0); }

    /// Copy of this node with its children replaced. For Script nodes the
    /// replacement must keep the same slot layout.
    MathNode with_children(std::vector<MathNode> children) const;

    /// Total number of nodes in this subtree, this one included.
    std::size_t node_count() const noexcept;

    /// Node at `path` (child indices from this node), or nullptr.
    const MathNode* at(std::span<const std::size_t> path) const noexcept;

    friend bool operator==(const MathNode&, const MathNode&) = default;

private:
    MathNode() = default;

    NodeKind kind_ = NodeKind::Row;
    std::string value_;
    IdentifierVariant variant_ = IdentifierVariant::Plain;
    bool has_sub_ = false;
    bool has_sup_ = false;
    std::vector<MathNode> children_;
};

struct FormulaAst {
    MathNode root;
    std::string source_tex;

    /// Structural equality; the source text is not compared.
    bool same_tree(const FormulaAst& other) const { return root == other.root; }
};

/// Splits `input` into tokens. Whitespace is skipped; unknown control
/// sequences and characters outside the grammar raise TexError.
std::vector<Token> tokenize(std::string_view input);

/// Parses a token stream produced by tokenize(input). `source` is needed to
/// recover the verbatim argument of \mbox. The result is normalized.
FormulaAst parse(std::span<const Token> tokens, std::string_view source);

/// tokenize + parse.
FormulaAst parse(std::string_view source);

MathNode normalize(MathNode node);
FormulaAst normalize(FormulaAst ast);

std::string canonical_tex(const MathNode& node);
std::string canonical_tex(const FormulaAst& ast);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// FNV-1a 64 of canonical_tex(normalize(ast)).
std::uint64_t canonical_hash(const FormulaAst& ast);

/// Lower-case 16-digit hex rendering of a hash.
std::string hash_hex(std::uint64_t hash);

/// Command names (without backslash) accepted by the tokenizer.
bool is_supported_command(std::string_view name);

/// Unicode rendering of a Greek command name, e.g. "alpha" -> "α".
std::optional<std::string_view> greek_glyph(std::string_view name);

}  // namespace mathwb::tex

#pragma once

// Presentation MathML and screen-reader text for formula trees.

#include <string>
#include <string_view>

#include "mathwb/tex.hpp"

namespace mathwb::mathml {

struct RenderedFormula {
    std::string mathml;
    std::string alt_text;
    std::string source_tex;
};

/// Byte-stable, unindented MathML with a `math` root element.
std::string render_mathml(const tex::FormulaAst& ast);

/// English linearization, e.g. "E equals m c to the power 2".
std::string render_alt_text(const tex::FormulaAst& ast);

RenderedFormula render(const tex::FormulaAst& ast);

/// Escapes &, <, >, " and ' for XML text and attribute values.
std::string xml_escape(std::string_view text);

}  // namespace mathwb::mathml

#pragma once

#include <string>
#include <string_view>

#include "sleuth/js/ast.hpp"

namespace sleuth::js {

/// Emits compact, whitespace-free source for a tree produced by the parser
/// (or by transformations that keep ESTree shape). Re-parsing the output
/// yields the same tree.
std::string print(const Node* root);

/// ECMAScript Number::toString(10).
std::string format_number(double value);

/// Double-quoted string literal for a WTF-8 value. Non-ASCII code units are
/// written as \u escapes so the output is pure ASCII.
std::string quote_string(std::string_view value);

}  // namespace sleuth::js

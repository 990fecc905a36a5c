#pragma once

#include <string_view>

#include "sleuth/js/ast.hpp"

namespace sleuth::js {

enum class ParseGoal { kModule, kScript };

/// Parses `source` under one goal symbol. Throws ParseError.
Ast parse(std::string_view source, ParseGoal goal);

struct ParsedDocument {
  Ast ast;
  ParseGoal goal;
};

/// Module goal first, script goal second. When both fail, the error that
/// got further into the input is rethrown.
ParsedDocument parse_any(std::string_view source);

}  // namespace sleuth::js

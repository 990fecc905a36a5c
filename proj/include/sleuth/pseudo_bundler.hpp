#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sleuth/js/ast.hpp"

namespace sleuth {

struct SourceFile {
  std::string path;
  std::string source;
};

struct PseudoBundle {
  std::string source;
  /// (original path, index of its wrapper in the module array)
  std::vector<std::pair<std::string, std::size_t>> file_map;
  /// Files dropped because they did not parse, with the parser message.
  std::vector<std::string> warnings;
};

/// Rewrites module syntax of one parsed file in place to CommonJS form:
/// imports become require() bindings, exports become module.exports
/// assignments, import() becomes require(), import.meta becomes module.meta.
void rewrite_esm_to_cjs(js::Ast& ast);

/// `[function(module,exports,require){...}, ...]`, one wrapper per parseable
/// file, in input order. Throws AllFilesUnparseable.
PseudoBundle pseudo_bundle(const std::vector<SourceFile>& files);

}  // namespace sleuth

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sleuth/js/ast.hpp"
#include "sleuth/js/parser.hpp"
#include "sleuth/js/tokens.hpp"

namespace sleuth {

namespace pass {
inline constexpr std::string_view kDropDeadCode = "drop-dead-code";
inline constexpr std::string_view kMergeVars = "merge-vars";
inline constexpr std::string_view kFoldConstants = "fold-constants";
inline constexpr std::string_view kBooleans = "bang-booleans";
inline constexpr std::string_view kVoidUndefined = "void-undefined";
}  // namespace pass

/// Names of every built-in pass in default execution order.
const std::vector<std::string>& builtin_passes();

struct ExternalMinifier {
  std::string executable;
  std::vector<std::string> arguments;
};

struct NormalizationConfig {
  std::vector<std::string> passes = builtin_passes();
  std::optional<ExternalMinifier> external_minifier;

  /// Stable text form; the digest below is taken over it.
  std::string canonical() const;
  std::string digest_hex() const;

  static NormalizationConfig none();
  /// Throws ConfigMismatch for unknown pass names.
  void validate() const;
};

/// Runs the enabled passes over `root` in place until nothing changes.
/// Returns the number of rewrites. New nodes are allocated in `ast`.
std::size_t apply_passes(js::Ast& ast, const std::vector<std::string>& passes);

/// Throws ParseError; external minifier failures fall back to the built-in
/// passes and append a message to `warnings` when given.
std::string normalize(std::string_view source, const NormalizationConfig& config = {},
                      std::vector<std::string>* warnings = nullptr);

/// tokenize(normalize(source, config)).
TokenString normalize_tokens(std::string_view source, const NormalizationConfig& config = {},
                             const TokenVocabulary& vocabulary = TokenVocabulary::standard(),
                             std::string source_id = {},
                             std::vector<std::string>* warnings = nullptr);

/// Parsed, normalized document (the tree `normalize` prints).
js::ParsedDocument normalize_document(std::string_view source, const NormalizationConfig& config,
                                      std::vector<std::string>* warnings = nullptr);

/// Pipes `source` through `tool` (stdin to stdout). Throws ExternalToolError.
std::string run_external_minifier(const ExternalMinifier& tool, std::string_view source);

}  // namespace sleuth

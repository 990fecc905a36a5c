#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sleuth/js/ast.hpp"

namespace sleuth {

using TokenTypeId = std::uint16_t;

/// In-order (pre-order) sequence of AST node types of one document.
struct TokenString {
  std::vector<TokenTypeId> tokens;
  std::string source_id;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const TokenString& other) const { return tokens == other.tokens; }
};

/// Bijection between token ids and node-type names. The standard vocabulary
/// has one entry per ESTree node type; the operator vocabulary additionally
/// splits operator-bearing nodes by operator ("BinaryExpression:+").
class TokenVocabulary {
 public:
  static const TokenVocabulary& standard();
  static const TokenVocabulary& with_operators();
  /// Looks a vocabulary up by its version string. Throws FormatError.
  static const TokenVocabulary& by_version(std::string_view version);

  std::string_view version() const { return version_; }
  std::size_t size() const { return names_.size(); }
  bool distinguishes_operators() const { return operators_; }

  /// Throws UnknownToken.
  std::string_view name(TokenTypeId id) const;
  /// Throws UnknownToken.
  TokenTypeId id(std::string_view name) const;

  TokenTypeId id_for(const js::Node& node) const;

 private:
  TokenVocabulary(std::string version, bool operators);

  std::string version_;
  bool operators_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, TokenTypeId> ids_;
  std::unordered_map<std::string, TokenTypeId> operator_ids_;  // "<type index>|<op>"
};

inline constexpr std::string_view kStandardVocabularyVersion = "estree-nodes/1";
inline constexpr std::string_view kOperatorVocabularyVersion = "estree-nodes+ops/1";

/// Parses (module goal, then script goal) and flattens. Throws EmptyInput and
/// ParseError.
TokenString tokenize(std::string_view source,
                     const TokenVocabulary& vocabulary = TokenVocabulary::standard(),
                     std::string source_id = {});

/// Flattens an already parsed subtree.
std::vector<TokenTypeId> flatten(const js::Node* root,
                                 const TokenVocabulary& vocabulary = TokenVocabulary::standard());

/// Flattens and reports, for every node accepted by `want`, the half-open
/// token range its subtree occupies.
std::vector<TokenTypeId> flatten_with_ranges(
    const js::Node* root, const TokenVocabulary& vocabulary,
    const std::function<bool(const js::Node&)>& want,
    const std::function<void(const js::Node&, std::size_t, std::size_t)>& on_range);

std::string_view token_name(TokenTypeId id,
                            const TokenVocabulary& vocabulary = TokenVocabulary::standard());

}  // namespace sleuth

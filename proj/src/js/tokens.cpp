#include "sleuth/js/tokens.hpp"

#include <array>
#include <utility>

#include "sleuth/error.hpp"
#include "sleuth/js/parser.hpp"

namespace sleuth {

namespace {

using js::NodeType;

struct OperatorFamily {
  NodeType type;
  std::vector<std::string_view> ops;
};

const std::vector<OperatorFamily>& operator_families() {
  static const std::vector<OperatorFamily> families = {
      {NodeType::BinaryExpression,
       {"==", "!=", "===", "!==", "<", "<=", ">", ">=", "<<", ">>", ">>>", "+", "-", "*", "/", "%",
        "**", "|", "^", "&", "in", "instanceof"}},
      {NodeType::LogicalExpression, {"||", "&&", "??"}},
      {NodeType::AssignmentExpression,
       {"=", "+=", "-=", "*=", "/=", "%=", "**=", "<<=", ">>=", ">>>=", "|=", "^=", "&=", "||=",
        "&&=", "?\?="}},
      {NodeType::UnaryExpression, {"-", "+", "!", "~", "typeof", "void", "delete"}},
      {NodeType::UpdateExpression, {"++", "--"}},
  };
  return families;
}

std::string operator_key(NodeType type, std::string_view op) {
  std::string key = std::to_string(static_cast<int>(type));
  key.push_back('|');
  key.append(op);
  return key;
}

}  // namespace

TokenVocabulary::TokenVocabulary(std::string version, bool operators)
    : version_(std::move(version)), operators_(operators) {
  for (std::size_t i = 0; i < js::kNodeTypeCount; ++i) {
    std::string name(js::node_type_name(static_cast<NodeType>(i)));
    ids_.emplace(name, static_cast<TokenTypeId>(names_.size()));
    names_.push_back(std::move(name));
  }
  if (operators_) {
    for (const auto& family : operator_families()) {
      for (std::string_view op : family.ops) {
        std::string name(js::node_type_name(family.type));
        name.push_back(':');
        name.append(op);
        const auto id = static_cast<TokenTypeId>(names_.size());
        ids_.emplace(name, id);
        operator_ids_.emplace(operator_key(family.type, op), id);
        names_.push_back(std::move(name));
      }
    }
  }
}

const TokenVocabulary& TokenVocabulary::standard() {
  static const TokenVocabulary vocabulary(std::string(kStandardVocabularyVersion), false);
  return vocabulary;
}

const TokenVocabulary& TokenVocabulary::with_operators() {
  static const TokenVocabulary vocabulary(std::string(kOperatorVocabularyVersion), true);
  return vocabulary;
}

const TokenVocabulary& TokenVocabulary::by_version(std::string_view version) {
  if (version == kStandardVocabularyVersion) return standard();
  if (version == kOperatorVocabularyVersion) return with_operators();
  throw Error(ErrorCode::kFormatError, "unknown token vocabulary '" + std::string(version) + "'");
}

std::string_view TokenVocabulary::name(TokenTypeId id) const {
  if (id >= names_.size()) {
    throw Error(ErrorCode::kUnknownToken, "token id " + std::to_string(id) + " is not in vocabulary " +
                                              version_);
  }
  return names_[id];
}

TokenTypeId TokenVocabulary::id(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) {
    throw Error(ErrorCode::kUnknownToken,
                "token name '" + std::string(name) + "' is not in vocabulary " + version_);
  }
  return it->second;
}

TokenTypeId TokenVocabulary::id_for(const js::Node& node) const {
  if (operators_ && !node.text.empty()) {
    switch (node.type) {
      case NodeType::BinaryExpression:
      case NodeType::LogicalExpression:
      case NodeType::AssignmentExpression:
      case NodeType::UnaryExpression:
      case NodeType::UpdateExpression: {
        auto it = operator_ids_.find(operator_key(node.type, node.text));
        if (it != operator_ids_.end()) return it->second;
        break;
      }
      default:
        break;
    }
  }
  return static_cast<TokenTypeId>(node.type);
}

std::vector<TokenTypeId> flatten(const js::Node* root, const TokenVocabulary& vocabulary) {
  std::vector<TokenTypeId> out;
  if (root == nullptr) return out;
  std::vector<const js::Node*> stack{root};
  while (!stack.empty()) {
    const js::Node* n = stack.back();
    stack.pop_back();
    out.push_back(vocabulary.id_for(*n));
    for (auto it = n->kids.rbegin(); it != n->kids.rend(); ++it) {
      if (*it != nullptr) stack.push_back(*it);
    }
  }
  return out;
}

std::vector<TokenTypeId> flatten_with_ranges(
    const js::Node* root, const TokenVocabulary& vocabulary,
    const std::function<bool(const js::Node&)>& want,
    const std::function<void(const js::Node&, std::size_t, std::size_t)>& on_range) {
  std::vector<TokenTypeId> out;
  if (root == nullptr) return out;
  struct Frame {
    const js::Node* node;
    std::size_t begin;
    bool closing;
  };
  std::vector<Frame> stack{{root, 0, false}};
  while (!stack.empty()) {
    Frame frame = stack.back();
    stack.pop_back();
    if (frame.closing) {
      on_range(*frame.node, frame.begin, out.size());
      continue;
    }
    const js::Node* n = frame.node;
    if (want(*n)) stack.push_back({n, out.size(), true});
    out.push_back(vocabulary.id_for(*n));
    for (auto it = n->kids.rbegin(); it != n->kids.rend(); ++it) {
      if (*it != nullptr) stack.push_back({*it, 0, false});
    }
  }
  return out;
}

TokenString tokenize(std::string_view source, const TokenVocabulary& vocabulary,
                     std::string source_id) {
  if (source.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyInput, "empty input");
  }
  js::ParsedDocument doc = js::parse_any(source);
  TokenString result;
  result.tokens = flatten(doc.ast.root, vocabulary);
  result.source_id = std::move(source_id);
  return result;
}

std::string_view token_name(TokenTypeId id, const TokenVocabulary& vocabulary) {
  return vocabulary.name(id);
}

}  // namespace sleuth

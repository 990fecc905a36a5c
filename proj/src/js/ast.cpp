#include "sleuth/js/ast.hpp"

#include <array>
#include <vector>

namespace sleuth::js {

namespace {

constexpr std::array<std::string_view, kNodeTypeCount> kNodeTypeNames = {
#define SLEUTH_NAME_ENTRY(name) #name,
    SLEUTH_NODE_TYPES(SLEUTH_NAME_ENTRY)
#undef SLEUTH_NAME_ENTRY
};

}  // namespace

std::string_view node_type_name(NodeType type) {
  return kNodeTypeNames[static_cast<std::size_t>(type)];
}

Node* Ast::clone(const Node* node) {
  if (node == nullptr) return nullptr;
  Node* copy = make(node->type, node->line, node->column);
  copy->sub = node->sub;
  copy->flags = node->flags;
  copy->number = node->number;
  copy->text = node->text;
  copy->extra = node->extra;
  copy->kids.reserve(node->kids.size());
  for (const Node* kid : node->kids) copy->kids.push_back(clone(kid));
  return copy;
}

std::size_t count_nodes(const Node* node) {
  if (node == nullptr) return 0;
  std::size_t count = 0;
  std::vector<const Node*> stack{node};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    ++count;
    for (const Node* kid : n->kids) {
      if (kid != nullptr) stack.push_back(kid);
    }
  }
  return count;
}

bool is_function_like(const Node* node) {
  return node != nullptr &&
         (node->type == NodeType::FunctionExpression || node->type == NodeType::FunctionDeclaration ||
          node->type == NodeType::ArrowFunctionExpression);
}

}  // namespace sleuth::js

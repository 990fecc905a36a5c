#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include "sleuth/js/parser.hpp"
#include "sleuth/js/printer.hpp"

namespace sleuth::testing {

/// Consistent alpha-renaming of every identifier (bindings, references and
/// property names alike) followed by whitespace-free printing.
inline std::string rename_all_identifiers(std::string_view source) {
  js::ParsedDocument doc = js::parse_any(source);
  std::unordered_map<std::string, std::string> names;
  auto fresh = [&](const std::string& old) -> const std::string& {
    auto it = names.find(old);
    if (it != names.end()) return it->second;
    std::string name;
    std::size_t n = names.size();
    do {
      name.push_back(static_cast<char>('a' + n % 26));
      n /= 26;
    } while (n != 0);
    name = "$" + name;
    return names.emplace(old, name).first->second;
  };
  std::vector<js::Node*> stack{doc.ast.root};
  while (!stack.empty()) {
    js::Node* n = stack.back();
    stack.pop_back();
    if (n->type == js::NodeType::Identifier || n->type == js::NodeType::PrivateIdentifier) {
      const bool keep = n->text == "undefined" || n->text == "require" || n->text == "module" ||
                        n->text == "exports" || n->text == "meta" || n->text == "import" ||
                        n->text == "new" || n->text == "target";
      if (!keep) n->text = fresh(n->text);
    }
    for (js::Node* k : n->kids) {
      if (k != nullptr) stack.push_back(k);
    }
  }
  return js::print(doc.ast.root);
}

}  // namespace sleuth::testing

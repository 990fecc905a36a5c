#include "sleuth/pseudo_bundler.hpp"

#include "sleuth/error.hpp"
#include "sleuth/js/parser.hpp"
#include "sleuth/js/printer.hpp"

namespace sleuth {

using js::Node;
using js::NodeType;
namespace flag = js::flag;

namespace {

class CjsRewriter {
 public:
  explicit CjsRewriter(js::Ast& ast) : ast_(ast) {}

  void run() {
    Node* program = ast_.root;
    std::vector<Node*> body;
    std::vector<Node*> trailer;
    for (Node* s : program->kids) {
      switch (s->type) {
        case NodeType::ImportDeclaration:
          rewrite_import(s, body);
          break;
        case NodeType::ExportNamedDeclaration:
          rewrite_export_named(s, body, trailer);
          break;
        case NodeType::ExportDefaultDeclaration:
          rewrite_export_default(s, body, trailer);
          break;
        case NodeType::ExportAllDeclaration:
          rewrite_export_all(s, body);
          break;
        default:
          body.push_back(s);
          break;
      }
    }
    body.insert(body.end(), trailer.begin(), trailer.end());
    program->kids = std::move(body);
    rewrite_expressions(program);
  }

 private:
  Node* ident(const std::string& name) { return ast_.make_identifier(name); }

  Node* member(Node* object, const std::string& property) {
    Node* m = ast_.make(NodeType::MemberExpression);
    m->kids = {object, ident(property)};
    return m;
  }

  Node* require_call(Node* source) {
    Node* call = ast_.make(NodeType::CallExpression);
    call->kids = {ident("require"), source};
    return call;
  }

  Node* statement(Node* expr) {
    Node* s = ast_.make(NodeType::ExpressionStatement);
    s->kids = {expr};
    return s;
  }

  Node* export_assignment(const std::string& exported, Node* value) {
    Node* assign = ast_.make(NodeType::AssignmentExpression);
    assign->text = "=";
    assign->kids = {member(member(ident("module"), "exports"), exported), value};
    return statement(assign);
  }

  Node* declarator(const std::string& name, Node* init) {
    Node* d = ast_.make(NodeType::VariableDeclarator);
    d->kids = {ident(name), init};
    return d;
  }

  Node* var_declaration(std::vector<Node*> declarators) {
    Node* v = ast_.make(NodeType::VariableDeclaration);
    v->sub = static_cast<std::uint8_t>(js::DeclKind::kVar);
    v->kids = std::move(declarators);
    return v;
  }

  std::string fresh_binding() {
    std::string name = counter_ == 0 ? "_i" : "_i" + std::to_string(counter_);
    ++counter_;
    return name;
  }

  static std::string name_of(const Node* n) { return n->text; }  // Identifier or string Literal

  void rewrite_import(Node* s, std::vector<Node*>& body) {
    Node* source = s->kids.back();
    if (s->kids.size() == 1) {
      body.push_back(statement(require_call(source)));
      return;
    }
    const std::string binding = fresh_binding();
    std::vector<Node*> decls{declarator(binding, require_call(source))};
    for (std::size_t i = 0; i + 1 < s->kids.size(); ++i) {
      Node* spec = s->kids[i];
      switch (spec->type) {
        case NodeType::ImportDefaultSpecifier:
          decls.push_back(declarator(spec->kids[0]->text, member(ident(binding), "default")));
          break;
        case NodeType::ImportNamespaceSpecifier:
          decls.push_back(declarator(spec->kids[0]->text, ident(binding)));
          break;
        default:
          decls.push_back(declarator(spec->kids[1]->text, imported_member(binding, spec->kids[0])));
          break;
      }
    }
    body.push_back(var_declaration(std::move(decls)));
  }

  Node* imported_member(const std::string& binding, const Node* name) {
    if (name->type == NodeType::Identifier) return member(ident(binding), name->text);
    Node* m = ast_.make(NodeType::MemberExpression);
    m->set(flag::kComputed);
    m->kids = {ident(binding), ast_.make_string(name->text)};
    return m;
  }

  Node* exported_target(const Node* name, Node* value) {
    if (name->type == NodeType::Identifier) return export_assignment(name->text, value);
    Node* target = ast_.make(NodeType::MemberExpression);
    target->set(flag::kComputed);
    target->kids = {member(ident("module"), "exports"), ast_.make_string(name->text)};
    Node* assign = ast_.make(NodeType::AssignmentExpression);
    assign->text = "=";
    assign->kids = {target, value};
    return statement(assign);
  }

  void declared_names(const Node* decl, std::vector<std::string>& out) {
    switch (decl->type) {
      case NodeType::FunctionDeclaration:
      case NodeType::ClassDeclaration:
        if (decl->kids[0] != nullptr) out.push_back(decl->kids[0]->text);
        break;
      case NodeType::VariableDeclaration: {
        std::vector<const Node*> stack;
        for (const Node* d : decl->kids) stack.push_back(d->kids[0]);
        std::vector<std::string> names;
        while (!stack.empty()) {
          const Node* p = stack.front();
          stack.erase(stack.begin());
          switch (p->type) {
            case NodeType::Identifier: out.push_back(p->text); break;
            case NodeType::ObjectPattern:
              for (const Node* prop : p->kids) {
                stack.push_back(prop->type == NodeType::Property ? prop->kids[1] : prop);
              }
              break;
            case NodeType::ArrayPattern:
              for (const Node* el : p->kids) {
                if (el != nullptr) stack.push_back(el);
              }
              break;
            case NodeType::AssignmentPattern:
            case NodeType::RestElement:
              stack.push_back(p->kids[0]);
              break;
            default: break;
          }
        }
        break;
      }
      default:
        break;
    }
  }

  void rewrite_export_named(Node* s, std::vector<Node*>& body, std::vector<Node*>& trailer) {
    if (s->has(flag::kHasDeclaration)) {
      Node* decl = s->kids[0];
      body.push_back(decl);
      std::vector<std::string> names;
      declared_names(decl, names);
      for (const auto& n : names) trailer.push_back(export_assignment(n, ident(n)));
      return;
    }
    if (s->has(flag::kHasSource)) {
      const std::string binding = fresh_binding();
      body.push_back(var_declaration({declarator(binding, require_call(s->kids.back()))}));
      for (Node* spec : s->kids) {
        if (spec->type != NodeType::ExportSpecifier) continue;
        Node* value = spec->kids[0]->type == NodeType::Identifier && spec->kids[0]->text == "default"
                          ? member(ident(binding), "default")
                          : imported_member(binding, spec->kids[0]);
        body.push_back(exported_target(spec->kids[1], value));
      }
      return;
    }
    for (Node* spec : s->kids) {
      if (spec->type != NodeType::ExportSpecifier) continue;
      trailer.push_back(exported_target(spec->kids[1], ident(name_of(spec->kids[0]))));
    }
  }

  void rewrite_export_default(Node* s, std::vector<Node*>& body, std::vector<Node*>& trailer) {
    Node* decl = s->kids[0];
    const bool declaration = decl->type == NodeType::FunctionDeclaration || decl->type == NodeType::ClassDeclaration;
    if (declaration && decl->kids[0] != nullptr) {
      body.push_back(decl);
      trailer.push_back(export_assignment("default", ident(decl->kids[0]->text)));
      return;
    }
    if (declaration) {
      decl->type = decl->type == NodeType::FunctionDeclaration ? NodeType::FunctionExpression
                                                                : NodeType::ClassExpression;
    }
    body.push_back(export_assignment("default", decl));
  }

  void rewrite_export_all(Node* s, std::vector<Node*>& body) {
    Node* source = s->kids[1];
    if (s->kids[0] != nullptr) {
      body.push_back(exported_target(s->kids[0], require_call(source)));
      return;
    }
    Node* call = ast_.make(NodeType::CallExpression);
    call->kids = {member(ident("Object"), "assign"), member(ident("module"), "exports"), require_call(source)};
    body.push_back(statement(call));
  }

  void rewrite_expressions(Node* root) {
    std::vector<Node*> stack{root};
    while (!stack.empty()) {
      Node* n = stack.back();
      stack.pop_back();
      for (Node*& k : n->kids) {
        if (k == nullptr) continue;
        if (k->type == NodeType::ImportExpression) {
          Node* call = require_call(k->kids[0]);
          k = call;
        } else if (k->type == NodeType::MetaProperty && k->kids[0]->text == "import") {
          k = member(ident("module"), "meta");
        }
        stack.push_back(k);
      }
    }
  }

  js::Ast& ast_;
  int counter_ = 0;
};

bool has_top_level_await(const Node* root) {
  std::vector<const Node*> stack{root};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->type == NodeType::AwaitExpression) return true;
    if (n->has(flag::kAwait) && n->type == NodeType::ForOfStatement) return true;
    if (js::is_function_like(n)) continue;
    for (const Node* k : n->kids) {
      if (k != nullptr) stack.push_back(k);
    }
  }
  return false;
}

}  // namespace

void rewrite_esm_to_cjs(js::Ast& ast) { CjsRewriter(ast).run(); }

PseudoBundle pseudo_bundle(const std::vector<SourceFile>& files) {
  PseudoBundle out;
  js::Ast bundle;
  Node* array = bundle.make(NodeType::ArrayExpression);
  std::vector<js::Ast> parsed;  // keeps wrapped bodies alive until printing
  parsed.reserve(files.size());
  for (const auto& file : files) {
    js::ParsedDocument doc;
    try {
      doc = js::parse_any(file.source);
    } catch (const Error& e) {
      out.warnings.push_back(file.path + ": " + e.what());
      continue;
    }
    rewrite_esm_to_cjs(doc.ast);
    const bool async = has_top_level_await(doc.ast.root);
    Node* fn = bundle.make(NodeType::FunctionExpression);
    if (async) fn->set(flag::kAsync);
    Node* body = bundle.make(NodeType::BlockStatement);
    body->kids = doc.ast.root->kids;
    fn->kids = {nullptr, bundle.make_identifier("module"), bundle.make_identifier("exports"),
                bundle.make_identifier("require"), body};
    out.file_map.emplace_back(file.path, array->kids.size());
    array->kids.push_back(fn);
    parsed.push_back(std::move(doc.ast));
  }
  if (array->kids.empty()) {
    throw Error(ErrorCode::kAllFilesUnparseable,
                files.empty() ? "no files to bundle" : "no input file parses: " + out.warnings.front());
  }
  Node* stmt = bundle.make(NodeType::ExpressionStatement);
  stmt->kids = {array};
  bundle.root = bundle.make(NodeType::Program);
  bundle.root->kids = {stmt};
  out.source = js::print(bundle.root);
  return out;
}

}  // namespace sleuth

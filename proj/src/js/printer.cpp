#include "sleuth/js/printer.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "sleuth/js/lexer.hpp"

namespace sleuth::js {

namespace {

enum Prec : int {
  kSequence = 0,
  kAssign = 1,
  kConditional = 2,
  kNullish = 3,
  kOr = 4,
  kAnd = 5,
  kBitOr = 6,
  kBitXor = 7,
  kBitAnd = 8,
  kEquality = 9,
  kRelational = 10,
  kShift = 11,
  kAdditive = 12,
  kMultiplicative = 13,
  kExponent = 14,
  kUnary = 15,
  kUpdate = 16,
  kLhs = 17,
  kCall = 18,
  kPrimary = 19,
};

int binary_prec(std::string_view op) {
  if (op == "??") return kNullish;
  if (op == "||") return kOr;
  if (op == "&&") return kAnd;
  if (op == "|") return kBitOr;
  if (op == "^") return kBitXor;
  if (op == "&") return kBitAnd;
  if (op == "==" || op == "!=" || op == "===" || op == "!==") return kEquality;
  if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "in" || op == "instanceof") {
    return kRelational;
  }
  if (op == "<<" || op == ">>" || op == ">>>") return kShift;
  if (op == "+" || op == "-") return kAdditive;
  if (op == "*" || op == "/" || op == "%") return kMultiplicative;
  if (op == "**") return kExponent;
  return kPrimary;
}

int precedence(const Node* n) {
  switch (n->type) {
    case NodeType::SequenceExpression:
      return kSequence;
    case NodeType::AssignmentExpression:
    case NodeType::ArrowFunctionExpression:
    case NodeType::YieldExpression:
      return kAssign;
    case NodeType::ConditionalExpression:
      return kConditional;
    case NodeType::BinaryExpression:
    case NodeType::LogicalExpression:
      return binary_prec(n->text);
    case NodeType::UnaryExpression:
    case NodeType::AwaitExpression:
      return kUnary;
    case NodeType::UpdateExpression:
      return kUpdate;
    case NodeType::CallExpression:
    case NodeType::NewExpression:
    case NodeType::MemberExpression:
    case NodeType::TaggedTemplateExpression:
    case NodeType::ChainExpression:
    case NodeType::ImportExpression:
    case NodeType::MetaProperty:
      return kCall;
    default:
      return kPrimary;
  }
}

bool is_word_char(unsigned char c) { return is_id_part_ascii(c) || c == '\\' || c >= 0x80; }

bool is_logical_mix(const Node* parent, const Node* child) {
  if (child->type != NodeType::LogicalExpression) return false;
  const bool parent_nullish = parent->text == "??";
  const bool child_nullish = child->text == "??";
  return parent_nullish != child_nullish;
}

/// Leftmost node of an expression as it will be emitted.
const Node* leftmost(const Node* n) {
  for (;;) {
    switch (n->type) {
      case NodeType::BinaryExpression:
      case NodeType::LogicalExpression:
      case NodeType::AssignmentExpression:
      case NodeType::AssignmentPattern:
      case NodeType::ConditionalExpression:
      case NodeType::MemberExpression:
      case NodeType::CallExpression:
      case NodeType::TaggedTemplateExpression:
      case NodeType::SequenceExpression:
      case NodeType::ChainExpression:
        n = n->kids[0];
        break;
      case NodeType::UpdateExpression:
        if (n->has(flag::kPrefix)) return n;
        n = n->kids[0];
        break;
      default:
        return n;
    }
  }
}

bool statement_start_hazard(const Node* expr) {
  const Node* first = leftmost(expr);
  switch (first->type) {
    case NodeType::ObjectExpression:
    case NodeType::ObjectPattern:
    case NodeType::FunctionExpression:
    case NodeType::ClassExpression:
      return true;
    case NodeType::Identifier:
      return first->text == "let";
    default:
      return false;
  }
}

bool arrow_body_hazard(const Node* expr) {
  const Node* first = leftmost(expr);
  return first->type == NodeType::ObjectExpression || first->type == NodeType::ObjectPattern;
}

bool callee_contains_call(const Node* n) {
  for (;;) {
    switch (n->type) {
      case NodeType::CallExpression:
      case NodeType::ImportExpression:
        return true;
      case NodeType::MemberExpression:
      case NodeType::TaggedTemplateExpression:
        n = n->kids[0];
        break;
      default:
        return false;
    }
  }
}

/// An if-without-else reachable as the trailing statement of `n`; printing it
/// before an `else` would capture that else.
bool ends_with_dangling_if(const Node* n) {
  for (;;) {
    switch (n->type) {
      case NodeType::IfStatement:
        if (n->kids[2] == nullptr) return true;
        n = n->kids[2];
        break;
      case NodeType::LabeledStatement:
      case NodeType::WithStatement:
      case NodeType::WhileStatement:
        n = n->kids[1];
        break;
      case NodeType::ForStatement:
        n = n->kids[3];
        break;
      case NodeType::ForInStatement:
      case NodeType::ForOfStatement:
        n = n->kids[2];
        break;
      default:
        return false;
    }
  }
}

class Printer {
 public:
  std::string take() { return std::move(out_); }

  void statement(const Node* n) {
    switch (n->type) {
      case NodeType::Program:
        for (const Node* s : n->kids) statement(s);
        break;
      case NodeType::ExpressionStatement: {
        const Node* expr = n->kids[0];
        if (statement_start_hazard(expr)) {
          emit("(");
          expression(expr, kSequence);
          emit(")");
        } else {
          expression(expr, kSequence);
        }
        emit(";");
        break;
      }
      case NodeType::BlockStatement:
      case NodeType::StaticBlock:
        block(n);
        break;
      case NodeType::EmptyStatement:
        emit(";");
        break;
      case NodeType::DebuggerStatement:
        emit("debugger");
        emit(";");
        break;
      case NodeType::WithStatement:
        emit("with");
        emit("(");
        expression(n->kids[0], kSequence);
        emit(")");
        statement(n->kids[1]);
        break;
      case NodeType::ReturnStatement:
      case NodeType::ThrowStatement:
        emit(n->type == NodeType::ReturnStatement ? "return" : "throw");
        if (n->kids[0] != nullptr) expression(n->kids[0], kSequence);
        emit(";");
        break;
      case NodeType::LabeledStatement:
        expression(n->kids[0], kPrimary);
        emit(":");
        statement(n->kids[1]);
        break;
      case NodeType::BreakStatement:
      case NodeType::ContinueStatement:
        emit(n->type == NodeType::BreakStatement ? "break" : "continue");
        if (n->kids[0] != nullptr) expression(n->kids[0], kPrimary);
        emit(";");
        break;
      case NodeType::IfStatement:
        emit("if");
        emit("(");
        expression(n->kids[0], kSequence);
        emit(")");
        if (n->kids[2] != nullptr && ends_with_dangling_if(n->kids[1])) {
          emit("{");
          statement(n->kids[1]);
          emit("}");
        } else {
          statement(n->kids[1]);
        }
        if (n->kids[2] != nullptr) {
          emit("else");
          statement(n->kids[2]);
        }
        break;
      case NodeType::SwitchStatement:
        emit("switch");
        emit("(");
        expression(n->kids[0], kSequence);
        emit(")");
        emit("{");
        for (std::size_t i = 1; i < n->kids.size(); ++i) {
          const Node* c = n->kids[i];
          if (c->kids[0] != nullptr) {
            emit("case");
            expression(c->kids[0], kSequence);
          } else {
            emit("default");
          }
          emit(":");
          for (std::size_t j = 1; j < c->kids.size(); ++j) statement(c->kids[j]);
        }
        emit("}");
        break;
      case NodeType::TryStatement:
        emit("try");
        block(n->kids[0]);
        if (const Node* handler = n->kids[1]) {
          emit("catch");
          if (handler->kids[0] != nullptr) {
            emit("(");
            pattern(handler->kids[0]);
            emit(")");
          }
          block(handler->kids[1]);
        }
        if (n->kids[2] != nullptr) {
          emit("finally");
          block(n->kids[2]);
        }
        break;
      case NodeType::WhileStatement:
        emit("while");
        emit("(");
        expression(n->kids[0], kSequence);
        emit(")");
        statement(n->kids[1]);
        break;
      case NodeType::DoWhileStatement:
        emit("do");
        statement(n->kids[0]);
        emit("while");
        emit("(");
        expression(n->kids[1], kSequence);
        emit(")");
        emit(";");
        break;
      case NodeType::ForStatement:
        emit("for");
        emit("(");
        if (const Node* init = n->kids[0]) {
          if (init->type == NodeType::VariableDeclaration) {
            declaration(init, true);
          } else {
            expression(init, kSequence, true);
          }
        }
        emit(";");
        if (n->kids[1] != nullptr) expression(n->kids[1], kSequence);
        emit(";");
        if (n->kids[2] != nullptr) expression(n->kids[2], kSequence);
        emit(")");
        statement(n->kids[3]);
        break;
      case NodeType::ForInStatement:
      case NodeType::ForOfStatement: {
        const bool of = n->type == NodeType::ForOfStatement;
        emit("for");
        if (n->has(flag::kAwait)) emit("await");
        emit("(");
        const Node* left = n->kids[0];
        if (left->type == NodeType::VariableDeclaration) {
          declaration(left, true);
        } else {
          pattern(left);
        }
        emit(of ? "of" : "in");
        expression(n->kids[1], of ? kAssign : kSequence);
        emit(")");
        statement(n->kids[2]);
        break;
      }
      case NodeType::FunctionDeclaration:
        function(n);
        break;
      case NodeType::VariableDeclaration:
        declaration(n, false);
        emit(";");
        break;
      case NodeType::ClassDeclaration:
        klass(n);
        break;
      case NodeType::ImportDeclaration:
        import_declaration(n);
        break;
      case NodeType::ExportNamedDeclaration:
        emit("export");
        if (n->has(flag::kHasDeclaration)) {
          statement(n->kids[0]);
        } else {
          emit("{");
          bool first = true;
          for (const Node* kid : n->kids) {
            if (kid->type != NodeType::ExportSpecifier) continue;
            if (!first) emit(",");
            first = false;
            module_name(kid->kids[0]);
            if (!same_name(kid->kids[0], kid->kids[1])) {
              emit("as");
              module_name(kid->kids[1]);
            }
          }
          emit("}");
          if (n->has(flag::kHasSource)) {
            emit("from");
            expression(n->kids.back(), kPrimary);
          }
          emit(";");
        }
        break;
      case NodeType::ExportDefaultDeclaration: {
        emit("export");
        emit("default");
        const Node* decl = n->kids[0];
        if (decl->type == NodeType::FunctionDeclaration || decl->type == NodeType::ClassDeclaration) {
          statement(decl);
        } else {
          if (statement_start_hazard(decl)) {
            emit("(");
            expression(decl, kAssign);
            emit(")");
          } else {
            expression(decl, kAssign);
          }
          emit(";");
        }
        break;
      }
      case NodeType::ExportAllDeclaration:
        emit("export");
        emit("*");
        if (n->kids[0] != nullptr) {
          emit("as");
          module_name(n->kids[0]);
        }
        emit("from");
        expression(n->kids[1], kPrimary);
        emit(";");
        break;
      default:
        // An expression in statement position (transformation output).
        expression(n, kSequence);
        emit(";");
        break;
    }
  }

  void expression(const Node* n, int min_prec, bool no_in = false) {
    const bool needs_paren = precedence(n) < min_prec ||
                             (no_in && n->type == NodeType::BinaryExpression && n->text == "in");
    if (needs_paren) {
      emit("(");
      expression_body(n, false);
      emit(")");
    } else {
      expression_body(n, no_in);
    }
  }

 private:
  void emit(std::string_view s) {
    if (s.empty()) return;
    if (!out_.empty()) {
      const auto last = static_cast<unsigned char>(out_.back());
      const auto first = static_cast<unsigned char>(s.front());
      const bool space = (is_word_char(last) && is_word_char(first)) ||
                         (last == '+' && first == '+') || (last == '-' && first == '-') ||
                         (last == '/' && (first == '/' || first == '*')) ||
                         (last == '<' && first == '!');
      if (space) out_.push_back(' ');
    }
    out_.append(s);
  }

  void block(const Node* n) {
    if (n->type == NodeType::StaticBlock) emit("static");
    emit("{");
    for (const Node* s : n->kids) statement(s);
    emit("}");
  }

  static bool same_name(const Node* a, const Node* b) {
    return a->type == NodeType::Identifier && b->type == NodeType::Identifier && a->text == b->text;
  }

  void module_name(const Node* n) {
    if (n->type == NodeType::Literal) {
      emit(quote_string(n->text));
    } else {
      emit(n->text);
    }
  }

  void import_declaration(const Node* n) {
    emit("import");
    const Node* source = n->kids.back();
    if (n->kids.size() == 1) {
      expression(source, kPrimary);
      emit(";");
      return;
    }
    bool first = true;
    bool in_braces = false;
    for (std::size_t i = 0; i + 1 < n->kids.size(); ++i) {
      const Node* spec = n->kids[i];
      if (spec->type == NodeType::ImportSpecifier) {
        if (!in_braces) {
          if (!first) emit(",");
          emit("{");
          in_braces = true;
          first = true;
        }
        if (!first) emit(",");
        module_name(spec->kids[0]);
        if (!same_name(spec->kids[0], spec->kids[1])) {
          emit("as");
          emit(spec->kids[1]->text);
        }
      } else {
        if (!first) emit(",");
        if (spec->type == NodeType::ImportNamespaceSpecifier) {
          emit("*");
          emit("as");
        }
        emit(spec->kids[0]->text);
      }
      first = false;
    }
    if (in_braces) emit("}");
    emit("from");
    expression(source, kPrimary);
    emit(";");
  }

  void declaration(const Node* n, bool no_in) {
    switch (n->decl_kind()) {
      case DeclKind::kVar: emit("var"); break;
      case DeclKind::kLet: emit("let"); break;
      case DeclKind::kConst: emit("const"); break;
    }
    bool first = true;
    for (const Node* d : n->kids) {
      if (!first) emit(",");
      first = false;
      pattern(d->kids[0]);
      if (d->kids[1] != nullptr) {
        emit("=");
        expression(d->kids[1], kAssign, no_in);
      }
    }
  }

  void params_and_body(const Node* fn, std::size_t first_param) {
    emit("(");
    const std::size_t end = fn->kids.size() - 1;
    for (std::size_t i = first_param; i < end; ++i) {
      if (i != first_param) emit(",");
      pattern(fn->kids[i]);
    }
    emit(")");
    block(fn->kids.back());
  }

  void function(const Node* n) {
    if (n->has(flag::kAsync)) emit("async");
    emit("function");
    if (n->has(flag::kGenerator)) emit("*");
    if (n->kids[0] != nullptr) emit(n->kids[0]->text);
    params_and_body(n, 1);
  }

  void klass(const Node* n) {
    emit("class");
    if (n->kids[0] != nullptr) emit(n->kids[0]->text);
    if (n->kids[1] != nullptr) {
      emit("extends");
      expression(n->kids[1], kCall);
    }
    emit("{");
    for (const Node* member : n->kids[2]->kids) class_member(member);
    emit("}");
  }

  void property_key(const Node* key, bool computed) {
    if (computed) {
      emit("[");
      expression(key, kAssign);
      emit("]");
      return;
    }
    switch (key->type) {
      case NodeType::Identifier:
        emit(key->text);
        break;
      case NodeType::PrivateIdentifier:
        emit("#" + key->text);
        break;
      default:
        expression(key, kPrimary);
        break;
    }
  }

  void method(const Node* key, bool computed, PropKind kind, const Node* fn) {
    if (kind == PropKind::kGet) emit("get");
    if (kind == PropKind::kSet) emit("set");
    if (fn->has(flag::kAsync)) emit("async");
    if (fn->has(flag::kGenerator)) emit("*");
    property_key(key, computed);
    params_and_body(fn, 1);
  }

  void class_member(const Node* m) {
    switch (m->type) {
      case NodeType::MethodDefinition:
        if (m->has(flag::kStatic)) emit("static");
        method(m->kids[0], m->has(flag::kComputed), m->prop_kind(), m->kids[1]);
        break;
      case NodeType::PropertyDefinition:
        if (m->has(flag::kStatic)) emit("static");
        property_key(m->kids[0], m->has(flag::kComputed));
        if (m->kids[1] != nullptr) {
          emit("=");
          expression(m->kids[1], kAssign);
        }
        emit(";");
        break;
      case NodeType::StaticBlock:
        block(m);
        break;
      default:
        break;
    }
  }

  void property(const Node* p, bool in_pattern) {
    if (p->type != NodeType::Property) {
      expression_or_pattern(p, in_pattern);
      return;
    }
    const Node* key = p->kids[0];
    const Node* value = p->kids[1];
    const bool computed = p->has(flag::kComputed);
    if (p->prop_kind() == PropKind::kGet || p->prop_kind() == PropKind::kSet ||
        p->has(flag::kMethod)) {
      method(key, computed, p->prop_kind(), value);
      return;
    }
    if (p->has(flag::kShorthand) && !computed && key->type == NodeType::Identifier) {
      if (same_name(key, value)) {
        emit(key->text);
        return;
      }
      if (value->type == NodeType::AssignmentPattern && same_name(key, value->kids[0])) {
        emit(key->text);
        emit("=");
        expression(value->kids[1], kAssign);
        return;
      }
    }
    property_key(key, computed);
    emit(":");
    expression_or_pattern(value, in_pattern);
  }

  void expression_or_pattern(const Node* n, bool in_pattern) {
    if (in_pattern) {
      pattern(n);
    } else {
      expression(n, kAssign);
    }
  }

  void pattern(const Node* n) {
    switch (n->type) {
      case NodeType::ObjectPattern:
        emit("{");
        for (std::size_t i = 0; i < n->kids.size(); ++i) {
          if (i != 0) emit(",");
          property(n->kids[i], true);
        }
        emit("}");
        break;
      case NodeType::ArrayPattern:
        array_items(n, true);
        break;
      case NodeType::AssignmentPattern:
        pattern(n->kids[0]);
        emit("=");
        expression(n->kids[1], kAssign);
        break;
      case NodeType::RestElement:
        emit("...");
        pattern(n->kids[0]);
        break;
      default:
        expression(n, kLhs);
        break;
    }
  }

  void array_items(const Node* n, bool in_pattern) {
    emit("[");
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      if (i != 0) emit(",");
      if (n->kids[i] != nullptr) expression_or_pattern(n->kids[i], in_pattern);
    }
    if (!n->kids.empty() && n->kids.back() == nullptr) emit(",");
    emit("]");
  }

  void arguments(const Node* n) {
    emit("(");
    for (std::size_t i = 1; i < n->kids.size(); ++i) {
      if (i != 1) emit(",");
      expression(n->kids[i], kAssign);
    }
    emit(")");
  }

  void object_operand(const Node* obj) {
    const bool force = obj->type == NodeType::ChainExpression ||
                       (obj->type == NodeType::Literal && obj->literal_kind() == LiteralKind::kNumber);
    if (force) {
      emit("(");
      expression(obj, kSequence);
      emit(")");
    } else {
      expression(obj, kCall);
    }
  }

  void literal(const Node* n) {
    switch (n->literal_kind()) {
      case LiteralKind::kString:
        emit(quote_string(n->text));
        break;
      case LiteralKind::kNumber:
        emit(format_number(n->number));
        break;
      case LiteralKind::kBigInt:
        emit(n->text + "n");
        break;
      case LiteralKind::kBoolean:
        emit(n->number != 0.0 ? "true" : "false");
        break;
      case LiteralKind::kNull:
        emit("null");
        break;
      case LiteralKind::kRegExp:
        emit("/" + n->text + "/" + n->extra);
        break;
    }
  }

  void expression_body(const Node* n, bool no_in) {
    switch (n->type) {
      case NodeType::Identifier:
        emit(n->text);
        break;
      case NodeType::PrivateIdentifier:
        emit("#" + n->text);
        break;
      case NodeType::Literal:
        literal(n);
        break;
      case NodeType::ThisExpression:
        emit("this");
        break;
      case NodeType::Super:
        emit("super");
        break;
      case NodeType::ArrayExpression:
      case NodeType::ArrayPattern:
        array_items(n, n->type == NodeType::ArrayPattern);
        break;
      case NodeType::ObjectExpression:
      case NodeType::ObjectPattern: {
        const bool in_pattern = n->type == NodeType::ObjectPattern;
        emit("{");
        for (std::size_t i = 0; i < n->kids.size(); ++i) {
          if (i != 0) emit(",");
          property(n->kids[i], in_pattern);
        }
        emit("}");
        break;
      }
      case NodeType::FunctionExpression:
        function(n);
        break;
      case NodeType::ArrowFunctionExpression: {
        if (n->has(flag::kAsync)) emit("async");
        emit("(");
        const std::size_t end = n->kids.size() - 1;
        for (std::size_t i = 0; i < end; ++i) {
          if (i != 0) emit(",");
          pattern(n->kids[i]);
        }
        emit(")");
        emit("=>");
        const Node* body = n->kids.back();
        if (body->type == NodeType::BlockStatement) {
          block(body);
        } else if (arrow_body_hazard(body)) {
          emit("(");
          expression(body, kSequence);
          emit(")");
        } else {
          expression(body, kAssign, no_in);
        }
        break;
      }
      case NodeType::ClassExpression:
        klass(n);
        break;
      case NodeType::TemplateLiteral:
        template_literal(n);
        break;
      case NodeType::TaggedTemplateExpression:
        object_operand(n->kids[0]);
        template_literal(n->kids[1]);
        break;
      case NodeType::UnaryExpression:
        emit(n->text);
        expression(n->kids[0], kUnary, no_in);
        break;
      case NodeType::UpdateExpression:
        if (n->has(flag::kPrefix)) {
          emit(n->text);
          expression(n->kids[0], kUnary, no_in);
        } else {
          expression(n->kids[0], kLhs, no_in);
          emit(n->text);
        }
        break;
      case NodeType::AwaitExpression:
        emit("await");
        expression(n->kids[0], kUnary, no_in);
        break;
      case NodeType::YieldExpression:
        emit("yield");
        if (n->has(flag::kDelegate)) emit("*");
        if (n->kids[0] != nullptr) expression(n->kids[0], kAssign, no_in);
        break;
      case NodeType::BinaryExpression:
      case NodeType::LogicalExpression:
        binary(n, no_in);
        break;
      case NodeType::AssignmentExpression:
        pattern(n->kids[0]);
        emit(n->text);
        expression(n->kids[1], kAssign, no_in);
        break;
      case NodeType::AssignmentPattern:
        pattern(n);
        break;
      case NodeType::ConditionalExpression:
        expression(n->kids[0], kNullish, no_in);
        emit("?");
        expression(n->kids[1], kAssign);
        emit(":");
        expression(n->kids[2], kAssign, no_in);
        break;
      case NodeType::SequenceExpression:
        for (std::size_t i = 0; i < n->kids.size(); ++i) {
          if (i != 0) emit(",");
          expression(n->kids[i], kAssign, no_in);
        }
        break;
      case NodeType::MemberExpression:
        object_operand(n->kids[0]);
        if (n->has(flag::kComputed)) {
          emit(n->has(flag::kOptional) ? "?.[" : "[");
          expression(n->kids[1], kSequence);
          emit("]");
        } else {
          emit(n->has(flag::kOptional) ? "?." : ".");
          if (n->kids[1]->type == NodeType::PrivateIdentifier) {
            emit("#" + n->kids[1]->text);
          } else {
            emit(n->kids[1]->text);
          }
        }
        break;
      case NodeType::CallExpression:
        object_operand(n->kids[0]);
        if (n->has(flag::kOptional)) emit("?.");
        arguments(n);
        break;
      case NodeType::NewExpression: {
        emit("new");
        const Node* callee = n->kids[0];
        if (callee_contains_call(callee) || callee->type == NodeType::ChainExpression) {
          emit("(");
          expression(callee, kSequence);
          emit(")");
        } else {
          expression(callee, kCall);
        }
        arguments(n);
        break;
      }
      case NodeType::ChainExpression:
        expression_body(n->kids[0], no_in);
        break;
      case NodeType::MetaProperty:
        emit(n->kids[0]->text);
        emit(".");
        emit(n->kids[1]->text);
        break;
      case NodeType::ImportExpression:
        emit("import");
        emit("(");
        expression(n->kids[0], kAssign);
        emit(")");
        break;
      case NodeType::SpreadElement:
      case NodeType::RestElement:
        emit("...");
        expression(n->kids[0], kAssign);
        break;
      default:
        break;
    }
  }

  void binary(const Node* n, bool no_in) {
    const int prec = binary_prec(n->text);
    const bool exponent = n->text == "**";
    const Node* left = n->kids[0];
    const Node* right = n->kids[1];
    const int left_min = exponent ? kUpdate : prec;
    const int right_min = exponent ? prec : prec + 1;
    if (n->type == NodeType::LogicalExpression && is_logical_mix(n, left)) {
      emit("(");
      expression(left, kSequence);
      emit(")");
    } else {
      expression(left, left_min, no_in);
    }
    emit(n->text);
    if (n->type == NodeType::LogicalExpression && is_logical_mix(n, right)) {
      emit("(");
      expression(right, kSequence);
      emit(")");
    } else {
      expression(right, right_min, no_in);
    }
  }

  void template_literal(const Node* n) {
    emit("`");
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      const Node* k = n->kids[i];
      if (k->type == NodeType::TemplateElement) {
        out_.append(k->text);
        out_.append(k->has(flag::kTail) ? "`" : "${");
      } else {
        expression(k, kSequence);
        out_.push_back('}');
      }
    }
  }

  std::string out_;
};

}  // namespace

std::string print(const Node* root) {
  Printer printer;
  if (root != nullptr) printer.statement(root);
  return printer.take();
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NaN";
  if (value == 0.0) return "0";
  if (value < 0) return "-" + format_number(-value);
  if (std::isinf(value)) return "Infinity";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific);
  std::string sci(buf, res.ptr);
  // sci looks like "d[.ddd]e[+-]XX".
  const auto e = sci.find('e');
  std::string digits;
  for (std::size_t i = 0; i < e; ++i) {
    if (sci[i] != '.') digits.push_back(sci[i]);
  }
  const int exponent = std::stoi(sci.substr(e + 1));
  const int k = static_cast<int>(digits.size());
  const int n = exponent + 1;
  std::string out;
  if (k <= n && n <= 21) {
    out = digits + std::string(static_cast<std::size_t>(n - k), '0');
  } else if (0 < n && n <= 21) {
    out = digits.substr(0, static_cast<std::size_t>(n)) + "." + digits.substr(static_cast<std::size_t>(n));
  } else if (-6 < n && n <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-n), '0') + digits;
  } else {
    out = digits.substr(0, 1);
    if (k > 1) out += "." + digits.substr(1);
    out += "e";
    out += (n - 1 >= 0) ? "+" : "-";
    out += std::to_string(std::abs(n - 1));
  }
  return out;
}

std::string quote_string(std::string_view value) {
  std::string out = "\"";
  std::size_t pos = 0;
  char buf[16];
  while (pos < value.size()) {
    const std::uint32_t cp = decode_utf8(value, pos);
    switch (cp) {
      case '"': out += "\\\""; continue;
      case '\\': out += "\\\\"; continue;
      case '\n': out += "\\n"; continue;
      case '\r': out += "\\r"; continue;
      case '\t': out += "\\t"; continue;
      case '\b': out += "\\b"; continue;
      case '\f': out += "\\f"; continue;
      case '\v': out += "\\v"; continue;
      default: break;
    }
    if (cp == 0) {
      const bool digit_follows = pos < value.size() && value[pos] >= '0' && value[pos] <= '9';
      out += digit_follows ? "\\x00" : "\\0";
    } else if (cp < 0x20 || cp == 0x7F) {
      std::snprintf(buf, sizeof(buf), "\\x%02X", static_cast<unsigned>(cp));
      out += buf;
    } else if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x10000) {
      std::snprintf(buf, sizeof(buf), "\\u%04X", static_cast<unsigned>(cp));
      out += buf;
    } else {
      const std::uint32_t v = cp - 0x10000;
      std::snprintf(buf, sizeof(buf), "\\u%04X\\u%04X", static_cast<unsigned>(0xD800 + (v >> 10)),
                    static_cast<unsigned>(0xDC00 + (v & 0x3FF)));
      out += buf;
    }
  }
  out.push_back('"');
  return out;
}

}  // namespace sleuth::js

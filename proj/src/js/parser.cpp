#include "sleuth/js/parser.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "sleuth/error.hpp"
#include "sleuth/js/lexer.hpp"

namespace sleuth::js {

namespace {

constexpr int kMaxDepth = 1500;

constexpr std::array<std::string_view, 36> kReservedWords = {
    "break",   "case",     "catch",      "class",  "const",  "continue", "debugger", "default",
    "delete",  "do",       "else",       "export", "extends", "finally", "for",      "function",
    "if",      "import",   "in",         "instanceof", "new", "return",  "super",    "switch",
    "this",    "throw",    "try",        "typeof", "var",    "void",     "while",    "with",
    "null",    "true",     "false",      "enum"};

constexpr std::array<std::string_view, 9> kStrictReserved = {
    "implements", "interface", "let",    "package", "private",
    "protected",  "public",    "static", "yield"};

constexpr std::array<std::string_view, 16> kAssignOps = {
    "=",   "+=",  "-=",  "*=",  "/=",  "%=",   "**=", "<<=",
    ">>=", ">>>=", "&=", "|=",  "^=",  "&&=", "||=", "?\?="};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& list, std::string_view s) {
  for (auto item : list) {
    if (item == s) return true;
  }
  return false;
}

class Parser {
 public:
  Parser(std::string_view source, ParseGoal goal)
      : lex_(source), module_(goal == ParseGoal::kModule), strict_(module_) {}

  Ast run() {
    advance();
    Node* program = make(NodeType::Program);
    if (module_) program->set(flag::kModule);
    parse_directives_and_body(program->kids, [this] { return at_eof(); });
    ast_.root = program;
    return std::move(ast_);
  }

 private:
  // ---- token plumbing -------------------------------------------------

  void advance() { tok_ = lex_.next(); }

  Token peek() {
    const auto saved = lex_.state();
    Token t = lex_.next();
    lex_.restore(saved);
    return t;
  }

  bool at(std::string_view punct) const { return tok_.is(punct); }
  bool at_name(std::string_view name) const { return tok_.is_name(name); }
  bool at_eof() const { return tok_.kind == TokKind::kEof; }

  bool eat(std::string_view punct) {
    if (!at(punct)) return false;
    advance();
    return true;
  }

  bool eat_name(std::string_view name) {
    if (!at_name(name)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(tok_.line, tok_.column, message);
  }

  [[noreturn]] void unexpected() const {
    if (at_eof()) fail("unexpected end of input");
    fail("unexpected token '" + std::string(tok_.raw) + "'");
  }

  void expect(std::string_view punct) {
    if (!eat(punct)) {
      if (at_eof()) fail("expected '" + std::string(punct) + "' before end of input");
      fail("expected '" + std::string(punct) + "' but found '" + std::string(tok_.raw) + "'");
    }
  }

  void expect_name(std::string_view name) {
    if (!eat_name(name)) fail("expected '" + std::string(name) + "'");
  }

  void consume_semicolon() {
    if (eat(";")) return;
    if (at("}") || at_eof() || tok_.nl_before) return;
    unexpected();
  }

  Node* make(NodeType type) { return ast_.make(type, tok_.line, tok_.column); }
  Node* make_at(NodeType type, const Token& t) { return ast_.make(type, t.line, t.column); }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) parser.fail("nesting too deep");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  struct FunctionContext {
    FunctionContext(Parser& p, bool is_async, bool is_generator)
        : parser(p),
          saved_function(p.in_function_),
          saved_async(p.in_async_),
          saved_generator(p.in_generator_),
          saved_strict(p.strict_) {
      p.in_function_ = true;
      p.in_async_ = is_async;
      p.in_generator_ = is_generator;
    }
    ~FunctionContext() {
      parser.in_function_ = saved_function;
      parser.in_async_ = saved_async;
      parser.in_generator_ = saved_generator;
      parser.strict_ = saved_strict;
    }
    Parser& parser;
    bool saved_function, saved_async, saved_generator, saved_strict;
  };

  bool is_reserved(std::string_view name) const {
    if (contains(kReservedWords, name)) return true;
    if (strict_ && contains(kStrictReserved, name)) return true;
    if (name == "yield" && in_generator_) return true;
    if (name == "await" && (in_async_ || (module_ && !in_function_))) return true;
    return false;
  }

  bool await_allowed() const { return in_async_ || (module_ && !in_function_); }

  Node* parse_identifier_reference() {
    if (tok_.kind != TokKind::kName) unexpected();
    if (!tok_.escaped && is_reserved(tok_.value)) unexpected();
    Node* id = make(NodeType::Identifier);
    id->text = tok_.value;
    advance();
    return id;
  }

  /// Any IdentifierName, including keywords (property names, export aliases).
  Node* parse_identifier_name() {
    if (tok_.kind != TokKind::kName) unexpected();
    Node* id = make(NodeType::Identifier);
    id->text = tok_.value;
    advance();
    return id;
  }

  Node* parse_string_literal() {
    if (tok_.kind != TokKind::kString) unexpected();
    Node* lit = make_literal_from_token();
    return lit;
  }

  Node* make_literal_from_token() {
    Node* lit = make(NodeType::Literal);
    switch (tok_.kind) {
      case TokKind::kString:
        if (tok_.legacy_octal && strict_) fail("octal escape in strict mode");
        lit->sub = static_cast<std::uint8_t>(LiteralKind::kString);
        lit->text = tok_.value;
        break;
      case TokKind::kNumber:
        if (tok_.legacy_octal && strict_) fail("legacy octal literal in strict mode");
        lit->sub = static_cast<std::uint8_t>(LiteralKind::kNumber);
        lit->number = tok_.number;
        break;
      case TokKind::kBigInt:
        lit->sub = static_cast<std::uint8_t>(LiteralKind::kBigInt);
        lit->text = tok_.value;
        break;
      default:
        unexpected();
    }
    advance();
    return lit;
  }

  // ---- statements -------------------------------------------------------

  template <typename AtEnd>
  void parse_directives_and_body(std::vector<Node*>& out, AtEnd at_end) {
    bool prologue = true;
    while (!at_end()) {
      if (prologue) {
        if (tok_.kind == TokKind::kString) {
          const bool use_strict = tok_.raw == "\"use strict\"" || tok_.raw == "'use strict'";
          Node* stmt = parse_statement_list_item();
          if (stmt->type == NodeType::ExpressionStatement && stmt->kids[0]->type == NodeType::Literal &&
              stmt->kids[0]->literal_kind() == LiteralKind::kString) {
            stmt->set(flag::kDirective);
            if (use_strict) strict_ = true;
          } else {
            prologue = false;
          }
          out.push_back(stmt);
          continue;
        }
        prologue = false;
      }
      out.push_back(parse_statement_list_item());
    }
  }

  bool at_let_declaration() {
    if (!at_name("let")) return false;
    Token next = peek();
    if (next.kind == TokKind::kName) {
      // `let` followed by a newline and a name is still a declaration, unless
      // the name is a keyword that cannot start a binding.
      if (!next.escaped && (next.value == "in" || next.value == "instanceof" || next.value == "of")) {
        return false;
      }
      return true;
    }
    return next.is("[") || next.is("{");
  }

  bool at_async_function() {
    if (!at_name("async")) return false;
    Token next = peek();
    return next.is_name("function") && !next.nl_before;
  }

  Node* parse_statement_list_item() {
    DepthGuard guard(*this);
    if (at_name("function")) return parse_function_declaration(false);
    if (at_async_function()) {
      advance();
      return parse_function_declaration(true);
    }
    if (at_name("class")) return parse_class(true);
    if (at_name("const") || at_let_declaration()) {
      Node* decl = parse_variable_declaration(false);
      consume_semicolon();
      return decl;
    }
    if (at_name("import")) {
      Token next = peek();
      if (!next.is("(") && !next.is(".")) {
        if (!module_) fail("import declaration outside a module");
        return parse_import_declaration();
      }
    }
    if (at_name("export")) {
      if (!module_) fail("export declaration outside a module");
      return parse_export_declaration();
    }
    return parse_statement();
  }

  Node* parse_statement() {
    DepthGuard guard(*this);
    if (tok_.kind == TokKind::kPunct) {
      if (at("{")) return parse_block();
      if (at(";")) {
        Node* empty = make(NodeType::EmptyStatement);
        advance();
        return empty;
      }
    } else if (tok_.kind == TokKind::kName && !tok_.escaped) {
      const std::string& kw = tok_.value;
      if (kw == "var") {
        Node* decl = parse_variable_declaration(false);
        consume_semicolon();
        return decl;
      }
      if (kw == "if") return parse_if();
      if (kw == "for") return parse_for();
      if (kw == "while") return parse_while();
      if (kw == "do") return parse_do_while();
      if (kw == "return") return parse_return();
      if (kw == "break" || kw == "continue") return parse_break_continue();
      if (kw == "throw") return parse_throw();
      if (kw == "try") return parse_try();
      if (kw == "switch") return parse_switch();
      if (kw == "with") return parse_with();
      if (kw == "debugger") {
        Node* stmt = make(NodeType::DebuggerStatement);
        advance();
        consume_semicolon();
        return stmt;
      }
      if (kw == "function") return parse_function_declaration(false);
      if (kw == "class") return parse_class(true);
      if (at_async_function()) {
        advance();
        return parse_function_declaration(true);
      }
      if (kw == "const" || at_let_declaration()) {
        Node* decl = parse_variable_declaration(false);
        consume_semicolon();
        return decl;
      }
      if (!is_reserved(kw) && peek().is(":")) return parse_labeled();
    } else if (tok_.kind == TokKind::kName && peek().is(":")) {
      return parse_labeled();
    }
    Node* stmt = make(NodeType::ExpressionStatement);
    stmt->kids.push_back(parse_expression(false));
    consume_semicolon();
    return stmt;
  }

  Node* parse_block() {
    Node* block = make(NodeType::BlockStatement);
    expect("{");
    while (!at("}")) {
      if (at_eof()) unexpected();
      block->kids.push_back(parse_statement_list_item());
    }
    advance();
    return block;
  }

  Node* parse_labeled() {
    Node* stmt = make(NodeType::LabeledStatement);
    stmt->kids.push_back(parse_identifier_name());
    expect(":");
    if (at_name("function")) {
      stmt->kids.push_back(parse_function_declaration(false));
    } else {
      stmt->kids.push_back(parse_statement());
    }
    return stmt;
  }

  Node* parse_variable_declaration(bool no_in) {
    Node* decl = make(NodeType::VariableDeclaration);
    const std::string& kw = tok_.value;
    decl->sub = static_cast<std::uint8_t>(kw == "var"   ? DeclKind::kVar
                                          : kw == "let" ? DeclKind::kLet
                                                        : DeclKind::kConst);
    advance();
    do {
      Node* declarator = make(NodeType::VariableDeclarator);
      declarator->kids.push_back(parse_binding_target());
      if (eat("=")) {
        declarator->kids.push_back(parse_assignment(no_in));
      } else {
        declarator->kids.push_back(nullptr);
      }
      decl->kids.push_back(declarator);
    } while (eat(","));
    return decl;
  }

  Node* parse_if() {
    Node* stmt = make(NodeType::IfStatement);
    advance();
    expect("(");
    stmt->kids.push_back(parse_expression(false));
    expect(")");
    stmt->kids.push_back(parse_statement());
    if (eat_name("else")) {
      stmt->kids.push_back(parse_statement());
    } else {
      stmt->kids.push_back(nullptr);
    }
    return stmt;
  }

  Node* parse_while() {
    Node* stmt = make(NodeType::WhileStatement);
    advance();
    expect("(");
    stmt->kids.push_back(parse_expression(false));
    expect(")");
    stmt->kids.push_back(parse_statement());
    return stmt;
  }

  Node* parse_do_while() {
    Node* stmt = make(NodeType::DoWhileStatement);
    advance();
    stmt->kids.push_back(parse_statement());
    expect_name("while");
    expect("(");
    stmt->kids.push_back(parse_expression(false));
    expect(")");
    eat(";");
    return stmt;
  }

  Node* parse_for() {
    const Token start = tok_;
    advance();
    bool is_await = false;
    if (at_name("await") && await_allowed()) {
      is_await = true;
      advance();
    }
    expect("(");
    Node* init = nullptr;
    if (at(";")) {
      // no init
    } else if (at_name("var") || at_name("const") || at_let_declaration()) {
      Node* decl = parse_variable_declaration(true);
      if ((at_name("of") || at_name("in")) && decl->kids.size() == 1) {
        return parse_for_in_of(start, decl, is_await);
      }
      init = decl;
    } else {
      Node* expr = parse_expression(true);
      if (at_name("of") || at_name("in")) {
        return parse_for_in_of(start, to_pattern(expr), is_await);
      }
      init = expr;
    }
    Node* stmt = make_at(NodeType::ForStatement, start);
    stmt->kids.push_back(init);
    expect(";");
    stmt->kids.push_back(at(";") ? nullptr : parse_expression(false));
    expect(";");
    stmt->kids.push_back(at(")") ? nullptr : parse_expression(false));
    expect(")");
    stmt->kids.push_back(parse_statement());
    return stmt;
  }

  Node* parse_for_in_of(const Token& start, Node* left, bool is_await) {
    const bool of = at_name("of");
    Node* stmt = make_at(of ? NodeType::ForOfStatement : NodeType::ForInStatement, start);
    if (is_await) stmt->set(flag::kAwait);
    advance();
    stmt->kids.push_back(left);
    stmt->kids.push_back(of ? parse_assignment(false) : parse_expression(false));
    expect(")");
    stmt->kids.push_back(parse_statement());
    return stmt;
  }

  Node* parse_return() {
    Node* stmt = make(NodeType::ReturnStatement);
    advance();
    if (!at(";") && !at("}") && !at_eof() && !tok_.nl_before) {
      stmt->kids.push_back(parse_expression(false));
    } else {
      stmt->kids.push_back(nullptr);
    }
    consume_semicolon();
    return stmt;
  }

  Node* parse_break_continue() {
    Node* stmt =
        make(tok_.value == "break" ? NodeType::BreakStatement : NodeType::ContinueStatement);
    advance();
    if (tok_.kind == TokKind::kName && !tok_.nl_before && !is_reserved(tok_.value)) {
      stmt->kids.push_back(parse_identifier_name());
    } else {
      stmt->kids.push_back(nullptr);
    }
    consume_semicolon();
    return stmt;
  }

  Node* parse_throw() {
    Node* stmt = make(NodeType::ThrowStatement);
    advance();
    if (tok_.nl_before) fail("illegal newline after throw");
    stmt->kids.push_back(parse_expression(false));
    consume_semicolon();
    return stmt;
  }

  Node* parse_try() {
    Node* stmt = make(NodeType::TryStatement);
    advance();
    stmt->kids.push_back(parse_block());
    Node* handler = nullptr;
    if (at_name("catch")) {
      handler = make(NodeType::CatchClause);
      advance();
      if (eat("(")) {
        handler->kids.push_back(parse_binding_target());
        expect(")");
      } else {
        handler->kids.push_back(nullptr);
      }
      handler->kids.push_back(parse_block());
    }
    stmt->kids.push_back(handler);
    Node* finalizer = nullptr;
    if (eat_name("finally")) finalizer = parse_block();
    stmt->kids.push_back(finalizer);
    if (!handler && !finalizer) fail("missing catch or finally after try");
    return stmt;
  }

  Node* parse_switch() {
    Node* stmt = make(NodeType::SwitchStatement);
    advance();
    expect("(");
    stmt->kids.push_back(parse_expression(false));
    expect(")");
    expect("{");
    while (!eat("}")) {
      Node* clause = make(NodeType::SwitchCase);
      if (eat_name("case")) {
        clause->kids.push_back(parse_expression(false));
      } else if (eat_name("default")) {
        clause->kids.push_back(nullptr);
      } else {
        unexpected();
      }
      expect(":");
      while (!at("}") && !at_name("case") && !at_name("default")) {
        if (at_eof()) unexpected();
        clause->kids.push_back(parse_statement_list_item());
      }
      stmt->kids.push_back(clause);
    }
    return stmt;
  }

  Node* parse_with() {
    if (strict_) fail("'with' in strict mode");
    Node* stmt = make(NodeType::WithStatement);
    advance();
    expect("(");
    stmt->kids.push_back(parse_expression(false));
    expect(")");
    stmt->kids.push_back(parse_statement());
    return stmt;
  }

  // ---- functions and classes ------------------------------------------------

  Node* parse_function_declaration(bool is_async) {
    return parse_function(NodeType::FunctionDeclaration, is_async, /*id_optional=*/false);
  }

  /// Sits on `function`.
  Node* parse_function(NodeType type, bool is_async, bool id_optional) {
    Node* fn = make(type);
    expect_name("function");
    const bool generator = eat("*");
    if (is_async) fn->set(flag::kAsync);
    if (generator) fn->set(flag::kGenerator);
    if (tok_.kind == TokKind::kName && !at("(")) {
      fn->kids.push_back(parse_identifier_reference());
    } else {
      if (type == NodeType::FunctionDeclaration && !id_optional) fail("function name expected");
      fn->kids.push_back(nullptr);
    }
    FunctionContext ctx(*this, is_async, generator);
    parse_params(fn->kids);
    fn->kids.push_back(parse_function_body());
    return fn;
  }

  void parse_params(std::vector<Node*>& out) {
    expect("(");
    while (!at(")")) {
      if (at("...")) {
        Node* rest = make(NodeType::RestElement);
        advance();
        rest->kids.push_back(parse_binding_target());
        out.push_back(rest);
        eat(",");
        break;
      }
      out.push_back(parse_binding_element());
      if (!eat(",")) break;
    }
    expect(")");
  }

  Node* parse_function_body() {
    Node* body = make(NodeType::BlockStatement);
    expect("{");
    parse_directives_and_body(body->kids, [this] {
      if (at_eof()) unexpected();
      return at("}");
    });
    advance();
    return body;
  }

  /// Sits on `class`.
  Node* parse_class(bool declaration, bool id_optional = false) {
    Node* cls = make(declaration ? NodeType::ClassDeclaration : NodeType::ClassExpression);
    advance();
    const bool saved_strict = strict_;
    strict_ = true;
    if (tok_.kind == TokKind::kName && !at_name("extends")) {
      cls->kids.push_back(parse_identifier_reference());
    } else {
      if (declaration && !id_optional) fail("class name expected");
      cls->kids.push_back(nullptr);
    }
    if (eat_name("extends")) {
      cls->kids.push_back(parse_lhs_expression());
    } else {
      cls->kids.push_back(nullptr);
    }
    cls->kids.push_back(parse_class_body());
    strict_ = saved_strict;
    return cls;
  }

  bool next_ends_modifier() {
    Token next = peek();
    return next.is("(") || next.is("=") || next.is(";") || next.is("}") ||
           next.kind == TokKind::kEof || next.is(",") || next.is(":");
  }

  Node* parse_class_body() {
    Node* body = make(NodeType::ClassBody);
    expect("{");
    while (!at("}")) {
      if (eat(";")) continue;
      if (at_eof()) unexpected();
      body->kids.push_back(parse_class_member());
    }
    advance();
    return body;
  }

  Node* parse_class_member() {
    const Token start = tok_;
    bool is_static = false;
    if (at_name("static") && !next_ends_modifier()) {
      if (peek().is("{")) {
        Node* block = make(NodeType::StaticBlock);
        advance();
        advance();
        FunctionContext ctx(*this, false, false);
        while (!at("}")) {
          if (at_eof()) unexpected();
          block->kids.push_back(parse_statement_list_item());
        }
        advance();
        return block;
      }
      is_static = true;
      advance();
    }
    bool is_async = false;
    if (at_name("async") && !next_ends_modifier() && !peek().nl_before) {
      is_async = true;
      advance();
    }
    const bool generator = eat("*");
    PropKind kind = PropKind::kMethod;
    if (!is_async && !generator && (at_name("get") || at_name("set")) && !next_ends_modifier()) {
      kind = tok_.value == "get" ? PropKind::kGet : PropKind::kSet;
      advance();
    }
    bool computed = false;
    Node* key = parse_property_key(computed, /*allow_private=*/true);
    if (at("(")) {
      Node* method = make_at(NodeType::MethodDefinition, start);
      if (kind == PropKind::kMethod && !is_static && !computed && key->type == NodeType::Identifier &&
          key->text == "constructor") {
        kind = PropKind::kConstructor;
      }
      if (kind == PropKind::kMethod && !is_static && !computed && key->type == NodeType::Literal &&
          key->literal_kind() == LiteralKind::kString && key->text == "constructor") {
        kind = PropKind::kConstructor;
      }
      method->sub = static_cast<std::uint8_t>(kind);
      if (is_static) method->set(flag::kStatic);
      if (computed) method->set(flag::kComputed);
      method->kids.push_back(key);
      method->kids.push_back(parse_method_function(is_async, generator));
      return method;
    }
    Node* field = make_at(NodeType::PropertyDefinition, start);
    if (is_static) field->set(flag::kStatic);
    if (computed) field->set(flag::kComputed);
    field->kids.push_back(key);
    if (eat("=")) {
      FunctionContext ctx(*this, false, false);
      field->kids.push_back(parse_assignment(false));
    } else {
      field->kids.push_back(nullptr);
    }
    consume_semicolon();
    return field;
  }

  Node* parse_method_function(bool is_async, bool generator) {
    Node* fn = make(NodeType::FunctionExpression);
    if (is_async) fn->set(flag::kAsync);
    if (generator) fn->set(flag::kGenerator);
    fn->kids.push_back(nullptr);
    FunctionContext ctx(*this, is_async, generator);
    parse_params(fn->kids);
    fn->kids.push_back(parse_function_body());
    return fn;
  }

  Node* parse_property_key(bool& computed, bool allow_private) {
    computed = false;
    switch (tok_.kind) {
      case TokKind::kName:
        return parse_identifier_name();
      case TokKind::kString:
      case TokKind::kNumber:
      case TokKind::kBigInt:
        return make_literal_from_token();
      case TokKind::kPrivateName: {
        if (!allow_private) unexpected();
        Node* id = make(NodeType::PrivateIdentifier);
        id->text = tok_.value;
        advance();
        return id;
      }
      default:
        break;
    }
    if (at("[")) {
      advance();
      computed = true;
      Node* key = parse_assignment(false);
      expect("]");
      return key;
    }
    unexpected();
  }

  // ---- patterns -----------------------------------------------------------

  Node* parse_binding_target() {
    if (at("[")) return parse_array_pattern();
    if (at("{")) return parse_object_pattern();
    return parse_identifier_reference();
  }

  Node* parse_binding_element() {
    Node* target = parse_binding_target();
    if (at("=")) {
      Node* pattern = make(NodeType::AssignmentPattern);
      advance();
      pattern->kids.push_back(target);
      pattern->kids.push_back(parse_assignment(false));
      return pattern;
    }
    return target;
  }

  Node* parse_array_pattern() {
    Node* pattern = make(NodeType::ArrayPattern);
    expect("[");
    while (!at("]")) {
      if (at(",")) {
        advance();
        pattern->kids.push_back(nullptr);
        continue;
      }
      if (at("...")) {
        Node* rest = make(NodeType::RestElement);
        advance();
        rest->kids.push_back(parse_binding_target());
        pattern->kids.push_back(rest);
      } else {
        pattern->kids.push_back(parse_binding_element());
      }
      if (!at("]")) expect(",");
    }
    advance();
    return pattern;
  }

  Node* parse_object_pattern() {
    Node* pattern = make(NodeType::ObjectPattern);
    expect("{");
    while (!at("}")) {
      if (at("...")) {
        Node* rest = make(NodeType::RestElement);
        advance();
        rest->kids.push_back(parse_identifier_reference());
        pattern->kids.push_back(rest);
      } else {
        Node* prop = make(NodeType::Property);
        bool computed = false;
        const bool name_key = tok_.kind == TokKind::kName;
        Node* key = parse_property_key(computed, false);
        if (computed) prop->set(flag::kComputed);
        prop->kids.push_back(key);
        if (eat(":")) {
          prop->kids.push_back(parse_binding_element());
        } else {
          if (!name_key || computed) unexpected();
          if (is_reserved(key->text)) fail("unexpected reserved word '" + key->text + "'");
          prop->set(flag::kShorthand);
          Node* value = ast_.clone(key);
          if (at("=")) {
            Node* assign = make(NodeType::AssignmentPattern);
            advance();
            assign->kids.push_back(value);
            assign->kids.push_back(parse_assignment(false));
            value = assign;
          }
          prop->kids.push_back(value);
        }
        pattern->kids.push_back(prop);
      }
      if (!at("}")) expect(",");
    }
    advance();
    return pattern;
  }

  /// Reinterprets an expression parsed under the cover grammar as a pattern.
  Node* to_pattern(Node* node) {
    if (node == nullptr) return node;
    switch (node->type) {
      case NodeType::Identifier:
      case NodeType::MemberExpression:
      case NodeType::ObjectPattern:
      case NodeType::ArrayPattern:
      case NodeType::AssignmentPattern:
      case NodeType::RestElement:
        return node;
      case NodeType::ObjectExpression:
        node->type = NodeType::ObjectPattern;
        for (Node*& prop : node->kids) {
          if (prop->type == NodeType::SpreadElement) {
            prop->type = NodeType::RestElement;
            prop->kids[0] = to_pattern(prop->kids[0]);
          } else if (prop->type == NodeType::Property) {
            if (prop->prop_kind() != PropKind::kInit || prop->has(flag::kMethod)) {
              throw ParseError(prop->line, prop->column, "invalid destructuring target");
            }
            prop->kids[1] = to_pattern(prop->kids[1]);
          }
        }
        return node;
      case NodeType::ArrayExpression:
        node->type = NodeType::ArrayPattern;
        for (Node*& el : node->kids) {
          if (el == nullptr) continue;
          if (el->type == NodeType::SpreadElement) {
            el->type = NodeType::RestElement;
            el->kids[0] = to_pattern(el->kids[0]);
          } else {
            el = to_pattern(el);
          }
        }
        return node;
      case NodeType::AssignmentExpression:
        if (node->text != "=") break;
        node->type = NodeType::AssignmentPattern;
        node->text.clear();
        node->kids[0] = to_pattern(node->kids[0]);
        return node;
      case NodeType::CallExpression:
        // Legacy web-compat: `f() = x` parses, then throws at run time.
        if (!strict_) return node;
        break;
      default:
        break;
    }
    throw ParseError(node->line, node->column, "invalid assignment target");
  }

  // ---- expressions --------------------------------------------------------

  Node* parse_expression(bool no_in) {
    Node* first = parse_assignment(no_in);
    if (!at(",")) return first;
    Node* seq = ast_.make(NodeType::SequenceExpression, first->line, first->column);
    seq->kids.push_back(first);
    while (eat(",")) seq->kids.push_back(parse_assignment(no_in));
    return seq;
  }

  static bool is_assign_op(const Token& t) {
    return t.kind == TokKind::kPunct && contains(kAssignOps, t.raw);
  }

  Node* parse_assignment(bool no_in) {
    DepthGuard guard(*this);
    if (at_name("yield") && in_generator_) return parse_yield(no_in);
    if (tok_.kind == TokKind::kName && !tok_.escaped) {
      Token next = peek();
      if (tok_.value == "async" && next.kind == TokKind::kName && !next.nl_before &&
          !next.escaped && !is_reserved(next.value)) {
        const Token start = tok_;
        advance();
        std::vector<Node*> params;
        {
          FunctionContext ctx(*this, true, false);
          params.push_back(parse_identifier_reference());
        }
        if (!at("=>") || tok_.nl_before) unexpected();
        return parse_arrow_body(start, std::move(params), true, no_in);
      }
      if (next.is("=>") && !next.nl_before && !is_reserved(tok_.value)) {
        const Token start = tok_;
        std::vector<Node*> params;
        params.push_back(parse_identifier_reference());
        return parse_arrow_body(start, std::move(params), false, no_in);
      }
    }
    Node* left = parse_conditional(no_in);
    if (left == bare_arrow_) return left;
    if (is_assign_op(tok_)) {
      const std::string op(tok_.raw);
      if (op == "=") {
        left = to_pattern(left);
      } else if (left->type != NodeType::Identifier && left->type != NodeType::MemberExpression &&
                 !(left->type == NodeType::CallExpression && !strict_)) {
        fail("invalid assignment target");
      }
      advance();
      Node* assign = ast_.make(NodeType::AssignmentExpression, left->line, left->column);
      assign->text = op;
      assign->kids.push_back(left);
      assign->kids.push_back(parse_assignment(no_in));
      return assign;
    }
    return left;
  }

  Node* parse_yield(bool no_in) {
    Node* yield = make(NodeType::YieldExpression);
    advance();
    if (tok_.nl_before) {
      yield->kids.push_back(nullptr);
      return yield;
    }
    if (eat("*")) {
      yield->set(flag::kDelegate);
      yield->kids.push_back(parse_assignment(no_in));
      return yield;
    }
    if (at(")") || at("]") || at("}") || at(",") || at(";") || at(":") || at_eof() ||
        (at_name("in") && no_in) || at_name("of") || at("=>") || at("?") || is_assign_op(tok_)) {
      yield->kids.push_back(nullptr);
      return yield;
    }
    yield->kids.push_back(parse_assignment(no_in));
    return yield;
  }

  Node* parse_arrow_body(const Token& start, std::vector<Node*> params, bool is_async, bool no_in) {
    if (!at("=>") || tok_.nl_before) unexpected();
    advance();
    Node* arrow = make_at(NodeType::ArrowFunctionExpression, start);
    if (is_async) arrow->set(flag::kAsync);
    arrow->kids = std::move(params);
    FunctionContext ctx(*this, is_async, false);
    if (at("{")) {
      arrow->kids.push_back(parse_function_body());
    } else {
      arrow->set(flag::kExpressionBody);
      arrow->kids.push_back(parse_assignment(no_in));
    }
    bare_arrow_ = arrow;
    return arrow;
  }

  Node* parse_conditional(bool no_in) {
    Node* test = parse_binary(1, no_in);
    if (test == bare_arrow_ || !at("?")) return test;
    advance();
    Node* cond = ast_.make(NodeType::ConditionalExpression, test->line, test->column);
    cond->kids.push_back(test);
    cond->kids.push_back(parse_assignment(false));
    expect(":");
    cond->kids.push_back(parse_assignment(no_in));
    return cond;
  }

  int binary_precedence(bool no_in) const {
    if (tok_.kind == TokKind::kPunct) {
      const std::string_view op = tok_.raw;
      if (op == "??") return 1;
      if (op == "||") return 2;
      if (op == "&&") return 3;
      if (op == "|") return 4;
      if (op == "^") return 5;
      if (op == "&") return 6;
      if (op == "==" || op == "!=" || op == "===" || op == "!==") return 7;
      if (op == "<" || op == ">" || op == "<=" || op == ">=") return 8;
      if (op == "<<" || op == ">>" || op == ">>>") return 9;
      if (op == "+" || op == "-") return 10;
      if (op == "*" || op == "/" || op == "%") return 11;
      if (op == "**") return 12;
      return 0;
    }
    if (tok_.kind == TokKind::kName && !tok_.escaped) {
      if (tok_.value == "instanceof") return 8;
      if (tok_.value == "in" && !no_in) return 8;
    }
    return 0;
  }

  Node* parse_binary(int min_prec, bool no_in) {
    Node* left = parse_unary();
    if (left == bare_arrow_) return left;
    for (;;) {
      const int prec = binary_precedence(no_in);
      if (prec == 0 || prec < min_prec) break;
      const std::string op = tok_.kind == TokKind::kPunct ? std::string(tok_.raw) : tok_.value;
      advance();
      Node* right = op == "**" ? parse_binary(prec, no_in) : parse_binary(prec + 1, no_in);
      const bool logical = op == "??" || op == "||" || op == "&&";
      Node* bin = ast_.make(logical ? NodeType::LogicalExpression : NodeType::BinaryExpression,
                            left->line, left->column);
      bin->text = op;
      bin->kids.push_back(left);
      bin->kids.push_back(right);
      left = bin;
    }
    return left;
  }

  Node* parse_unary() {
    DepthGuard guard(*this);
    if (tok_.kind == TokKind::kPunct) {
      if (at("!") || at("~") || at("+") || at("-")) {
        Node* unary = make(NodeType::UnaryExpression);
        unary->text = std::string(tok_.raw);
        unary->set(flag::kPrefix);
        advance();
        unary->kids.push_back(parse_unary());
        return unary;
      }
      if (at("++") || at("--")) {
        Node* update = make(NodeType::UpdateExpression);
        update->text = std::string(tok_.raw);
        update->set(flag::kPrefix);
        advance();
        update->kids.push_back(parse_unary());
        return update;
      }
    } else if (tok_.kind == TokKind::kName && !tok_.escaped) {
      if (tok_.value == "typeof" || tok_.value == "void" || tok_.value == "delete") {
        Node* unary = make(NodeType::UnaryExpression);
        unary->text = tok_.value;
        unary->set(flag::kPrefix);
        advance();
        unary->kids.push_back(parse_unary());
        return unary;
      }
      if (tok_.value == "await" && await_allowed()) {
        Node* await = make(NodeType::AwaitExpression);
        advance();
        await->kids.push_back(parse_unary());
        return await;
      }
    }
    Node* expr = parse_lhs_expression();
    if (expr == bare_arrow_) return expr;
    if ((at("++") || at("--")) && !tok_.nl_before) {
      if (expr->type != NodeType::Identifier && expr->type != NodeType::MemberExpression) {
        fail("invalid update target");
      }
      Node* update = ast_.make(NodeType::UpdateExpression, expr->line, expr->column);
      update->text = std::string(tok_.raw);
      advance();
      update->kids.push_back(expr);
      return update;
    }
    return expr;
  }

  Node* parse_lhs_expression() {
    Node* expr = nullptr;
    if (at_name("new")) {
      expr = parse_new();
    } else if (at_name("super")) {
      expr = make(NodeType::Super);
      advance();
    } else if (at_name("import")) {
      expr = parse_import_meta_or_call();
    } else {
      expr = parse_primary();
      if (expr == bare_arrow_) return expr;
    }
    return parse_call_tail(expr, true);
  }

  Node* parse_import_meta_or_call() {
    const Token start = tok_;
    advance();
    if (eat(".")) {
      Node* meta = make_at(NodeType::MetaProperty, start);
      Node* import_id = make_at(NodeType::Identifier, start);
      import_id->text = "import";
      meta->kids.push_back(import_id);
      if (!at_name("meta")) unexpected();
      meta->kids.push_back(parse_identifier_name());
      return meta;
    }
    Node* call = make_at(NodeType::ImportExpression, start);
    expect("(");
    call->kids.push_back(parse_assignment(false));
    if (eat(",")) {
      if (!at(")")) {
        parse_assignment(false);  // import attributes are not part of the model
        eat(",");
      }
    }
    expect(")");
    return call;
  }

  Node* parse_new() {
    const Token start = tok_;
    advance();
    if (eat(".")) {
      Node* meta = make_at(NodeType::MetaProperty, start);
      Node* new_id = make_at(NodeType::Identifier, start);
      new_id->text = "new";
      meta->kids.push_back(new_id);
      if (!at_name("target")) unexpected();
      meta->kids.push_back(parse_identifier_name());
      return meta;
    }
    Node* callee = nullptr;
    if (at_name("new")) {
      callee = parse_new();
    } else if (at_name("super")) {
      callee = make(NodeType::Super);
      advance();
    } else if (at_name("import")) {
      fail("cannot use new with import");
    } else {
      callee = parse_primary();
      if (callee == bare_arrow_) fail("arrow function is not a constructor expression");
    }
    callee = parse_call_tail(callee, false);
    Node* expr = make_at(NodeType::NewExpression, start);
    expr->kids.push_back(callee);
    if (at("(")) parse_arguments(expr->kids);
    return expr;
  }

  void parse_arguments(std::vector<Node*>& out) {
    expect("(");
    while (!at(")")) {
      if (at("...")) {
        Node* spread = make(NodeType::SpreadElement);
        advance();
        spread->kids.push_back(parse_assignment(false));
        out.push_back(spread);
      } else {
        out.push_back(parse_assignment(false));
      }
      if (!eat(",")) break;
    }
    expect(")");
  }

  Node* parse_call_tail(Node* expr, bool allow_call) {
    bool chain = false;
    for (;;) {
      if (at(".")) {
        advance();
        Node* member = ast_.make(NodeType::MemberExpression, expr->line, expr->column);
        member->kids.push_back(expr);
        member->kids.push_back(parse_member_property());
        expr = member;
      } else if (at("?.") && allow_call) {
        advance();
        chain = true;
        if (at("(")) {
          Node* call = ast_.make(NodeType::CallExpression, expr->line, expr->column);
          call->set(flag::kOptional);
          call->kids.push_back(expr);
          parse_arguments(call->kids);
          expr = call;
        } else if (at("[")) {
          advance();
          Node* member = ast_.make(NodeType::MemberExpression, expr->line, expr->column);
          member->set(flag::kOptional);
          member->set(flag::kComputed);
          member->kids.push_back(expr);
          member->kids.push_back(parse_expression(false));
          expect("]");
          expr = member;
        } else {
          Node* member = ast_.make(NodeType::MemberExpression, expr->line, expr->column);
          member->set(flag::kOptional);
          member->kids.push_back(expr);
          member->kids.push_back(parse_member_property());
          expr = member;
        }
      } else if (at("[")) {
        advance();
        Node* member = ast_.make(NodeType::MemberExpression, expr->line, expr->column);
        member->set(flag::kComputed);
        member->kids.push_back(expr);
        member->kids.push_back(parse_expression(false));
        expect("]");
        expr = member;
      } else if (at("(") && allow_call) {
        Node* call = ast_.make(NodeType::CallExpression, expr->line, expr->column);
        call->kids.push_back(expr);
        parse_arguments(call->kids);
        expr = call;
      } else if (tok_.kind == TokKind::kTemplate) {
        if (chain) fail("tagged template in optional chain");
        Node* tagged = ast_.make(NodeType::TaggedTemplateExpression, expr->line, expr->column);
        tagged->kids.push_back(expr);
        tagged->kids.push_back(parse_template());
        expr = tagged;
      } else {
        break;
      }
    }
    if (chain) {
      Node* wrapper = ast_.make(NodeType::ChainExpression, expr->line, expr->column);
      wrapper->kids.push_back(expr);
      expr = wrapper;
    }
    return expr;
  }

  Node* parse_member_property() {
    if (tok_.kind == TokKind::kPrivateName) {
      Node* id = make(NodeType::PrivateIdentifier);
      id->text = tok_.value;
      advance();
      return id;
    }
    return parse_identifier_name();
  }

  Node* parse_template() {
    Node* tpl = make(NodeType::TemplateLiteral);
    for (;;) {
      if (tok_.kind != TokKind::kTemplate) unexpected();
      Node* quasi = make(NodeType::TemplateElement);
      quasi->text = std::string(tok_.raw);
      const bool tail = tok_.tail;
      if (tail) quasi->set(flag::kTail);
      tpl->kids.push_back(quasi);
      advance();
      if (tail) break;
      tpl->kids.push_back(parse_expression(false));
      if (!at("}")) unexpected();
      tok_ = lex_.rescan_template_continuation(tok_);
    }
    return tpl;
  }

  Node* parse_primary() {
    switch (tok_.kind) {
      case TokKind::kName:
        return parse_primary_name();
      case TokKind::kNumber:
      case TokKind::kString:
      case TokKind::kBigInt:
        return make_literal_from_token();
      case TokKind::kTemplate:
        return parse_template();
      case TokKind::kPrivateName: {
        Node* id = make(NodeType::PrivateIdentifier);
        id->text = tok_.value;
        advance();
        if (!at_name("in")) fail("private name outside of 'in' check");
        return id;
      }
      case TokKind::kPunct:
        if (at("(")) return parse_paren_or_arrow();
        if (at("[")) return parse_array_literal();
        if (at("{")) return parse_object_literal();
        if (at("/") || at("/=")) {
          tok_ = lex_.rescan_regex(tok_);
          Node* lit = make(NodeType::Literal);
          lit->sub = static_cast<std::uint8_t>(LiteralKind::kRegExp);
          lit->text = tok_.value;
          lit->extra = tok_.regex_flags;
          advance();
          return lit;
        }
        break;
      default:
        break;
    }
    unexpected();
  }

  Node* parse_primary_name() {
    if (!tok_.escaped) {
      const std::string& name = tok_.value;
      if (name == "function") return parse_function(NodeType::FunctionExpression, false, true);
      if (name == "class") return parse_class(false);
      if (name == "this") {
        Node* n = make(NodeType::ThisExpression);
        advance();
        return n;
      }
      if (name == "null" || name == "true" || name == "false") {
        Node* lit = make(NodeType::Literal);
        if (name == "null") {
          lit->sub = static_cast<std::uint8_t>(LiteralKind::kNull);
        } else {
          lit->sub = static_cast<std::uint8_t>(LiteralKind::kBoolean);
          lit->number = name == "true" ? 1.0 : 0.0;
        }
        advance();
        return lit;
      }
      if (name == "async") {
        Token next = peek();
        if (next.is_name("function") && !next.nl_before) {
          advance();
          return parse_function(NodeType::FunctionExpression, true, true);
        }
        if (next.is("(") && !next.nl_before) return parse_async_call_or_arrow();
      }
    }
    return parse_identifier_reference();
  }

  Node* parse_async_call_or_arrow() {
    const Token start = tok_;
    Node* callee = parse_identifier_name();
    std::vector<Node*> args;
    {
      FunctionContext ctx(*this, true, false);
      parse_arguments(args);
    }
    if (at("=>") && !tok_.nl_before) {
      for (Node*& a : args) {
        if (a->type == NodeType::SpreadElement) {
          a->type = NodeType::RestElement;
          a->kids[0] = to_pattern(a->kids[0]);
        } else {
          a = to_pattern(a);
        }
      }
      return parse_arrow_body(start, std::move(args), true, false);
    }
    Node* call = make_at(NodeType::CallExpression, start);
    call->kids.push_back(callee);
    for (Node* a : args) call->kids.push_back(a);
    return call;
  }

  Node* parse_paren_or_arrow() {
    const Token start = tok_;
    advance();
    std::vector<Node*> items;
    bool must_arrow = false;
    if (at(")")) {
      must_arrow = true;
    } else {
      for (;;) {
        if (at("...")) {
          Node* rest = make(NodeType::RestElement);
          advance();
          rest->kids.push_back(parse_binding_target());
          items.push_back(rest);
          must_arrow = true;
          break;
        }
        items.push_back(parse_assignment(false));
        if (!at(",")) break;
        advance();
        if (at(")")) {
          must_arrow = true;
          break;
        }
      }
    }
    expect(")");
    if (at("=>") && !tok_.nl_before) {
      for (Node*& item : items) item = to_pattern(item);
      return parse_arrow_body(start, std::move(items), false, false);
    }
    if (must_arrow) unexpected();
    bare_arrow_ = nullptr;
    if (items.size() == 1) return items[0];
    Node* seq = make_at(NodeType::SequenceExpression, start);
    seq->kids = std::move(items);
    return seq;
  }

  Node* parse_array_literal() {
    Node* arr = make(NodeType::ArrayExpression);
    advance();
    while (!at("]")) {
      if (at(",")) {
        advance();
        arr->kids.push_back(nullptr);
        continue;
      }
      if (at("...")) {
        Node* spread = make(NodeType::SpreadElement);
        advance();
        spread->kids.push_back(parse_assignment(false));
        arr->kids.push_back(spread);
      } else {
        arr->kids.push_back(parse_assignment(false));
      }
      if (!at("]")) expect(",");
    }
    advance();
    return arr;
  }

  Node* parse_object_literal() {
    Node* obj = make(NodeType::ObjectExpression);
    advance();
    while (!at("}")) {
      if (at("...")) {
        Node* spread = make(NodeType::SpreadElement);
        advance();
        spread->kids.push_back(parse_assignment(false));
        obj->kids.push_back(spread);
      } else {
        obj->kids.push_back(parse_object_property());
      }
      if (!at("}")) expect(",");
    }
    advance();
    return obj;
  }

  Node* parse_object_property() {
    Node* prop = make(NodeType::Property);
    bool is_async = false;
    bool generator = false;
    PropKind kind = PropKind::kInit;
    if (at_name("async") && !next_ends_modifier() && !peek().nl_before) {
      is_async = true;
      advance();
    }
    if (eat("*")) generator = true;
    if (!is_async && !generator && (at_name("get") || at_name("set")) && !next_ends_modifier()) {
      kind = tok_.value == "get" ? PropKind::kGet : PropKind::kSet;
      advance();
    }
    const bool name_key = tok_.kind == TokKind::kName;
    const bool key_escaped = tok_.escaped;
    bool computed = false;
    Node* key = parse_property_key(computed, false);
    if (computed) prop->set(flag::kComputed);
    prop->kids.push_back(key);
    if (at("(")) {
      prop->sub = static_cast<std::uint8_t>(kind);
      if (kind == PropKind::kInit) prop->set(flag::kMethod);
      prop->kids.push_back(parse_method_function(is_async, generator));
      return prop;
    }
    if (is_async || generator || kind != PropKind::kInit) unexpected();
    if (eat(":")) {
      prop->kids.push_back(parse_assignment(false));
      return prop;
    }
    if (!name_key || computed) unexpected();
    if (!key_escaped && is_reserved(key->text)) fail("unexpected reserved word '" + key->text + "'");
    prop->set(flag::kShorthand);
    Node* value = ast_.clone(key);
    if (at("=")) {
      // Cover-initialized name; only valid once reinterpreted as a pattern.
      Node* assign = make(NodeType::AssignmentPattern);
      advance();
      assign->kids.push_back(value);
      assign->kids.push_back(parse_assignment(false));
      value = assign;
    }
    prop->kids.push_back(value);
    return prop;
  }

  // ---- modules ------------------------------------------------------------

  Node* parse_module_specifier_name() {
    if (tok_.kind == TokKind::kString) return parse_string_literal();
    return parse_identifier_name();
  }

  void skip_import_attributes() {
    if ((at_name("with") || (at_name("assert") && !tok_.nl_before)) && peek().is("{")) {
      advance();
      parse_object_literal();
    }
  }

  Node* parse_import_declaration() {
    Node* decl = make(NodeType::ImportDeclaration);
    advance();
    if (tok_.kind == TokKind::kString) {
      decl->kids.push_back(parse_string_literal());
      skip_import_attributes();
      consume_semicolon();
      return decl;
    }
    if (tok_.kind == TokKind::kName && !at("{")) {
      Node* spec = make(NodeType::ImportDefaultSpecifier);
      spec->kids.push_back(parse_identifier_reference());
      decl->kids.push_back(spec);
      if (!eat(",")) goto from_clause;
    }
    if (at("*")) {
      Node* spec = make(NodeType::ImportNamespaceSpecifier);
      advance();
      expect_name("as");
      spec->kids.push_back(parse_identifier_reference());
      decl->kids.push_back(spec);
    } else if (eat("{")) {
      while (!at("}")) {
        Node* spec = make(NodeType::ImportSpecifier);
        const bool was_string = tok_.kind == TokKind::kString;
        Node* imported = parse_module_specifier_name();
        spec->kids.push_back(imported);
        if (eat_name("as")) {
          spec->kids.push_back(parse_identifier_reference());
        } else {
          if (was_string || is_reserved(imported->text)) unexpected();
          spec->kids.push_back(ast_.clone(imported));
        }
        decl->kids.push_back(spec);
        if (!at("}")) expect(",");
      }
      advance();
    } else {
      unexpected();
    }
  from_clause:
    expect_name("from");
    decl->kids.push_back(parse_string_literal());
    skip_import_attributes();
    consume_semicolon();
    return decl;
  }

  Node* parse_export_declaration() {
    const Token start = tok_;
    advance();
    if (at("*")) {
      Node* decl = make_at(NodeType::ExportAllDeclaration, start);
      advance();
      if (eat_name("as")) {
        decl->kids.push_back(parse_module_specifier_name());
      } else {
        decl->kids.push_back(nullptr);
      }
      expect_name("from");
      decl->kids.push_back(parse_string_literal());
      skip_import_attributes();
      consume_semicolon();
      return decl;
    }
    if (at_name("default")) {
      Node* decl = make_at(NodeType::ExportDefaultDeclaration, start);
      advance();
      if (at_name("function")) {
        decl->kids.push_back(parse_function(NodeType::FunctionDeclaration, false, true));
      } else if (at_async_function()) {
        advance();
        decl->kids.push_back(parse_function(NodeType::FunctionDeclaration, true, true));
      } else if (at_name("class")) {
        decl->kids.push_back(parse_class(true, true));
      } else {
        decl->kids.push_back(parse_assignment(false));
        consume_semicolon();
      }
      return decl;
    }
    Node* decl = make_at(NodeType::ExportNamedDeclaration, start);
    if (at("{")) {
      advance();
      std::vector<Node*> specs;
      while (!at("}")) {
        Node* spec = make(NodeType::ExportSpecifier);
        Node* local = parse_module_specifier_name();
        spec->kids.push_back(local);
        if (eat_name("as")) {
          spec->kids.push_back(parse_module_specifier_name());
        } else {
          spec->kids.push_back(ast_.clone(local));
        }
        specs.push_back(spec);
        if (!at("}")) expect(",");
      }
      advance();
      decl->kids = std::move(specs);
      if (eat_name("from")) {
        decl->set(flag::kHasSource);
        decl->kids.push_back(parse_string_literal());
        skip_import_attributes();
      }
      consume_semicolon();
      return decl;
    }
    decl->set(flag::kHasDeclaration);
    if (at_name("var") || at_name("const") || at_name("let")) {
      decl->kids.push_back(parse_variable_declaration(false));
      consume_semicolon();
    } else if (at_name("function")) {
      decl->kids.push_back(parse_function_declaration(false));
    } else if (at_async_function()) {
      advance();
      decl->kids.push_back(parse_function_declaration(true));
    } else if (at_name("class")) {
      decl->kids.push_back(parse_class(true));
    } else {
      unexpected();
    }
    return decl;
  }

  Lexer lex_;
  Token tok_;
  Ast ast_;
  bool module_;
  bool strict_;
  bool in_function_ = false;
  bool in_async_ = false;
  bool in_generator_ = false;
  int depth_ = 0;
  Node* bare_arrow_ = nullptr;
};

}  // namespace

Ast parse(std::string_view source, ParseGoal goal) { return Parser(source, goal).run(); }

ParsedDocument parse_any(std::string_view source) {
  try {
    return {parse(source, ParseGoal::kModule), ParseGoal::kModule};
  } catch (const ParseError& module_error) {
    try {
      return {parse(source, ParseGoal::kScript), ParseGoal::kScript};
    } catch (const ParseError& script_error) {
      const bool module_further =
          module_error.line() > script_error.line() ||
          (module_error.line() == script_error.line() && module_error.column() > script_error.column());
      if (module_further) throw module_error;
      throw;
    }
  }
}

}  // namespace sleuth::js

#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

namespace sleuth::js {

// ESTree node kinds. The order of this list is the token vocabulary; append
// only, and bump kVocabularyVersion in tokens.hpp when it changes.
#define SLEUTH_NODE_TYPES(X)      \
  X(Program)                      \
  X(ExpressionStatement)          \
  X(BlockStatement)               \
  X(EmptyStatement)               \
  X(DebuggerStatement)            \
  X(WithStatement)                \
  X(ReturnStatement)              \
  X(LabeledStatement)             \
  X(BreakStatement)               \
  X(ContinueStatement)            \
  X(IfStatement)                  \
  X(SwitchStatement)              \
  X(SwitchCase)                   \
  X(ThrowStatement)               \
  X(TryStatement)                 \
  X(CatchClause)                  \
  X(WhileStatement)               \
  X(DoWhileStatement)             \
  X(ForStatement)                 \
  X(ForInStatement)               \
  X(ForOfStatement)               \
  X(FunctionDeclaration)          \
  X(VariableDeclaration)          \
  X(VariableDeclarator)           \
  X(ClassDeclaration)             \
  X(ClassExpression)              \
  X(ClassBody)                    \
  X(MethodDefinition)             \
  X(PropertyDefinition)           \
  X(StaticBlock)                  \
  X(ThisExpression)               \
  X(ArrayExpression)              \
  X(ObjectExpression)             \
  X(Property)                     \
  X(FunctionExpression)           \
  X(ArrowFunctionExpression)      \
  X(UnaryExpression)              \
  X(UpdateExpression)             \
  X(BinaryExpression)             \
  X(LogicalExpression)            \
  X(AssignmentExpression)         \
  X(MemberExpression)             \
  X(ConditionalExpression)        \
  X(CallExpression)               \
  X(NewExpression)                \
  X(SequenceExpression)           \
  X(YieldExpression)              \
  X(AwaitExpression)              \
  X(TemplateLiteral)              \
  X(TaggedTemplateExpression)     \
  X(TemplateElement)              \
  X(SpreadElement)                \
  X(RestElement)                  \
  X(ObjectPattern)                \
  X(ArrayPattern)                 \
  X(AssignmentPattern)            \
  X(Identifier)                   \
  X(PrivateIdentifier)            \
  X(Literal)                      \
  X(MetaProperty)                 \
  X(Super)                        \
  X(ChainExpression)              \
  X(ImportExpression)             \
  X(ImportDeclaration)            \
  X(ImportSpecifier)              \
  X(ImportDefaultSpecifier)       \
  X(ImportNamespaceSpecifier)     \
  X(ExportNamedDeclaration)       \
  X(ExportSpecifier)              \
  X(ExportDefaultDeclaration)     \
  X(ExportAllDeclaration)

enum class NodeType : std::uint8_t {
#define SLEUTH_ENUM_ENTRY(name) name,
  SLEUTH_NODE_TYPES(SLEUTH_ENUM_ENTRY)
#undef SLEUTH_ENUM_ENTRY
};

inline constexpr std::size_t kNodeTypeCount = static_cast<std::size_t>(NodeType::ExportAllDeclaration) + 1;

std::string_view node_type_name(NodeType type);

enum class LiteralKind : std::uint8_t { kString, kNumber, kBigInt, kBoolean, kNull, kRegExp };

enum class DeclKind : std::uint8_t { kVar, kLet, kConst };

enum class PropKind : std::uint8_t { kInit, kGet, kSet, kMethod, kConstructor };

namespace flag {
inline constexpr std::uint16_t kComputed = 1u << 0;
inline constexpr std::uint16_t kOptional = 1u << 1;
inline constexpr std::uint16_t kPrefix = 1u << 2;
inline constexpr std::uint16_t kAsync = 1u << 3;
inline constexpr std::uint16_t kGenerator = 1u << 4;
inline constexpr std::uint16_t kStatic = 1u << 5;
inline constexpr std::uint16_t kShorthand = 1u << 6;
inline constexpr std::uint16_t kMethod = 1u << 7;
inline constexpr std::uint16_t kDelegate = 1u << 8;
inline constexpr std::uint16_t kAwait = 1u << 9;
inline constexpr std::uint16_t kTail = 1u << 10;
inline constexpr std::uint16_t kExpressionBody = 1u << 11;
inline constexpr std::uint16_t kHasSource = 1u << 12;
inline constexpr std::uint16_t kModule = 1u << 13;
inline constexpr std::uint16_t kDirective = 1u << 14;
inline constexpr std::uint16_t kHasDeclaration = 1u << 15;
}  // namespace flag

/// One AST node. Children live in `kids` in source order; slots that are
/// optional in the grammar hold nullptr. Layouts:
///
///   Program, BlockStatement, StaticBlock, ClassBody   statements / members
///   ExpressionStatement                    [expr]
///   WithStatement, WhileStatement          [object|test, body]
///   ReturnStatement, ThrowStatement        [arg?]
///   LabeledStatement                       [label, body]
///   Break/ContinueStatement                [label?]
///   IfStatement                            [test, consequent, alternate?]
///   SwitchStatement                        [discriminant, cases...]
///   SwitchCase                             [test?, statements...]
///   TryStatement                           [block, handler?, finalizer?]
///   CatchClause                            [param?, body]
///   DoWhileStatement                       [body, test]
///   ForStatement                           [init?, test?, update?, body]
///   ForIn/ForOfStatement                   [left, right, body]
///   Function{Declaration,Expression}       [id?, params..., body]
///   ArrowFunctionExpression                [params..., body]
///   VariableDeclaration                    [declarators...]
///   VariableDeclarator                     [id, init?]
///   Class{Declaration,Expression}          [id?, superClass?, ClassBody]
///   MethodDefinition                       [key, FunctionExpression]
///   PropertyDefinition                     [key, value?]
///   Array{Expression,Pattern}              [elements...] (nullptr = hole)
///   ObjectExpression, ObjectPattern        [properties...]
///   Property                               [key, value]
///   Unary/Update/Spread/Rest/Await/Chain   [argument]
///   Binary/Logical/Assignment/AssignmentPattern [left, right]
///   MemberExpression                       [object, property]
///   ConditionalExpression                  [test, consequent, alternate]
///   Call/NewExpression                     [callee, arguments...]
///   SequenceExpression                     [expressions...]
///   YieldExpression                        [arg?]
///   TemplateLiteral                        [quasi0, expr0, quasi1, ..., quasiN]
///   TaggedTemplateExpression               [tag, TemplateLiteral]
///   MetaProperty                           [meta, property]
///   ImportExpression                       [source]
///   ImportDeclaration                      [specifiers..., source]
///   ImportSpecifier, ExportSpecifier       [imported|local, local|exported]
///   ImportDefault/NamespaceSpecifier       [local]
///   ExportNamedDeclaration                 [declaration] when kHasDeclaration,
///                                          else [specifiers..., source?]
///   ExportDefaultDeclaration               [declaration or expression]
///   ExportAllDeclaration                   [exported?, source]
struct Node {
  NodeType type;
  std::uint8_t sub = 0;  // LiteralKind / DeclKind / PropKind depending on type
  std::uint16_t flags = 0;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  double number = 0.0;
  // Identifier and PrivateIdentifier name, operator text, string literal
  // value (WTF-8), regexp pattern, bigint digits, template raw text.
  std::string text;
  // Regexp flags.
  std::string extra;
  std::vector<Node*> kids;

  bool has(std::uint16_t f) const { return (flags & f) != 0; }
  void set(std::uint16_t f, bool on = true) {
    flags = on ? static_cast<std::uint16_t>(flags | f) : static_cast<std::uint16_t>(flags & ~f);
  }

  LiteralKind literal_kind() const { return static_cast<LiteralKind>(sub); }
  DeclKind decl_kind() const { return static_cast<DeclKind>(sub); }
  PropKind prop_kind() const { return static_cast<PropKind>(sub); }
};

/// Owns every node of one parsed document. Node pointers stay valid for the
/// lifetime of the Ast.
class Ast {
 public:
  Ast() = default;
  Ast(const Ast&) = delete;
  Ast& operator=(const Ast&) = delete;
  Ast(Ast&&) = default;
  Ast& operator=(Ast&&) = default;

  Node* make(NodeType type, std::uint32_t line = 0, std::uint32_t column = 0) {
    Node& n = nodes_.emplace_back();
    n.type = type;
    n.line = line;
    n.column = column;
    return &n;
  }

  Node* make_identifier(std::string name) {
    Node* n = make(NodeType::Identifier);
    n->text = std::move(name);
    return n;
  }

  Node* make_string(std::string value) {
    Node* n = make(NodeType::Literal);
    n->sub = static_cast<std::uint8_t>(LiteralKind::kString);
    n->text = std::move(value);
    return n;
  }

  Node* make_number(double value) {
    Node* n = make(NodeType::Literal);
    n->sub = static_cast<std::uint8_t>(LiteralKind::kNumber);
    n->number = value;
    return n;
  }

  /// Deep copy of `node` (and its subtree) into this Ast.
  Node* clone(const Node* node);

  Node* root = nullptr;
  std::size_t size() const { return nodes_.size(); }

 private:
  std::deque<Node> nodes_;
};

/// Number of non-null nodes in the subtree rooted at `node`.
std::size_t count_nodes(const Node* node);

bool is_function_like(const Node* node);

}  // namespace sleuth::js

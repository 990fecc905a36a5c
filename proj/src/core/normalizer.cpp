#include "sleuth/normalizer.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "sleuth/digest.hpp"
#include "sleuth/error.hpp"
#include "sleuth/js/printer.hpp"

extern char** environ;

namespace sleuth {

using js::Node;
using js::NodeType;
namespace flag = js::flag;

const std::vector<std::string>& builtin_passes() {
  static const std::vector<std::string> passes = {
      std::string(pass::kDropDeadCode), std::string(pass::kMergeVars),
      std::string(pass::kFoldConstants), std::string(pass::kBooleans),
      std::string(pass::kVoidUndefined)};
  return passes;
}

std::string NormalizationConfig::canonical() const {
  std::string out = "passes=";
  for (std::size_t i = 0; i < passes.size(); ++i) {
    if (i != 0) out.push_back(',');
    out += passes[i];
  }
  out += ";external=";
  if (external_minifier) {
    out += external_minifier->executable;
    for (const auto& arg : external_minifier->arguments) {
      out.push_back(' ');
      out += arg;
    }
  }
  return out;
}

std::string NormalizationConfig::digest_hex() const { return to_hex(digest_of(canonical())); }

NormalizationConfig NormalizationConfig::none() {
  NormalizationConfig config;
  config.passes.clear();
  return config;
}

void NormalizationConfig::validate() const {
  const auto& known = builtin_passes();
  for (const auto& name : passes) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw Error(ErrorCode::kConfigMismatch, "unknown normalization pass '" + name + "'");
    }
  }
}

namespace {

struct PassSet {
  bool dead_code = false;
  bool merge_vars = false;
  bool fold = false;
  bool booleans = false;
  bool undefined = false;

  explicit PassSet(const std::vector<std::string>& names) {
    for (const auto& n : names) {
      if (n == pass::kDropDeadCode) dead_code = true;
      else if (n == pass::kMergeVars) merge_vars = true;
      else if (n == pass::kFoldConstants) fold = true;
      else if (n == pass::kBooleans) booleans = true;
      else if (n == pass::kVoidUndefined) undefined = true;
      else throw Error(ErrorCode::kConfigMismatch, "unknown normalization pass '" + n + "'");
    }
  }
};

/// Post-order traversal handing each node's owning slot to `visit`, which may
/// replace the pointer or edit the node's children.
template <class Visit>
void post_order(Node*& root, Visit&& visit) {
  struct Frame {
    Node** slot;
    Node* parent;
    std::size_t next;
  };
  if (root == nullptr) return;
  std::vector<Frame> stack{{&root, nullptr, 0}};
  while (!stack.empty()) {
    Frame& top = stack.back();
    Node* n = *top.slot;
    if (top.next < n->kids.size()) {
      const std::size_t i = top.next++;
      if (n->kids[i] != nullptr) stack.push_back({&n->kids[i], n, 0});
      continue;
    }
    Node** slot = top.slot;
    Node* parent = top.parent;
    stack.pop_back();
    visit(*slot, parent);
  }
}

bool is_statement_list(const Node* n) {
  switch (n->type) {
    case NodeType::Program:
    case NodeType::BlockStatement:
    case NodeType::StaticBlock:
    case NodeType::SwitchCase:
      return true;
    default:
      return false;
  }
}

std::size_t list_start(const Node* n) { return n->type == NodeType::SwitchCase ? 1 : 0; }

void collect_bound_identifiers(Node* pattern, std::vector<Node*>& out) {
  if (pattern == nullptr) return;
  std::vector<Node*> stack{pattern};
  while (!stack.empty()) {
    Node* p = stack.back();
    stack.pop_back();
    switch (p->type) {
      case NodeType::Identifier:
        out.push_back(p);
        break;
      case NodeType::ObjectPattern:
        for (auto it = p->kids.rbegin(); it != p->kids.rend(); ++it) {
          Node* prop = *it;
          stack.push_back(prop->type == NodeType::Property ? prop->kids[1] : prop);
        }
        break;
      case NodeType::ArrayPattern:
        for (auto it = p->kids.rbegin(); it != p->kids.rend(); ++it) {
          if (*it != nullptr) stack.push_back(*it);
        }
        break;
      case NodeType::AssignmentPattern:
      case NodeType::RestElement:
        stack.push_back(p->kids[0]);
        break;
      default:
        break;
    }
  }
}

bool binds(Node* pattern, std::string_view name) {
  std::vector<Node*> ids;
  collect_bound_identifiers(pattern, ids);
  return std::any_of(ids.begin(), ids.end(), [&](const Node* id) { return id->text == name; });
}

class Rewriter {
 public:
  Rewriter(js::Ast& ast, const PassSet& passes) : ast_(ast), passes_(passes) {}

  std::size_t run_structural() {
    std::size_t before = rewrites_;
    post_order(ast_.root, [this](Node*& slot, Node*) { visit(slot); });
    return rewrites_ - before;
  }

  std::size_t run_undefined();

 private:
  void visit(Node*& slot) {
    Node* n = slot;
    if (is_statement_list(n)) {
      if (passes_.dead_code) drop_dead_code(n);
      if (passes_.merge_vars) merge_vars(n);
      return;
    }
    if (passes_.fold && n->type == NodeType::BinaryExpression) {
      if (Node* folded = fold(n)) {
        slot = folded;
        ++rewrites_;
      }
      return;
    }
    if (passes_.fold && n->type == NodeType::LogicalExpression) {
      if (Node* folded = fold_logical(n)) {
        slot = folded;
        ++rewrites_;
      }
      return;
    }
    if (passes_.booleans && n->type == NodeType::Literal &&
        n->literal_kind() == js::LiteralKind::kBoolean) {
      slot = make_unary("!", ast_.make_number(n->number != 0.0 ? 0.0 : 1.0));
      ++rewrites_;
    }
  }

  Node* make_unary(std::string op, Node* arg) {
    Node* u = ast_.make(NodeType::UnaryExpression);
    u->text = std::move(op);
    u->set(flag::kPrefix);
    u->kids.push_back(arg);
    return u;
  }

  void drop_dead_code(Node* list) {
    auto& kids = list->kids;
    const std::size_t start = list_start(list);
    std::vector<Node*> kept(kids.begin(), kids.begin() + static_cast<std::ptrdiff_t>(start));
    bool dead = false;
    bool changed = false;
    for (std::size_t i = start; i < kids.size(); ++i) {
      Node* s = kids[i];
      if (s->type == NodeType::EmptyStatement) {
        changed = true;
        continue;
      }
      if (!dead) {
        kept.push_back(s);
        dead = s->type == NodeType::ReturnStatement || s->type == NodeType::ThrowStatement;
        continue;
      }
      if (s->type == NodeType::FunctionDeclaration) {
        kept.push_back(s);
      } else if (s->type == NodeType::VariableDeclaration && s->decl_kind() == js::DeclKind::kVar) {
        if (Node* hoisted = hoisted_var(s)) kept.push_back(hoisted);
        if (hoisted_changed_) changed = true;
      } else {
        changed = true;
      }
    }
    if (changed) {
      kids = std::move(kept);
      ++rewrites_;
    }
  }

  /// `var` statement reduced to its bindings without initialisers.
  Node* hoisted_var(Node* decl) {
    hoisted_changed_ = false;
    std::vector<Node*> ids;
    for (Node* d : decl->kids) {
      if (d->kids[1] != nullptr || d->kids[0]->type != NodeType::Identifier) hoisted_changed_ = true;
      collect_bound_identifiers(d->kids[0], ids);
    }
    if (!hoisted_changed_) return decl;
    if (ids.empty()) return nullptr;
    Node* out = ast_.make(NodeType::VariableDeclaration);
    out->sub = decl->sub;
    for (Node* id : ids) {
      Node* d = ast_.make(NodeType::VariableDeclarator);
      d->kids = {ast_.make_identifier(id->text), nullptr};
      out->kids.push_back(d);
    }
    return out;
  }

  void merge_vars(Node* list) {
    auto& kids = list->kids;
    const std::size_t start = list_start(list);
    if (kids.size() < start + 2) return;
    std::vector<Node*> out(kids.begin(), kids.begin() + static_cast<std::ptrdiff_t>(start));
    bool changed = false;
    for (std::size_t i = start; i < kids.size(); ++i) {
      Node* s = kids[i];
      if (out.size() > start && s->type == NodeType::VariableDeclaration) {
        Node* prev = out.back();
        if (prev->type == NodeType::VariableDeclaration && prev->sub == s->sub) {
          prev->kids.insert(prev->kids.end(), s->kids.begin(), s->kids.end());
          changed = true;
          continue;
        }
      }
      out.push_back(s);
    }
    if (changed) {
      kids = std::move(out);
      ++rewrites_;
    }
  }

  struct Leaf {
    bool is_string = false;
    double number = 0.0;
    std::string text;
  };

  static bool leaf_of(const Node* n, Leaf& out) {
    if (n->type == NodeType::Literal) {
      if (n->literal_kind() == js::LiteralKind::kNumber) {
        out.is_string = false;
        out.number = n->number;
        return true;
      }
      if (n->literal_kind() == js::LiteralKind::kString) {
        out.is_string = true;
        out.text = n->text;
        return true;
      }
      return false;
    }
    if (n->type == NodeType::UnaryExpression && n->text == "-" &&
        n->kids[0]->type == NodeType::Literal &&
        n->kids[0]->literal_kind() == js::LiteralKind::kNumber) {
      out.is_string = false;
      out.number = -n->kids[0]->number;
      return true;
    }
    return false;
  }

  static std::string to_js_string(const Leaf& l) {
    return l.is_string ? l.text : js::format_number(l.number);
  }

  Node* fold(const Node* n) {
    const std::string& op = n->text;
    Leaf a;
    Leaf b;
    if (!leaf_of(n->kids[0], a) || !leaf_of(n->kids[1], b)) return nullptr;
    if (op == "+" && (a.is_string || b.is_string)) {
      return ast_.make_string(to_js_string(a) + to_js_string(b));
    }
    if (a.is_string || b.is_string) return nullptr;
    double r = 0.0;
    if (op == "+") r = a.number + b.number;
    else if (op == "-") r = a.number - b.number;
    else if (op == "*") r = a.number * b.number;
    else if (op == "/") r = a.number / b.number;
    else if (op == "%") r = std::fmod(a.number, b.number);
    else if (op == "**") {
      if (!std::isfinite(b.number) || !std::isfinite(a.number)) return nullptr;
      r = std::pow(a.number, b.number);
    } else {
      return nullptr;
    }
    if (!std::isfinite(r) || (r == 0.0 && std::signbit(r))) return nullptr;
    if (r < 0) return make_unary("-", ast_.make_number(-r));
    return ast_.make_number(r);
  }

  enum class Truth { kUnknown, kTruthy, kFalsy, kNullish };

  static Truth truth_of(const Node* n) {
    if (n->type == NodeType::Literal) {
      switch (n->literal_kind()) {
        case js::LiteralKind::kNull:
          return Truth::kNullish;
        case js::LiteralKind::kBoolean:
        case js::LiteralKind::kNumber:
          return n->number != 0.0 && !std::isnan(n->number) ? Truth::kTruthy : Truth::kFalsy;
        case js::LiteralKind::kString:
          return n->text.empty() ? Truth::kFalsy : Truth::kTruthy;
        default:
          return Truth::kUnknown;
      }
    }
    if (n->type == NodeType::UnaryExpression && n->kids[0]->type == NodeType::Literal) {
      const Truth inner = truth_of(n->kids[0]);
      if (inner == Truth::kUnknown) return inner;
      if (n->text == "void") return Truth::kNullish;
      if (n->text == "!") return inner == Truth::kTruthy ? Truth::kFalsy : Truth::kTruthy;
    }
    return Truth::kUnknown;
  }

  /// `&&`, `||` and `??` whose left operand is a constant.
  static Node* fold_logical(const Node* n) {
    const Truth t = truth_of(n->kids[0]);
    if (t == Truth::kUnknown) return nullptr;
    const bool falsy = t != Truth::kTruthy;
    bool take_left = false;
    if (n->text == "&&") take_left = falsy;
    else if (n->text == "||") take_left = !falsy;
    else if (n->text == "??") take_left = t != Truth::kNullish;
    else return nullptr;
    return take_left ? n->kids[0] : n->kids[1];
  }

  js::Ast& ast_;
  const PassSet& passes_;
  std::size_t rewrites_ = 0;
  bool hoisted_changed_ = false;
};

/// Whether the var scope owned by `fn` (params, own name, var and function
/// declarations outside nested functions) binds `name`.
bool function_scope_binds(Node* fn, std::string_view name) {
  const bool arrow = fn->type == NodeType::ArrowFunctionExpression;
  const std::size_t first_param = arrow ? 0 : 1;
  if (!arrow && fn->type == NodeType::FunctionExpression && fn->kids[0] != nullptr &&
      fn->kids[0]->text == name) {
    return true;
  }
  for (std::size_t i = first_param; i + 1 < fn->kids.size(); ++i) {
    if (binds(fn->kids[i], name)) return true;
  }
  std::vector<Node*> stack{fn->kids.back()};
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    if (n->type == NodeType::VariableDeclaration && n->decl_kind() == js::DeclKind::kVar) {
      for (Node* d : n->kids) {
        if (binds(d->kids[0], name)) return true;
      }
    }
    if (n->type == NodeType::FunctionDeclaration) {
      if (n->kids[0] != nullptr && n->kids[0]->text == name) return true;
      continue;
    }
    if (js::is_function_like(n)) continue;
    for (Node* k : n->kids) {
      if (k != nullptr) stack.push_back(k);
    }
  }
  return false;
}

bool program_binds(Node* program, std::string_view name) {
  std::vector<Node*> stack{program};
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    if (n->type == NodeType::VariableDeclaration) {
      for (Node* d : n->kids) {
        if (binds(d->kids[0], name)) return true;
      }
    }
    if ((n->type == NodeType::FunctionDeclaration || n->type == NodeType::ClassDeclaration) &&
        n->kids[0] != nullptr && n->kids[0]->text == name) {
      return true;
    }
    if (n->type == NodeType::ImportDeclaration) {
      for (Node* spec : n->kids) {
        if (spec->type != NodeType::Literal && spec->kids.back()->text == name) return true;
      }
    }
    if (js::is_function_like(n)) continue;
    for (Node* k : n->kids) {
      if (k != nullptr) stack.push_back(k);
    }
  }
  return false;
}

bool lexical_statement_binds(const Node* s, std::string_view name) {
  if (s == nullptr) return false;
  if (s->type == NodeType::VariableDeclaration && s->decl_kind() != js::DeclKind::kVar) {
    for (Node* d : s->kids) {
      if (binds(d->kids[0], name)) return true;
    }
  }
  if ((s->type == NodeType::ClassDeclaration || s->type == NodeType::FunctionDeclaration) &&
      s->kids[0] != nullptr && s->kids[0]->text == name) {
    return true;
  }
  return false;
}

bool scope_shadows(Node* n, std::string_view name) {
  switch (n->type) {
    case NodeType::Program:
      return program_binds(n, name);
    case NodeType::FunctionDeclaration:
    case NodeType::FunctionExpression:
    case NodeType::ArrowFunctionExpression:
      return function_scope_binds(n, name);
    case NodeType::BlockStatement:
    case NodeType::StaticBlock:
      return std::any_of(n->kids.begin(), n->kids.end(),
                         [&](const Node* s) { return lexical_statement_binds(s, name); });
    case NodeType::SwitchStatement:
      for (std::size_t i = 1; i < n->kids.size(); ++i) {
        const auto& stmts = n->kids[i]->kids;
        for (std::size_t j = 1; j < stmts.size(); ++j) {
          if (lexical_statement_binds(stmts[j], name)) return true;
        }
      }
      return false;
    case NodeType::ForStatement:
    case NodeType::ForInStatement:
    case NodeType::ForOfStatement:
      return lexical_statement_binds(n->kids[0], name);
    case NodeType::CatchClause:
      return binds(n->kids[0], name);
    case NodeType::ClassDeclaration:
    case NodeType::ClassExpression:
      return n->kids[0] != nullptr && n->kids[0]->text == name;
    default:
      return false;
  }
}

/// Slots whose Identifier is a name, binding, or assignment target rather
/// than a value reference.
bool non_reference_slot(const Node* parent, std::size_t idx, bool parent_in_object_pattern) {
  const bool computed = parent->has(flag::kComputed);
  switch (parent->type) {
    case NodeType::MemberExpression:
      return idx == 1 && !computed;
    case NodeType::Property:
      return (idx == 0 && !computed) || (idx == 1 && parent_in_object_pattern);
    case NodeType::MethodDefinition:
    case NodeType::PropertyDefinition:
      return idx == 0 && !computed;
    case NodeType::LabeledStatement:
    case NodeType::BreakStatement:
    case NodeType::ContinueStatement:
    case NodeType::VariableDeclarator:
    case NodeType::CatchClause:
    case NodeType::ClassDeclaration:
    case NodeType::ClassExpression:
    case NodeType::AssignmentExpression:
    case NodeType::AssignmentPattern:
    case NodeType::UpdateExpression:
    case NodeType::ForInStatement:
    case NodeType::ForOfStatement:
    case NodeType::ExportAllDeclaration:
      return idx == 0;
    case NodeType::UnaryExpression:
      return parent->text == "delete";
    case NodeType::FunctionDeclaration:
    case NodeType::FunctionExpression:
      return idx + 1 < parent->kids.size();
    case NodeType::ArrowFunctionExpression:
      return idx + 1 < parent->kids.size();
    case NodeType::MetaProperty:
    case NodeType::ImportSpecifier:
    case NodeType::ExportSpecifier:
    case NodeType::ImportDefaultSpecifier:
    case NodeType::ImportNamespaceSpecifier:
    case NodeType::ArrayPattern:
    case NodeType::RestElement:
    case NodeType::ObjectPattern:
      return true;
    default:
      return false;
  }
}

std::size_t Rewriter::run_undefined() {
  struct Frame {
    Node** slot;
    Node* parent;
    std::size_t idx;
    bool shadowed;
    bool parent_in_object_pattern;
  };
  const std::size_t before = rewrites_;
  std::vector<Frame> stack{{&ast_.root, nullptr, 0, false, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    Node* n = *f.slot;
    if (n->type == NodeType::Identifier) {
      if (!f.shadowed && n->text == "undefined" &&
          (f.parent == nullptr || !non_reference_slot(f.parent, f.idx, f.parent_in_object_pattern))) {
        *f.slot = make_unary("void", ast_.make_number(0));
        ++rewrites_;
      }
      continue;
    }
    bool shadowed = f.shadowed || scope_shadows(n, "undefined");
    const bool obj_pattern = n->type == NodeType::ObjectPattern;
    for (std::size_t i = n->kids.size(); i-- > 0;) {
      if (n->kids[i] == nullptr) continue;
      const bool kid_shadowed =
          shadowed || (n->type == NodeType::WithStatement && i == 1);
      stack.push_back({&n->kids[i], n, i, kid_shadowed, obj_pattern});
    }
  }
  return rewrites_ - before;
}

constexpr int kMaxRounds = 64;

js::ParsedDocument parse_for_normalization(std::string_view source) {
  if (source.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyInput, "empty input");
  }
  return js::parse_any(source);
}

}  // namespace

std::size_t apply_passes(js::Ast& ast, const std::vector<std::string>& names) {
  const PassSet passes(names);
  Rewriter rewriter(ast, passes);
  std::size_t total = 0;
  for (int round = 0; round < kMaxRounds; ++round) {
    std::size_t changed = rewriter.run_structural();
    if (passes.undefined) changed += rewriter.run_undefined();
    total += changed;
    if (changed == 0) break;
  }
  return total;
}

js::ParsedDocument normalize_document(std::string_view source, const NormalizationConfig& config,
                                      std::vector<std::string>* warnings) {
  config.validate();
  std::optional<js::ParsedDocument> doc;
  if (config.external_minifier) {
    try {
      const std::string minified = run_external_minifier(*config.external_minifier, source);
      doc.emplace(parse_for_normalization(minified));
    } catch (const Error& e) {
      if (warnings != nullptr) {
        warnings->push_back(std::string("external minifier failed, using built-in passes: ") + e.what());
      }
    }
  }
  if (!doc) doc.emplace(parse_for_normalization(source));
  apply_passes(doc->ast, config.passes);
  return std::move(*doc);
}

std::string normalize(std::string_view source, const NormalizationConfig& config,
                      std::vector<std::string>* warnings) {
  js::ParsedDocument doc = normalize_document(source, config, warnings);
  return js::print(doc.ast.root);
}

TokenString normalize_tokens(std::string_view source, const NormalizationConfig& config,
                             const TokenVocabulary& vocabulary, std::string source_id,
                             std::vector<std::string>* warnings) {
  js::ParsedDocument doc = normalize_document(source, config, warnings);
  TokenString out;
  out.tokens = flatten(doc.ast.root, vocabulary);
  out.source_id = std::move(source_id);
  return out;
}

namespace {

class TempFile {
 public:
  explicit TempFile(std::string_view contents) {
    std::string pattern = (std::filesystem::temp_directory_path() / "sleuth-XXXXXX").string();
    const int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw Error(ErrorCode::kExternalToolError, "cannot create temporary file");
    path_ = pattern;
    std::size_t off = 0;
    while (off < contents.size()) {
      const ssize_t n = ::write(fd, contents.data() + off, contents.size() - off);
      if (n <= 0) {
        ::close(fd);
        throw Error(ErrorCode::kExternalToolError, "cannot write temporary file");
      }
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  ~TempFile() { std::filesystem::remove(path_); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace

std::string run_external_minifier(const ExternalMinifier& tool, std::string_view source) {
  TempFile input(source);
  int out_pipe[2];
  if (::pipe(out_pipe) != 0) throw Error(ErrorCode::kExternalToolError, "pipe failed");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, input.path().c_str(), O_RDONLY, 0);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[1]);

  std::vector<std::string> argv_storage{tool.executable};
  argv_storage.insert(argv_storage.end(), tool.arguments.begin(), tool.arguments.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, tool.executable.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(out_pipe[0]);
    throw Error(ErrorCode::kExternalToolError,
                "cannot start '" + tool.executable + "': " + std::strerror(rc));
  }
  std::string output;
  char buf[65536];
  for (;;) {
    const ssize_t n = ::read(out_pipe[0], buf, sizeof(buf));
    if (n > 0) {
      output.append(buf, static_cast<std::size_t>(n));
    } else if (n == 0 || errno != EINTR) {
      break;
    }
  }
  ::close(out_pipe[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(ErrorCode::kExternalToolError,
                "'" + tool.executable + "' exited with status " +
                    std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
  }
  return output;
}

}  // namespace sleuth

#include "doctest.h"
#include "sleuth/error.hpp"
#include "sleuth/js/parser.hpp"
#include "sleuth/js/tokens.hpp"
#include "support/js_snippets.hpp"

using namespace sleuth;

TEST_CASE("identifier independence") {
  CHECK(tokenize("var a = 1;") == tokenize("var zz = 1;"));
  CHECK(tokenize("function f(a){return a.b}") == tokenize("function g(q){return q.z}"));
}

TEST_CASE("empty input") {
  CHECK_THROWS_AS(tokenize(""), Error);
  try {
    tokenize("  \n ");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyInput);
  }
}

TEST_CASE("operator granularity follows the vocabulary") {
  const auto plus = tokenize("let x = 1 + 2;");
  const auto times = tokenize("let x = 1 * 2;");
  CHECK(plus.size() == times.size());
  CHECK(plus == times);
  const auto& ops = TokenVocabulary::with_operators();
  const auto plus_ops = tokenize("let x = 1 + 2;", ops);
  const auto times_ops = tokenize("let x = 1 * 2;", ops);
  CHECK(plus_ops.size() == times_ops.size());
  CHECK_FALSE(plus_ops == times_ops);
  CHECK(token_name(plus_ops.tokens[4], ops) == "BinaryExpression:+");
}

TEST_CASE("token_name") {
  const auto& v = TokenVocabulary::standard();
  CHECK(token_name(0) == "Program");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto id = static_cast<TokenTypeId>(i);
    CHECK(v.id(v.name(id)) == id);
  }
  CHECK_THROWS_AS(token_name(static_cast<TokenTypeId>(v.size())), Error);
  CHECK(TokenVocabulary::by_version("estree-nodes/1").version() == v.version());
}

TEST_CASE("length equals node count") {
  for (auto src : testing::syntax_snippets()) {
    CAPTURE(src);
    auto doc = js::parse_any(src);
    CHECK(tokenize(src).size() == js::count_nodes(doc.ast.root));
  }
}

TEST_CASE("concrete shape") {
  const auto& v = TokenVocabulary::standard();
  const auto t = tokenize("var a = 1;");
  std::vector<std::string_view> names;
  for (auto id : t.tokens) names.push_back(v.name(id));
  CHECK(names == std::vector<std::string_view>{"Program", "VariableDeclaration", "VariableDeclarator",
                                               "Identifier", "Literal"});
}

TEST_CASE("ranges cover subtrees") {
  auto doc = js::parse_any("f(function(){a()}, function(){b(1)})");
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  auto toks = flatten_with_ranges(
      doc.ast.root, TokenVocabulary::standard(),
      [](const js::Node& n) { return n.type == js::NodeType::FunctionExpression; },
      [&](const js::Node&, std::size_t b, std::size_t e) { ranges.emplace_back(b, e); });
  REQUIRE(ranges.size() == 2);
  CHECK(toks == flatten(doc.ast.root));
  CHECK(ranges[0].second <= ranges[1].first);
  CHECK(ranges[1].second == toks.size());
}

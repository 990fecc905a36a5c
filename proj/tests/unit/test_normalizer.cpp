#include "doctest.h"
#include "sleuth/error.hpp"
#include "sleuth/normalizer.hpp"
#include "support/js_snippets.hpp"
#include "support/synthetic_js.hpp"

using namespace sleuth;

namespace {

std::string norm(std::string_view s) { return normalize(s); }
std::string canon(std::string_view s) { return normalize(s, NormalizationConfig::none()); }

}  // namespace

TEST_CASE("constant folding") {
  CHECK(norm("\"abc\" + \"def\"") == canon("\"abcdef\""));
  CHECK(norm("24 + 18") == canon("42"));
  CHECK(norm("x = 1 + 2 + 'a'") == canon("x = '3a'"));
  CHECK(norm("x = 'a' + 1 + 2") == canon("x = 'a12'"));
  CHECK(norm("x = 2 - 5") == canon("x = -3"));
  CHECK(norm("x = 2 ** 10 % 1000") == canon("x = 24"));
  CHECK(norm("x = 1 / 0") == canon("x = 1 / 0"));
  CHECK(norm("x = 0 * -1") == canon("x = 0 * -1"));
  CHECK(norm("x = 'a' - 1") == canon("x = 'a' - 1"));
  CHECK(norm("x = a + 1 + 2") == canon("x = a + 1 + 2"));
}

TEST_CASE("short-circuit folding") {
  CHECK(norm("x = !1 && void 0") == canon("x = !1"));
  CHECK(norm("x = false && f()") == canon("x = !1"));
  CHECK(norm("x = true && f()") == canon("x = f()"));
  CHECK(norm("x = 0 || y") == canon("x = y"));
  CHECK(norm("x = 'a' || y") == canon("x = 'a'"));
  CHECK(norm("x = '' && y") == canon("x = ''"));
  CHECK(norm("x = null ?? y") == canon("x = y"));
  CHECK(norm("x = void 0 ?? y") == canon("x = y"));
  CHECK(norm("x = 0 ?? y") == canon("x = 0"));
  CHECK(norm("x = !0 || (a, b)") == canon("x = !0"));
  CHECK(norm("x = a && 1") == canon("x = a && 1"));
  CHECK(norm("x = /r/ && y") == canon("x = /r/ && y"));
}

TEST_CASE("var merging") {
  CHECK(tokenize(norm("var a; var b = 1;")) == tokenize("var a, b = 1;"));
  CHECK(norm("let a = 1; let b = 2; var c;") == canon("let a = 1, b = 2; var c;"));
  CHECK(norm("let a; const b = 1;") == canon("let a; const b = 1;"));
}

TEST_CASE("boolean and undefined canonical forms") {
  CHECK(norm("x = true; y = false;") == canon("x = !0; y = !1;"));
  CHECK(norm("x = undefined;") == canon("x = void 0;"));
  CHECK(normalize_tokens("f(undefined, a === undefined)") ==
        normalize_tokens("f(void 0, a === void 0)"));
  CHECK(norm("o.undefined = {undefined: 1}") == canon("o.undefined = {undefined: 1}"));
  CHECK(norm("function f(undefined) { return undefined; } g(undefined);") ==
        canon("function f(undefined) { return undefined; } g(void 0);"));
  CHECK(norm("function f() { var undefined = 1; return undefined; } g(undefined);") ==
        canon("function f() { var undefined = 1; return undefined; } g(void 0);"));
  CHECK(norm("with (o) { undefined; } undefined;") == canon("with (o) { undefined; } void 0;"));
  CHECK(norm("x = {undefined};") == canon("x = {undefined: void 0};"));
  CHECK(norm("undefined = 1; delete undefined;") == canon("undefined = 1; delete undefined;"));
}

TEST_CASE("dead code after return and throw") {
  CHECK(norm("function f() { return 1; g(); var a = 2; function h() {} }") ==
        canon("function f() { return 1; var a; function h() {} }"));
  CHECK(norm("function f() { throw e; let z = 1; }") == canon("function f() { throw e; }"));
  CHECK(norm("switch (a) { case 1: return; b(); case 2: c(); }") ==
        canon("switch (a) { case 1: return; case 2: c(); }"));
  CHECK(norm("function f() { return; var {a, b: [c]} = o; }") ==
        canon("function f() { return; var a, c; }"));
  CHECK(norm(";;a();;") == canon("a();"));
  CHECK(norm("if (a) ; else b();") == canon("if (a) ; else b();"));
}

TEST_CASE("passes are individually toggleable") {
  NormalizationConfig only_fold;
  only_fold.passes = {std::string(pass::kFoldConstants)};
  CHECK(normalize("x = 1 + 2; y = true;", only_fold) == canon("x = 3; y = true;"));
  NormalizationConfig bad;
  bad.passes = {"inline-everything"};
  CHECK_THROWS_AS(normalize("x", bad), Error);
  CHECK(NormalizationConfig{}.digest_hex() != only_fold.digest_hex());
  CHECK(NormalizationConfig{}.digest_hex() == NormalizationConfig{}.digest_hex());
}

TEST_CASE("idempotence on synthetic corpus") {
  for (int seed = 0; seed < 50; ++seed) {
    testing::SyntheticJs gen(static_cast<std::uint64_t>(seed));
    const std::string src = gen.program(12);
    CAPTURE(src);
    const std::string once = norm(src);
    CHECK(norm(once) == once);
    CHECK(normalize_tokens(src) == tokenize(once));
  }
  for (auto src : testing::syntax_snippets()) {
    CAPTURE(src);
    const std::string once = norm(src);
    CHECK(norm(once) == once);
    CHECK(normalize_tokens(src) == tokenize(once));
  }
}

TEST_CASE("pass golden pairs converge") {
  const std::pair<const char*, const char*> pairs[] = {
      {"x = 'ab' + 'cd';", "x = 'abcd';"},
      {"a = 40 + 2;", "a = 42;"},
      {"a = true;", "a = !0;"},
      {"a = undefined;", "a = void 0;"},
      {"var a = 1; var b = 2;", "var a = 1, b = 2;"},
      {"function f() { return a; b(); }", "function f() { return a; }"},
      {"a();;", "a();"},
  };
  for (auto [before, after] : pairs) {
    CAPTURE(before);
    CHECK(norm(before) == norm(after));
  }
}

TEST_CASE("template literal vs concat is a known gap") {
  CHECK_FALSE(normalize_tokens("x = `a${y}`;") == normalize_tokens("x = \"a\".concat(y);"));
}

TEST_CASE("external minifier") {
  NormalizationConfig cat_config;
  cat_config.external_minifier = ExternalMinifier{"cat", {}};
  std::vector<std::string> warnings;
  CHECK(normalize("x = 1 + 2;", cat_config, &warnings) == canon("x = 3;"));
  CHECK(warnings.empty());

  NormalizationConfig broken;
  broken.external_minifier = ExternalMinifier{"false", {}};
  CHECK(normalize("x = 1 + 2;", broken, &warnings) == canon("x = 3;"));
  CHECK(warnings.size() == 1);

  NormalizationConfig missing;
  missing.external_minifier = ExternalMinifier{"/nonexistent/minifier", {}};
  CHECK(normalize("x = true;", missing, &warnings) == canon("x = !0;"));
  CHECK(warnings.size() == 2);
  CHECK_THROWS_AS(run_external_minifier(*missing.external_minifier, "x"), Error);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(normalize("var = ;"), ParseError);
  CHECK_THROWS_AS(normalize(""), Error);
}

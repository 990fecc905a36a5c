#include "doctest.h"
#include "sleuth/normalizer.hpp"
#include "support/run_node.hpp"
#include "support/synthetic_js.hpp"

using namespace sleuth;

namespace {

std::string probe_program(std::uint64_t seed) {
  testing::SyntheticJs gen(seed);
  std::string p =
      "var a = 3, b = 's', c = true, i = 0, n = 2, x = 5, qux = 7;\n"
      "function foo(p, q) { return [p, q]; }\nvar bar = foo, baz = foo;\n"
      "var out = [];\n"
      "function show(v) { return typeof v + ':' + (typeof v === 'function' ? 'fn' : v && typeof v === 'object' ? JSON.stringify(v) : String(v)); }\n";
  for (int e = 0; e < 25; ++e) {
    p += "try { out.push(show(" + gen.expr(3) + ")); } catch (err) { out.push('E:' + err.constructor.name); }\n";
  }
  p += "function dead(u) {\n  if (u) { return 1; out.push('never'); var late = 2; }\n"
       "  return late === undefined ? 'hoisted' : 'assigned';\n  function inner() {}\n}\n"
       "out.push(dead(true), dead(false), typeof inner, 40 + 2, 'a' + 1 + 2, 2 ** -1, 7 % -3);\n"
       "var t = true, f = false, v = undefined; out.push(show(t), show(f), show(v), show(!0 === true));\n"
       "console.log(out.join('|'));\n";
  return p;
}

}  // namespace

TEST_CASE("normalized programs print the same results under node") {
  const auto node = testing::node_executable();
  if (!node) {
    MESSAGE("node not found; skipping");
    return;
  }
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::string before = probe_program(seed);
    const std::string after = normalize(before);
    CAPTURE(before);
    CAPTURE(after);
    const std::string out_before = testing::run_node(*node, before, "b" + std::to_string(seed));
    const std::string out_after = testing::run_node(*node, after, "a" + std::to_string(seed));
    CHECK(out_before.size() > 10);
    CHECK(out_before == out_after);
  }
}

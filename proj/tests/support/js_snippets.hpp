#pragma once

#include <string_view>
#include <vector>

namespace sleuth::testing {

/// Syntax coverage corpus: every entry parses under script or module goal.
inline const std::vector<std::string_view>& syntax_snippets() {
  static const std::vector<std::string_view> snippets = {
      "var a = 1;",
      "let x = 1 + 2 * 3, y = (1 + 2) * 3;",
      "const {a, b: [c, d = 2], ...rest} = obj;",
      "function f(a, b = 1, ...c) { return a + b; }",
      "async function* g() { yield* other(); await x; for await (const y of z) {} }",
      "class A extends B { #p = 1; static s; get x() { return this.#p; } set x(v) {} static { init(); } constructor() { super(); } }",
      "label: for (var i = 0; i < 10; i++) { if (i) continue label; else break; }",
      "for (const k in o) ; for (let v of arr) f(v);",
      "do x++; while (x < 5)",
      "switch (a) { case 1: b(); break; default: c(); }",
      "try { t(); } catch (e) { h(e); } finally { done(); }",
      "try { t(); } catch { }",
      "a = b ? c : d ? e : f;",
      "x = a ?? b; y = (a || b) ?? c; z = a?.b?.[c]?.(d);",
      "x **= 2; y = (-2) ** 2; z = 2 ** -1;",
      "new Foo; new Foo.Bar(1); new (foo())(); new new X()();",
      "var re = /ab+c/gi, s = 'str\\n', t = `a${b}c${d}`;",
      "tag`hello ${world} and ${more}`;",
      "x = function () {}; y = () => ({}); z = async (a) => a;",
      "(function () { 'use strict'; })();",
      "!function () {}();",
      "a = [1, , 3, ...b];",
      "o = { a, b: 1, [c]: 2, d() {}, get e() { return 1; }, set e(v) {}, async *f() {}, 'g-h': 3, 4: 5 };",
      "if (a) if (b) c(); else d();",
      "x = typeof a === 'undefined' && void 0;",
      "delete o[k], i--, --j;",
      "x = a in b; for (var i = (0 in o); i < 1; i++);",
      "import d, { a as b, c } from 'm'; export { b as default2 };",
      "import * as ns from 'n'; export * from 'o'; export * as p from 'q';",
      "export default function () {} export const z = 1;",
      "export default class {}",
      "export default (1, 2);",
      "import 'side-effect';",
      "const m = import.meta.url; const p = import('./x.js');",
      "x = 0x1f + 0o17 + 0b101 + 1_000 + 1e21 + .5 + 10n;",
      "({ a } = b);",
      "[a, b] = [b, a];",
      "x = a => b => a + b;",
      "with (o) { p(); }",
      "debugger;",
      "if (a) { } else if (b) { } else { }",
      "x = (a, b);",
      "f(...args, last);",
      "x = a instanceof B || !c;",
      "x = -(-a); y = +(+b); z = - -c; w = a - -b; v = a + +b;",
      "x = (a = 1) => a; y = ([a], {b}) => a + b;",
      "while (true) { if (x) break; }",
      "throw new Error('bad');",
      "x = `line1\\nline2`;",
      "x = '\\u00e9\\u{1F600}';",
      "x = 1..toString() + 1.5.toFixed(2);",
      "x = a < !--b;",
      "x = (async function () {}), y = async () => { await 1; };",
      "x = y => { return { a: 1 }; };",
      "let async = 1; async = 2;",
      "x = class { static async *m() {} 'quoted'() {} [k] = 1; };",
      "x = a ? (b, c) : d;",
      "x = (a, b) => (c, d);",
      "x = { __proto__: null, 'a b': 1 };",
      "for (;;) {}",
  };
  return snippets;
}

}  // namespace sleuth::testing

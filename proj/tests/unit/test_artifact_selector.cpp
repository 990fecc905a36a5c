#include <zlib.h>

#include <cstring>

#include "doctest.h"
#include "sleuth/artifact_selector.hpp"
#include "sleuth/error.hpp"
#include "support/temp_dir.hpp"

using namespace sleuth;
using testing::TempDir;

namespace {

std::string reason_of(const std::filesystem::path& root) {
  try {
    select_files(root);
  } catch (const SelectionError& e) {
    return e.reason();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Minimal ustar writer: one regular-file entry per (name, content).
std::string ustar(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [name, content] : entries) {
    char h[512] = {};
    std::snprintf(h, 100, "%s", name.c_str());
    std::snprintf(h + 100, 8, "%07o", 0644);
    std::snprintf(h + 108, 8, "%07o", 0);
    std::snprintf(h + 116, 8, "%07o", 0);
    std::snprintf(h + 124, 12, "%011lo", static_cast<unsigned long>(content.size()));
    std::snprintf(h + 136, 12, "%011o", 0);
    h[156] = '0';
    std::memcpy(h + 257, "ustar", 6);
    std::memcpy(h + 263, "00", 2);
    std::memset(h + 148, ' ', 8);
    unsigned sum = 0;
    for (unsigned char c : h) sum += c;
    std::snprintf(h + 148, 8, "%06o", sum);
    out.append(h, 512);
    out += content;
    out.append((512 - content.size() % 512) % 512, '\0');
  }
  out.append(1024, '\0');
  return out;
}

void write_gzip(const std::filesystem::path& p, const std::string& data) {
  gzFile f = gzopen(p.c_str(), "wb");
  REQUIRE(f != nullptr);
  gzwrite(f, data.data(), static_cast<unsigned>(data.size()));
  gzclose(f);
}

}  // namespace

TEST_CASE("prebundled fields win") {
  TempDir d;
  d.write("package.json", R"({"unpkg":"dist/u.js","jsdelivr":"dist/j.js","main":"index.js"})");
  d.write("dist/u.js", "var u=1;");
  d.write("dist/j.js", "var j=1;");
  d.write("index.js", "module.exports=1;");
  auto r = select_files(d.path());
  CHECK(r.strategy == SelectionStrategy::kPrebundledField);
  CHECK(r.files == std::vector<std::string>{"dist/j.js"});

  d.write("package.json", R"({"unpkg":"./dist/u.js","jsdelivr":"dist/missing.js","main":"index.js"})");
  r = select_files(d.path());
  CHECK(r.files == std::vector<std::string>{"dist/u.js"});
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("entry point closure is collected depth first") {
  TempDir d;
  d.write("package.json", R"({"name":"pkg","main":"./src/index","imports":{"#util":"./src/util.js"}})");
  d.write("src/index.js",
          "import a from './a';\nimport React from 'react';\nconst lib = require('./lib');\n"
          "import('#util');\nexport * from '@scope/thing/deep';\n");
  d.write("src/a.js", "import './b.mjs';\nimport './index.js';\nexport default 1;");
  d.write("src/b.mjs", "export const b = 2; import data from './data.json';");
  d.write("src/data.json", "{}");
  d.write("src/lib/index.js", "module.exports = require('../a');");
  d.write("src/util.js", "require('./nowhere');");
  d.write("src/unused.js", "");
  const auto r = select_files(d.path());
  CHECK(r.strategy == SelectionStrategy::kEntrypointResolution);
  CHECK(r.files == std::vector<std::string>{"src/index.js", "src/a.js", "src/b.mjs", "src/lib/index.js",
                                            "src/util.js"});
  CHECK(r.dependencies == std::vector<std::string>{"react", "@scope/thing"});
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("./nowhere") != std::string::npos);
}

TEST_CASE("exports map conditions and patterns") {
  TempDir d;
  const nlohmann::json pkg = nlohmann::json::parse(R"({
    "name": "pkg",
    "exports": {
      ".": {"node": "./node.js", "browser": {"import": "./b.mjs", "default": "./b.js"}, "default": "./d.js"},
      "./feature/*": "./lib/features/*.js",
      "./feature/internal/*": null,
      "./folder/": "./lib/folder/"
    }})");
  d.write("package.json", pkg.dump());
  for (const char* f : {"node.js", "b.mjs", "b.js", "d.js", "lib/features/x.js", "lib/folder/y.js"}) d.write(f, "");
  CHECK(select_files(d.path()).files == std::vector<std::string>{"b.mjs"});

  auto r = resolve_specifier(d.path(), "b.mjs", "pkg/feature/x", pkg);
  CHECK(r.kind == Resolution::Kind::kPath);
  CHECK(r.path == "lib/features/x.js");
  r = resolve_specifier(d.path(), "b.mjs", "pkg/folder/y.js", pkg);
  CHECK(r.path == "lib/folder/y.js");
  r = resolve_specifier(d.path(), "b.mjs", "pkg/feature/internal/z", pkg);
  CHECK(r.kind == Resolution::Kind::kUnresolved);
  r = resolve_specifier(d.path(), "b.mjs", "other/x", pkg);
  CHECK(r.kind == Resolution::Kind::kExternal);
  CHECK(r.package == "other");
  r = resolve_specifier(d.path(), "b.mjs", "node:fs", pkg);
  CHECK(r.kind == Resolution::Kind::kExternal);
}

TEST_CASE("import specifiers") {
  CHECK(import_specifiers("import a from 'x'; export {b} from \"y\"; require('z'); import('w'); f('no');") ==
        std::vector<std::string>{"x", "y", "z", "w"});
  bool fallback = false;
  CHECK(import_specifiers("import a from 'x'; this is not js ((( require('q')", &fallback) ==
        std::vector<std::string>{"x", "q"});
  CHECK(fallback);
}

TEST_CASE("naming heuristics") {
  TempDir d;
  d.write("package.json", R"({"name":"pkg"})");
  d.write("lib/z.js", "");
  d.write("lib/a.js", "");
  d.write("lib/a.min.js", "");
  d.write("lib/solo.min.js", "");
  d.write("Test/t.js", "");
  d.write("examples/e.js", "");
  d.write("node_modules/dep/index.js", "");
  d.write("src/__tests__/x.js", "");
  d.write("src/vendor/v.js", "");
  d.write("src/keep.cjs", "");
  d.write("README.md", "");
  const auto r = select_files(d.path());
  CHECK(r.strategy == SelectionStrategy::kHeuristic);
  CHECK(r.files == std::vector<std::string>{"lib/a.js", "lib/solo.min.js", "lib/z.js", "src/keep.cjs"});
}

TEST_CASE("selection failures carry reasons") {
  TempDir d;
  CHECK(reason_of(d.path()) == "no-package-json");
  d.write("package.json", "{not json");
  CHECK(reason_of(d.path()) == "bad-package-json");
  d.write("package.json", "[]");
  CHECK(reason_of(d.path()) == "bad-package-json");
  d.write("package.json", "{}");
  CHECK(reason_of(d.path()) == "no-files");
  d.write("src/index.ts", "export const x: number = 1;");
  CHECK(reason_of(d.path()) == "typescript-only");
}

TEST_CASE("tarball unpacking") {
  TempDir d;
  const std::string long_name = std::string(120, 'n') + ".js";
  d.write("src/package/package.json", R"({"main":"index.js"})");
  d.write("src/package/index.js", "module.exports = 42;\n");
  d.write("src/package/deep/dir/" + long_name, "long");
  const auto tgz = d.path() / "pkg.tgz";
  const std::string cmd = "tar -czf " + tgz.string() + " -C " + (d.path() / "src").string() + " package";
  if (std::system(cmd.c_str()) != 0) {
    MESSAGE("tar unavailable; skipping system tarball");
  } else {
    unpack_tarball(tgz, d.path() / "out");
    CHECK(slurp(d.path() / "out/index.js") == "module.exports = 42;\n");
    CHECK(slurp(d.path() / "out/deep/dir" / long_name) == "long");
    CHECK(select_files(d.path() / "out").files == std::vector<std::string>{"index.js"});
  }

  write_gzip(d.path() / "own.tgz", ustar({{"package/a.js", std::string(700, 'a')}, {"package/b/c.js", "c"}}));
  unpack_tarball(d.path() / "own.tgz", d.path() / "own");
  CHECK(slurp(d.path() / "own/a.js") == std::string(700, 'a'));
  CHECK(slurp(d.path() / "own/b/c.js") == "c");

  write_gzip(d.path() / "evil.tgz", ustar({{"package/../../escape.js", "x"}}));
  CHECK_THROWS_AS(unpack_tarball(d.path() / "evil.tgz", d.path() / "evil"), Error);
  CHECK_FALSE(std::filesystem::exists(d.path() / "escape.js"));

  d.write("junk.tgz", "definitely not gzip");
  CHECK_THROWS_AS(unpack_tarball(d.path() / "junk.tgz", d.path() / "junk"), Error);
  CHECK_THROWS_AS(unpack_tarball(d.path() / "absent.tgz", d.path() / "absent"), Error);
}

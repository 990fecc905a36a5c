#include <algorithm>
#include <random>

#include "doctest.h"
#include "sleuth/digest.hpp"
#include "sleuth/error.hpp"
#include "sleuth/ground_truth.hpp"

using namespace sleuth;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIoError;
}

SourceMapSummary of_sources(std::vector<std::string> sources) {
  return SourceMapSummary{std::move(sources), false};
}

// Encoded independently with Python's base64 module.
constexpr const char* kMapJson =
    R"({"version": 3, "sources": ["webpack://app/./src/i.js", "webpack://app/./node_modules/lodash/index.js"], "sourcesContent": ["x", "y"], "mappings": "AAAA"})";
constexpr const char* kMapBase64 =
    "eyJ2ZXJzaW9uIjogMywgInNvdXJjZXMiOiBbIndlYnBhY2s6Ly9hcHAvLi9zcmMvaS5qcyIsICJ3ZWJwYWNrOi8vYXBwLy4vbm9kZV9tb2R1bGVzL2xvZGFzaC9pbmRleC5qcyJdLCAic291cmNlc0NvbnRlbnQiOiBbIngiLCAieSJdLCAibWFwcGluZ3MiOiAiQUFBQSJ9";

}  // namespace

TEST_CASE("parse_source_map") {
  const auto s = parse_source_map(R"({"version":3,"sources":["webpack://app/./src/i.js"]})");
  CHECK(s.sources == std::vector<std::string>{"webpack://app/./src/i.js"});
  CHECK_FALSE(s.has_inline_content);

  CHECK(code_of([] { parse_source_map(R"({"version":3,"mappings":""})"); }) == ErrorCode::kFormatError);
  CHECK(code_of([] { parse_source_map(R"({"version":2,"sources":[]})"); }) == ErrorCode::kFormatError);
  CHECK(code_of([] { parse_source_map("not json"); }) == ErrorCode::kFormatError);
  CHECK(code_of([] { parse_source_map("[1]"); }) == ErrorCode::kFormatError);

  const auto x = parse_source_map(std::string(")]}'\n") + kMapJson);
  CHECK(x.sources.size() == 2);
  CHECK(x.has_inline_content);
}

TEST_CASE("inline data-URI maps decode to the same summary") {
  const auto direct = parse_source_map(kMapJson);
  const auto inline_map =
      parse_source_map_data_uri(std::string("data:application/json;charset=utf-8;base64,") + kMapBase64);
  CHECK(inline_map.sources == direct.sources);
  CHECK(inline_map.has_inline_content == direct.has_inline_content);
  CHECK(base64_encode(kMapJson) == kMapBase64);

  std::string unpadded = base64_encode(R"({"version":3,"sources":["a"]})");
  while (!unpadded.empty() && unpadded.back() == '=') unpadded.pop_back();
  CHECK(parse_source_map_data_uri("data:application/json;base64," + unpadded).sources ==
        std::vector<std::string>{"a"});
  CHECK(parse_source_map_data_uri("data:application/json,%7B%22version%22%3A3%2C%22sources%22%3A%5B%22b%22%5D%7D")
            .sources == std::vector<std::string>{"b"});

  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> sources;
    std::string json = R"({"version":3,"sources":[)";
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      std::string s = "webpack://x/./node_modules/p" + std::to_string(rng() % 1000) + "/i.js";
      sources.push_back(s);
      json += (i ? ",\"" : "\"") + s + "\"";
    }
    json += "]}";
    CHECK(parse_source_map_data_uri("data:application/json;base64," + base64_encode(json)).sources == sources);
  }

  CHECK(code_of([] { parse_source_map_data_uri("data:application/json;base64,@@@"); }) ==
        ErrorCode::kFormatError);
  CHECK(code_of([] { parse_source_map_data_uri("http://x/map.json"); }) == ErrorCode::kFormatError);
}

TEST_CASE("sourceMappingURL comment") {
  CHECK(source_mapping_url("var a=1;\n//# sourceMappingURL=app.js.map\n") == "app.js.map");
  CHECK(source_mapping_url("//# sourceMappingURL=a.map\nx;\n//@ sourceMappingURL=b.map") == "b.map");
  CHECK(source_mapping_url("/*# sourceMappingURL=c.map */") == "c.map");
  CHECK_FALSE(source_mapping_url("var sourceMappingURL=1;").has_value());
}

TEST_CASE("extract_packages") {
  CHECK(extract_packages(of_sources({"webpack://a/./node_modules/lodash/index.js"})) ==
        std::set<std::string>{"lodash"});
  CHECK(extract_packages(of_sources({"../node_modules/@babel/runtime/helpers/x.js"})) ==
        std::set<std::string>{"@babel/runtime"});
  CHECK(extract_packages(of_sources({"/r/node_modules/a/node_modules/b/i.js"})) ==
        std::set<std::string>{"b"});
  CHECK(extract_packages(of_sources({"node_modules/q/i.js?1234", "src/node_modules_x/y.js",
                                     "src/app.js", "x/my_node_modules/z/i.js"})) ==
        std::set<std::string>{"q"});
  CHECK(extract_packages(of_sources({"/node_modules/.pnpm/axios@1.6.2/node_modules/axios/a.js"})) ==
        std::set<std::string>{"axios"});

  // Hand enumeration: each path nests the listed packages in order, so the
  // innermost one is the expected answer.
  const std::vector<std::string> names{"a", "@s/b", "c-d", "@t/e.f"};
  const std::vector<std::string> prefixes{"", "webpack://app/./", "/abs/", "../../"};
  std::set<std::string> all_expected;
  std::vector<std::string> all_paths;
  for (const auto& prefix : prefixes) {
    for (std::size_t depth = 1; depth <= 3; ++depth) {
      for (std::size_t seed = 0; seed < names.size() * names.size() * names.size(); ++seed) {
        std::string path = prefix;
        std::size_t s = seed;
        std::string innermost;
        for (std::size_t d = 0; d < depth; ++d) {
          innermost = names[s % names.size()];
          s /= names.size();
          path += "node_modules/" + innermost + "/";
        }
        path += "lib/index.js";
        CHECK(extract_packages(of_sources({path})) == std::set<std::string>{innermost});
        all_paths.push_back(path);
        all_expected.insert(innermost);
      }
    }
  }
  const auto once = extract_packages(of_sources(all_paths));
  CHECK(once == all_expected);
  std::reverse(all_paths.begin(), all_paths.end());
  all_paths.insert(all_paths.end(), all_paths.begin(), all_paths.end());
  CHECK(extract_packages(of_sources(all_paths)) == once);
}

TEST_CASE("extract_pnpm_versions") {
  const auto entries = extract_pnpm_versions(of_sources({
      "webpack://a/./node_modules/.pnpm/axios@1.6.2/node_modules/axios/lib/a.js",
      "webpack://a/./node_modules/.pnpm/@vue+shared@3.4.0/node_modules/@vue/shared/i.js",
      "webpack://a/./node_modules/.pnpm/react-dom@18.2.0_react@18.2.0/node_modules/react-dom/i.js",
      "webpack://a/./node_modules/.pnpm/styled@6.1.0(react@18.2.0)/node_modules/styled/i.js",
      "webpack://a/./node_modules/lodash/index.js",
      "webpack://a/./src/app.js",
  }));
  const std::set<GroundTruthEntry> expected{
      {"axios", parse_semver("1.6.2"), Evidence::kPnpmStorePath},
      {"@vue/shared", parse_semver("3.4.0"), Evidence::kPnpmStorePath},
      {"react-dom", parse_semver("18.2.0"), Evidence::kPnpmStorePath},
      {"styled", parse_semver("6.1.0"), Evidence::kPnpmStorePath},
  };
  CHECK(entries == expected);

  std::vector<std::string> warnings;
  const auto odd = extract_pnpm_versions(
      of_sources({"/node_modules/.pnpm/x@github+u+r/node_modules/x/i.js",
                  "/node_modules/.pnpm/y@1.0/node_modules/y/i.js",
                  "/node_modules/.pnpm/z@1.0.0/node_modules/other/i.js"}),
      &warnings);
  CHECK(odd.empty());
  CHECK(warnings.size() == 2);

  const auto all = extract_ground_truth(of_sources({
      "/node_modules/.pnpm/axios@1.6.2/node_modules/axios/lib/a.js",
      "/node_modules/lodash/index.js",
  }));
  REQUIRE(all.size() == 2);
  for (const auto& e : all) CHECK(e.version.has_value() == (e.evidence == Evidence::kPnpmStorePath));
}

TEST_CASE("parse_cdn_url") {
  struct Case {
    std::string url;
    CdnProvider provider;
    std::optional<std::string> package;
    VersionSpecKind kind;
    std::string version;  // fixed version or alias text
  };
  const std::vector<Case> cases{
      {"https://cdn.jsdelivr.net/npm/vue@3.4.0/dist/vue.js", CdnProvider::kJsdelivr, "vue", VersionSpecKind::kFixed, "3.4.0"},
      {"https://cdn.jsdelivr.net/npm/vue@3/dist/vue.js", CdnProvider::kJsdelivr, "vue", VersionSpecKind::kAliased, "3"},
      {"https://cdn.jsdelivr.net/npm/vue@^3.2/dist/vue.js", CdnProvider::kJsdelivr, "vue", VersionSpecKind::kAliased, "^3.2"},
      {"https://cdn.jsdelivr.net/npm/vue/dist/vue.js", CdnProvider::kJsdelivr, "vue", VersionSpecKind::kAliased, ""},
      {"https://cdn.jsdelivr.net/npm/@popperjs/core@2.11.8/dist/umd/popper.min.js", CdnProvider::kJsdelivr, "@popperjs/core", VersionSpecKind::kFixed, "2.11.8"},
      {"https://cdn.jsdelivr.net/npm/%40popperjs/core@latest", CdnProvider::kJsdelivr, "@popperjs/core", VersionSpecKind::kAliased, "latest"},
      {"https://cdn.jsdelivr.net/gh/user/repo@1.0.0/a.js", CdnProvider::kJsdelivr, std::nullopt, VersionSpecKind::kNone, ""},
      {"https://unpkg.com/react@18.2.0/umd/react.production.min.js", CdnProvider::kUnpkg, "react", VersionSpecKind::kFixed, "18.2.0"},
      {"https://unpkg.com/react@18/umd/react.production.min.js", CdnProvider::kUnpkg, "react", VersionSpecKind::kAliased, "18"},
      {"https://unpkg.com/react", CdnProvider::kUnpkg, "react", VersionSpecKind::kAliased, ""},
      {"https://unpkg.com/@babel/standalone@7.23.0-rc.1/babel.min.js?module", CdnProvider::kUnpkg, "@babel/standalone", VersionSpecKind::kFixed, "7.23.0-rc.1"},
      {"https://cdnjs.cloudflare.com/ajax/libs/jquery/3.7.1/jquery.min.js", CdnProvider::kCdnjs, "jquery", VersionSpecKind::kFixed, "3.7.1"},
      {"//cdnjs.cloudflare.com/ajax/libs/gsap/3.12/gsap.min.js", CdnProvider::kCdnjs, "gsap", VersionSpecKind::kAliased, "3.12"},
      {"https://ajax.googleapis.com/ajax/libs/jquery/3.6.0/jquery.min.js", CdnProvider::kGoogle, "jquery", VersionSpecKind::kFixed, "3.6.0"},
      {"https://ajax.googleapis.com/ajax/libs/jqueryui/1.12.1/jquery-ui.min.js", CdnProvider::kGoogle, "jqueryui", VersionSpecKind::kFixed, "1.12.1"},
      {"https://code.jquery.com/jquery-3.7.1.min.js", CdnProvider::kJquery, "jquery", VersionSpecKind::kFixed, "3.7.1"},
      {"https://code.jquery.com/jquery-3.7.1.slim.min.js", CdnProvider::kJquery, "jquery", VersionSpecKind::kFixed, "3.7.1"},
      {"https://code.jquery.com/jquery-migrate-3.4.1.js", CdnProvider::kJquery, "jquery-migrate", VersionSpecKind::kFixed, "3.4.1"},
      {"https://code.jquery.com/jquery-latest.min.js", CdnProvider::kJquery, "jquery", VersionSpecKind::kAliased, "latest"},
      {"https://code.jquery.com/jquery-git.js", CdnProvider::kJquery, "jquery", VersionSpecKind::kAliased, "git"},
      {"https://code.jquery.com/jquery-1.x-git.js", CdnProvider::kJquery, "jquery", VersionSpecKind::kAliased, "1.x-git"},
      {"https://code.jquery.com/ui/1.13.2/jquery-ui.min.js", CdnProvider::kJquery, "jquery-ui", VersionSpecKind::kFixed, "1.13.2"},
      {"https://CODE.jquery.com/jquery.min.js", CdnProvider::kJquery, "jquery", VersionSpecKind::kNone, ""},
      {"https://ajax.aspnetcdn.com/ajax/jQuery/jquery-3.7.0.min.js", CdnProvider::kMicrosoft, "jquery", VersionSpecKind::kFixed, "3.7.0"},
      {"https://ajax.aspnetcdn.com/ajax/jquery.validate/1.19.5/jquery.validate.min.js", CdnProvider::kMicrosoft, "jquery.validate", VersionSpecKind::kFixed, "1.19.5"},
      {"https://example.com/app.js", CdnProvider::kOther, std::nullopt, VersionSpecKind::kNone, ""},
      {"/static/app.js", CdnProvider::kOther, std::nullopt, VersionSpecKind::kNone, ""},
  };
  for (const auto& c : cases) {
    CAPTURE(c.url);
    const auto info = parse_cdn_url(c.url);
    CHECK(info.provider == c.provider);
    CHECK(info.package == c.package);
    CHECK(info.kind == c.kind);
    CHECK(info.fixed.has_value() == (info.kind == VersionSpecKind::kFixed));
    if (c.kind == VersionSpecKind::kFixed) {
      REQUIRE(info.fixed.has_value());
      CHECK(info.fixed->to_string() == c.version);
    } else if (c.kind == VersionSpecKind::kAliased) {
      CHECK(info.alias == c.version);
    }
  }
  CHECK(parse_cdn_url("https://cdn.jsdelivr.net/npm/vue@3.4.0/dist/vue.js").file == "dist/vue.js");
  CHECK(parse_cdn_url("https://code.jquery.com/ui/1.13.2/themes/base/jquery-ui.css").file ==
        "themes/base/jquery-ui.css");
}

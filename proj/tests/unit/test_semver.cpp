#include <random>
#include <sstream>

#include "doctest.h"
#include "sleuth/error.hpp"
#include "sleuth/semver.hpp"
#include "support/run_node.hpp"

using namespace sleuth;

namespace {

const char* kNodeSemver = "/usr/lib/node_modules/npm/node_modules/semver";

std::vector<std::string> version_pool() {
  std::vector<std::string> out = {"0.0.0", "0.0.1", "0.1.0", "0.1.9", "1.0.0-alpha", "1.0.0-alpha.1",
                                  "1.0.0-alpha.beta", "1.0.0-beta", "1.0.0-beta.2", "1.0.0-beta.11",
                                  "1.0.0-rc.1", "1.0.0", "1.2.3-0", "1.2.3", "1.2.4", "1.3.0", "1.9.9",
                                  "2.0.0-0", "2.0.0", "2.1.0-pre", "2.1.0", "3.0.0", "10.0.0"};
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    std::ostringstream v;
    v << rng() % 4 << '.' << rng() % 4 << '.' << rng() % 4;
    if (rng() % 4 == 0) v << "-" << (rng() % 2 ? "beta." : "") << rng() % 3;
    out.push_back(v.str());
  }
  return out;
}

std::vector<std::string> range_pool() {
  return {"*", "", "1.x", "1.2.x", "^1.2.3", "^0.1.2", "^0.0.1", "~1.2.3", "~1.2", "~1", "~>1.2",
          ">=1.0.0 <2.0.0", "1.2.3 - 2.1.0", "1.2 - 2", ">1.2", "<=1.3", "=1.2.3", "1.2.3", "^1.2.3-beta.2",
          "~1.0.0-alpha", ">=1.0.0-alpha <1.0.0", "1 || 3", "^2 || ~1.2 || 0.1.x", "<2.0.0-0", ">=2.1.0-pre",
          "0.x", "^0.x", "^1.x", "~0", ">= 1.2.3", "1.2.3-0 - 1.2.4", "^0.0.x", "x.x.x"};
}

}  // namespace

TEST_CASE("parse and print") {
  const SemVer v = parse_semver("v1.22.333-rc.1+build.5");
  CHECK(v.major == 1);
  CHECK(v.minor == 22);
  CHECK(v.patch == 333);
  CHECK(v.prerelease == std::vector<std::string>{"rc", "1"});
  CHECK(v.build == "build.5");
  CHECK(v.to_string() == "1.22.333-rc.1+build.5");
  CHECK(core_version(v).to_string() == "1.22.333");
  for (const char* bad : {"1.2", "01.2.3", "1.2.3-", "1.2.3-01", "a.b.c", "1.2.3.4", "", "1.2.3+"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_semver(bad), Error);
    CHECK_FALSE(try_parse_semver(bad).has_value());
  }
}

TEST_CASE("precedence follows the spec example chain") {
  const std::vector<std::string> chain = {"1.0.0-alpha", "1.0.0-alpha.1", "1.0.0-alpha.beta", "1.0.0-beta",
                                          "1.0.0-beta.2", "1.0.0-beta.11", "1.0.0-rc.1", "1.0.0"};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    CHECK(parse_semver(chain[i]) < parse_semver(chain[i + 1]));
  }
  CHECK(parse_semver("1.0.0+a") == parse_semver("1.0.0+b"));
}

TEST_CASE("invalid ranges throw") {
  for (std::string bad : {">>1.2.3", "^", "1.2.3 -", "abc", "1.2.3 <", "1.2.3-01", "1.2.x.3"}) {
    CAPTURE(bad);
    try {
      VersionRange::parse(bad);
      FAIL("no exception");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidRange);
    }
  }
}

TEST_CASE("comparison and range satisfaction agree with node-semver") {
  const auto node = testing::node_executable();
  if (!node || !std::filesystem::exists(kNodeSemver)) {
    MESSAGE("node semver not available; skipping");
    return;
  }
  const auto versions = version_pool();
  const auto ranges = range_pool();
  std::string program = "const s=require('" + std::string(kNodeSemver) + "');const V=[";
  for (const auto& v : versions) program += "'" + v + "',";
  program += "];const R=[";
  for (const auto& r : ranges) program += "'" + r + "',";
  program +=
      "];let o=[];for(const a of V)for(const b of V)o.push(s.compare(a,b));"
      "for(const r of R)for(const v of V)o.push(s.satisfies(v,r)?1:0);console.log(o.join(','));";
  std::istringstream in(testing::run_node(*node, program, "semver"));
  std::vector<int> expected;
  for (std::string cell; std::getline(in, cell, ',');) expected.push_back(std::stoi(cell));
  REQUIRE(expected.size() == versions.size() * versions.size() + ranges.size() * versions.size());

  std::size_t at = 0;
  for (const auto& a : versions) {
    for (const auto& b : versions) {
      const auto c = parse_semver(a) <=> parse_semver(b);
      const int got = c < 0 ? -1 : c > 0 ? 1 : 0;
      CAPTURE(a);
      CAPTURE(b);
      CHECK(got == expected[at++]);
    }
  }
  for (const auto& r : ranges) {
    const VersionRange range = VersionRange::parse(r);
    for (const auto& v : versions) {
      CAPTURE(r);
      CAPTURE(v);
      CAPTURE(range.to_string());
      CHECK(static_cast<int>(range.satisfies(parse_semver(v))) == expected[at++]);
    }
  }
}

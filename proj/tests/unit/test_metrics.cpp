#include <algorithm>
#include <random>

#include "doctest.h"
#include "sleuth/error.hpp"
#include "sleuth/metrics.hpp"

using namespace sleuth;
using nlohmann::json;

namespace {

std::vector<SemVer> vs(std::initializer_list<const char*> texts) {
  std::vector<SemVer> out;
  for (const char* t : texts) out.push_back(parse_semver(t));
  return out;
}

Observation obs(std::string domain, std::string package, const char* version, const char* date) {
  return Observation{std::move(domain), std::move(package), parse_semver(version), parse_date(date)};
}

RolloutRow row(std::string domain, std::string package, std::int64_t days) {
  return RolloutRow{std::move(domain), std::move(package), parse_semver("1.0.0"), days};
}

}  // namespace

TEST_CASE("SemVer specification ordering fixture") {
  const auto ordered = vs({"1.0.0-alpha", "1.0.0-alpha.1", "1.0.0-alpha.beta", "1.0.0-beta",
                           "1.0.0-beta.2", "1.0.0-beta.11", "1.0.0-rc.1", "1.0.0", "2.0.0", "2.1.0",
                           "2.1.1"});
  REQUIRE(ordered.size() == 11);
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = 0; j < ordered.size(); ++j) {
      CHECK(((ordered[i] <=> ordered[j]) < 0) == (i < j));
    }
  }
  CHECK(core_version(parse_semver("1.2.3-rc1")) == parse_semver("1.2.3"));
  CHECK(core_version(parse_semver("0.0.1-alpha")) == parse_semver("0.0.1"));
}

TEST_CASE("version_difference and difference_existence") {
  CHECK(version_difference(parse_semver("1.2.3"), vs({"1.2.3"})) == VersionDelta{0, 0, 0});
  CHECK(version_difference(parse_semver("1.2.3"), vs({"1.2.1", "2.0.0"})) == VersionDelta{0, 0, 2});
  CHECK(version_difference(parse_semver("1.4.0"), vs({"1.2.3"})) == VersionDelta{0, 2, 3});
  CHECK(version_difference(parse_semver("1.2.3-rc1"), vs({"1.2.3"})) == VersionDelta{0, 0, 0});
  CHECK(version_difference(parse_semver("0.0.202405101233"), vs({"0.0.202405101200"})) ==
        VersionDelta{0, 0, 33});

  CHECK(difference_existence(parse_semver("1.2.3"), vs({"1.2.3"})) == ExistenceTriple{false, false, false});
  CHECK(difference_existence(parse_semver("1.2.3"), vs({"2.2.3"})) == ExistenceTriple{true, true, true});
  CHECK(difference_existence(parse_semver("1.2.3"), vs({"1.2.9"})) == ExistenceTriple{false, false, true});
  CHECK(difference_existence(parse_semver("1.2.3"), vs({"1.3.3"})) == ExistenceTriple{false, true, true});

  try {
    version_difference(parse_semver("1.0.0"), {});
    FAIL("expected EmptyDetection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyDetection);
  }

  // Enumeration oracle: the lexicographic minimum over explicit deltas.
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto rnd = [&] { return static_cast<std::uint64_t>(rng() % 4); };
    const SemVer correct{rnd(), rnd(), rnd(), {}, {}};
    std::vector<SemVer> detected;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) detected.push_back(SemVer{rnd(), rnd(), rnd(), {}, {}});
    std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> deltas;
    for (const auto& d : detected) {
      auto diff = [](std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; };
      deltas.emplace_back(diff(correct.major, d.major), diff(correct.minor, d.minor),
                          diff(correct.patch, d.patch));
    }
    const auto [ma, mi, pa] = *std::min_element(deltas.begin(), deltas.end());
    const auto got = version_difference(correct, detected);
    CHECK(got == VersionDelta{ma, mi, pa});
    const auto e = difference_existence(correct, detected);
    CHECK((!e.major_err || e.minor_err));
    CHECK((!e.minor_err || e.patch_err));
    CHECK(version_difference(correct, {correct}) == VersionDelta{0, 0, 0});
  }
}

TEST_CASE("summarize_deltas reports mean and median") {
  const auto s = summarize_deltas({{0, 0, 1}, {0, 0, 2}, {0, 1, 100}, {1, 0, 0}});
  CHECK(s.count == 4);
  CHECK(s.patch.mean == doctest::Approx(25.75));
  CHECK(s.patch.median == doctest::Approx(1.5));
  CHECK(s.minor.mean == doctest::Approx(0.25));
  CHECK(s.major_errors == 1);
  CHECK(s.minor_errors == 2);
  CHECK(s.patch_errors == 4);
}

TEST_CASE("dates") {
  CHECK(format_date(parse_date("2024-02-29")) == "2024-02-29");
  CHECK((parse_date("2024-03-01") - parse_date("2024-02-28")).count() == 2);
  CHECK((parse_date("2023-03-01") - parse_date("2023-02-28")).count() == 1);
  CHECK(parse_date("2024-01-05T10:20:00.000Z") == parse_date("2024-01-05"));
  for (const char* bad : {"2023-02-29", "2024-13-01", "24-01-01", "2024/01/01", "2024-01-01x", ""}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_date(bad), Error);
  }
}

TEST_CASE("rollout_times") {
  ReleaseDates releases = parse_release_dates(json::parse(R"({
    "p": {"created": "2020-01-01", "1.0.0": "2023-12-01", "1.0.5": "2024-01-02",
          "1.1.0": "2024-01-08", "1.2.0": "2024-02-01", "1.3.0": "2024-03-10"},
    "q": {"2.0.0": "2024-01-01", "2.1.0": "2024-01-01"}
  })"));

  SUBCASE("arithmetic") {
    const auto r = rollout_times({obs("d", "q", "2.0.0", "2024-01-02"), obs("d", "q", "2.1.0", "2024-01-05")},
                                 releases);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].rollout_days == 4);
  }
  SUBCASE("no change, no rows") {
    const auto r = rollout_times({obs("d", "q", "2.0.0", "2024-01-02"), obs("d", "q", "2.0.0", "2024-02-02"),
                                  obs("d", "q", "2.0.0", "2024-03-02")},
                                 releases);
    CHECK(r.rows.empty());
    CHECK(r.downgrades == 0);
  }
  SUBCASE("synthetic series with a downgrade") {
    // Input is deliberately unsorted.
    const auto r = rollout_times({obs("d", "p", "1.2.0", "2024-02-05"), obs("d", "p", "1.0.0", "2024-01-01"),
                                  obs("d", "p", "1.0.5", "2024-01-20"), obs("d", "p", "1.1.0", "2024-01-10"),
                                  obs("d", "p", "1.1.0", "2024-01-30"), obs("e", "p", "1.1.0", "2024-01-09"),
                                  obs("e", "p", "1.3.0", "2024-03-01")},
                                 releases);
    // d: 1.0.0 -> 1.1.0 (+2), 1.1.0 -> 1.0.5 (downgrade), 1.0.5 -> 1.1.0 (already seen),
    // 1.1.0 -> 1.2.0 (+4). e: 1.1.0 -> 1.3.0 observed before release, clamped.
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].domain == "d");
    CHECK(r.rows[0].version.to_string() == "1.1.0");
    CHECK(r.rows[0].rollout_days == 2);
    CHECK(r.rows[1].version.to_string() == "1.2.0");
    CHECK(r.rows[1].rollout_days == 4);
    CHECK(r.rows[2].domain == "e");
    CHECK(r.rows[2].rollout_days == 0);
    CHECK(r.downgrades == 1);
    CHECK(r.warnings.size() == 1);
  }
  SUBCASE("missing release date is skipped with a warning") {
    const auto r = rollout_times({obs("d", "q", "2.0.0", "2024-01-02"), obs("d", "q", "2.2.0", "2024-01-05"),
                                  obs("d", "z", "1.0.0", "2024-01-02"), obs("d", "z", "1.0.1", "2024-01-05")},
                                 releases);
    CHECK(r.rows.empty());
    CHECK(r.warnings.size() == 2);
  }
}

TEST_CASE("rollout_fractions") {
  CHECK(rollout_fractions({}).size() == 3);
  for (const auto& f : rollout_fractions({})) {
    CHECK(f.packages == 0);
    CHECK(f.instances == 0);
    CHECK(f.domains == 0);
  }
  for (const auto& f : rollout_fractions({row("d", "p", 5)})) {
    CHECK(f.packages == 1.0);
    CHECK(f.instances == 1.0);
    CHECK(f.domains == 1.0);
  }

  // Spreadsheet oracle (per-entity minimum rollout, then COUNTIF(<=H)/COUNT):
  //   packages  a=3 b=5 c=27 d=113           -> 2/4, 3/4, 3/4
  //   instances 3,10,30,200,5,100,8,113,27   -> 2/9, 5/9, 7/9
  //   domains   d1=3 d2=30 d3=5 d4=8 d5=27   -> 2/5, 4/5, 5/5
  const std::vector<RolloutRow> rows{row("d1", "a", 3),  row("d1", "b", 10), row("d2", "a", 30),
                                     row("d2", "c", 200), row("d3", "b", 5),  row("d3", "b", 40),
                                     row("d4", "c", 100), row("d4", "a", 8),  row("d5", "d", 113),
                                     row("d5", "c", 27)};
  const auto f = rollout_fractions(rows);
  REQUIRE(f.size() == 3);
  CHECK(f[0].horizon_days == 7);
  CHECK(f[0].packages == doctest::Approx(0.5));
  CHECK(f[1].packages == doctest::Approx(0.75));
  CHECK(f[2].packages == doctest::Approx(0.75));
  CHECK(f[0].instances == doctest::Approx(2.0 / 9));
  CHECK(f[1].instances == doctest::Approx(5.0 / 9));
  CHECK(f[2].instances == doctest::Approx(7.0 / 9));
  CHECK(f[0].domains == doctest::Approx(0.4));
  CHECK(f[1].domains == doctest::Approx(0.8));
  CHECK(f[2].domains == doctest::Approx(1.0));

  RolloutUniverse universe;
  universe.packages = {"a", "b", "c", "d", "e"};
  universe.domains = {"d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9", "d10"};
  for (const auto& r : rows) universe.instances.insert({r.domain, r.package});
  universe.instances.insert({"d6", "e"});
  const auto g = rollout_fractions(rows, {7}, &universe);
  CHECK(g[0].packages == doctest::Approx(0.4));
  CHECK(g[0].instances == doctest::Approx(0.2));
  CHECK(g[0].domains == doctest::Approx(0.2));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RolloutRow> random_rows;
    for (int i = 0; i < 30; ++i) {
      random_rows.push_back(row("d" + std::to_string(rng() % 6), "p" + std::to_string(rng() % 5),
                                static_cast<std::int64_t>(rng() % 200)));
    }
    const auto h = rollout_fractions(random_rows, {1, 7, 28, 112, 365});
    for (std::size_t i = 1; i < h.size(); ++i) {
      CHECK(h[i].packages >= h[i - 1].packages);
      CHECK(h[i].instances >= h[i - 1].instances);
      CHECK(h[i].domains >= h[i - 1].domains);
    }
  }
}

TEST_CASE("observations and advisories parsing") {
  const auto o = parse_observations(
      "{\"domain\":\"a.com\",\"package\":\"p\",\"version\":\"1.0.0\",\"observed_at\":\"2024-01-02\"}\n\n"
      "{\"domain\":\"b.com\",\"package\":\"q\",\"version\":\"2.0.0\",\"observed_at\":\"2024-01-03T00:00:00Z\"}\n");
  REQUIRE(o.size() == 2);
  CHECK(o[1].domain == "b.com");
  CHECK_THROWS_AS(parse_observations("{\"domain\":\"a\"}"), Error);
  CHECK_THROWS_AS(parse_observations("nope"), Error);

  try {
    parse_advisories(json::parse(R"([{"id":"x","package":"p","range":">>1"}])"));
    FAIL("expected InvalidRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidRange);
  }
  CHECK(parse_advisories(json::parse("{}")).empty());
  CHECK(parse_advisories(json::parse("[]")).empty());
  CHECK_THROWS_AS(parse_advisories(json::parse(R"([{"id":"x"}])")), Error);
}

TEST_CASE("audit") {
  const auto advisories = parse_advisories(json::parse(R"([
    {"id":"A-1","package":"p","range":"<1.0.1","severity":"high"},
    {"id":"A-2","package":"q","range":">=2.0.0 <2.3.5","severity":"medium"},
    {"id":"A-3","package":"q","range":"1.x || >=3.0.0-0","severity":"low"}
  ])"));

  SUBCASE("basic") {
    const auto r = audit({{"d", "p", vs({"1.0.0"}), false}}, advisories);
    CHECK(r.vulnerable_per_domain.at("d") == 1);
    CHECK(r.mean_vulnerable_per_domain == 1.0);
    CHECK(r.packages.at("p").advisories == std::set<std::string>{"A-1"});
  }
  SUBCASE("empty advisory file") {
    const auto r = audit({{"d", "p", vs({"1.0.0"}), false}, {"e", "q", vs({"2.0.0"}), false}}, {});
    CHECK(r.mean_vulnerable_per_domain == 0);
    for (const auto& [n, c] : r.vulnerable_per_domain) CHECK(c == 0);
    for (const auto& [n, t] : r.packages) CHECK(t.vulnerable == 0);
  }
  SUBCASE("any, all, under, over") {
    const std::vector<AuditDetection> d{{"d", "q", vs({"2.3.5", "2.3.4"}), false}};
    CHECK(audit(d, advisories, AuditMode::kAny).packages.at("q").vulnerable == 1);
    CHECK(audit(d, advisories, AuditMode::kAll).packages.at("q").vulnerable == 0);
    CHECK(audit(d, advisories, AuditMode::kUnder).packages.at("q").vulnerable == 1);
    CHECK(audit(d, advisories, AuditMode::kOver).packages.at("q").vulnerable == 0);
  }
  SUBCASE("wide ranges are discarded") {
    const std::vector<AuditDetection> d{{"d", "p", vs({"1.0.0", "0.9.0", "0.8.0", "0.7.0"}), false},
                                        {"e", "p", vs({"1.0.0"}), true},
                                        {"f", "p", vs({"1.0.0", "0.9.0", "0.8.0"}), false}};
    const auto r = audit(d, advisories);
    CHECK(r.discarded == 2);
    CHECK(r.domains == 3);
    CHECK(r.packages.at("p").instances == 1);
    CHECK(r.mean_vulnerable_per_domain == doctest::Approx(1.0 / 3));
    CHECK(audit(d, advisories, AuditMode::kAny, AuditOptions{0}).discarded == 1);
  }
  SUBCASE("per-domain mean counts distinct packages") {
    const std::vector<AuditDetection> d{{"d", "p", vs({"1.0.0"}), false},
                                        {"d", "p", vs({"1.0.0"}), false},
                                        {"d", "q", vs({"1.5.0"}), false},
                                        {"e", "q", vs({"2.4.0"}), false}};
    const auto r = audit(d, advisories);
    CHECK(r.vulnerable_per_domain.at("d") == 2);
    CHECK(r.vulnerable_per_domain.at("e") == 0);
    CHECK(r.mean_vulnerable_per_domain == doctest::Approx(1.0));
    CHECK(r.packages.at("q").instances == 2);
  }
  SUBCASE("permutation invariance") {
    std::mt19937 rng(9);
    std::vector<AuditDetection> d;
    for (int i = 0; i < 60; ++i) {
      std::vector<SemVer> versions;
      for (int k = 0; k < 1 + static_cast<int>(rng() % 3); ++k) {
        versions.push_back(SemVer{rng() % 4, rng() % 5, rng() % 6, {}, {}});
      }
      d.push_back({"d" + std::to_string(rng() % 10), rng() % 2 ? "p" : "q", versions, false});
    }
    auto shuffled = advisories;
    for (int trial = 0; trial < 20; ++trial) {
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (auto mode : {AuditMode::kAny, AuditMode::kAll, AuditMode::kUnder, AuditMode::kOver}) {
        CHECK(audit(d, shuffled, mode) == audit(d, advisories, mode));
      }
    }
  }
}

TEST_CASE("csv_field") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

#include <algorithm>

#include "doctest.h"
#include "sleuth/error.hpp"
#include "sleuth/js/parser.hpp"
#include "sleuth/js/printer.hpp"
#include "sleuth/version_detector.hpp"
#include "support/lab.hpp"

using namespace sleuth;
using testing::Lab;
using testing::TempDir;

namespace {

struct LabIndex {
  TempDir dir;
  Lab lab{dir, 10, 3};
  PackageIndex index;

  LabIndex() {
    for (std::size_t p = 0; p < lab.packages().size(); ++p) {
      for (std::size_t v = 0; v < 3; ++v) {
        index.index_add(lab.artifact(p, v), lab.packages()[p].name, lab.packages()[p].versions[v]);
      }
    }
  }
};

LabIndex& shared_lab() {
  static LabIndex lab;
  return lab;
}

PackageVersionRecord synthetic_record(const std::string& name, const std::string& version,
                                      std::vector<std::uint64_t> hashes) {
  PackageVersionRecord r;
  r.name = name;
  r.version = version;
  r.fingerprints = FingerprintSet::from_hashes(FingerprintParams{}, std::move(hashes));
  return r;
}

std::vector<std::uint64_t> range_of(std::uint64_t begin, std::uint64_t end) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t h = begin; h < end; ++h) out.push_back(h * 0x9E3779B97F4A7C15ULL);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

/// Webpack-5-shaped bundle whose module map holds the CommonJS form of each
/// given package release.
std::string webpack_style(const Lab& lab, const std::vector<std::pair<std::size_t, std::size_t>>& picks,
                          const std::string& extra_module) {
  std::string modules;
  int id = 100;
  for (const auto& [p, v] : picks) {
    for (const auto& f : lab.packages()[p].sources[v]) {
      js::ParsedDocument doc = js::parse_any(f.source);
      rewrite_esm_to_cjs(doc.ast);
      std::string body = js::print(doc.ast.root);
      modules += std::to_string(id++) + ":(module,exports,require)=>{" + body + "},";
    }
  }
  modules += std::to_string(id) + ":(module,exports,require)=>{" + extra_module + "}";
  return testing::rename_all_identifiers(
      "(()=>{var e={" + modules + "},t={};"
      "function n(r){var o=t[r];if(void 0!==o)return o.exports;var i=t[r]={exports:{}};"
      "return e[r](i,i.exports,n),i.exports}n(100)})();");
}

}  // namespace

TEST_CASE("ranking and retention arithmetic") {
  PackageIndex index;
  index.add(synthetic_record("p", "1.0.0", range_of(0, 90)));
  index.add(synthetic_record("p", "1.1.0", range_of(10, 98)));
  index.add(synthetic_record("p", "2.0.0", range_of(60, 100)));
  index.add(synthetic_record("q", "1.0.0", range_of(500, 600)));
  const auto bundle = FingerprintSet::from_hashes(index.params(), range_of(0, 100));
  const auto ranking = rank_versions("p", bundle, index);
  REQUIRE(ranking.size() == 3);
  CHECK(ranking[0].version == "1.0.0");
  CHECK(ranking[0].similarity == doctest::Approx(0.90));
  CHECK(ranking[1].similarity == doctest::Approx(0.88));
  CHECK(ranking[2].similarity == doctest::Approx(0.40));
  auto kept = retained_versions(ranking, 0.9);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].version == "1.1.0");
  CHECK(kept[1].version == "1.0.0");
  CHECK(retained_versions(ranking, 1.0).size() == 1);

  const auto zero = rank_versions("q", bundle, index);
  CHECK(zero[0].similarity == 0.0);
  CHECK(retained_versions(zero, 0.9).empty());
  CHECK_THROWS_AS(rank_versions("absent", bundle, index), Error);

  PackageIndex tie;
  tie.add(synthetic_record("t", "1.2.9", range_of(0, 50)));
  tie.add(synthetic_record("t", "1.2.10", range_of(0, 50)));
  const auto tied = retained_versions(rank_versions("t", bundle, tie), 1.0);
  REQUIRE(tied.size() == 2);
  CHECK(tied[0].version == "1.2.10");
  CHECK(tied[1].version == "1.2.9");
}

TEST_CASE("config validation and digests") {
  DetectionConfig c;
  CHECK_NOTHROW(c.validate());
  c.relative_threshold = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.relative_threshold = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  DetectionConfig a;
  DetectionConfig b;
  b.use_compartments = true;
  CHECK(a.digest_hex() != b.digest_hex());
  CHECK(DetectionConfig::from_json(b.to_json()).canonical() == b.canonical());
}

TEST_CASE("every indexed release detects itself exactly") {
  auto& L = shared_lab();
  for (std::size_t p = 0; p < L.lab.packages().size(); ++p) {
    for (std::size_t v = 0; v < 3; ++v) {
      const auto& pkg = L.lab.packages()[p];
      const std::string src = pseudo_bundle(pkg.sources[v]).source;
      const DetectionReport r = detect(src, L.index);
      const PackageDetection* d = r.find(pkg.name);
      REQUIRE(d != nullptr);
      CHECK(d->versions == std::vector<std::string>{pkg.versions[v]});
      CHECK(d->similarity == 1.0);
    }
  }
}

TEST_CASE("closed loop over mangled lab bundles") {
  auto& L = shared_lab();
  std::size_t correct = 0;
  std::size_t total = 0;
  for (std::size_t p = 0; p < L.lab.packages().size(); ++p) {
    for (std::size_t v = 0; v < 3; ++v) {
      const auto& pkg = L.lab.packages()[p];
      for (const std::string& src : {L.lab.pseudo_bundled(p, v), L.lab.concatenated(p, v)}) {
        const DetectionReport r = detect(src, L.index);
        const PackageDetection* d = r.find(pkg.name);
        ++total;
        if (d != nullptr && d->versions == std::vector<std::string>{pkg.versions[v]}) ++correct;
      }
    }
  }
  MESSAGE("exact patch-level detections: " << correct << "/" << total);
  CHECK(correct * 10 >= total * 9);
}

TEST_CASE("presence gate and filters") {
  auto& L = shared_lab();
  const std::string src = L.lab.pseudo_bundled(0, 1);
  const std::vector<std::string> other{L.lab.packages()[1].name};
  CHECK(detect(src, L.index, {}, &other).detections.empty());
  const std::vector<std::string> none;
  CHECK(detect(src, L.index, {}, &none).detections.empty());
  DetectionConfig strict;
  strict.min_shared = 1'000'000;
  CHECK(detect(src, L.index, strict).detections.empty());
  const DetectionReport r = detect(src, L.index);
  CHECK(r.find(L.lab.packages()[0].name) != nullptr);
  CHECK(r.find(L.lab.packages()[5].name) == nullptr);
}

TEST_CASE("doubling the bundle leaves retained sets unchanged") {
  auto& L = shared_lab();
  for (std::size_t p = 0; p < 4; ++p) {
    const std::string src = L.lab.concatenated(p, 2);
    const auto once = detect(src, L.index);
    const auto twice = detect(src + "\n" + src, L.index);
    REQUIRE(once.detections.size() == twice.detections.size());
    for (std::size_t i = 0; i < once.detections.size(); ++i) {
      CHECK(once.detections[i].versions == twice.detections[i].versions);
    }
  }
}

TEST_CASE("adding a release of one package does not disturb the others") {
  TempDir dir;
  Lab lab(dir, 3, 3, 77);
  PackageIndex index;
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t v = 0; v < 3; ++v) index.index_add(lab.artifact(p, v), lab.packages()[p].name, lab.packages()[p].versions[v]);
  }
  const std::string src = lab.concatenated(0, 1) + lab.concatenated(1, 2) + lab.concatenated(2, 0);
  const auto before = detect(src, index);
  index.index_add(lab.artifact(2, 0), lab.packages()[2].name, lab.packages()[2].versions[0]);
  const auto after = detect(src, index);
  for (const auto& d : before.detections) {
    const PackageDetection* a = after.find(d.package);
    REQUIRE(a != nullptr);
    CHECK(a->versions == d.versions);
    CHECK(a->similarity == d.similarity);
  }
  CHECK(after.find(lab.packages()[2].name) != nullptr);
}

TEST_CASE("first-party dilution") {
  auto& L = shared_lab();
  std::size_t kept = 0;
  std::size_t total = 0;
  for (std::size_t p = 0; p < L.lab.packages().size(); ++p) {
    for (std::size_t v = 0; v < 3; ++v) {
      const auto& pkg = L.lab.packages()[p];
      const std::string src = L.lab.pseudo_bundled(p, v);
      const std::size_t nodes = analyze_bundle(src).tokens.size();
      // Grow unrelated code until it holds twice the package's tokens.
      std::size_t statements = 40;
      std::string extra;
      while (true) {
        extra = Lab::first_party(p * 10 + v, statements);
        if (analyze_bundle(extra).tokens.size() >= 2 * nodes) break;
        statements += statements / 2;
      }
      const DetectionReport r = detect(testing::rename_all_identifiers(extra) + src, L.index);
      const PackageDetection* d = r.find(pkg.name);
      ++total;
      if (d != nullptr && contains(d->versions, pkg.versions[v])) ++kept;
    }
  }
  MESSAGE("true version retained after dilution: " << kept << "/" << total);
  CHECK(kept * 10 >= total * 9);
}

TEST_CASE("compartment mode scores against the modules that match") {
  auto& L = shared_lab();
  const std::string noise = Lab::first_party(99, 200);
  for (std::size_t p = 0; p + 1 < 6; p += 2) {
    const std::string src = webpack_style(L.lab, {{p, 1}, {p + 1, 2}}, noise);
    DetectionConfig whole_cfg;
    DetectionConfig comp_cfg;
    comp_cfg.use_compartments = true;
    const auto whole = detect(src, L.index, whole_cfg);
    const auto comp = detect(src, L.index, comp_cfg);
    CHECK(comp.bundler == std::set<std::string>{"webpack"});
    for (const auto& [q, v] : std::vector<std::pair<std::size_t, std::size_t>>{{p, 1}, {p + 1, 2}}) {
      const auto& name = L.lab.packages()[q].name;
      const PackageDetection* w = whole.find(name);
      const PackageDetection* c = comp.find(name);
      REQUIRE(w != nullptr);
      REQUIRE(c != nullptr);
      CHECK(contains(c->versions, L.lab.packages()[q].versions[v]));
      REQUIRE(c->compartment_keys.has_value());
      CHECK(c->compartment_keys->size() >= 1);
      CHECK(c->similarity > w->similarity);
      CHECK_FALSE(w->compartment_keys.has_value());
    }
  }
}

TEST_CASE("report JSON round trip") {
  auto& L = shared_lab();
  DetectionConfig cfg;
  cfg.relative_threshold = 0.5;
  cfg.max_range_width = 1;
  const auto r = detect(L.lab.concatenated(3, 1), L.index, cfg, nullptr, "bundle-3");
  const auto back = DetectionReport::from_json(r.to_json());
  CHECK(back.to_json() == r.to_json());
  CHECK(back.bundle_id == "bundle-3");
  CHECK(r.index_digest == to_hex(L.index.content_digest()));
  bool any_wide = false;
  for (const auto& d : r.detections) any_wide = any_wide || d.too_wide == (d.versions.size() > 1);
  CHECK(any_wide);
  CHECK_THROWS_AS(DetectionReport::from_json(nlohmann::json::object()), Error);
}

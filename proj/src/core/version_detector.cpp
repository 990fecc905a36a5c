#include "sleuth/version_detector.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "sleuth/digest.hpp"
#include "sleuth/error.hpp"

using nlohmann::json;

namespace sleuth {

namespace {

/// Descending SemVer; non-SemVer strings after, descending text.
bool version_desc(const std::string& a, const std::string& b) {
  const auto va = try_parse_semver(a);
  const auto vb = try_parse_semver(b);
  if (va && vb) {
    const auto c = *va <=> *vb;
    if (c != 0) return c > 0;
    return a > b;
  }
  if (va.has_value() != vb.has_value()) return va.has_value();
  return a > b;
}

}  // namespace

void DetectionConfig::validate() const {
  if (!(relative_threshold > 0.0 && relative_threshold <= 1.0)) {
    throw Error(ErrorCode::kConfigMismatch, "relative_threshold must lie in (0, 1]");
  }
  if (max_range_width && *max_range_width == 0) {
    throw Error(ErrorCode::kConfigMismatch, "max_range_width must be positive");
  }
}

std::string DetectionConfig::canonical() const {
  std::ostringstream s;
  s.precision(17);
  s << "compartments=" << (use_compartments ? 1 : 0) << ";threshold=" << relative_threshold
    << ";min_shared=" << min_shared << ";max_range_width=";
  if (max_range_width) s << *max_range_width;
  return s.str();
}

std::string DetectionConfig::digest_hex() const { return to_hex(digest_of(canonical())); }

json DetectionConfig::to_json() const {
  json j = {{"use_compartments", use_compartments},
            {"relative_threshold", relative_threshold},
            {"min_shared", min_shared},
            {"max_range_width", nullptr}};
  if (max_range_width) j["max_range_width"] = *max_range_width;
  return j;
}

DetectionConfig DetectionConfig::from_json(const json& doc) {
  DetectionConfig c;
  try {
    c.use_compartments = doc.value("use_compartments", c.use_compartments);
    c.relative_threshold = doc.value("relative_threshold", c.relative_threshold);
    c.min_shared = doc.value("min_shared", c.min_shared);
    if (doc.contains("max_range_width") && !doc["max_range_width"].is_null()) {
      c.max_range_width = doc["max_range_width"].get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad detection config: ") + e.what());
  }
  c.validate();
  return c;
}

const PackageDetection* DetectionReport::find(std::string_view package) const {
  for (const auto& d : detections) {
    if (d.package == package) return &d;
  }
  return nullptr;
}

json DetectionReport::to_json() const {
  json dets = json::array();
  for (const auto& d : detections) {
    json ranking = json::array();
    for (const auto& r : d.ranking) {
      ranking.push_back({{"version", r.version}, {"similarity", r.similarity}, {"shared", r.shared}});
    }
    json j = {{"package", d.package},
              {"versions", d.versions},
              {"similarity", d.similarity},
              {"shared", d.shared},
              {"too_wide", d.too_wide},
              {"ranking", std::move(ranking)}};
    if (d.compartment_keys) j["compartment_keys"] = *d.compartment_keys;
    dets.push_back(std::move(j));
  }
  return {{"schema", kReportSchema},
          {"bundle_id", bundle_id},
          {"bundler", std::vector<std::string>(bundler.begin(), bundler.end())},
          {"detections", std::move(dets)},
          {"config_digest", config_digest},
          {"index_digest", index_digest},
          {"warnings", warnings}};
}

DetectionReport DetectionReport::from_json(const json& doc) {
  DetectionReport r;
  try {
    r.bundle_id = doc.value("bundle_id", "");
    for (const auto& b : doc.at("bundler")) r.bundler.insert(b.get<std::string>());
    for (const auto& j : doc.at("detections")) {
      PackageDetection d;
      d.package = j.at("package").get<std::string>();
      d.versions = j.at("versions").get<std::vector<std::string>>();
      d.similarity = j.at("similarity").get<double>();
      d.shared = j.at("shared").get<std::size_t>();
      d.too_wide = j.value("too_wide", false);
      if (j.contains("compartment_keys")) d.compartment_keys = j["compartment_keys"].get<std::vector<std::string>>();
      if (j.contains("ranking")) {
        for (const auto& s : j["ranking"]) {
          d.ranking.push_back({s.at("version").get<std::string>(), s.at("similarity").get<double>(),
                               s.at("shared").get<std::size_t>()});
        }
      }
      r.detections.push_back(std::move(d));
    }
    r.config_digest = doc.value("config_digest", "");
    r.index_digest = doc.value("index_digest", "");
    if (doc.contains("warnings")) r.warnings = doc["warnings"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("malformed detection report: ") + e.what());
  }
  return r;
}

std::vector<VersionScore> rank_versions(const std::string& package, const FingerprintSet& bundle,
                                        const PackageIndex& index) {
  const auto ids = index.records_of(package);
  if (ids.empty()) throw Error(ErrorCode::kUnknownPackage, "package '" + package + "' is not indexed");
  std::vector<VersionScore> out;
  for (std::uint32_t id : ids) {
    const auto& rec = index.records()[id];
    const std::size_t shared = shared_count(rec.fingerprints, bundle);
    out.push_back({rec.version, containment_similarity(rec.fingerprints, bundle), shared});
  }
  std::sort(out.begin(), out.end(), [](const VersionScore& a, const VersionScore& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return version_desc(a.version, b.version);
  });
  return out;
}

std::vector<VersionScore> retained_versions(const std::vector<VersionScore>& ranking, double relative_threshold) {
  std::vector<VersionScore> out;
  if (ranking.empty() || ranking.front().similarity <= 0.0) return out;
  const double floor = relative_threshold * ranking.front().similarity;
  for (const auto& s : ranking) {
    if (s.similarity >= floor) out.push_back(s);
  }
  std::sort(out.begin(), out.end(),
            [](const VersionScore& a, const VersionScore& b) { return version_desc(a.version, b.version); });
  return out;
}

VersionDetector::VersionDetector(const PackageIndex& index, DetectionConfig config,
                                 const std::vector<BundlerFingerprint>& fingerprints)
    : index_(index), config_(std::move(config)), matcher_(fingerprints), index_digest_(to_hex(index.content_digest())) {
  config_.validate();
}

DetectionReport VersionDetector::detect(std::string_view source, const std::vector<std::string>* filter,
                                        std::string bundle_id) const {
  const BundleAnalysis analysis =
      analyze_bundle(source, index_.params(), index_.normalization(), index_.vocabulary(), &matcher_);
  return detect(analysis, filter, std::move(bundle_id));
}

DetectionReport VersionDetector::detect(const BundleAnalysis& analysis, const std::vector<std::string>* filter,
                                        std::string bundle_id) const {
  DetectionReport report;
  report.bundle_id = std::move(bundle_id);
  report.bundler = analysis.bundlers;
  report.config_digest = config_.digest_hex();
  report.index_digest = index_digest_;
  report.warnings = analysis.warnings;

  const std::set<std::string> wanted = filter ? std::set<std::string>(filter->begin(), filter->end())
                                              : std::set<std::string>{};
  std::vector<std::string> packages;
  for (const auto& c : index_.query_candidates(analysis.fingerprints, config_.min_shared)) {
    const std::string& name = index_.records()[c.record].name;
    if (filter && !wanted.count(name)) continue;
    if (std::find(packages.begin(), packages.end(), name) == packages.end()) packages.push_back(name);
  }
  std::sort(packages.begin(), packages.end());

  const bool by_compartment = config_.use_compartments && !analysis.compartments.empty();
  for (const std::string& name : packages) {
    PackageDetection d;
    d.package = name;
    FingerprintSet document;
    const FingerprintSet* scored = &analysis.fingerprints;
    if (by_compartment) {
      // Merged sub-document of compartments touching any version.
      std::vector<std::uint64_t> package_hashes;
      for (std::uint32_t id : index_.records_of(name)) {
        const auto& h = index_.records()[id].fingerprints.distinct_hashes();
        package_hashes.insert(package_hashes.end(), h.begin(), h.end());
      }
      std::sort(package_hashes.begin(), package_hashes.end());
      package_hashes.erase(std::unique(package_hashes.begin(), package_hashes.end()), package_hashes.end());
      std::vector<const FingerprintSet*> parts;
      std::vector<std::string> keys;
      for (const auto& c : analysis.compartments) {
        if (intersection_size(c.fingerprints.distinct_hashes(), package_hashes) > 0) {
          parts.push_back(&c.fingerprints);
          keys.push_back(c.key);
        }
      }
      document = parts.empty() ? FingerprintSet::from_hashes(index_.params(), {}) : FingerprintSet::merge(parts);
      scored = &document;
      d.compartment_keys = std::move(keys);
    }
    d.ranking = rank_versions(name, *scored, index_);
    const auto retained = retained_versions(d.ranking, config_.relative_threshold);
    if (retained.empty()) continue;
    if (d.ranking.front().shared < config_.min_shared) continue;
    for (const auto& r : retained) d.versions.push_back(r.version);
    d.similarity = d.ranking.front().similarity;
    d.shared = 0;
    for (const auto& r : retained) d.shared = std::max(d.shared, r.shared);
    d.too_wide = config_.max_range_width && d.versions.size() > *config_.max_range_width;
    report.detections.push_back(std::move(d));
  }
  return report;
}

DetectionReport detect(std::string_view source, const PackageIndex& index, const DetectionConfig& config,
                       const std::vector<std::string>* package_filter, std::string bundle_id) {
  return VersionDetector(index, config).detect(source, package_filter, std::move(bundle_id));
}

}  // namespace sleuth

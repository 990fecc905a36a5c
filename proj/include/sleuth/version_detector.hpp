#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sleuth/bundle_analyzer.hpp"
#include "sleuth/package_index.hpp"

namespace sleuth {

struct DetectionConfig {
  bool use_compartments = false;
  double relative_threshold = 1.0;
  std::size_t min_shared = kDefaultMinShared;
  /// Detections whose version set is wider are flagged `too_wide`.
  std::optional<std::size_t> max_range_width;

  /// Throws ConfigMismatch.
  void validate() const;
  std::string canonical() const;
  std::string digest_hex() const;
  nlohmann::json to_json() const;
  static DetectionConfig from_json(const nlohmann::json& doc);
};

struct VersionScore {
  std::string version;
  double similarity = 0.0;
  std::size_t shared = 0;
};

struct PackageDetection {
  std::string package;
  /// Retained versions, descending.
  std::vector<std::string> versions;
  double similarity = 0.0;
  std::size_t shared = 0;
  std::optional<std::vector<std::string>> compartment_keys;
  bool too_wide = false;
  /// Every indexed version of the package, best first.
  std::vector<VersionScore> ranking;
};

inline constexpr const char* kReportSchema = "bundlesleuth-report/1";

struct DetectionReport {
  std::string bundle_id;
  std::set<std::string> bundler;
  std::vector<PackageDetection> detections;
  std::string config_digest;
  std::string index_digest;
  std::vector<std::string> warnings;

  const PackageDetection* find(std::string_view package) const;
  nlohmann::json to_json() const;
  /// Throws FormatError.
  static DetectionReport from_json(const nlohmann::json& doc);
};

/// Versions of `package` by containment similarity against `bundle`,
/// descending, ties by descending version. Throws UnknownPackage.
std::vector<VersionScore> rank_versions(const std::string& package, const FingerprintSet& bundle,
                                        const PackageIndex& index);
/// Head of a ranking: scores at or above threshold * best. Empty when the
/// best similarity is 0.
std::vector<VersionScore> retained_versions(const std::vector<VersionScore>& ranking, double relative_threshold);

/// Read-only detection against one loaded index; safe to share across
/// threads.
class VersionDetector {
 public:
  /// Throws ConfigMismatch.
  VersionDetector(const PackageIndex& index, DetectionConfig config,
                  const std::vector<BundlerFingerprint>& fingerprints = default_fingerprints());

  const DetectionConfig& config() const { return config_; }
  const PackageIndex& index() const { return index_; }

  /// Throws EmptyInput, ParseError.
  DetectionReport detect(std::string_view bundle_source, const std::vector<std::string>* package_filter = nullptr,
                         std::string bundle_id = {}) const;
  DetectionReport detect(const BundleAnalysis& analysis, const std::vector<std::string>* package_filter = nullptr,
                         std::string bundle_id = {}) const;

 private:
  const PackageIndex& index_;
  DetectionConfig config_;
  BundlerMatcher matcher_;
  std::string index_digest_;
};

DetectionReport detect(std::string_view bundle_source, const PackageIndex& index, const DetectionConfig& config = {},
                       const std::vector<std::string>* package_filter = nullptr, std::string bundle_id = {});

}  // namespace sleuth

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sleuth/semver.hpp"

namespace sleuth {

struct VersionDelta {
  std::uint64_t d_major = 0;
  std::uint64_t d_minor = 0;
  std::uint64_t d_patch = 0;

  auto operator<=>(const VersionDelta&) const = default;
};

struct ExistenceTriple {
  bool major_err = false;
  bool minor_err = false;
  bool patch_err = false;

  bool operator==(const ExistenceTriple&) const = default;
};

/// Lexicographically smallest componentwise |core(correct) - core(d)| over
/// the candidates. Throws EmptyDetection.
VersionDelta version_difference(const SemVer& correct, const std::vector<SemVer>& detected);
ExistenceTriple difference_existence(const SemVer& correct, const std::vector<SemVer>& detected);
ExistenceTriple existence_of(const VersionDelta& delta);

struct ComponentStats {
  double mean = 0;
  double median = 0;
};

struct DeltaStats {
  std::size_t count = 0;
  ComponentStats major, minor, patch;
  std::size_t major_errors = 0;
  std::size_t minor_errors = 0;
  std::size_t patch_errors = 0;
};

DeltaStats summarize_deltas(const std::vector<VersionDelta>& deltas);

using Date = std::chrono::sys_days;

/// "YYYY-MM-DD", optionally followed by a "T..." time part that is ignored.
/// Throws FormatError.
Date parse_date(std::string_view text);
std::string format_date(Date d);

struct Observation {
  std::string domain;
  std::string package;
  SemVer version;
  Date observed_at;
};

/// One JSON object per line: {domain, package, version, observed_at}.
/// Blank lines are skipped. Throws FormatError with the line number.
std::vector<Observation> parse_observations(std::string_view ndjson);

/// package -> canonical version string -> release date.
using ReleaseDates = std::map<std::string, std::map<std::string, Date>>;
/// {"<package>": {"<version>": "<date>", ...}, ...}. Throws FormatError.
ReleaseDates parse_release_dates(const nlohmann::json& doc);

struct RolloutRow {
  std::string domain;
  std::string package;
  SemVer version;
  std::int64_t rollout_days = 0;
};

struct RolloutResult {
  std::vector<RolloutRow> rows;
  std::size_t downgrades = 0;
  std::vector<std::string> warnings;
};

RolloutResult rollout_times(const std::vector<Observation>& observations,
                            const ReleaseDates& releases);

inline const std::vector<std::int64_t> kDefaultHorizons{7, 28, 112};

/// Denominators for rollout_fractions. When absent, the entities that occur
/// in the rows are used.
struct RolloutUniverse {
  std::set<std::string> packages;
  std::set<std::pair<std::string, std::string>> instances;  // (domain, package)
  std::set<std::string> domains;

  static RolloutUniverse of(const std::vector<Observation>& observations);
};

struct HorizonFractions {
  std::int64_t horizon_days = 0;
  double packages = 0;
  double instances = 0;
  double domains = 0;
};

/// An entity (package, (domain, package) instance, or domain) counts at
/// horizon H when at least one of its rows has rollout_days <= H.
std::vector<HorizonFractions> rollout_fractions(const std::vector<RolloutRow>& rows,
                                                const std::vector<std::int64_t>& horizons = kDefaultHorizons,
                                                const RolloutUniverse* universe = nullptr);

struct Advisory {
  std::string id;
  std::string package;
  std::string range_text;
  VersionRange range;
  std::string severity;
};

/// JSON list of {id, package, range, severity}. Throws InvalidRange for an
/// unparseable range and FormatError for other shape problems.
std::vector<Advisory> parse_advisories(const nlohmann::json& doc);

struct AuditDetection {
  std::string domain;
  std::string package;
  std::vector<SemVer> versions;  // retained candidates
  bool too_wide = false;
};

enum class AuditMode { kAny, kAll, kUnder, kOver };
std::string_view audit_mode_name(AuditMode m);

struct AuditOptions {
  /// Detections with more candidates are discarded; 0 disables the limit.
  std::size_t max_range_width = 3;
};

struct PackageTally {
  std::size_t instances = 0;
  std::size_t vulnerable = 0;
  std::set<std::string> advisories;

  bool operator==(const PackageTally&) const = default;
};

struct AuditResult {
  AuditMode mode = AuditMode::kAny;
  std::size_t domains = 0;
  std::size_t discarded = 0;
  double mean_vulnerable_per_domain = 0;
  std::map<std::string, std::size_t> vulnerable_per_domain;
  std::map<std::string, PackageTally> packages;

  bool operator==(const AuditResult&) const = default;
};

/// kAny: some candidate is affected. kAll: every candidate is. kUnder and
/// kOver evaluate only the lowest or the highest candidate.
AuditResult audit(const std::vector<AuditDetection>& detections,
                  const std::vector<Advisory>& advisories, AuditMode mode = AuditMode::kAny,
                  const AuditOptions& options = {});

nlohmann::json audit_to_json(const AuditResult& r);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view value);

}  // namespace sleuth

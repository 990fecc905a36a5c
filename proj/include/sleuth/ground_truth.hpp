#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sleuth/semver.hpp"

namespace sleuth {

struct SourceMapSummary {
  std::vector<std::string> sources;
  bool has_inline_content = false;
};

/// Source map v3 JSON; only "version" and "sources" are consumed. Accepts the
/// ")]}'" XSSI prefix. Throws FormatError.
SourceMapSummary parse_source_map(std::string_view bytes);
/// "data:application/json[;charset=...];base64,<payload>" or a
/// percent-encoded non-base64 data URI. Throws FormatError.
SourceMapSummary parse_source_map_data_uri(std::string_view uri);
/// Value of the last "//# sourceMappingURL=" (or "//@") comment, if any.
std::optional<std::string> source_mapping_url(std::string_view script);

/// Package names under the last "node_modules/" of each source path.
std::set<std::string> extract_packages(const SourceMapSummary& summary);

enum class Evidence { kNodeModulesPath, kPnpmStorePath };
std::string_view evidence_name(Evidence e);

struct GroundTruthEntry {
  std::string package;
  std::optional<SemVer> version;
  Evidence evidence = Evidence::kNodeModulesPath;

  bool operator<(const GroundTruthEntry& o) const;
  bool operator==(const GroundTruthEntry& o) const;
};

/// (name, version) pairs from ".pnpm/<name>@<version>(_<peers>)?/node_modules/<name>/"
/// paths. Entries whose version is not SemVer are dropped with a warning.
std::set<GroundTruthEntry> extract_pnpm_versions(const SourceMapSummary& summary,
                                                 std::vector<std::string>* warnings = nullptr);
/// pnpm entries plus version-less node_modules entries for the remaining
/// package names.
std::set<GroundTruthEntry> extract_ground_truth(const SourceMapSummary& summary,
                                                std::vector<std::string>* warnings = nullptr);

enum class CdnProvider { kCdnjs, kJsdelivr, kUnpkg, kGoogle, kJquery, kMicrosoft, kOther };
std::string_view provider_name(CdnProvider p);

enum class VersionSpecKind { kFixed, kAliased, kNone };
std::string_view version_spec_name(VersionSpecKind k);

struct CdnUrlInfo {
  CdnProvider provider = CdnProvider::kOther;
  std::optional<std::string> package;
  VersionSpecKind kind = VersionSpecKind::kNone;
  std::optional<SemVer> fixed;  // kFixed
  std::string alias;            // kAliased: the tag or range text; "" when the version is omitted
  std::string file;
};

CdnUrlInfo parse_cdn_url(std::string_view url);

}  // namespace sleuth

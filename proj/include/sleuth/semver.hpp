#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sleuth {

struct SemVer {
  std::uint64_t major = 0;
  std::uint64_t minor = 0;
  std::uint64_t patch = 0;
  std::vector<std::string> prerelease;
  std::string build;

  /// npm precedence; build metadata is ignored.
  std::strong_ordering operator<=>(const SemVer& other) const;
  bool operator==(const SemVer& other) const { return (*this <=> other) == 0; }

  bool is_prerelease() const { return !prerelease.empty(); }
  std::string to_string() const;
};

/// Strict x.y.z[-pre][+build]; a leading "v" or "=" is accepted.
/// Throws InvalidVersion.
SemVer parse_semver(std::string_view text);
std::optional<SemVer> try_parse_semver(std::string_view text);

/// Prerelease and build stripped.
SemVer core_version(const SemVer& v);

/// npm range expression: comparators (< <= > >= = and the ≤ ≥ aliases),
/// hyphen ranges, caret, tilde, x-ranges and partial versions, joined by
/// whitespace (and) and "||" (or).
class VersionRange {
 public:
  enum class Op { kLt, kLe, kGt, kGe, kEq };
  struct Comparator {
    Op op;
    SemVer version;
  };

  /// Throws InvalidRange.
  static VersionRange parse(std::string_view text);

  bool satisfies(const SemVer& v) const;
  const std::vector<std::vector<Comparator>>& sets() const { return sets_; }
  /// Desugared form, e.g. ">=1.2.3 <2.0.0-0 || =3.0.0".
  std::string to_string() const;

 private:
  std::vector<std::vector<Comparator>> sets_;
};

}  // namespace sleuth

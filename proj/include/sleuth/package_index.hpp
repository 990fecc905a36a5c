#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sleuth/artifact_selector.hpp"
#include "sleuth/digest.hpp"
#include "sleuth/fingerprint.hpp"
#include "sleuth/normalizer.hpp"
#include "sleuth/semver.hpp"

namespace sleuth {

struct PackageVersionRecord {
  std::string name;
  std::string version;
  FingerprintSet fingerprints;
  Digest file_manifest_digest{};
  SelectionStrategy selection_strategy = SelectionStrategy::kHeuristic;
  std::vector<std::string> files;
  std::uint64_t token_count = 0;

  /// Parsed `version`, or nullopt when it is not SemVer.
  std::optional<SemVer> semver() const { return try_parse_semver(version); }
};

struct BuildResult {
  PackageVersionRecord record;
  std::vector<std::string> warnings;
};

struct Candidate {
  std::uint32_t record;
  std::size_t shared;
};

enum class IndexFormat { kBinary, kJson };

inline constexpr std::uint32_t kIndexFormatVersion = 1;
inline constexpr std::size_t kDefaultMinShared = 20;

/// Digest over the artifact-relative paths and contents of `files`.
Digest manifest_digest(const std::filesystem::path& artifact_dir, const std::vector<std::string>& files);

/// Runs selection, pseudo-bundling, normalization, tokenization and
/// fingerprinting for one unpacked artifact. Throws SelectionError and
/// ParseError (when no selected file parses).
BuildResult build_record(const std::filesystem::path& artifact_dir, const std::string& name,
                         const std::string& version, const FingerprintParams& params,
                         const NormalizationConfig& normalization,
                         const TokenVocabulary& vocabulary = TokenVocabulary::standard());

struct IndexLoadOptions {
  bool check_digest = true;
};

class PackageIndex {
 public:
  using LoadOptions = IndexLoadOptions;

  explicit PackageIndex(FingerprintParams params = {}, NormalizationConfig normalization = {},
                        std::string vocabulary_version = std::string(kStandardVocabularyVersion));

  const FingerprintParams& params() const { return params_; }
  const NormalizationConfig& normalization() const { return normalization_; }
  std::string normalization_digest() const { return normalization_.digest_hex(); }
  const std::string& vocabulary_version() const { return vocabulary_version_; }
  const TokenVocabulary& vocabulary() const { return TokenVocabulary::by_version(vocabulary_version_); }
  const std::vector<PackageVersionRecord>& records() const { return records_; }
  std::uint64_t created() const { return created_; }
  void set_created(std::uint64_t unix_seconds) { created_ = unix_seconds; }

  /// Builds and appends a record. Throws DuplicateRecord, SelectionError,
  /// ParseError.
  const PackageVersionRecord& index_add(const std::filesystem::path& artifact_dir, const std::string& name,
                                        const std::string& version,
                                        std::vector<std::string>* warnings = nullptr);
  /// Appends a prepared record. Throws DuplicateRecord, ParamMismatch.
  const PackageVersionRecord& add(PackageVersionRecord record);

  std::optional<std::uint32_t> find(const std::string& name, const std::string& version) const;
  /// Record ids of `name`, in insertion order.
  std::vector<std::uint32_t> records_of(const std::string& name) const;
  std::vector<std::string> package_names() const;

  /// Records sharing at least `min_shared` distinct hashes with the bundle,
  /// ordered by shared count descending, then name, then version descending.
  /// Throws ParamMismatch.
  std::vector<Candidate> query_candidates(const FingerprintSet& bundle,
                                          std::size_t min_shared = kDefaultMinShared) const;

  /// Distinct hashes (sorted) present in the inverted table.
  std::span<const std::uint64_t> keys() const { return keys_; }
  std::span<const std::uint32_t> postings(std::size_t key_index) const;
  bool contains_hash(std::uint64_t hash) const;

  /// Inconsistencies between records, inverted table and digests; empty when
  /// consistent.
  std::vector<std::string> verify() const;

  /// Digest over the index content (timestamp excluded).
  Digest content_digest() const;

  std::string to_binary() const;
  nlohmann::json to_json() const;
  void save(const std::filesystem::path& path, IndexFormat format = IndexFormat::kBinary) const;

  /// Autodetects binary or JSON. Throws FormatError, CorruptIndex, IoError.
  static PackageIndex load(const std::filesystem::path& path, LoadOptions options);
  static PackageIndex load(const std::filesystem::path& path) { return load(path, LoadOptions{}); }
  static PackageIndex from_binary(std::string_view bytes, LoadOptions options = {});
  static PackageIndex from_json(const nlohmann::json& doc, LoadOptions options = {});

  void rebuild_inverted();

 private:
  std::string body_bytes(bool with_inverted = true) const;

  FingerprintParams params_;
  NormalizationConfig normalization_;
  std::string vocabulary_version_;
  std::uint64_t created_ = 0;
  std::vector<PackageVersionRecord> records_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> postings_;
  std::optional<Digest> stored_digest_;
  std::optional<std::string> stored_normalization_digest_;
};

/// Parses NormalizationConfig::canonical() output. Throws FormatError.
NormalizationConfig normalization_from_canonical(std::string_view text);

}  // namespace sleuth

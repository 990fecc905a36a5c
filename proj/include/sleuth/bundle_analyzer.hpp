#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sleuth/fingerprint.hpp"
#include "sleuth/js/tokens.hpp"
#include "sleuth/normalizer.hpp"

namespace sleuth {

inline constexpr std::size_t kMinPatternLength = 8;

/// Bundler names accepted in fingerprint files.
const std::vector<std::string>& known_bundlers();

struct BundlerFingerprint {
  std::string bundler;
  std::vector<TokenTypeId> pattern;
  std::string fingerprint_source;

  bool operator==(const BundlerFingerprint&) const = default;
};

/// Throws PatternTooShort, FormatError (unknown bundler name).
void validate_fingerprint(const BundlerFingerprint& fp);

/// Schema: [{"bundler": ..., "token_names": [...], "note": ...}, ...].
/// Throws FormatError, PatternTooShort, UnknownToken.
std::vector<BundlerFingerprint> parse_fingerprints(const nlohmann::json& doc,
                                                   const TokenVocabulary& vocabulary = TokenVocabulary::standard());
std::vector<BundlerFingerprint> load_fingerprint_file(const std::filesystem::path& path,
                                                      const TokenVocabulary& vocabulary = TokenVocabulary::standard());
nlohmann::json fingerprints_to_json(const std::vector<BundlerFingerprint>& fingerprints,
                                    const TokenVocabulary& vocabulary = TokenVocabulary::standard());
void save_fingerprint_file(const std::filesystem::path& path, const std::vector<BundlerFingerprint>& fingerprints,
                           const TokenVocabulary& vocabulary = TokenVocabulary::standard());

/// One pattern per "//@pattern <note>" section of a preamble source. The
/// section is normalized and flattened; the Program token is dropped and the
/// pattern ends before the first `__hole__` identifier, if any.
std::vector<BundlerFingerprint> derive_fingerprints(std::string_view bundler, std::string_view preamble_source,
                                                    const NormalizationConfig& normalization = {},
                                                    const TokenVocabulary& vocabulary = TokenVocabulary::standard());
/// Every `<bundler>.js` in `dir`, in file-name order.
std::vector<BundlerFingerprint> derive_fingerprints_from_dir(const std::filesystem::path& dir,
                                                             const NormalizationConfig& normalization = {},
                                                             const TokenVocabulary& vocabulary = TokenVocabulary::standard());

/// Preamble sources compiled into the library, as (bundler, source).
const std::vector<std::pair<std::string, std::string>>& builtin_preambles();
/// Patterns derived from the built-in preambles with the default
/// normalization and the standard vocabulary.
const std::vector<BundlerFingerprint>& default_fingerprints();

/// Aho-Corasick automaton over token ids. Immutable once built.
class BundlerMatcher {
 public:
  struct Match {
    std::size_t pattern;  // index into fingerprints()
    std::size_t end;      // one past the last matched token
  };

  /// Throws PatternTooShort.
  explicit BundlerMatcher(std::vector<BundlerFingerprint> fingerprints);

  const std::vector<BundlerFingerprint>& fingerprints() const { return fingerprints_; }
  std::size_t state_count() const { return state_count_; }

  /// Every occurrence of every pattern, ordered by end then pattern.
  std::vector<Match> find_all(std::span<const TokenTypeId> tokens) const;
  /// Bundlers with at least one pattern occurrence.
  std::set<std::string> identify(std::span<const TokenTypeId> tokens) const;

 private:
  template <typename OnMatch>
  void scan(std::span<const TokenTypeId> tokens, OnMatch&& on_match) const;

  std::vector<BundlerFingerprint> fingerprints_;
  std::vector<std::uint32_t> symbol_of_;  // token id -> column, 0 = not in any pattern
  std::size_t alphabet_ = 1;
  std::size_t state_count_ = 0;
  std::vector<std::uint32_t> delta_;        // state * alphabet_ + symbol
  std::vector<std::int32_t> output_head_;   // first pattern ending here, -1 = none
  std::vector<std::int32_t> output_next_;   // per pattern: next in output chain
  std::vector<std::uint32_t> dict_link_;    // nearest proper suffix state with output, 0 = none
};

std::set<std::string> identify_bundler(const TokenString& tokens, const std::vector<BundlerFingerprint>& fingerprints);

struct Compartment {
  std::string key;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
  FingerprintSet fingerprints;
  /// Set when the compartment matches a bundler pattern of its own.
  bool nested = false;
  std::set<std::string> nested_bundlers;
};

struct BundleAnalysis {
  TokenString tokens;
  FingerprintSet fingerprints;
  std::vector<Compartment> compartments;
  std::set<std::string> bundlers;
  std::vector<std::string> warnings;
};

/// Normalizes, flattens and fingerprints a bundle, locates its module map
/// and identifies the bundler. Throws EmptyInput, ParseError.
BundleAnalysis analyze_bundle(std::string_view source, const FingerprintParams& params = {},
                              const NormalizationConfig& normalization = {},
                              const TokenVocabulary& vocabulary = TokenVocabulary::standard(),
                              const BundlerMatcher* matcher = nullptr);

/// Compartments of the shallowest array or object literal with at least
/// two entries of which at least 80% are functions, and whose functions
/// hold at least half of the bundle's tokens. Object entries count only
/// under numeric or string keys. Throws ParseError.
std::vector<Compartment> extract_compartments(std::string_view source, const FingerprintParams& params = {},
                                              const NormalizationConfig& normalization = {});

}  // namespace sleuth

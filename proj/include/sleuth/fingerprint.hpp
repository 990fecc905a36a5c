#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sleuth/js/tokens.hpp"

namespace sleuth {

/// Polynomial rolling hash, base 31, mod 2^64, over token ids scrambled by a
/// 64-bit mixer.
inline constexpr std::string_view kHashMixedPoly31 = "poly31-mix64/1";
/// Same polynomial over raw token ids.
inline constexpr std::string_view kHashIdentityPoly31 = "poly31-id/1";

struct FingerprintParams {
  std::uint32_t k = 27;
  std::uint32_t w = 15;
  std::string hash_fn_version{kHashMixedPoly31};

  /// Throws ParamMismatch for k or w of zero or an unknown hash version.
  void validate() const;
  bool operator==(const FingerprintParams&) const = default;
  std::string describe() const;
};

struct Fingerprint {
  std::uint64_t hash;
  std::uint32_t position;

  bool operator==(const Fingerprint&) const = default;
  auto operator<=>(const Fingerprint&) const = default;
};

class FingerprintSet {
 public:
  FingerprintSet() = default;
  FingerprintSet(FingerprintParams params, std::vector<Fingerprint> entries);
  /// A set known only by its hashes (positions unavailable).
  static FingerprintSet from_hashes(FingerprintParams params, std::vector<std::uint64_t> hashes);

  const FingerprintParams& params() const { return params_; }
  /// Ordered by position.
  const std::vector<Fingerprint>& entries() const { return entries_; }
  /// Sorted, unique.
  const std::vector<std::uint64_t>& distinct_hashes() const { return distinct_; }
  std::size_t size() const { return distinct_.size(); }
  bool empty() const { return distinct_.empty(); }

  /// Hashes of entries whose position lies in [begin, end).
  FingerprintSet slice(std::size_t begin, std::size_t end) const;
  /// Union of distinct hashes; entries concatenated.
  static FingerprintSet merge(const std::vector<const FingerprintSet*>& parts);

 private:
  FingerprintParams params_;
  std::vector<Fingerprint> entries_;
  std::vector<std::uint64_t> distinct_;
};

std::uint64_t mix_token(TokenTypeId id);

/// Hash of every k-gram, in position order. Empty when |tokens| < k.
std::vector<std::uint64_t> kgram_hashes(std::span<const TokenTypeId> tokens,
                                        const FingerprintParams& params);

/// Winnowing with rightmost-minimum tie rule. When fewer than w k-grams
/// exist, the single shorter window still selects its minimum.
std::vector<Fingerprint> winnow(std::span<const std::uint64_t> hashes, std::uint32_t w);

FingerprintSet fingerprint(const TokenString& tokens, const FingerprintParams& params = {});
FingerprintSet fingerprint(std::span<const TokenTypeId> tokens, const FingerprintParams& params = {});

/// |R ∩ B| / |B| over distinct hashes; 0 when B is empty. Throws ParamMismatch.
double containment_similarity(const FingerprintSet& reference, const FingerprintSet& bundle);
/// |R ∩ B|. Throws ParamMismatch.
std::size_t shared_count(const FingerprintSet& reference, const FingerprintSet& bundle);

/// Intersection size of two sorted unique hash lists.
std::size_t intersection_size(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

}  // namespace sleuth

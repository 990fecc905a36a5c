#include "sleuth/fingerprint.hpp"

#include <algorithm>
#include <deque>

#include "sleuth/error.hpp"

namespace sleuth {

void FingerprintParams::validate() const {
  if (k == 0 || w == 0) {
    throw Error(ErrorCode::kParamMismatch, "fingerprint parameters need k >= 1 and w >= 1");
  }
  if (hash_fn_version != kHashMixedPoly31 && hash_fn_version != kHashIdentityPoly31) {
    throw Error(ErrorCode::kParamMismatch, "unknown hash function '" + hash_fn_version + "'");
  }
}

std::string FingerprintParams::describe() const {
  return "k=" + std::to_string(k) + ",w=" + std::to_string(w) + ",hash=" + hash_fn_version;
}

namespace {

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void require_same_params(const FingerprintSet& a, const FingerprintSet& b) {
  if (!(a.params() == b.params())) {
    throw Error(ErrorCode::kParamMismatch, "fingerprint parameters differ: " + a.params().describe() +
                                               " vs " + b.params().describe());
  }
}

}  // namespace

FingerprintSet::FingerprintSet(FingerprintParams params, std::vector<Fingerprint> entries)
    : params_(std::move(params)), entries_(std::move(entries)) {
  std::vector<std::uint64_t> hashes;
  hashes.reserve(entries_.size());
  for (const auto& e : entries_) hashes.push_back(e.hash);
  distinct_ = sorted_unique(std::move(hashes));
}

FingerprintSet FingerprintSet::from_hashes(FingerprintParams params, std::vector<std::uint64_t> hashes) {
  FingerprintSet set;
  set.params_ = std::move(params);
  set.distinct_ = sorted_unique(std::move(hashes));
  return set;
}

FingerprintSet FingerprintSet::slice(std::size_t begin, std::size_t end) const {
  std::vector<Fingerprint> part;
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), begin,
                             [](const Fingerprint& f, std::size_t pos) { return f.position < pos; });
  for (auto it = lo; it != entries_.end() && it->position < end; ++it) part.push_back(*it);
  return FingerprintSet(params_, std::move(part));
}

FingerprintSet FingerprintSet::merge(const std::vector<const FingerprintSet*>& parts) {
  if (parts.empty()) return {};
  std::vector<Fingerprint> entries;
  std::vector<std::uint64_t> hashes;
  for (const FingerprintSet* p : parts) {
    require_same_params(*parts.front(), *p);
    entries.insert(entries.end(), p->entries_.begin(), p->entries_.end());
    hashes.insert(hashes.end(), p->distinct_.begin(), p->distinct_.end());
  }
  std::sort(entries.begin(), entries.end(), [](const Fingerprint& a, const Fingerprint& b) {
    return a.position != b.position ? a.position < b.position : a.hash < b.hash;
  });
  FingerprintSet out;
  out.params_ = parts.front()->params_;
  out.entries_ = std::move(entries);
  out.distinct_ = sorted_unique(std::move(hashes));
  return out;
}

std::uint64_t mix_token(TokenTypeId id) {
  // splitmix64 finaliser.
  std::uint64_t z = static_cast<std::uint64_t>(id) + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> kgram_hashes(std::span<const TokenTypeId> tokens,
                                        const FingerprintParams& params) {
  params.validate();
  const std::size_t k = params.k;
  std::vector<std::uint64_t> out;
  if (tokens.size() < k) return out;
  const bool mixed = params.hash_fn_version == kHashMixedPoly31;
  auto symbol = [&](std::size_t i) -> std::uint64_t {
    return mixed ? mix_token(tokens[i]) : static_cast<std::uint64_t>(tokens[i]);
  };
  constexpr std::uint64_t kBase = 31;
  std::uint64_t top = 1;  // kBase^(k-1)
  for (std::size_t i = 1; i < k; ++i) top *= kBase;
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < k; ++i) h = h * kBase + symbol(i);
  out.reserve(tokens.size() - k + 1);
  out.push_back(h);
  for (std::size_t i = k; i < tokens.size(); ++i) {
    h = (h - symbol(i - k) * top) * kBase + symbol(i);
    out.push_back(h);
  }
  return out;
}

std::vector<Fingerprint> winnow(std::span<const std::uint64_t> hashes, std::uint32_t w) {
  std::vector<Fingerprint> out;
  if (hashes.empty() || w == 0) return out;
  const std::size_t window = std::min<std::size_t>(w, hashes.size());
  std::deque<std::size_t> q;  // indices with strictly increasing hashes
  std::size_t last = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < hashes.size(); ++i) {
    while (!q.empty() && hashes[q.back()] >= hashes[i]) q.pop_back();
    q.push_back(i);
    if (q.front() + window <= i) q.pop_front();
    if (i + 1 >= window) {
      const std::size_t best = q.front();
      if (best != last) {
        out.push_back({hashes[best], static_cast<std::uint32_t>(best)});
        last = best;
      }
    }
  }
  return out;
}

FingerprintSet fingerprint(std::span<const TokenTypeId> tokens, const FingerprintParams& params) {
  const auto hashes = kgram_hashes(tokens, params);
  return FingerprintSet(params, winnow(hashes, params.w));
}

FingerprintSet fingerprint(const TokenString& tokens, const FingerprintParams& params) {
  return fingerprint(std::span<const TokenTypeId>(tokens.tokens), params);
}

std::size_t intersection_size(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::size_t n = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

std::size_t shared_count(const FingerprintSet& reference, const FingerprintSet& bundle) {
  require_same_params(reference, bundle);
  return intersection_size(reference.distinct_hashes(), bundle.distinct_hashes());
}

double containment_similarity(const FingerprintSet& reference, const FingerprintSet& bundle) {
  const std::size_t shared = shared_count(reference, bundle);
  if (bundle.empty()) return 0.0;
  return static_cast<double>(shared) / static_cast<double>(bundle.size());
}

}  // namespace sleuth

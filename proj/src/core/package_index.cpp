#include "sleuth/package_index.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sleuth/error.hpp"
#include "sleuth/pseudo_bundler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sleuth {

namespace {

constexpr char kMagic[4] = {'B', 'S', 'I', 'X'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8;

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void raw(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() {
    auto p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    return std::string(take(n));
  }
  std::string_view take(std::size_t n) {
    if (n > data_.size() - pos_) throw Error(ErrorCode::kCorruptIndex, "index file is truncated");
    std::string_view s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

/// Counts must be plausible for the bytes that remain.
std::uint32_t bounded_count(Reader& r, std::size_t min_item_bytes) {
  const std::uint32_t n = r.u32();
  if (min_item_bytes > 0 && n > r.remaining() / min_item_bytes) {
    throw Error(ErrorCode::kCorruptIndex, "index file is truncated");
  }
  return n;
}

bool version_greater(const PackageVersionRecord& a, const PackageVersionRecord& b) {
  const auto va = a.semver();
  const auto vb = b.semver();
  if (va && vb) return *va > *vb;
  if (va.has_value() != vb.has_value()) return va.has_value();
  return a.version > b.version;
}

}  // namespace

NormalizationConfig normalization_from_canonical(std::string_view text) {
  NormalizationConfig config;
  config.passes.clear();
  const auto semi = text.find(";external=");
  if (!text.starts_with("passes=") || semi == std::string_view::npos) {
    throw Error(ErrorCode::kFormatError, "malformed normalization config '" + std::string(text) + "'");
  }
  std::string_view passes = text.substr(7, semi - 7);
  while (!passes.empty()) {
    const auto comma = passes.find(',');
    config.passes.emplace_back(passes.substr(0, comma));
    if (comma == std::string_view::npos) break;
    passes.remove_prefix(comma + 1);
  }
  std::string_view external = text.substr(semi + 10);
  if (!external.empty()) {
    ExternalMinifier tool;
    std::istringstream words{std::string(external)};
    words >> tool.executable;
    std::string arg;
    while (words >> arg) tool.arguments.push_back(arg);
    config.external_minifier = tool;
  }
  return config;
}

Digest manifest_digest(const fs::path& root, const std::vector<std::string>& files) {
  Hasher h;
  for (const auto& f : files) {
    const std::string content = read_all(root / f);
    h.update_u64(f.size()).update(f).update_u64(content.size()).update(content);
  }
  return h.finish();
}

constexpr std::string_view kRetainCallee = "__sleuth_retain";

BuildResult build_record(const fs::path& root, const std::string& name, const std::string& version,
                         const FingerprintParams& params, const NormalizationConfig& normalization,
                         const TokenVocabulary& vocabulary) {
  BuildResult out;
  SelectionResult selection = select_files(root);
  out.warnings = selection.warnings;
  std::vector<SourceFile> sources;
  for (const auto& f : selection.files) sources.push_back({f, read_all(root / f)});
  PseudoBundle bundle;
  try {
    bundle = pseudo_bundle(sources);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAllFilesUnparseable) throw;
    throw Error(ErrorCode::kParseError, name + "@" + version + ": " + e.what());
  }
  out.warnings.insert(out.warnings.end(), bundle.warnings.begin(), bundle.warnings.end());
  if (normalization.external_minifier) {
    // Unknown callee, so minifiers keep the module array.
    std::string& src = bundle.source;
    while (!src.empty() && (std::isspace(static_cast<unsigned char>(src.back())) || src.back() == ';')) src.pop_back();
    src = std::string(kRetainCallee) + "(" + src + ");\n";
  }
  TokenString tokens = normalize_tokens(bundle.source, normalization, vocabulary, name + "@" + version,
                                        &out.warnings);
  auto& rec = out.record;
  rec.name = name;
  rec.version = version;
  rec.fingerprints = fingerprint(tokens, params);
  rec.file_manifest_digest = manifest_digest(root, selection.files);
  rec.selection_strategy = selection.strategy;
  rec.files = selection.files;
  rec.token_count = tokens.size();
  return out;
}

PackageIndex::PackageIndex(FingerprintParams params, NormalizationConfig normalization,
                           std::string vocabulary_version)
    : params_(std::move(params)),
      normalization_(std::move(normalization)),
      vocabulary_version_(std::move(vocabulary_version)) {
  params_.validate();
  normalization_.validate();
  TokenVocabulary::by_version(vocabulary_version_);
}

const PackageVersionRecord& PackageIndex::index_add(const fs::path& artifact_dir, const std::string& name,
                                                    const std::string& version,
                                                    std::vector<std::string>* warnings) {
  if (find(name, version)) {
    throw Error(ErrorCode::kDuplicateRecord, name + "@" + version + " is already indexed");
  }
  BuildResult built = build_record(artifact_dir, name, version, params_, normalization_, vocabulary());
  if (warnings != nullptr) warnings->insert(warnings->end(), built.warnings.begin(), built.warnings.end());
  return add(std::move(built.record));
}

const PackageVersionRecord& PackageIndex::add(PackageVersionRecord record) {
  if (!(record.fingerprints.params() == params_)) {
    throw Error(ErrorCode::kParamMismatch, "record parameters " + record.fingerprints.params().describe() +
                                               " differ from index parameters " + params_.describe());
  }
  if (find(record.name, record.version)) {
    throw Error(ErrorCode::kDuplicateRecord, record.name + "@" + record.version + " is already indexed");
  }
  records_.push_back(std::move(record));
  stored_digest_.reset();
  rebuild_inverted();
  return records_.back();
}

std::optional<std::uint32_t> PackageIndex::find(const std::string& name, const std::string& version) const {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].name == name && records_[i].version == version) return static_cast<std::uint32_t>(i);
  }
  return std::nullopt;
}

std::vector<std::uint32_t> PackageIndex::records_of(const std::string& name) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].name == name) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::vector<std::string> PackageIndex::package_names() const {
  std::set<std::string> names;
  for (const auto& r : records_) names.insert(r.name);
  return {names.begin(), names.end()};
}

void PackageIndex::rebuild_inverted() {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> pairs;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    for (std::uint64_t h : records_[i].fingerprints.distinct_hashes()) {
      pairs.emplace_back(h, static_cast<std::uint32_t>(i));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  keys_.clear();
  offsets_.assign(1, 0);
  postings_.clear();
  postings_.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].first != pairs[i - 1].first) {
      if (i != 0) offsets_.push_back(static_cast<std::uint32_t>(postings_.size()));
      keys_.push_back(pairs[i].first);
    }
    postings_.push_back(pairs[i].second);
  }
  if (!keys_.empty()) offsets_.push_back(static_cast<std::uint32_t>(postings_.size()));
}

std::span<const std::uint32_t> PackageIndex::postings(std::size_t key_index) const {
  return std::span<const std::uint32_t>(postings_).subspan(offsets_[key_index],
                                                          offsets_[key_index + 1] - offsets_[key_index]);
}

bool PackageIndex::contains_hash(std::uint64_t hash) const {
  return std::binary_search(keys_.begin(), keys_.end(), hash);
}

std::vector<Candidate> PackageIndex::query_candidates(const FingerprintSet& bundle, std::size_t min_shared) const {
  if (!(bundle.params() == params_)) {
    throw Error(ErrorCode::kParamMismatch, "bundle parameters " + bundle.params().describe() +
                                               " differ from index parameters " + params_.describe());
  }
  std::vector<std::size_t> counts(records_.size(), 0);
  auto from = keys_.begin();
  for (std::uint64_t h : bundle.distinct_hashes()) {
    from = std::lower_bound(from, keys_.end(), h);
    if (from == keys_.end()) break;
    if (*from != h) continue;
    for (std::uint32_t id : postings(static_cast<std::size_t>(from - keys_.begin()))) ++counts[id];
  }
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] >= min_shared && (counts[i] > 0 || min_shared == 0)) {
      out.push_back({static_cast<std::uint32_t>(i), counts[i]});
    }
  }
  std::sort(out.begin(), out.end(), [this](const Candidate& a, const Candidate& b) {
    if (a.shared != b.shared) return a.shared > b.shared;
    const auto& ra = records_[a.record];
    const auto& rb = records_[b.record];
    if (ra.name != rb.name) return ra.name < rb.name;
    if (ra.version != rb.version) return version_greater(ra, rb);
    return a.record < b.record;
  });
  return out;
}

std::string PackageIndex::body_bytes(bool with_inverted) const {
  Writer w;
  w.u32(params_.k);
  w.u32(params_.w);
  w.str(params_.hash_fn_version);
  w.str(vocabulary_version_);
  w.str(normalization_.canonical());
  const Digest nd = digest_of(normalization_.canonical());
  w.raw(nd.data(), nd.size());
  w.u32(static_cast<std::uint32_t>(records_.size()));
  for (const auto& r : records_) {
    w.str(r.name);
    w.str(r.version);
    w.u8(static_cast<std::uint8_t>(r.selection_strategy));
    w.raw(r.file_manifest_digest.data(), r.file_manifest_digest.size());
    w.u32(static_cast<std::uint32_t>(r.files.size()));
    for (const auto& f : r.files) w.str(f);
    w.u64(r.token_count);
    const auto& hashes = r.fingerprints.distinct_hashes();
    w.u32(static_cast<std::uint32_t>(hashes.size()));
    for (std::uint64_t h : hashes) w.u64(h);
  }
  if (with_inverted) {
    w.u32(static_cast<std::uint32_t>(keys_.size()));
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      w.u64(keys_[i]);
      const auto ids = postings(i);
      w.u32(static_cast<std::uint32_t>(ids.size()));
      for (std::uint32_t id : ids) w.u32(id);
    }
  }
  return std::move(w.bytes());
}

Digest PackageIndex::content_digest() const { return digest_of(body_bytes()); }

std::string PackageIndex::to_binary() const {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.u32(kIndexFormatVersion);
  w.u64(created_);
  std::string body = body_bytes();
  const Digest d = digest_of(body);
  std::string out = std::move(w.bytes());
  out += body;
  out.append(reinterpret_cast<const char*>(d.data()), d.size());
  return out;
}

json PackageIndex::to_json() const {
  json doc;
  doc["format"] = "bundlesleuth-index";
  doc["format_version"] = kIndexFormatVersion;
  doc["created"] = created_;
  doc["params"] = {{"k", params_.k}, {"w", params_.w}, {"hash_fn_version", params_.hash_fn_version}};
  doc["vocabulary_version"] = vocabulary_version_;
  json passes = json::array();
  for (const auto& p : normalization_.passes) passes.push_back(p);
  doc["normalization"] = {{"config", normalization_.canonical()},
                          {"passes", passes},
                          {"digest", normalization_.digest_hex()}};
  json records = json::array();
  for (const auto& r : records_) {
    json hashes = json::array();
    for (std::uint64_t h : r.fingerprints.distinct_hashes()) hashes.push_back(h);
    records.push_back({{"name", r.name},
                       {"version", r.version},
                       {"selection_strategy", std::string(strategy_name(r.selection_strategy))},
                       {"file_manifest_digest", to_hex(r.file_manifest_digest)},
                       {"files", r.files},
                       {"token_count", r.token_count},
                       {"hashes", hashes}});
  }
  doc["records"] = std::move(records);
  json inverted = json::array();
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    const auto ids = postings(i);
    inverted.push_back(json::array({keys_[i], json(std::vector<std::uint32_t>(ids.begin(), ids.end()))}));
  }
  doc["inverted"] = std::move(inverted);
  doc["digest"] = to_hex(content_digest());
  return doc;
}

void PackageIndex::save(const fs::path& path, IndexFormat format) const {
  const std::string bytes = format == IndexFormat::kBinary ? to_binary() : to_json().dump() + "\n";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

PackageIndex PackageIndex::from_binary(std::string_view bytes, LoadOptions options) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kFormatError, "not a BSIX index (bad magic)");
  }
  if (bytes.size() < kHeaderBytes + kDigestBytes) throw Error(ErrorCode::kCorruptIndex, "index file is truncated");
  Reader header(bytes.substr(4, 12));
  const std::uint32_t version = header.u32();
  if (version != kIndexFormatVersion) {
    throw Error(ErrorCode::kFormatError, "unsupported index format version " + std::to_string(version));
  }
  const std::uint64_t created = header.u64();
  const std::string_view body = bytes.substr(kHeaderBytes, bytes.size() - kHeaderBytes - kDigestBytes);
  Digest stored{};
  std::memcpy(stored.data(), bytes.data() + bytes.size() - kDigestBytes, kDigestBytes);
  if (options.check_digest && digest_of(body) != stored) {
    throw Error(ErrorCode::kCorruptIndex, "index digest mismatch");
  }

  Reader r(body);
  FingerprintParams params;
  params.k = r.u32();
  params.w = r.u32();
  params.hash_fn_version = r.str();
  std::string vocab = r.str();
  const std::string canonical = r.str();
  Digest norm_digest{};
  std::memcpy(norm_digest.data(), r.take(kDigestBytes).data(), kDigestBytes);
  PackageIndex index;
  try {
    index = PackageIndex(params, normalization_from_canonical(canonical), vocab);
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormatError, std::string("index header: ") + e.what());
  }
  index.created_ = created;
  index.stored_normalization_digest_ = to_hex(norm_digest);
  const std::uint32_t n_records = bounded_count(r, 4 + 4 + 1 + kDigestBytes + 4 + 8 + 4);
  for (std::uint32_t i = 0; i < n_records; ++i) {
    PackageVersionRecord rec;
    rec.name = r.str();
    rec.version = r.str();
    const std::uint8_t strategy = r.u8();
    if (strategy > 2) throw Error(ErrorCode::kCorruptIndex, "bad selection strategy code");
    rec.selection_strategy = static_cast<SelectionStrategy>(strategy);
    std::memcpy(rec.file_manifest_digest.data(), r.take(kDigestBytes).data(), kDigestBytes);
    const std::uint32_t n_files = bounded_count(r, 4);
    for (std::uint32_t f = 0; f < n_files; ++f) rec.files.push_back(r.str());
    rec.token_count = r.u64();
    const std::uint32_t n_hashes = bounded_count(r, 8);
    std::vector<std::uint64_t> hashes(n_hashes);
    for (auto& h : hashes) h = r.u64();
    rec.fingerprints = FingerprintSet::from_hashes(params, std::move(hashes));
    index.records_.push_back(std::move(rec));
  }
  const std::uint32_t n_keys = bounded_count(r, 12);
  index.keys_.reserve(n_keys);
  index.offsets_.assign(1, 0);
  for (std::uint32_t i = 0; i < n_keys; ++i) {
    index.keys_.push_back(r.u64());
    const std::uint32_t n = bounded_count(r, 4);
    for (std::uint32_t j = 0; j < n; ++j) {
      const std::uint32_t id = r.u32();
      if (id >= index.records_.size()) throw Error(ErrorCode::kCorruptIndex, "posting refers to missing record");
      index.postings_.push_back(id);
    }
    index.offsets_.push_back(static_cast<std::uint32_t>(index.postings_.size()));
  }
  if (r.remaining() != 0) throw Error(ErrorCode::kCorruptIndex, "trailing bytes in index body");
  index.stored_digest_ = stored;
  return index;
}

PackageIndex PackageIndex::from_json(const json& doc, LoadOptions options) {
  try {
    if (!doc.is_object() || doc.value("format", "") != "bundlesleuth-index") {
      throw Error(ErrorCode::kFormatError, "not a bundlesleuth index document");
    }
    if (doc.at("format_version").get<std::uint32_t>() != kIndexFormatVersion) {
      throw Error(ErrorCode::kFormatError, "unsupported index format version");
    }
    FingerprintParams params;
    params.k = doc.at("params").at("k").get<std::uint32_t>();
    params.w = doc.at("params").at("w").get<std::uint32_t>();
    params.hash_fn_version = doc.at("params").at("hash_fn_version").get<std::string>();
    PackageIndex index(params, normalization_from_canonical(doc.at("normalization").at("config").get<std::string>()),
                       doc.at("vocabulary_version").get<std::string>());
    index.created_ = doc.value("created", std::uint64_t{0});
    if (doc.at("normalization").contains("digest")) {
      index.stored_normalization_digest_ = doc["normalization"]["digest"].get<std::string>();
    }
    for (const auto& jr : doc.at("records")) {
      PackageVersionRecord rec;
      rec.name = jr.at("name").get<std::string>();
      rec.version = jr.at("version").get<std::string>();
      rec.selection_strategy = parse_strategy(jr.at("selection_strategy").get<std::string>());
      rec.file_manifest_digest = digest_from_hex(jr.at("file_manifest_digest").get<std::string>());
      rec.files = jr.at("files").get<std::vector<std::string>>();
      rec.token_count = jr.at("token_count").get<std::uint64_t>();
      rec.fingerprints = FingerprintSet::from_hashes(params, jr.at("hashes").get<std::vector<std::uint64_t>>());
      index.records_.push_back(std::move(rec));
    }
    index.offsets_.assign(1, 0);
    for (const auto& entry : doc.at("inverted")) {
      index.keys_.push_back(entry.at(0).get<std::uint64_t>());
      for (const auto& id : entry.at(1)) {
        const auto v = id.get<std::uint32_t>();
        if (v >= index.records_.size()) throw Error(ErrorCode::kCorruptIndex, "posting refers to missing record");
        index.postings_.push_back(v);
      }
      index.offsets_.push_back(static_cast<std::uint32_t>(index.postings_.size()));
    }
    if (doc.contains("digest")) {
      const Digest stored = digest_from_hex(doc["digest"].get<std::string>());
      if (options.check_digest && stored != index.content_digest()) {
        throw Error(ErrorCode::kCorruptIndex, "index digest mismatch");
      }
      index.stored_digest_ = stored;
    }
    return index;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("malformed index JSON: ") + e.what());
  }
}

PackageIndex PackageIndex::load(const fs::path& path, LoadOptions options) {
  const std::string bytes = read_all(path);
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && bytes[first] == '{') {
    json doc;
    try {
      doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kCorruptIndex, std::string("index JSON does not parse: ") + e.what());
    }
    return from_json(doc, options);
  }
  return from_binary(bytes, options);
}

std::vector<std::string> PackageIndex::verify() const {
  std::vector<std::string> findings;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    const std::string id = "record " + std::to_string(i) + " (" + r.name + "@" + r.version + ")";
    if (!seen.emplace(r.name, r.version).second) findings.push_back(id + ": duplicate (name, version)");
    if (!(r.fingerprints.params() == params_)) findings.push_back(id + ": fingerprint parameters differ");
    const auto& h = r.fingerprints.distinct_hashes();
    if (!std::is_sorted(h.begin(), h.end()) || std::adjacent_find(h.begin(), h.end()) != h.end()) {
      findings.push_back(id + ": hashes not sorted and unique");
    }
  }
  // Transpose of the records versus the stored inverted table.
  std::map<std::uint64_t, std::vector<std::uint32_t>> expected;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    for (std::uint64_t h : records_[i].fingerprints.distinct_hashes()) {
      expected[h].push_back(static_cast<std::uint32_t>(i));
    }
  }
  if (offsets_.size() != keys_.size() + 1 && !(keys_.empty() && offsets_.size() == 1)) {
    findings.push_back("inverted table offsets are inconsistent");
  } else {
    std::set<std::uint64_t> stored_keys;
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (i > 0 && keys_[i] <= keys_[i - 1]) findings.push_back("inverted keys not strictly increasing at " + std::to_string(i));
      stored_keys.insert(keys_[i]);
      const auto ids = postings(i);
      auto it = expected.find(keys_[i]);
      if (it == expected.end()) {
        findings.push_back("inverted table has hash " + std::to_string(keys_[i]) + " that no record contains");
      } else if (!std::equal(ids.begin(), ids.end(), it->second.begin(), it->second.end())) {
        findings.push_back("postings for hash " + std::to_string(keys_[i]) + " do not match the records");
      }
    }
    for (const auto& [h, ids] : expected) {
      if (!stored_keys.count(h)) findings.push_back("hash " + std::to_string(h) + " missing from inverted table");
    }
  }
  if (stored_normalization_digest_ && *stored_normalization_digest_ != normalization_.digest_hex()) {
    findings.push_back("normalization digest does not match the recorded configuration");
  }
  if (stored_digest_ && *stored_digest_ != content_digest()) {
    findings.push_back("content digest does not match the stored digest");
  }
  return findings;
}

}  // namespace sleuth

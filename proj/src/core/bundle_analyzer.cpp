#include "sleuth/bundle_analyzer.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "sleuth/error.hpp"
#include "sleuth/js/printer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sleuth {

namespace detail {
// Generated from data/preambles at configure time.
extern const std::vector<std::pair<std::string, std::string>> kBuiltinPreambles;
}  // namespace detail

const std::vector<std::string>& known_bundlers() {
  static const std::vector<std::string> names = {"webpack", "webpack-chunk", "rollup", "browserify",
                                                 "esbuild", "parcel",        "custom"};
  return names;
}

void validate_fingerprint(const BundlerFingerprint& fp) {
  const auto& names = known_bundlers();
  if (std::find(names.begin(), names.end(), fp.bundler) == names.end()) {
    throw Error(ErrorCode::kFormatError, "unknown bundler '" + fp.bundler + "'");
  }
  if (fp.pattern.size() < kMinPatternLength) {
    throw Error(ErrorCode::kPatternTooShort, "pattern for " + fp.bundler + " has " +
                                                 std::to_string(fp.pattern.size()) + " tokens; at least " +
                                                 std::to_string(kMinPatternLength) + " required");
  }
}

std::vector<BundlerFingerprint> parse_fingerprints(const json& doc, const TokenVocabulary& vocabulary) {
  if (!doc.is_array()) throw Error(ErrorCode::kFormatError, "fingerprint file must be a JSON array");
  std::vector<BundlerFingerprint> out;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("bundler") || !entry.contains("token_names") ||
        !entry["bundler"].is_string() || !entry["token_names"].is_array()) {
      throw Error(ErrorCode::kFormatError, "fingerprint entry needs 'bundler' and 'token_names'");
    }
    BundlerFingerprint fp;
    fp.bundler = entry["bundler"].get<std::string>();
    for (const auto& name : entry["token_names"]) {
      if (!name.is_string()) throw Error(ErrorCode::kFormatError, "token names must be strings");
      fp.pattern.push_back(vocabulary.id(name.get<std::string>()));
    }
    if (entry.contains("note") && entry["note"].is_string()) fp.fingerprint_source = entry["note"].get<std::string>();
    validate_fingerprint(fp);
    out.push_back(std::move(fp));
  }
  return out;
}

std::vector<BundlerFingerprint> load_fingerprint_file(const fs::path& path, const TokenVocabulary& vocabulary) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormatError, path.string() + ": " + e.what());
  }
  return parse_fingerprints(doc, vocabulary);
}

json fingerprints_to_json(const std::vector<BundlerFingerprint>& fingerprints, const TokenVocabulary& vocabulary) {
  json doc = json::array();
  for (const auto& fp : fingerprints) {
    json names = json::array();
    for (TokenTypeId id : fp.pattern) names.push_back(std::string(vocabulary.name(id)));
    doc.push_back({{"bundler", fp.bundler}, {"token_names", std::move(names)}, {"note", fp.fingerprint_source}});
  }
  return doc;
}

void save_fingerprint_file(const fs::path& path, const std::vector<BundlerFingerprint>& fingerprints,
                           const TokenVocabulary& vocabulary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << fingerprints_to_json(fingerprints, vocabulary).dump(1) << "\n";
}

std::vector<BundlerFingerprint> derive_fingerprints(std::string_view bundler, std::string_view source,
                                                    const NormalizationConfig& normalization,
                                                    const TokenVocabulary& vocabulary) {
  constexpr std::string_view kMarker = "//@pattern";
  constexpr std::string_view kHole = "__hole__";
  constexpr std::string_view kStart = "__start__";
  std::vector<BundlerFingerprint> out;
  std::size_t at = source.find(kMarker);
  while (at != std::string_view::npos) {
    const std::size_t eol = std::min(source.find('\n', at), source.size());
    std::string note(source.substr(at + kMarker.size(), eol - at - kMarker.size()));
    note.erase(0, note.find_first_not_of(' '));
    const std::size_t next = source.find(kMarker, eol);
    const std::string_view body = source.substr(eol, (next == std::string_view::npos ? source.size() : next) - eol);
    js::ParsedDocument doc = normalize_document(body, normalization);
    std::size_t cut = std::numeric_limits<std::size_t>::max();
    std::size_t begin = 1;
    bool started = false;
    std::vector<TokenTypeId> tokens = flatten_with_ranges(
        doc.ast.root, vocabulary,
        [](const js::Node& n) {
          return n.type == js::NodeType::Identifier && (n.text == kHole || n.text == kStart);
        },
        [&](const js::Node& n, std::size_t b, std::size_t e) {
          if (n.text == kHole) {
            cut = std::min(cut, b);
          } else if (!started) {
            begin = e;
            started = true;
          }
        });
    if (cut < tokens.size()) tokens.resize(cut);
    begin = std::min(begin, tokens.size());
    BundlerFingerprint fp{std::string(bundler), {tokens.begin() + static_cast<std::ptrdiff_t>(begin), tokens.end()}, note};
    validate_fingerprint(fp);
    out.push_back(std::move(fp));
    at = next;
  }
  return out;
}

std::vector<BundlerFingerprint> derive_fingerprints_from_dir(const fs::path& dir,
                                                             const NormalizationConfig& normalization,
                                                             const TokenVocabulary& vocabulary) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".js") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<BundlerFingerprint> out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto part = derive_fingerprints(f.stem().string(), ss.str(), normalization, vocabulary);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

const std::vector<std::pair<std::string, std::string>>& builtin_preambles() { return detail::kBuiltinPreambles; }

const std::vector<BundlerFingerprint>& default_fingerprints() {
  static const std::vector<BundlerFingerprint> fps = [] {
    std::vector<BundlerFingerprint> out;
    for (const auto& [bundler, source] : builtin_preambles()) {
      auto part = derive_fingerprints(bundler, source);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }();
  return fps;
}

BundlerMatcher::BundlerMatcher(std::vector<BundlerFingerprint> fingerprints) : fingerprints_(std::move(fingerprints)) {
  for (const auto& fp : fingerprints_) {
    if (fp.pattern.size() < kMinPatternLength) validate_fingerprint(fp);
  }
  TokenTypeId max_id = 0;
  for (const auto& fp : fingerprints_) {
    for (TokenTypeId t : fp.pattern) max_id = std::max(max_id, t);
  }
  symbol_of_.assign(static_cast<std::size_t>(max_id) + 1, 0);
  for (const auto& fp : fingerprints_) {
    for (TokenTypeId t : fp.pattern) {
      if (symbol_of_[t] == 0) symbol_of_[t] = static_cast<std::uint32_t>(alphabet_++);
    }
  }

  // Trie; 0 marks a missing edge until failure links fill the table.
  delta_.assign(alphabet_, 0);
  output_head_.assign(1, -1);
  output_next_.assign(fingerprints_.size(), -1);
  state_count_ = 1;
  for (std::size_t p = 0; p < fingerprints_.size(); ++p) {
    std::uint32_t s = 0;
    for (TokenTypeId t : fingerprints_[p].pattern) {
      const std::uint32_t c = symbol_of_[t];
      if (delta_[s * alphabet_ + c] == 0) {
        delta_[s * alphabet_ + c] = static_cast<std::uint32_t>(state_count_++);
        delta_.resize(state_count_ * alphabet_, 0);
        output_head_.push_back(-1);
      }
      s = delta_[s * alphabet_ + c];
    }
    output_next_[p] = output_head_[s];
    output_head_[s] = static_cast<std::int32_t>(p);
  }

  std::vector<std::uint32_t> fail(state_count_, 0);
  dict_link_.assign(state_count_, 0);
  std::deque<std::uint32_t> queue;
  for (std::size_t c = 0; c < alphabet_; ++c) {
    if (const std::uint32_t child = delta_[c]; child != 0) queue.push_back(child);
  }
  while (!queue.empty()) {
    const std::uint32_t s = queue.front();
    queue.pop_front();
    const std::uint32_t f = fail[s];
    dict_link_[s] = output_head_[f] >= 0 ? f : dict_link_[f];
    for (std::size_t c = 0; c < alphabet_; ++c) {
      std::uint32_t& edge = delta_[s * alphabet_ + c];
      if (edge != 0) {
        fail[edge] = delta_[f * alphabet_ + c];
        queue.push_back(edge);
      } else {
        edge = delta_[f * alphabet_ + c];
      }
    }
  }
}

template <typename OnMatch>
void BundlerMatcher::scan(std::span<const TokenTypeId> tokens, OnMatch&& on_match) const {
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const TokenTypeId t = tokens[i];
    const std::uint32_t c = t < symbol_of_.size() ? symbol_of_[t] : 0;
    s = delta_[s * alphabet_ + c];
    for (std::uint32_t o = output_head_[s] >= 0 ? s : dict_link_[s]; o != 0; o = dict_link_[o]) {
      for (std::int32_t p = output_head_[o]; p >= 0; p = output_next_[p]) on_match(static_cast<std::size_t>(p), i + 1);
    }
  }
}

std::vector<BundlerMatcher::Match> BundlerMatcher::find_all(std::span<const TokenTypeId> tokens) const {
  std::vector<Match> out;
  scan(tokens, [&](std::size_t p, std::size_t end) { out.push_back({p, end}); });
  std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) {
    return a.end != b.end ? a.end < b.end : a.pattern < b.pattern;
  });
  return out;
}

std::set<std::string> BundlerMatcher::identify(std::span<const TokenTypeId> tokens) const {
  std::vector<bool> hit(fingerprints_.size(), false);
  scan(tokens, [&](std::size_t p, std::size_t) { hit[p] = true; });
  std::set<std::string> out;
  for (std::size_t p = 0; p < hit.size(); ++p) {
    if (hit[p]) out.insert(fingerprints_[p].bundler);
  }
  return out;
}

std::set<std::string> identify_bundler(const TokenString& tokens, const std::vector<BundlerFingerprint>& fingerprints) {
  return BundlerMatcher(fingerprints).identify(tokens.tokens);
}

namespace {

bool is_function_value(const js::Node* n) {
  return n != nullptr &&
         (n->type == js::NodeType::FunctionExpression || n->type == js::NodeType::ArrowFunctionExpression);
}

/// Browserify and Parcel 1 pair each module function with its dependency map.
const js::Node* module_function(const js::Node* n) {
  if (is_function_value(n)) return n;
  if (n != nullptr && n->type == js::NodeType::ArrayExpression && n->kids.size() == 2 &&
      is_function_value(n->kids[0]) && n->kids[1] != nullptr && n->kids[1]->type == js::NodeType::ObjectExpression) {
    return n->kids[0];
  }
  return nullptr;
}

/// (entry key, value) pairs of a candidate module map.
std::vector<std::pair<std::string, const js::Node*>> map_entries(const js::Node* n) {
  std::vector<std::pair<std::string, const js::Node*>> out;
  if (n->type == js::NodeType::ArrayExpression) {
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      if (n->kids[i] != nullptr) out.emplace_back(std::to_string(i), n->kids[i]);
    }
  } else if (n->type == js::NodeType::ObjectExpression) {
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      const js::Node* p = n->kids[i];
      if (p->type != js::NodeType::Property || p->prop_kind() != js::PropKind::kInit) {
        out.emplace_back("#" + std::to_string(i), nullptr);
        continue;
      }
      // Module ids are numeric or string literals; identifier keys mark
      // ordinary method tables.
      const js::Node* key = p->kids[0];
      if (p->has(js::flag::kComputed) || key->type != js::NodeType::Literal ||
          (key->literal_kind() != js::LiteralKind::kNumber && key->literal_kind() != js::LiteralKind::kString)) {
        out.emplace_back("#" + std::to_string(i), nullptr);
        continue;
      }
      out.emplace_back(key->literal_kind() == js::LiteralKind::kNumber ? js::format_number(key->number) : key->text,
                       p->kids[1]);
    }
  }
  return out;
}

bool is_module_map(const std::vector<std::pair<std::string, const js::Node*>>& entries, std::size_t total_nodes) {
  if (entries.size() < 2) return false;
  std::size_t functions = 0;
  std::size_t covered = 0;
  for (const auto& e : entries) {
    if (const js::Node* fn = module_function(e.second)) {
      ++functions;
      covered += js::count_nodes(fn);
    }
  }
  return functions * 5 >= entries.size() * 4 && covered * 2 >= total_nodes;
}

/// Shallowest module map; ties go to the first in source order.
const js::Node* find_module_map(const js::Node* root) {
  const std::size_t total = js::count_nodes(root);
  std::deque<const js::Node*> level{root};
  while (!level.empty()) {
    const js::Node* n = level.front();
    level.pop_front();
    if (n->type == js::NodeType::ArrayExpression || n->type == js::NodeType::ObjectExpression) {
      if (is_module_map(map_entries(n), total)) return n;
    }
    for (const js::Node* k : n->kids) {
      if (k != nullptr) level.push_back(k);
    }
  }
  return nullptr;
}

}  // namespace

BundleAnalysis analyze_bundle(std::string_view source, const FingerprintParams& params,
                              const NormalizationConfig& normalization, const TokenVocabulary& vocabulary,
                              const BundlerMatcher* matcher) {
  params.validate();
  if (source.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos) {
    throw Error(ErrorCode::kEmptyInput, "empty input");
  }
  BundleAnalysis out;
  js::ParsedDocument doc = normalize_document(source, normalization, &out.warnings);

  const js::Node* map = find_module_map(doc.ast.root);
  std::vector<std::pair<std::string, const js::Node*>> entries;
  if (map != nullptr) {
    for (auto& e : map_entries(map)) {
      if (const js::Node* fn = module_function(e.second)) entries.emplace_back(std::move(e.first), fn);
    }
  }
  std::unordered_map<const js::Node*, std::size_t> slot;
  for (std::size_t i = 0; i < entries.size(); ++i) slot.emplace(entries[i].second, i);
  std::vector<std::pair<std::size_t, std::size_t>> ranges(entries.size());
  out.tokens.tokens = flatten_with_ranges(
      doc.ast.root, vocabulary, [&](const js::Node& n) { return slot.count(&n) != 0; },
      [&](const js::Node& n, std::size_t b, std::size_t e) { ranges[slot.at(&n)] = {b, e}; });
  out.fingerprints = fingerprint(out.tokens, params);

  for (std::size_t i = 0; i < entries.size(); ++i) {
    Compartment c;
    c.key = entries[i].first;
    c.token_begin = ranges[i].first;
    c.token_end = ranges[i].second;
    const std::size_t span = c.token_end - c.token_begin;
    c.fingerprints = span >= params.k ? out.fingerprints.slice(c.token_begin, c.token_end - params.k + 1)
                                      : FingerprintSet::from_hashes(params, {});
    if (matcher != nullptr) {
      c.nested_bundlers = matcher->identify(std::span(out.tokens.tokens).subspan(c.token_begin, span));
      c.nested = !c.nested_bundlers.empty();
    }
    out.compartments.push_back(std::move(c));
  }
  if (matcher != nullptr) out.bundlers = matcher->identify(out.tokens.tokens);
  return out;
}

std::vector<Compartment> extract_compartments(std::string_view source, const FingerprintParams& params,
                                              const NormalizationConfig& normalization) {
  return analyze_bundle(source, params, normalization).compartments;
}

}  // namespace sleuth

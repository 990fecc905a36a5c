#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "sleuth/artifact_selector.hpp"
#include "sleuth/bundle_analyzer.hpp"
#include "sleuth/digest.hpp"
#include "sleuth/error.hpp"
#include "sleuth/ground_truth.hpp"
#include "sleuth/metrics.hpp"
#include "sleuth/package_index.hpp"
#include "sleuth/version_detector.hpp"

namespace sleuth::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kManifestSchema = "bundlesleuth-run/1";
constexpr const char* kAuditSchema = "bundlesleuth-audit/1";
constexpr const char* kEvaluationSchema = "bundlesleuth-evaluation/1";

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
}

std::string error_name(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return std::string(error_code_name(err->code()));
  return "Error";
}

json error_json(const std::exception& e) { return {{"code", error_name(e)}, {"message", e.what()}}; }

std::vector<std::string> split_list(std::string_view text, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    std::string item(text.substr(start, end - start));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream ss{std::string(text)};
  for (std::string w; ss >> w;) out.push_back(w);
  return out;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  for (unsigned t = 0; t < count; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> configs;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, std::string>> outputs;
  std::map<std::string, double> timings;
  int exit_code = 0;

  void input_file(const std::string& path) {
    try {
      inputs.emplace_back(path, to_hex(digest_of(read_file(path))));
    } catch (const Error&) {
      inputs.emplace_back(path, "");
    }
  }

  json to_json() const {
    json in = json::array();
    for (const auto& [p, d] : inputs) in.push_back({{"path", p}, {"digest", d}});
    json out_list = json::array();
    for (const auto& [p, d] : outputs) out_list.push_back({{"path", p}, {"digest", d}});
    return {{"schema", kManifestSchema}, {"command", command},       {"tool_version", SLEUTH_VERSION},
            {"configs", configs},        {"inputs", in},             {"outputs", out_list},
            {"timings", timings},        {"exit_code", exit_code}};
  }
};

struct Session {
  std::ostringstream out;
  std::ostream& err;
  RunManifest manifest;
};

// Options shared by commands that fingerprint JavaScript.
struct PipelineOptions {
  std::uint32_t k = 27;
  std::uint32_t w = 15;
  std::string hash_fn{kHashMixedPoly31};
  std::string passes = "default";
  std::string minifier;
  std::string vocabulary{kStandardVocabularyVersion};

  void add_to(CLI::App* cmd) {
    cmd->add_option("--k", k, "k-gram length")->capture_default_str();
    cmd->add_option("--w", w, "winnowing window")->capture_default_str();
    cmd->add_option("--hash", hash_fn, "hash function version")->capture_default_str();
    cmd->add_option("--passes", passes, "normalizer passes: default, none, or a comma list")
        ->capture_default_str();
    cmd->add_option("--minifier", minifier, "external minifier command line (stdin to stdout)");
    cmd->add_option("--vocabulary", vocabulary, "token vocabulary version")->capture_default_str();
  }

  FingerprintParams params() const {
    FingerprintParams p{k, w, hash_fn};
    p.validate();
    return p;
  }

  NormalizationConfig normalization() const {
    NormalizationConfig n;
    if (passes == "none") {
      n = NormalizationConfig::none();
    } else if (passes != "default") {
      n.passes = split_list(passes);
    }
    if (!minifier.empty()) {
      auto words = split_words(minifier);
      n.external_minifier = ExternalMinifier{words.front(), {words.begin() + 1, words.end()}};
    }
    n.validate();
    return n;
  }
};

std::optional<fs::path> env_path(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return fs::path(value);
}

std::uint64_t default_created() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    return std::strtoull(epoch, nullptr, 10);
  }
  return 0;
}

// ---------------------------------------------------------------- index build

struct ArtifactEntry {
  std::string name;
  std::string version;
  fs::path path;
};

std::vector<ArtifactEntry> parse_artifact_list(const fs::path& list_path) {
  std::istringstream in(read_file(list_path));
  std::vector<ArtifactEntry> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash == 0) continue;
    std::istringstream fields(line);
    ArtifactEntry e;
    if (!(fields >> e.name)) continue;
    std::string rest;
    if (!(fields >> e.version) || !std::getline(fields >> std::ws, rest) || rest.empty()) {
      throw Error(ErrorCode::kFormatError, list_path.string() + ":" + std::to_string(line_no) +
                                               ": expected \"<name> <version> <path>\"");
    }
    rest.erase(rest.find_last_not_of(" \t\r") + 1);
    e.path = fs::path(rest).is_relative() ? list_path.parent_path() / rest : fs::path(rest);
    out.push_back(std::move(e));
  }
  return out;
}

bool is_tarball(const fs::path& p) {
  const std::string s = p.filename().string();
  auto ends = [&](std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return fs::is_regular_file(p) && (ends(".tgz") || ends(".tar.gz"));
}

struct ScratchDir {
  fs::path path;
  ScratchDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("bundlesleuth-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int cmd_index_build(Session& s, const fs::path& list, const fs::path& out_path, const std::string& format,
                    const PipelineOptions& opts, unsigned jobs, std::optional<std::uint64_t> created) {
  const auto params = opts.params();
  const auto normalization = opts.normalization();
  const auto& vocabulary = TokenVocabulary::by_version(opts.vocabulary);
  s.manifest.input_file(list.string());
  s.manifest.configs["fingerprint"] = params.describe();
  s.manifest.configs["normalization"] = normalization.digest_hex();

  const auto entries = parse_artifact_list(list);
  std::vector<std::optional<BuildResult>> built(entries.size());
  std::vector<std::string> failures(entries.size());
  const auto start = Clock::now();
  parallel_for(entries.size(), jobs, [&](std::size_t i) {
    const auto& e = entries[i];
    try {
      if (is_tarball(e.path)) {
        ScratchDir scratch;
        unpack_tarball(e.path, scratch.path);
        built[i] = build_record(scratch.path, e.name, e.version, params, normalization, vocabulary);
      } else {
        built[i] = build_record(e.path, e.name, e.version, params, normalization, vocabulary);
      }
    } catch (const std::exception& ex) {
      failures[i] = error_name(ex) + ": " + ex.what();
    }
  });
  s.manifest.timings["build_seconds"] = seconds_since(start);

  PackageIndex index(params, normalization, std::string(vocabulary.version()));
  index.set_created(created.value_or(default_created()));
  std::size_t failed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (built[i]) {
      for (const auto& w : built[i]->warnings) s.err << "warning: " << e.name << "@" << e.version << ": " << w << "\n";
      try {
        const auto& rec = index.add(std::move(built[i]->record));
        s.manifest.inputs.emplace_back(e.path.string(), to_hex(rec.file_manifest_digest));
        continue;
      } catch (const std::exception& ex) {
        failures[i] = error_name(ex) + ": " + ex.what();
      }
    }
    ++failed;
    s.err << "error: " << e.name << "@" << e.version << " (" << e.path.string() << "): " << failures[i] << "\n";
  }
  if (index.records().empty()) {
    s.err << "error: no records built; index not written\n";
    return kExitFatal;
  }
  const auto fmt = format == "json" ? IndexFormat::kJson : IndexFormat::kBinary;
  index.save(out_path, fmt);
  s.manifest.outputs.emplace_back(out_path.string(), to_hex(index.content_digest()));
  s.out << "indexed " << index.records().size() << " of " << entries.size() << " artifacts into "
        << out_path.string() << "\n";
  if (failed) s.err << failed << " artifact(s) failed\n";
  return kExitOk;
}

int cmd_index_verify(Session& s, const fs::path& path, bool as_json) {
  s.manifest.input_file(path.string());
  PackageIndex index;
  try {
    index = PackageIndex::load(path, IndexLoadOptions{false});
  } catch (const std::exception& e) {
    s.err << "error: " << error_name(e) << ": " << e.what() << "\n";
    return kExitFatal;
  }
  const auto findings = index.verify();
  if (as_json) {
    s.out << json{{"index", path.string()}, {"records", index.records().size()}, {"findings", findings}}.dump()
          << "\n";
  } else {
    for (const auto& f : findings) s.out << "finding: " << f << "\n";
    s.out << (findings.empty() ? "ok" : "corrupt") << ": " << index.records().size() << " records, "
          << findings.size() << " finding(s)\n";
  }
  return findings.empty() ? kExitOk : kExitInputFailure;
}

int cmd_index_info(Session& s, const fs::path& path) {
  s.manifest.input_file(path.string());
  const auto index = PackageIndex::load(path);
  json records = json::array();
  for (const auto& r : index.records()) {
    records.push_back({{"name", r.name},
                       {"version", r.version},
                       {"strategy", strategy_name(r.selection_strategy)},
                       {"files", r.files.size()},
                       {"tokens", r.token_count},
                       {"fingerprints", r.fingerprints.size()}});
  }
  s.out << json{{"index", path.string()},
                {"params", index.params().describe()},
                {"normalization", index.normalization().canonical()},
                {"vocabulary", index.vocabulary_version()},
                {"digest", to_hex(index.content_digest())},
                {"records", records}}
               .dump(1)
        << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- detect

std::optional<PackageIndex> load_index_or_report(Session& s, const std::string& index_arg) {
  std::optional<fs::path> path = index_arg.empty() ? env_path(kIndexEnv) : fs::path(index_arg);
  if (!path) {
    s.err << "error: no index given (use --index or set " << kIndexEnv << ")\n";
    return std::nullopt;
  }
  s.manifest.input_file(path->string());
  try {
    return PackageIndex::load(*path);
  } catch (const std::exception& e) {
    s.err << "error: cannot load index " << path->string() << ": " << error_name(e) << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

std::vector<BundlerFingerprint> fingerprints_or_default(const std::string& file, const TokenVocabulary& vocab) {
  if (file.empty()) return default_fingerprints();
  return load_fingerprint_file(file, vocab);
}

void print_report_text(std::ostream& out, const DetectionReport& r) {
  out << r.bundle_id << ": bundler=";
  if (r.bundler.empty()) out << "none";
  bool first = true;
  for (const auto& b : r.bundler) {
    out << (first ? "" : ",") << b;
    first = false;
  }
  out << ", " << r.detections.size() << " package(s)\n";
  for (const auto& d : r.detections) {
    out << "  " << d.package << " ";
    for (std::size_t i = 0; i < d.versions.size(); ++i) out << (i ? "|" : "") << d.versions[i];
    out << "  similarity=" << std::fixed << std::setprecision(3) << d.similarity << std::defaultfloat
        << " shared=" << d.shared;
    if (d.too_wide) out << " too-wide";
    out << "\n";
  }
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
}

int cmd_detect(Session& s, const std::vector<std::string>& bundles, const std::string& index_arg,
               const DetectionConfig& config, const std::vector<std::string>& packages, bool as_json,
               unsigned jobs, const std::string& fingerprint_file) {
  auto index = load_index_or_report(s, index_arg);
  if (!index) return kExitFatal;
  std::optional<VersionDetector> detector;
  try {
    detector.emplace(*index, config, fingerprints_or_default(fingerprint_file, index->vocabulary()));
  } catch (const std::exception& e) {
    s.err << "error: " << error_name(e) << ": " << e.what() << "\n";
    return kExitFatal;
  }
  s.manifest.configs["detection"] = config.digest_hex();
  s.manifest.configs["index"] = to_hex(index->content_digest());
  for (const auto& b : bundles) s.manifest.input_file(b);

  const std::vector<std::string>* filter = packages.empty() ? nullptr : &packages;
  std::vector<std::string> lines(bundles.size());
  std::vector<bool> failed(bundles.size(), false);
  const auto start = Clock::now();
  parallel_for(bundles.size(), jobs, [&](std::size_t i) {
    std::ostringstream line;
    try {
      const auto report = detector->detect(read_file(bundles[i]), filter, bundles[i]);
      if (as_json) {
        line << report.to_json().dump() << "\n";
      } else {
        print_report_text(line, report);
      }
    } catch (const std::exception& e) {
      failed[i] = true;
      if (as_json) {
        line << json{{"schema", kReportSchema}, {"bundle_id", bundles[i]}, {"error", error_json(e)}}.dump() << "\n";
      } else {
        line << bundles[i] << ": error: " << error_name(e) << ": " << e.what() << "\n";
      }
    }
    lines[i] = line.str();
  });
  s.manifest.timings["detect_seconds"] = seconds_since(start);
  for (const auto& l : lines) s.out << l;
  return std::find(failed.begin(), failed.end(), true) != failed.end() ? kExitInputFailure : kExitOk;
}

// ---------------------------------------------------------------- bundler-id

int cmd_bundler_id(Session& s, const std::vector<std::string>& scripts, const std::string& fingerprint_file,
                   const PipelineOptions& opts, bool as_json) {
  const auto& vocabulary = TokenVocabulary::by_version(opts.vocabulary);
  const auto normalization = opts.normalization();
  std::vector<BundlerFingerprint> fps;
  try {
    fps = fingerprints_or_default(fingerprint_file, vocabulary);
  } catch (const std::exception& e) {
    s.err << "error: " << error_name(e) << ": " << e.what() << "\n";
    return kExitFatal;
  }
  if (!fingerprint_file.empty()) s.manifest.input_file(fingerprint_file);
  const BundlerMatcher matcher(fps);
  int code = kExitOk;
  for (const auto& script : scripts) {
    s.manifest.input_file(script);
    std::string result;
    std::set<std::string> names;
    try {
      const auto tokens = normalize_tokens(read_file(script), normalization, vocabulary, script);
      names = matcher.identify(tokens.tokens);
      result = names.empty() ? "none" : names.size() == 1 ? *names.begin() : "ambiguous";
    } catch (const std::exception& e) {
      code = kExitInputFailure;
      if (as_json) {
        s.out << json{{"script", script}, {"error", error_json(e)}}.dump() << "\n";
      } else {
        s.out << script << "\terror: " << error_name(e) << ": " << e.what() << "\n";
      }
      continue;
    }
    if (as_json) {
      s.out << json{{"script", script}, {"result", result}, {"bundlers", names}}.dump() << "\n";
      continue;
    }
    if (scripts.size() > 1) s.out << script << "\t";
    s.out << result;
    if (names.size() > 1) {
      s.out << ":";
      for (const auto& n : names) s.out << " " << n;
    }
    s.out << "\n";
  }
  return code;
}

// ---------------------------------------------------------------- fingerprints

int cmd_fingerprints_derive(Session& s, const fs::path& dir, const std::string& out_path,
                            const PipelineOptions& opts) {
  const auto& vocabulary = TokenVocabulary::by_version(opts.vocabulary);
  const auto fps = derive_fingerprints_from_dir(dir, opts.normalization(), vocabulary);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".js") s.manifest.input_file(entry.path().string());
  }
  std::sort(s.manifest.inputs.begin(), s.manifest.inputs.end());
  if (out_path.empty()) {
    s.out << fingerprints_to_json(fps, vocabulary).dump(1) << "\n";
  } else {
    save_fingerprint_file(out_path, fps, vocabulary);
    s.manifest.input_file(out_path);
    s.manifest.outputs.push_back(s.manifest.inputs.back());
    s.manifest.inputs.pop_back();
    s.out << "derived " << fps.size() << " pattern(s) into " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_fingerprints_list(Session& s, const std::string& file, const PipelineOptions& opts) {
  const auto& vocabulary = TokenVocabulary::by_version(opts.vocabulary);
  const auto fps = fingerprints_or_default(file, vocabulary);
  for (const auto& fp : fps) {
    s.out << fp.bundler << "\t" << fp.pattern.size() << " tokens\t" << fp.fingerprint_source << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- groundtruth

SourceMapSummary load_source_map(const fs::path& path) {
  const std::string bytes = read_file(path);
  const auto first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (bytes[first] == '{' || bytes.compare(first, 4, ")]}'") == 0)) {
    return parse_source_map(bytes);
  }
  const auto url = source_mapping_url(bytes);
  if (!url) throw Error(ErrorCode::kFormatError, "no source map and no sourceMappingURL comment");
  if (url->rfind("data:", 0) == 0) return parse_source_map_data_uri(*url);
  if (url->find("://") != std::string::npos) {
    throw Error(ErrorCode::kFormatError, "remote source maps are not fetched: " + *url);
  }
  return parse_source_map(read_file(path.parent_path() / url->substr(0, url->find_first_of("?#"))));
}

int cmd_groundtruth(Session& s, const std::vector<std::string>& paths) {
  int code = kExitOk;
  for (const auto& p : paths) {
    s.manifest.input_file(p);
    try {
      const auto summary = load_source_map(p);
      std::vector<std::string> warnings;
      const auto entries = extract_ground_truth(summary, &warnings);
      json list = json::array();
      for (const auto& e : entries) {
        list.push_back({{"package", e.package},
                        {"version", e.version ? json(e.version->to_string()) : json(nullptr)},
                        {"evidence", evidence_name(e.evidence)}});
      }
      s.out << json{{"source_map", p},
                    {"sources", summary.sources.size()},
                    {"has_inline_content", summary.has_inline_content},
                    {"packages", list},
                    {"warnings", warnings}}
                   .dump()
            << "\n";
    } catch (const std::exception& e) {
      code = kExitInputFailure;
      s.out << json{{"source_map", p}, {"error", error_json(e)}}.dump() << "\n";
    }
  }
  return code;
}

// ---------------------------------------------------------------- cdn

int cmd_cdn(Session& s, const std::vector<std::string>& urls, bool as_json) {
  for (const auto& url : urls) {
    const auto info = parse_cdn_url(url);
    std::string version = info.kind == VersionSpecKind::kFixed ? info.fixed->to_string() : info.alias;
    if (as_json) {
      s.out << json{{"url", url},
                    {"provider", provider_name(info.provider)},
                    {"package", info.package ? json(*info.package) : json(nullptr)},
                    {"version_spec", version_spec_name(info.kind)},
                    {"version", info.kind == VersionSpecKind::kNone ? json(nullptr) : json(version)},
                    {"file", info.file}}
                   .dump()
            << "\n";
    } else {
      s.out << url << "\t" << provider_name(info.provider) << "\t" << info.package.value_or("-") << "\t"
            << version_spec_name(info.kind);
      if (info.kind != VersionSpecKind::kNone) s.out << "\t" << (version.empty() ? "(omitted)" : version);
      s.out << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- audit / evaluate

std::vector<json> read_ndjson(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<json> out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kFormatError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<AuditDetection> audit_detections(const std::vector<json>& reports, std::vector<std::string>& warnings) {
  std::vector<AuditDetection> out;
  for (const auto& doc : reports) {
    if (doc.contains("error")) continue;
    const auto report = DetectionReport::from_json(doc);
    const std::string domain = doc.value("domain", report.bundle_id);
    for (const auto& d : report.detections) {
      AuditDetection a{domain, d.package, {}, d.too_wide};
      for (const auto& v : d.versions) {
        if (auto sv = try_parse_semver(v)) {
          a.versions.push_back(std::move(*sv));
        } else {
          warnings.push_back(domain + ": " + d.package + "@" + v + " is not SemVer; ignored");
        }
      }
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<AuditMode> modes_of(const std::string& mode) {
  if (mode == "every") return {AuditMode::kAny, AuditMode::kAll, AuditMode::kUnder, AuditMode::kOver};
  for (auto m : {AuditMode::kAny, AuditMode::kAll, AuditMode::kUnder, AuditMode::kOver}) {
    if (audit_mode_name(m) == mode) return {m};
  }
  throw Error(ErrorCode::kConfigMismatch, "unknown audit mode: " + mode);
}

struct AuditArgs {
  std::string reports;
  std::string advisories;
  std::string observations;
  std::string releases;
  std::string mode = "every";
  std::size_t max_width = 3;
  std::vector<std::int64_t> horizons = kDefaultHorizons;
  std::string format = "json";
  std::string table = "packages";
};

int cmd_audit(Session& s, const AuditArgs& a) {
  std::vector<std::string> warnings;
  std::vector<AuditResult> results;
  if (!a.reports.empty()) {
    s.manifest.input_file(a.reports);
    const auto detections = audit_detections(read_ndjson(a.reports), warnings);
    std::vector<Advisory> advisories;
    if (!a.advisories.empty()) {
      s.manifest.input_file(a.advisories);
      advisories = parse_advisories(json::parse(read_file(a.advisories)));
    }
    for (auto mode : modes_of(a.mode)) results.push_back(audit(detections, advisories, mode, {a.max_width}));
  }
  std::optional<RolloutResult> rollout;
  std::vector<HorizonFractions> fractions;
  if (!a.observations.empty()) {
    s.manifest.input_file(a.observations);
    const auto observations = parse_observations(read_file(a.observations));
    ReleaseDates releases;
    if (!a.releases.empty()) {
      s.manifest.input_file(a.releases);
      releases = parse_release_dates(json::parse(read_file(a.releases)));
    }
    rollout = rollout_times(observations, releases);
    const auto universe = RolloutUniverse::of(observations);
    fractions = rollout_fractions(rollout->rows, a.horizons, &universe);
    warnings.insert(warnings.end(), rollout->warnings.begin(), rollout->warnings.end());
  }
  for (const auto& w : warnings) s.err << "warning: " << w << "\n";

  if (a.format == "csv") {
    if (a.table == "packages") {
      s.out << "mode,package,instances,vulnerable,advisories\n";
      for (const auto& r : results) {
        for (const auto& [name, t] : r.packages) {
          std::string ids;
          for (const auto& id : t.advisories) ids += (ids.empty() ? "" : ";") + id;
          s.out << audit_mode_name(r.mode) << "," << csv_field(name) << "," << t.instances << "," << t.vulnerable
                << "," << csv_field(ids) << "\n";
        }
      }
    } else if (a.table == "domains") {
      s.out << "mode,domain,vulnerable_packages\n";
      for (const auto& r : results) {
        for (const auto& [domain, n] : r.vulnerable_per_domain) {
          s.out << audit_mode_name(r.mode) << "," << csv_field(domain) << "," << n << "\n";
        }
      }
    } else if (a.table == "rollout") {
      s.out << "domain,package,version,rollout_days\n";
      if (rollout) {
        for (const auto& r : rollout->rows) {
          s.out << csv_field(r.domain) << "," << csv_field(r.package) << "," << r.version.to_string() << ","
                << r.rollout_days << "\n";
        }
      }
    } else if (a.table == "fractions") {
      s.out << "horizon_days,packages,instances,domains\n";
      for (const auto& f : fractions) {
        s.out << f.horizon_days << "," << f.packages << "," << f.instances << "," << f.domains << "\n";
      }
    } else {
      throw Error(ErrorCode::kConfigMismatch, "unknown table: " + a.table);
    }
    return kExitOk;
  }

  json doc = {{"schema", kAuditSchema}, {"warnings", warnings}};
  json audits = json::array();
  for (const auto& r : results) audits.push_back(audit_to_json(r));
  doc["audit"] = audits;
  if (rollout) {
    json rows = json::array();
    for (const auto& r : rollout->rows) {
      rows.push_back({{"domain", r.domain},
                      {"package", r.package},
                      {"version", r.version.to_string()},
                      {"rollout_days", r.rollout_days}});
    }
    json fr = json::array();
    for (const auto& f : fractions) {
      fr.push_back({{"horizon_days", f.horizon_days},
                    {"packages", f.packages},
                    {"instances", f.instances},
                    {"domains", f.domains}});
    }
    doc["rollout"] = {{"rows", rows}, {"downgrades", rollout->downgrades}, {"fractions", fr}};
  }
  s.out << doc.dump(1) << "\n";
  return kExitOk;
}

int cmd_evaluate(Session& s, const std::string& reports_path, const std::string& truth_path,
                 const std::string& format) {
  s.manifest.input_file(reports_path);
  s.manifest.input_file(truth_path);
  std::map<std::string, DetectionReport> reports;
  for (const auto& doc : read_ndjson(reports_path)) {
    if (doc.contains("error")) continue;
    auto r = DetectionReport::from_json(doc);
    reports[r.bundle_id] = std::move(r);
  }
  std::vector<VersionDelta> deltas;
  std::size_t missed = 0;
  std::ostringstream csv;
  csv << "bundle_id,package,correct,detected,d_major,d_minor,d_patch,major_err,minor_err,patch_err\n";
  for (const auto& t : read_ndjson(truth_path)) {
    const std::string bundle = t.at("bundle_id").get<std::string>();
    const std::string package = t.at("package").get<std::string>();
    const SemVer correct = parse_semver(t.at("version").get<std::string>());
    const auto report = reports.find(bundle);
    const PackageDetection* det = report == reports.end() ? nullptr : report->second.find(package);
    std::vector<SemVer> detected;
    std::string detected_text;
    if (det) {
      for (const auto& v : det->versions) {
        if (auto sv = try_parse_semver(v)) detected.push_back(*sv);
        detected_text += (detected_text.empty() ? "" : "|") + v;
      }
    }
    csv << csv_field(bundle) << "," << csv_field(package) << "," << correct.to_string() << ","
        << csv_field(detected_text);
    if (detected.empty()) {
      ++missed;
      csv << ",,,,,,\n";
      continue;
    }
    const auto d = version_difference(correct, detected);
    const auto e = existence_of(d);
    deltas.push_back(d);
    csv << "," << d.d_major << "," << d.d_minor << "," << d.d_patch << "," << e.major_err << "," << e.minor_err
        << "," << e.patch_err << "\n";
  }
  if (format == "csv") {
    s.out << csv.str();
    return kExitOk;
  }
  const auto st = summarize_deltas(deltas);
  const double n = static_cast<double>(st.count);
  auto component = [](const ComponentStats& c) { return json{{"mean", c.mean}, {"median", c.median}}; };
  s.out << json{{"schema", kEvaluationSchema},
                {"evaluated", st.count},
                {"missed", missed},
                {"accuracy",
                 {{"major", st.count ? 1.0 - static_cast<double>(st.major_errors) / n : 0.0},
                  {"minor", st.count ? 1.0 - static_cast<double>(st.minor_errors) / n : 0.0},
                  {"patch", st.count ? 1.0 - static_cast<double>(st.patch_errors) / n : 0.0}}},
                {"error",
                 {{"major", component(st.major)}, {"minor", component(st.minor)}, {"patch", component(st.patch)}}}}
                   .dump(1)
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench

int cmd_bench(Session& s, const fs::path& bundle, const PipelineOptions& opts, unsigned repeat, bool as_json,
              double index_budget, double pair_budget) {
  s.manifest.input_file(bundle.string());
  std::string source;
  try {
    source = read_file(bundle);
  } catch (const std::exception& e) {
    s.err << "error: " << e.what() << "\n";
    return kExitInputFailure;
  }
  if (source.find_first_not_of(" \t\r\n") == std::string::npos) {
    s.err << "error: " << bundle.string() << " is empty\n";
    return kExitInputFailure;
  }
  const auto params = opts.params();
  const auto normalization = opts.normalization();
  const auto& vocabulary = TokenVocabulary::by_version(opts.vocabulary);

  std::vector<double> index_times;
  FingerprintSet fps;
  std::size_t tokens = 0;
  try {
    for (unsigned i = 0; i < repeat; ++i) {
      const auto start = Clock::now();
      const auto ts = normalize_tokens(source, normalization, vocabulary, bundle.string());
      fps = fingerprint(ts, params);
      index_times.push_back(seconds_since(start));
      tokens = ts.size();
    }
  } catch (const std::exception& e) {
    s.err << "error: " << error_name(e) << ": " << e.what() << "\n";
    return kExitInputFailure;
  }

  PackageIndex index(params, normalization, std::string(vocabulary.version()));
  PackageVersionRecord rec;
  rec.name = "bench";
  rec.version = "1.0.0";
  rec.fingerprints = fps;
  rec.token_count = tokens;
  index.add(std::move(rec));
  const auto analysis = analyze_bundle(source, params, normalization, vocabulary);
  const VersionDetector detector(index, DetectionConfig{});
  const auto start = Clock::now();
  const auto report = detector.detect(analysis, nullptr, bundle.string());
  const double pair_time = seconds_since(start);
  const double worst_index = *std::max_element(index_times.begin(), index_times.end());
  s.manifest.timings["pair_seconds"] = pair_time;
  s.manifest.timings["index_seconds_max"] = worst_index;

  auto status = [](double t, double budget) {
    return t <= budget ? "within" : t <= 2 * budget ? "over" : "regression-alarm";
  };
  if (as_json) {
    s.out << json{{"bundle", bundle.string()},
                  {"bytes", source.size()},
                  {"tokens", tokens},
                  {"fingerprints", fps.size()},
                  {"index_seconds", index_times},
                  {"pair_seconds", pair_time},
                  {"similarity", report.detections.empty() ? 0.0 : report.detections.front().similarity},
                  {"index_budget", {{"seconds", index_budget}, {"status", status(worst_index, index_budget)}}},
                  {"pair_budget", {{"seconds", pair_budget}, {"status", status(pair_time, pair_budget)}}}}
                     .dump()
              << "\n";
  } else {
    s.out << "bundle: " << bundle.string() << " (" << source.size() << " bytes, " << tokens << " tokens, "
          << fps.size() << " fingerprints)\n";
    for (std::size_t i = 0; i < index_times.size(); ++i) {
      s.out << "index run " << (i + 1) << ": " << std::fixed << std::setprecision(4) << index_times[i] << " s\n";
    }
    s.out << "pair report: " << pair_time << " s\n" << std::defaultfloat;
    s.out << "index budget " << index_budget << " s: " << status(worst_index, index_budget) << "\n";
    s.out << "pair budget " << pair_budget << " s: " << status(pair_time, pair_budget) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detect npm package versions in JavaScript bundles", "bundlesleuth"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", SLEUTH_VERSION);
  std::string manifest_path;
  unsigned jobs = 1;
  app.add_option("--manifest", manifest_path, "write the run manifest here (default: $" +
                                                  std::string(kManifestEnv) + ", else stderr)");
  app.add_option("-j,--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

  Session s{{}, err, {}};
  std::function<int()> action;
  PipelineOptions pipeline;

  // index
  auto* index_cmd = app.add_subcommand("index", "build, verify or inspect package indexes");
  index_cmd->require_subcommand(1);
  std::string list_file, index_out, index_format = "binary";
  std::optional<std::uint64_t> created;
  auto* build = index_cmd->add_subcommand("build", "index the artifacts named in a list file");
  build->add_option("list", list_file, "lines of \"<name> <version> <artifact dir or .tgz>\"")->required();
  build->add_option("-o,--output", index_out, "index path")->required();
  build->add_option("--format", index_format, "binary or json")
      ->check(CLI::IsMember({"binary", "json"}))
      ->capture_default_str();
  build->add_option("--created", created, "creation timestamp (default: $SOURCE_DATE_EPOCH, else 0)");
  pipeline.add_to(build);
  build->callback([&] {
    action = [&] { return cmd_index_build(s, list_file, index_out, index_format, pipeline, jobs, created); };
  });

  std::string index_path;
  bool as_json = false;
  auto* verify = index_cmd->add_subcommand("verify", "check an index for corruption");
  verify->add_option("index", index_path)->required();
  verify->add_flag("--json", as_json);
  verify->callback([&] { action = [&] { return cmd_index_verify(s, index_path, as_json); }; });
  auto* info = index_cmd->add_subcommand("info", "describe an index as JSON");
  info->add_option("index", index_path)->required();
  info->callback([&] { action = [&] { return cmd_index_info(s, index_path); }; });

  // detect
  std::vector<std::string> inputs;
  std::vector<std::string> packages;
  std::string fingerprint_file;
  DetectionConfig config;
  std::size_t max_width = 0;
  auto* detect_cmd = app.add_subcommand("detect", "detect package versions in bundles");
  detect_cmd->add_option("bundles", inputs)->required();
  detect_cmd->add_option("-i,--index", index_path, "index path (default: $" + std::string(kIndexEnv) + ")");
  detect_cmd->add_flag("--compartments", config.use_compartments, "score module-map compartments");
  detect_cmd->add_option("--threshold", config.relative_threshold, "relative similarity threshold")
      ->capture_default_str();
  detect_cmd->add_option("--min-shared", config.min_shared, "presence gate")->capture_default_str();
  detect_cmd->add_option("--max-width", max_width, "flag detections with more versions as too wide");
  detect_cmd->add_option("--packages", packages, "only consider these packages")->delimiter(',');
  detect_cmd->add_option("--fingerprints", fingerprint_file, "bundler fingerprint file");
  detect_cmd->add_flag("--json", as_json, "NDJSON reports");
  detect_cmd->callback([&] {
    action = [&] {
      if (max_width > 0) config.max_range_width = max_width;
      try {
        config.validate();
      } catch (const std::exception& e) {
        s.err << "error: " << e.what() << "\n";
        return kExitFatal;
      }
      return cmd_detect(s, inputs, index_path, config, packages, as_json, jobs, fingerprint_file);
    };
  });

  // bundler-id
  auto* bid = app.add_subcommand("bundler-id", "identify the bundler of scripts");
  bid->add_option("scripts", inputs)->required();
  bid->add_option("--fingerprints", fingerprint_file, "bundler fingerprint file (default: built-in)");
  bid->add_flag("--json", as_json);
  pipeline.add_to(bid);
  bid->callback([&] { action = [&] { return cmd_bundler_id(s, inputs, fingerprint_file, pipeline, as_json); }; });

  // fingerprints
  auto* fp_cmd = app.add_subcommand("fingerprints", "bundler fingerprint files");
  fp_cmd->require_subcommand(1);
  std::string preamble_dir, fp_out;
  auto* derive = fp_cmd->add_subcommand("derive", "derive patterns from preamble sources");
  derive->add_option("dir", preamble_dir)->required()->check(CLI::ExistingDirectory);
  derive->add_option("-o,--output", fp_out, "fingerprint file (default: stdout)");
  pipeline.add_to(derive);
  derive->callback([&] { action = [&] { return cmd_fingerprints_derive(s, preamble_dir, fp_out, pipeline); }; });
  auto* list = fp_cmd->add_subcommand("list", "list patterns");
  list->add_option("file", fingerprint_file, "fingerprint file (default: built-in)");
  pipeline.add_to(list);
  list->callback([&] { action = [&] { return cmd_fingerprints_list(s, fingerprint_file, pipeline); }; });

  // groundtruth
  auto* gt = app.add_subcommand("groundtruth", "package versions from source maps");
  gt->add_option("maps", inputs, "source map files, or scripts with a sourceMappingURL")->required();
  gt->callback([&] { action = [&] { return cmd_groundtruth(s, inputs); }; });

  // cdn
  auto* cdn = app.add_subcommand("cdn", "classify CDN URLs");
  cdn->add_option("urls", inputs)->required();
  cdn->add_flag("--json", as_json);
  cdn->callback([&] { action = [&] { return cmd_cdn(s, inputs, as_json); }; });

  // audit
  AuditArgs audit_args;
  auto* audit_cmd = app.add_subcommand("audit", "vulnerability prevalence and rollout metrics");
  audit_cmd->add_option("--reports", audit_args.reports, "NDJSON detection reports");
  audit_cmd->add_option("--advisories", audit_args.advisories, "advisory JSON list");
  audit_cmd->add_option("--observations", audit_args.observations, "NDJSON observations");
  audit_cmd->add_option("--releases", audit_args.releases, "release dates JSON");
  audit_cmd->add_option("--mode", audit_args.mode, "any, all, under, over or every")
      ->check(CLI::IsMember({"any", "all", "under", "over", "every"}))
      ->capture_default_str();
  audit_cmd->add_option("--max-width", audit_args.max_width, "discard wider detections (0: keep all)")
      ->capture_default_str();
  audit_cmd->add_option("--horizons", audit_args.horizons, "rollout horizons in days")->delimiter(',');
  audit_cmd->add_option("--format", audit_args.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  audit_cmd->add_option("--table", audit_args.table, "csv table: packages, domains, rollout, fractions")
      ->check(CLI::IsMember({"packages", "domains", "rollout", "fractions"}))
      ->capture_default_str();
  audit_cmd->callback([&] { action = [&] { return cmd_audit(s, audit_args); }; });

  // evaluate
  std::string reports_path, truth_path, eval_format = "json";
  auto* eval = app.add_subcommand("evaluate", "version difference against ground truth");
  eval->add_option("--reports", reports_path, "NDJSON detection reports")->required();
  eval->add_option("--truth", truth_path, "NDJSON {bundle_id, package, version}")->required();
  eval->add_option("--format", eval_format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  eval->callback([&] { action = [&] { return cmd_evaluate(s, reports_path, truth_path, eval_format); }; });

  // bench
  std::string bench_input;
  unsigned repeat = 3;
  double index_budget = 5.0, pair_budget = 0.1;
  auto* bench = app.add_subcommand("bench", "time indexing and one pairwise report");
  bench->add_option("bundle", bench_input)->required();
  bench->add_option("--repeat", repeat)->capture_default_str()->check(CLI::Range(1u, 100u));
  bench->add_option("--index-budget", index_budget, "seconds")->capture_default_str();
  bench->add_option("--pair-budget", pair_budget, "seconds")->capture_default_str();
  bench->add_flag("--json", as_json);
  pipeline.add_to(bench);
  bench->callback([&] {
    action = [&] { return cmd_bench(s, bench_input, pipeline, repeat, as_json, index_budget, pair_budget); };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? kExitOk : kExitFatal;
  }

  for (const CLI::App* sub = &app; sub != nullptr;) {
    const auto subs = sub->get_subcommands();
    if (subs.empty()) break;
    sub = subs.front();
    s.manifest.command += (s.manifest.command.empty() ? "" : " ") + sub->get_name();
  }
  const auto start = Clock::now();
  int code;
  try {
    code = action ? action() : kExitFatal;
  } catch (const std::exception& e) {
    err << "error: " << error_name(e) << ": " << e.what() << "\n";
    code = kExitFatal;
  }
  s.manifest.timings["wall_seconds"] = seconds_since(start);
  s.manifest.exit_code = code;

  const std::string stdout_bytes = s.out.str();
  out << stdout_bytes;
  out.flush();
  s.manifest.outputs.emplace_back("<stdout>", to_hex(digest_of(stdout_bytes)));

  std::optional<fs::path> dest = manifest_path.empty() ? env_path(kManifestEnv) : fs::path(manifest_path);
  const std::string manifest = s.manifest.to_json().dump();
  if (dest) {
    try {
      write_file(*dest, manifest + "\n");
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      if (code == kExitOk) code = kExitInputFailure;
    }
  } else {
    err << "run-manifest: " << manifest << "\n";
  }
  return code;
}

}  // namespace sleuth::cli

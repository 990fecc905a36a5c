#include "sleuth/ground_truth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <tuple>

#include "json.hpp"

#include "sleuth/digest.hpp"
#include "sleuth/error.hpp"

namespace sleuth {
namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const int hi = hex_value(s[i + 1]);
      const int lo = hex_value(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t slash = path.find('/', start);
    const std::size_t end = slash == std::string_view::npos ? path.size() : slash;
    if (end > start) parts.push_back(path.substr(start, end - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return parts;
}

std::string_view strip_query(std::string_view s) {
  const std::size_t cut = s.find_first_of("?#");
  return cut == std::string_view::npos ? s : s.substr(0, cut);
}

// Offset just past the last "node_modules/" that starts a path segment.
std::optional<std::size_t> after_last_node_modules(std::string_view path) {
  static constexpr std::string_view kNeedle = "node_modules/";
  std::size_t pos = path.rfind(kNeedle);
  while (pos != std::string_view::npos) {
    if (pos == 0 || path[pos - 1] == '/') return pos + kNeedle.size();
    pos = path.rfind(kNeedle, pos - 1);
  }
  return std::nullopt;
}

std::optional<std::string> package_at(std::string_view rest) {
  const auto parts = split_path(rest);
  if (parts.empty()) return std::nullopt;
  std::string_view first = parts[0];
  if (first.front() == '.') return std::nullopt;
  if (first.front() == '@') {
    if (first.size() < 2 || parts.size() < 2) return std::nullopt;
    return std::string(first) + "/" + std::string(parts[1]);
  }
  return std::string(first);
}

}  // namespace

SourceMapSummary parse_source_map(std::string_view bytes) {
  if (bytes.substr(0, 4) == ")]}'") {
    const std::size_t nl = bytes.find('\n');
    bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);
  }
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("source map is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kFormatError, "source map must be an object");
  const auto version = doc.find("version");
  if (version == doc.end() || !version->is_number_integer() || version->get<int>() != 3) {
    throw Error(ErrorCode::kFormatError, "source map version must be 3");
  }
  const auto sources = doc.find("sources");
  if (sources == doc.end() || !sources->is_array()) {
    throw Error(ErrorCode::kFormatError, "source map has no \"sources\" array");
  }
  SourceMapSummary out;
  for (const auto& s : *sources) {
    if (s.is_string()) out.sources.push_back(s.get<std::string>());
  }
  const auto content = doc.find("sourcesContent");
  if (content != doc.end() && content->is_array()) {
    out.has_inline_content = std::any_of(content->begin(), content->end(),
                                         [](const json& c) { return c.is_string(); });
  }
  return out;
}

SourceMapSummary parse_source_map_data_uri(std::string_view uri) {
  if (uri.substr(0, 5) != "data:") throw Error(ErrorCode::kFormatError, "not a data URI");
  const std::size_t comma = uri.find(',');
  if (comma == std::string_view::npos) throw Error(ErrorCode::kFormatError, "data URI has no payload");
  const std::string header = lower(uri.substr(5, comma - 5));
  const std::string_view payload = uri.substr(comma + 1);
  const bool is_base64 = header.size() >= 7 && header.compare(header.size() - 7, 7, ";base64") == 0;
  if (!is_base64) return parse_source_map(percent_decode(payload));
  std::string compact;
  for (char c : percent_decode(payload)) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  while (compact.size() % 4 != 0) compact.push_back('=');
  return parse_source_map(base64_decode(compact));
}

std::optional<std::string> source_mapping_url(std::string_view script) {
  static const std::regex kComment(R"((?:\/\/|\/\*)[#@][ \t]+sourceMappingURL=([^\s'"*]+))");
  std::optional<std::string> last;
  for (auto it = std::cregex_iterator(script.data(), script.data() + script.size(), kComment);
       it != std::cregex_iterator(); ++it) {
    last = (*it)[1].str();
  }
  return last;
}

std::set<std::string> extract_packages(const SourceMapSummary& summary) {
  std::set<std::string> out;
  for (const auto& source : summary.sources) {
    const std::string_view path = strip_query(source);
    const auto rest = after_last_node_modules(path);
    if (!rest) continue;
    if (auto name = package_at(path.substr(*rest))) out.insert(std::move(*name));
  }
  return out;
}

std::string_view evidence_name(Evidence e) {
  return e == Evidence::kPnpmStorePath ? "pnpm-store-path" : "node-modules-path";
}

bool GroundTruthEntry::operator<(const GroundTruthEntry& o) const {
  if (package != o.package) return package < o.package;
  if (version.has_value() != o.version.has_value()) return !version.has_value();
  if (version && *version != *o.version) return *version < *o.version;
  if (version && version->build != o.version->build) return version->build < o.version->build;
  return evidence < o.evidence;
}

bool GroundTruthEntry::operator==(const GroundTruthEntry& o) const {
  return !(*this < o) && !(o < *this);
}

std::set<GroundTruthEntry> extract_pnpm_versions(const SourceMapSummary& summary,
                                                 std::vector<std::string>* warnings) {
  std::set<GroundTruthEntry> out;
  for (const auto& source : summary.sources) {
    const std::string_view path = strip_query(source);
    const auto parts = split_path(path);
    std::size_t store = parts.size();
    for (std::size_t i = parts.size(); i-- > 0;) {
      if (parts[i] == ".pnpm") {
        store = i;
        break;
      }
    }
    if (store + 3 >= parts.size() || parts[store + 2] != "node_modules") continue;
    std::string_view dir = parts[store + 1];
    const std::size_t at = dir.find('@', 1);
    if (at == std::string_view::npos) continue;
    std::string name(dir.substr(0, at));
    std::replace(name.begin(), name.end(), '+', '/');
    std::string_view version_text = dir.substr(at + 1);
    version_text = version_text.substr(0, version_text.find_first_of("_("));

    std::string inner(parts[store + 3]);
    if (!inner.empty() && inner.front() == '@') {
      if (store + 4 >= parts.size()) continue;
      inner += "/" + std::string(parts[store + 4]);
    }
    if (inner != name) continue;

    auto version = try_parse_semver(version_text);
    if (!version) {
      if (warnings) {
        warnings->push_back("pnpm path with non-SemVer version skipped: " + std::string(source));
      }
      continue;
    }
    out.insert(GroundTruthEntry{name, std::move(*version), Evidence::kPnpmStorePath});
  }
  return out;
}

std::set<GroundTruthEntry> extract_ground_truth(const SourceMapSummary& summary,
                                                std::vector<std::string>* warnings) {
  std::set<GroundTruthEntry> out = extract_pnpm_versions(summary, warnings);
  std::set<std::string> versioned;
  for (const auto& e : out) versioned.insert(e.package);
  for (const auto& name : extract_packages(summary)) {
    if (!versioned.count(name)) out.insert(GroundTruthEntry{name, std::nullopt, Evidence::kNodeModulesPath});
  }
  return out;
}

std::string_view provider_name(CdnProvider p) {
  switch (p) {
    case CdnProvider::kCdnjs: return "cdnjs";
    case CdnProvider::kJsdelivr: return "jsdelivr";
    case CdnProvider::kUnpkg: return "unpkg";
    case CdnProvider::kGoogle: return "google";
    case CdnProvider::kJquery: return "jquery";
    case CdnProvider::kMicrosoft: return "microsoft";
    case CdnProvider::kOther: break;
  }
  return "other";
}

std::string_view version_spec_name(VersionSpecKind k) {
  switch (k) {
    case VersionSpecKind::kFixed: return "fixed";
    case VersionSpecKind::kAliased: return "aliased";
    case VersionSpecKind::kNone: break;
  }
  return "none";
}

namespace {

void classify(CdnUrlInfo& info, std::string_view text) {
  const bool bare = !text.empty() && std::isdigit(static_cast<unsigned char>(text.front()));
  if (auto v = bare ? try_parse_semver(text) : std::nullopt) {
    info.kind = VersionSpecKind::kFixed;
    info.fixed = std::move(*v);
    return;
  }
  info.kind = VersionSpecKind::kAliased;
  info.alias = std::string(text);
}

std::string join(const std::vector<std::string_view>& parts, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < parts.size(); ++i) {
    if (!out.empty()) out += '/';
    out += parts[i];
  }
  return out;
}

// "<name>[@<version>]/<file>" with scoped names taking two segments.
void parse_npm_style(CdnUrlInfo& info, const std::vector<std::string_view>& parts, std::size_t i) {
  if (i >= parts.size()) return;
  std::string head(parts[i]);
  std::size_t next = i + 1;
  if (head.front() == '@') {
    if (next >= parts.size()) return;
    head += "/" + std::string(parts[next]);
    ++next;
  }
  const std::size_t at = head.find('@', 1);
  info.package = head.substr(0, at);
  if (at == std::string::npos) {
    // npm CDNs resolve an omitted version to the "latest" tag.
    info.kind = VersionSpecKind::kAliased;
    info.alias.clear();
  } else {
    classify(info, std::string_view(head).substr(at + 1));
  }
  info.file = join(parts, next);
}

// "<lib>/<version>/<file>"
void parse_lib_version_file(CdnUrlInfo& info, const std::vector<std::string_view>& parts,
                            std::size_t i) {
  if (i >= parts.size()) return;
  info.package = std::string(parts[i]);
  if (i + 1 >= parts.size()) return;
  classify(info, parts[i + 1]);
  info.file = join(parts, i + 2);
}

// code.jquery.com and the aspnetcdn jQuery folder name versions in the file.
bool parse_jquery_file(CdnUrlInfo& info, std::string_view file) {
  static const std::regex kFixed(
      R"(^(jquery(?:-migrate)?)-(\d+\.\d+\.\d+(?:-[0-9A-Za-z.-]+?)?)(?:\.slim)?(?:\.min)?\.js$)");
  static const std::regex kAliased(
      R"(^(jquery(?:-migrate)?)-(latest|git|\d+(?:\.\d+)?(?:\.x)?-git|\d+(?:\.\d+)?)(?:\.slim)?(?:\.min)?\.js$)");
  static const std::regex kBare(R"(^(jquery(?:-migrate)?)(?:\.slim)?(?:\.min)?\.js$)");
  const std::string name(file);
  std::smatch m;
  if (std::regex_match(name, m, kFixed)) {
    info.package = m[1].str();
    classify(info, m[2].str());
    return true;
  }
  if (std::regex_match(name, m, kAliased)) {
    info.package = m[1].str();
    info.kind = VersionSpecKind::kAliased;
    info.alias = m[2].str();
    return true;
  }
  if (std::regex_match(name, m, kBare)) {
    info.package = m[1].str();
    return true;
  }
  return false;
}

}  // namespace

CdnUrlInfo parse_cdn_url(std::string_view url) {
  CdnUrlInfo info;
  std::string_view rest = url;
  if (const std::size_t scheme = rest.find("://"); scheme != std::string_view::npos) {
    rest = rest.substr(scheme + 3);
  } else if (rest.substr(0, 2) == "//") {
    rest = rest.substr(2);
  } else {
    info.file = std::string(strip_query(url));
    return info;
  }
  const std::size_t slash = rest.find('/');
  std::string host = lower(rest.substr(0, slash));
  if (const std::size_t at = host.rfind('@'); at != std::string::npos) host.erase(0, at + 1);
  if (const std::size_t colon = host.find(':'); colon != std::string::npos) host.resize(colon);
  const std::string path =
      percent_decode(strip_query(slash == std::string_view::npos ? std::string_view{} : rest.substr(slash)));
  const auto parts = split_path(path);
  info.file = join(parts, 0);

  if (host == "cdnjs.cloudflare.com") {
    info.provider = CdnProvider::kCdnjs;
    if (parts.size() >= 2 && parts[0] == "ajax" && parts[1] == "libs") parse_lib_version_file(info, parts, 2);
  } else if (host == "cdn.jsdelivr.net" || host == "fastly.jsdelivr.net") {
    info.provider = CdnProvider::kJsdelivr;
    if (!parts.empty() && parts[0] == "npm") parse_npm_style(info, parts, 1);
  } else if (host == "unpkg.com") {
    info.provider = CdnProvider::kUnpkg;
    parse_npm_style(info, parts, 0);
  } else if (host == "ajax.googleapis.com") {
    info.provider = CdnProvider::kGoogle;
    if (parts.size() >= 2 && parts[0] == "ajax" && parts[1] == "libs") parse_lib_version_file(info, parts, 2);
  } else if (host == "code.jquery.com") {
    info.provider = CdnProvider::kJquery;
    if (parts.size() == 1) {
      parse_jquery_file(info, parts[0]);
    } else if (parts.size() >= 3) {
      static const std::array<std::pair<std::string_view, std::string_view>, 4> kFolders{{
          {"ui", "jquery-ui"}, {"mobile", "jquery-mobile"}, {"color", "jquery-color"}, {"qunit", "qunit"}}};
      for (const auto& [folder, package] : kFolders) {
        if (parts[0] != folder) continue;
        info.package = std::string(package);
        classify(info, parts[1]);
        info.file = join(parts, 2);
      }
    }
  } else if (host == "ajax.aspnetcdn.com" || host == "ajax.microsoft.com") {
    info.provider = CdnProvider::kMicrosoft;
    if (parts.size() >= 2 && parts[0] == "ajax") {
      if (parts.size() == 3 && lower(parts[1]) == "jquery" && parse_jquery_file(info, parts[2])) {
        info.file = std::string(parts[2]);
      } else if (parts.size() >= 4) {
        parse_lib_version_file(info, parts, 1);
      }
    }
  }
  if (info.kind != VersionSpecKind::kFixed) info.fixed.reset();
  return info;
}

}  // namespace sleuth

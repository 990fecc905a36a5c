#include "sleuth/artifact_selector.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "sleuth/error.hpp"
#include "sleuth/js/parser.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sleuth {

std::string_view strategy_name(SelectionStrategy strategy) {
  switch (strategy) {
    case SelectionStrategy::kPrebundledField: return "prebundled-field";
    case SelectionStrategy::kEntrypointResolution: return "entrypoint-resolution";
    case SelectionStrategy::kHeuristic: return "heuristic";
  }
  return "heuristic";
}

SelectionStrategy parse_strategy(std::string_view name) {
  if (name == "prebundled-field") return SelectionStrategy::kPrebundledField;
  if (name == "entrypoint-resolution") return SelectionStrategy::kEntrypointResolution;
  if (name == "heuristic") return SelectionStrategy::kHeuristic;
  throw Error(ErrorCode::kFormatError, "unknown selection strategy '" + std::string(name) + "'");
}

const std::vector<std::string>& export_conditions() {
  static const std::vector<std::string> conditions = {"browser", "import", "require", "default"};
  return conditions;
}

namespace {

const std::vector<std::string> kExtensions = {".js", ".mjs", ".cjs", ".json"};

bool has_js_extension(std::string_view p) {
  return p.ends_with(".js") || p.ends_with(".mjs") || p.ends_with(".cjs");
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Lexically normalized artifact-relative path, or empty when it escapes.
std::string inside(const fs::path& rel) {
  fs::path n = rel.lexically_normal();
  std::string s = n.generic_string();
  if (s.empty() || s == "." || s.starts_with("../") || s == ".." || n.is_absolute()) return {};
  return s;
}

bool is_file(const fs::path& root, const std::string& rel) {
  std::error_code ec;
  return !rel.empty() && fs::is_regular_file(root / rel, ec);
}

/// Extension completion and directory index lookup.
std::string complete(const fs::path& root, const std::string& rel, int depth = 0) {
  if (rel.empty()) return {};
  if (is_file(root, rel)) return rel;
  for (const auto& ext : kExtensions) {
    if (is_file(root, rel + ext)) return rel + ext;
  }
  std::error_code ec;
  if (fs::is_directory(root / rel, ec)) {
    const fs::path pj = root / rel / "package.json";
    if (depth < 4 && fs::is_regular_file(pj, ec)) {
      try {
        const json dir_pkg = json::parse(read_file(pj));
        for (const char* field : {"module", "main"}) {
          if (dir_pkg.contains(field) && dir_pkg[field].is_string()) {
            std::string found =
                complete(root, inside(fs::path(rel) / dir_pkg[field].get<std::string>()), depth + 1);
            if (!found.empty()) return found;
          }
        }
      } catch (const json::exception&) {
      }
    }
    for (const auto& ext : kExtensions) {
      const std::string idx = inside(fs::path(rel) / ("index" + ext));
      if (is_file(root, idx)) return idx;
    }
  }
  return {};
}

/// Resolves an exports/imports target value under the condition order.
std::string resolve_target(const fs::path& root, const json& target, const std::string& star) {
  if (target.is_string()) {
    std::string t = target.get<std::string>();
    if (!t.starts_with("./")) return {};
    if (const auto pos = t.find('*'); pos != std::string::npos) t.replace(pos, 1, star);
    const std::string rel = inside(t);
    if (is_file(root, rel)) return rel;
    return complete(root, rel);
  }
  if (target.is_array()) {
    for (const auto& alt : target) {
      std::string r = resolve_target(root, alt, star);
      if (!r.empty()) return r;
    }
    return {};
  }
  if (target.is_object()) {
    for (const auto& cond : export_conditions()) {
      if (target.contains(cond)) {
        std::string r = resolve_target(root, target[cond], star);
        if (!r.empty()) return r;
      }
    }
  }
  return {};
}

bool is_subpath_map(const json& exports) {
  if (!exports.is_object() || exports.empty()) return false;
  return exports.begin().key().starts_with(".");
}

/// `subpath` is "." or "./x". Returns an artifact-relative path or empty.
std::string resolve_map(const fs::path& root, const json& map, const std::string& subpath,
                        bool subpaths_only_with_dot) {
  if (!map.is_object() || (subpaths_only_with_dot && !is_subpath_map(map))) {
    return subpath == "." ? resolve_target(root, map, "") : std::string();
  }
  if (map.contains(subpath)) return resolve_target(root, map[subpath], "");
  // Longest matching pattern key ("./feature/*"), then longest folder key ("./dir/").
  std::string best_key;
  std::string best_star;
  std::size_t best_prefix = 0;
  std::string folder_key;
  for (auto it = map.begin(); it != map.end(); ++it) {
    const std::string& key = it.key();
    const auto star = key.find('*');
    if (star != std::string::npos) {
      const std::string prefix = key.substr(0, star);
      const std::string suffix = key.substr(star + 1);
      const bool match = subpath.size() >= prefix.size() + suffix.size() && subpath.starts_with(prefix) &&
                         subpath.ends_with(suffix);
      if (match && (best_key.empty() || prefix.size() > best_prefix)) {
        best_key = key;
        best_prefix = prefix.size();
        best_star = subpath.substr(prefix.size(), subpath.size() - prefix.size() - suffix.size());
      }
    } else if (key.ends_with("/") && subpath.starts_with(key) && key.size() > folder_key.size()) {
      folder_key = key;
    }
  }
  if (best_key.empty() && !folder_key.empty() && map[folder_key].is_string()) {
    return complete(root, inside(map[folder_key].get<std::string>() + subpath.substr(folder_key.size())));
  }
  if (!best_key.empty()) return resolve_target(root, map[best_key], best_star);
  return {};
}

std::string package_of(std::string_view spec) {
  if (spec.starts_with("node:")) return std::string(spec);
  std::size_t cut = spec.find('/');
  if (spec.starts_with("@") && cut != std::string_view::npos) cut = spec.find('/', cut + 1);
  return std::string(spec.substr(0, cut));
}

}  // namespace

Resolution resolve_specifier(const fs::path& root, std::string_view from_file, std::string_view spec,
                             const json& package_json) {
  Resolution r;
  if (spec.empty()) return r;
  if (spec.starts_with("./") || spec.starts_with("../") || spec == "." || spec == ".." ||
      spec.starts_with("/")) {
    fs::path base = fs::path(std::string(from_file)).parent_path();
    fs::path target = spec.starts_with("/") ? fs::path(std::string(spec.substr(1)))
                                            : base / std::string(spec);
    const std::string found = complete(root, inside(target));
    if (!found.empty()) {
      r.kind = Resolution::Kind::kPath;
      r.path = found;
    }
    return r;
  }
  if (spec.starts_with("#")) {
    if (package_json.contains("imports")) {
      const std::string found = resolve_map(root, package_json["imports"], std::string(spec), false);
      if (!found.empty()) {
        r.kind = Resolution::Kind::kPath;
        r.path = found;
        return r;
      }
    }
    return r;
  }
  const std::string pkg = package_of(spec);
  const std::string self =
      package_json.contains("name") && package_json["name"].is_string() ? package_json["name"].get<std::string>() : "";
  if (!self.empty() && pkg == self) {
    const std::string subpath = spec.size() == pkg.size() ? "." : "." + std::string(spec.substr(pkg.size()));
    std::string found;
    if (package_json.contains("exports")) {
      found = resolve_map(root, package_json["exports"], subpath, true);
    } else if (subpath == ".") {
      for (const char* field : {"module", "main"}) {
        if (found.empty() && package_json.contains(field) && package_json[field].is_string()) {
          found = complete(root, inside(package_json[field].get<std::string>()));
        }
      }
      if (found.empty()) found = complete(root, "index");
    } else {
      found = complete(root, inside(subpath));
    }
    if (!found.empty()) {
      r.kind = Resolution::Kind::kPath;
      r.path = found;
    }
    return r;
  }
  r.kind = Resolution::Kind::kExternal;
  r.package = pkg;
  return r;
}

std::vector<std::string> import_specifiers(std::string_view source, bool* used_fallback) {
  std::vector<std::string> out;
  if (used_fallback != nullptr) *used_fallback = false;
  try {
    js::ParsedDocument doc = js::parse_any(source);
    // Pre-order, source order.
    std::vector<const js::Node*> stack{doc.ast.root};
    while (!stack.empty()) {
      const js::Node* n = stack.back();
      stack.pop_back();
      auto literal_string = [](const js::Node* k) {
        return k != nullptr && k->type == js::NodeType::Literal &&
               k->literal_kind() == js::LiteralKind::kString;
      };
      switch (n->type) {
        case js::NodeType::ImportDeclaration:
        case js::NodeType::ExportAllDeclaration:
          if (literal_string(n->kids.back())) out.push_back(n->kids.back()->text);
          break;
        case js::NodeType::ExportNamedDeclaration:
          if (n->has(js::flag::kHasSource) && literal_string(n->kids.back())) {
            out.push_back(n->kids.back()->text);
          }
          break;
        case js::NodeType::ImportExpression:
          if (literal_string(n->kids[0])) out.push_back(n->kids[0]->text);
          break;
        case js::NodeType::CallExpression:
          if (n->kids.size() == 2 && n->kids[0]->type == js::NodeType::Identifier &&
              n->kids[0]->text == "require" && literal_string(n->kids[1])) {
            out.push_back(n->kids[1]->text);
          }
          break;
        default:
          break;
      }
      for (auto it = n->kids.rbegin(); it != n->kids.rend(); ++it) {
        if (*it != nullptr) stack.push_back(*it);
      }
    }
    return out;
  } catch (const Error&) {
    if (used_fallback != nullptr) *used_fallback = true;
  }
  static const std::regex pattern(
      R"((?:\brequire\s*\(\s*|\bimport\s*\(\s*|\bfrom\s*|\bimport\s+)(['"])([^'"\n]+)\1)");
  const std::string text(source);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pattern); it != std::sregex_iterator(); ++it) {
    out.push_back((*it)[2].str());
  }
  return out;
}

namespace {

bool excluded_dir(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  static const std::set<std::string> kExcluded = {"test", "tests", "__tests__", "example",
                                                  "examples", "vendor", "node_modules"};
  return kExcluded.count(lower) != 0;
}

std::string field_path(const json& pkg, const char* field) {
  if (!pkg.contains(field) || !pkg[field].is_string()) return {};
  return inside(pkg[field].get<std::string>());
}

}  // namespace

SelectionResult select_files(const fs::path& root) {
  const fs::path pj = root / "package.json";
  std::error_code ec;
  if (!fs::is_regular_file(pj, ec)) {
    throw SelectionError("no-package-json", "no package.json in " + root.string());
  }
  json pkg;
  try {
    pkg = json::parse(read_file(pj));
  } catch (const json::exception& e) {
    throw SelectionError("bad-package-json", std::string("package.json does not parse: ") + e.what());
  }
  if (!pkg.is_object()) throw SelectionError("bad-package-json", "package.json is not an object");

  SelectionResult result;

  // Step 1: prebundled artifact.
  for (const char* field : {"jsdelivr", "unpkg"}) {
    const std::string rel = field_path(pkg, field);
    if (is_file(root, rel)) {
      result.files = {rel};
      result.strategy = SelectionStrategy::kPrebundledField;
      return result;
    }
    if (!rel.empty()) result.warnings.push_back(std::string(field) + " field points to missing file " + rel);
  }

  // Step 2: entry points and their import closure.
  std::string entry;
  if (pkg.contains("exports")) entry = resolve_map(root, pkg["exports"], ".", true);
  for (const char* field : {"module", "main"}) {
    if (entry.empty()) {
      const std::string rel = field_path(pkg, field);
      if (!rel.empty()) entry = complete(root, rel);
    }
  }
  for (const char* fallback : {"index.js", "index.mjs"}) {
    if (entry.empty() && is_file(root, fallback)) entry = fallback;
  }
  if (!entry.empty() && has_js_extension(entry)) {
    std::set<std::string> visited;
    std::set<std::string> deps;
    std::vector<std::string> stack{entry};
    while (!stack.empty()) {
      const std::string file = stack.back();
      stack.pop_back();
      if (!visited.insert(file).second) continue;
      if (has_js_extension(file)) result.files.push_back(file);
      if (!has_js_extension(file)) continue;
      bool fallback = false;
      const auto specs = import_specifiers(read_file(root / file), &fallback);
      if (fallback) result.warnings.push_back(file + ": unparseable, imports scanned textually");
      std::vector<std::string> next;
      for (const auto& spec : specs) {
        const Resolution r = resolve_specifier(root, file, spec, pkg);
        if (r.kind == Resolution::Kind::kPath) {
          if (!visited.count(r.path)) next.push_back(r.path);
        } else if (r.kind == Resolution::Kind::kExternal) {
          if (deps.insert(r.package).second) result.dependencies.push_back(r.package);
        } else {
          result.warnings.push_back(file + ": cannot resolve '" + spec + "'");
        }
      }
      for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back(*it);
    }
    result.strategy = SelectionStrategy::kEntrypointResolution;
    return result;
  }

  // Step 3: naming heuristics.
  std::vector<std::string> found;
  bool saw_typescript = false;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    const auto& e = *it;
    if (e.is_directory(ec)) {
      if (excluded_dir(e.path().filename().string())) it.disable_recursion_pending();
      continue;
    }
    if (!e.is_regular_file(ec)) continue;
    const std::string rel = fs::relative(e.path(), root, ec).generic_string();
    if (has_js_extension(rel)) {
      found.push_back(rel);
    } else if (rel.ends_with(".ts") || rel.ends_with(".tsx")) {
      saw_typescript = true;
    }
  }
  std::sort(found.begin(), found.end());
  const std::set<std::string> all(found.begin(), found.end());
  for (const auto& f : found) {
    if (f.ends_with(".min.js") && all.count(f.substr(0, f.size() - 7) + ".js")) continue;
    result.files.push_back(f);
  }
  if (result.files.empty()) {
    if (saw_typescript) throw SelectionError("typescript-only", "only TypeScript sources in " + root.string());
    throw SelectionError("no-files", "no JavaScript files in " + root.string());
  }
  result.strategy = SelectionStrategy::kHeuristic;
  return result;
}

namespace {

std::uint64_t octal_field(const char* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n && p[i] != '\0' && p[i] != ' '; ++i) {
    if (p[i] < '0' || p[i] > '7') throw Error(ErrorCode::kFormatError, "bad tar header number");
    v = v * 8 + static_cast<std::uint64_t>(p[i] - '0');
  }
  return v;
}

std::string c_field(const char* p, std::size_t n) { return std::string(p, strnlen(p, n)); }

/// Value of `key` in a pax extended header block.
std::string pax_value(const std::string& block, const std::string& key) {
  std::size_t pos = 0;
  while (pos < block.size()) {
    const std::size_t sp = block.find(' ', pos);
    if (sp == std::string::npos) break;
    const std::size_t len = std::stoul(block.substr(pos, sp - pos));
    if (len == 0 || pos + len > block.size()) break;
    const std::string rec = block.substr(sp + 1, len - (sp - pos) - 2);
    const std::size_t eq = rec.find('=');
    if (eq != std::string::npos && rec.substr(0, eq) == key) return rec.substr(eq + 1);
    pos += len;
  }
  return {};
}

}  // namespace

void unpack_tarball(const fs::path& tarball, const fs::path& destination) {
  {
    std::ifstream probe(tarball, std::ios::binary);
    if (!probe) throw Error(ErrorCode::kIoError, "cannot open " + tarball.string());
    char magic[2] = {};
    probe.read(magic, 2);
    if (probe.gcount() != 2 || magic[0] != '\x1f' || magic[1] != '\x8b') {
      throw Error(ErrorCode::kFormatError, tarball.string() + " is not gzip data");
    }
  }
  gzFile gz = gzopen(tarball.string().c_str(), "rb");
  if (gz == nullptr) throw Error(ErrorCode::kIoError, "cannot open " + tarball.string());
  std::string data;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(gz, buf, sizeof(buf))) > 0) data.append(buf, static_cast<std::size_t>(n));
  int err = 0;
  const char* msg = gzerror(gz, &err);
  const bool failed = n < 0 || (err != Z_OK && err != Z_STREAM_END);
  const std::string why = msg != nullptr ? msg : "";
  gzclose(gz);
  if (failed) throw Error(ErrorCode::kFormatError, tarball.string() + ": " + why);

  std::string long_name;
  std::size_t off = 0;
  while (off + 512 <= data.size()) {
    const char* h = data.data() + off;
    if (std::all_of(h, h + 512, [](char c) { return c == '\0'; })) break;
    std::uint64_t sum = 0;
    for (int i = 0; i < 512; ++i) sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(h[i]);
    if (octal_field(h + 148, 8) != sum) throw Error(ErrorCode::kFormatError, "bad tar header checksum");
    const std::uint64_t size = octal_field(h + 124, 12);
    const char type = h[156];
    std::string name = c_field(h, 100);
    const std::string prefix = c_field(h + 345, 155);
    if (!prefix.empty() && std::string_view(h + 257, 5) == "ustar") name = prefix + "/" + name;
    off += 512;
    if (off + size > data.size()) throw Error(ErrorCode::kFormatError, "truncated tar archive");
    const std::string body = data.substr(off, size);
    off += (size + 511) / 512 * 512;
    if (type == 'x') {
      long_name = pax_value(body, "path");
      continue;
    }
    if (type == 'L') {
      long_name = c_field(body.data(), body.size());
      continue;
    }
    if (type == 'g') continue;
    if (!long_name.empty()) {
      name = long_name;
      long_name.clear();
    }
    const auto slash = name.find('/');
    if (slash == std::string::npos) continue;
    if (slash + 1 == name.size()) continue;
    const std::string rel = inside(name.substr(slash + 1));
    if (rel.empty()) throw Error(ErrorCode::kFormatError, "unsafe path in tar archive: " + name);
    if (type == '5') {
      fs::create_directories(destination / rel);
    } else if (type == '0' || type == '\0' || type == '7') {
      fs::create_directories((destination / rel).parent_path());
      std::ofstream out(destination / rel, std::ios::binary);
      out.write(body.data(), static_cast<std::streamsize>(body.size()));
      if (!out) throw Error(ErrorCode::kIoError, "cannot write " + (destination / rel).string());
    }
  }
}

}  // namespace sleuth

#include "sleuth/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <tuple>

#include "sleuth/error.hpp"

namespace sleuth {
namespace {

using nlohmann::json;

std::uint64_t abs_diff(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

double median_of(std::vector<std::uint64_t> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return static_cast<double>(values[mid]);
  return (static_cast<double>(values[mid - 1]) + static_cast<double>(values[mid])) / 2.0;
}

ComponentStats stats_of(const std::vector<std::uint64_t>& values) {
  ComponentStats s;
  if (values.empty()) return s;
  long double sum = 0;
  for (auto v : values) sum += static_cast<long double>(v);
  s.mean = static_cast<double>(sum / static_cast<long double>(values.size()));
  s.median = median_of(values);
  return s;
}

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len) {
  int out = 0;
  const char* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, out);
  if (ec != std::errc{} || ptr != first + len) {
    throw Error(ErrorCode::kFormatError, "invalid date: " + std::string(text));
  }
  return out;
}

const json& require(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::kFormatError,
                "line " + std::to_string(line) + ": missing string field \"" + key + "\"");
  }
  return *it;
}

}  // namespace

ExistenceTriple existence_of(const VersionDelta& d) {
  ExistenceTriple t;
  t.major_err = d.d_major > 0;
  t.minor_err = t.major_err || d.d_minor > 0;
  t.patch_err = t.minor_err || d.d_patch > 0;
  return t;
}

VersionDelta version_difference(const SemVer& correct, const std::vector<SemVer>& detected) {
  if (detected.empty()) throw Error(ErrorCode::kEmptyDetection, "no detected versions");
  const SemVer c = core_version(correct);
  std::optional<VersionDelta> best;
  for (const auto& v : detected) {
    const VersionDelta d{abs_diff(c.major, v.major), abs_diff(c.minor, v.minor),
                         abs_diff(c.patch, v.patch)};
    if (!best || d < *best) best = d;
  }
  return *best;
}

ExistenceTriple difference_existence(const SemVer& correct, const std::vector<SemVer>& detected) {
  return existence_of(version_difference(correct, detected));
}

DeltaStats summarize_deltas(const std::vector<VersionDelta>& deltas) {
  DeltaStats s;
  s.count = deltas.size();
  std::vector<std::uint64_t> ma, mi, pa;
  for (const auto& d : deltas) {
    ma.push_back(d.d_major);
    mi.push_back(d.d_minor);
    pa.push_back(d.d_patch);
    const auto e = existence_of(d);
    s.major_errors += e.major_err;
    s.minor_errors += e.minor_err;
    s.patch_errors += e.patch_err;
  }
  s.major = stats_of(ma);
  s.minor = stats_of(mi);
  s.patch = stats_of(pa);
  return s;
}

Date parse_date(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-' || (text.size() > 10 && text[10] != 'T')) {
    throw Error(ErrorCode::kFormatError, "invalid date: " + std::string(text));
  }
  const std::chrono::year_month_day ymd{std::chrono::year{parse_fixed(text, 0, 4)},
                                        std::chrono::month{static_cast<unsigned>(parse_fixed(text, 5, 2))},
                                        std::chrono::day{static_cast<unsigned>(parse_fixed(text, 8, 2))}};
  if (!ymd.ok()) throw Error(ErrorCode::kFormatError, "invalid date: " + std::string(text));
  return Date{ymd};
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::vector<Observation> parse_observations(std::string_view ndjson) {
  std::vector<Observation> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < ndjson.size()) {
    std::size_t end = ndjson.find('\n', start);
    if (end == std::string_view::npos) end = ndjson.size();
    const std::string_view line = ndjson.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kFormatError, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!doc.is_object()) {
      throw Error(ErrorCode::kFormatError, "line " + std::to_string(line_no) + ": expected an object");
    }
    Observation o;
    o.domain = require(doc, "domain", line_no).get<std::string>();
    o.package = require(doc, "package", line_no).get<std::string>();
    auto version = try_parse_semver(require(doc, "version", line_no).get<std::string>());
    if (!version) {
      throw Error(ErrorCode::kFormatError, "line " + std::to_string(line_no) + ": invalid version");
    }
    o.version = std::move(*version);
    o.observed_at = parse_date(require(doc, "observed_at", line_no).get<std::string>());
    out.push_back(std::move(o));
  }
  return out;
}

ReleaseDates parse_release_dates(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kFormatError, "release dates must be an object");
  ReleaseDates out;
  for (const auto& [package, versions] : doc.items()) {
    if (!versions.is_object()) {
      throw Error(ErrorCode::kFormatError, "release dates for " + package + " must be an object");
    }
    auto& slot = out[package];
    for (const auto& [version, date] : versions.items()) {
      // npm "time" maps also carry "created" and "modified".
      const auto v = try_parse_semver(version);
      if (!v || !date.is_string()) continue;
      slot[v->to_string()] = parse_date(date.get<std::string>());
    }
  }
  return out;
}

RolloutResult rollout_times(const std::vector<Observation>& observations,
                            const ReleaseDates& releases) {
  std::map<std::pair<std::string, std::string>, std::vector<const Observation*>> series;
  for (const auto& o : observations) series[{o.domain, o.package}].push_back(&o);

  RolloutResult result;
  for (auto& [key, list] : series) {
    std::stable_sort(list.begin(), list.end(), [](const Observation* a, const Observation* b) {
      if (a->observed_at != b->observed_at) return a->observed_at < b->observed_at;
      return a->version < b->version;
    });
    const auto package_releases = releases.find(key.second);
    std::set<std::string> reported;
    for (std::size_t i = 1; i < list.size(); ++i) {
      const Observation& prev = *list[i - 1];
      const Observation& cur = *list[i];
      if (cur.version < prev.version) {
        ++result.downgrades;
        continue;
      }
      if (!(prev.version < cur.version)) continue;
      const std::string version = cur.version.to_string();
      if (!reported.insert(version).second) continue;
      std::optional<Date> released;
      if (package_releases != releases.end()) {
        const auto it = package_releases->second.find(version);
        if (it != package_releases->second.end()) released = it->second;
      }
      if (!released) {
        result.warnings.push_back("no release date for " + key.second + "@" + version + "; skipped");
        continue;
      }
      std::int64_t days = (cur.observed_at - *released).count();
      if (days < 0) {
        result.warnings.push_back(key.first + ": " + key.second + "@" + version + " observed " +
                                  std::to_string(-days) + " days before its release date; clamped to 0");
        days = 0;
      }
      result.rows.push_back(RolloutRow{key.first, key.second, cur.version, days});
    }
  }
  return result;
}

RolloutUniverse RolloutUniverse::of(const std::vector<Observation>& observations) {
  RolloutUniverse u;
  for (const auto& o : observations) {
    u.packages.insert(o.package);
    u.instances.insert({o.domain, o.package});
    u.domains.insert(o.domain);
  }
  return u;
}

std::vector<HorizonFractions> rollout_fractions(const std::vector<RolloutRow>& rows,
                                                const std::vector<std::int64_t>& horizons,
                                                const RolloutUniverse* universe) {
  // Fastest rollout per entity; an entity counts at H iff that minimum is <= H.
  std::map<std::string, std::int64_t> by_package, by_domain;
  std::map<std::pair<std::string, std::string>, std::int64_t> by_instance;
  auto keep_min = [](auto& m, const auto& key, std::int64_t v) {
    auto [it, inserted] = m.emplace(key, v);
    if (!inserted) it->second = std::min(it->second, v);
  };
  for (const auto& r : rows) {
    keep_min(by_package, r.package, r.rollout_days);
    keep_min(by_domain, r.domain, r.rollout_days);
    keep_min(by_instance, std::make_pair(r.domain, r.package), r.rollout_days);
  }
  const std::size_t n_packages = universe ? universe->packages.size() : by_package.size();
  const std::size_t n_instances = universe ? universe->instances.size() : by_instance.size();
  const std::size_t n_domains = universe ? universe->domains.size() : by_domain.size();

  auto fraction = [](const auto& m, std::size_t denominator, std::int64_t h) {
    if (denominator == 0) return 0.0;
    std::size_t hit = 0;
    for (const auto& [key, days] : m) hit += days <= h;
    return static_cast<double>(hit) / static_cast<double>(denominator);
  };
  std::vector<HorizonFractions> out;
  for (const auto h : horizons) {
    out.push_back(HorizonFractions{h, fraction(by_package, n_packages, h),
                                   fraction(by_instance, n_instances, h),
                                   fraction(by_domain, n_domains, h)});
  }
  return out;
}

std::vector<Advisory> parse_advisories(const json& doc) {
  if (doc.is_object() && doc.empty()) return {};
  if (!doc.is_array()) throw Error(ErrorCode::kFormatError, "advisories must be a JSON list");
  std::vector<Advisory> out;
  for (const auto& item : doc) {
    if (!item.is_object()) throw Error(ErrorCode::kFormatError, "advisory must be an object");
    Advisory a;
    for (const char* key : {"id", "package", "range"}) {
      const auto it = item.find(key);
      if (it == item.end() || !it->is_string()) {
        throw Error(ErrorCode::kFormatError, std::string("advisory missing string field \"") + key + "\"");
      }
    }
    a.id = item["id"].get<std::string>();
    a.package = item["package"].get<std::string>();
    a.range_text = item["range"].get<std::string>();
    a.range = VersionRange::parse(a.range_text);
    if (const auto it = item.find("severity"); it != item.end() && it->is_string()) {
      a.severity = it->get<std::string>();
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string_view audit_mode_name(AuditMode m) {
  switch (m) {
    case AuditMode::kAny: return "any";
    case AuditMode::kAll: return "all";
    case AuditMode::kUnder: return "under";
    case AuditMode::kOver: return "over";
  }
  return "any";
}

AuditResult audit(const std::vector<AuditDetection>& detections,
                  const std::vector<Advisory>& advisories, AuditMode mode,
                  const AuditOptions& options) {
  std::map<std::string, std::vector<const Advisory*>> by_package;
  for (const auto& a : advisories) by_package[a.package].push_back(&a);

  AuditResult r;
  r.mode = mode;
  std::set<std::string> domains;
  // (domain, package) -> matching advisory ids; an instance is vulnerable if
  // any of its detections is.
  std::map<std::pair<std::string, std::string>, std::set<std::string>> instances;
  for (const auto& d : detections) {
    domains.insert(d.domain);
    if (d.versions.empty() || d.too_wide ||
        (options.max_range_width > 0 && d.versions.size() > options.max_range_width)) {
      ++r.discarded;
      continue;
    }
    auto& hits = instances[{d.domain, d.package}];
    const auto found = by_package.find(d.package);
    if (found == by_package.end()) continue;
    std::vector<SemVer> evaluated;
    if (mode == AuditMode::kUnder) {
      evaluated.push_back(*std::min_element(d.versions.begin(), d.versions.end()));
    } else if (mode == AuditMode::kOver) {
      evaluated.push_back(*std::max_element(d.versions.begin(), d.versions.end()));
    } else {
      evaluated = d.versions;
    }
    for (const Advisory* a : found->second) {
      auto affected = [a](const SemVer& v) { return a->range.satisfies(v); };
      const bool vulnerable = mode == AuditMode::kAll
                                  ? std::all_of(evaluated.begin(), evaluated.end(), affected)
                                  : std::any_of(evaluated.begin(), evaluated.end(), affected);
      if (vulnerable) hits.insert(a->id);
    }
  }
  for (const auto& domain : domains) r.vulnerable_per_domain[domain] = 0;
  for (const auto& [key, ids] : instances) {
    auto& tally = r.packages[key.second];
    ++tally.instances;
    if (ids.empty()) continue;
    ++tally.vulnerable;
    tally.advisories.insert(ids.begin(), ids.end());
    ++r.vulnerable_per_domain[key.first];
  }
  r.domains = domains.size();
  if (r.domains > 0) {
    std::size_t total = 0;
    for (const auto& [domain, n] : r.vulnerable_per_domain) total += n;
    r.mean_vulnerable_per_domain = static_cast<double>(total) / static_cast<double>(r.domains);
  }
  return r;
}

json audit_to_json(const AuditResult& r) {
  json packages = json::object();
  for (const auto& [name, t] : r.packages) {
    packages[name] = {{"instances", t.instances},
                      {"vulnerable", t.vulnerable},
                      {"advisories", t.advisories}};
  }
  return {{"mode", audit_mode_name(r.mode)},
          {"domains", r.domains},
          {"discarded", r.discarded},
          {"mean_vulnerable_per_domain", r.mean_vulnerable_per_domain},
          {"vulnerable_per_domain", r.vulnerable_per_domain},
          {"packages", packages}};
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace sleuth

#include "sleuth/semver.hpp"

#include <charconv>

#include "sleuth/error.hpp"

namespace sleuth {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_numeric(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_digit(c)) return false;
  }
  return true;
}

bool is_ident_char(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '-';
}

std::optional<std::uint64_t> parse_number(std::string_view s) {
  if (!is_numeric(s) || (s.size() > 1 && s[0] == '0')) return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool valid_identifiers(std::string_view s, bool numeric_rule) {
  if (s.empty()) return false;
  for (std::string_view id : split(s, '.')) {
    if (id.empty()) return false;
    for (char c : id) {
      if (!is_ident_char(c)) return false;
    }
    if (numeric_rule && is_numeric(id) && id.size() > 1 && id[0] == '0') return false;
  }
  return true;
}

int compare_identifier(const std::string& a, const std::string& b) {
  const bool an = is_numeric(a);
  const bool bn = is_numeric(b);
  if (an && bn) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return a < b ? -1 : (a > b ? 1 : 0);
  }
  if (an) return -1;
  if (bn) return 1;
  return a < b ? -1 : (a > b ? 1 : 0);
}

}  // namespace

std::strong_ordering SemVer::operator<=>(const SemVer& o) const {
  if (auto c = major <=> o.major; c != 0) return c;
  if (auto c = minor <=> o.minor; c != 0) return c;
  if (auto c = patch <=> o.patch; c != 0) return c;
  if (prerelease.empty() || o.prerelease.empty()) {
    return o.prerelease.size() == prerelease.size() ? std::strong_ordering::equal
           : prerelease.empty()                     ? std::strong_ordering::greater
                                                    : std::strong_ordering::less;
  }
  const std::size_t n = std::min(prerelease.size(), o.prerelease.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = compare_identifier(prerelease[i], o.prerelease[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return prerelease.size() <=> o.prerelease.size();
}

std::string SemVer::to_string() const {
  std::string out = std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
  for (std::size_t i = 0; i < prerelease.size(); ++i) {
    out += i == 0 ? "-" : ".";
    out += prerelease[i];
  }
  if (!build.empty()) out += "+" + build;
  return out;
}

std::optional<SemVer> try_parse_semver(std::string_view text) {
  text = trim(text);
  if (!text.empty() && (text[0] == 'v' || text[0] == '=')) text.remove_prefix(1);
  SemVer v;
  if (const auto plus = text.find('+'); plus != std::string_view::npos) {
    const std::string_view build = text.substr(plus + 1);
    if (!valid_identifiers(build, false)) return std::nullopt;
    v.build = std::string(build);
    text = text.substr(0, plus);
  }
  if (const auto dash = text.find('-'); dash != std::string_view::npos) {
    const std::string_view pre = text.substr(dash + 1);
    if (!valid_identifiers(pre, true)) return std::nullopt;
    for (std::string_view id : split(pre, '.')) v.prerelease.emplace_back(id);
    text = text.substr(0, dash);
  }
  const auto parts = split(text, '.');
  if (parts.size() != 3) return std::nullopt;
  auto major = parse_number(parts[0]);
  auto minor = parse_number(parts[1]);
  auto patch = parse_number(parts[2]);
  if (!major || !minor || !patch) return std::nullopt;
  v.major = *major;
  v.minor = *minor;
  v.patch = *patch;
  return v;
}

SemVer parse_semver(std::string_view text) {
  auto v = try_parse_semver(text);
  if (!v) throw Error(ErrorCode::kInvalidVersion, "invalid version '" + std::string(text) + "'");
  return *v;
}

SemVer core_version(const SemVer& v) {
  SemVer out;
  out.major = v.major;
  out.minor = v.minor;
  out.patch = v.patch;
  return out;
}

namespace {

using Op = VersionRange::Op;
using Comparator = VersionRange::Comparator;

[[noreturn]] void bad_range(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::kInvalidRange, "invalid range '" + std::string(text) + "': " + why);
}

/// Version with possibly missing (x/X/* or absent) components.
struct Partial {
  int given = 0;  // number of numeric components present (0..3)
  std::uint64_t parts[3] = {0, 0, 0};
  std::vector<std::string> prerelease;
};

bool is_wild(std::string_view s) { return s == "x" || s == "X" || s == "*"; }

Partial parse_partial(std::string_view s, std::string_view whole) {
  Partial p;
  if (!s.empty() && (s[0] == 'v' || s[0] == '=')) s.remove_prefix(1);
  if (s.empty() || is_wild(s)) return p;
  if (const auto plus = s.find('+'); plus != std::string_view::npos) s = s.substr(0, plus);
  std::string_view pre;
  if (const auto dash = s.find('-'); dash != std::string_view::npos) {
    pre = s.substr(dash + 1);
    s = s.substr(0, dash);
    if (!valid_identifiers(pre, true)) bad_range(whole, "bad prerelease");
  }
  const auto parts = split(s, '.');
  if (parts.size() > 3) bad_range(whole, "too many components");
  bool wild_seen = false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (is_wild(parts[i])) {
      wild_seen = true;
      continue;
    }
    if (wild_seen) bad_range(whole, "number after wildcard");
    auto n = parse_number(parts[i]);
    if (!n) bad_range(whole, "bad component '" + std::string(parts[i]) + "'");
    p.parts[i] = *n;
    p.given = static_cast<int>(i) + 1;
  }
  if (!pre.empty()) {
    if (p.given != 3) bad_range(whole, "prerelease on partial version");
    for (std::string_view id : split(pre, '.')) p.prerelease.emplace_back(id);
  }
  return p;
}

SemVer make(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::vector<std::string> pre = {}) {
  SemVer v;
  v.major = a;
  v.minor = b;
  v.patch = c;
  v.prerelease = std::move(pre);
  return v;
}

SemVer floor_of(const Partial& p) { return make(p.parts[0], p.parts[1], p.parts[2], p.prerelease); }

/// Exclusive upper bound of an x-range ("1.2" -> 1.3.0-0).
SemVer ceiling_of(const Partial& p) {
  if (p.given == 1) return make(p.parts[0] + 1, 0, 0, {"0"});
  return make(p.parts[0], p.parts[1] + 1, 0, {"0"});
}

void add_xrange(std::vector<Comparator>& out, const Partial& p) {
  if (p.given == 0) {
    out.push_back({Op::kGe, make(0, 0, 0)});
  } else if (p.given == 3) {
    out.push_back({Op::kEq, floor_of(p)});
  } else {
    out.push_back({Op::kGe, floor_of(p)});
    out.push_back({Op::kLt, ceiling_of(p)});
  }
}

void add_tilde(std::vector<Comparator>& out, const Partial& p) {
  if (p.given == 0) {
    out.push_back({Op::kGe, make(0, 0, 0)});
    return;
  }
  out.push_back({Op::kGe, floor_of(p)});
  if (p.given == 1) {
    out.push_back({Op::kLt, make(p.parts[0] + 1, 0, 0, {"0"})});
  } else {
    out.push_back({Op::kLt, make(p.parts[0], p.parts[1] + 1, 0, {"0"})});
  }
}

void add_caret(std::vector<Comparator>& out, const Partial& p) {
  if (p.given == 0) {
    out.push_back({Op::kGe, make(0, 0, 0)});
    return;
  }
  out.push_back({Op::kGe, floor_of(p)});
  const auto major = p.parts[0];
  const auto minor = p.parts[1];
  const auto patch = p.parts[2];
  SemVer upper;
  if (major != 0 || p.given == 1) {
    upper = make(major + 1, 0, 0, {"0"});
  } else if (minor != 0 || p.given == 2) {
    upper = make(0, minor + 1, 0, {"0"});
  } else {
    upper = make(0, 0, patch + 1, {"0"});
  }
  out.push_back({Op::kLt, upper});
}

void add_operator(std::vector<Comparator>& out, Op op, const Partial& p) {
  if (p.given == 3 || op == Op::kEq) {
    if (op == Op::kEq) {
      add_xrange(out, p);
    } else {
      out.push_back({op, floor_of(p)});
    }
    return;
  }
  if (p.given == 0) {
    // ">*" and "<*" match nothing; ">=*" and "<=*" match everything.
    if (op == Op::kGt || op == Op::kLt) {
      out.push_back({Op::kLt, make(0, 0, 0, {"0"})});
    } else {
      out.push_back({Op::kGe, make(0, 0, 0)});
    }
    return;
  }
  switch (op) {
    case Op::kGt:
      out.push_back({Op::kGe, ceiling_of(p)});
      out.back().version.prerelease.clear();
      break;
    case Op::kGe:
      out.push_back({Op::kGe, floor_of(p)});
      break;
    case Op::kLt:
      out.push_back({Op::kLt, make(p.parts[0], p.parts[1], 0, {"0"})});
      if (p.given == 1) out.back().version.minor = 0;
      break;
    case Op::kLe:
      out.push_back({Op::kLt, ceiling_of(p)});
      break;
    case Op::kEq:
      break;
  }
}

/// Splits an and-set into tokens, gluing operators to their operand
/// (">= 1.2.3" is one comparator).
std::vector<std::string> tokens_of(std::string_view set) {
  std::vector<std::string> out;
  std::string pending_op;
  std::size_t i = 0;
  while (i < set.size()) {
    if (set[i] == ' ' || set[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < set.size() && set[j] != ' ' && set[j] != '\t') ++j;
    std::string word(set.substr(i, j - i));
    i = j;
    const bool only_op = word.find_first_not_of("<>=~^") == std::string::npos;
    if (only_op && word != "") {
      pending_op += word;
      continue;
    }
    out.push_back(pending_op + word);
    pending_op.clear();
  }
  if (!pending_op.empty()) out.push_back(pending_op);
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::vector<Comparator> parse_set(std::string_view set, std::string_view whole) {
  std::vector<Comparator> out;
  const auto words = tokens_of(set);
  if (words.empty()) {
    out.push_back({Op::kGe, make(0, 0, 0)});
    return out;
  }
  if (words.size() == 3 && words[1] == "-") {
    const Partial lo = parse_partial(words[0], whole);
    const Partial hi = parse_partial(words[2], whole);
    out.push_back({Op::kGe, lo.given == 0 ? make(0, 0, 0) : floor_of(lo)});
    if (hi.given == 3) {
      out.push_back({Op::kLe, floor_of(hi)});
    } else if (hi.given > 0) {
      out.push_back({Op::kLt, ceiling_of(hi)});
    }
    return out;
  }
  for (const std::string& w : words) {
    if (w == "-") bad_range(whole, "dangling hyphen");
    std::string_view s = w;
    if (s.find_first_not_of("<>=~^") == std::string_view::npos) bad_range(whole, "operator without version");
    if (s.starts_with("~>")) {
      add_tilde(out, parse_partial(s.substr(2), whole));
    } else if (s.starts_with("~")) {
      add_tilde(out, parse_partial(s.substr(1), whole));
    } else if (s.starts_with("^")) {
      add_caret(out, parse_partial(s.substr(1), whole));
    } else if (s.starts_with(">=")) {
      add_operator(out, Op::kGe, parse_partial(s.substr(2), whole));
    } else if (s.starts_with("<=")) {
      add_operator(out, Op::kLe, parse_partial(s.substr(2), whole));
    } else if (s.starts_with(">")) {
      add_operator(out, Op::kGt, parse_partial(s.substr(1), whole));
    } else if (s.starts_with("<")) {
      add_operator(out, Op::kLt, parse_partial(s.substr(1), whole));
    } else if (s.starts_with("=")) {
      add_operator(out, Op::kEq, parse_partial(s.substr(1), whole));
    } else {
      add_xrange(out, parse_partial(s, whole));
    }
  }
  return out;
}

bool test_comparator(const Comparator& c, const SemVer& v) {
  const auto cmp = v <=> c.version;
  switch (c.op) {
    case Op::kLt: return cmp < 0;
    case Op::kLe: return cmp <= 0;
    case Op::kGt: return cmp > 0;
    case Op::kGe: return cmp >= 0;
    case Op::kEq: return cmp == 0;
  }
  return false;
}

const char* op_text(Op op) {
  switch (op) {
    case Op::kLt: return "<";
    case Op::kLe: return "<=";
    case Op::kGt: return ">";
    case Op::kGe: return ">=";
    case Op::kEq: return "=";
  }
  return "";
}

}  // namespace

VersionRange VersionRange::parse(std::string_view text) {
  std::string normalized(text);
  normalized = replace_all(std::move(normalized), "\xE2\x89\xA5", ">=");  // ≥
  normalized = replace_all(std::move(normalized), "\xE2\x89\xA4", "<=");  // ≤
  VersionRange range;
  std::size_t start = 0;
  for (;;) {
    const std::size_t bar = normalized.find("||", start);
    const std::string_view part = std::string_view(normalized).substr(
        start, bar == std::string::npos ? std::string::npos : bar - start);
    range.sets_.push_back(parse_set(part, text));
    if (bar == std::string::npos) break;
    start = bar + 2;
  }
  return range;
}

bool VersionRange::satisfies(const SemVer& v) const {
  for (const auto& set : sets_) {
    bool ok = true;
    for (const auto& c : set) {
      if (!test_comparator(c, v)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (!v.is_prerelease()) return true;
    // A prerelease only matches when some comparator in the set names the
    // same major.minor.patch with a prerelease tag.
    for (const auto& c : set) {
      if (c.version.is_prerelease() && c.version.major == v.major && c.version.minor == v.minor &&
          c.version.patch == v.patch) {
        return true;
      }
    }
  }
  return false;
}

std::string VersionRange::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (i != 0) out += " || ";
    for (std::size_t j = 0; j < sets_[i].size(); ++j) {
      if (j != 0) out += " ";
      out += op_text(sets_[i][j].op);
      out += sets_[i][j].version.to_string();
    }
  }
  return out;
}

}  // namespace sleuth

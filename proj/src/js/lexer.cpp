#include "sleuth/js/lexer.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "sleuth/error.hpp"

namespace sleuth::js {

namespace {

constexpr std::uint32_t kNoChar = 0xFFFFFFFFu;

bool is_line_terminator_cp(std::uint32_t cp) {
  return cp == '\n' || cp == '\r' || cp == 0x2028 || cp == 0x2029;
}

bool is_space_cp(std::uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0B: case 0x0C: case 0x20: case 0xA0: case 0xFEFF: case 0x1680:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Longest first within each leading character.
constexpr std::array<std::string_view, 54> kPunctuators = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=",
    "=>",   "==",  "!=",  "<=",  ">=",  "&&",  "||",  "??",  "?.",  "++",  "--",
    "+=",   "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",  "<<",  ">>",  "**",
    "{",    "}",   "(",   ")",   "[",   "]",   ";",   ",",   "<",   ">",   "+",
    "-",    "*",   "/",   "%",   "&",   "|",   "^",   "!",   "~",   "?"};

}  // namespace

bool is_id_start_ascii(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '$' || c == '_';
}

bool is_id_part_ascii(unsigned char c) { return is_id_start_ascii(c) || (c >= '0' && c <= '9'); }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::uint32_t decode_utf8(std::string_view s, std::size_t& pos) {
  auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return b0;
  }
  if (pos + len > s.size()) {
    ++pos;
    return b0;
  }
  for (int i = 1; i < len; ++i) {
    auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return b0;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

Lexer::Lexer(std::string_view source) : src_(source) {
  if (src_.size() >= 3 && static_cast<unsigned char>(src_[0]) == 0xEF &&
      static_cast<unsigned char>(src_[1]) == 0xBB && static_cast<unsigned char>(src_[2]) == 0xBF) {
    pos_ = 3;
    line_start_ = 3;
  }
  if (src_.substr(pos_, 2) == "#!") {
    while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') ++pos_;
  }
}

void Lexer::fail(const std::string& message) const {
  throw ParseError(line_, pos_ - line_start_ + 1, message);
}

void Lexer::newline_at(std::uint32_t next_pos) {
  ++line_;
  line_start_ = next_pos;
}

bool Lexer::skip_trivia() {
  bool crossed = false;
  const auto n = static_cast<std::uint32_t>(src_.size());
  while (pos_ < n) {
    const char c = src_[pos_];
    if (c == ' ' || c == '\t' || c == '\v' || c == '\f') {
      ++pos_;
    } else if (c == '\n') {
      ++pos_;
      newline_at(pos_);
      crossed = true;
    } else if (c == '\r') {
      ++pos_;
      if (pos_ < n && src_[pos_] == '\n') ++pos_;
      newline_at(pos_);
      crossed = true;
    } else if (c == '/' && pos_ + 1 < n && src_[pos_ + 1] == '/') {
      pos_ += 2;
      while (pos_ < n && src_[pos_] != '\n' && src_[pos_] != '\r') {
        std::size_t p = pos_;
        std::uint32_t cp = decode_utf8(src_, p);
        if (cp == 0x2028 || cp == 0x2029) break;
        pos_ = static_cast<std::uint32_t>(p);
      }
    } else if (c == '/' && pos_ + 1 < n && src_[pos_ + 1] == '*') {
      pos_ += 2;
      bool closed = false;
      while (pos_ < n) {
        if (src_[pos_] == '*' && pos_ + 1 < n && src_[pos_ + 1] == '/') {
          pos_ += 2;
          closed = true;
          break;
        }
        std::size_t p = pos_;
        std::uint32_t cp = decode_utf8(src_, p);
        pos_ = static_cast<std::uint32_t>(p);
        if (cp == '\r' && pos_ < n && src_[pos_] == '\n') ++pos_;
        if (is_line_terminator_cp(cp)) {
          newline_at(pos_);
          crossed = true;
        }
      }
      if (!closed) fail("unterminated comment");
    } else if (static_cast<unsigned char>(c) >= 0x80) {
      std::size_t p = pos_;
      std::uint32_t cp = decode_utf8(src_, p);
      if (cp == 0x2028 || cp == 0x2029) {
        pos_ = static_cast<std::uint32_t>(p);
        newline_at(pos_);
        crossed = true;
      } else if (is_space_cp(cp)) {
        pos_ = static_cast<std::uint32_t>(p);
      } else {
        break;
      }
    } else {
      break;
    }
  }
  return crossed;
}

Token Lexer::next() {
  Token tok;
  tok.nl_before = skip_trivia();
  tok.start = pos_;
  tok.line = line_;
  tok.column = pos_ - line_start_ + 1;
  if (pos_ >= src_.size()) {
    tok.kind = TokKind::kEof;
    tok.end = pos_;
    return tok;
  }
  const auto c = static_cast<unsigned char>(src_[pos_]);
  if (is_id_start_ascii(c) || c == '\\' || c >= 0x80) {
    scan_name(tok);
  } else if (is_digit(static_cast<char>(c)) ||
             (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
    scan_number(tok);
  } else if (c == '"' || c == '\'') {
    scan_string(tok, static_cast<char>(c));
  } else if (c == '`') {
    ++pos_;
    scan_template_chunk(tok);
  } else if (c == '#') {
    ++pos_;
    if (pos_ < src_.size() && (is_id_start_ascii(static_cast<unsigned char>(src_[pos_])) ||
                               src_[pos_] == '\\' ||
                               static_cast<unsigned char>(src_[pos_]) >= 0x80)) {
      scan_name(tok);
      tok.kind = TokKind::kPrivateName;
      tok.start -= 1;
      tok.raw = src_.substr(tok.start, tok.end - tok.start);
    } else {
      fail("unexpected character '#'");
    }
  } else {
    scan_punct(tok);
  }
  return tok;
}

void Lexer::scan_name(Token& tok) {
  const std::uint32_t begin = pos_;
  bool escaped = false;
  std::string value;
  const auto n = src_.size();
  bool first = true;
  while (pos_ < n) {
    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (is_id_part_ascii(c)) {
      if (first && is_digit(static_cast<char>(c))) break;
      value.push_back(static_cast<char>(c));
      ++pos_;
    } else if (c == '\\') {
      if (pos_ + 1 >= n || src_[pos_ + 1] != 'u') fail("invalid escape in identifier");
      ++pos_;
      bool ignored = false;
      std::uint32_t cp = read_escape_code_point(ignored, false);
      if (cp == kNoChar) fail("invalid escape in identifier");
      append_utf8(value, cp);
      escaped = true;
    } else if (c >= 0x80) {
      std::size_t p = pos_;
      std::uint32_t cp = decode_utf8(src_, p);
      if (is_space_cp(cp) || is_line_terminator_cp(cp)) break;
      value.append(src_.substr(pos_, p - pos_));
      pos_ = static_cast<std::uint32_t>(p);
    } else {
      break;
    }
    first = false;
  }
  if (pos_ == begin) fail("unexpected character");
  tok.kind = TokKind::kName;
  tok.escaped = escaped;
  tok.end = pos_;
  tok.raw = src_.substr(begin, pos_ - begin);
  tok.value = std::move(value);
}

void Lexer::scan_number(Token& tok) {
  const std::uint32_t begin = pos_;
  const auto n = src_.size();
  std::string digits;
  auto read_digits = [&](auto pred) {
    bool last_sep = true;
    while (pos_ < n) {
      const char c = src_[pos_];
      if (c == '_') {
        if (last_sep) fail("invalid numeric separator");
        last_sep = true;
        ++pos_;
      } else if (pred(c)) {
        digits.push_back(c);
        last_sep = false;
        ++pos_;
      } else {
        break;
      }
    }
    if (last_sep && !digits.empty() && src_[pos_ - 1] == '_') fail("invalid numeric separator");
  };

  tok.kind = TokKind::kNumber;
  const char c0 = src_[pos_];
  const char c1 = pos_ + 1 < n ? src_[pos_ + 1] : '\0';
  if (c0 == '0' && (c1 == 'x' || c1 == 'X' || c1 == 'o' || c1 == 'O' || c1 == 'b' || c1 == 'B')) {
    pos_ += 2;
    int base = (c1 == 'x' || c1 == 'X') ? 16 : (c1 == 'o' || c1 == 'O') ? 8 : 2;
    read_digits([base](char c) {
      int v = hex_value(c);
      return v >= 0 && v < base;
    });
    if (digits.empty()) fail("missing digits after radix prefix");
    double value = 0.0;
    for (char d : digits) value = value * base + hex_value(d);
    tok.number = value;
    if (pos_ < n && src_[pos_] == 'n') {
      ++pos_;
      tok.kind = TokKind::kBigInt;
      tok.value = std::string(src_.substr(begin, 2)) + digits;
    }
  } else if (c0 == '0' && is_digit(c1)) {
    // Legacy octal (017) or decimal with a leading zero (089).
    tok.legacy_octal = true;
    ++pos_;
    while (pos_ < n && is_digit(src_[pos_])) digits.push_back(src_[pos_++]);
    bool octal = digits.find_first_of("89") == std::string::npos;
    if (octal) {
      double value = 0.0;
      for (char d : digits) value = value * 8 + (d - '0');
      tok.number = value;
    } else {
      if (pos_ < n && src_[pos_] == '.') {
        digits.push_back(src_[pos_++]);
        while (pos_ < n && is_digit(src_[pos_])) digits.push_back(src_[pos_++]);
      }
      std::from_chars(digits.data(), digits.data() + digits.size(), tok.number);
    }
  } else {
    read_digits(is_digit);
    bool integer = true;
    if (pos_ < n && src_[pos_] == '.') {
      integer = false;
      digits.push_back('.');
      ++pos_;
      if (pos_ < n && src_[pos_] == '_') fail("invalid numeric separator");
      read_digits(is_digit);
    }
    if (pos_ < n && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      integer = false;
      digits.push_back('e');
      ++pos_;
      if (pos_ < n && (src_[pos_] == '+' || src_[pos_] == '-')) digits.push_back(src_[pos_++]);
      const auto before = digits.size();
      read_digits(is_digit);
      if (digits.size() == before) fail("missing exponent digits");
    }
    if (integer && pos_ < n && src_[pos_] == 'n') {
      ++pos_;
      tok.kind = TokKind::kBigInt;
      tok.value = digits;
    }
    if (!digits.empty() && digits.front() == '.') digits.insert(digits.begin(), '0');
    if (!digits.empty() && digits.back() == '.') digits.push_back('0');
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), tok.number);
    if (res.ec == std::errc::result_out_of_range) {
      tok.number = digits.find("e-") != std::string::npos ? 0.0 : HUGE_VAL;
    }
  }
  if (pos_ < n) {
    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (is_id_start_ascii(c) || is_digit(static_cast<char>(c)) || c == '\\') {
      fail("identifier directly after number");
    }
  }
  tok.end = pos_;
  tok.raw = src_.substr(begin, pos_ - begin);
}

std::uint32_t Lexer::read_escape_code_point(bool& legacy_octal, bool in_template) {
  // pos_ sits on the character after the backslash.
  const auto n = src_.size();
  if (pos_ >= n) fail("unterminated escape");
  const char c = src_[pos_];
  auto read_hex = [&](int count) -> std::uint32_t {
    std::uint32_t v = 0;
    for (int i = 0; i < count; ++i) {
      if (pos_ >= n || hex_value(src_[pos_]) < 0) {
        if (in_template) return kNoChar;
        fail("invalid hexadecimal escape");
      }
      v = v * 16 + static_cast<std::uint32_t>(hex_value(src_[pos_++]));
    }
    return v;
  };
  switch (c) {
    case 'n': ++pos_; return '\n';
    case 't': ++pos_; return '\t';
    case 'r': ++pos_; return '\r';
    case 'b': ++pos_; return '\b';
    case 'f': ++pos_; return '\f';
    case 'v': ++pos_; return '\v';
    case 'x': ++pos_; return read_hex(2);
    case 'u': {
      ++pos_;
      if (pos_ < n && src_[pos_] == '{') {
        ++pos_;
        std::uint32_t v = 0;
        int count = 0;
        while (pos_ < n && src_[pos_] != '}') {
          int h = hex_value(src_[pos_]);
          if (h < 0) {
            if (in_template) return kNoChar;
            fail("invalid unicode escape");
          }
          v = v * 16 + static_cast<std::uint32_t>(h);
          if (v > 0x10FFFF) fail("unicode escape out of range");
          ++pos_;
          ++count;
        }
        if (pos_ >= n || count == 0) fail("invalid unicode escape");
        ++pos_;
        return v;
      }
      return read_hex(4);
    }
    case '\r':
      ++pos_;
      if (pos_ < n && src_[pos_] == '\n') ++pos_;
      newline_at(pos_);
      return kNoChar;
    case '\n':
      ++pos_;
      newline_at(pos_);
      return kNoChar;
    default:
      break;
  }
  if (c >= '0' && c <= '7') {
    if (c == '0' && (pos_ + 1 >= n || !is_digit(src_[pos_ + 1]))) {
      ++pos_;
      return 0;
    }
    legacy_octal = true;
    std::uint32_t v = static_cast<std::uint32_t>(c - '0');
    ++pos_;
    const int max_digits = c <= '3' ? 2 : 1;
    for (int i = 0; i < max_digits && pos_ < n && src_[pos_] >= '0' && src_[pos_] <= '7'; ++i) {
      v = v * 8 + static_cast<std::uint32_t>(src_[pos_++] - '0');
    }
    return v;
  }
  if (c == '8' || c == '9') {
    legacy_octal = true;
    ++pos_;
    return static_cast<std::uint32_t>(c);
  }
  std::size_t p = pos_;
  std::uint32_t cp = decode_utf8(src_, p);
  pos_ = static_cast<std::uint32_t>(p);
  if (cp == 0x2028 || cp == 0x2029) {
    newline_at(pos_);
    return kNoChar;
  }
  return cp;
}

void Lexer::scan_string(Token& tok, char quote) {
  const std::uint32_t begin = pos_;
  ++pos_;
  const auto n = src_.size();
  std::string value;
  for (;;) {
    if (pos_ >= n) fail("unterminated string literal");
    const char c = src_[pos_];
    if (c == quote) {
      ++pos_;
      break;
    }
    if (c == '\n' || c == '\r') fail("unterminated string literal");
    if (c == '\\') {
      ++pos_;
      std::uint32_t cp = read_escape_code_point(tok.legacy_octal, false);
      if (cp != kNoChar) append_utf8(value, cp);
      continue;
    }
    value.push_back(c);
    ++pos_;
  }
  tok.kind = TokKind::kString;
  tok.end = pos_;
  tok.raw = src_.substr(begin, pos_ - begin);
  tok.value = std::move(value);
}

void Lexer::scan_template_chunk(Token& tok) {
  // pos_ sits just after '`' or the '}' closing a substitution.
  const std::uint32_t begin = pos_;
  const auto n = src_.size();
  std::string cooked;
  for (;;) {
    if (pos_ >= n) fail("unterminated template literal");
    const char c = src_[pos_];
    if (c == '`') {
      tok.raw = src_.substr(begin, pos_ - begin);
      ++pos_;
      tok.tail = true;
      break;
    }
    if (c == '$' && pos_ + 1 < n && src_[pos_ + 1] == '{') {
      tok.raw = src_.substr(begin, pos_ - begin);
      pos_ += 2;
      tok.tail = false;
      break;
    }
    if (c == '\\') {
      ++pos_;
      bool octal = false;
      std::uint32_t cp = read_escape_code_point(octal, true);
      if (cp != kNoChar) append_utf8(cooked, cp);
      continue;
    }
    if (c == '\r') {
      ++pos_;
      if (pos_ < n && src_[pos_] == '\n') ++pos_;
      newline_at(pos_);
      cooked.push_back('\n');
      continue;
    }
    if (c == '\n') {
      ++pos_;
      newline_at(pos_);
      cooked.push_back('\n');
      continue;
    }
    cooked.push_back(c);
    ++pos_;
  }
  tok.kind = TokKind::kTemplate;
  tok.end = pos_;
  tok.value = std::move(cooked);
}

void Lexer::scan_punct(Token& tok) {
  const std::string_view rest = src_.substr(pos_);
  if (rest[0] == '.') {
    if (rest.substr(0, 3) == "...") {
      tok.raw = rest.substr(0, 3);
    } else {
      tok.raw = rest.substr(0, 1);
    }
  } else {
    for (std::string_view p : kPunctuators) {
      if (rest.substr(0, p.size()) == p) {
        // "?." followed by a digit is a conditional operator and a number.
        if (p == "?." && rest.size() > 2 && is_digit(rest[2])) continue;
        tok.raw = rest.substr(0, p.size());
        break;
      }
    }
    if (tok.raw.empty()) {
      if (rest[0] == '=' || rest[0] == ':' || rest[0] == '@') {
        tok.raw = rest.substr(0, 1);
      } else {
        fail(std::string("unexpected character '") + rest[0] + "'");
      }
    }
  }
  tok.kind = TokKind::kPunct;
  pos_ += static_cast<std::uint32_t>(tok.raw.size());
  tok.end = pos_;
}

Token Lexer::rescan_regex(const Token& slash) {
  Token tok;
  tok.nl_before = slash.nl_before;
  tok.start = slash.start;
  tok.line = slash.line;
  tok.column = slash.column;
  pos_ = slash.start + 1;
  const auto n = src_.size();
  bool in_class = false;
  const std::uint32_t body_begin = pos_;
  for (;;) {
    if (pos_ >= n) fail("unterminated regular expression");
    const char c = src_[pos_];
    if (c == '\n' || c == '\r') fail("unterminated regular expression");
    if (c == '\\') {
      pos_ += 2;
      continue;
    }
    if (c == '[') {
      in_class = true;
    } else if (c == ']') {
      in_class = false;
    } else if (c == '/' && !in_class) {
      break;
    }
    ++pos_;
  }
  tok.value = std::string(src_.substr(body_begin, pos_ - body_begin));
  ++pos_;
  const std::uint32_t flags_begin = pos_;
  while (pos_ < n && is_id_part_ascii(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  tok.regex_flags = std::string(src_.substr(flags_begin, pos_ - flags_begin));
  tok.kind = TokKind::kRegExp;
  tok.end = pos_;
  tok.raw = src_.substr(tok.start, pos_ - tok.start);
  return tok;
}

Token Lexer::rescan_template_continuation(const Token& close_brace) {
  Token tok;
  tok.start = close_brace.start;
  tok.line = close_brace.line;
  tok.column = close_brace.column;
  pos_ = close_brace.start + 1;
  scan_template_chunk(tok);
  return tok;
}

}  // namespace sleuth::js

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sleuth::js {

enum class TokKind : std::uint8_t {
  kEof,
  kName,  // identifiers and keywords alike; the parser decides
  kPunct,
  kNumber,
  kBigInt,
  kString,
  kTemplate,
  kRegExp,
  kPrivateName,
};

struct Token {
  TokKind kind = TokKind::kEof;
  bool nl_before = false;
  bool escaped = false;       // name spelled with \u escapes
  bool tail = false;          // template chunk closed by a backtick
  bool legacy_octal = false;  // 017-style number or \17-style string escape
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  std::string_view raw;  // template: text between delimiters; otherwise the token slice
  std::string value;     // cooked name, string, template chunk, regexp body, bigint digits
  std::string regex_flags;
  double number = 0.0;

  bool is(std::string_view punct) const { return kind == TokKind::kPunct && raw == punct; }
  bool is_name(std::string_view name) const {
    return kind == TokKind::kName && !escaped && value == name;
  }
};

/// On-demand scanner. Regular expressions and template continuations are
/// context sensitive, so the parser asks for them explicitly via the rescan
/// entry points.
class Lexer {
 public:
  struct State {
    std::uint32_t pos = 0;
    std::uint32_t line = 1;
    std::uint32_t line_start = 0;
  };

  explicit Lexer(std::string_view source);

  Token next();
  Token rescan_regex(const Token& slash);
  Token rescan_template_continuation(const Token& close_brace);

  State state() const { return {pos_, line_, line_start_}; }
  void restore(State s) {
    pos_ = s.pos;
    line_ = s.line;
    line_start_ = s.line_start;
  }

  std::string_view source() const { return src_; }

 private:
  [[noreturn]] void fail(const std::string& message) const;
  bool skip_trivia();  // returns true when a line terminator was crossed
  void scan_name(Token& tok);
  void scan_number(Token& tok);
  void scan_string(Token& tok, char quote);
  void scan_template_chunk(Token& tok);
  void scan_punct(Token& tok);
  std::uint32_t read_escape_code_point(bool& legacy_octal, bool in_template);
  void newline_at(std::uint32_t next_pos);

  std::string_view src_;
  std::uint32_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t line_start_ = 0;
};

// Character helpers shared with the printer.
bool is_id_start_ascii(unsigned char c);
bool is_id_part_ascii(unsigned char c);
void append_utf8(std::string& out, std::uint32_t cp);
/// Decodes one UTF-8 (or WTF-8) sequence at `pos`, advancing it. Invalid bytes
/// decode as themselves.
std::uint32_t decode_utf8(std::string_view s, std::size_t& pos);

}  // namespace sleuth::js

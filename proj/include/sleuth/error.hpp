#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sleuth {

enum class ErrorCode {
  kParseError,
  kEmptyInput,
  kUnknownToken,
  kExternalToolError,
  kParamMismatch,
  kConfigMismatch,
  kSelectionError,
  kDuplicateRecord,
  kFormatError,
  kCorruptIndex,
  kAllFilesUnparseable,
  kPatternTooShort,
  kUnknownPackage,
  kInvalidVersion,
  kInvalidRange,
  kEmptyDetection,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error with the 1-based line and column of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::uint32_t line, std::uint32_t column, const std::string& message)
      : Error(ErrorCode::kParseError, std::to_string(line) + ":" + std::to_string(column) +
                                          ": " + message),
        line_(line),
        column_(column) {}

  std::uint32_t line() const noexcept { return line_; }
  std::uint32_t column() const noexcept { return column_; }

 private:
  std::uint32_t line_;
  std::uint32_t column_;
};

/// Selection failures carry a short machine-readable reason ("no-package-json",
/// "typescript-only", "no-files").
class SelectionError : public Error {
 public:
  SelectionError(std::string reason, const std::string& message)
      : Error(ErrorCode::kSelectionError, message), reason_(std::move(reason)) {}

  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

}  // namespace sleuth

#include "sleuth/error.hpp"

namespace sleuth {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kUnknownToken: return "UnknownToken";
    case ErrorCode::kExternalToolError: return "ExternalToolError";
    case ErrorCode::kParamMismatch: return "ParamMismatch";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kSelectionError: return "SelectionError";
    case ErrorCode::kDuplicateRecord: return "DuplicateRecord";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kCorruptIndex: return "CorruptIndex";
    case ErrorCode::kAllFilesUnparseable: return "AllFilesUnparseable";
    case ErrorCode::kPatternTooShort: return "PatternTooShort";
    case ErrorCode::kUnknownPackage: return "UnknownPackage";
    case ErrorCode::kInvalidVersion: return "InvalidVersion";
    case ErrorCode::kInvalidRange: return "InvalidRange";
    case ErrorCode::kEmptyDetection: return "EmptyDetection";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sleuth

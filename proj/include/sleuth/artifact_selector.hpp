#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sleuth {

enum class SelectionStrategy { kPrebundledField, kEntrypointResolution, kHeuristic };

std::string_view strategy_name(SelectionStrategy strategy);
/// Throws FormatError.
SelectionStrategy parse_strategy(std::string_view name);

struct SelectionResult {
  std::vector<std::string> files;  // relative, '/'-separated
  SelectionStrategy strategy = SelectionStrategy::kHeuristic;
  std::vector<std::string> warnings;
  /// Bare specifiers of other packages seen while walking imports.
  std::vector<std::string> dependencies;
};

struct Resolution {
  enum class Kind { kPath, kExternal, kUnresolved };
  Kind kind = Kind::kUnresolved;
  std::string path;     // artifact-relative, for kPath
  std::string package;  // for kExternal
};

/// Condition names honoured in `exports` / `imports` maps, in priority order.
const std::vector<std::string>& export_conditions();

/// Resolves `specifier` as imported from `from_file` (artifact-relative).
Resolution resolve_specifier(const std::filesystem::path& artifact_dir, std::string_view from_file,
                             std::string_view specifier, const nlohmann::json& package_json);

/// Static and dynamic import / require specifiers of one file in source
/// order. Falls back to a regular-expression scan when the file does not parse.
std::vector<std::string> import_specifiers(std::string_view source, bool* used_fallback = nullptr);

/// Throws SelectionError with reason "no-package-json", "bad-package-json",
/// "typescript-only" or "no-files".
SelectionResult select_files(const std::filesystem::path& artifact_dir);

/// Extracts a gzip'd npm tarball into `destination`, dropping the leading
/// path component ("package/"). Throws IoError / FormatError.
void unpack_tarball(const std::filesystem::path& tarball, const std::filesystem::path& destination);

}  // namespace sleuth

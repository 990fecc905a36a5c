#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sleuth::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputFailure = 1;
inline constexpr int kExitFatal = 2;

/// Environment variable naming the index used when --index is omitted.
inline constexpr const char* kIndexEnv = "BUNDLESLEUTH_INDEX";
/// Environment variable naming the run-manifest destination when --manifest
/// is omitted.
inline constexpr const char* kManifestEnv = "BUNDLESLEUTH_MANIFEST";

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sleuth::cli

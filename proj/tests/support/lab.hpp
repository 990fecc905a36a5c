#pragma once

#include <random>
#include <string>
#include <vector>

#include "sleuth/pseudo_bundler.hpp"
#include "support/renamer.hpp"
#include "support/synthetic_js.hpp"
#include "support/temp_dir.hpp"

namespace sleuth::testing {

/// Toy packages with patch releases. Each release replaces two statements of
/// its predecessor and inserts two new ones, so consecutive versions differ
/// by at least three statements.
class Lab {
 public:
  Lab(const TempDir& dir, int packages, int versions, std::uint64_t seed = 1) : dir_(dir) {
    std::mt19937_64 rng(seed);
    for (int p = 0; p < packages; ++p) {
      Package pkg;
      pkg.name = "toy-" + std::string(1, static_cast<char>('a' + p % 26)) + std::to_string(p);
      SyntheticJs gen(seed * 7919 + static_cast<std::uint64_t>(p));
      std::vector<std::string> main_body;
      std::vector<std::string> util_body;
      for (int i = 0; i < 36; ++i) main_body.push_back(gen.statement(3));
      for (int i = 0; i < 18; ++i) util_body.push_back(gen.statement(3));
      for (int v = 0; v < versions; ++v) {
        if (v > 0) {
          evolve(main_body, gen, rng);
          evolve(util_body, gen, rng);
        }
        const std::string version = "1.0." + std::to_string(v);
        pkg.versions.push_back(version);
        const std::string root = pkg.name + "@" + version;
        std::string main = "import { helper } from './util.js';\nexport function run" + std::to_string(p) + "() {\n";
        for (const auto& s : main_body) main += s;
        main += "  return helper();\n}\n";
        std::string util = "export function helper() {\n";
        for (const auto& s : util_body) util += s;
        util += "}\n";
        dir_.write(root + "/package.json", "{\"name\":\"" + pkg.name + "\",\"version\":\"" + version +
                                               "\",\"module\":\"index.js\"}");
        dir_.write(root + "/index.js", main);
        dir_.write(root + "/util.js", util);
        pkg.sources.push_back({{"index.js", main}, {"util.js", util}});
      }
      packages_.push_back(std::move(pkg));
    }
  }

  struct Package {
    std::string name;
    std::vector<std::string> versions;
    std::vector<std::vector<SourceFile>> sources;
  };

  const std::vector<Package>& packages() const { return packages_; }
  std::filesystem::path artifact(std::size_t p, std::size_t v) const {
    return dir_.path() / (packages_[p].name + "@" + packages_[p].versions[v]);
  }

  /// Pseudo-bundle of one release, identifiers mangled and whitespace removed.
  std::string pseudo_bundled(std::size_t p, std::size_t v) const {
    return rename_all_identifiers(pseudo_bundle(packages_[p].sources[v]).source);
  }

  /// Module files concatenated as they are, then mangled.
  std::string concatenated(std::size_t p, std::size_t v) const {
    std::string out;
    for (const auto& f : packages_[p].sources[v]) out += f.source + "\n";
    return rename_all_identifiers(out);
  }

  /// Unrelated code with roughly `tokens` AST nodes.
  static std::string first_party(std::uint64_t seed, std::size_t statements) {
    SyntheticJs gen(seed ^ 0x5eed5eedULL);
    std::string out = "function app" + std::to_string(seed % 1000) + "() {\n";
    for (std::size_t i = 0; i < statements; ++i) out += gen.statement(3);
    return out + "}\n";
  }

 private:
  static void evolve(std::vector<std::string>& body, SyntheticJs& gen, std::mt19937_64& rng) {
    for (int i = 0; i < 2; ++i) body[rng() % body.size()] = gen.statement(3);
    for (int i = 0; i < 2; ++i) {
      body.insert(body.begin() + static_cast<std::ptrdiff_t>(rng() % (body.size() + 1)), gen.statement(3));
    }
  }

  const TempDir& dir_;
  std::vector<Package> packages_;
};

}  // namespace sleuth::testing

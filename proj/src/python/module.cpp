#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sleuth/bundle_analyzer.hpp"
#include "sleuth/error.hpp"
#include "sleuth/ground_truth.hpp"
#include "sleuth/metrics.hpp"
#include "sleuth/package_index.hpp"
#include "sleuth/version_detector.hpp"

namespace py = pybind11;
using namespace sleuth;

namespace {

std::vector<std::string> token_names(const TokenString& ts, const TokenVocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(ts.size());
  for (auto id : ts.tokens) out.emplace_back(vocab.name(id));
  return out;
}

DetectionConfig make_config(bool compartments, double threshold, std::size_t min_shared,
                            std::optional<std::size_t> max_width) {
  DetectionConfig c;
  c.use_compartments = compartments;
  c.relative_threshold = threshold;
  c.min_shared = min_shared;
  c.max_range_width = max_width;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Package version detection in JavaScript bundles";
  m.attr("__version__") = SLEUTH_VERSION;

  py::register_exception<Error>(m, "SleuthError");

  m.def("normalize", [](const std::string& source) { return normalize(source); }, py::arg("source"),
        "Source after the built-in normalizer passes, printed compactly.");
  m.def(
      "tokens",
      [](const std::string& source, bool normalized) {
        const auto cfg = normalized ? NormalizationConfig{} : NormalizationConfig::none();
        return token_names(normalize_tokens(source, cfg), TokenVocabulary::standard());
      },
      py::arg("source"), py::arg("normalized") = true, "Pre-order ESTree node types.");
  m.def(
      "fingerprint",
      [](const std::string& source, std::uint32_t k, std::uint32_t w) {
        const FingerprintParams params{k, w, std::string(kHashMixedPoly31)};
        params.validate();
        const auto fps = fingerprint(normalize_tokens(source), params);
        std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
        for (const auto& f : fps.entries()) out.emplace_back(f.hash, f.position);
        return out;
      },
      py::arg("source"), py::arg("k") = 27, py::arg("w") = 15, "Winnowed (hash, position) pairs.");
  m.def(
      "similarity",
      [](const std::string& reference, const std::string& bundle, std::uint32_t k, std::uint32_t w) {
        const FingerprintParams params{k, w, std::string(kHashMixedPoly31)};
        py::gil_scoped_release release;
        return containment_similarity(fingerprint(normalize_tokens(reference), params),
                                      fingerprint(normalize_tokens(bundle), params));
      },
      py::arg("reference"), py::arg("bundle"), py::arg("k") = 27, py::arg("w") = 15);
  m.def(
      "identify_bundler",
      [](const std::string& source) {
        return identify_bundler(normalize_tokens(source), default_fingerprints());
      },
      py::arg("source"));

  py::class_<PackageIndex>(m, "PackageIndex")
      .def(py::init([](std::uint32_t k, std::uint32_t w) {
             FingerprintParams p{k, w, std::string(kHashMixedPoly31)};
             p.validate();
             return PackageIndex(p);
           }),
           py::arg("k") = 27, py::arg("w") = 15)
      .def_static(
          "load", [](const std::filesystem::path& p) { return PackageIndex::load(p); }, py::arg("path"))
      .def(
          "add",
          [](PackageIndex& self, const std::filesystem::path& dir, const std::string& name,
             const std::string& version) {
            py::gil_scoped_release release;
            self.index_add(dir, name, version);
          },
          py::arg("artifact_dir"), py::arg("name"), py::arg("version"))
      .def(
          "save",
          [](const PackageIndex& self, const std::filesystem::path& p, const std::string& format) {
            self.save(p, format == "json" ? IndexFormat::kJson : IndexFormat::kBinary);
          },
          py::arg("path"), py::arg("format") = "binary")
      .def("records",
           [](const PackageIndex& self) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& r : self.records()) out.emplace_back(r.name, r.version);
             return out;
           })
      .def("packages", &PackageIndex::package_names)
      .def("verify", &PackageIndex::verify)
      .def("digest", [](const PackageIndex& self) { return to_hex(self.content_digest()); })
      .def("__len__", [](const PackageIndex& self) { return self.records().size(); });

  m.def(
      "detect_json",
      [](const std::string& source, const PackageIndex& index, bool compartments, double threshold,
         std::size_t min_shared, std::optional<std::size_t> max_width,
         std::optional<std::vector<std::string>> packages, const std::string& bundle_id) {
        const auto config = make_config(compartments, threshold, min_shared, max_width);
        py::gil_scoped_release release;
        return detect(source, index, config, packages ? &*packages : nullptr, bundle_id).to_json().dump();
      },
      py::arg("source"), py::arg("index"), py::arg("compartments") = false, py::arg("threshold") = 1.0,
      py::arg("min_shared") = kDefaultMinShared, py::arg("max_width") = py::none(),
      py::arg("packages") = py::none(), py::arg("bundle_id") = "", "Detection report as a JSON string.");

  m.def(
      "ground_truth",
      [](const std::string& source_map) {
        std::vector<std::tuple<std::string, std::optional<std::string>, std::string>> out;
        for (const auto& e : extract_ground_truth(parse_source_map(source_map))) {
          out.emplace_back(e.package, e.version ? std::optional(e.version->to_string()) : std::nullopt,
                           std::string(evidence_name(e.evidence)));
        }
        return out;
      },
      py::arg("source_map"), "(package, version or None, evidence) from a source map.");
  m.def(
      "parse_cdn_url",
      [](const std::string& url) {
        const auto info = parse_cdn_url(url);
        py::dict d;
        d["provider"] = std::string(provider_name(info.provider));
        d["package"] = info.package;
        d["version_spec"] = std::string(version_spec_name(info.kind));
        d["version"] = info.kind == VersionSpecKind::kFixed ? py::object(py::str(info.fixed->to_string()))
                       : info.kind == VersionSpecKind::kAliased ? py::object(py::str(info.alias))
                                                                  : py::object(py::none());
        d["file"] = info.file;
        return d;
      },
      py::arg("url"));

  m.def(
      "compare_versions",
      [](const std::string& a, const std::string& b) {
        const auto c = parse_semver(a) <=> parse_semver(b);
        return c < 0 ? -1 : c > 0 ? 1 : 0;
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "satisfies",
      [](const std::string& version, const std::string& range) {
        return VersionRange::parse(range).satisfies(parse_semver(version));
      },
      py::arg("version"), py::arg("range"));
  auto versions_of = [](const std::vector<std::string>& texts) {
    std::vector<SemVer> out;
    for (const auto& t : texts) out.push_back(parse_semver(t));
    return out;
  };
  m.def(
      "version_difference",
      [versions_of](const std::string& correct, const std::vector<std::string>& detected) {
        const auto d = version_difference(parse_semver(correct), versions_of(detected));
        return std::make_tuple(d.d_major, d.d_minor, d.d_patch);
      },
      py::arg("correct"), py::arg("detected"));
  m.def(
      "difference_existence",
      [versions_of](const std::string& correct, const std::vector<std::string>& detected) {
        const auto e = difference_existence(parse_semver(correct), versions_of(detected));
        return std::make_tuple(e.major_err, e.minor_err, e.patch_err);
      },
      py::arg("correct"), py::arg("detected"));
}

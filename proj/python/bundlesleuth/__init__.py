"""Detect npm package versions in minified JavaScript bundles."""

import json

from ._core import (
    PackageIndex,
    SleuthError,
    __version__,
    compare_versions,
    detect_json,
    difference_existence,
    fingerprint,
    ground_truth,
    identify_bundler,
    normalize,
    parse_cdn_url,
    satisfies,
    similarity,
    tokens,
    version_difference,
)


def detect(source, index, **options):
    """Detection report for one bundle as a dict; options as for detect_json."""
    return json.loads(detect_json(source, index, **options))


__all__ = [
    "PackageIndex",
    "SleuthError",
    "__version__",
    "compare_versions",
    "detect",
    "detect_json",
    "difference_existence",
    "fingerprint",
    "ground_truth",
    "identify_bundler",
    "normalize",
    "parse_cdn_url",
    "satisfies",
    "similarity",
    "tokens",
    "version_difference",
]

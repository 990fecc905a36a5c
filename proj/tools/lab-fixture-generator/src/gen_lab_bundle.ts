import { createRequire } from "node:module";
import { dirname, join, resolve } from "node:path";

import { FixtureManifest, writeManifest } from "./manifest.js";

const require = createRequire(import.meta.url);

/** Bundles the manifest's entry packages with webpack, code split off unless the manifest asks for it. */
export async function genLabBundle(manifestPath: string, manifest: FixtureManifest): Promise<string[]> {
  let webpack: typeof import("webpack");
  try {
    webpack = require("webpack");
  } catch {
    throw new Error("webpack is not installed; run npm ci in tools/lab-fixture-generator");
  }
  const root = dirname(resolve(manifestPath));
  const entry = manifest.entries.map((e) => join(root, e.path));
  const config: import("webpack").Configuration = {
    mode: "production",
    context: root,
    entry,
    devtool: "source-map",
    output: { path: join(root, "out"), filename: "[name].js", chunkFilename: "[name].chunk.js" },
    optimization: {
      minimize: manifest.minifier.enabled,
      splitChunks: manifest.code_split ? { chunks: "all", minSize: 0 } : false,
      concatenateModules: false,
    },
  };
  if (manifest.minifier.enabled) {
    const Terser = require("terser-webpack-plugin");
    config.optimization!.minimizer = [
      new Terser({ terserOptions: { mangle: manifest.minifier.mangle, compress: manifest.minifier.compress } }),
    ];
  }
  const stats = await new Promise<import("webpack").Stats>((ok, fail) =>
    webpack(config, (err, s) => (err || !s ? fail(err ?? new Error("webpack returned no stats")) : ok(s))),
  );
  if (stats.hasErrors()) throw new Error(stats.toString({ all: false, errors: true }));
  const assets = Object.keys(stats.compilation.assets).sort().map((a) => join("out", a));
  manifest.artifacts = assets;
  writeManifest(manifestPath, manifest);
  return assets;
}

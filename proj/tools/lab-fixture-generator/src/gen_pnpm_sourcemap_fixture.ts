import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { FixtureManifest, MANIFEST_SCHEMA, writeManifest } from "./manifest.js";

export interface StorePackage {
  name: string;
  version: string;
  peer?: string;
}

export const DEFAULT_STORE: StorePackage[] = [
  { name: "react", version: "18.2.0" },
  { name: "react-dom", version: "18.2.0", peer: "react@18.2.0" },
  { name: "@babel/runtime", version: "7.24.4" },
  { name: "@vue/shared", version: "3.4.21" },
];

/** pnpm store directory name: scope slash becomes "+", peers go in parentheses. */
export function storeDir(p: StorePackage): string {
  const base = `${p.name.replace("/", "+")}@${p.version}`;
  return p.peer ? `${base}(${p.peer})` : base;
}

export function sourcePath(p: StorePackage, file = "index.js"): string {
  return `webpack:///./node_modules/.pnpm/${storeDir(p)}/node_modules/${p.name}/${file}`;
}

export function genPnpmSourcemapFixture(outDir: string, store: StorePackage[] = DEFAULT_STORE): FixtureManifest {
  const id = "pnpm-sourcemap";
  const dir = join(outDir, id);
  mkdirSync(dir, { recursive: true });
  const sources = ["webpack:///./src/main.js", ...store.map((p) => sourcePath(p))];
  const map = { version: 3, file: "bundle.js", sources, names: [], mappings: "" };
  writeFileSync(join(dir, "bundle.js.map"), JSON.stringify(map) + "\n");
  const manifest: FixtureManifest = {
    schema: MANIFEST_SCHEMA,
    id,
    bundler: { name: "none", version: "0" },
    minifier: { enabled: false, mangle: false, compress: false },
    code_split: false,
    entries: [],
    expected: Object.fromEntries(store.map((p) => [p.name, p.version])),
    artifacts: ["bundle.js.map"],
  };
  writeManifest(join(dir, "manifest.json"), manifest);
  return manifest;
}

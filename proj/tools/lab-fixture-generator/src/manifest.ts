import { readFileSync, writeFileSync } from "node:fs";

export const MANIFEST_SCHEMA = "bundlesleuth-fixture/1";

export interface EntryPackage {
  name: string;
  version: string;
  /** Directory holding the package, relative to the manifest. */
  path: string;
}

export interface MinifierSettings {
  enabled: boolean;
  mangle: boolean;
  compress: boolean;
}

export interface FixtureManifest {
  schema: typeof MANIFEST_SCHEMA;
  id: string;
  bundler: { name: string; version: string };
  minifier: MinifierSettings;
  code_split: boolean;
  entries: EntryPackage[];
  /** package name -> exact version the primary pipeline must report */
  expected: Record<string, string>;
  /** Generated files, relative to the manifest. */
  artifacts: string[];
}

export function readManifest(path: string): FixtureManifest {
  const m = JSON.parse(readFileSync(path, "utf8")) as FixtureManifest;
  if (m.schema !== MANIFEST_SCHEMA) throw new Error(`${path}: unsupported schema ${String(m.schema)}`);
  if (!m.id || !Array.isArray(m.entries) || typeof m.expected !== "object") {
    throw new Error(`${path}: missing id, entries or expected`);
  }
  return m;
}

export function writeManifest(path: string, m: FixtureManifest): void {
  writeFileSync(path, JSON.stringify(m, null, 2) + "\n");
}

import { copyFileSync, mkdirSync, readdirSync } from "node:fs";
import { join } from "node:path";

/**
 * Copies the canonical runtime preamble fragments (one `//@pattern` section
 * per pattern) into `outDir`. `bundlesleuth fingerprints derive` turns them
 * into the fingerprint data file.
 */
export function genRuntimePreambles(preambleDir: string, outDir: string): string[] {
  mkdirSync(outDir, { recursive: true });
  const files = readdirSync(preambleDir).filter((f) => f.endsWith(".js")).sort();
  for (const f of files) copyFileSync(join(preambleDir, f), join(outDir, f));
  return files;
}

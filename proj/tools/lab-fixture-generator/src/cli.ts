#!/usr/bin/env node
import { readdirSync } from "node:fs";
import { join } from "node:path";
import { parseArgs } from "node:util";

import { genLabBundle } from "./gen_lab_bundle.js";
import { genPnpmSourcemapFixture } from "./gen_pnpm_sourcemap_fixture.js";
import { genRuntimePreambles } from "./gen_runtime_preambles.js";
import { readManifest } from "./manifest.js";

const { positionals, values } = parseArgs({
  allowPositionals: true,
  options: {
    out: { type: "string", default: "tests/fixtures/lab" },
    preambles: { type: "string", default: "../../data/preambles" },
  },
});
const command = positionals[0] ?? "all";
const out = values.out!;

async function bundles(): Promise<void> {
  for (const id of readdirSync(out, { withFileTypes: true })) {
    if (!id.isDirectory()) continue;
    const path = join(out, id.name, "manifest.json");
    let manifest;
    try {
      manifest = readManifest(path);
    } catch {
      continue;
    }
    if (manifest.entries.length === 0) continue;
    const files = await genLabBundle(path, manifest);
    console.log(`${manifest.id}: ${files.join(" ")}`);
  }
}

try {
  if (command === "pnpm" || command === "all") console.log(genPnpmSourcemapFixture(out).id);
  if (command === "preambles") {
    console.log(genRuntimePreambles(values.preambles!, join(out, "preambles")).join(" "));
  }
  if (command === "bundles" || command === "all") await bundles();
} catch (e) {
  console.error(e instanceof Error ? e.message : e);
  process.exit(1);
}

/**
 * Offline SPIR-V build: writes the GLSL sources to dist/glsl/, compiles
 * them with glslangValidator targeting Vulkan 1.3 (SPIR-V 1.6) when the
 * compiler is on PATH, and records SHA-256 checksums of the binaries.
 *
 * Hosts without the toolchain still get the GLSL tree; the renderer's
 * shader-directory loading then has nothing to validate against and the
 * corresponding tests skip.
 */

import { execFileSync, spawnSync } from "node:child_process";
import { createHash } from "node:crypto";
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { MODULES, ShaderModule } from "./sources.js";

export interface CompileResult {
  name: string;
  spvPath: string | null;
  sha256: string | null;
}

export function findGlslang(): string | null {
  for (const candidate of ["glslangValidator", "glslang"]) {
    const probe = spawnSync(candidate, ["--version"], { encoding: "utf-8" });
    if (probe.status === 0) return candidate;
  }
  return null;
}

export function writeGlsl(outDir: string, corrected = false): string[] {
  const glslDir = join(outDir, "glsl");
  mkdirSync(glslDir, { recursive: true });
  const written: string[] = [];
  for (const mod of modules(corrected)) {
    const path = join(glslDir, mod.name);
    writeFileSync(path, mod.source);
    written.push(path);
  }
  return written;
}

function modules(corrected: boolean): ShaderModule[] {
  return MODULES.filter((m) => corrected || !m.corrected);
}

export function compileAll(outDir: string, corrected = false): CompileResult[] {
  const compiler = findGlslang();
  writeGlsl(outDir, corrected);
  const spvDir = join(outDir, "spv");
  mkdirSync(spvDir, { recursive: true });
  const results: CompileResult[] = [];
  for (const mod of modules(corrected)) {
    if (!compiler) {
      results.push({ name: mod.name, spvPath: null, sha256: null });
      continue;
    }
    const src = join(outDir, "glsl", mod.name);
    const spv = join(spvDir, `${mod.name}.spv`);
    execFileSync(compiler, [
      "--target-env", "vulkan1.3",
      "-S", mod.stage,
      "-o", spv,
      src,
    ]);
    const digest = createHash("sha256").update(readFileSync(spv)).digest("hex");
    results.push({ name: mod.name, spvPath: spv, sha256: digest });
  }
  if (compiler) {
    const manifest = results
      .map((r) => `${r.sha256}  ${r.name}.spv`)
      .join("\n");
    writeFileSync(join(spvDir, "CHECKSUMS.txt"), manifest + "\n");
  }
  return results;
}

const invokedDirectly =
  process.argv[1] && process.argv[1].endsWith("compile.ts");
if (invokedDirectly) {
  const corrected = process.argv.includes("--corrected");
  const results = compileAll("dist", corrected);
  for (const r of results) {
    console.log(
      r.spvPath
        ? `compiled ${r.name} -> ${r.spvPath} (${r.sha256!.slice(0, 12)})`
        : `wrote GLSL for ${r.name}; no SPIR-V compiler on PATH`,
    );
  }
}

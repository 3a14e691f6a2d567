/**
 * Figure generator for the offload simulator's CSV outputs.
 *
 * Reads a results directory produced by scripts/reproduce_experiments.py
 * (or by the `leo-offload` CLI with matching filenames) and writes SVG
 * figures. Each subcommand renders one figure; `all` renders every figure
 * whose inputs are present.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { buildBreakdownOption, summarizeBreakdown } from "./breakdown.js";
import { buildCapabilityOption } from "./capability.js";
import { buildRegionsOption, collectRegions } from "./regions.js";
import { renderSvg } from "./render.js";
import {
  SCHEMES,
  parseSweepCsv,
  parseTableCsv,
  parseTaskCsv,
  type SchemeName,
} from "./schemas.js";
import { buildSurfaceOption, collectSurface } from "./surface.js";

const USAGE = `usage: figures <command> [--in DIR] [--out DIR]

commands:
  surface     delay heatmaps per scheme, from sweep_single_task.csv
  regions     best-scheme map, from sweep_contended.csv
  breakdown   stacked delay components per scheme, from run_<scheme>.csv
  capability  improvement vs capability, from table.csv
  all         every figure above

options:
  --in DIR    results directory to read (default: results)
  --out DIR   directory for the SVG files (default: figures)
  --help      show this message`;

function readCsv(dir: string, name: string): string {
  try {
    return readFileSync(join(dir, name), "utf8");
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    throw new Error(`cannot read ${join(dir, name)}: ${detail}`);
  }
}

function writeFigure(outDir: string, name: string, svg: string): string {
  const path = join(outDir, name);
  writeFileSync(path, svg, "utf8");
  return path;
}

export function renderSurfaceFigure(inDir: string, outDir: string): string {
  const rows = parseSweepCsv(readCsv(inDir, "sweep_single_task.csv"), "sweep_single_task.csv");
  const grid = collectSurface(rows);
  return writeFigure(outDir, "surface.svg", renderSvg(buildSurfaceOption(grid), 1500, 520));
}

export function renderRegionsFigure(inDir: string, outDir: string): string {
  const rows = parseSweepCsv(readCsv(inDir, "sweep_contended.csv"), "sweep_contended.csv");
  const map = collectRegions(rows);
  return writeFigure(outDir, "regions.svg", renderSvg(buildRegionsOption(map), 860, 640));
}

export function renderBreakdownFigure(inDir: string, outDir: string): string {
  const bars = SCHEMES.map((scheme: SchemeName) => {
    const name = `run_${scheme}.csv`;
    return summarizeBreakdown(parseTaskCsv(readCsv(inDir, name), name), name);
  });
  return writeFigure(outDir, "breakdown.svg", renderSvg(buildBreakdownOption(bars), 760, 560));
}

export function renderCapabilityFigure(inDir: string, outDir: string): string {
  const rows = parseTableCsv(readCsv(inDir, "table.csv"), "table.csv");
  return writeFigure(outDir, "capability.svg", renderSvg(buildCapabilityOption(rows), 860, 560));
}

const COMMANDS: Record<string, (inDir: string, outDir: string) => string> = {
  surface: renderSurfaceFigure,
  regions: renderRegionsFigure,
  breakdown: renderBreakdownFigure,
  capability: renderCapabilityFigure,
};

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string", default: "results" },
        out: { type: "string", default: "figures" },
        help: { type: "boolean", default: false },
      },
    });
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    process.stderr.write(`error: ${detail}\n${USAGE}\n`);
    return 1;
  }

  if (parsed.values.help) {
    process.stdout.write(`${USAGE}\n`);
    return 0;
  }

  const [command, ...extra] = parsed.positionals;
  if (command === undefined) {
    process.stderr.write(`error: missing command\n${USAGE}\n`);
    return 1;
  }
  if (extra.length > 0) {
    process.stderr.write(`error: unexpected argument ${extra[0]}\n${USAGE}\n`);
    return 1;
  }
  const names =
    command === "all" ? Object.keys(COMMANDS) : command in COMMANDS ? [command] : null;
  if (names === null) {
    process.stderr.write(`error: unknown command ${command}\n${USAGE}\n`);
    return 1;
  }

  const inDir = parsed.values.in;
  const outDir = parsed.values.out;
  try {
    mkdirSync(outDir, { recursive: true });
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    process.stderr.write(`error: cannot create ${outDir}: ${detail}\n`);
    return 1;
  }

  for (const name of names) {
    const render = COMMANDS[name];
    if (render === undefined) continue;
    try {
      const path = render(inDir, outDir);
      process.stdout.write(`wrote ${path}\n`);
    } catch (err) {
      const detail = err instanceof Error ? err.message : String(err);
      process.stderr.write(`error: ${name}: ${detail}\n`);
      return 1;
    }
  }
  return 0;
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exitCode = main(process.argv.slice(2));
}

/**
 * Row schemas for the three CSV contracts the simulator writes, plus a
 * strict parser that names the file, row and column of the first problem.
 */

import Papa from "papaparse";
import { z } from "zod";

export const SCHEMES = ["ground", "onehop", "adaptive"] as const;
export type SchemeName = (typeof SCHEMES)[number];

/** Scheme series colors used across every figure. */
export const SCHEME_COLORS: Record<SchemeName, string> = {
  ground: "#3b6fc9",
  onehop: "#3a9440",
  adaptive: "#c83a3a",
};

const finite = z.number().finite();

export const sweepRowSchema = z.object({
  n_bits: finite.positive(),
  c_gflo: finite.positive(),
  scheme: z.enum(SCHEMES),
  mean_delay_s: finite.nonnegative().nullable(),
  argmin_scheme: z.enum(SCHEMES).or(z.literal("")),
});
export type SweepRow = z.infer<typeof sweepRowSchema>;

export const taskRowSchema = z
  .object({
    scheme: z.enum(SCHEMES),
    status: z.enum(["ok", "dropped"]),
    isl_tx_s: finite.nonnegative().nullable(),
    sgl_tx_s: finite.nonnegative().nullable(),
    compute_s: finite.nonnegative().nullable(),
    overall_delay_s: finite.nonnegative().nullable(),
  })
  .superRefine((row, ctx) => {
    if (row.status !== "ok") return;
    for (const key of ["isl_tx_s", "sgl_tx_s", "compute_s", "overall_delay_s"] as const) {
      if (row[key] === null) {
        ctx.addIssue({
          code: z.ZodIssueCode.custom,
          path: [key],
          message: "must be set on an ok row",
        });
      }
    }
  });
export type TaskRow = z.infer<typeof taskRowSchema>;

export const tableRowSchema = z.object({
  capability_gflops: finite.positive(),
  impr_vs_ground_pct: finite,
  impr_vs_onehop_pct: finite,
});
export type TableRow = z.infer<typeof tableRowSchema>;

const NUMERIC_COLUMNS: Record<string, readonly string[]> = {
  sweep: ["n_bits", "c_gflo", "mean_delay_s"],
  task: ["isl_tx_s", "sgl_tx_s", "compute_s", "overall_delay_s"],
  table: ["capability_gflops", "impr_vs_ground_pct", "impr_vs_onehop_pct"],
};

function parseRows<T>(
  csvText: string,
  schema: z.ZodType<T>,
  numeric: readonly string[],
  source: string,
): T[] {
  const parsed = Papa.parse<Record<string, string>>(csvText.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]!;
    throw new Error(`${source}: ${e.message} (row ${e.row ?? "?"})`);
  }
  if (parsed.data.length === 0) {
    throw new Error(`${source}: no data rows`);
  }
  return parsed.data.map((raw, i) => {
    const row: Record<string, unknown> = { ...raw };
    for (const col of numeric) {
      const text = raw[col];
      if (text === undefined) continue; // zod reports the missing column
      row[col] = text === "" ? null : Number(text);
    }
    const result = schema.safeParse(row);
    if (!result.success) {
      const issue = result.error.issues[0]!;
      const where = issue.path.length > 0 ? issue.path.join(".") : "row";
      throw new Error(`${source} row ${i + 2}: ${where}: ${issue.message}`);
    }
    return result.data;
  });
}

export function parseSweepCsv(csvText: string, source = "sweep csv"): SweepRow[] {
  return parseRows(csvText, sweepRowSchema, NUMERIC_COLUMNS.sweep!, source);
}

export function parseTaskCsv(csvText: string, source = "task csv"): TaskRow[] {
  return parseRows(csvText, taskRowSchema, NUMERIC_COLUMNS.task!, source);
}

export function parseTableCsv(csvText: string, source = "table csv"): TableRow[] {
  return parseRows(csvText, tableRowSchema, NUMERIC_COLUMNS.table!, source);
}

/** Compact engineering labels for the data-volume axis (input in bits). */
export function formatBits(bits: number): string {
  if (bits >= 8e9) return `${trim(bits / 8e9)} GB`;
  if (bits >= 1e9) return `${trim(bits / 1e9)} Gb`;
  if (bits >= 1e6) return `${trim(bits / 1e6)} Mb`;
  if (bits >= 1e3) return `${trim(bits / 1e3)} kb`;
  return `${trim(bits)} b`;
}

export function formatGflo(gflo: number): string {
  return `${trim(gflo)}`;
}

function trim(x: number): string {
  if (x >= 100) return String(Math.round(x));
  const s = x.toPrecision(3);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

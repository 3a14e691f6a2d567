/**
 * Delay surface: per-scheme heatmaps of mean delay over the data-volume x
 * compute-demand grid, on one shared log color scale so panels compare.
 */

import type { EChartsOption } from "echarts";

import {
  SCHEMES,
  SCHEME_COLORS,
  formatBits,
  formatGflo,
  type SweepRow,
} from "./schemas.js";

export interface SurfaceGrid {
  nValues: number[];
  cValues: number[];
  /** delays[scheme][ci][ni] = mean delay (null when every task dropped) */
  delays: Record<string, (number | null)[][]>;
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

export function collectSurface(rows: SweepRow[]): SurfaceGrid {
  const nValues = uniqueSorted(rows.map((r) => r.n_bits));
  const cValues = uniqueSorted(rows.map((r) => r.c_gflo));
  const delays: SurfaceGrid["delays"] = {};
  for (const scheme of SCHEMES) {
    delays[scheme] = cValues.map(() => nValues.map(() => null as number | null));
  }
  const seen = new Set<string>();
  for (const row of rows) {
    const ni = nValues.indexOf(row.n_bits);
    const ci = cValues.indexOf(row.c_gflo);
    const key = `${row.scheme}:${ni}:${ci}`;
    if (seen.has(key)) {
      throw new Error(`duplicate sweep cell for ${row.scheme} at ` +
        `n_bits=${row.n_bits}, c_gflo=${row.c_gflo}`);
    }
    seen.add(key);
    delays[row.scheme]![ci]![ni] = row.mean_delay_s;
  }
  const want = nValues.length * cValues.length * SCHEMES.length;
  if (seen.size !== want) {
    throw new Error(`sweep grid is ragged: ${seen.size} cells, expected ${want}`);
  }
  return { nValues, cValues, delays };
}

export function buildSurfaceOption(grid: SurfaceGrid): EChartsOption {
  const { nValues, cValues, delays } = grid;
  const finite: number[] = [];
  for (const scheme of SCHEMES) {
    for (const rowOfC of delays[scheme]!) {
      for (const d of rowOfC) {
        if (d !== null && d > 0) finite.push(Math.log10(d));
      }
    }
  }
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);

  const grids = [];
  const xAxes = [];
  const yAxes = [];
  const series = [];
  const titles = [];
  for (let i = 0; i < SCHEMES.length; i++) {
    const scheme = SCHEMES[i]!;
    grids.push({
      left: `${6 + i * 30}%`,
      top: 60,
      width: "24%",
      height: 300,
    });
    xAxes.push({
      gridIndex: i,
      type: "category" as const,
      name: i === 1 ? "task data volume" : "",
      nameLocation: "middle" as const,
      nameGap: 32,
      data: nValues.map(formatBits),
      axisLabel: { rotate: 45, fontSize: 10 },
    });
    yAxes.push({
      gridIndex: i,
      type: "category" as const,
      name: i === 0 ? "compute demand (GFLO)" : "",
      nameLocation: "middle" as const,
      nameGap: 42,
      data: cValues.map(formatGflo),
      axisLabel: { fontSize: 10 },
    });
    const data: [number, number, number][] = [];
    for (let ci = 0; ci < cValues.length; ci++) {
      for (let ni = 0; ni < nValues.length; ni++) {
        const d = delays[scheme]![ci]![ni];
        if (typeof d === "number" && d > 0) data.push([ni, ci, Math.log10(d)]);
      }
    }
    series.push({
      type: "heatmap" as const,
      xAxisIndex: i,
      yAxisIndex: i,
      data,
      label: { show: false },
    });
    titles.push({
      text: scheme,
      left: `${6 + i * 30 + 12}%`,
      top: 24,
      textStyle: { color: SCHEME_COLORS[scheme], fontSize: 16 },
    });
  }

  return {
    backgroundColor: "#ffffff",
    title: [
      {
        text: "Mean task delay over the workload grid",
        left: "center",
        top: 0,
        textStyle: { fontSize: 18 },
      },
      ...titles,
    ],
    grid: grids,
    xAxis: xAxes,
    yAxis: yAxes,
    series,
    visualMap: {
      type: "continuous",
      min: lo,
      max: hi,
      dimension: 2,
      right: 8,
      top: "middle",
      calculable: false,
      text: [`${fmtPow(hi)} s`, `${fmtPow(lo)} s`],
      inRange: {
        color: ["#2f4b7c", "#5d87b6", "#a3c4dc", "#f1e0a8", "#e98b4e", "#b8321f"],
      },
    },
  };
}

function fmtPow(logValue: number): string {
  const v = Math.pow(10, logValue);
  if (v >= 100) return v.toFixed(0);
  if (v >= 1) return v.toFixed(1);
  return v.toPrecision(2);
}

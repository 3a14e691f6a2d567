/**
 * Placement region map: which scheme wins each grid cell, read from the
 * sweep CSV's argmin_scheme column (never recomputed here; the simulator
 * already resolved ties toward the baselines).
 */

import type { EChartsOption } from "echarts";

import {
  SCHEMES,
  SCHEME_COLORS,
  formatBits,
  formatGflo,
  type SchemeName,
  type SweepRow,
} from "./schemas.js";

export interface RegionGrid {
  nValues: number[];
  cValues: number[];
  /** winner[ci][ni], null when the cell had no surviving tasks */
  winner: (SchemeName | null)[][];
}

export function collectRegions(rows: SweepRow[]): RegionGrid {
  const nValues = [...new Set(rows.map((r) => r.n_bits))].sort((a, b) => a - b);
  const cValues = [...new Set(rows.map((r) => r.c_gflo))].sort((a, b) => a - b);
  const winner: (SchemeName | null)[][] = cValues.map(() =>
    nValues.map(() => null),
  );
  for (const row of rows) {
    const ni = nValues.indexOf(row.n_bits);
    const ci = cValues.indexOf(row.c_gflo);
    const value = row.argmin_scheme === "" ? null : row.argmin_scheme;
    const previous = winner[ci]![ni];
    if (previous !== null && value !== null && previous !== value) {
      throw new Error(
        `conflicting argmin_scheme at n_bits=${row.n_bits}, ` +
          `c_gflo=${row.c_gflo}: ${previous} vs ${value}`,
      );
    }
    if (value !== null) winner[ci]![ni] = value;
  }
  return { nValues, cValues, winner };
}

export function buildRegionsOption(grid: RegionGrid): EChartsOption {
  const { nValues, cValues, winner } = grid;
  const data: [number, number, number][] = [];
  for (let ci = 0; ci < cValues.length; ci++) {
    for (let ni = 0; ni < nValues.length; ni++) {
      const w = winner[ci]![ni] ?? null;
      if (w !== null) data.push([ni, ci, SCHEMES.indexOf(w)]);
    }
  }
  return {
    backgroundColor: "#ffffff",
    title: {
      text: "Lowest-delay scheme per workload cell",
      left: "center",
      top: 0,
      textStyle: { fontSize: 18 },
    },
    grid: { left: 90, right: 140, top: 50, bottom: 80 },
    xAxis: {
      type: "category",
      name: "task data volume",
      nameLocation: "middle",
      nameGap: 42,
      data: nValues.map(formatBits),
      axisLabel: { rotate: 45 },
    },
    yAxis: {
      type: "category",
      name: "compute demand (GFLO)",
      nameLocation: "middle",
      nameGap: 55,
      data: cValues.map(formatGflo),
    },
    visualMap: {
      type: "piecewise",
      dimension: 2,
      right: 10,
      top: "middle",
      pieces: SCHEMES.map((scheme, i) => ({
        value: i,
        label: scheme,
        color: SCHEME_COLORS[scheme],
      })),
    },
    series: [
      {
        type: "heatmap",
        data,
        itemStyle: { borderColor: "#ffffff", borderWidth: 1 },
        label: { show: false },
      },
    ],
  };
}

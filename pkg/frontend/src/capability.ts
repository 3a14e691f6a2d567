/**
 * Capability trend: grouped bars of the adaptive scheme's percentage
 * improvement over each baseline as per-satellite compute capability grows.
 */

import type { EChartsOption } from "echarts";

import { SCHEME_COLORS, type TableRow } from "./schemas.js";

function pctLabel(params: { value: unknown }): string {
  return `${Number(params.value).toFixed(1)}%`;
}

export function buildCapabilityOption(rows: TableRow[]): EChartsOption {
  const ordered = [...rows].sort(
    (a, b) => a.capability_gflops - b.capability_gflops,
  );
  const positive = ordered.every(
    (r) => r.impr_vs_ground_pct > 0 && r.impr_vs_onehop_pct > 0,
  );
  // The spread runs from well under 1% to several hundred percent, so a
  // linear axis would flatten half the story; log needs all-positive data.
  const yAxisBase = {
    name: "mean delay improvement (%)",
    nameLocation: "middle" as const,
    nameGap: 55,
    axisLabel: { formatter: "{value}%" },
  };
  return {
    backgroundColor: "#ffffff",
    title: {
      text: "Adaptive improvement vs satellite capability",
      left: "center",
      top: 0,
      textStyle: { fontSize: 18 },
    },
    legend: { top: 30 },
    grid: { left: 90, right: 40, top: 70, bottom: 55 },
    xAxis: {
      type: "category",
      name: "per-satellite capability (GFLOPS)",
      nameLocation: "middle",
      nameGap: 35,
      data: ordered.map((r) => String(r.capability_gflops)),
    },
    yAxis: positive
      ? { type: "log", ...yAxisBase }
      : { type: "value", ...yAxisBase },
    series: [
      {
        type: "bar",
        name: "vs ground",
        itemStyle: { color: SCHEME_COLORS.ground },
        data: ordered.map((r) => r.impr_vs_ground_pct),
        label: { show: true, position: "top", formatter: pctLabel },
      },
      {
        type: "bar",
        name: "vs one-hop",
        itemStyle: { color: SCHEME_COLORS.onehop },
        data: ordered.map((r) => r.impr_vs_onehop_pct),
        label: { show: true, position: "top", formatter: pctLabel },
      },
    ],
  };
}

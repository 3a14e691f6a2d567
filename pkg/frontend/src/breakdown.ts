/**
 * Delay breakdown: one stacked bar per scheme splitting the mean delay of
 * its completed tasks into inter-satellite transmission, space-ground
 * transmission and compute. The stacked total must reproduce the CSV's
 * overall delays or the build refuses to plot.
 */

import type { EChartsOption } from "echarts";

import { type SchemeName, type TaskRow } from "./schemas.js";

export interface BreakdownBar {
  scheme: SchemeName;
  taskCount: number;
  droppedCount: number;
  meanIsl: number;
  meanSgl: number;
  meanCompute: number;
  meanOverall: number;
}

const COMPONENT_COLORS = {
  "inter-satellite tx": "#6c8ebf",
  "space-ground tx": "#e0a458",
  compute: "#9673a6",
} as const;

export const STACK_TOLERANCE = 1e-9;

export function summarizeBreakdown(rows: TaskRow[], source: string): BreakdownBar {
  const schemes = new Set(rows.map((r) => r.scheme));
  if (schemes.size !== 1) {
    throw new Error(`${source}: expected a single scheme, saw ` +
      `${[...schemes].sort().join(", ")}`);
  }
  const ok = rows.filter((r) => r.status === "ok");
  if (ok.length === 0) {
    throw new Error(`${source}: no completed tasks to average`);
  }
  const mean = (pick: (r: TaskRow) => number) =>
    ok.reduce((acc, r) => acc + pick(r), 0) / ok.length;
  const bar: BreakdownBar = {
    scheme: rows[0]!.scheme,
    taskCount: rows.length,
    droppedCount: rows.length - ok.length,
    meanIsl: mean((r) => r.isl_tx_s!),
    meanSgl: mean((r) => r.sgl_tx_s!),
    meanCompute: mean((r) => r.compute_s!),
    meanOverall: mean((r) => r.overall_delay_s!),
  };
  const stacked = bar.meanIsl + bar.meanSgl + bar.meanCompute;
  const tolerance = STACK_TOLERANCE * Math.max(1, Math.abs(bar.meanOverall));
  if (Math.abs(stacked - bar.meanOverall) > tolerance) {
    throw new Error(
      `${source}: stacked components ${stacked} diverge from mean ` +
        `overall delay ${bar.meanOverall}`,
    );
  }
  return bar;
}

export function buildBreakdownOption(bars: BreakdownBar[]): EChartsOption {
  const components: [keyof typeof COMPONENT_COLORS, (b: BreakdownBar) => number][] = [
    ["inter-satellite tx", (b) => b.meanIsl],
    ["space-ground tx", (b) => b.meanSgl],
    ["compute", (b) => b.meanCompute],
  ];
  return {
    backgroundColor: "#ffffff",
    title: {
      text: "Mean delay breakdown per scheme",
      left: "center",
      top: 0,
      textStyle: { fontSize: 18 },
    },
    legend: { top: 30 },
    grid: { left: 80, right: 40, top: 70, bottom: 50 },
    xAxis: {
      type: "category",
      data: bars.map((b) => b.scheme),
      axisLabel: { fontSize: 14 },
    },
    yAxis: {
      type: "value",
      name: "seconds",
      nameLocation: "middle",
      nameGap: 50,
    },
    series: components.map(([name, pick]) => ({
      type: "bar" as const,
      name,
      stack: "delay",
      barWidth: "45%",
      itemStyle: { color: COMPONENT_COLORS[name] },
      data: bars.map((b) => pick(b)),
      label:
        name === "compute"
          ? {
              show: true,
              position: "top" as const,
              formatter: (params: { dataIndex: number }) =>
                `${bars[params.dataIndex]!.meanOverall.toFixed(2)} s`,
            }
          : { show: false },
    })),
  };
}

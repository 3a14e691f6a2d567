import { describe, expect, it } from "vitest";

import { buildCapabilityOption } from "../src/capability.js";
import { parseTableCsv } from "../src/schemas.js";
import { TABLE_CSV } from "./fixtures.js";

describe("buildCapabilityOption", () => {
  it("orders bars by capability and pairs the two baselines", () => {
    const shuffled = parseTableCsv(TABLE_CSV, "fixture").reverse();
    const option = buildCapabilityOption(shuffled);
    const xAxis = option.xAxis as { data: string[] };
    expect(xAxis.data).toEqual(["127", "200", "590", "1000"]);
    const series = option.series as { name: string; data: number[] }[];
    expect(series.map((s) => s.name)).toEqual(["vs ground", "vs one-hop"]);
    expect(series[0]!.data).toEqual([5.0, 12.0, 40.0, 70.0]);
    expect(series[1]!.data).toEqual([80.0, 60.0, 30.0, 10.0]);
  });

  it("uses a log axis only while every improvement is positive", () => {
    const rows = parseTableCsv(TABLE_CSV, "fixture");
    const logOption = buildCapabilityOption(rows);
    expect((logOption.yAxis as { type: string }).type).toBe("log");
    const withLoss = rows.map((r, i) =>
      i === 0 ? { ...r, impr_vs_ground_pct: -2.0 } : r,
    );
    const linearOption = buildCapabilityOption(withLoss);
    expect((linearOption.yAxis as { type: string }).type).toBe("value");
  });
});

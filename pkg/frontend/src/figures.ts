/** Figure builders: one echarts option per figure kind.
 *
 * Each builder takes the parsed tables (one drawn series group per input
 * file) and validates the columns it is about to reference.
 */
import type { EChartsOption, SeriesOption } from "echarts";
import { requireColumns, Table } from "./csv.js";

export const FIGURE_KINDS = ["orbit", "energy-trace", "convergence"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

const REFERENCE_STYLE = {
  color: "#999999",
  width: 1,
  type: "dashed" as const,
};

function baseOption(xName: string, yName: string, log: "none" | "y" | "xy"): EChartsOption {
  return {
    animation: false,
    legend: { top: 8 },
    grid: { containLabel: true, left: 56, right: 28, top: 48, bottom: 44 },
    xAxis: {
      type: log === "xy" ? "log" : "value",
      name: xName,
      nameLocation: "middle",
      nameGap: 28,
      scale: true,
    },
    yAxis: {
      type: log === "none" ? "value" : "log",
      name: yName,
      nameLocation: "middle",
      nameGap: 64,
      scale: true,
    },
    series: [],
  };
}

export function orbitOption(tables: Table[]): EChartsOption {
  const series: SeriesOption[] = [];
  for (const t of tables) {
    requireColumns(t, ["x", "y"]);
    series.push({
      type: "line",
      name: t.label,
      data: t.rows.map((r) => [r.x, r.y]),
      showSymbol: false,
      lineStyle: { width: 1.2 },
    });
    if (t.columns.includes("period_mark")) {
      // hollow circles on the rows sampled at whole periods
      series.push({
        type: "scatter",
        name: `${t.label} at t = nT`,
        data: t.rows.filter((r) => r.period_mark === 1).map((r) => [r.x, r.y]),
        symbol: "emptyCircle",
        symbolSize: 9,
      });
    }
  }
  const option = baseOption("x", "y", "none");
  option.series = series;
  return option;
}

export function energyTraceOption(tables: Table[]): EChartsOption {
  const series: SeriesOption[] = [];
  for (const t of tables) {
    requireColumns(t, ["t", "relerr_E_mod"]);
    // the initial row is exactly zero by definition; a log axis cannot show it
    series.push({
      type: "line",
      name: t.label,
      data: t.rows.filter((r) => r.relerr_E_mod > 0).map((r) => [r.t, r.relerr_E_mod]),
      showSymbol: false,
      lineStyle: { width: 1 },
    });
  }
  const option = baseOption("t", "relative energy error", "y");
  option.series = series;
  return option;
}

export function convergenceOption(tables: Table[]): EChartsOption {
  const series: SeriesOption[] = [];
  let anchor: [number, number] | null = null;
  let dtMin = Number.POSITIVE_INFINITY;
  let dtMax = 0;
  for (const t of tables) {
    requireColumns(t, ["dt", "solution_error"]);
    const pts = t.rows
      .filter((r) => r.solution_error > 0)
      .map((r): [number, number] => [r.dt, r.solution_error]);
    for (const [dt] of pts) {
      dtMin = Math.min(dtMin, dt);
      dtMax = Math.max(dtMax, dt);
    }
    if (anchor === null && pts.length > 0) {
      anchor = pts.reduce((a, b) => (b[0] > a[0] ? b : a));
    }
    series.push({
      type: "line",
      name: `${t.label} solution`,
      data: pts,
      symbol: "circle",
      symbolSize: 6,
    });
    if (t.columns.includes("energy_error")) {
      series.push({
        type: "line",
        name: `${t.label} energy`,
        data: t.rows
          .filter((r) => r.energy_error > 0)
          .map((r) => [r.dt, r.energy_error]),
        symbol: "triangle",
        symbolSize: 6,
        lineStyle: { type: "dotted" },
      });
    }
  }
  if (anchor !== null) {
    // thin gray guides through the coarsest point, one per expected order
    const [dt0, err0] = anchor;
    for (const slope of [2, 4]) {
      const line = [dtMax, dtMin].map((dt) => [dt, 1.6 * err0 * (dt / dt0) ** slope]);
      series.push({
        type: "line",
        name: `slope ${slope}`,
        data: line,
        showSymbol: false,
        lineStyle: REFERENCE_STYLE,
        itemStyle: { color: REFERENCE_STYLE.color },
      });
    }
  }
  const option = baseOption("dt", "relative error", "xy");
  option.series = series;
  return option;
}

export function buildOption(kind: FigureKind, tables: Table[]): EChartsOption {
  switch (kind) {
    case "orbit":
      return orbitOption(tables);
    case "energy-trace":
      return energyTraceOption(tables);
    case "convergence":
      return convergenceOption(tables);
  }
}

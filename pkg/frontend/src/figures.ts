import type { Report, ReportRow } from "./csv.js";
import type { ChartSpec, LineSeries, Point } from "./svg.js";

export class FigureError extends Error {
  override name = "FigureError";
}

export const FIGURE_IDS = ["5a", "5b", "6", "7", "8", "9", "10"] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

/** Which experiment family feeds each figure, plus a line for --help. */
export const FIGURES: Record<FigureId, { experiment: string; summary: string }> = {
  "5a": { experiment: "throughput", summary: "lookup rate vs failure ratio" },
  "5b": { experiment: "memory", summary: "state size vs cluster size (log-log)" },
  "6": { experiment: "balance", summary: "key-count coefficient of variation per algorithm" },
  "7": { experiment: "disruption", summary: "remapped share per growth step vs the ideal" },
  "8": { experiment: "asl", summary: "probes per lookup vs failure ratio" },
  "9": { experiment: "weighted", summary: "measured vs configured access share" },
  "10": { experiment: "ars", summary: "remapped share when the ring doubles" },
};

export const isFigureId = (s: string): s is FigureId =>
  (FIGURE_IDS as readonly string[]).includes(s);

const checkFamily = (id: FigureId, reports: Report[]): void => {
  const family = FIGURES[id].experiment;
  if (reports.length === 0) {
    throw new FigureError(`figure ${id}: no CSV files given`);
  }
  for (const r of reports) {
    const other = r.rows.find((row) => row.experiment !== family);
    if (other) {
      throw new FigureError(
        `figure ${id} draws "${family}" reports, but ${r.source} has experiment "${other.experiment}"`,
      );
    }
  }
};

const metricRows = (r: Report, metric: string): ReportRow[] =>
  r.rows.filter((row) => row.metric === metric);

const need = (id: FigureId, r: Report, metric: string): ReportRow[] => {
  const rows = metricRows(r, metric);
  if (rows.length === 0) {
    throw new FigureError(`figure ${id}: no "${metric}" rows in ${r.source}`);
  }
  return rows;
};

const paramNum = (id: FigureId, row: ReportRow, key: string): number => {
  const v = row.params[key];
  if (typeof v !== "number") {
    throw new FigureError(
      `figure ${id}: metric "${row.metric}" row lacks numeric param "${key}" (param_json: ${JSON.stringify(row.params)})`,
    );
  }
  return v;
};

const byX = (a: Point, b: Point) => a.x - b.x;

const seriesLabel = (r: Report): string => {
  const alg = r.rows[0]?.algorithm ?? "?";
  const impl = r.rows[0]?.params["impl"];
  return typeof impl === "string" ? `${alg} (${impl})` : alg;
};

const lookupRate = (id: FigureId, reports: Report[]): ChartSpec => {
  const series: LineSeries[] = reports.map((r) => ({
    label: seriesLabel(r),
    points: need(id, r, "wallclock_lookups_per_sec")
      .map((row) => ({ x: paramNum(id, row, "failure_ratio"), y: row.value }))
      .sort(byX),
  }));
  return {
    kind: "line",
    title: "Lookup rate as nodes fail",
    x: { label: "failure ratio" },
    y: { label: "lookups per second", unit: "count" },
    series,
  };
};

const memoryFootprint = (id: FigureId, reports: Report[]): ChartSpec => {
  // One series per (algorithm, byte metric): dxhash payload/snapshot vs
  // the analytic footprint of the baselines.
  const series: LineSeries[] = [];
  for (const r of reports) {
    const groups = new Map<string, Point[]>();
    for (const row of r.rows) {
      if (!row.metric.endsWith("_bytes")) continue;
      const label = `${row.algorithm} ${row.metric.replace(/_bytes$/, "").replace(/_/g, " ")}`;
      const pts = groups.get(label) ?? [];
      pts.push({ x: paramNum(id, row, "nodes"), y: row.value });
      groups.set(label, pts);
    }
    if (groups.size === 0) {
      throw new FigureError(`figure ${id}: no *_bytes rows in ${r.source}`);
    }
    for (const [label, pts] of groups) {
      series.push({ label, points: pts.sort(byX) });
    }
  }
  return {
    kind: "line",
    title: "State size by cluster size",
    x: { label: "nodes", scale: "log", unit: "count" },
    y: { label: "state size", scale: "log", unit: "bytes" },
    series,
  };
};

const balanceSpread = (id: FigureId, reports: Report[]): ChartSpec => {
  const categories: string[] = [];
  const values: number[] = [];
  for (const r of reports) {
    const rows = need(id, r, "cv");
    const manyWorking = new Set(rows.map((row) => paramNum(id, row, "working"))).size > 1;
    for (const row of rows) {
      categories.push(
        manyWorking ? `${row.algorithm} w=${paramNum(id, row, "working")}` : row.algorithm,
      );
      values.push(row.value);
    }
  }
  return {
    kind: "bar",
    title: "Key spread across working nodes",
    x: { label: "algorithm" },
    y: { label: "coefficient of variation" },
    categories,
    series: [{ label: "cv of keys per node", values }],
  };
};

const growthDisruption = (id: FigureId, reports: Report[]): ChartSpec => {
  const series: LineSeries[] = reports.map((r) => ({
    label: seriesLabel(r),
    points: need(id, r, "remap_ratio")
      .map((row) => ({ x: paramNum(id, row, "to"), y: row.value }))
      .sort(byX),
  }));
  const first = reports[0] as Report;
  const ideal = metricRows(first, "ideal_ratio");
  if (ideal.length > 0) {
    series.push({
      label: "ideal (moved = added share)",
      dashed: true,
      points: ideal.map((row) => ({ x: paramNum(id, row, "to"), y: row.value })).sort(byX),
    });
  }
  return {
    kind: "line",
    title: "Keys remapped per growth step",
    x: { label: "working nodes after the step" },
    y: { label: "remapped key share" },
    series,
  };
};

const searchLength = (id: FigureId, reports: Report[]): ChartSpec => {
  const series: LineSeries[] = [];
  for (const r of reports) {
    const label = seriesLabel(r);
    series.push({
      label,
      points: need(id, r, "mean_search_length")
        .map((row) => ({ x: paramNum(id, row, "failure_ratio"), y: row.value }))
        .sort(byX),
    });
    const theory = metricRows(r, "theory_mean");
    if (theory.length > 0) {
      series.push({
        label: `${label} expectation`,
        dashed: true,
        points: theory
          .map((row) => ({ x: paramNum(id, row, "failure_ratio"), y: row.value }))
          .sort(byX),
      });
    }
  }
  return {
    kind: "line",
    title: "Probes per lookup as nodes fail",
    x: { label: "failure ratio" },
    y: { label: "mean probes per lookup" },
    series,
  };
};

const weightedShare = (id: FigureId, reports: Report[]): ChartSpec => {
  const series: LineSeries[] = [];
  const targets: Point[] = [];
  for (const r of reports) {
    // hit_ratio and expected_ratio rows pair up through identical params.
    const expected = new Map<string, number>();
    for (const row of need(id, r, "expected_ratio")) {
      expected.set(JSON.stringify(row.params), row.value);
    }
    const points: Point[] = [];
    for (const row of need(id, r, "hit_ratio")) {
      const key = JSON.stringify(row.params);
      const x = expected.get(key);
      if (x === undefined) {
        throw new FigureError(
          `figure ${id}: hit_ratio row in ${r.source} has no matching expected_ratio row`,
        );
      }
      points.push({ x, y: row.value });
      targets.push({ x, y: x });
    }
    series.push({ label: seriesLabel(r), points: points.sort(byX) });
  }
  series.push({ label: "configured share", dashed: true, points: targets.sort(byX) });
  return {
    kind: "line",
    title: "Access share of down-weighted nodes",
    x: { label: "configured share" },
    y: { label: "measured share" },
    series,
  };
};

const doublingRemap = (id: FigureId, reports: Report[]): ChartSpec => {
  const categories: string[] = [];
  const without: number[] = [];
  const withReplicas: number[] = [];
  let bound: number | undefined;
  for (const r of reports) {
    const plain = need(id, r, "remap_without_ars");
    const staged = need(id, r, "remap_with_ars");
    if (plain.length !== staged.length) {
      throw new FigureError(
        `figure ${id}: ${r.source} has ${plain.length} remap_without_ars rows but ${staged.length} remap_with_ars rows`,
      );
    }
    for (const [i, row] of plain.entries()) {
      categories.push(String(paramNum(id, row, "base_size")));
      without.push(row.value);
      withReplicas.push((staged[i] as ReportRow).value);
    }
    const b = metricRows(r, "theory_bound")[0];
    if (b) bound = b.value;
  }
  return {
    kind: "bar",
    title: "Keys moved when the ring doubles",
    x: { label: "ring size before doubling" },
    y: { label: "moved key share" },
    categories,
    series: [
      { label: "single placement", values: without },
      { label: "staged replicas", values: withReplicas },
    ],
    refLines: bound === undefined ? [] : [{ label: "replica bound (7/24)", y: bound }],
  };
};

const BUILDERS: Record<FigureId, (id: FigureId, reports: Report[]) => ChartSpec> = {
  "5a": lookupRate,
  "5b": memoryFootprint,
  "6": balanceSpread,
  "7": growthDisruption,
  "8": searchLength,
  "9": weightedShare,
  "10": doublingRemap,
};

/**
 * Turn parsed reports into a chart description for one figure id.
 * Values are carried through untouched; only positions are computed later.
 */
export function buildFigure(id: FigureId, reports: Report[]): ChartSpec {
  checkFamily(id, reports);
  return BUILDERS[id](id, reports);
}

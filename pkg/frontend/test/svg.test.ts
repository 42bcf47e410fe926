import fs from "node:fs";
import { describe, expect, it } from "vitest";

import { parseReport } from "../src/csv.js";
import { buildFigure, FIGURE_IDS, type FigureId } from "../src/figures.js";
import {
  fmtBytes,
  fmtCount,
  fmtNumber,
  linearTicks,
  renderChart,
  RenderError,
  type LineChart,
} from "../src/svg.js";

const golden = (name: string) =>
  parseReport(fs.readFileSync(new URL(`../golden/${name}`, import.meta.url), "utf8"), name);

const GOLDEN_SETS: Record<FigureId, string[]> = {
  "5a": ["throughput.csv"],
  "5b": ["memory.csv"],
  "6": ["balance_dxhash.csv", "balance_ring.csv", "balance_maglev.csv", "balance_jump.csv"],
  "7": ["disruption_dxhash.csv", "disruption_maglev.csv"],
  "8": ["asl.csv"],
  "9": ["weighted.csv"],
  "10": ["ars.csv"],
};

const lineChart = (over: Partial<LineChart> = {}): LineChart => ({
  kind: "line",
  title: "t",
  x: { label: "x" },
  y: { label: "y" },
  series: [
    {
      label: "s",
      points: [
        { x: 0, y: 1 },
        { x: 1, y: 2 },
      ],
    },
  ],
  ...over,
});

describe("renderChart", () => {
  it.each(FIGURE_IDS)("figure %s renders to a standalone SVG document", (id) => {
    const svg = renderChart(buildFigure(id, GOLDEN_SETS[id].map(golden)));
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    expect(svg).toContain('xmlns="http://www.w3.org/2000/svg"');
  });

  it.each(FIGURE_IDS)("figure %s renders byte-identically every time", (id) => {
    const reports = GOLDEN_SETS[id].map(golden);
    const a = renderChart(buildFigure(id, reports));
    const b = renderChart(buildFigure(id, GOLDEN_SETS[id].map(golden)));
    expect(a).toBe(b);
  });

  it("contains no timestamps or other run-dependent text", () => {
    const svg = renderChart(buildFigure("8", [golden("asl.csv")]));
    const year = String(new Date().getFullYear());
    expect(svg).not.toContain(year);
    expect(svg.toLowerCase()).not.toContain("date");
  });

  it("escapes XML-sensitive characters in labels", () => {
    const svg = renderChart(
      lineChart({ title: 'a < b & "c"', x: { label: "<x>" }, y: { label: "y" } }),
    );
    expect(svg).toContain("a &lt; b &amp; &quot;c&quot;");
    expect(svg).toContain("&lt;x&gt;");
    expect(svg).not.toContain("<x>");
  });

  it("refuses to draw an empty series", () => {
    expect(() => renderChart(lineChart({ series: [{ label: "hollow", points: [] }] }))).toThrowError(
      RenderError,
    );
    expect(() => renderChart(lineChart({ series: [] }))).toThrowError(/no series/);
  });

  it("refuses log scales on non-positive values", () => {
    const chart = lineChart({ y: { label: "y", scale: "log" } });
    chart.series[0]!.points[0]!.y = 0;
    expect(() => renderChart(chart)).toThrowError(/log scale needs positive values/);
  });

  it("handles a flat series without a degenerate axis", () => {
    const svg = renderChart(
      lineChart({
        series: [
          {
            label: "flat",
            points: [
              { x: 0, y: 5 },
              { x: 1, y: 5 },
            ],
          },
        ],
      }),
    );
    expect(svg).toContain("<path");
  });

  it("rejects a bar series whose length disagrees with the categories", () => {
    expect(() =>
      renderChart({
        kind: "bar",
        title: "t",
        x: { label: "x" },
        y: { label: "y" },
        categories: ["a", "b"],
        series: [{ label: "s", values: [1] }],
      }),
    ).toThrowError(/1 values for 2 categories/);
  });
});

describe("tick helpers", () => {
  it("linearTicks picks round steps covering the range", () => {
    expect(linearTicks(0, 1)).toEqual([0, 0.2, 0.4, 0.6, 0.8, 1]);
    expect(linearTicks(0, 97)).toEqual([0, 20, 40, 60, 80]);
  });

  it("fmtNumber trims float noise deterministically", () => {
    expect(fmtNumber(0.1 + 0.2)).toBe("0.3");
    expect(fmtNumber(1)).toBe("1");
    expect(fmtNumber(0)).toBe("0");
    expect(fmtNumber(1.25e-9)).toBe("1.25e-9");
  });

  it("fmtBytes walks the KB..GB ladder", () => {
    expect(fmtBytes(125)).toBe("125 B");
    expect(fmtBytes(2800000)).toBe("2.8 MB");
    expect(fmtBytes(1e9)).toBe("1 GB");
  });

  it("fmtCount abbreviates large rates", () => {
    expect(fmtCount(200000)).toBe("200K");
    expect(fmtCount(48894901.8787964)).toBe("48.9M");
  });
});

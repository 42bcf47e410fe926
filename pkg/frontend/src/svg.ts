import { STYLE } from "./style.js";

export interface Point {
  x: number;
  y: number;
}

export interface LineSeries {
  label: string;
  points: Point[];
  /** Reference curves (ideal/theory) render dashed and without markers. */
  dashed?: boolean;
}

export interface BarSeries {
  label: string;
  /** One value per category, aligned by index. */
  values: number[];
}

export interface RefLine {
  label: string;
  y: number;
}

export type ScaleKind = "linear" | "log";

export interface AxisSpec {
  label: string;
  scale?: ScaleKind;
  /** Tick formatting: raw numbers, byte sizes, or SI counts. */
  unit?: "plain" | "bytes" | "count";
}

export interface LineChart {
  kind: "line";
  title: string;
  x: AxisSpec;
  y: AxisSpec;
  series: LineSeries[];
}

export interface BarChart {
  kind: "bar";
  title: string;
  x: AxisSpec;
  y: AxisSpec;
  categories: string[];
  series: BarSeries[];
  refLines?: RefLine[];
}

export type ChartSpec = LineChart | BarChart;

export class RenderError extends Error {
  override name = "RenderError";
}

export const escapeXml = (s: string): string =>
  s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");

/** Pixel coordinate, rounded so the output stays compact and stable. */
const px = (n: number): string => String(Math.round(n * 100) / 100);

/** Plain numeric label with float noise trimmed (0.30000000000000004 -> 0.3). */
export const fmtNumber = (v: number): string => {
  if (!Number.isFinite(v)) return String(v);
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e15 || a < 1e-6) return v.toExponential(2).replace("e+", "e");
  return String(Number(v.toPrecision(6)));
};

const scaled = (v: number, steps: string[]): string => {
  let i = 0;
  let x = Math.abs(v);
  while (x >= 1000 && i < steps.length - 1) {
    x /= 1000;
    i += 1;
  }
  const sign = v < 0 ? "-" : "";
  return `${sign}${Number(x.toPrecision(3))}${steps[i]}`;
};

export const fmtBytes = (v: number): string => scaled(v, [" B", " KB", " MB", " GB", " TB"]);
export const fmtCount = (v: number): string => scaled(v, ["", "K", "M", "G", "T"]);

const fmtTick = (v: number, unit: AxisSpec["unit"]): string => {
  if (unit === "bytes") return fmtBytes(v);
  if (unit === "count") return fmtCount(v);
  return fmtNumber(v);
};

const niceStep = (rough: number): number => {
  const pow = Math.pow(10, Math.floor(Math.log10(rough)));
  const frac = rough / pow;
  if (frac <= 1) return pow;
  if (frac <= 2) return 2 * pow;
  if (frac <= 5) return 5 * pow;
  return 10 * pow;
};

export const linearTicks = (lo: number, hi: number, count = 6): number[] => {
  const step = niceStep((hi - lo) / Math.max(1, count));
  const first = Math.ceil(lo / step - 1e-9);
  const ticks: number[] = [];
  for (let i = first; i * step <= hi + step * 1e-9; i += 1) {
    const v = Number((i * step).toPrecision(12));
    ticks.push(v === 0 ? 0 : v);
  }
  return ticks;
};

interface Scale {
  pos: (v: number) => number;
  ticks: number[];
}

const makeScale = (
  kind: ScaleKind,
  values: number[],
  range: [number, number],
  includeZero: boolean,
): Scale => {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (kind === "log") {
    if (lo <= 0) {
      throw new RenderError(`log scale needs positive values, found ${fmtNumber(lo)}`);
    }
    const dLo = Math.floor(Math.log10(lo));
    const dHi = Math.ceil(Math.log10(hi));
    const top = dHi === dLo ? dLo + 1 : dHi;
    const ticks: number[] = [];
    for (let d = dLo; d <= top; d += 1) ticks.push(Math.pow(10, d));
    const [r0, r1] = range;
    const span = Math.log10(Math.pow(10, top)) - dLo;
    return {
      pos: (v) => r0 + ((Math.log10(v) - dLo) / span) * (r1 - r0),
      ticks,
    };
  }
  if (includeZero && lo > 0) lo = 0;
  if (lo === hi) {
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.5;
    lo -= pad;
    hi += pad;
  } else {
    const pad = (hi - lo) * 0.05;
    if (!(includeZero && lo === 0)) lo -= pad;
    hi += pad;
  }
  const ticks = linearTicks(lo, hi);
  const [r0, r1] = range;
  return {
    pos: (v) => r0 + ((v - lo) / (hi - lo)) * (r1 - r0),
    ticks,
  };
};

interface Frame {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

const frame: Frame = {
  left: STYLE.margin.left,
  right: STYLE.width - STYLE.margin.right,
  top: STYLE.margin.top,
  bottom: STYLE.height - STYLE.margin.bottom,
};

const header = (title: string): string[] => [
  `<svg xmlns="http://www.w3.org/2000/svg" width="${STYLE.width}" height="${STYLE.height}" viewBox="0 0 ${STYLE.width} ${STYLE.height}" font-family="${escapeXml(STYLE.fontFamily)}">`,
  `<rect width="${STYLE.width}" height="${STYLE.height}" fill="${STYLE.background}"/>`,
  `<text x="${px(STYLE.width / 2)}" y="${px(STYLE.margin.top - 18)}" text-anchor="middle" font-size="${STYLE.fontSize.title}" fill="${STYLE.textColor}">${escapeXml(title)}</text>`,
];

const axisLabels = (x: AxisSpec, y: AxisSpec): string[] => {
  const midX = (frame.left + frame.right) / 2;
  const midY = (frame.top + frame.bottom) / 2;
  return [
    `<text x="${px(midX)}" y="${px(STYLE.height - 12)}" text-anchor="middle" font-size="${STYLE.fontSize.axisLabel}" fill="${STYLE.textColor}">${escapeXml(x.label)}</text>`,
    `<text x="18" y="${px(midY)}" text-anchor="middle" font-size="${STYLE.fontSize.axisLabel}" fill="${STYLE.textColor}" transform="rotate(-90 18 ${px(midY)})">${escapeXml(y.label)}</text>`,
  ];
};

const yAxis = (scale: Scale, unit: AxisSpec["unit"]): string[] => {
  const out: string[] = [];
  for (const t of scale.ticks) {
    const y = px(scale.pos(t));
    out.push(
      `<line x1="${frame.left}" y1="${y}" x2="${frame.right}" y2="${y}" stroke="${STYLE.gridColor}" stroke-width="1"/>`,
      `<text x="${frame.left - 8}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="${STYLE.fontSize.tick}" fill="${STYLE.textColor}">${escapeXml(fmtTick(t, unit))}</text>`,
    );
  }
  out.push(
    `<line x1="${frame.left}" y1="${frame.top}" x2="${frame.left}" y2="${frame.bottom}" stroke="${STYLE.axisColor}" stroke-width="1"/>`,
    `<line x1="${frame.left}" y1="${frame.bottom}" x2="${frame.right}" y2="${frame.bottom}" stroke="${STYLE.axisColor}" stroke-width="1"/>`,
  );
  return out;
};

const legend = (entries: { label: string; color: string; dashed?: boolean }[]): string[] => {
  const out: string[] = [];
  const x = frame.right - 190;
  let y = frame.top + 10;
  for (const e of entries) {
    const dash = e.dashed ? ` stroke-dasharray="${STYLE.dashPattern}"` : "";
    out.push(
      `<line x1="${px(x)}" y1="${px(y)}" x2="${px(x + STYLE.legendSwatch)}" y2="${px(y)}" stroke="${e.color}" stroke-width="${STYLE.strokeWidth}"${dash}/>`,
      `<text x="${px(x + STYLE.legendSwatch + 6)}" y="${px(y)}" dominant-baseline="middle" font-size="${STYLE.fontSize.legend}" fill="${STYLE.textColor}">${escapeXml(e.label)}</text>`,
    );
    y += STYLE.legendLineHeight;
  }
  return out;
};

const color = (i: number): string => STYLE.palette[i % STYLE.palette.length] ?? "#000000";

const renderLine = (spec: LineChart): string => {
  if (spec.series.length === 0) {
    throw new RenderError(`"${spec.title}": no series to draw`);
  }
  for (const s of spec.series) {
    if (s.points.length === 0) {
      throw new RenderError(`"${spec.title}": series "${s.label}" is empty`);
    }
  }
  const xs = spec.series.flatMap((s) => s.points.map((p) => p.x));
  const ys = spec.series.flatMap((s) => s.points.map((p) => p.y));
  const sx = makeScale(spec.x.scale ?? "linear", xs, [frame.left, frame.right], false);
  const sy = makeScale(spec.y.scale ?? "linear", ys, [frame.bottom, frame.top], false);

  const out = header(spec.title);
  out.push(...yAxis(sy, spec.y.unit));
  for (const t of sx.ticks) {
    const x = px(sx.pos(t));
    out.push(
      `<line x1="${x}" y1="${frame.bottom}" x2="${x}" y2="${frame.bottom + 5}" stroke="${STYLE.axisColor}" stroke-width="1"/>`,
      `<text x="${x}" y="${frame.bottom + 20}" text-anchor="middle" font-size="${STYLE.fontSize.tick}" fill="${STYLE.textColor}">${escapeXml(fmtTick(t, spec.x.unit))}</text>`,
    );
  }
  spec.series.forEach((s, i) => {
    const stroke = color(i);
    const pts = [...s.points].sort((a, b) => a.x - b.x);
    const d = pts
      .map((p, j) => `${j === 0 ? "M" : "L"} ${px(sx.pos(p.x))} ${px(sy.pos(p.y))}`)
      .join(" ");
    const dash = s.dashed ? ` stroke-dasharray="${STYLE.dashPattern}"` : "";
    out.push(`<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${STYLE.strokeWidth}"${dash}/>`);
    if (!s.dashed) {
      for (const p of pts) {
        out.push(
          `<circle cx="${px(sx.pos(p.x))}" cy="${px(sy.pos(p.y))}" r="${STYLE.markerRadius}" fill="${stroke}"/>`,
        );
      }
    }
  });
  out.push(
    ...legend(spec.series.map((s, i) => ({ label: s.label, color: color(i), dashed: s.dashed }))),
  );
  out.push(...axisLabels(spec.x, spec.y));
  out.push("</svg>");
  return out.join("\n") + "\n";
};

const renderBar = (spec: BarChart): string => {
  if (spec.categories.length === 0) {
    throw new RenderError(`"${spec.title}": no categories to draw`);
  }
  if (spec.series.length === 0) {
    throw new RenderError(`"${spec.title}": no series to draw`);
  }
  for (const s of spec.series) {
    if (s.values.length !== spec.categories.length) {
      throw new RenderError(
        `"${spec.title}": series "${s.label}" has ${s.values.length} values for ${spec.categories.length} categories`,
      );
    }
  }
  const ys = spec.series.flatMap((s) => s.values).concat((spec.refLines ?? []).map((r) => r.y));
  const sy = makeScale(spec.y.scale ?? "linear", ys, [frame.bottom, frame.top], true);

  const out = header(spec.title);
  out.push(...yAxis(sy, spec.y.unit));

  const band = (frame.right - frame.left) / spec.categories.length;
  const group = band * STYLE.barGroupFill;
  const barW = group / spec.series.length;
  spec.categories.forEach((cat, c) => {
    const x0 = frame.left + c * band + (band - group) / 2;
    spec.series.forEach((s, i) => {
      const v = s.values[c] as number;
      const y = sy.pos(v);
      const base = sy.pos(0);
      const top = Math.min(y, base);
      const h = Math.abs(base - y);
      out.push(
        `<rect x="${px(x0 + i * barW)}" y="${px(top)}" width="${px(barW)}" height="${px(h)}" fill="${color(i)}"/>`,
      );
    });
    out.push(
      `<text x="${px(frame.left + c * band + band / 2)}" y="${frame.bottom + 20}" text-anchor="middle" font-size="${STYLE.fontSize.tick}" fill="${STYLE.textColor}">${escapeXml(cat)}</text>`,
    );
  });
  for (const r of spec.refLines ?? []) {
    const y = px(sy.pos(r.y));
    out.push(
      `<line x1="${frame.left}" y1="${y}" x2="${frame.right}" y2="${y}" stroke="${STYLE.refLineColor}" stroke-width="${STYLE.strokeWidth}" stroke-dasharray="${STYLE.dashPattern}"/>`,
    );
  }
  const entries: { label: string; color: string; dashed?: boolean }[] = spec.series.map(
    (s, i) => ({ label: s.label, color: color(i) }),
  );
  for (const r of spec.refLines ?? []) {
    entries.push({ label: r.label, color: STYLE.refLineColor, dashed: true });
  }
  out.push(...legend(entries));
  out.push(...axisLabels(spec.x, spec.y));
  out.push("</svg>");
  return out.join("\n") + "\n";
};

/** Render a chart description to a standalone SVG document. */
export function renderChart(spec: ChartSpec): string {
  return spec.kind === "line" ? renderLine(spec) : renderBar(spec);
}

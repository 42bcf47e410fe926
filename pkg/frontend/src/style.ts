/**
 * Every visual constant lives here so rendered figures stay reproducible:
 * changing the look of a figure means changing this file, nothing else.
 */
export const STYLE = {
  width: 760,
  height: 420,
  margin: { top: 44, right: 28, bottom: 58, left: 84 },
  background: "#ffffff",
  fontFamily: "'DejaVu Sans', 'Helvetica Neue', Arial, sans-serif",
  fontSize: { title: 15, axisLabel: 12, tick: 11, legend: 11 },
  textColor: "#222222",
  axisColor: "#444444",
  gridColor: "#e0e0e0",
  // Colour-blind friendly line/bar palette, assigned to series in order.
  palette: ["#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377", "#bbbbbb"],
  refLineColor: "#888888",
  strokeWidth: 2,
  dashPattern: "6 4",
  markerRadius: 3,
  barGroupFill: 0.8,
  legendLineHeight: 16,
  legendSwatch: 18,
} as const;

export type Style = typeof STYLE;

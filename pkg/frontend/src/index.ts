export { parseReport, CsvError, REQUIRED_COLUMNS } from "./csv.js";
export type { Report, ReportRow } from "./csv.js";
export { buildFigure, FIGURES, FIGURE_IDS, FigureError, isFigureId } from "./figures.js";
export type { FigureId } from "./figures.js";
export { renderChart, RenderError, fmtBytes, fmtCount, fmtNumber, linearTicks } from "./svg.js";
export type { ChartSpec, LineChart, BarChart, LineSeries, BarSeries, Point } from "./svg.js";
export { STYLE } from "./style.js";
export { runCli, EXIT_OK, EXIT_USAGE, EXIT_INTERNAL } from "./cli.js";

#!/usr/bin/env node
import fs from "node:fs";
import { pathToFileURL } from "node:url";

import { CsvError, parseReport, type Report } from "./csv.js";
import { buildFigure, FIGURE_IDS, FIGURES, FigureError, isFigureId } from "./figures.js";
import { renderChart, RenderError } from "./svg.js";

export const EXIT_OK = 0;
export const EXIT_USAGE = 2;
export const EXIT_INTERNAL = 3;

export interface CliIO {
  stdout: (line: string) => void;
  stderr: (line: string) => void;
}

const defaultIo: CliIO = {
  stdout: (line) => process.stdout.write(line + "\n"),
  stderr: (line) => process.stderr.write(line + "\n"),
};

const usage = (): string => {
  const lines = [
    "usage: plots --fig <id> --csv FILE [--csv FILE ...] --out FILE.svg",
    "",
    "Render a bench report CSV as a deterministic SVG figure.",
    "",
    "figures:",
  ];
  for (const id of FIGURE_IDS) {
    const info = FIGURES[id];
    lines.push(`  ${id.padEnd(4)} ${info.summary} (from "bench ${info.experiment}" CSVs)`);
  }
  return lines.join("\n");
};

interface Args {
  fig: string;
  csv: string[];
  out: string;
}

class UsageError extends Error {
  override name = "UsageError";
}

const parseArgs = (argv: string[]): Args | "help" => {
  let fig: string | undefined;
  let out: string | undefined;
  const csv: string[] = [];
  let i = 0;
  const take = (flag: string): string => {
    const v = argv[i + 1];
    if (v === undefined) throw new UsageError(`${flag} needs a value`);
    i += 1;
    return v;
  };
  for (; i < argv.length; i += 1) {
    const arg = argv[i] as string;
    if (arg === "-h" || arg === "--help") return "help";
    if (arg === "--fig") fig = take(arg);
    else if (arg === "--csv") csv.push(take(arg));
    else if (arg === "--out") out = take(arg);
    else throw new UsageError(`unknown argument "${arg}"`);
  }
  if (fig === undefined) throw new UsageError("--fig is required");
  if (csv.length === 0) throw new UsageError("at least one --csv is required");
  if (out === undefined) throw new UsageError("--out is required");
  return { fig, csv, out };
};

export const runCli = (argv: string[], io: CliIO = defaultIo): number => {
  let args: Args;
  try {
    const parsed = parseArgs(argv);
    if (parsed === "help") {
      io.stdout(usage());
      return EXIT_OK;
    }
    args = parsed;
  } catch (err) {
    io.stderr(`plots: ${(err as Error).message}`);
    io.stderr(usage());
    return EXIT_USAGE;
  }

  try {
    if (!isFigureId(args.fig)) {
      throw new UsageError(`unknown figure id "${args.fig}" (known: ${FIGURE_IDS.join(", ")})`);
    }
    if (/\.png$/i.test(args.out)) {
      throw new UsageError(
        "PNG output is not supported: rasterising would need a native renderer and " +
          "byte-stable output could not be promised; write .svg instead",
      );
    }
    if (!/\.svg$/i.test(args.out)) {
      throw new UsageError(`--out must end in .svg, got "${args.out}"`);
    }

    const reports: Report[] = [];
    for (const path of args.csv) {
      let text: string;
      try {
        text = fs.readFileSync(path, "utf8");
      } catch (err) {
        throw new UsageError(`cannot read ${path}: ${(err as NodeJS.ErrnoException).message}`);
      }
      reports.push(parseReport(text, path));
    }

    const svg = renderChart(buildFigure(args.fig, reports));
    try {
      fs.writeFileSync(args.out, svg, "utf8");
    } catch (err) {
      throw new UsageError(`cannot write ${args.out}: ${(err as NodeJS.ErrnoException).message}`);
    }
    io.stdout(`wrote ${args.out}`);
    return EXIT_OK;
  } catch (err) {
    if (
      err instanceof UsageError ||
      err instanceof CsvError ||
      err instanceof FigureError ||
      err instanceof RenderError
    ) {
      io.stderr(`plots: ${err.message}`);
      return EXIT_USAGE;
    }
    io.stderr(`plots: internal error: ${(err as Error).stack ?? String(err)}`);
    return EXIT_INTERNAL;
  }
};

const invokedDirectly = (() => {
  const entry = process.argv[1];
  if (!entry) return false;
  try {
    return import.meta.url === pathToFileURL(fs.realpathSync(entry)).href;
  } catch {
    return false;
  }
})();

if (invokedDirectly) {
  process.exit(runCli(process.argv.slice(2)));
}

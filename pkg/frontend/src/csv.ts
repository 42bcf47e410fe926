import Papa from "papaparse";

/** One data row of a bench report. `params` is the decoded param_json object. */
export interface ReportRow {
  experiment: string;
  algorithm: string;
  params: Record<string, unknown>;
  metric: string;
  value: number;
}

/** A parsed bench report: leading `# key=value` meta lines plus data rows. */
export interface Report {
  meta: Record<string, string>;
  rows: ReportRow[];
  /** Where the report came from, used in error messages. */
  source: string;
}

export const REQUIRED_COLUMNS = [
  "experiment",
  "algorithm",
  "param_json",
  "metric",
  "value",
] as const;

export class CsvError extends Error {
  override name = "CsvError";
}

const parseMetaLine = (line: string, meta: Record<string, string>): void => {
  for (const token of line.replace(/^#\s*/, "").split(/\s+/)) {
    if (!token) continue;
    const eq = token.indexOf("=");
    if (eq > 0) meta[token.slice(0, eq)] = token.slice(eq + 1);
  }
};

/**
 * Parse a bench report CSV. Comment lines before the header become `meta`;
 * the header row must match REQUIRED_COLUMNS exactly.
 */
export function parseReport(text: string, source = "<csv>"): Report {
  const lines = text.split(/\r?\n/);
  const meta: Record<string, string> = {};
  let body = 0;
  while (body < lines.length) {
    const line = lines[body] ?? "";
    if (line.startsWith("#")) {
      parseMetaLine(line, meta);
      body += 1;
    } else if (line.trim() === "") {
      body += 1;
    } else {
      break;
    }
  }
  if (body === lines.length) {
    throw new CsvError(`${source}: no header row found`);
  }

  const parsed = Papa.parse<string[]>(lines.slice(body).join("\n"), {
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new CsvError(`${source}: malformed CSV: ${first?.message ?? "unknown error"}`);
  }

  const [header, ...records] = parsed.data;
  const expected = REQUIRED_COLUMNS.join(",");
  if (!header || header.join(",") !== expected) {
    const found = header ? header.join(",") : "<empty>";
    const missing = REQUIRED_COLUMNS.filter((c) => !header?.includes(c));
    const hint = missing.length > 0 ? ` (missing: ${missing.join(", ")})` : "";
    throw new CsvError(
      `${source}: header mismatch${hint}: expected "${expected}", found "${found}"`,
    );
  }

  const rows: ReportRow[] = [];
  for (const [i, record] of records.entries()) {
    const where = `${source}: data row ${i + 1}`;
    if (record.length !== REQUIRED_COLUMNS.length) {
      throw new CsvError(`${where}: expected ${REQUIRED_COLUMNS.length} fields, found ${record.length}`);
    }
    const [experiment, algorithm, paramJson, metric, rawValue] = record as [
      string,
      string,
      string,
      string,
      string,
    ];
    let params: Record<string, unknown>;
    try {
      const decoded: unknown = JSON.parse(paramJson);
      if (typeof decoded !== "object" || decoded === null || Array.isArray(decoded)) {
        throw new Error("not a JSON object");
      }
      params = decoded as Record<string, unknown>;
    } catch (err) {
      throw new CsvError(`${where}: bad param_json ${JSON.stringify(paramJson)}: ${(err as Error).message}`);
    }
    const value = Number(rawValue);
    if (rawValue.trim() === "" || Number.isNaN(value)) {
      throw new CsvError(`${where}: value ${JSON.stringify(rawValue)} is not a number`);
    }
    rows.push({ experiment, algorithm, params, metric, value });
  }
  return { meta, rows, source };
}

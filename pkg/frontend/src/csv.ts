/** Reading the integrator's CSV files.
 *
 * Every file starts with `#`-prefixed metadata lines echoing the producing
 * configuration, then one header line and numeric rows.  Files are read
 * only, never written back.
 */
import { readFileSync } from "node:fs";
import { basename } from "node:path";
import Papa from "papaparse";

export interface Table {
  /** input path, used in error messages and series labels */
  path: string;
  /** series label: file stem without extension */
  label: string;
  columns: string[];
  rows: Record<string, number>[];
  /** parsed `# key=value` metadata lines */
  metadata: Record<string, string>;
}

export class MissingColumnsError extends Error {
  constructor(path: string, missing: string[]) {
    super(`${path}: missing required column(s) ${missing.join(", ")}`);
    this.name = "MissingColumnsError";
  }
}

function parseMetadata(text: string): Record<string, string> {
  const meta: Record<string, string> = {};
  for (const raw of text.split(/\r?\n/)) {
    const line = raw.trim();
    if (!line.startsWith("#")) continue;
    const body = line.slice(1).trim();
    const eq = body.indexOf("=");
    if (eq > 0) meta[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
  }
  return meta;
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, number>>(text, {
    header: true,
    comments: "#",
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`${path}: ${first.message} (row ${first.row ?? "?"})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0 || parsed.data.length === 0) {
    throw new Error(`${path}: no data rows found`);
  }
  return {
    path,
    label: basename(path).replace(/\.[^.]+$/, ""),
    columns,
    rows: parsed.data,
    metadata: parseMetadata(text),
  };
}

export function requireColumns(table: Table, needed: string[]): void {
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) throw new MissingColumnsError(table.path, missing);
}

export function column(table: Table, name: string): number[] {
  return table.rows.map((r) => r[name]);
}

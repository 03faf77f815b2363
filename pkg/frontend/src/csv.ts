/**
 * Reader for the simulator's CSV files: '# key = value' metadata lines,
 * one header row, then numeric rows.  Files must declare a supported
 * schema_version and every column a plot needs must be present.
 */

import { readFileSync } from "fs";

export const SUPPORTED_SCHEMA = "1";

export interface DataTable {
  metadata: Record<string, string>;
  columns: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string, source = "<string>"): DataTable {
  const metadata: Record<string, string> = {};
  const columns: string[] = [];
  const rows: number[][] = [];
  for (const rawLine of text.split(/\r?\n/)) {
    const line = rawLine.trim();
    if (!line) continue;
    if (line.startsWith("#")) {
      const body = line.slice(1);
      const eq = body.indexOf("=");
      if (eq >= 0) {
        metadata[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
      }
      continue;
    }
    const cells = line.split(",").map((c) => c.trim());
    if (columns.length === 0) {
      columns.push(...cells);
      continue;
    }
    const row = cells.map(Number);
    if (row.some((v) => Number.isNaN(v))) {
      throw new SchemaError(`${source}: non-numeric data row: ${line}`);
    }
    if (row.length !== columns.length) {
      throw new SchemaError(`${source}: row width ${row.length} != header width ${columns.length}`);
    }
    rows.push(row);
  }
  if (metadata["schema_version"] !== SUPPORTED_SCHEMA) {
    throw new SchemaError(
      `${source}: missing or unsupported schema_version (need ${SUPPORTED_SCHEMA})`,
    );
  }
  if (columns.length === 0 || rows.length === 0) {
    throw new SchemaError(`${source}: no data rows`);
  }
  return { metadata, columns, rows };
}

export function readCsv(path: string): DataTable {
  return parseCsv(readFileSync(path, "utf-8"), path);
}

export function column(table: DataTable, name: string): number[] {
  const index = table.columns.indexOf(name);
  if (index < 0) {
    throw new SchemaError(`required column '${name}' not found (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((row) => row[index]);
}

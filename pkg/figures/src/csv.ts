/**
 * Reader for the cse-schemes CSV dialect.
 *
 * Files start with `# key: value` metadata lines, one of which is
 * `# columns: a,b,c` naming the data columns; everything after the
 * comment block is plain numeric CSV. Rendering never recomputes
 * mathematics, so this parser is the only bridge to the data.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface DataTable {
  /** metadata from the leading comment lines, `columns` excluded */
  meta: Record<string, string>;
  columns: string[];
  /** row-major numeric cells; NaN for unparseable entries */
  rows: number[][];
  /** where the table came from, for error messages */
  source: string;
}

export class CsvFormatError extends Error {}

export function parseTable(text: string, source = "<string>"): DataTable {
  const meta: Record<string, string> = {};
  let columns: string[] | null = null;
  const bodyLines: string[] = [];
  for (const raw of text.split(/\r?\n/)) {
    if (raw.startsWith("#")) {
      const stripped = raw.slice(1).trim();
      const sep = stripped.indexOf(":");
      if (sep < 0) continue;
      const key = stripped.slice(0, sep).trim();
      const value = stripped.slice(sep + 1).trim();
      if (key === "columns") {
        columns = value.split(",").map((c) => c.trim());
      } else {
        meta[key] = value;
      }
    } else if (raw.trim() !== "") {
      bodyLines.push(raw);
    }
  }
  if (!columns) {
    throw new CsvFormatError(`${source}: no '# columns:' header line`);
  }
  const parsed = Papa.parse<string[]>(bodyLines.join("\n"), {
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new CsvFormatError(`${source}: ${first.message} (row ${first.row})`);
  }
  const rows = parsed.data.map((cells, i) => {
    if (cells.length !== columns!.length) {
      throw new CsvFormatError(
        `${source}: row ${i} has ${cells.length} cells, expected ${columns!.length}`,
      );
    }
    return cells.map((c) => (c === "nan" ? NaN : Number(c)));
  });
  return { meta, columns, rows, source };
}

export function readTable(path: string): DataTable {
  return parseTable(readFileSync(path, "utf8"), path);
}

/** Metadata value or a hard error; rendering must not guess. */
export function requireMeta(table: DataTable, key: string): string {
  const value = table.meta[key];
  if (value === undefined) {
    throw new CsvFormatError(`${table.source}: missing metadata '# ${key}:'`);
  }
  return value;
}

/** Assert a metadata entry matches what the figure was built for. */
export function expectMeta(table: DataTable, key: string, expected: string): void {
  const value = requireMeta(table, key);
  if (value !== expected) {
    throw new CsvFormatError(
      `${table.source}: metadata '${key}' is '${value}', expected '${expected}'`,
    );
  }
}

export function columnIndex(table: DataTable, name: string): number {
  const i = table.columns.indexOf(name);
  if (i < 0) {
    throw new CsvFormatError(
      `${table.source}: missing column '${name}' (have: ${table.columns.join(", ")})`,
    );
  }
  return i;
}

export function column(table: DataTable, name: string): number[] {
  const i = columnIndex(table, name);
  return table.rows.map((r) => r[i]);
}

/**
 * Matrix tables (scan2d, region) put the row coordinate in the first
 * column and one value column per grid point of the second coordinate,
 * with the second-coordinate grid repeated in a metadata line.
 */
export interface MatrixTable {
  rowCoord: number[];
  colCoord: number[];
  values: number[][]; // [row][col]
  meta: Record<string, string>;
  source: string;
}

export function asMatrix(table: DataTable, colGridKey: string): MatrixTable {
  const colCoord = requireMeta(table, colGridKey)
    .split(/\s+/)
    .map(Number);
  if (table.rows.length === 0) {
    throw new CsvFormatError(`${table.source}: matrix has no rows`);
  }
  if (table.columns.length !== colCoord.length + 1) {
    throw new CsvFormatError(
      `${table.source}: ${table.columns.length - 1} value columns but ` +
        `${colCoord.length} entries in '# ${colGridKey}:'`,
    );
  }
  const rowCoord = table.rows.map((r) => r[0]);
  const values = table.rows.map((r) => r.slice(1));
  return { rowCoord, colCoord, values, meta: table.meta, source: table.source };
}

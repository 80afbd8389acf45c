/**
 * Reading of the fixed ilwave diagnostics CSV schema.
 *
 * Absent quantities are emitted by the producer as empty cells; they parse
 * to null here. Unknown requested columns are hard errors naming the column.
 */

import * as fs from "fs";
import Papa from "papaparse";

export const DIAGNOSTIC_COLUMNS = [
  "t", "i1", "i2", "i3", "i4", "v", "j", "je", "window_mass", "far_field_l2",
  "x_moment", "f_integral", "weighted_moment_pred", "local_hm_left",
  "local_hm_right", "smoothing_halfnorm", "corollary_integrand",
  "edge_mass_flag",
] as const;

export interface Table {
  path: string;
  columns: string[];
  /** column name -> values (null for empty cells) */
  values: Map<string, (number | null)[]>;
  rowCount: number;
}

export class CsvError extends Error {}

export function readCsv(path: string): Table {
  const text = fs.readFileSync(path, "utf-8");
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new CsvError(`${path}: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length === 0) {
    throw new CsvError(`${path}: file has no header row`);
  }
  const columns = rows[0].map((c) => c.trim());
  const body = rows.slice(1);
  if (body.length === 0) {
    throw new CsvError(`${path}: no data rows`);
  }
  const values = new Map<string, (number | null)[]>();
  for (const col of columns) values.set(col, []);
  for (const row of body) {
    columns.forEach((col, i) => {
      const cell = (row[i] ?? "").trim();
      if (cell === "") {
        values.get(col)!.push(null);
      } else {
        const num = Number(cell);
        values.get(col)!.push(Number.isFinite(num) ? num : null);
      }
    });
  }
  return { path, columns, values, rowCount: body.length };
}

export function requireColumn(table: Table, column: string): (number | null)[] {
  const vals = table.values.get(column);
  if (vals === undefined) {
    throw new CsvError(
      `${table.path}: missing column '${column}' (has: ${table.columns.join(", ")})`,
    );
  }
  return vals;
}

import * as fs from "fs";
import Papa from "papaparse";

export class MissingColumnError extends Error {
  constructor(public readonly file: string, public readonly column: string) {
    super(`${file}: missing required column '${column}'`);
    this.name = "MissingColumnError";
  }
}

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export function readCsv(path: string): Table {
  const text = fs.readFileSync(path, "utf-8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
    delimiter: ",",
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${path}: CSV parse error at row ${e.row}: ${e.message}`);
  }
  return { columns: parsed.meta.fields ?? [], rows: parsed.data };
}

export function requireColumns(path: string, table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new MissingColumnError(path, name);
    }
  }
}

export function numeric(table: Table, column: string): number[] {
  return table.rows.map((r) => Number(r[column]));
}

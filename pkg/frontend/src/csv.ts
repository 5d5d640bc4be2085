/**
 * Reader for the spinbath CSV dialect: comma-separated, '.' decimal, LF
 * line endings, '#'-prefixed metadata lines before the column header.
 */

export interface Table {
  /** Metadata lines with the leading '# ' stripped. */
  meta: string[];
  columns: string[];
  /** Row-major numeric data; empty cells become NaN. */
  rows: number[][];
}

export class CsvError extends Error {}

export function parseCsv(text: string): Table {
  const meta: string[] = [];
  let columns: string[] | null = null;
  const rows: number[][] = [];

  for (const raw of text.split("\n")) {
    const line = raw.trimEnd();
    if (line === "") continue;
    if (line.startsWith("#")) {
      meta.push(line.replace(/^#\s?/, ""));
      continue;
    }
    const cells = line.split(",");
    if (columns === null) {
      columns = cells;
      continue;
    }
    if (cells.length !== columns.length) {
      throw new CsvError(
        `row has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(cells.map((c) => (c === "" ? NaN : Number(c))));
  }

  if (columns === null || rows.length === 0) {
    throw new CsvError("empty input: no data rows found");
  }
  if (meta.length === 0) {
    throw new CsvError("missing metadata header ('#'-prefixed lines)");
  }
  return { meta, columns, rows };
}

/** One column by name; the error names the missing column. */
export function column(table: Table, name: string): number[] {
  const i = table.columns.indexOf(name);
  if (i < 0) {
    throw new CsvError(
      `missing column '${name}' (have: ${table.columns.join(", ")})`,
    );
  }
  return table.rows.map((r) => r[i]);
}

/** Distinct values of a column, in order of first appearance. */
export function distinct(values: number[]): number[] {
  const out: number[] = [];
  for (const v of values) {
    if (!out.includes(v)) out.push(v);
  }
  return out;
}

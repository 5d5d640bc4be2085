#!/usr/bin/env node
/**
 * render_figs <figure-id> --in <csv...> --out <img>
 *
 * Reads spinbath CSV sweep files and writes one SVG panel. Inputs are
 * never modified; re-rendering the same inputs writes identical bytes.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseCsv } from "./csv.js";
import { FIGURE_IDS, FigureId, render } from "./figures.js";

interface Args {
  id: FigureId;
  inputs: string[];
  out: string;
}

export function parseArgs(argv: string[]): Args {
  const [id, ...rest] = argv;
  if (!id || !FIGURE_IDS.includes(id as FigureId)) {
    throw new Error(
      `usage: render_figs <${FIGURE_IDS.join("|")}> --in <csv...> --out <img>`,
    );
  }
  const inputs: string[] = [];
  let out: string | null = null;
  for (let i = 0; i < rest.length; i++) {
    if (rest[i] === "--in") {
      while (i + 1 < rest.length && !rest[i + 1].startsWith("--")) {
        inputs.push(rest[++i]);
      }
    } else if (rest[i] === "--out") {
      out = rest[++i] ?? null;
    } else {
      throw new Error(`unknown argument '${rest[i]}'`);
    }
  }
  if (inputs.length === 0) throw new Error("--in requires at least one CSV");
  if (!out) throw new Error("--out is required");
  return { id: id as FigureId, inputs, out };
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const tables = args.inputs.map((p) =>
      parseCsv(readFileSync(p, "utf-8")),
    );
    const svg = render({ id: args.id, inputs: tables });
    writeFileSync(args.out, svg);
  } catch (err) {
    console.error(`render_figs: ${(err as Error).message}`);
    return 2;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}

import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, describe, expect, it, vi } from "vitest";

import { main, parseArgs } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");
const tmp = mkdtempSync(join(tmpdir(), "render-figs-"));

afterAll(() => rmSync(tmp, { recursive: true, force: true }));

describe("parseArgs", () => {
  it("parses id, inputs, and output path", () => {
    const args = parseArgs(["2b", "--in", "a.csv", "--out", "o.svg"]);
    expect(args).toEqual({ id: "2b", inputs: ["a.csv"], out: "o.svg" });
  });

  it("accepts multiple --in values", () => {
    const args = parseArgs(["1e", "--in", "a.csv", "b.csv", "--out", "o.svg"]);
    expect(args.inputs).toEqual(["a.csv", "b.csv"]);
  });

  it("rejects a missing or bad figure id", () => {
    expect(() => parseArgs([])).toThrow(/usage: render_figs/);
    expect(() => parseArgs(["3x", "--in", "a", "--out", "b"])).toThrow(
      /usage/,
    );
  });

  it("requires --in and --out", () => {
    expect(() => parseArgs(["1d", "--out", "o.svg"])).toThrow(/--in/);
    expect(() => parseArgs(["1d", "--in", "a.csv"])).toThrow(/--out/);
  });

  it("rejects unknown flags", () => {
    expect(() =>
      parseArgs(["1d", "--in", "a", "--out", "b", "--shots", "5"]),
    ).toThrow(/unknown argument '--shots'/);
  });
});

describe("main", () => {
  it("writes an SVG file and exits 0", () => {
    const out = join(tmp, "fig1d.svg");
    const code = main([
      "1d",
      "--in",
      join(FIXTURES, "fig1d.csv"),
      "--out",
      out,
    ]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg ")).toBe(true);
  });

  it("re-rendering overwrites with identical bytes", () => {
    const out = join(tmp, "fig2d.svg");
    const argv = ["2d", "--in", join(FIXTURES, "fig2d.csv"), "--out", out];
    expect(main(argv)).toBe(0);
    const first = readFileSync(out);
    expect(main(argv)).toBe(0);
    expect(readFileSync(out).equals(first)).toBe(true);
  });

  it("reports read failures to stderr and exits nonzero", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const code = main([
      "1d",
      "--in",
      join(FIXTURES, "missing.csv"),
      "--out",
      join(tmp, "x.svg"),
    ]);
    expect(code).toBe(2);
    expect(err).toHaveBeenCalledWith(
      expect.stringContaining("render_figs:"),
    );
    err.mockRestore();
  });

  it("reports schema mismatches with the column name", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const code = main([
      "2c",
      "--in",
      join(FIXTURES, "fig1d.csv"),
      "--out",
      join(tmp, "x.svg"),
    ]);
    expect(code).toBe(2);
    expect(err).toHaveBeenCalledWith(
      expect.stringContaining("missing column 'amplitude'"),
    );
    err.mockRestore();
  });
});

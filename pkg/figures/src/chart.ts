/**
 * Minimal deterministic SVG line charts.
 *
 * No canvas or plotting dependency: the figures are assembled as SVG text,
 * which keeps the output byte-stable (no timestamps, fixed geometry) and lets
 * tests read the plotted values back out of data attributes.
 */

export interface Point {
  x: number;
  y: number;
  rawX: string;   // original CSV strings, embedded for exact round-trips
  rawY: string;
}

export interface Series {
  label: string;
  points: Point[];
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  yLog: boolean;
  series: Series[];
}

const WIDTH = 860;
const HEIGHT = 520;
const MARGIN = { left: 80, right: 180, top: 40, bottom: 60 };

const PALETTE = [
  '#1f77b4', '#d62728', '#2ca02c', '#9467bd',
  '#ff7f0e', '#8c564b', '#e377c2', '#7f7f7f',
];

const LOG_FLOOR = 1e-12;

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    return v.toExponential(0);
  }
  return String(Math.round(v * 1000) / 1000);
}

function linearTicks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / n / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    ticks.push(v);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let d = Math.ceil(Math.log10(lo)); d <= Math.floor(Math.log10(hi)); d++) {
    ticks.push(Math.pow(10, d));
  }
  const stride = Math.ceil(ticks.length / 8);
  return ticks.filter((_, i) => i % stride === 0);
}

export function renderChart(spec: ChartSpec): string {
  if (spec.series.length === 0 || spec.series.every((s) => s.points.length === 0)) {
    throw new Error('nothing to plot: every selected series is empty');
  }
  const pts = spec.series.flatMap((s) => s.points);
  const xs = pts.map((p) => p.x);
  const ysAll = pts.map((p) => (spec.yLog ? Math.max(p.y, LOG_FLOOR) : p.y));
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...ysAll);
  const yHi = Math.max(...ysAll);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;

  const xPos = (x: number) =>
    MARGIN.left + (xHi === xLo ? plotW / 2 : ((x - xLo) / (xHi - xLo)) * plotW);
  const yPos = (yIn: number) => {
    const y = spec.yLog ? Math.max(yIn, LOG_FLOOR) : yIn;
    if (spec.yLog) {
      const la = Math.log10(yLo);
      const lb = Math.log10(yHi);
      return MARGIN.top + plotH - (lb === la ? plotH / 2 : ((Math.log10(y) - la) / (lb - la)) * plotH);
    }
    return MARGIN.top + plotH - (yHi === yLo ? plotH / 2 : ((y - yLo) / (yHi - yLo)) * plotH);
  };

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
    `width="${WIDTH}" height="${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  out.push(`<text x="${MARGIN.left + plotW / 2}" y="24" text-anchor="middle" font-size="16">${esc(spec.title)}</text>`);

  // frame
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  out.push(`<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}" stroke="black"/>`);
  out.push(`<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`);

  for (const t of linearTicks(xLo, xHi)) {
    const px = xPos(t);
    out.push(`<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + 5}" stroke="black"/>`);
    out.push(`<text x="${px.toFixed(2)}" y="${y0 + 20}" text-anchor="middle" font-size="12">${fmtTick(t)}</text>`);
  }
  const yTicks = spec.yLog ? logTicks(yLo, yHi) : linearTicks(yLo, yHi);
  for (const t of yTicks) {
    const py = yPos(t);
    out.push(`<line x1="${x0 - 5}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="black"/>`);
    out.push(`<text x="${x0 - 8}" y="${(py + 4).toFixed(2)}" text-anchor="end" font-size="12">${spec.yLog ? t.toExponential(0) : fmtTick(t)}</text>`);
  }
  out.push(`<text x="${x0 + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="14">${esc(spec.xLabel)}</text>`);
  out.push(`<text x="22" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="14" transform="rotate(-90 22 ${MARGIN.top + plotH / 2})">${esc(spec.yLabel)}</text>`);

  spec.series.forEach((series, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const coords = series.points
      .map((p) => `${xPos(p.x).toFixed(2)},${yPos(p.y).toFixed(2)}`)
      .join(' ');
    out.push(`<polyline class="series" data-series="${esc(series.label)}" points="${coords}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    for (const p of series.points) {
      out.push(
        `<circle class="pt" data-series="${esc(series.label)}" data-x="${esc(p.rawX)}" ` +
        `data-y="${esc(p.rawY)}" cx="${xPos(p.x).toFixed(2)}" cy="${yPos(p.y).toFixed(2)}" r="3" fill="${color}"/>`,
      );
    }
    const ly = MARGIN.top + 16 + idx * 20;
    const lx = MARGIN.left + plotW + 14;
    out.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 24}" y2="${ly - 4}" stroke="${color}" stroke-width="1.8"/>`);
    out.push(`<text x="${lx + 30}" y="${ly}" font-size="13">${esc(series.label)}</text>`);
  });

  out.push('</svg>');
  return out.join('\n') + '\n';
}

/**
 * CLI: render simulator CSV output as an SVG figure.
 *
 *   render --kind failure-vs-T     --in out/sweep_t.csv     --out fig1.svg
 *   render --kind failure-vs-theta --in out/sweep_theta.csv --out fig2.svg
 *   render --kind spectrum         --in out/spectrum.csv    --out fig3.svg
 *
 * Optional filters: --modes ex,sc --thetas 0.5235987755983,...
 * Reads only the documented CSV schemas; knows nothing about the simulator.
 */

import { readFileSync, writeFileSync } from 'fs';

import { renderChart, Series } from './chart';
import { parseSpectrumCsv, parseSweepCsv, SchemaError, SweepRow } from './csv';

export const KINDS = ['failure-vs-T', 'failure-vs-theta', 'spectrum'] as const;
export type Kind = (typeof KINDS)[number];

export interface RenderOptions {
  modes?: string[];
  thetas?: number[];
}

function groupSweepSeries(
  rows: SweepRow[],
  xOf: (r: SweepRow) => { x: number; rawX: string },
  opts: RenderOptions,
): Series[] {
  let keep = rows;
  if (opts.modes && opts.modes.length > 0) {
    keep = keep.filter((r) => opts.modes!.includes(r.mode));
  }
  if (opts.thetas && opts.thetas.length > 0) {
    keep = keep.filter((r) => opts.thetas!.some((t) => Math.abs(t - r.theta) < 1e-9));
  }
  if (keep.length === 0) {
    throw new SchemaError('selection matched no rows');
  }
  const byKey = new Map<string, SweepRow[]>();
  for (const row of keep) {
    const key = `${row.mode}|${row.raw['theta']}`;
    const bucket = byKey.get(key) ?? [];
    bucket.push(row);
    byKey.set(key, bucket);
  }
  const manyThetas = new Set(keep.map((r) => r.raw['theta'])).size > 1;
  const series: Series[] = [];
  for (const [key, bucket] of [...byKey.entries()].sort()) {
    const [mode, thetaRaw] = key.split('|');
    bucket.sort((a, b) => xOf(a).x - xOf(b).x);
    series.push({
      label: manyThetas ? `${mode} theta=${Number(thetaRaw).toFixed(4)}` : mode,
      points: bucket.map((r) => {
        const { x, rawX } = xOf(r);
        return { x, y: r.failureProb, rawX, rawY: r.raw['failure_prob'] };
      }),
    });
  }
  return series;
}

export function renderFailureVsT(csvText: string, opts: RenderOptions = {}): string {
  const rows = parseSweepCsv(csvText);
  const series = groupSweepSeries(rows, (r) => ({ x: r.T, rawX: r.raw['T'] }), opts);
  return renderChart({
    title: 'Failure probability vs annealing time',
    xLabel: 'annealing time T',
    yLabel: 'failure probability',
    yLog: true,
    series,
  });
}

export function renderFailureVsTheta(csvText: string, opts: RenderOptions = {}): string {
  const rows = parseSweepCsv(csvText);
  const series = groupSweepSeries(rows, (r) => ({ x: r.theta, rawX: r.raw['theta'] }), opts);
  // one series per mode when every mode appears once per theta
  return renderChart({
    title: 'Failure probability vs basis angle',
    xLabel: 'angle theta (rad)',
    yLabel: 'failure probability',
    yLog: false,
    series,
  });
}

export function renderSpectrum(csvText: string): string {
  const data = parseSpectrumCsv(csvText);
  const series: Series[] = data.levels.map((name, j) => ({
    label: name,
    points: data.rows.map((row, i) => ({
      x: data.sNum[i],
      y: row[j],
      rawX: data.s[i],
      rawY: String(row[j]),
    })),
  }));
  return renderChart({
    title: 'Instantaneous spectrum along the anneal',
    xLabel: 's = t/T',
    yLabel: 'energy',
    yLog: false,
    series,
  });
}

export function render(kind: Kind, csvText: string, opts: RenderOptions = {}): string {
  switch (kind) {
    case 'failure-vs-T':
      return renderFailureVsT(csvText, opts);
    case 'failure-vs-theta':
      return renderFailureVsTheta(csvText, opts);
    case 'spectrum':
      return renderSpectrum(csvText);
  }
}

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    if (argv[i].startsWith('--')) {
      out.set(argv[i].slice(2), argv[i + 1] ?? '');
      i++;
    }
  }
  return out;
}

export function main(argv: string[]): number {
  const args = parseArgs(argv);
  const kind = args.get('kind') as Kind | undefined;
  const input = args.get('in');
  const output = args.get('out');
  if (!kind || !KINDS.includes(kind) || !input || !output) {
    console.error(`usage: render --kind {${KINDS.join('|')}} --in data.csv --out figure.svg`);
    return 2;
  }
  const opts: RenderOptions = {};
  if (args.has('modes')) {
    opts.modes = args.get('modes')!.split(',').filter((m) => m.length > 0);
  }
  if (args.has('thetas')) {
    opts.thetas = args.get('thetas')!.split(',').map(Number);
  }
  try {
    const svg = render(kind, readFileSync(input, 'utf8'), opts);
    writeFileSync(output, svg);
    console.log(`wrote ${output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema: ${err.message}`);
      return 2;
    }
    console.error(String(err));
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}

import assert from 'node:assert/strict';
import { existsSync, readFileSync } from 'node:fs';
import { join } from 'node:path';
import { test } from 'node:test';

import { SchemaError, parseSweepCsv } from '../src/csv';
import { render, renderFailureVsT, renderSpectrum } from '../src/render';

const FIXTURE = join(__dirname, '..', '..', 'test', 'fixtures', 'fig1_sweep.csv');
// criterion-5 output of the simulator's acceptance suite, when it has run
const ACCEPTANCE_CSV = join(__dirname, '..', '..', '..', 'out', 'acceptance', 'fig1_sweep.csv');

interface Marker {
  series: string;
  x: string;
  y: string;
}

function extractMarkers(svg: string): Marker[] {
  const markers: Marker[] = [];
  const re = /<circle class="pt" data-series="([^"]*)" data-x="([^"]*)" data-y="([^"]*)"/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(svg)) !== null) {
    markers.push({ series: m[1], x: m[2], y: m[3] });
  }
  return markers;
}

function seriesLabels(svg: string): string[] {
  const labels = new Set<string>();
  const re = /<polyline class="series" data-series="([^"]*)"/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(svg)) !== null) {
    labels.add(m[1]);
  }
  return [...labels].sort();
}

function spotCheckAgainstCsv(svg: string, csvText: string, xColumn: 'T' | 'theta') {
  const rows = parseSweepCsv(csvText);
  const markers = extractMarkers(svg);
  const bySeries = new Map<string, Marker[]>();
  for (const mk of markers) {
    const bucket = bySeries.get(mk.series) ?? [];
    bucket.push(mk);
    bySeries.set(mk.series, bucket);
  }
  for (const [, pts] of bySeries) {
    assert.ok(pts.length >= 3, 'need at least three points per series to spot-check');
    const picks = [pts[0], pts[Math.floor(pts.length / 2)], pts[pts.length - 1]];
    for (const pick of picks) {
      // marker coordinates must be literal CSV cell values
      const match = rows.find(
        (r) => r.raw[xColumn] === pick.x && r.raw['failure_prob'] === pick.y,
      );
      assert.ok(match, `marker (${pick.x}, ${pick.y}) not found in CSV`);
    }
  }
  return bySeries;
}

test('fixture CSV renders three mode series and round-trips exactly', () => {
  const csvText = readFileSync(FIXTURE, 'utf8');
  const svg = renderFailureVsT(csvText);
  const labels = seriesLabels(svg);
  assert.deepEqual(labels, ['ex', 'gs', 'sc']);
  const bySeries = spotCheckAgainstCsv(svg, csvText, 'T');
  assert.equal(bySeries.size, 3);
  for (const [, pts] of bySeries) {
    assert.equal(pts.length, 3);
  }
});

test('criterion 11: acceptance sweep renders three series matching the CSV', (t) => {
  if (!existsSync(ACCEPTANCE_CSV)) {
    t.skip('run the simulator acceptance suite first (creates out/acceptance/fig1_sweep.csv)');
    return;
  }
  const csvText = readFileSync(ACCEPTANCE_CSV, 'utf8');
  const svg = renderFailureVsT(csvText);
  const labels = seriesLabels(svg);
  assert.equal(labels.length, 3, 'expected three series');
  const bySeries = spotCheckAgainstCsv(svg, csvText, 'T');
  assert.equal(bySeries.size, 3);
  // visual data identical to the CSV: every plotted marker carries a CSV value
  const rows = parseSweepCsv(csvText);
  for (const [, pts] of bySeries) {
    for (const mk of pts) {
      assert.ok(rows.some((r) => r.raw['T'] === mk.x && r.raw['failure_prob'] === mk.y));
    }
    // failure falls as T grows in each series (monotone trend of criterion 5)
    const ys = pts.map((p) => Number(p.y));
    assert.ok(ys[ys.length - 1] < ys[0]);
  }
  console.log(`criterion 11: PASS - figure round-trip over ${rows.length} CSV rows`);
});

test('rendering is deterministic', () => {
  const csvText = readFileSync(FIXTURE, 'utf8');
  assert.equal(renderFailureVsT(csvText), renderFailureVsT(csvText));
});

test('mode filter selects a single series', () => {
  const csvText = readFileSync(FIXTURE, 'utf8');
  const svg = renderFailureVsT(csvText, { modes: ['ex'] });
  assert.deepEqual(seriesLabels(svg), ['ex']);
});

test('missing column is a schema error naming the column', () => {
  const bad =
    'mode,theta,b1,b2,k,T,bx1,bx2,steps,success_prob,blocked\n' +
    'ex,0.5,1,1,2,5,1,2,80,0.9,false\n';
  assert.throws(() => renderFailureVsT(bad), (err: unknown) => {
    assert.ok(err instanceof SchemaError);
    assert.match((err as Error).message, /failure_prob/);
    return true;
  });
});

test('empty selection is an error', () => {
  const csvText = readFileSync(FIXTURE, 'utf8');
  assert.throws(() => renderFailureVsT(csvText, { modes: ['nope'] }), SchemaError);
});

test('failure-vs-theta renders from the sweep schema', () => {
  const csvText = readFileSync(FIXTURE, 'utf8');
  const svg = render('failure-vs-theta', csvText, { modes: ['sc'] });
  assert.deepEqual(seriesLabels(svg), ['sc']);
});

test('spectrum CSV renders one curve per level', () => {
  const header = 's,' + Array.from({ length: 8 }, (_, i) => `e${i}`).join(',');
  const lines = [header];
  for (let i = 0; i <= 4; i++) {
    const s = (i / 4).toFixed(2);
    lines.push([s, ...Array.from({ length: 8 }, (_, j) => String(j + i * 0.1))].join(','));
  }
  const svg = renderSpectrum(lines.join('\n') + '\n');
  assert.equal(seriesLabels(svg).length, 8);
  const markers = extractMarkers(svg);
  assert.equal(markers.length, 8 * 5);
});

test('spectrum schema is validated', () => {
  assert.throws(() => renderSpectrum('s,e0,e2\n0,1,2\n'), SchemaError);
});

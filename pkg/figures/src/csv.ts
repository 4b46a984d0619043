/**
 * CSV ingestion for the simulator's two output schemas.
 *
 * Values are kept as the original strings alongside parsed numbers so that
 * rendered data points can be traced back to the file byte-for-byte.
 */

export const SWEEP_HEADER = [
  'mode', 'theta', 'b1', 'b2', 'k', 'T', 'bx1', 'bx2', 'steps',
  'failure_prob', 'success_prob', 'blocked',
];

export interface SweepRow {
  raw: Record<string, string>;
  mode: string;
  theta: number;
  T: number;
  failureProb: number;
}

export interface SpectrumData {
  levels: string[];            // column names e0..e{L-1}
  s: string[];                 // raw s values per row
  rows: number[][];            // [row][level]
  sNum: number[];
}

export class SchemaError extends Error {}

function splitLines(text: string): string[] {
  return text.split('\n').map((l) => l.trim()).filter((l) => l.length > 0);
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new SchemaError('empty CSV');
  }
  const header = lines[0].split(',');
  for (const col of SWEEP_HEADER) {
    if (!header.includes(col)) {
      throw new SchemaError(`missing column "${col}" in sweep CSV`);
    }
  }
  const rows: SweepRow[] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(',');
    if (cells.length !== header.length) {
      throw new SchemaError(`row has ${cells.length} cells, header has ${header.length}`);
    }
    const raw: Record<string, string> = {};
    header.forEach((name, i) => { raw[name] = cells[i]; });
    rows.push({
      raw,
      mode: raw['mode'],
      theta: Number(raw['theta']),
      T: Number(raw['T']),
      failureProb: Number(raw['failure_prob']),
    });
  }
  return rows;
}

export function parseSpectrumCsv(text: string): SpectrumData {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new SchemaError('empty CSV');
  }
  const header = lines[0].split(',');
  if (header[0] !== 's' || header.length < 2) {
    throw new SchemaError('spectrum CSV must start with column "s" followed by levels');
  }
  const levels = header.slice(1);
  levels.forEach((name, i) => {
    if (name !== `e${i}`) {
      throw new SchemaError(`expected level column "e${i}", found "${name}"`);
    }
  });
  const s: string[] = [];
  const sNum: number[] = [];
  const rows: number[][] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(',');
    if (cells.length !== header.length) {
      throw new SchemaError(`row has ${cells.length} cells, header has ${header.length}`);
    }
    s.push(cells[0]);
    sNum.push(Number(cells[0]));
    rows.push(cells.slice(1).map(Number));
  }
  return { levels, s, rows, sNum };
}

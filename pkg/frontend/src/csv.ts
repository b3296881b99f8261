/**
 * Parsers for the CSV contracts of the simulation CLI.
 *
 * This package never recomputes physics: every number it draws originates in
 * one of these files. Parsing is strict — a header that does not match the
 * contract fails loudly, naming the missing columns.
 */

export const SWEEP_COLUMNS = [
  'panel',
  'swept_name',
  'swept_value',
  'kappa_m',
  'pdc_analytic',
  'pdc_mc',
  'ci_low',
  'ci_high',
  'noise_exp',
  'clutter_exp',
  'trials',
  'seed',
] as const;

export const MARKER_COLUMNS = ['panel', 'marker_name', 'marker_value'] as const;
export const HIST_COLUMNS = ['bin_left', 'bin_right', 'count'] as const;

export interface SweepRow {
  panel: string;
  swept_name: string;
  swept_value: number;
  kappa_m: number;
  pdc_analytic: number;
  pdc_mc: number;
  ci_low: number;
  ci_high: number;
  noise_exp: number;
  clutter_exp: number;
  trials: number;
  seed: string;
}

export interface MarkerRow {
  panel: string;
  marker_name: string;
  marker_value: number;
}

export interface HistBin {
  bin_left: number;
  bin_right: number;
  count: number;
}

export class SchemaError extends Error {}

/** Data lines of a CSV body: header validated, comment lines skipped. */
function dataLines(text: string, expected: readonly string[], what: string): string[][] {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0 && !line.startsWith('#'));
  if (lines.length === 0) {
    throw new SchemaError(`${what}: empty file`);
  }
  const header = lines[0].split(',');
  const missing = expected.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`${what}: missing column(s) ${missing.join(', ')} in header "${lines[0]}"`);
  }
  const extra = header.filter((c) => !(expected as readonly string[]).includes(c));
  if (extra.length > 0) {
    throw new SchemaError(`${what}: unexpected column(s) ${extra.join(', ')}`);
  }
  // Reorder fields to the contract order in case the producer permuted them.
  const index = expected.map((c) => header.indexOf(c));
  return lines.slice(1).map((line, i) => {
    const parts = line.split(',');
    if (parts.length !== header.length) {
      throw new SchemaError(`${what}: row ${i + 1} has ${parts.length} fields, expected ${header.length}`);
    }
    return index.map((j) => parts[j]);
  });
}

function num(field: string): number {
  return Number(field); // "nan" -> NaN, handled downstream by finite checks
}

export function parseSweepCsv(text: string): SweepRow[] {
  return dataLines(text, SWEEP_COLUMNS, 'sweep csv').map((f) => ({
    panel: f[0],
    swept_name: f[1],
    swept_value: num(f[2]),
    kappa_m: num(f[3]),
    pdc_analytic: num(f[4]),
    pdc_mc: num(f[5]),
    ci_low: num(f[6]),
    ci_high: num(f[7]),
    noise_exp: num(f[8]),
    clutter_exp: num(f[9]),
    trials: num(f[10]),
    seed: f[11],
  }));
}

export function parseMarkersCsv(text: string): MarkerRow[] {
  return dataLines(text, MARKER_COLUMNS, 'markers csv').map((f) => ({
    panel: f[0],
    marker_name: f[1],
    marker_value: num(f[2]),
  }));
}

export function parseHistCsv(text: string): HistBin[] {
  return dataLines(text, HIST_COLUMNS, 'histogram csv').map((f) => ({
    bin_left: num(f[0]),
    bin_right: num(f[1]),
    count: num(f[2]),
  }));
}

/** Linear and logarithmic axis scales with tick generation. */

export type ScaleKind = 'linear' | 'log';

export interface Scale {
  kind: ScaleKind;
  domain: [number, number];
  range: [number, number];
  map(v: number): number;
  ticks(): number[];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    kind: 'linear',
    domain,
    range,
    map: (v) => r0 + ((v - d0) / span) * (r1 - r0),
    ticks: () => linearTicks(d0, d1),
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const d0 = Math.log10(domain[0]);
  const d1 = Math.log10(domain[1]);
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    kind: 'log',
    domain,
    range,
    map: (v) => r0 + ((Math.log10(v) - d0) / span) * (r1 - r0),
    ticks: () => logTicks(domain[0], domain[1]),
  };
}

export function makeScale(kind: ScaleKind, domain: [number, number], range: [number, number]): Scale {
  return kind === 'log' ? logScale(domain, range) : linearScale(domain, range);
}

function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-9 * step; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const e0 = Math.ceil(Math.log10(lo) - 1e-9);
  const e1 = Math.floor(Math.log10(hi) + 1e-9);
  for (let e = e0; e <= e1; e += 1) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length >= 2) return ticks;
  // Less than one decade: fall back to linear ticks.
  return linearTicks(lo, hi, 4);
}

/** Compact tick label: plain within [1e-3, 1e4), exponent notation outside. */
export function fmtTick(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 1e-3 && a < 1e4) {
    const s = v.toPrecision(4);
    return s.includes('.') ? s.replace(/\.?0+$/, '') : s;
  }
  const exp = Math.floor(Math.log10(a));
  const mant = v / Math.pow(10, exp);
  const m = Math.abs(mant - 1) < 1e-9 ? '' : `${mant.toPrecision(2).replace(/\.?0+$/, '')}x`;
  return `${m}1e${exp}`;
}

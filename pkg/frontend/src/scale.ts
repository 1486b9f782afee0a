/** Linear axis scaling, tick placement, and the heatmap color ramp. */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (d0 === d1) {
    // degenerate span (constant series): pad so the line sits mid-axis
    const pad = d0 === 0 ? 1 : Math.abs(d0) * 0.5;
    d0 -= pad;
    d1 += pad;
  }
  const k = (range[1] - range[0]) / (d1 - d0);
  const fn = ((v: number) => range[0] + (v - d0) * k) as Scale;
  fn.domain = [d0, d1];
  fn.range = range;
  return fn;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1];
  return [lo, hi];
}

/** Round tick positions covering the domain, at most `count` of them. */
export function ticks(domain: [number, number], count = 6): number[] {
  const span = domain[1] - domain[0];
  if (span <= 0) return [domain[0]];
  const rawStep = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const start = Math.ceil(domain[0] / step) * step;
  const out: number[] = [];
  for (let v = start; v <= domain[1] + 1e-9 * span; v += step) {
    out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return out;
}

const RAMP: [number, number, number][] = [
  [13, 8, 135],
  [84, 2, 163],
  [139, 10, 165],
  [185, 50, 137],
  [219, 92, 104],
  [244, 136, 73],
  [254, 188, 43],
  [240, 249, 33],
];

/** Map t in [0,1] onto the plasma-like ramp as an svg color string. */
export function rampColor(t: number): string {
  const x = Math.min(1, Math.max(0, t)) * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(x));
  const f = x - i;
  const c = RAMP[i].map((a, k) => Math.round(a + f * (RAMP[i + 1][k] - a)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

/** Fixed-precision number formatting so output bytes never drift. */
export function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

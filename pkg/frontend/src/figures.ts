import { numeric, readCsv, requireColumns, Table } from "./csv";
import { extent, fmt, linearScale, rampColor } from "./scale";
import { drawFrame, SvgDoc } from "./svg";
import { FigureSpec } from "./spec";

const TAG_COLORS: Record<string, string> = {
  monostable: "#8a8a8a",
  bistable: "#2b6cb0",
  oscillatory: "#dd3b2a",
};

function domain(values: number[], override?: [number, number]): [number, number] {
  return override ?? extent(values);
}

function padded(d: [number, number], frac = 0.06): [number, number] {
  const span = d[1] - d[0] || 1;
  return [d[0] - frac * span, d[1] + frac * span];
}

function load(spec: FigureSpec, name: string, columns: string[]): Table {
  const path = spec.inputs[name];
  const table = readCsv(path);
  requireColumns(path, table, columns);
  return table;
}

/** Steady-state branches vs the scanned parameter, colored by regime tag. */
export function regimeFigure(spec: FigureSpec): SvgDoc {
  const path = spec.inputs.scan;
  const table = readCsv(path);
  requireColumns(path, table, ["tag", "rho_rr_roots"]);
  const xCol = table.columns[0];
  const xs = numeric(table, xCol);

  const pts: { x: number; y: number; tag: string }[] = [];
  for (let i = 0; i < table.rows.length; i++) {
    const tag = table.rows[i].tag;
    for (const root of table.rows[i].rho_rr_roots.split(";")) {
      if (root !== "") pts.push({ x: xs[i], y: Number(root), tag });
    }
  }
  const doc = new SvgDoc(560, 360);
  const frame = drawFrame(doc, {
    xDomain: domain(xs, spec.xRange),
    yDomain: padded(domain(pts.map((p) => p.y), spec.yRange)),
    xLabel: spec.xLabel ?? xCol,
    yLabel: spec.yLabel ?? "rho_rr fixed points",
    title: spec.title ?? "Regime partition",
  });
  for (const p of pts) {
    doc.circle(frame.x(p.x), frame.y(p.y), 2, TAG_COLORS[p.tag] ?? "black");
  }
  // tag band along the bottom edge of the panel
  const w = xs.length > 1 ? (frame.right - frame.left) / (xs.length - 1) : 4;
  for (let i = 0; i < xs.length; i++) {
    doc.rect(frame.x(xs[i]) - w / 2, frame.bottom - 6, w, 6,
      TAG_COLORS[table.rows[i].tag] ?? "black");
  }
  let lx = frame.left + 10;
  for (const [tag, color] of Object.entries(TAG_COLORS)) {
    doc.circle(lx, frame.top + 8, 4, color);
    doc.text(lx + 8, frame.top + 12, tag, 11, "start");
    lx += 90;
  }
  return doc;
}

/** Forward and backward sweep branches of the adiabatic detuning loop. */
export function hysteresisFigure(spec: FigureSpec): SvgDoc {
  const fwd = load(spec, "forward", ["delta_c_in_gamma", "rho_rr_avg"]);
  const bwd = load(spec, "backward", ["delta_c_in_gamma", "rho_rr_avg"]);
  const fx = numeric(fwd, "delta_c_in_gamma");
  const fy = numeric(fwd, "rho_rr_avg");
  const bx = numeric(bwd, "delta_c_in_gamma");
  const by = numeric(bwd, "rho_rr_avg");

  const doc = new SvgDoc(560, 360);
  const frame = drawFrame(doc, {
    xDomain: domain(fx.concat(bx), spec.xRange),
    yDomain: padded(domain(fy.concat(by), spec.yRange)),
    xLabel: spec.xLabel ?? "delta_c (gamma)",
    yLabel: spec.yLabel ?? "rho_rr (hold average)",
    title: spec.title ?? "Hysteresis loop",
  });
  doc.polyline(fx.map((x, i) => [frame.x(x), frame.y(fy[i])]), "#2b6cb0", 1.8);
  doc.polyline(bx.map((x, i) => [frame.x(x), frame.y(by[i])]), "#dd3b2a", 1.8);
  doc.text(frame.right - 8, frame.top + 14, "forward", 11, "end",
    ' fill="#2b6cb0"');
  doc.text(frame.right - 8, frame.top + 28, "backward", 11, "end",
    ' fill="#dd3b2a"');
  return doc;
}

/** One column of a time-series CSV against the time axis. */
export function timeseriesFigure(spec: FigureSpec): SvgDoc {
  const column = spec.column ?? "rho_rr";
  const table = load(spec, "series", ["t_in_inv_gamma", column]);
  const t = numeric(table, "t_in_inv_gamma");
  const y = numeric(table, column);

  const doc = new SvgDoc(640, 320);
  const frame = drawFrame(doc, {
    xDomain: domain(t, spec.xRange),
    yDomain: padded(domain(y, spec.yRange)),
    xLabel: spec.xLabel ?? "t (1/gamma)",
    yLabel: spec.yLabel ?? column,
    title: spec.title,
  });
  doc.polyline(t.map((x, i) => [frame.x(x), frame.y(y[i])]), "#1a202c", 1.2);
  return doc;
}

/** Velocity-resolved Im rho_eg(t, v) as a colormap grid. */
export function heatmapFigure(spec: FigureSpec): SvgDoc {
  const table = load(spec, "grid", ["t_in_inv_gamma", "v_in_m_per_s", "im_rho_eg"]);
  const t = numeric(table, "t_in_inv_gamma");
  const v = numeric(table, "v_in_m_per_s");
  const z = numeric(table, "im_rho_eg");
  const tVals = Array.from(new Set(t)).sort((a, b) => a - b);
  const vVals = Array.from(new Set(v)).sort((a, b) => a - b);
  const [zLo, zHi] = extent(z);

  const doc = new SvgDoc(640, 400);
  const frame = drawFrame(doc, {
    xDomain: extent(tVals),
    yDomain: extent(vVals),
    xLabel: spec.xLabel ?? "t (1/gamma)",
    yLabel: spec.yLabel ?? "v (m/s)",
    title: spec.title ?? "Im rho_eg(t, v)",
    right: 560,
  });
  const cw = (frame.right - frame.left) / Math.max(1, tVals.length - 1);
  const ch = (frame.bottom - frame.top) / Math.max(1, vVals.length - 1);
  const span = zHi - zLo || 1;
  for (let i = 0; i < t.length; i++) {
    doc.rect(frame.x(t[i]) - cw / 2, frame.y(v[i]) - ch / 2, cw + 0.5, ch + 0.5,
      rampColor((z[i] - zLo) / span));
  }
  // color bar
  const barX = 580;
  const steps = 40;
  const barH = (frame.bottom - frame.top) / steps;
  for (let i = 0; i < steps; i++) {
    doc.rect(barX, frame.bottom - (i + 1) * barH, 14, barH + 0.5, rampColor(i / (steps - 1)));
  }
  doc.text(barX + 7, frame.top - 8, fmt(zHi), 9);
  doc.text(barX + 7, frame.bottom + 12, fmt(zLo), 9);
  return doc;
}

/** Oscillation frequency vs detuning for both geometries plus an eta inset. */
export function freqscanFigure(spec: FigureSpec): SvgDoc {
  const table = load(spec, "scan", [
    "delta_c_in_gamma",
    "f_cou_in_cycles_per_inv_gamma",
    "f_co_in_cycles_per_inv_gamma",
    "eta",
    "amp_cou_normalized",
    "amp_co_normalized",
  ]);
  const dc = numeric(table, "delta_c_in_gamma");
  const fCou = numeric(table, "f_cou_in_cycles_per_inv_gamma");
  const fCo = numeric(table, "f_co_in_cycles_per_inv_gamma");
  const aCou = numeric(table, "amp_cou_normalized");
  const aCo = numeric(table, "amp_co_normalized");

  const doc = new SvgDoc(880, 380);
  const xDom = domain(dc, spec.xRange);
  const yDom = padded([0, Math.max(...fCou, ...fCo, 1e-3)]);
  const panels: [string, number[], number[], number, number][] = [
    ["counter-propagating", fCou, aCou, 58, 420],
    ["co-propagating", fCo, aCo, 480, 842],
  ];
  for (const [label, f, a, left, right] of panels) {
    const frame = drawFrame(doc, {
      xDomain: xDom,
      yDomain: yDom,
      xLabel: spec.xLabel ?? "delta_c (gamma)",
      yLabel: left === 58 ? (spec.yLabel ?? "f (cycles gamma)") : undefined,
      title: label,
      left,
      right,
    });
    for (let i = 0; i < dc.length; i++) {
      if (f[i] > 0) {
        doc.circle(frame.x(dc[i]), frame.y(f[i]), 4, rampColor(a[i]));
      }
    }
  }
  // eta inset, top right of the second panel
  const ins = { left: 700, right: 834, top: 52, bottom: 120 };
  const ix = linearScale(xDom, [ins.left, ins.right]);
  const iy = linearScale([-1.05, 1.05], [ins.bottom, ins.top]);
  doc.rect(ins.left, ins.top, ins.right - ins.left, ins.bottom - ins.top, "#f5f5f5");
  doc.line(ins.left, iy(0), ins.right, iy(0), "#bbbbbb");
  const pts: [number, number][] = [];
  for (let i = 0; i < dc.length; i++) {
    const eta = Number(table.rows[i].eta);
    if (Number.isFinite(eta)) pts.push([ix(dc[i]), iy(eta)]);
  }
  if (pts.length > 1) doc.polyline(pts, "#1a202c", 1.2);
  for (const [px, py] of pts) doc.circle(px, py, 2, "#1a202c");
  doc.text((ins.left + ins.right) / 2, ins.top - 5, "eta", 10);
  return doc;
}

export function buildFigure(spec: FigureSpec): SvgDoc {
  switch (spec.kind) {
    case "regime":
      return regimeFigure(spec);
    case "hysteresis":
      return hysteresisFigure(spec);
    case "timeseries":
      return timeseriesFigure(spec);
    case "heatmap":
      return heatmapFigure(spec);
    case "freqscan":
      return freqscanFigure(spec);
  }
}

import { fmt, fmtTick, linearScale, Scale, ticks } from "./scale";

/** Deterministic string-built SVG document. */
export class SvgDoc {
  private parts: string[] = [];

  constructor(public readonly width: number, public readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
    );
  }

  raw(s: string): void {
    this.parts.push(s);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, w = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${w}"/>`,
    );
  }

  polyline(pts: [number, number][], stroke: string, w = 1.5): void {
    const d = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${d}" fill="none" stroke="${stroke}" stroke-width="${w}"/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(
      `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}"/>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  text(x: number, y: number, s: string, size = 11, anchor = "middle", extra = ""): void {
    const esc = s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}"${extra}>${esc}</text>`,
    );
  }

  toString(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export interface Frame {
  x: Scale;
  y: Scale;
  left: number;
  top: number;
  right: number;
  bottom: number;
}

export interface FrameOptions {
  xDomain: [number, number];
  yDomain: [number, number];
  xLabel?: string;
  yLabel?: string;
  title?: string;
  left?: number;
  top?: number;
  right?: number;
  bottom?: number;
}

/** Axes, ticks, and labels for one panel; returns the data-to-pixel scales. */
export function drawFrame(doc: SvgDoc, opts: FrameOptions): Frame {
  const left = opts.left ?? 58;
  const top = opts.top ?? 28;
  const right = opts.right ?? doc.width - 14;
  const bottom = opts.bottom ?? doc.height - 42;
  const x = linearScale(opts.xDomain, [left, right]);
  const y = linearScale(opts.yDomain, [bottom, top]);

  doc.line(left, top, left, bottom, "black");
  doc.line(left, bottom, right, bottom, "black");
  for (const t of ticks(x.domain)) {
    const px = x(t);
    doc.line(px, bottom, px, bottom + 4, "black");
    doc.text(px, bottom + 16, fmtTick(t), 10);
  }
  for (const t of ticks(y.domain)) {
    const py = y(t);
    doc.line(left - 4, py, left, py, "black");
    doc.text(left - 7, py + 3, fmtTick(t), 10, "end");
  }
  if (opts.xLabel) {
    doc.text((left + right) / 2, bottom + 32, opts.xLabel, 12);
  }
  if (opts.yLabel) {
    const cy = (top + bottom) / 2;
    doc.text(16, cy, opts.yLabel, 12, "middle", ` transform="rotate(-90 16 ${fmt(cy)})"`);
  }
  if (opts.title) {
    doc.text((left + right) / 2, top - 10, opts.title, 13);
  }
  return { x, y, left, top, right, bottom };
}

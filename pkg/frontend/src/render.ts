import * as fs from "fs";
import * as path from "path";
import { Resvg } from "@resvg/resvg-js";
import { buildFigure } from "./figures";
import { FigureSpec } from "./spec";

export interface RenderResult {
  svgPath: string;
  pngPath: string;
}

/** Build the figure and write both image files next to spec.output. */
export function render(spec: FigureSpec): RenderResult {
  const svg = buildFigure(spec).toString();
  const dir = path.dirname(spec.output);
  fs.mkdirSync(dir, { recursive: true });
  const svgPath = `${spec.output}.svg`;
  const pngPath = `${spec.output}.png`;
  fs.writeFileSync(svgPath, svg, "utf-8");
  const png = new Resvg(svg, { fitTo: { mode: "zoom", value: 2 } }).render().asPng();
  fs.writeFileSync(pngPath, png);
  return { svgPath, pngPath };
}

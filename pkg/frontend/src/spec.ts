import * as fs from "fs";

export const KINDS = ["regime", "hysteresis", "timeseries", "heatmap", "freqscan"] as const;
export type FigureKind = (typeof KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  /** Named input CSV paths; required names depend on the kind. */
  inputs: Record<string, string>;
  /** Output path without extension; .svg and .png are both written. */
  output: string;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  /** timeseries only: which column to plot (default rho_rr). */
  column?: string;
  xRange?: [number, number];
  yRange?: [number, number];
}

export class SpecError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SpecError";
  }
}

const REQUIRED_INPUTS: Record<FigureKind, string[]> = {
  regime: ["scan"],
  hysteresis: ["forward", "backward"],
  timeseries: ["series"],
  heatmap: ["grid"],
  freqscan: ["scan"],
};

function checkRange(value: unknown, name: string): [number, number] | undefined {
  if (value === undefined) return undefined;
  if (
    !Array.isArray(value) ||
    value.length !== 2 ||
    typeof value[0] !== "number" ||
    typeof value[1] !== "number" ||
    value[0] >= value[1]
  ) {
    throw new SpecError(`${name} must be [low, high] with low < high`);
  }
  return [value[0], value[1]];
}

export function parseSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new SpecError("figure spec must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  const kind = obj.kind;
  if (typeof kind !== "string" || !(KINDS as readonly string[]).includes(kind)) {
    throw new SpecError(`kind must be one of ${KINDS.join(", ")}`);
  }
  if (typeof obj.output !== "string" || obj.output.length === 0) {
    throw new SpecError("output path is required");
  }
  const inputs = obj.inputs;
  if (typeof inputs !== "object" || inputs === null) {
    throw new SpecError("inputs must map names to CSV paths");
  }
  const inputMap: Record<string, string> = {};
  for (const [k, v] of Object.entries(inputs)) {
    if (typeof v !== "string") throw new SpecError(`inputs.${k} must be a path`);
    inputMap[k] = v;
  }
  const required = REQUIRED_INPUTS[kind as FigureKind];
  for (const name of required) {
    if (!(name in inputMap)) {
      throw new SpecError(`kind '${kind}' requires inputs.${name}`);
    }
  }
  for (const name of required) {
    if (!fs.existsSync(inputMap[name])) {
      throw new SpecError(`inputs.${name}: no such file '${inputMap[name]}'`);
    }
  }
  for (const key of ["title", "xLabel", "yLabel", "column"]) {
    if (obj[key] !== undefined && typeof obj[key] !== "string") {
      throw new SpecError(`${key} must be a string`);
    }
  }
  return {
    kind: kind as FigureKind,
    inputs: inputMap,
    output: obj.output,
    title: obj.title as string | undefined,
    xLabel: obj.xLabel as string | undefined,
    yLabel: obj.yLabel as string | undefined,
    column: obj.column as string | undefined,
    xRange: checkRange(obj.xRange, "xRange"),
    yRange: checkRange(obj.yRange, "yRange"),
  };
}

export function loadSpec(path: string): FigureSpec {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf-8");
  } catch (e) {
    throw new SpecError(`cannot read spec file '${path}': ${(e as Error).message}`);
  }
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new SpecError(`'${path}' is not valid JSON: ${(e as Error).message}`);
  }
  return parseSpec(raw);
}

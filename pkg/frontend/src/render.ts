/**
 * PlotSpec -> SVG figure from diagnostics CSVs.
 *
 * A spec names one or more input CSVs, an x column, one or more y series
 * (optionally transformed to relative drift against the first row), the
 * axis scales, and the output path. Log axes skip nonpositive values and
 * the skip count is reported back to the caller.
 */

import * as fs from "fs";
import * as path from "path";

import { CsvError, readCsv, requireColumn, Table } from "./csv.js";
import { renderChart, Scale, Series, seriesColor } from "./svg.js";

export interface SeriesSpec {
  column: string;
  /** "value" plots the column; "relative_drift" plots |v - v0| / |v0| */
  transform?: "value" | "relative_drift";
  label?: string;
}

export interface PlotSpec {
  inputs: string[];
  x: string;
  series: SeriesSpec[];
  x_scale?: Scale;
  y_scale?: Scale;
  title?: string;
  output: string;
}

export interface RenderReport {
  output: string;
  pointsDrawn: number;
  skippedNonpositive: number;
  skippedEmpty: number;
}

export class PlotSpecError extends Error {}

function checkScale(name: string, value: string | undefined): Scale {
  if (value === undefined) return "linear";
  if (value === "linear" || value === "log") return value;
  throw new PlotSpecError(`${name}: expected 'linear' or 'log', got '${value}'`);
}

function applyTransform(
  values: (number | null)[],
  transform: "value" | "relative_drift",
): (number | null)[] {
  if (transform === "value") return values;
  const first = values.find((v) => v !== null);
  if (first === undefined || first === null || first === 0) {
    throw new PlotSpecError(
      "relative_drift needs a nonzero value in the first populated row",
    );
  }
  return values.map((v) => (v === null ? null : Math.abs(v - first) / Math.abs(first)));
}

export function loadSpec(specPath: string): PlotSpec {
  const raw = JSON.parse(fs.readFileSync(specPath, "utf-8"));
  const dir = path.dirname(specPath);
  const spec = normalizeSpec(raw);
  // paths inside a spec file resolve relative to the spec file
  spec.inputs = spec.inputs.map((p) => (path.isAbsolute(p) ? p : path.join(dir, p)));
  if (!path.isAbsolute(spec.output)) spec.output = path.join(dir, spec.output);
  return spec;
}

export function normalizeSpec(raw: unknown): PlotSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new PlotSpecError("spec must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  const inputs = obj.inputs ?? (obj.input !== undefined ? [obj.input] : undefined);
  if (!Array.isArray(inputs) || inputs.length === 0 ||
      !inputs.every((p) => typeof p === "string")) {
    throw new PlotSpecError("inputs: need at least one CSV path");
  }
  if (typeof obj.x !== "string") throw new PlotSpecError("x: column name required");
  if (!Array.isArray(obj.series) || obj.series.length === 0) {
    throw new PlotSpecError("series: need at least one entry");
  }
  const series = obj.series.map((s, i) => {
    const e = s as Record<string, unknown>;
    if (typeof e.column !== "string") {
      throw new PlotSpecError(`series[${i}].column: column name required`);
    }
    const transform = (e.transform ?? "value") as string;
    if (transform !== "value" && transform !== "relative_drift") {
      throw new PlotSpecError(`series[${i}].transform: unknown transform '${transform}'`);
    }
    return {
      column: e.column,
      transform: transform as "value" | "relative_drift",
      label: typeof e.label === "string" ? e.label : undefined,
    };
  });
  if (typeof obj.output !== "string") throw new PlotSpecError("output: path required");
  return {
    inputs: inputs as string[],
    x: obj.x,
    series,
    x_scale: checkScale("x_scale", obj.x_scale as string | undefined),
    y_scale: checkScale("y_scale", obj.y_scale as string | undefined),
    title: typeof obj.title === "string" ? obj.title : undefined,
    output: obj.output,
  };
}

export function render(spec: PlotSpec): RenderReport {
  const xScale = checkScale("x_scale", spec.x_scale);
  const yScale = checkScale("y_scale", spec.y_scale);
  const tables: Table[] = spec.inputs.map(readCsv);

  const series: Series[] = [];
  let skippedNonpositive = 0;
  let skippedEmpty = 0;
  let colorIndex = 0;
  for (const table of tables) {
    const xs = requireColumn(table, spec.x);
    for (const s of spec.series) {
      const ys = applyTransform(requireColumn(table, s.column), s.transform ?? "value");
      const points: Array<[number, number]> = [];
      for (let i = 0; i < table.rowCount; i++) {
        const x = xs[i];
        const y = ys[i];
        if (x === null || y === null) {
          skippedEmpty += 1;
          continue;
        }
        if ((xScale === "log" && x <= 0) || (yScale === "log" && y <= 0)) {
          skippedNonpositive += 1;
          continue;
        }
        points.push([x, y]);
      }
      const stem = path.basename(table.path).replace(/\.csv$/, "");
      const label = s.label ?? (tables.length > 1 ? `${stem}:${s.column}` : s.column);
      series.push({ label, points, color: seriesColor(colorIndex++) });
    }
  }

  const drawn = series.reduce((acc, s) => acc + s.points.length, 0);
  if (drawn === 0) {
    throw new CsvError("no drawable points after filtering empty/nonpositive cells");
  }
  const svg = renderChart(series, {
    title: spec.title ?? `${spec.series.map((s) => s.column).join(", ")} vs ${spec.x}`,
    xLabel: spec.x,
    yLabel: spec.series.map((s) => s.column).join(", "),
    xScale,
    yScale,
  });
  fs.mkdirSync(path.dirname(spec.output), { recursive: true });
  fs.writeFileSync(spec.output, svg, "utf-8");
  return {
    output: spec.output,
    pointsDrawn: drawn,
    skippedNonpositive,
    skippedEmpty,
  };
}

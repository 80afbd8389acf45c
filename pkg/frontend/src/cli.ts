#!/usr/bin/env node
/**
 * ilwave-plot: render diagnostics CSVs to SVG.
 *
 *   ilwave-plot spec.json [more-specs...]
 *   ilwave-plot --input diag.csv --x t --column window_mass \
 *               [--column i2] [--transform relative_drift] \
 *               [--log-x] [--log-y] [--title "..."] --output fig.svg
 *
 * Exit codes: 0 ok, 2 bad spec/missing column, 1 unexpected failure.
 */

import { CsvError } from "./csv.js";
import { loadSpec, PlotSpec, PlotSpecError, render } from "./render.js";

function specFromFlags(argv: string[]): PlotSpec {
  const inputs: string[] = [];
  const columns: string[] = [];
  let x = "t";
  let output = "";
  let transform: "value" | "relative_drift" = "value";
  let xScale: "linear" | "log" = "linear";
  let yScale: "linear" | "log" = "linear";
  let title: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new PlotSpecError(`${a}: missing value`);
      return argv[i];
    };
    if (a === "--input") inputs.push(next());
    else if (a === "--x") x = next();
    else if (a === "--column") columns.push(next());
    else if (a === "--transform") {
      const t = next();
      if (t !== "value" && t !== "relative_drift") {
        throw new PlotSpecError(`--transform: unknown transform '${t}'`);
      }
      transform = t;
    } else if (a === "--log-x") xScale = "log";
    else if (a === "--log-y") yScale = "log";
    else if (a === "--title") title = next();
    else if (a === "--output") output = next();
    else throw new PlotSpecError(`unknown flag ${a}`);
  }
  if (inputs.length === 0) throw new PlotSpecError("--input: at least one CSV required");
  if (columns.length === 0) throw new PlotSpecError("--column: at least one column required");
  if (!output) throw new PlotSpecError("--output: path required");
  return {
    inputs,
    x,
    series: columns.map((c) => ({ column: c, transform })),
    x_scale: xScale,
    y_scale: yScale,
    title,
    output,
  };
}

export function main(argv: string[]): number {
  try {
    const specs: PlotSpec[] =
      argv.length > 0 && argv[0].startsWith("--")
        ? [specFromFlags(argv)]
        : argv.map(loadSpec);
    if (specs.length === 0) {
      throw new PlotSpecError("usage: ilwave-plot <spec.json>... | --input ... --column ... --output ...");
    }
    for (const spec of specs) {
      const report = render(spec);
      const skipped =
        report.skippedNonpositive > 0
          ? ` (skipped ${report.skippedNonpositive} nonpositive values on log axes)`
          : "";
      console.log(`${report.output}: ${report.pointsDrawn} points${skipped}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof PlotSpecError || err instanceof CsvError ||
        (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}

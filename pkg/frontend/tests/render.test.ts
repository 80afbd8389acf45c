import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { CsvError, readCsv, requireColumn } from "../src/csv.js";
import { normalizeSpec, PlotSpecError, render } from "../src/render.js";
import { main } from "../src/cli.js";

const FIXTURES = path.join(__dirname, "fixtures");
let outDir: string;

beforeAll(() => {
  outDir = fs.mkdtempSync(path.join(os.tmpdir(), "ilwave-plots-"));
});

afterAll(() => {
  fs.rmSync(outDir, { recursive: true, force: true });
});

function fx(name: string): string {
  return path.join(FIXTURES, name);
}

describe("csv reading", () => {
  it("parses the diagnostics schema with empty cells as nulls", () => {
    const t = readCsv(fx("decay_liminf.csv"));
    expect(t.columns[0]).toBe("t");
    expect(t.columns).toContain("window_mass");
    const wm = requireColumn(t, "window_mass");
    expect(wm[0]).toBeNull(); // before the schedule opens
    expect(wm[wm.length - 1]).toBeGreaterThan(0);
  });

  it("rejects an empty csv", () => {
    expect(() => readCsv(fx("empty.csv"))).toThrow(/no data rows/);
  });

  it("names a missing column", () => {
    const t = readCsv(fx("missing_column.csv"));
    expect(() => requireColumn(t, "window_mass")).toThrow(/missing column 'window_mass'/);
  });
});

describe("render", () => {
  it("renders a log-log window-mass figure from the decay scenario", () => {
    const out = path.join(outDir, "window_mass.svg");
    const report = render({
      inputs: [fx("decay_liminf.csv")],
      x: "t",
      series: [{ column: "window_mass" }],
      x_scale: "log",
      y_scale: "log",
      output: out,
    });
    const svg = fs.readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("polyline");
    expect(report.pointsDrawn).toBeGreaterThan(10);
    // rows before t=10 have empty window_mass cells
    expect(report.skippedEmpty).toBeGreaterThan(0);
  });

  it("renders a conservation-drift figure with a log y axis", () => {
    const out = path.join(outDir, "drift.svg");
    const report = render({
      inputs: [fx("soliton_travel.csv")],
      x: "t",
      series: [
        { column: "i2", transform: "relative_drift" },
        { column: "i3", transform: "relative_drift" },
        { column: "i4", transform: "relative_drift" },
      ],
      y_scale: "log",
      output: out,
    });
    // the t=0 rows have zero drift, skipped on the log axis with a count
    expect(report.skippedNonpositive).toBeGreaterThanOrEqual(3);
    expect(fs.existsSync(out)).toBe(true);
  });

  it("renders every scenario fixture without error", () => {
    const plots: Array<[string, string, "linear" | "log"]> = [
      ["decay_liminf.csv", "window_mass", "log"],
      ["breather.csv", "x_moment", "linear"],
      ["breather.csv", "f_integral", "linear"],
      ["soliton_travel.csv", "i2", "linear"],
      ["far_field.csv", "far_field_l2", "linear"],
      ["regularity.csv", "local_hm_right", "linear"],
      ["regularity.csv", "smoothing_halfnorm", "linear"],
      ["corollary.csv", "corollary_integrand", "linear"],
    ];
    for (const [file, column, yScale] of plots) {
      const out = path.join(outDir, `${file}-${column}.svg`);
      const report = render({
        inputs: [fx(file)],
        x: "t",
        series: [{ column }],
        y_scale: yScale,
        output: out,
      });
      expect(report.pointsDrawn).toBeGreaterThan(0);
      expect(fs.statSync(out).size).toBeGreaterThan(500);
    }
  });

  it("degenerates gracefully to a single marker for one data row", () => {
    const out = path.join(outDir, "single.svg");
    const report = render({
      inputs: [fx("single_row.csv")],
      x: "t",
      series: [{ column: "i2" }],
      output: out,
    });
    expect(report.pointsDrawn).toBe(1);
    const svg = fs.readFileSync(out, "utf-8");
    expect(svg).toContain("circle");
    expect(svg).not.toContain("polyline");
  });

  it("errors on a missing column, naming it", () => {
    expect(() =>
      render({
        inputs: [fx("missing_column.csv")],
        x: "t",
        series: [{ column: "far_field_l2" }],
        output: path.join(outDir, "nope.svg"),
      }),
    ).toThrow(/missing column 'far_field_l2'/);
  });

  it("overlays several inputs with distinct labels", () => {
    const out = path.join(outDir, "overlay.svg");
    render({
      inputs: [fx("soliton_travel.csv"), fx("breather.csv")],
      x: "t",
      series: [{ column: "i2" }],
      output: out,
    });
    const svg = fs.readFileSync(out, "utf-8");
    expect(svg).toContain("soliton_travel:i2");
    expect(svg).toContain("breather:i2");
  });

  it("is idempotent: re-rendering produces identical bytes", () => {
    const out1 = path.join(outDir, "idem1.svg");
    const out2 = path.join(outDir, "idem2.svg");
    const spec = (output: string) => ({
      inputs: [fx("decay_liminf.csv")],
      x: "t",
      series: [{ column: "i2" }],
      output,
    });
    render(spec(out1));
    render(spec(out2));
    expect(fs.readFileSync(out1)).toEqual(fs.readFileSync(out2));
  });

  it("validates spec shapes", () => {
    expect(() => normalizeSpec({})).toThrow(PlotSpecError);
    expect(() => normalizeSpec({ inputs: [], x: "t", series: [], output: "o" }))
      .toThrow(/inputs/);
    expect(() =>
      normalizeSpec({ inputs: ["a.csv"], x: "t", series: [{ column: "i2" }], output: "o.svg", y_scale: "cubic" }),
    ).toThrow(/linear.*log/);
  });
});

describe("cli", () => {
  it("runs flag-driven and reports skipped nonpositive values", () => {
    const out = path.join(outDir, "cli.svg");
    const code = main([
      "--input", fx("decay_liminf.csv"), "--x", "t",
      "--column", "window_mass", "--log-x", "--log-y",
      "--output", out,
    ]);
    expect(code).toBe(0);
    expect(fs.existsSync(out)).toBe(true);
  });

  it("runs from a spec file with paths relative to the spec", () => {
    const specPath = path.join(outDir, "spec.json");
    fs.writeFileSync(specPath, JSON.stringify({
      inputs: [fx("far_field.csv")],
      x: "t",
      series: [{ column: "far_field_l2" }],
      y_scale: "log",
      title: "far-field annulus norm",
      output: "from_spec.svg",
    }));
    expect(main([specPath])).toBe(0);
    expect(fs.existsSync(path.join(outDir, "from_spec.svg"))).toBe(true);
  });

  it("exits 2 on a missing column or bad flag", () => {
    expect(main([
      "--input", fx("missing_column.csv"), "--column", "v",
      "--output", path.join(outDir, "x.svg"),
    ])).toBe(2);
    expect(main(["--bogus"])).toBe(2);
    expect(main([
      "--input", path.join(FIXTURES, "does_not_exist.csv"),
      "--column", "i2", "--output", path.join(outDir, "x.svg"),
    ])).toBe(2);
  });
});

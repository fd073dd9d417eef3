/**
 * File-to-file figure pipeline and the make-all-figures driver.
 *
 * The driver shells out to the cse-schemes CLI for every number that
 * ends up in a plot; this module itself only moves bytes from CSV to
 * PNG. Paths in, paths out, so tests can run it twice and diff.
 */

import { execFileSync } from "node:child_process";
import { mkdirSync } from "node:fs";
import { join } from "node:path";
import { readTable } from "./csv.js";
import {
  renderConsecutiveSteps,
  renderDispersion,
  renderQKRegion,
  renderQLMap,
} from "./figures.js";
import { writePng } from "./png.js";

export function fig1File(feiCsv: string, besseCsv: string, out: string): void {
  writePng(out, renderConsecutiveSteps(readTable(feiCsv), readTable(besseCsv)));
}

export function fig2File(dataCsv: string, out: string): void {
  writePng(out, renderDispersion(readTable(dataCsv)));
}

export function qlMapFile(besseCsv: string, feiCsv: string, out: string): void {
  writePng(out, renderQLMap(readTable(besseCsv), readTable(feiCsv)));
}

export function regionFile(dataCsv: string, scheme: string, out: string): void {
  writePng(out, renderQKRegion(readTable(dataCsv), scheme));
}

export interface DriverOptions {
  /** cse-schemes executable; must be on PATH or an absolute path */
  cli: string;
  datadir: string;
  outdir: string;
  /** smaller grids; same figures, same code paths, a few seconds */
  quick: boolean;
  log?: (line: string) => void;
}

function run(cli: string, args: string[], log?: (line: string) => void): void {
  log?.(`$ ${cli} ${args.join(" ")}`);
  execFileSync(cli, args, { stdio: ["ignore", "pipe", "inherit"] });
}

/** Invoke the CLI for each dataset; returns csv paths keyed by figure. */
export function generateData(opts: DriverOptions): Record<string, string> {
  const { cli, datadir, quick, log } = opts;
  mkdirSync(datadir, { recursive: true });
  const p = (name: string) => join(datadir, name);

  const gridPoints = quick ? "256" : "1024";
  for (const scheme of ["fei", "besse"]) {
    run(
      cli,
      [
        "simulate",
        "--scheme", scheme,
        "--u0", "exp-sin",
        "--lambda", "2",
        "--tau", "0.01",
        "--grid-points", gridPoints,
        "--t-end", "1.9",
        "--record-stride", "1000000",
        "--snapshots", p(`fig1_${scheme}.csv`),
      ],
      log,
    );
  }

  run(cli, ["dispersion", "--scheme", "all", "--q", "0:4:161", "--K", "0", "--out", p("fig2.csv")], log);

  const scanQ = quick ? "-1:1:81" : "-1:1:161";
  const scanL = quick ? "-3:3:121" : "-3:3:241";
  for (const K of ["0", "1"]) {
    for (const scheme of ["besse", "fei"]) {
      run(
        cli,
        [
          "stability", "scan2d",
          "--scheme", scheme,
          "--K", K,
          `--q=${scanQ}`,
          `--L=${scanL}`,
          "--out", p(`fig${K === "0" ? 3 : 4}_${scheme}.csv`),
        ],
        log,
      );
    }
  }

  const regionQ = quick ? "0:1:60" : "0:1:200";
  const regionK = quick ? "0:1.5:60" : "0:1.5:200";
  run(
    cli,
    ["stability", "region", "--scheme", "besse", "--q", regionQ, "--K", regionK, "--out", p("fig5.csv")],
    log,
  );
  run(
    cli,
    [
      "stability", "region",
      "--scheme", "modified",
      "--theta", "0.5",
      "--gamma", "1",
      "--q", regionQ,
      "--K", regionK,
      "--out", p("fig_modified.csv"),
    ],
    log,
  );

  return {
    fig1_fei: p("fig1_fei.csv"),
    fig1_besse: p("fig1_besse.csv"),
    fig2: p("fig2.csv"),
    fig3_besse: p("fig3_besse.csv"),
    fig3_fei: p("fig3_fei.csv"),
    fig4_besse: p("fig4_besse.csv"),
    fig4_fei: p("fig4_fei.csv"),
    fig5: p("fig5.csv"),
    fig_modified: p("fig_modified.csv"),
  };
}

/** Fresh CLI output, then all six renders. Returns the PNG paths. */
export function makeAllFigures(opts: DriverOptions): string[] {
  const { outdir, log } = opts;
  mkdirSync(outdir, { recursive: true });
  const data = generateData(opts);
  const out = (name: string) => join(outdir, name);

  const written: string[] = [];
  const emit = (name: string, render: (path: string) => void) => {
    const path = out(name);
    render(path);
    log?.(`wrote ${path}`);
    written.push(path);
  };
  emit("fig1.png", (f) => fig1File(data.fig1_fei, data.fig1_besse, f));
  emit("fig2.png", (f) => fig2File(data.fig2, f));
  emit("fig3.png", (f) => qlMapFile(data.fig3_besse, data.fig3_fei, f));
  emit("fig4.png", (f) => qlMapFile(data.fig4_besse, data.fig4_fei, f));
  emit("fig5.png", (f) => regionFile(data.fig5, "besse", f));
  emit("fig_modified.png", (f) => regionFile(data.fig_modified, "modified", f));
  return written;
}

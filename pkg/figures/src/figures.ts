/**
 * Figure renderers. Each takes already-parsed CSV tables from the
 * cse-schemes CLI and draws one PNG-sized raster. Metadata is checked
 * against what the figure claims to show, and a mismatch is a hard
 * error: a plot of the wrong scheme is worse than no plot.
 */

import {
  BESSE_BLUE,
  EXACT_BLACK,
  FEI_RED,
  INK,
  MODIFIED_GREEN,
  RGB,
  UNSTABLE_GREY,
  schemeColor,
} from "./color.js";
import {
  CsvFormatError,
  DataTable,
  asMatrix,
  column,
  expectMeta,
  requireMeta,
} from "./csv.js";
import { Axes, Box, drawLegend, fillCells, linTicks } from "./plot.js";
import { Raster, textWidth } from "./raster.js";

const EXACT_DASH = { on: 6, off: 5 };

function fmt(digits: number): (v: number) => string {
  return (v) => {
    const s = v.toFixed(digits);
    return s === "-" + (0).toFixed(digits) ? (0).toFixed(digits) : s;
  };
}

function sameMeta(a: DataTable, b: DataTable, keys: string[]): void {
  for (const key of keys) {
    const va = requireMeta(a, key);
    const vb = requireMeta(b, key);
    if (va !== vb) {
      throw new CsvFormatError(
        `${a.source} vs ${b.source}: metadata '${key}' differs (${va} vs ${vb})`,
      );
    }
  }
}

// ---------------------------------------------------------------------------
// figure 1: two consecutive iterates of each scheme, side by side

interface Snapshot {
  step: number;
  time: number;
  x: number[];
  absU: number[];
}

function snapshotBlocks(table: DataTable): Snapshot[] {
  if (table.rows.length === 0) {
    throw new CsvFormatError(`${table.source}: no snapshot rows`);
  }
  const xs = column(table, "x");
  const absU = column(table, "|U|");
  const steps = column(table, "step");
  const times = column(table, "t");
  const blocks: Snapshot[] = [];
  for (let i = 0; i < steps.length; i++) {
    const last = blocks[blocks.length - 1];
    if (!last || last.step !== steps[i]) {
      blocks.push({ step: steps[i], time: times[i], x: [], absU: [] });
    }
    const block = blocks[blocks.length - 1];
    block.x.push(xs[i]);
    block.absU.push(absU[i]);
  }
  return blocks;
}

export function renderConsecutiveSteps(fei: DataTable, besse: DataTable): Raster {
  expectMeta(fei, "command", "simulate");
  expectMeta(besse, "command", "simulate");
  expectMeta(fei, "scheme", "fei");
  expectMeta(besse, "scheme", "besse");
  sameMeta(fei, besse, ["lambda", "tau", "grid-points", "t-end"]);

  const panels = [fei, besse].map((t) => {
    const blocks = snapshotBlocks(t);
    if (blocks.length < 2) {
      throw new CsvFormatError(`${t.source}: need at least two snapshot steps`);
    }
    return { table: t, older: blocks[blocks.length - 2], newer: blocks[blocks.length - 1] };
  });

  let ymax = 0;
  for (const p of panels) {
    ymax = Math.max(ymax, ...p.older.absU, ...p.newer.absU);
  }
  ymax *= 1.06;
  const xmax = Math.max(...panels[0].older.x) + panels[0].older.x[1];

  const raster = new Raster(900, 360);
  const boxes: Box[] = [
    { left: 52, top: 36, width: 368, height: 262 },
    { left: 492, top: 36, width: 368, height: 262 },
  ];
  panels.forEach((p, i) => {
    const axes = new Axes(raster, boxes[i], 0, xmax, 0, ymax);
    const scheme = requireMeta(p.table, "scheme");
    const color = schemeColor(scheme);
    axes.plot(p.older.x, p.older.absU, color, 2);
    axes.plot(p.newer.x, p.newer.absU, INK, 2);
    axes.frame();
    axes.xTicks(linTicks(0, 6, 4), fmt(0));
    axes.yTicks(linTicks(0, Math.floor(ymax), Math.floor(ymax) + 1), fmt(0));
    axes.title(`${scheme}  tau=${requireMeta(p.table, "tau")}`);
    axes.xLabel("x");
    if (i === 0) axes.yLabel("|u|");
    drawLegend(raster, boxes[i].left + 8, boxes[i].top + 8, [
      { label: `step ${p.older.step}`, color, thickness: 2 },
      { label: `step ${p.newer.step}`, color: INK, thickness: 2 },
    ]);
  });
  return raster;
}

// ---------------------------------------------------------------------------
// figure 2: phase rotation per step against the exact dispersion relation

export function renderDispersion(table: DataTable): Raster {
  expectMeta(table, "command", "dispersion");
  if (table.rows.length === 0) {
    throw new CsvFormatError(`${table.source}: no dispersion rows`);
  }
  const s = column(table, "s");
  const exact = column(table, "exact omega*tau");
  const fei = column(table, "fei omega*tau");
  const besse = column(table, "besse omega*tau");

  const xmax = Math.max(...s);
  const ymax = Math.max(...exact, ...fei, ...besse) * 1.06;
  const raster = new Raster(480, 360);
  const box: Box = { left: 58, top: 36, width: 396, height: 264 };
  const axes = new Axes(raster, box, 0, xmax, 0, ymax);
  axes.plot(s, exact, EXACT_BLACK, 1);
  axes.plot(s, fei, FEI_RED, 2);
  axes.plot(s, besse, BESSE_BLUE, 2);
  axes.frame();
  axes.xTicks(linTicks(0, xmax, 5), fmt(0));
  axes.yTicks(linTicks(0, Math.floor(ymax), Math.floor(ymax) + 1), fmt(0));
  axes.title("phase advance per step");
  axes.xLabel("s = (k^2 + lambda a^2) tau");
  axes.yLabel("w*tau");
  drawLegend(raster, box.left + 10, box.top + 8, [
    { label: "exact", color: EXACT_BLACK, thickness: 1 },
    { label: "fei", color: FEI_RED, thickness: 2 },
    { label: "besse", color: BESSE_BLUE, thickness: 2 },
  ]);
  return raster;
}

// ---------------------------------------------------------------------------
// figures 3 and 4: (q, L) stability maps for both schemes at fixed K

export function renderQLMap(besse: DataTable, fei: DataTable): Raster {
  expectMeta(besse, "command", "stability scan2d");
  expectMeta(fei, "command", "stability scan2d");
  expectMeta(besse, "scheme", "besse");
  expectMeta(fei, "scheme", "fei");
  sameMeta(besse, fei, ["K", "q", "L", "tol"]);
  const K = Number(requireMeta(besse, "K"));

  const raster = new Raster(900, 380);
  const boxes: Box[] = [
    { left: 52, top: 36, width: 368, height: 280 },
    { left: 492, top: 36, width: 368, height: 280 },
  ];
  [besse, fei].forEach((table, i) => {
    const mat = asMatrix(table, "L-grid");
    const tol = Number(requireMeta(table, "tol"));
    const q = mat.rowCoord;
    const L = mat.colCoord;
    const axes = new Axes(raster, boxes[i], Math.min(...q), Math.max(...q), Math.min(...L), Math.max(...L));
    fillCells(axes, q, L, (qi, lj) => mat.values[qi][lj] > 1 + tol, UNSTABLE_GREY);

    // exact instability wedge boundary L^2 = -2q, drawn broken; points
    // falling outside the q window become NaN so the polyline breaks
    const bx: number[] = [];
    const by: number[] = [];
    for (let t = 0; t <= 400; t++) {
      const ell = axes.ymin + ((axes.ymax - axes.ymin) * t) / 400;
      const qb = -(ell * ell) / 2;
      bx.push(qb >= axes.xmin && qb <= axes.xmax ? qb : NaN);
      by.push(ell);
    }
    axes.plot(bx, by, EXACT_BLACK, 1, EXACT_DASH);

    axes.frame();
    axes.xTicks(linTicks(axes.xmin, axes.xmax, 5), fmt(1));
    axes.yTicks(linTicks(axes.ymin, axes.ymax, 5), fmt(1));
    axes.title(`${requireMeta(table, "scheme")}  K=${fmt(1)(K)}`);
    axes.xLabel("q = lambda tau a^2");
    if (i === 0) axes.yLabel("L");
  });
  drawLegend(raster, 52, 352, [
    { label: "grey: |z|max > 1+tol", color: UNSTABLE_GREY, thickness: 6 },
    { label: "broken: exact L^2 = -2q", color: EXACT_BLACK, thickness: 1, dash: EXACT_DASH },
  ]);
  return raster;
}

// ---------------------------------------------------------------------------
// figures 5 and "modified": unstable (q, K) region after scanning out L

export function renderQKRegion(table: DataTable, scheme: string): Raster {
  expectMeta(table, "command", "stability region");
  expectMeta(table, "scheme", scheme);
  requireMeta(table, "value"); // the 0/1 encoding note must be present
  const mat = asMatrix(table, "K-grid");
  const q = mat.rowCoord;
  const K = mat.colCoord;

  const raster = new Raster(480, 400);
  const box: Box = { left: 58, top: 36, width: 396, height: 300 };
  const axes = new Axes(raster, box, Math.min(...q), Math.max(...q), Math.min(...K), Math.max(...K));
  fillCells(axes, q, K, (qi, kj) => mat.values[qi][kj] > 0.5, UNSTABLE_GREY);
  axes.frame();
  axes.xTicks(linTicks(axes.xmin, axes.xmax, 5), fmt(2));
  axes.yTicks(linTicks(axes.ymin, axes.ymax, 4), fmt(1));
  let title = `${scheme}: unstable (q,K)`;
  if (scheme === "modified") {
    title = `modified theta=${requireMeta(table, "theta")} gamma=${requireMeta(table, "gamma")}`;
  }
  axes.title(title);
  axes.xLabel("q = lambda tau a^2");
  axes.yLabel("K");
  drawLegend(raster, 58, 372, [
    { label: "grey: unstable for some L", color: UNSTABLE_GREY, thickness: 6 },
  ]);
  return raster;
}

export const SCHEME_COLORS: Record<string, RGB> = {
  fei: FEI_RED,
  besse: BESSE_BLUE,
  modified: MODIFIED_GREEN,
};

export { textWidth };

/** Data-space axes on top of a Raster: frame, ticks, curves, legends. */

import { INK, RGB } from "./color.js";
import { Dash, Raster, TEXT_HEIGHT, textWidth } from "./raster.js";

export interface Box {
  left: number;
  top: number;
  width: number;
  height: number;
}

export class Axes {
  constructor(
    readonly raster: Raster,
    readonly box: Box,
    readonly xmin: number,
    readonly xmax: number,
    readonly ymin: number,
    readonly ymax: number,
  ) {}

  xPx(x: number): number {
    return this.box.left + ((x - this.xmin) / (this.xmax - this.xmin)) * this.box.width;
  }

  yPx(y: number): number {
    return this.box.top + ((this.ymax - y) / (this.ymax - this.ymin)) * this.box.height;
  }

  frame(color: RGB = INK): void {
    const { left, top, width, height } = this.box;
    this.raster.drawLine(left, top, left + width, top, color);
    this.raster.drawLine(left, top + height, left + width, top + height, color);
    this.raster.drawLine(left, top, left, top + height, color);
    this.raster.drawLine(left + width, top, left + width, top + height, color);
  }

  xTicks(values: number[], fmt: (v: number) => string): void {
    const yb = this.box.top + this.box.height;
    for (const v of values) {
      const x = Math.round(this.xPx(v));
      this.raster.drawLine(x, yb, x, yb + 4, INK);
      const label = fmt(v);
      this.raster.drawText(x - Math.floor(textWidth(label) / 2), yb + 7, label, INK);
    }
  }

  yTicks(values: number[], fmt: (v: number) => string): void {
    for (const v of values) {
      const y = Math.round(this.yPx(v));
      this.raster.drawLine(this.box.left - 4, y, this.box.left, y, INK);
      const label = fmt(v);
      this.raster.drawText(
        this.box.left - 7 - textWidth(label),
        y - Math.floor(TEXT_HEIGHT / 2),
        label,
        INK,
      );
    }
  }

  plot(xs: number[], ys: number[], color: RGB, thickness = 1, dash?: Dash): void {
    this.raster.drawPolyline(
      xs.map((x) => this.xPx(x)),
      ys.map((y) => this.yPx(y)),
      color,
      thickness,
      dash,
    );
  }

  title(text: string): void {
    const x = this.box.left + Math.floor((this.box.width - textWidth(text)) / 2);
    this.raster.drawText(x, this.box.top - 14, text, INK);
  }

  xLabel(text: string): void {
    const x = this.box.left + Math.floor((this.box.width - textWidth(text)) / 2);
    this.raster.drawText(x, this.box.top + this.box.height + 18, text, INK);
  }

  /** Drawn horizontally above the top-left corner; no rotated glyphs. */
  yLabel(text: string): void {
    this.raster.drawText(this.box.left - 28, this.box.top - 14, text, INK);
  }
}

export interface LegendEntry {
  label: string;
  color: RGB;
  dash?: Dash;
  thickness?: number;
}

export function drawLegend(raster: Raster, x: number, y: number, entries: LegendEntry[]): void {
  let cy = y;
  for (const e of entries) {
    raster.drawPolyline([x, x + 18], [cy + 3, cy + 3], e.color, e.thickness ?? 2, e.dash);
    raster.drawText(x + 24, cy, e.label, INK);
    cy += 12;
  }
}

/**
 * Fill the cells of a coordinate grid where `mask` is true. Cell (i, j)
 * sits at (xCoord[i], yCoord[j]) and extends halfway to its neighbours,
 * so adjacent marked cells tile the region without seams.
 */
export function fillCells(
  axes: Axes,
  xCoord: number[],
  yCoord: number[],
  mask: (i: number, j: number) => boolean,
  color: RGB,
): void {
  const xEdges = cellEdges(xCoord).map((v) => axes.xPx(v));
  const yEdges = cellEdges(yCoord).map((v) => axes.yPx(v));
  for (let i = 0; i < xCoord.length; i++) {
    const x0 = Math.round(Math.min(xEdges[i], xEdges[i + 1]));
    const x1 = Math.round(Math.max(xEdges[i], xEdges[i + 1]));
    for (let j = 0; j < yCoord.length; j++) {
      if (!mask(i, j)) continue;
      const y0 = Math.round(Math.min(yEdges[j], yEdges[j + 1]));
      const y1 = Math.round(Math.max(yEdges[j], yEdges[j + 1]));
      axes.raster.fillRect(x0, y0, x1 - x0 + 1, y1 - y0 + 1, color);
    }
  }
}

function cellEdges(coord: number[]): number[] {
  const n = coord.length;
  if (n === 1) return [coord[0] - 0.5, coord[0] + 0.5];
  const edges = new Array<number>(n + 1);
  edges[0] = coord[0] - (coord[1] - coord[0]) / 2;
  for (let i = 1; i < n; i++) edges[i] = (coord[i - 1] + coord[i]) / 2;
  edges[n] = coord[n - 1] + (coord[n - 1] - coord[n - 2]) / 2;
  return edges;
}

/** Evenly spaced ticks including both ends. */
export function linTicks(min: number, max: number, count: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < count; i++) out.push(min + ((max - min) * i) / (count - 1));
  return out;
}

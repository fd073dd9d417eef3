/** PNG encode/decode for Raster buffers (pngjs, synchronous and deterministic). */

import { readFileSync, writeFileSync } from "node:fs";
import { PNG } from "pngjs";
import { Raster } from "./raster.js";

export function encodePng(raster: Raster): Buffer {
  const png = new PNG({ width: raster.width, height: raster.height });
  png.data = Buffer.from(raster.data);
  return PNG.sync.write(png);
}

export function writePng(path: string, raster: Raster): void {
  writeFileSync(path, encodePng(raster));
}

export interface DecodedPng {
  width: number;
  height: number;
  data: Uint8Array; // RGBA
}

export function readPng(path: string): DecodedPng {
  const png = PNG.sync.read(readFileSync(path));
  return { width: png.width, height: png.height, data: new Uint8Array(png.data) };
}

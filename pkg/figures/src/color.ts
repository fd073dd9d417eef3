/** Shared palette so every figure uses the same ink for the same scheme. */

export type RGB = readonly [number, number, number];

export const WHITE: RGB = [255, 255, 255];
export const INK: RGB = [32, 32, 32]; // axes, ticks, labels
export const UNSTABLE_GREY: RGB = [180, 180, 180];
export const EXACT_BLACK: RGB = [34, 34, 34];
export const FEI_RED: RGB = [214, 39, 40];
export const BESSE_BLUE: RGB = [31, 119, 180];
export const MODIFIED_GREEN: RGB = [44, 160, 44];

export function schemeColor(scheme: string): RGB {
  switch (scheme) {
    case "fei":
      return FEI_RED;
    case "besse":
      return BESSE_BLUE;
    case "modified":
      return MODIFIED_GREEN;
    default:
      return INK;
  }
}

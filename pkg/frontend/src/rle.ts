/** Mask overlays arrive as row-major run-length encodings. */

import type { Rle } from "./types.js";

export function decodeRle(rle: Rle): Uint8Array {
  const bits = new Uint8Array(rle.width * rle.height);
  for (const [start, length] of rle.runs) {
    bits.fill(1, start, start + length);
  }
  return bits;
}

export function popcount(rle: Rle): number {
  return rle.runs.reduce((acc, [, length]) => acc + length, 0);
}

/** RGBA buffer with the mask painted in the given color (premixed
 * alpha), ready for ImageData. */
export function rleToRgba(rle: Rle, rgba: [number, number, number, number]) {
  const bits = decodeRle(rle);
  // explicit ArrayBuffer so the result satisfies ImageData's constructor
  const out = new Uint8ClampedArray(new ArrayBuffer(bits.length * 4));
  for (let i = 0; i < bits.length; i++) {
    if (!bits[i]) continue;
    out[4 * i] = rgba[0];
    out[4 * i + 1] = rgba[1];
    out[4 * i + 2] = rgba[2];
    out[4 * i + 3] = rgba[3];
  }
  return out;
}

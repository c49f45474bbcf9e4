import { describe, expect, it } from "vitest";

import { blendFrames, clampAlpha } from "../src/blend.js";

const camera = new Uint8ClampedArray([100, 0, 255, 40]);
const reference = new Uint8ClampedArray([200, 255, 0, 80]);

describe("blendFrames", () => {
  it("alpha 0 leaves the camera frame unchanged", () => {
    expect(Array.from(blendFrames(camera, reference, 0))).toEqual(
      Array.from(camera),
    );
  });

  it("alpha 1 leaves the reference unchanged", () => {
    expect(Array.from(blendFrames(camera, reference, 1))).toEqual(
      Array.from(reference),
    );
  });

  it("alpha 0.5 averages per channel (200 over 100 -> 150)", () => {
    const out = blendFrames(
      new Uint8ClampedArray([100]),
      new Uint8ClampedArray([200]),
      0.5,
    );
    expect(out[0]).toBe(150);
  });

  it("interpolates each channel linearly", () => {
    const out = blendFrames(camera, reference, 0.25);
    expect(Array.from(out)).toEqual([125, 64, 191, 50]);
  });

  it("clamps alpha outside [0, 1]", () => {
    expect(Array.from(blendFrames(camera, reference, 7))).toEqual(
      Array.from(reference),
    );
    expect(Array.from(blendFrames(camera, reference, -3))).toEqual(
      Array.from(camera),
    );
    expect(clampAlpha(Number.NaN)).toBe(0);
  });

  it("rejects mismatched frame sizes", () => {
    expect(() =>
      blendFrames(camera, new Uint8ClampedArray(8), 0.5),
    ).toThrow(/sizes differ/);
  });

  it("writes into a provided output buffer", () => {
    const out = new Uint8ClampedArray(4);
    const got = blendFrames(camera, reference, 1, out);
    expect(got).toBe(out);
    expect(Array.from(out)).toEqual(Array.from(reference));
  });
});

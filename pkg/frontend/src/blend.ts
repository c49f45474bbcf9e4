/**
 * Per-pixel linear blending of the reference render over the camera frame.
 *
 * out = alpha * reference + (1 - alpha) * camera, per channel. Frames must
 * already share dimensions (resize before calling).
 */

export function clampAlpha(alpha: number): number {
  if (Number.isNaN(alpha)) return 0;
  return Math.min(1, Math.max(0, alpha));
}

export function blendFrames(
  camera: Uint8ClampedArray,
  reference: Uint8ClampedArray,
  alpha: number,
  out?: Uint8ClampedArray,
): Uint8ClampedArray {
  if (camera.length !== reference.length) {
    throw new Error(
      `frame sizes differ: camera ${camera.length} vs reference ${reference.length}`,
    );
  }
  const a = clampAlpha(alpha);
  const result = out ?? new Uint8ClampedArray(camera.length);
  for (let i = 0; i < camera.length; i++) {
    result[i] = a * reference[i] + (1 - a) * camera[i];
  }
  return result;
}

/** Blend two ImageData frames into a third (all same dimensions). */
export function blendImageData(
  camera: ImageData,
  reference: ImageData,
  alpha: number,
  out: ImageData,
): void {
  blendFrames(camera.data, reference.data, alpha, out.data);
  // keep the canvas opaque regardless of source alpha channels
  for (let i = 3; i < out.data.length; i += 4) out.data[i] = 255;
}

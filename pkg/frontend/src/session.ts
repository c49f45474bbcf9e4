/**
 * Replication session state: per-object placed flags, silhouette layer
 * visibility, the alpha slider, and the single final confirmation.
 *
 * The confirmation POST fires exactly once, when the last object is
 * confirmed; if the service is unreachable the record is queued locally
 * and retried.
 */

import type { AssetClient, OverlayMetadata } from "./api.js";
import { clampAlpha } from "./blend.js";

export interface ConfirmOutcome {
  allPlaced: boolean;
  posted: boolean;
  queued: boolean;
}

export class OverlaySession {
  readonly sceneId: string;
  readonly metadata: OverlayMetadata;
  readonly placed: boolean[];
  readonly layerVisible: boolean[];
  private alphaValue: number;
  private posted = false;
  private pending = false;

  constructor(
    private readonly client: AssetClient,
    metadata: OverlayMetadata,
  ) {
    this.sceneId = metadata.scene_id;
    this.metadata = metadata;
    this.placed = metadata.objects.map(() => false);
    this.layerVisible = metadata.objects.map(() => true);
    this.alphaValue = clampAlpha(metadata.alpha_default ?? 0.5);
  }

  static async load(client: AssetClient, sceneId: string): Promise<OverlaySession> {
    return new OverlaySession(client, await client.overlay(sceneId));
  }

  get alpha(): number {
    return this.alphaValue;
  }

  set alpha(value: number) {
    this.alphaValue = clampAlpha(value);
  }

  get allPlaced(): boolean {
    return this.placed.every(Boolean);
  }

  get confirmationPosted(): boolean {
    return this.posted;
  }

  get confirmationQueued(): boolean {
    return this.pending;
  }

  toggleLayer(index: number): boolean {
    this.checkIndex(index);
    this.layerVisible[index] = !this.layerVisible[index];
    return this.layerVisible[index];
  }

  /**
   * Mark one object as physically placed (idempotent). When the last flag
   * flips, the confirmation is posted; network failure queues it instead.
   */
  async confirmPlacement(index: number, note = ""): Promise<ConfirmOutcome> {
    this.checkIndex(index);
    this.placed[index] = true;
    if (!this.allPlaced || this.posted || this.pending) {
      return { allPlaced: this.allPlaced, posted: false, queued: this.pending };
    }
    return this.post(note);
  }

  /** Retry a confirmation that could not be delivered earlier. */
  async retryPending(note = ""): Promise<ConfirmOutcome> {
    if (!this.pending || this.posted) {
      return { allPlaced: this.allPlaced, posted: false, queued: this.pending };
    }
    return this.post(note);
  }

  private async post(note: string): Promise<ConfirmOutcome> {
    try {
      const resp = await this.client.confirm(this.sceneId, note);
      if (!resp.ok) throw new Error("service rejected the confirmation");
      this.posted = true;
      this.pending = false;
      return { allPlaced: true, posted: true, queued: false };
    } catch {
      this.pending = true;
      return { allPlaced: true, posted: false, queued: true };
    }
  }

  private checkIndex(index: number): void {
    if (!Number.isInteger(index) || index < 0 || index >= this.placed.length) {
      throw new RangeError(`object index ${index} out of range`);
    }
  }
}

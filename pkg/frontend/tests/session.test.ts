import { describe, expect, it } from "vitest";

import type {
  AssetClient,
  ConfirmResponse,
  OverlayMetadata,
  SceneListEntry,
} from "../src/api.js";
import { OverlaySession } from "../src/session.js";

function metadata(objectCount = 5): OverlayMetadata {
  return {
    scene_id: "scene-test",
    seed: 1,
    objects: Array.from({ length: objectCount }, (_, i) => ({
      index: i,
      object_id: `obj_${i}`,
      display_name: `obj ${i}`,
      silhouette: `silhouette_0${i}.png`,
    })),
    camera: {},
    table_height: 0.745,
    image: { width: 64, height: 48 },
    alpha_default: 0.5,
    files: {},
    digests: {},
  };
}

class MockClient implements AssetClient {
  confirmCalls = 0;
  failConfirms = false;

  async listScenes(): Promise<SceneListEntry[]> {
    return [{ id: "scene-test", overlay: "", image: "" }];
  }

  async overlay(): Promise<OverlayMetadata> {
    return metadata();
  }

  imageUrl(sceneId: string): string {
    return `/scenes/${sceneId}/image`;
  }

  maskUrl(sceneId: string, index: number): string {
    return `/scenes/${sceneId}/masks/${index}`;
  }

  async confirm(sceneId: string): Promise<ConfirmResponse> {
    if (this.failConfirms) throw new Error("connection refused");
    this.confirmCalls += 1;
    return { ok: true, scene_id: sceneId, confirmations: this.confirmCalls };
  }
}

describe("OverlaySession", () => {
  it("posts exactly once after all five confirms", async () => {
    const client = new MockClient();
    const session = new OverlaySession(client, metadata());
    for (let i = 0; i < 4; i++) {
      const outcome = await session.confirmPlacement(i);
      expect(outcome.posted).toBe(false);
      expect(client.confirmCalls).toBe(0);
    }
    const last = await session.confirmPlacement(4);
    expect(last.posted).toBe(true);
    expect(client.confirmCalls).toBe(1);
    expect(session.confirmationPosted).toBe(true);
  });

  it("duplicate confirms are idempotent and never repost", async () => {
    const client = new MockClient();
    const session = new OverlaySession(client, metadata());
    for (let i = 0; i < 5; i++) await session.confirmPlacement(i);
    expect(client.confirmCalls).toBe(1);
    const again = await session.confirmPlacement(2);
    expect(again.posted).toBe(false);
    expect(session.placed[2]).toBe(true);
    expect(client.confirmCalls).toBe(1);
  });

  it("four of five confirms never post", async () => {
    const client = new MockClient();
    const session = new OverlaySession(client, metadata());
    for (const i of [0, 1, 2, 3]) await session.confirmPlacement(i);
    expect(session.allPlaced).toBe(false);
    expect(client.confirmCalls).toBe(0);
  });

  it("queues the confirmation when the service is unreachable, then retries", async () => {
    const client = new MockClient();
    client.failConfirms = true;
    const session = new OverlaySession(client, metadata());
    for (let i = 0; i < 5; i++) await session.confirmPlacement(i);
    expect(session.confirmationQueued).toBe(true);
    expect(session.confirmationPosted).toBe(false);

    client.failConfirms = false;
    const retry = await session.retryPending();
    expect(retry.posted).toBe(true);
    expect(client.confirmCalls).toBe(1);
    // a later retry is a no-op
    const noop = await session.retryPending();
    expect(noop.posted).toBe(false);
    expect(client.confirmCalls).toBe(1);
  });

  it("clamps alpha and starts from the bundle default", () => {
    const session = new OverlaySession(new MockClient(), metadata());
    expect(session.alpha).toBe(0.5);
    session.alpha = 3;
    expect(session.alpha).toBe(1);
    session.alpha = -1;
    expect(session.alpha).toBe(0);
  });

  it("toggles silhouette layers independently", () => {
    const session = new OverlaySession(new MockClient(), metadata());
    expect(session.layerVisible).toEqual([true, true, true, true, true]);
    expect(session.toggleLayer(2)).toBe(false);
    expect(session.layerVisible[2]).toBe(false);
    expect(session.layerVisible[1]).toBe(true);
    expect(session.toggleLayer(2)).toBe(true);
  });

  it("rejects out-of-range object indices", async () => {
    const session = new OverlaySession(new MockClient(), metadata());
    await expect(session.confirmPlacement(9)).rejects.toThrow(RangeError);
    expect(() => session.toggleLayer(-1)).toThrow(RangeError);
  });
});

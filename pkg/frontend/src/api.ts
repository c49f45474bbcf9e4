/** Typed client for the read-only scene asset service. */

export interface SceneListEntry {
  id: string;
  overlay: string;
  image: string;
}

export interface OverlayObject {
  index: number;
  object_id: string;
  display_name: string;
  silhouette: string;
}

export interface OverlayMetadata {
  scene_id: string;
  seed: number;
  objects: OverlayObject[];
  camera: Record<string, unknown>;
  table_height: number;
  image: { width: number; height: number };
  alpha_default: number;
  files: Record<string, string>;
  digests: Record<string, string>;
}

export interface ConfirmResponse {
  ok: boolean;
  scene_id: string;
  confirmations: number;
}

export interface AssetClient {
  listScenes(): Promise<SceneListEntry[]>;
  overlay(sceneId: string): Promise<OverlayMetadata>;
  imageUrl(sceneId: string): string;
  maskUrl(sceneId: string, index: number): string;
  confirm(sceneId: string, note?: string): Promise<ConfirmResponse>;
}

export class HttpAssetClient implements AssetClient {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  async listScenes(): Promise<SceneListEntry[]> {
    const resp = await fetch(this.url("/scenes"));
    if (!resp.ok) throw new Error(`scene list failed: ${resp.status}`);
    return (await resp.json()) as SceneListEntry[];
  }

  async overlay(sceneId: string): Promise<OverlayMetadata> {
    const resp = await fetch(this.url(`/scenes/${sceneId}/overlay`));
    if (!resp.ok) throw new Error(`overlay metadata failed: ${resp.status}`);
    return (await resp.json()) as OverlayMetadata;
  }

  imageUrl(sceneId: string): string {
    return this.url(`/scenes/${sceneId}/image`);
  }

  maskUrl(sceneId: string, index: number): string {
    return this.url(`/scenes/${sceneId}/masks/${index}`);
  }

  async confirm(sceneId: string, note = ""): Promise<ConfirmResponse> {
    const resp = await fetch(this.url(`/scenes/${sceneId}/confirm`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ note }),
    });
    if (!resp.ok) throw new Error(`confirm failed: ${resp.status}`);
    return (await resp.json()) as ConfirmResponse;
  }
}

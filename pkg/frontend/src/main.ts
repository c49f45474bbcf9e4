/**
 * Browser entry point: pick a scene, blend its reference render over the
 * live camera at the slider alpha, toggle per-object silhouette outlines,
 * and tick off objects as they are physically placed.
 */

import { HttpAssetClient } from "./api.js";
import { blendImageData } from "./blend.js";
import { OverlaySession } from "./session.js";

const params = new URLSearchParams(location.search);
const serviceUrl = params.get("service") ?? "http://127.0.0.1:8000";
const client = new HttpAssetClient(serviceUrl);

const sceneSelect = document.getElementById("scene") as HTMLSelectElement;
const alphaSlider = document.getElementById("alpha") as HTMLInputElement;
const canvas = document.getElementById("view") as HTMLCanvasElement;
const layersDiv = document.getElementById("layers") as HTMLDivElement;
const checklistDiv = document.getElementById("checklist") as HTMLDivElement;
const statusDiv = document.getElementById("status") as HTMLDivElement;

let session: OverlaySession | null = null;
let reference: ImageData | null = null;
let silhouettes: HTMLImageElement[] = [];
let video: HTMLVideoElement | null = null;
let cameraFailed = false;

function status(message: string, warn = false): void {
  statusDiv.textContent = message;
  statusDiv.className = warn ? "warning" : "";
}

async function startCamera(): Promise<void> {
  try {
    const stream = await navigator.mediaDevices.getUserMedia({ video: true });
    video = document.createElement("video");
    video.srcObject = stream;
    await video.play();
  } catch {
    cameraFailed = true;
    status("camera unavailable: showing the static reference only", true);
  }
}

async function loadImageData(url: string, w: number, h: number): Promise<ImageData> {
  const img = new Image();
  img.crossOrigin = "anonymous";
  await new Promise<void>((resolve, reject) => {
    img.onload = () => resolve();
    img.onerror = () => reject(new Error(`failed to load ${url}`));
    img.src = url;
  });
  const scratch = document.createElement("canvas");
  scratch.width = w;
  scratch.height = h;
  const ctx = scratch.getContext("2d")!;
  ctx.drawImage(img, 0, 0, w, h);
  return ctx.getImageData(0, 0, w, h);
}

function renderChecklist(): void {
  if (!session) return;
  checklistDiv.replaceChildren();
  session.metadata.objects.forEach((obj, i) => {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = session!.placed[i];
    box.onchange = async () => {
      const outcome = await session!.confirmPlacement(i);
      box.checked = session!.placed[i];
      if (outcome.posted) status("all objects placed: confirmation recorded");
      else if (outcome.queued) {
        status("confirmation queued: service unreachable, retrying", true);
        setTimeout(retryLoop, 2000);
      }
    };
    label.append(box, ` ${obj.display_name}`);
    checklistDiv.append(label);
  });
}

async function retryLoop(): Promise<void> {
  if (!session) return;
  const outcome = await session.retryPending();
  if (outcome.posted) status("confirmation recorded after retry");
  else if (outcome.queued) setTimeout(retryLoop, 2000);
}

function renderLayerToggles(): void {
  if (!session) return;
  layersDiv.replaceChildren();
  session.metadata.objects.forEach((obj, i) => {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = session!.layerVisible[i];
    box.onchange = () => {
      session!.toggleLayer(i);
      silhouettes[i].style.display = session!.layerVisible[i] ? "block" : "none";
    };
    label.append(box, ` outline ${obj.display_name}`);
    layersDiv.append(label);
  });
}

async function openScene(sceneId: string): Promise<void> {
  session = await OverlaySession.load(client, sceneId);
  const { width, height } = session.metadata.image;
  canvas.width = width;
  canvas.height = height;
  alphaSlider.value = String(session.alpha);
  reference = await loadImageData(client.imageUrl(sceneId), width, height);

  const overlayStack = document.getElementById("silhouette-stack") as HTMLDivElement;
  overlayStack.replaceChildren();
  silhouettes = session.metadata.objects.map((_, i) => {
    const img = new Image();
    img.crossOrigin = "anonymous";
    img.src = client.maskUrl(sceneId, i);
    img.className = "silhouette";
    overlayStack.append(img);
    return img;
  });
  renderChecklist();
  renderLayerToggles();
  status(`scene ${sceneId} loaded; align the real objects with the overlay`);
}

function drawLoop(): void {
  const ctx = canvas.getContext("2d")!;
  if (session && reference) {
    session.alpha = Number(alphaSlider.value);
    if (video && !cameraFailed && video.readyState >= 2) {
      const scratch = document.createElement("canvas");
      scratch.width = canvas.width;
      scratch.height = canvas.height;
      const sctx = scratch.getContext("2d")!;
      sctx.drawImage(video, 0, 0, canvas.width, canvas.height);
      const cameraFrame = sctx.getImageData(0, 0, canvas.width, canvas.height);
      const out = ctx.createImageData(canvas.width, canvas.height);
      blendImageData(cameraFrame, reference, session.alpha, out);
      ctx.putImageData(out, 0, 0);
    } else {
      ctx.putImageData(reference, 0, 0);
    }
  }
  requestAnimationFrame(drawLoop);
}

async function boot(): Promise<void> {
  await startCamera();
  try {
    const scenes = await client.listScenes();
    sceneSelect.replaceChildren(
      ...scenes.map((s) => new Option(s.id, s.id)),
    );
    sceneSelect.onchange = () => void openScene(sceneSelect.value);
    if (scenes.length) await openScene(scenes[0].id);
    else status("service has no scenes", true);
  } catch (err) {
    status(`cannot reach asset service at ${serviceUrl}: ${err}`, true);
  }
  drawLoop();
}

void boot();

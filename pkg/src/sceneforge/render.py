"""Pinhole-camera software rasterizer for reference scene images.

Produces the flat-shaded color render, per-pixel instance indices (ground
truth for segmentation metrics), and a depth map for a scene, plus the
overlay bundle an operator uses to replicate the scene physically.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Mapping

import numpy as np
from PIL import Image

from .errors import ConfigurationError, RenderError
from .geometry import Pose, TriMesh
from .metrics import mask_boundary

if TYPE_CHECKING:
    from .scenes import Scene

DEFAULT_WIDTH = 640
DEFAULT_HEIGHT = 480
DEFAULT_FOCAL = 554.0
_NEAR_PLANE = 1e-6
BACKGROUND = -1


@dataclass(frozen=True)
class CameraModel:
    """Pinhole intrinsics plus the base->camera extrinsic transform."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int
    extrinsics: Pose

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ValueError("principal point must lie inside the image")

    def to_dict(self) -> dict:
        return {
            "fx": self.fx,
            "fy": self.fy,
            "cx": self.cx,
            "cy": self.cy,
            "width": self.width,
            "height": self.height,
            "extrinsics": {
                "quaternion": [float(v) for v in self.extrinsics.as_quaternion()],
                "translation": [float(v) for v in self.extrinsics.translation],
            },
        }

    @staticmethod
    def from_dict(doc: dict) -> "CameraModel":
        ext = doc["extrinsics"]
        return CameraModel(
            fx=float(doc["fx"]),
            fy=float(doc["fy"]),
            cx=float(doc["cx"]),
            cy=float(doc["cy"]),
            width=int(doc["width"]),
            height=int(doc["height"]),
            extrinsics=Pose.from_quaternion(ext["quaternion"], ext["translation"]),
        )


def look_at_extrinsics(eye, target, up=(0.0, 0.0, 1.0)) -> Pose:
    """Base->camera transform for a camera at ``eye`` looking at ``target``.

    Camera convention: +Z optical axis (forward), +X right, +Y down.
    """
    eye = np.asarray(eye, dtype=float)
    target = np.asarray(target, dtype=float)
    forward = target - eye
    norm = np.linalg.norm(forward)
    if norm < 1e-12:
        raise ValueError("eye and target coincide")
    z = forward / norm
    x = np.cross(z, np.asarray(up, dtype=float))
    xn = np.linalg.norm(x)
    if xn < 1e-12:
        raise ValueError("view direction parallel to up vector")
    x /= xn
    y = np.cross(z, x)
    cam_in_base = np.column_stack([x, y, z])
    rotation = cam_in_base.T
    return Pose(rotation, -rotation @ eye)


def default_camera() -> CameraModel:
    """Head-camera stand-in: intrinsics and pose are configurable defaults,
    not published values; they are recorded in every overlay bundle."""
    return CameraModel(
        fx=DEFAULT_FOCAL,
        fy=DEFAULT_FOCAL,
        cx=DEFAULT_WIDTH / 2,
        cy=DEFAULT_HEIGHT / 2,
        width=DEFAULT_WIDTH,
        height=DEFAULT_HEIGHT,
        extrinsics=look_at_extrinsics((0.1, 0.0, 1.4), (0.8, 0.0, 0.745)),
    )


def project_point(cam: CameraModel, p) -> tuple[float, float]:
    """Pinhole projection of a camera-frame point to pixel coordinates."""
    x, y, z = np.asarray(p, dtype=float)
    if z <= 0:
        raise RenderError(f"point behind camera (z = {z})")
    return (cam.fx * x / z + cam.cx, cam.fy * y / z + cam.cy)


@dataclass
class ReferenceImage:
    color: np.ndarray  # (h, w, 3) uint8
    instance: np.ndarray  # (h, w) int32, BACKGROUND where empty
    depth: np.ndarray  # (h, w) float64 meters, +inf where empty

    def __post_init__(self):
        if not (
            self.color.shape[:2] == self.instance.shape == self.depth.shape
        ):
            raise ValueError("buffers must share dimensions")

    def instance_mask(self, index: int) -> np.ndarray:
        return self.instance == index


def _object_color(object_id: str) -> np.ndarray:
    digest = hashlib.sha256(object_id.encode("utf-8")).digest()
    return 70.0 + np.array(list(digest[:3]), dtype=float) * 175.0 / 255.0


def _edge_includes_boundary(delta_x: float, delta_y: float) -> bool:
    # Top-left fill rule (pixel coords, y down): left edges run upward,
    # top edges run rightward.
    return delta_y < 0 or (delta_y == 0 and delta_x > 0)


def rasterize_scene(
    scene: "Scene", meshes: Mapping[str, TriMesh], cam: CameraModel
) -> ReferenceImage:
    """Z-buffered rasterization of every placed mesh.

    The instance buffer records the nearest placement per pixel; shading is
    flat per face, tinted by a deterministic hash of the object id.  Raises
    :class:`RenderError` if a placement's mesh is missing.
    """
    h, w = cam.height, cam.width
    color = np.zeros((h, w, 3), dtype=np.uint8)
    instance = np.full((h, w), BACKGROUND, dtype=np.int32)
    inv_depth = np.zeros((h, w), dtype=np.float64)  # 0 == infinitely far

    for idx, placement in enumerate(scene.placements):
        mesh = meshes.get(placement.object_id)
        if mesh is None:
            raise RenderError(f"no mesh available for object {placement.object_id!r}")
        cam_pts = cam.extrinsics.transform(placement.world_pose.transform(mesh.vertices))
        base = _object_color(placement.object_id)
        zs = cam_pts[:, 2]
        us = cam.fx * cam_pts[:, 0] / np.where(zs > _NEAR_PLANE, zs, 1.0) + cam.cx
        vs = cam.fy * cam_pts[:, 1] / np.where(zs > _NEAR_PLANE, zs, 1.0) + cam.cy

        for tri in mesh.faces:
            if (zs[tri] <= _NEAR_PLANE).any():
                continue
            a, b, c = (int(i) for i in tri)
            area2 = (us[b] - us[a]) * (vs[c] - vs[a]) - (vs[b] - vs[a]) * (us[c] - us[a])
            if area2 == 0.0:
                continue
            if area2 < 0.0:
                b, c = c, b
                area2 = -area2

            x0 = max(0, math.ceil(min(us[a], us[b], us[c]) - 0.5))
            x1 = min(w - 1, math.floor(max(us[a], us[b], us[c]) - 0.5))
            y0 = max(0, math.ceil(min(vs[a], vs[b], vs[c]) - 0.5))
            y1 = min(h - 1, math.floor(max(vs[a], vs[b], vs[c]) - 0.5))
            if x0 > x1 or y0 > y1:
                continue

            px = np.arange(x0, x1 + 1) + 0.5
            py = (np.arange(y0, y1 + 1) + 0.5)[:, None]
            weights = []
            inside = None
            for (p, q) in ((b, c), (c, a), (a, b)):
                wgt = (us[q] - us[p]) * (py - vs[p]) - (vs[q] - vs[p]) * (px - us[p])
                cover = (
                    (wgt > 0)
                    | ((wgt == 0) & _edge_includes_boundary(us[q] - us[p], vs[q] - vs[p]))
                )
                inside = cover if inside is None else (inside & cover)
                weights.append(wgt)
            if not inside.any():
                continue

            lam = [wgt / area2 for wgt in weights]
            inv_z = (
                lam[0] / zs[a] + lam[1] / zs[b] + lam[2] / zs[c]
            )
            block = (slice(y0, y1 + 1), slice(x0, x1 + 1))
            wins = inside & (inv_z > inv_depth[block])
            if not wins.any():
                continue

            normal = np.cross(cam_pts[b] - cam_pts[a], cam_pts[c] - cam_pts[a])
            nz = abs(normal[2]) / (np.linalg.norm(normal) + 1e-30)
            shade = np.clip(base * (0.35 + 0.65 * nz), 0, 255).astype(np.uint8)

            inv_depth[block][wins] = inv_z[wins]
            instance[block][wins] = idx
            color[block][wins] = shade

    depth = np.full((h, w), np.inf)
    hit = inv_depth > 0
    depth[hit] = 1.0 / inv_depth[hit]
    return ReferenceImage(color=color, instance=instance, depth=depth)


# ---------------------------------------------------------------------------
# overlay bundle export


@dataclass(frozen=True)
class OverlayBundle:
    directory: Path
    metadata: dict


def _write_png_rgb(path: Path, arr: np.ndarray) -> None:
    Image.fromarray(arr, mode="RGB").save(path, format="PNG")


def _write_png_u16(path: Path, arr: np.ndarray) -> None:
    img = Image.new("I;16", (arr.shape[1], arr.shape[0]))
    img.frombytes(arr.astype("<u2").tobytes())
    img.save(path, format="PNG")


def _write_png_mask(path: Path, mask: np.ndarray) -> None:
    Image.fromarray((mask.astype(np.uint8)) * 255, mode="L").save(path, format="PNG")


def read_png(path: str | Path) -> np.ndarray:
    return np.array(Image.open(path))


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def display_name(object_id: str) -> str:
    return object_id.replace("_", " ")


def export_overlay_asset(
    img: ReferenceImage, scene: "Scene", out_dir: str | Path
) -> OverlayBundle:
    """Write the replication bundle for one scene.

    Contents: color render, 16-bit instance index image (0 = background,
    k+1 = placement k), 16-bit depth in millimeters, one silhouette-outline
    layer per object, and a metadata file carrying the object checklist,
    camera intrinsics/extrinsics, table height, and per-file digests.
    """
    if scene.camera is None:
        raise ConfigurationError("scene has no camera; cannot export an overlay")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    files: dict[str, Path] = {}
    color_path = out / "color.png"
    _write_png_rgb(color_path, img.color)
    files["color"] = color_path

    instance_path = out / "instance.png"
    _write_png_u16(instance_path, (img.instance + 1).astype(np.uint16))
    files["instance"] = instance_path

    depth_path = out / "depth_mm.png"
    depth_mm = np.where(np.isfinite(img.depth), img.depth * 1000.0, 0.0)
    _write_png_u16(depth_path, np.clip(depth_mm, 0, 65535).astype(np.uint16))
    files["depth"] = depth_path

    objects = []
    for k, placement in enumerate(scene.placements):
        sil_path = out / f"silhouette_{k:02d}.png"
        _write_png_mask(sil_path, mask_boundary(img.instance == k))
        files[f"silhouette_{k:02d}"] = sil_path
        objects.append(
            {
                "index": k,
                "object_id": placement.object_id,
                "display_name": display_name(placement.object_id),
                "silhouette": sil_path.name,
            }
        )

    metadata = {
        "scene_id": scene.id,
        "seed": scene.seed,
        "objects": objects,
        "camera": scene.camera.to_dict(),
        "table_height": scene.table.height,
        "image": {"width": img.color.shape[1], "height": img.color.shape[0]},
        "alpha_default": 0.5,
        "files": {name: path.name for name, path in files.items()},
        "digests": {path.name: _sha256(path) for path in files.values()},
    }
    meta_path = out / "metadata.json"
    meta_path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n")
    return OverlayBundle(directory=out, metadata=metadata)


def load_overlay_bundle(directory: str | Path) -> OverlayBundle:
    directory = Path(directory)
    metadata = json.loads((directory / "metadata.json").read_text())
    return OverlayBundle(directory=directory, metadata=metadata)

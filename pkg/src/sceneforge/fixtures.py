"""Synthetic stand-in meshes for the 16 benchmark objects.

Real object meshes are not redistributable here, so the toolkit ships
primitive approximations (boxes, cylinders, a frustum bowl) with roughly
matching dimensions.  They exercise every pipeline stage end to end; swap
in scanned meshes via ``load_mesh`` for physical replication work.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .geometry import Pose, TriMesh, save_mesh
from .grasps import Grasp, GraspSet


def box_mesh(sx: float, sy: float, sz: float, name: str = "box") -> TriMesh:
    """Axis-aligned box centered at the origin, outward-facing triangles."""
    hx, hy, hz = sx / 2, sy / 2, sz / 2
    v = np.array(
        [
            [-hx, -hy, -hz],
            [hx, -hy, -hz],
            [hx, hy, -hz],
            [-hx, hy, -hz],
            [-hx, -hy, hz],
            [hx, -hy, hz],
            [hx, hy, hz],
            [-hx, hy, hz],
        ]
    )
    f = np.array(
        [
            [0, 2, 1], [0, 3, 2],  # bottom
            [4, 5, 6], [4, 6, 7],  # top
            [0, 1, 5], [0, 5, 4],  # -y
            [2, 3, 7], [2, 7, 6],  # +y
            [0, 4, 7], [0, 7, 3],  # -x
            [1, 2, 6], [1, 6, 5],  # +x
        ]
    )
    return TriMesh(v, f, name=name)


def frustum_mesh(
    r_bottom: float,
    r_top: float,
    height: float,
    segments: int = 24,
    name: str = "frustum",
) -> TriMesh:
    """Closed cone frustum centered at the origin, axis along Z."""
    hz = height / 2
    angles = 2 * math.pi * np.arange(segments) / segments
    bottom = np.column_stack(
        [r_bottom * np.cos(angles), r_bottom * np.sin(angles), np.full(segments, -hz)]
    )
    top = np.column_stack(
        [r_top * np.cos(angles), r_top * np.sin(angles), np.full(segments, hz)]
    )
    verts = np.vstack([bottom, top, [[0, 0, -hz]], [[0, 0, hz]]])
    bc, tc = 2 * segments, 2 * segments + 1
    faces = []
    for k in range(segments):
        k1 = (k + 1) % segments
        faces.append([bc, k1, k])  # bottom cap, normal -z
        faces.append([tc, segments + k, segments + k1])  # top cap, normal +z
        faces.append([k, k1, segments + k1])  # side
        faces.append([k, segments + k1, segments + k])
    return TriMesh(verts, np.array(faces), name=name)


def cylinder_mesh(
    radius: float, height: float, segments: int = 24, name: str = "cylinder"
) -> TriMesh:
    return frustum_mesh(radius, radius, height, segments, name)


# Approximate (x, y, z) dimensions in meters of the 16 benchmark objects.
_BOXES = {
    "003_cracker_box": (0.160, 0.060, 0.210),
    "004_sugar_box": (0.090, 0.044, 0.175),
    "006_mustard_bottle": (0.080, 0.040, 0.190),
    "008_pudding_box": (0.090, 0.035, 0.114),
    "009_gelatin_box": (0.073, 0.028, 0.085),
    "010_potted_meat_can": (0.101, 0.057, 0.083),
    "011_banana": (0.036, 0.190, 0.036),
    "021_bleach_cleanser": (0.100, 0.060, 0.250),
    "035_power_drill": (0.184, 0.057, 0.146),
    "037_scissors": (0.200, 0.087, 0.016),
    "052_extra_large_clamp": (0.165, 0.213, 0.037),
}
_CYLINDERS = {
    "005_tomato_soup_can": (0.033, 0.101),
    "007_tuna_fish_can": (0.0425, 0.033),
    "025_mug": (0.041, 0.082),
    "040_large_marker": (0.0095, 0.121),
}

OBJECT_IDS = (
    "003_cracker_box",
    "004_sugar_box",
    "005_tomato_soup_can",
    "006_mustard_bottle",
    "007_tuna_fish_can",
    "008_pudding_box",
    "009_gelatin_box",
    "010_potted_meat_can",
    "011_banana",
    "021_bleach_cleanser",
    "024_bowl",
    "025_mug",
    "035_power_drill",
    "037_scissors",
    "040_large_marker",
    "052_extra_large_clamp",
)


def make_object_library() -> dict[str, TriMesh]:
    """The 16 stand-in meshes keyed by object id, in canonical order."""
    library: dict[str, TriMesh] = {}
    for oid in OBJECT_IDS:
        if oid in _BOXES:
            library[oid] = box_mesh(*_BOXES[oid], name=oid)
        elif oid in _CYLINDERS:
            r, h = _CYLINDERS[oid]
            library[oid] = cylinder_mesh(r, h, name=oid)
        elif oid == "024_bowl":
            library[oid] = frustum_mesh(0.055, 0.080, 0.055, name=oid)
        else:  # pragma: no cover
            raise KeyError(oid)
    return library


def write_object_library(directory: str | Path) -> list[Path]:
    """Write the stand-in meshes as .obj files; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for oid, mesh in make_object_library().items():
        path = directory / f"{oid}.obj"
        save_mesh(path, mesh)
        paths.append(path)
    return paths


def _tangent_frame(approach: np.ndarray) -> np.ndarray:
    """Deterministic rotation whose +Z column equals ``approach``."""
    z = approach / np.linalg.norm(approach)
    helper = np.array([1.0, 0.0, 0.0])
    if abs(z @ helper) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    x = np.cross(helper, z)
    x /= np.linalg.norm(x)
    y = np.cross(z, x)
    return np.column_stack([x, y, z])


def make_grasp_set(
    mesh: TriMesh, n: int = 100, seed: int = 0, max_opening: float = 0.10
) -> GraspSet:
    """Synthetic antipodal-ish grasps around an object, in its own frame.

    Gripper positions sample the upper hemisphere around the mesh; each
    approach points at the mesh center.  A stand-in for an offline
    simulator-generated grasp dataset.
    """
    rng = np.random.default_rng(seed)
    center = (mesh.vertices.min(axis=0) + mesh.vertices.max(axis=0)) / 2
    radius = float(np.linalg.norm(mesh.vertices - center, axis=1).max())
    spans = mesh.vertices.max(axis=0) - mesh.vertices.min(axis=0)
    width = float(min(max_opening, min(spans) + 0.008))

    grasps = []
    for _ in range(n):
        azimuth = rng.uniform(0, 2 * math.pi)
        elevation = rng.uniform(math.radians(20), math.radians(90))
        direction = np.array(
            [
                math.cos(elevation) * math.cos(azimuth),
                math.cos(elevation) * math.sin(azimuth),
                math.sin(elevation),
            ]
        )
        standoff = 0.10
        position = center + direction * (radius + 0.02)
        rotation = _tangent_frame(-direction)
        grasps.append(Grasp(Pose(rotation, position), width=width, standoff=standoff))
    return GraspSet(mesh.name, tuple(grasps))

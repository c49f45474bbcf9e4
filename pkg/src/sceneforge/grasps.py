"""Grasp-set ingestion, farthest-point downsampling, frame transforms, and
the PCA-based top-down grasp fallback.

Gripper frame convention: +Z is the approach axis (tool points along +Z
toward the object), +X is the closing axis (fingers travel along +-X).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
import numpy as np

from .errors import ParseError, WidthExceededError
from .geometry import Pose, PointCloud, farthest_point_sample, pca_xy

DEFAULT_MAX_OPENING = 0.10
# Extra finger room added to the measured object width.
FINGER_CLEARANCE = 0.008
DEFAULT_STANDOFF = 0.10


@dataclass(frozen=True)
class Grasp:
    """A 6D gripper pose in the object frame, with opening width."""

    pose: Pose
    width: float
    standoff: float = DEFAULT_STANDOFF

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("grasp width must be non-negative")


@dataclass(frozen=True)
class GraspSet:
    object_id: str
    grasps: tuple[Grasp, ...]

    def __post_init__(self):
        object.__setattr__(self, "grasps", tuple(self.grasps))
        if not self.grasps:
            raise ValueError(f"grasp set for {self.object_id!r} is empty")

    def __len__(self) -> int:
        return len(self.grasps)

    def translations(self) -> np.ndarray:
        return np.array([g.pose.translation for g in self.grasps])


def load_grasp_set(
    path: str | Path, max_opening: float = DEFAULT_MAX_OPENING
) -> GraspSet:
    """Read a grasp file: ``{object_id, grasps: [{quaternion, translation,
    width, standoff}]}``.

    Raises :class:`ParseError` with the record index for malformed records,
    including widths beyond ``max_opening``.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read grasp file {path}: {e}") from e
    try:
        object_id = doc["object_id"]
        records = doc["grasps"]
    except (KeyError, TypeError) as e:
        raise ParseError(f"{path}: missing object_id/grasps fields") from e
    if not records:
        raise ParseError(f"{path}: grasp list is empty")

    grasps = []
    for i, rec in enumerate(records):
        try:
            pose = Pose.from_quaternion(rec["quaternion"], rec["translation"])
            width = float(rec["width"])
            standoff = float(rec.get("standoff", DEFAULT_STANDOFF))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"{path}: malformed grasp record {i}: {e}") from e
        if not 0 <= width <= max_opening:
            raise ParseError(
                f"{path}: grasp record {i} width {width} outside "
                f"[0, {max_opening}] gripper range"
            )
        grasps.append(Grasp(pose, width, standoff))
    return GraspSet(object_id, tuple(grasps))


def save_grasp_set(path: str | Path, grasp_set: GraspSet) -> None:
    doc = {
        "object_id": grasp_set.object_id,
        "grasps": [
            {
                "quaternion": [float(v) for v in g.pose.as_quaternion()],
                "translation": [float(v) for v in g.pose.translation],
                "width": g.width,
                "standoff": g.standoff,
            }
            for g in grasp_set.grasps
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def downsample_grasps(grasp_set: GraspSet, n: int) -> GraspSet:
    """Keep ``n`` grasps spread out over the object via farthest-point
    sampling on the translation components (start = first grasp)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = farthest_point_sample(grasp_set.translations(), n, start=0)
    return GraspSet(grasp_set.object_id, tuple(grasp_set.grasps[i] for i in idx))


def grasp_to_base_frame(grasp: Grasp, object_pose: Pose) -> Pose:
    """Planned grasp on the object model -> gripper pose in the robot base
    frame."""
    return object_pose @ grasp.pose


def top_down_grasp(
    cloud: PointCloud,
    *,
    max_opening: float = DEFAULT_MAX_OPENING,
    clearance: float = FINGER_CLEARANCE,
    standoff: float = DEFAULT_STANDOFF,
) -> Grasp:
    """Top-down grasp from a point cloud in the robot base frame.

    The gripper approaches straight down; the closing axis aligns with the
    minor principal axis of the cloud's X-Y footprint, whose extent sets
    the opening width.  Works identically for full model clouds and partial
    (camera-visible) clouds.

    Raises :class:`WidthExceededError` when the object is wider than the
    gripper can open.
    """
    pca = pca_xy(cloud)
    required = 2.0 * pca.extents[1]
    if required > max_opening:
        raise WidthExceededError(
            f"object span {required:.4f} m exceeds max opening {max_opening} m"
        )
    width = min(required + clearance, max_opening)

    mx, my = float(pca.minor[0]), float(pca.minor[1])
    rotation = np.array(
        [
            [mx, my, 0.0],
            [my, -mx, 0.0],
            [0.0, 0.0, -1.0],
        ]
    ).T  # columns: closing axis, cross axis, approach (down)
    centroid_xy = cloud.points[:, :2].mean(axis=0)
    top_z = float(cloud.points[:, 2].max())
    translation = np.array([centroid_xy[0], centroid_xy[1], top_z + standoff])
    return Grasp(Pose(rotation, translation), width, standoff)

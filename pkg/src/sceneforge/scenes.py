"""Sequential generation of collision-free cluttered tabletop scenes.

Objects are placed one by one on reachable grid cells: the first anywhere,
each next one near an already-placed object, in a probability-weighted
stable pose with a random rotation about world Z.  Collision checking uses
the objects' X-Y bounding rectangles with a clearance margin.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Mapping, Protocol, Sequence, runtime_checkable

import numpy as np

from .errors import ConfigurationError, GenerationError, ParseError
from .geometry import (
    OrientedBox,
    PointCloud,
    Pose,
    StablePose,
    TriMesh,
    oriented_bbox_xy,
    rotation_z,
)
from .grasps import GraspSet, grasp_to_base_frame
from .reachability import ReachabilityMap, TableSpec
from .seeding import derive_seed

if TYPE_CHECKING:
    from .render import CameraModel

MAX_OBJECTS_PER_SCENE = 5
# "Nearby" radius for clustering subsequent placements around existing ones.
NEARBY_RADIUS = 0.25
# Each footprint rectangle is inflated by this much; real replication needs
# finger clearance between objects.
COLLISION_MARGIN = 0.005
CELL_ATTEMPTS = 100
SCENE_RESTARTS = 20


@dataclass(frozen=True)
class ObjectModel:
    """An object the generator can place: mesh plus its stable poses."""

    mesh: TriMesh
    stable_poses: tuple[StablePose, ...]

    def __post_init__(self):
        object.__setattr__(self, "stable_poses", tuple(self.stable_poses))
        if not self.stable_poses:
            raise ValueError(f"object {self.mesh.name!r} has no stable poses")

    @property
    def object_id(self) -> str:
        return self.mesh.name


@dataclass(frozen=True)
class Placement:
    object_id: str
    stable_pose_index: int
    z_rotation: float  # radians in [0, 2pi)
    cell: tuple[int, int]
    world_pose: Pose

    def __post_init__(self):
        if not 0 <= self.z_rotation < 2 * math.pi + 1e-12:
            raise ValueError("z_rotation must lie in [0, 2pi)")
        object.__setattr__(self, "cell", (int(self.cell[0]), int(self.cell[1])))


@dataclass(frozen=True)
class Scene:
    id: str
    placements: tuple[Placement, ...]
    table: TableSpec
    camera: "CameraModel | None"
    seed: int
    feasible: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))
        if len(self.placements) > MAX_OBJECTS_PER_SCENE:
            raise ValueError(
                f"scene {self.id!r} has {len(self.placements)} placements; "
                f"max is {MAX_OBJECTS_PER_SCENE}"
            )
        ids = [p.object_id for p in self.placements]
        if len(set(ids)) != len(ids):
            raise ValueError(f"scene {self.id!r} repeats an object id")

    def object_ids(self) -> list[str]:
        return [p.object_id for p in self.placements]


def placement_footprint(mesh: TriMesh, world_pose: Pose) -> np.ndarray:
    """X-Y axis-aligned bounding rectangle of the posed mesh, ((minx, miny),
    (maxx, maxy))."""
    xy = world_pose.transform(mesh.vertices)[:, :2]
    return np.array([xy.min(axis=0), xy.max(axis=0)])


def check_collision_free(
    footprint_a: np.ndarray,
    footprint_b: np.ndarray,
    margin: float = COLLISION_MARGIN,
) -> bool:
    """True iff the two margin-inflated rectangles do not intersect.

    The test is closed-interval: rectangles touching exactly at the margin
    boundary count as colliding.
    """
    a = np.asarray(footprint_a, dtype=float)
    b = np.asarray(footprint_b, dtype=float)
    overlap_x = (a[0, 0] - margin <= b[1, 0] + margin) and (
        b[0, 0] - margin <= a[1, 0] + margin
    )
    overlap_y = (a[0, 1] - margin <= b[1, 1] + margin) and (
        b[0, 1] - margin <= a[1, 1] + margin
    )
    return not (overlap_x and overlap_y)


def _make_placement(
    obj: ObjectModel,
    pose_index: int,
    z_rotation: float,
    cell: tuple[int, int],
    cell_center: np.ndarray,
    table: TableSpec,
) -> Placement:
    stable = obj.stable_poses[pose_index]
    rotation = rotation_z(z_rotation) @ stable.rotation
    translation = np.array(
        [cell_center[0], cell_center[1], table.height + stable.rest_height]
    )
    return Placement(
        object_id=obj.object_id,
        stable_pose_index=pose_index,
        z_rotation=z_rotation,
        cell=cell,
        world_pose=Pose(rotation, translation),
    )


def generate_scene(
    objects: Sequence[ObjectModel],
    reach_map: ReachabilityMap,
    seed: int,
    *,
    num_objects: int = MAX_OBJECTS_PER_SCENE,
    nearby_radius: float = NEARBY_RADIUS,
    margin: float = COLLISION_MARGIN,
    cell_attempts: int = CELL_ATTEMPTS,
    scene_restarts: int = SCENE_RESTARTS,
    scene_id: str | None = None,
    camera: "CameraModel | None" = None,
) -> Scene:
    """Generate one collision-free scene; pure function of (objects, map,
    seed).

    The first object lands on a uniformly random reachable cell; each later
    object picks a random already-placed anchor and a random unoccupied
    reachable cell within ``nearby_radius`` of it, re-drawing up to
    ``cell_attempts`` times until collision-free.  A failed placement
    restarts the scene (up to ``scene_restarts``); exhaustion raises
    :class:`GenerationError` carrying the partial scene.
    """
    if num_objects < 1 or num_objects > MAX_OBJECTS_PER_SCENE:
        raise ValueError(f"num_objects must be in [1, {MAX_OBJECTS_PER_SCENE}]")
    if len(objects) < num_objects:
        raise ValueError(
            f"need at least {num_objects} candidate objects, got {len(objects)}"
        )
    reachable = reach_map.reachable_cells()
    if not reachable:
        raise ValueError("reachability map has no reachable cells")
    ids = [o.object_id for o in objects]
    if len(set(ids)) != len(ids):
        raise ValueError("candidate objects must have distinct ids")

    rng = np.random.default_rng(seed)
    table = reach_map.table
    centers = {cell: reach_map.center(*cell) for cell in reachable}
    partial: list[Placement] = []

    for _ in range(scene_restarts):
        chosen = rng.choice(len(objects), size=num_objects, replace=False)
        placements: list[Placement] = []
        footprints: list[np.ndarray] = []
        occupied: set[tuple[int, int]] = set()
        failed = False

        for k in range(num_objects):
            obj = objects[int(chosen[k])]
            probs = np.array([sp.probability for sp in obj.stable_poses])
            probs = probs / probs.sum()
            placed = False
            for _attempt in range(cell_attempts):
                if k == 0:
                    candidates = [c for c in reachable if c not in occupied]
                else:
                    anchor = placements[int(rng.integers(len(placements)))]
                    axy = centers[anchor.cell][:2]
                    candidates = [
                        c
                        for c in reachable
                        if c not in occupied
                        and np.hypot(*(centers[c][:2] - axy)) <= nearby_radius
                    ]
                if not candidates:
                    continue
                cell = candidates[int(rng.integers(len(candidates)))]
                pose_index = int(rng.choice(len(probs), p=probs))
                z_rot = float(rng.uniform(0.0, 2.0 * math.pi))
                placement = _make_placement(
                    obj, pose_index, z_rot, cell, centers[cell], table
                )
                fp = placement_footprint(obj.mesh, placement.world_pose)
                if all(check_collision_free(fp, f, margin) for f in footprints):
                    placements.append(placement)
                    footprints.append(fp)
                    occupied.add(cell)
                    placed = True
                    break
            if not placed:
                failed = True
                partial = placements
                break

        if not failed:
            return Scene(
                id=scene_id or f"scene-{seed}",
                placements=tuple(placements),
                table=table,
                camera=camera,
                seed=seed,
                feasible=None,
            )

    raise GenerationError(
        f"could not place {num_objects} objects after {scene_restarts} restarts "
        f"(seed {seed})",
        partial=Scene(
            id=scene_id or f"scene-{seed}",
            placements=tuple(partial),
            table=table,
            camera=camera,
            seed=seed,
        ),
    )


# ---------------------------------------------------------------------------
# feasibility validation against a plan oracle


@runtime_checkable
class PlanOracle(Protocol):
    """Answers whether some motion plan reaches a grasp pose amid obstacles.

    Deterministic per configuration.
    """

    def query(self, grasp_pose: Pose, obstacles: Sequence[OrientedBox]) -> bool: ...


@dataclass(frozen=True)
class AcceptAllPlanOracle:
    def query(self, grasp_pose: Pose, obstacles: Sequence[OrientedBox]) -> bool:
        return True


@dataclass(frozen=True)
class AnalyticPlanOracle:
    """Analytic stand-in for a motion planner.

    Accepts a grasp iff the gripper sits within the arm's reach shell, its
    approach axis is within ``max_tilt_deg`` of straight down, and its
    position is outside every (inflated) obstacle box.
    """

    shoulder: tuple[float, float, float] = (0.0, 0.0, 1.0)
    r_min: float = 0.0
    r_max: float = 1.2
    max_tilt_deg: float = 75.0
    obstacle_inflation: float = 0.01

    def query(self, grasp_pose: Pose, obstacles: Sequence[OrientedBox]) -> bool:
        d = float(np.linalg.norm(grasp_pose.translation - np.asarray(self.shoulder)))
        if not self.r_min <= d <= self.r_max:
            return False
        approach = grasp_pose.rotation[:, 2]  # gripper +Z in base frame
        cos_tilt = float(approach @ np.array([0.0, 0.0, -1.0]))
        if cos_tilt < math.cos(math.radians(self.max_tilt_deg)):
            return False
        for box in obstacles:
            inflated = OrientedBox(
                box.center, box.axes, box.extents + self.obstacle_inflation
            )
            if inflated.contains(grasp_pose.translation):
                return False
        return True


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    accepted_grasp: Mapping[str, int | None]  # object id -> grasp index or None


def placement_obb(mesh: TriMesh, world_pose: Pose) -> OrientedBox:
    """World-frame oriented bounding box of a posed mesh (PCA in X-Y)."""
    return oriented_bbox_xy(PointCloud(world_pose.transform(mesh.vertices)))


def validate_scene_feasibility(
    scene: Scene,
    grasp_sets: Mapping[str, GraspSet],
    oracle: PlanOracle,
    meshes: Mapping[str, TriMesh],
) -> FeasibilityReport:
    """Check that every object has at least one oracle-approved grasp.

    Each object's grasps are transformed to the base frame and queried with
    the *other* objects' oriented bounding boxes as obstacles.  Raises
    :class:`ConfigurationError` if a grasp set or mesh is missing.
    """
    for p in scene.placements:
        if p.object_id not in grasp_sets:
            raise ConfigurationError(f"no grasp set for object {p.object_id!r}")
        if p.object_id not in meshes:
            raise ConfigurationError(f"no mesh for object {p.object_id!r}")

    obbs = {
        p.object_id: placement_obb(meshes[p.object_id], p.world_pose)
        for p in scene.placements
    }
    accepted: dict[str, int | None] = {}
    for p in scene.placements:
        obstacles = [obbs[q.object_id] for q in scene.placements if q is not p]
        found = None
        for gi, grasp in enumerate(grasp_sets[p.object_id].grasps):
            base_pose = grasp_to_base_frame(grasp, p.world_pose)
            if oracle.query(base_pose, obstacles):
                found = gi
                break
        accepted[p.object_id] = found
    return FeasibilityReport(
        feasible=all(v is not None for v in accepted.values()),
        accepted_grasp=accepted,
    )


# ---------------------------------------------------------------------------
# candidate generation loop


def generate_candidates(
    objects: Sequence[ObjectModel],
    reach_map: ReachabilityMap,
    n: int,
    master_seed: int,
    *,
    num_objects: int = MAX_OBJECTS_PER_SCENE,
    nearby_radius: float = NEARBY_RADIUS,
    margin: float = COLLISION_MARGIN,
    grasp_sets: Mapping[str, GraspSet] | None = None,
    plan_oracle: PlanOracle | None = None,
    camera: "CameraModel | None" = None,
    balanced: bool = True,
    max_attempts: int | None = None,
) -> list[Scene]:
    """Generate ``n`` scenes, optionally rejecting grasp-infeasible ones.

    Scene ``i`` draws its seed from (master_seed, i) so any scene can be
    regenerated independently.  With ``balanced``, each scene's objects are
    the least-used ones so far (ties shuffled), keeping appearance counts
    nearly uniform across the candidate pool.  When ``plan_oracle`` and
    ``grasp_sets`` are given, scenes failing feasibility are discarded and
    never emitted.
    """
    if max_attempts is None:
        max_attempts = max(50 * n, 200)
    usage = {o.object_id: 0 for o in objects}
    by_id = {o.object_id: o for o in objects}
    meshes = {o.object_id: o.mesh for o in objects}
    scenes: list[Scene] = []
    rejected = 0

    for index in range(max_attempts):
        if len(scenes) >= n:
            break
        seed = derive_seed(master_seed, "scene", index)
        if balanced and len(objects) > num_objects:
            rng = np.random.default_rng(derive_seed(master_seed, "deck", index))
            order = sorted(
                usage, key=lambda oid: (usage[oid], rng.random())
            )
            pool = [by_id[oid] for oid in order[:num_objects]]
        else:
            pool = list(objects)
        try:
            scene = generate_scene(
                pool,
                reach_map,
                seed,
                num_objects=num_objects,
                nearby_radius=nearby_radius,
                margin=margin,
                camera=camera,
            )
        except GenerationError:
            rejected += 1
            continue
        if plan_oracle is not None and grasp_sets is not None:
            report = validate_scene_feasibility(scene, grasp_sets, plan_oracle, meshes)
            if not report.feasible:
                rejected += 1
                continue
            scene = dataclasses.replace(scene, feasible=True)
        for oid in scene.object_ids():
            usage[oid] += 1
        scenes.append(scene)

    if len(scenes) < n:
        raise GenerationError(
            f"generated only {len(scenes)}/{n} scenes after {max_attempts} "
            f"attempts ({rejected} rejected)"
        )
    return scenes


# ---------------------------------------------------------------------------
# independent scene validation (used by tests and the acceptance suite)


def validate_scene(
    scene: Scene,
    objects: Mapping[str, ObjectModel],
    reach_map: ReachabilityMap,
    *,
    nearby_radius: float = NEARBY_RADIUS,
    margin: float = COLLISION_MARGIN,
) -> list[str]:
    """Re-check every scene invariant; returns a list of violations."""
    problems = []
    if len(scene.placements) > MAX_OBJECTS_PER_SCENE:
        problems.append("more than five placements")
    ids = scene.object_ids()
    if len(set(ids)) != len(ids):
        problems.append("duplicate object id")

    footprints = []
    for k, p in enumerate(scene.placements):
        if p.object_id not in objects:
            problems.append(f"{p.object_id}: unknown object")
            continue
        obj = objects[p.object_id]
        if not 0 <= p.stable_pose_index < len(obj.stable_poses):
            problems.append(f"{p.object_id}: stable pose index out of range")
            continue
        if not 0 <= p.z_rotation < 2 * math.pi:
            problems.append(f"{p.object_id}: z_rotation outside [0, 2pi)")
        cell = p.cell
        if not (
            0 <= cell[0] < reach_map.gridspec.rows
            and 0 <= cell[1] < reach_map.gridspec.cols
        ):
            problems.append(f"{p.object_id}: cell outside grid")
            continue
        if not reach_map.grid[cell]:
            problems.append(f"{p.object_id}: placed on unreachable cell {cell}")
        center = reach_map.center(*cell)
        stable = obj.stable_poses[p.stable_pose_index]
        expected_t = np.array(
            [center[0], center[1], reach_map.table.height + stable.rest_height]
        )
        if np.abs(p.world_pose.translation - expected_t).max() > 1e-9:
            problems.append(f"{p.object_id}: translation inconsistent with cell")
        expected_r = rotation_z(p.z_rotation) @ stable.rotation
        if np.abs(p.world_pose.rotation - expected_r).max() > 1e-9:
            problems.append(f"{p.object_id}: rotation != Rz(theta) @ stable rotation")
        fp = placement_footprint(obj.mesh, p.world_pose)
        for j, other in enumerate(footprints):
            if not check_collision_free(fp, other, margin):
                problems.append(
                    f"{p.object_id}: collides with {scene.placements[j].object_id}"
                )
        if k > 0:
            dists = [
                float(np.hypot(*(center[:2] - reach_map.center(*q.cell)[:2])))
                for q in scene.placements[:k]
            ]
            if min(dists) > nearby_radius + 1e-9:
                problems.append(f"{p.object_id}: not near any earlier placement")
        footprints.append(fp)
    return problems


# ---------------------------------------------------------------------------
# serialization (the scene file is the unit of reproducibility)


def _pose_to_dict(pose: Pose) -> dict:
    return {
        "quaternion": [float(v) for v in pose.as_quaternion()],
        "translation": [float(v) for v in pose.translation],
    }


def _pose_from_dict(doc: dict) -> Pose:
    return Pose.from_quaternion(doc["quaternion"], doc["translation"])


def scene_to_dict(scene: Scene) -> dict:
    doc = {
        "id": scene.id,
        "seed": scene.seed,
        "table": {"size": list(scene.table.size), "offset": list(scene.table.offset)},
        "camera": scene.camera.to_dict() if scene.camera is not None else None,
        "feasible": scene.feasible,
        "placements": [
            {
                "object_id": p.object_id,
                "stable_pose_index": p.stable_pose_index,
                "z_rotation": p.z_rotation,
                "cell": [p.cell[0], p.cell[1]],
                "world_pose": _pose_to_dict(p.world_pose),
            }
            for p in scene.placements
        ],
    }
    return doc


def scene_from_dict(doc: dict) -> Scene:
    from .render import CameraModel  # deferred to avoid an import cycle

    try:
        camera = (
            CameraModel.from_dict(doc["camera"]) if doc.get("camera") else None
        )
        placements = tuple(
            Placement(
                object_id=p["object_id"],
                stable_pose_index=int(p["stable_pose_index"]),
                z_rotation=float(p["z_rotation"]),
                cell=(int(p["cell"][0]), int(p["cell"][1])),
                world_pose=_pose_from_dict(p["world_pose"]),
            )
            for p in doc["placements"]
        )
        return Scene(
            id=doc["id"],
            placements=placements,
            table=TableSpec(tuple(doc["table"]["size"]), tuple(doc["table"]["offset"])),
            camera=camera,
            seed=int(doc["seed"]),
            feasible=doc.get("feasible"),
        )
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseError(f"bad scene document: {e}") from e


def save_scene(path: str | Path, scene: Scene) -> None:
    Path(path).write_text(
        json.dumps(scene_to_dict(scene), indent=2, sort_keys=True) + "\n"
    )


def load_scene(path: str | Path) -> Scene:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read scene file {path}: {e}") from e
    return scene_from_dict(doc)

"""Discretized tabletop reachability against a pluggable reach oracle.

The table surface is partitioned into a grid; each cell is probed with a
stand-off gripper pose.  Cells the oracle never accepts are removed, the
rest form the reachable region used for object placement.  A built-in
analytic annulus oracle lets the whole pipeline run without any external
motion planner.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import OracleError, ParseError
from .geometry import Pose

# Stand-off: gripper pointing straight down, this far above the cell center.
STANDOFF_HEIGHT = 0.15
# Gripper +Z maps to world -Z (pointing down), +X kept forward.
_DOWNWARD_ROTATION = np.diag([1.0, -1.0, -1.0])


@dataclass(frozen=True)
class TableSpec:
    """Tabletop dimensions and placement relative to the robot base."""

    size: tuple[float, float, float] = (1.0, 1.0, 0.745)
    offset: tuple[float, float, float] = (0.8, 0.0, 0.0)

    def __post_init__(self):
        if any(s <= 0 for s in self.size):
            raise ValueError("table sizes must be positive")
        object.__setattr__(self, "size", tuple(float(s) for s in self.size))
        object.__setattr__(self, "offset", tuple(float(o) for o in self.offset))

    @property
    def height(self) -> float:
        """World z of the table surface."""
        return self.offset[2] + self.size[2]


@dataclass(frozen=True)
class GridSpec:
    rows: int = 16
    cols: int = 16
    block_size: float = 0.03

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must have at least one row and column")
        if self.block_size <= 0:
            raise ValueError("block size must be positive")


@dataclass(frozen=True)
class ReachabilityProbe:
    """One probe: the stand-off pose hovering above a grid cell."""

    cell: tuple[int, int]
    standoff_pose: Pose
    attempts: int = 1
    cell_center: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.attempts < 1:
            raise ValueError("attempts must be >= 1")
        if self.cell_center is not None:
            center = np.asarray(self.cell_center, dtype=float)
            t = self.standoff_pose.translation
            if abs(t[0] - center[0]) > 1e-9 or abs(t[1] - center[1]) > 1e-9:
                raise ValueError("stand-off must be vertically above the cell center")
            if t[2] <= center[2]:
                raise ValueError("stand-off must sit above the cell center")


@runtime_checkable
class ReachOracle(Protocol):
    """Answers whether a feasible motion plan exists for a stand-off pose.

    Implementations must be deterministic for a fixed configuration and
    seed.  Set ``concurrent_safe = False`` on implementations that must be
    queried serially; the built-in map computation is serial either way.
    """

    concurrent_safe: bool

    def query(self, standoff_pose: Pose) -> bool: ...


def build_grid(table: TableSpec, grid: GridSpec) -> np.ndarray:
    """Cell centers in the robot base frame, shape (rows, cols, 3).

    Cell (i, j) sits at the center of the (i, j)-th tile of a uniform
    rows x cols partition of the tabletop; z is the table surface height.
    """
    sx, sy, _ = table.size
    ox, oy, _ = table.offset
    xs = ox - sx / 2 + (np.arange(grid.rows) + 0.5) * sx / grid.rows
    ys = oy - sy / 2 + (np.arange(grid.cols) + 0.5) * sy / grid.cols
    centers = np.zeros((grid.rows, grid.cols, 3))
    centers[:, :, 0] = xs[:, None]
    centers[:, :, 1] = ys[None, :]
    centers[:, :, 2] = table.height
    return centers


def standoff_pose(cell_center: np.ndarray, height: float = STANDOFF_HEIGHT) -> Pose:
    """Downward-pointing gripper pose hovering ``height`` above the cell."""
    t = np.asarray(cell_center, dtype=float) + np.array([0.0, 0.0, height])
    return Pose(_DOWNWARD_ROTATION, t)


@dataclass(frozen=True)
class ReachabilityMap:
    grid: np.ndarray  # (rows, cols) bool
    table: TableSpec
    gridspec: GridSpec
    cell_centers: np.ndarray  # (rows, cols, 3)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=bool)
        c = np.asarray(self.cell_centers, dtype=float)
        if g.shape != (self.gridspec.rows, self.gridspec.cols):
            raise ValueError("grid shape does not match grid spec")
        if c.shape != (self.gridspec.rows, self.gridspec.cols, 3):
            raise ValueError("cell centers shape does not match grid spec")
        g = np.array(g)
        g.flags.writeable = False
        c = np.array(c)
        c.flags.writeable = False
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "cell_centers", c)

    @property
    def num_reachable(self) -> int:
        return int(self.grid.sum())

    def reachable_cells(self) -> list[tuple[int, int]]:
        return [tuple(rc) for rc in np.argwhere(self.grid)]

    def center(self, row: int, col: int) -> np.ndarray:
        return self.cell_centers[row, col]

    def save(self, path: str | Path) -> None:
        doc = {
            "table": {"size": list(self.table.size), "offset": list(self.table.offset)},
            "grid": {
                "rows": self.gridspec.rows,
                "cols": self.gridspec.cols,
                "block_size": self.gridspec.block_size,
            },
            "cells": [
                "".join("1" if v else "0" for v in row) for row in self.grid
            ],
        }
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    @staticmethod
    def load(path: str | Path) -> "ReachabilityMap":
        try:
            doc = json.loads(Path(path).read_text())
            table = TableSpec(tuple(doc["table"]["size"]), tuple(doc["table"]["offset"]))
            gspec = GridSpec(
                doc["grid"]["rows"], doc["grid"]["cols"], doc["grid"]["block_size"]
            )
            rows = doc["cells"]
            grid = np.array(
                [[ch == "1" for ch in row] for row in rows], dtype=bool
            ).reshape(gspec.rows, gspec.cols)
        except (KeyError, ValueError, TypeError, json.JSONDecodeError) as e:
            raise ParseError(f"bad reachability map file {path}: {e}") from e
        return ReachabilityMap(grid, table, gspec, build_grid(table, gspec))


def compute_reachability_map(
    table: TableSpec,
    grid: GridSpec,
    oracle: ReachOracle,
    iterations: int = 20,
    standoff_height: float = STANDOFF_HEIGHT,
) -> ReachabilityMap:
    """Probe every cell's stand-off pose for ``iterations`` rounds.

    A cell is reachable iff the oracle accepted it in at least one round;
    already-accepted cells are kept and not re-queried.  Oracle exceptions
    are re-raised with the failing cell's identity.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    centers = build_grid(table, grid)
    accepted = np.zeros((grid.rows, grid.cols), dtype=bool)
    for _ in range(iterations):
        for i in range(grid.rows):
            for j in range(grid.cols):
                if accepted[i, j]:
                    continue
                pose = standoff_pose(centers[i, j], standoff_height)
                try:
                    ok = bool(oracle.query(pose))
                except Exception as e:
                    raise OracleError(f"reach oracle failed at cell ({i}, {j}): {e}") from e
                if ok:
                    accepted[i, j] = True
    return ReachabilityMap(accepted, table, grid, centers)


@dataclass(frozen=True)
class AnnulusReachOracle:
    """Accepts stand-off poses within a spherical shell around the shoulder.

    An analytic stand-in for a motion planner: the arm reaches anything
    between ``r_min`` and ``r_max`` of the shoulder point.
    """

    shoulder: tuple[float, float, float]
    r_min: float
    r_max: float
    standoff_height: float = STANDOFF_HEIGHT

    concurrent_safe = True

    def __post_init__(self):
        if not 0 <= self.r_min < self.r_max:
            raise ValueError("need 0 <= r_min < r_max")
        object.__setattr__(self, "shoulder", tuple(float(c) for c in self.shoulder))

    def query(self, pose: Pose) -> bool:
        d = float(np.linalg.norm(pose.translation - np.asarray(self.shoulder)))
        return self.r_min <= d <= self.r_max


def analytic_reach_oracle(
    shoulder,
    r_min: float,
    r_max: float,
    standoff_height: float = STANDOFF_HEIGHT,
) -> AnnulusReachOracle:
    """Built-in substitute for an external planner (see AnnulusReachOracle)."""
    return AnnulusReachOracle(tuple(shoulder), r_min, r_max, standoff_height)


@dataclass(frozen=True)
class ConstantReachOracle:
    """Stub oracle answering the same verdict for every pose."""

    verdict: bool
    concurrent_safe = True

    def query(self, pose: Pose) -> bool:
        return self.verdict

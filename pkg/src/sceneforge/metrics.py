"""Evaluation layer: ADD-S pose error, segmentation overlap/boundary
metrics with optimal mask matching, the pick-and-place failure taxonomy,
and per-object results aggregation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.ndimage import binary_dilation, binary_erosion
from scipy.optimize import linear_sum_assignment
from scipy.spatial import cKDTree

from .errors import DuplicateRecordError, EventError, ParseError
from .geometry import (
    PointCloud,
    Pose,
    TriMesh,
    farthest_point_sample,
    sample_surface_points,
)

ORDERINGS = ("near-to-far", "fixed")
OUTCOMES = ("success", "perception-failure", "planning-failure", "execution-failure")
PHASES = ("pre-grasping", "during-grasping", "post-grasping")
# Legal (outcome, phase) combinations of the failure taxonomy, plus success
# which by convention completes the post-grasping phase.
VALID_OUTCOME_PHASES = {
    ("success", "post-grasping"),
    ("perception-failure", "pre-grasping"),
    ("perception-failure", "during-grasping"),
    ("planning-failure", "pre-grasping"),
    ("planning-failure", "during-grasping"),
    ("execution-failure", "post-grasping"),
}

_FULL_3X3 = np.ones((3, 3), dtype=bool)


# ---------------------------------------------------------------------------
# pose error


@dataclass(frozen=True)
class PoseEstimate:
    object_id: str
    estimated: Pose
    ground_truth: Pose
    model_points: PointCloud

    def add_s(self) -> float:
        return add_s(self.estimated, self.ground_truth, self.model_points)


def model_points(mesh: TriMesh, n: int = 1024, seed: int = 0) -> PointCloud:
    """Deterministic evaluation points for a mesh: dense area-weighted
    surface samples thinned to ``n`` by farthest-point sampling."""
    dense = sample_surface_points(mesh, max(4 * n, n), seed=seed)
    idx = farthest_point_sample(dense.points, n, start=0)
    return PointCloud(dense.points[idx])


def add(est: Pose, gt: Pose, model_points: PointCloud) -> float:
    """Index-matched average model-point distance (asymmetric variant)."""
    return float(
        np.linalg.norm(
            est.transform(model_points.points) - gt.transform(model_points.points),
            axis=1,
        ).mean()
    )


def add_s(est: Pose, gt: Pose, model_points: PointCloud) -> float:
    """Average closest-point distance between the model under the estimated
    and ground-truth poses; tolerant of symmetric objects."""
    pts_est = est.transform(model_points.points)
    pts_gt = gt.transform(model_points.points)
    dists, _ = cKDTree(pts_gt).query(pts_est)
    return float(np.mean(dists))


# ---------------------------------------------------------------------------
# instance segmentation metrics


@dataclass(frozen=True)
class MaskSet:
    masks: tuple[np.ndarray, ...]
    role: str  # "predicted" | "ground-truth"

    def __post_init__(self):
        masks = tuple(np.asarray(m, dtype=bool) for m in self.masks)
        if self.role not in ("predicted", "ground-truth"):
            raise ValueError(f"unknown mask role {self.role!r}")
        shapes = {m.shape for m in masks}
        if len(shapes) > 1:
            raise ValueError(f"masks have mixed shapes: {sorted(shapes)}")
        if self.role == "ground-truth" and masks:
            stack = np.stack([m.astype(np.int32) for m in masks])
            if stack.sum(axis=0).max() > 1:
                raise ValueError("ground-truth masks must be pairwise disjoint")
        object.__setattr__(self, "masks", masks)

    def __len__(self) -> int:
        return len(self.masks)


@dataclass(frozen=True)
class MaskAssignment:
    pred: MaskSet
    gt: MaskSet
    pairs: tuple[tuple[int, int, float], ...]  # (pred idx, gt idx, overlap F)
    unmatched_pred: tuple[int, ...]
    unmatched_gt: tuple[int, ...]


def _overlap_f(pred: np.ndarray, gt: np.ndarray) -> float:
    inter = float(np.logical_and(pred, gt).sum())
    denom = float(pred.sum()) + float(gt.sum())
    return 2.0 * inter / denom if denom > 0 else 0.0


def match_masks(pred: MaskSet, gt: MaskSet) -> MaskAssignment:
    """One-to-one assignment maximizing the summed pairwise overlap
    F-measure (optimal bipartite matching); pairs with zero overlap stay
    unmatched."""
    if pred.masks and gt.masks and pred.masks[0].shape != gt.masks[0].shape:
        raise ValueError(
            f"mask dimensions differ: {pred.masks[0].shape} vs {gt.masks[0].shape}"
        )
    if not pred.masks or not gt.masks:
        return MaskAssignment(
            pred, gt, (), tuple(range(len(pred))), tuple(range(len(gt)))
        )
    scores = np.array(
        [[_overlap_f(p, g) for g in gt.masks] for p in pred.masks]
    )
    rows, cols = linear_sum_assignment(scores, maximize=True)
    pairs = tuple(
        (int(r), int(c), float(scores[r, c]))
        for r, c in zip(rows, cols)
        if scores[r, c] > 0
    )
    matched_p = {r for r, _, _ in pairs}
    matched_g = {c for _, c, _ in pairs}
    return MaskAssignment(
        pred,
        gt,
        pairs,
        tuple(i for i in range(len(pred)) if i not in matched_p),
        tuple(j for j in range(len(gt)) if j not in matched_g),
    )


def _prf(tp_pred: float, tp_gt: float, n_pred: float, n_gt: float) -> tuple[float, float, float]:
    if n_pred > 0:
        precision = 100.0 * tp_pred / n_pred
    else:
        precision = 100.0 if n_gt == 0 else 0.0
    if n_gt > 0:
        recall = 100.0 * tp_gt / n_gt
    else:
        recall = 100.0 if n_pred == 0 else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f


def overlap_prf(assignment: MaskAssignment) -> tuple[float, float, float]:
    """Pixel-level precision / recall / F (percent) over the matched pairs;
    unmatched masks count fully against precision or recall."""
    tp = sum(
        float(np.logical_and(assignment.pred.masks[r], assignment.gt.masks[c]).sum())
        for r, c, _ in assignment.pairs
    )
    n_pred = sum(float(m.sum()) for m in assignment.pred.masks)
    n_gt = sum(float(m.sum()) for m in assignment.gt.masks)
    return _prf(tp, tp, n_pred, n_gt)


def overlap75(assignment: MaskAssignment) -> float:
    """Percentage of ground-truth objects whose matched overlap F >= 75%."""
    n_gt = len(assignment.gt)
    if n_gt == 0:
        return 100.0
    good = sum(1 for _, _, f in assignment.pairs if f >= 0.75)
    return 100.0 * good / n_gt


def mask_boundary(mask: np.ndarray) -> np.ndarray:
    """Boundary pixels: the mask minus its 8-connected erosion (image
    borders count as outside)."""
    mask = np.asarray(mask, dtype=bool)
    eroded = binary_erosion(mask, structure=_FULL_3X3, border_value=0)
    return mask & ~eroded


def boundary_prf(
    assignment: MaskAssignment, tolerance_px: int = 2
) -> tuple[float, float, float]:
    """Boundary precision / recall / F (percent): a boundary pixel is a true
    positive when within ``tolerance_px`` (Chebyshev) of its matched
    counterpart's boundary."""
    if tolerance_px < 0:
        raise ValueError("tolerance must be >= 0")

    def dilate(b: np.ndarray) -> np.ndarray:
        if tolerance_px == 0:
            return b
        return binary_dilation(b, structure=_FULL_3X3, iterations=tolerance_px)

    pred_b = [mask_boundary(m) for m in assignment.pred.masks]
    gt_b = [mask_boundary(m) for m in assignment.gt.masks]
    tp_pred = 0.0
    tp_gt = 0.0
    for r, c, _ in assignment.pairs:
        tp_pred += float((pred_b[r] & dilate(gt_b[c])).sum())
        tp_gt += float((gt_b[c] & dilate(pred_b[r])).sum())
    n_pred = sum(float(b.sum()) for b in pred_b)
    n_gt = sum(float(b.sum()) for b in gt_b)
    return _prf(tp_pred, tp_gt, n_pred, n_gt)


def segmentation_report(
    pred: MaskSet, gt: MaskSet, boundary_tolerance_px: int = 2
) -> dict:
    """All segmentation metrics for one image pair."""
    assignment = match_masks(pred, gt)
    op, orr, of = overlap_prf(assignment)
    bp, br, bf = boundary_prf(assignment, boundary_tolerance_px)
    return {
        "overlap": {"precision": op, "recall": orr, "f": of},
        "boundary": {"precision": bp, "recall": br, "f": bf},
        "overlap75": overlap75(assignment),
    }


def aggregate_segmentation(reports: Sequence[dict]) -> dict:
    """Macro (per-image mean) aggregation of segmentation reports."""
    if not reports:
        raise ValueError("no reports to aggregate")

    def mean(path_a: str, path_b: str | None = None) -> float:
        vals = [
            r[path_a][path_b] if path_b is not None else r[path_a] for r in reports
        ]
        return float(np.mean(vals))

    return {
        "overlap": {
            "precision": mean("overlap", "precision"),
            "recall": mean("overlap", "recall"),
            "f": mean("overlap", "f"),
        },
        "boundary": {
            "precision": mean("boundary", "precision"),
            "recall": mean("boundary", "recall"),
            "f": mean("boundary", "f"),
        },
        "overlap75": mean("overlap75"),
        "images": len(reports),
    }


# ---------------------------------------------------------------------------
# failure taxonomy


@dataclass(frozen=True)
class TrialEvent:
    """Flags describing how far one pick-and-place trial progressed."""

    recognized: bool
    grasp_found: bool
    plan_found: bool
    lifted: bool
    hit_obstacle: bool
    placed: bool
    perception_error_exceeds_threshold: bool = False

    def validate(self) -> None:
        checks = [
            (self.placed and not self.lifted, "placed requires lifted"),
            (self.lifted and not self.plan_found, "lifted requires a plan"),
            (self.plan_found and not self.grasp_found, "plan requires a grasp"),
            (self.grasp_found and not self.recognized, "grasp requires recognition"),
            (self.hit_obstacle and not self.plan_found, "hit_obstacle requires a plan"),
            (self.placed and self.hit_obstacle, "placed excludes hit_obstacle"),
        ]
        for bad, msg in checks:
            if bad:
                raise EventError(f"inconsistent trial event: {msg}")


def classify_failure(event: TrialEvent) -> tuple[str, str]:
    """Deterministic mapping of a trial event onto the failure taxonomy.

    Returns (outcome, phase); successful trials map to
    ("success", "post-grasping").
    """
    event.validate()
    perception = event.perception_error_exceeds_threshold
    if not event.recognized:
        return ("perception-failure", "pre-grasping")
    if not event.grasp_found or not event.plan_found:
        if perception:
            return ("perception-failure", "pre-grasping")
        return ("planning-failure", "pre-grasping")
    if not event.lifted:
        if perception:
            return ("perception-failure", "during-grasping")
        return ("planning-failure", "during-grasping")
    if not event.placed:
        return ("execution-failure", "post-grasping")
    return ("success", "post-grasping")


# ---------------------------------------------------------------------------
# trial records and aggregation


@dataclass(frozen=True)
class TrialRecord:
    scene_id: str
    object_id: str
    ordering: str  # "near-to-far" | "fixed"
    outcome: str
    phase: str
    note: str = ""
    grasp_succeeded: bool | None = None

    def __post_init__(self):
        if self.ordering not in ORDERINGS:
            raise ValueError(f"unknown ordering {self.ordering!r}")
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.phase not in PHASES:
            raise ValueError(f"unknown phase {self.phase!r}")
        if (self.outcome, self.phase) not in VALID_OUTCOME_PHASES:
            raise ValueError(
                f"illegal outcome/phase pair ({self.outcome}, {self.phase})"
            )

    @property
    def grasped(self) -> bool:
        """Grasping success: explicit flag, else implied by the outcome
        (execution failures grasped and lifted before failing to place)."""
        if self.grasp_succeeded is not None:
            return self.grasp_succeeded
        return self.outcome in ("success", "execution-failure")

    @staticmethod
    def from_event(
        scene_id: str, object_id: str, ordering: str, event: TrialEvent, note: str = ""
    ) -> "TrialRecord":
        outcome, phase = classify_failure(event)
        return TrialRecord(
            scene_id, object_id, ordering, outcome, phase, note, event.lifted
        )


@dataclass(frozen=True)
class OutcomeCounts:
    s: int = 0
    pef: int = 0
    plf: int = 0
    ef: int = 0

    @property
    def attempts(self) -> int:
        return self.s + self.pef + self.plf + self.ef

    def add(self, outcome: str) -> "OutcomeCounts":
        key = {
            "success": "s",
            "perception-failure": "pef",
            "planning-failure": "plf",
            "execution-failure": "ef",
        }[outcome]
        values = {"s": self.s, "pef": self.pef, "plf": self.plf, "ef": self.ef}
        values[key] += 1
        return OutcomeCounts(**values)


@dataclass(frozen=True)
class ResultsTable:
    rows: Mapping[tuple[str, str], OutcomeCounts]  # (ordering, object) -> counts
    all_rows: Mapping[str, OutcomeCounts]  # ordering -> totals
    grasp_successes: Mapping[str, int]  # ordering -> grasp-success count

    def objects(self, ordering: str) -> list[str]:
        return sorted(obj for (o, obj) in self.rows if o == ordering)

    def table5_text(self, ordering: str) -> str:
        """Per-object outcome table: object, count, S, PeF, PlF, EF."""
        lines = ["object\tcount\tS\tPeF\tPlF\tEF"]
        for obj in self.objects(ordering):
            c = self.rows[(ordering, obj)]
            lines.append(f"{obj}\t{c.attempts}\t{c.s}\t{c.pef}\t{c.plf}\t{c.ef}")
        if ordering in self.all_rows:
            c = self.all_rows[ordering]
            lines.append(f"ALL\t{c.attempts}\t{c.s}\t{c.pef}\t{c.plf}\t{c.ef}")
        return "\n".join(lines) + "\n"

    def table3_text(self) -> str:
        """Summary layout: pick-and-place and grasping success per ordering."""
        lines = ["ordering\tpick_and_place_success\tgrasping_success"]
        for ordering in sorted(self.all_rows):
            c = self.all_rows[ordering]
            g = self.grasp_successes[ordering]
            lines.append(
                f"{ordering}\t{c.s} / {c.attempts}\t{g} / {c.attempts}"
            )
        return "\n".join(lines) + "\n"


def aggregate_results(records: Sequence[TrialRecord]) -> ResultsTable:
    """Count outcomes per (object, ordering), with ALL rows per ordering.

    Raises :class:`DuplicateRecordError` when two records share
    (scene, object, ordering).
    """
    seen: set[tuple[str, str, str]] = set()
    rows: dict[tuple[str, str], OutcomeCounts] = {}
    all_rows: dict[str, OutcomeCounts] = {}
    grasp: dict[str, int] = {}
    for rec in records:
        key = (rec.scene_id, rec.object_id, rec.ordering)
        if key in seen:
            raise DuplicateRecordError(f"duplicate trial record {key}")
        seen.add(key)
        rk = (rec.ordering, rec.object_id)
        rows[rk] = rows.get(rk, OutcomeCounts()).add(rec.outcome)
        all_rows[rec.ordering] = all_rows.get(rec.ordering, OutcomeCounts()).add(
            rec.outcome
        )
        grasp[rec.ordering] = grasp.get(rec.ordering, 0) + (1 if rec.grasped else 0)
    return ResultsTable(rows=rows, all_rows=all_rows, grasp_successes=grasp)


# ---------------------------------------------------------------------------
# trial record I/O (line-delimited JSON)


def save_trial_records(path: str | Path, records: Iterable[TrialRecord]) -> None:
    lines = []
    for rec in records:
        lines.append(
            json.dumps(
                {
                    "scene_id": rec.scene_id,
                    "object_id": rec.object_id,
                    "ordering": rec.ordering,
                    "outcome": rec.outcome,
                    "phase": rec.phase,
                    "note": rec.note,
                    "grasp_succeeded": rec.grasp_succeeded,
                },
                sort_keys=True,
            )
        )
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def load_trial_records(path: str | Path) -> list[TrialRecord]:
    records = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            records.append(
                TrialRecord(
                    scene_id=doc["scene_id"],
                    object_id=doc["object_id"],
                    ordering=doc["ordering"],
                    outcome=doc["outcome"],
                    phase=doc["phase"],
                    note=doc.get("note", ""),
                    grasp_succeeded=doc.get("grasp_succeeded"),
                )
            )
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            raise ParseError(f"{path}:{lineno}: bad trial record: {e}") from e
    return records

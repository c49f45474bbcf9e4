"""Entropy-optimal selection of the final scene set.

From a pool of candidate scenes, random k-subsets are sampled; subsets
violating per-object appearance bounds (or containing infeasible scenes)
are discarded, the rest are scored by the summed per-object Shannon entropy
of their stable-pose usage, and the best-scoring subset wins.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import SelectionError
from .scenes import Scene

DEFAULT_NUM_SETS = 100_000
_CHUNK = 4096
# Rows whose vectorized score is within this slack of their chunk's max are
# re-scored exactly; anything farther below cannot be the global optimum.
_SCORE_SLACK = 1e-9


@dataclass(frozen=True)
class SelectionConfig:
    k: int = 20
    count_min: int = 5
    count_max: int = 7
    num_sets: int = DEFAULT_NUM_SETS

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0 <= self.count_min <= self.count_max:
            raise ValueError("need 0 <= count_min <= count_max")
        if self.num_sets < 0:
            raise ValueError("num_sets must be >= 0")


@dataclass(frozen=True)
class PoseHistogram:
    """Per object: how often each stable-pose index appears across a set."""

    counts: Mapping[str, Mapping[int, int]]

    def __post_init__(self):
        frozen = {
            oid: dict(sorted(poses.items())) for oid, poses in self.counts.items()
        }
        object.__setattr__(self, "counts", frozen)

    @staticmethod
    def from_scenes(scenes: Iterable[Scene]) -> "PoseHistogram":
        counts: dict[str, dict[int, int]] = {}
        for scene in scenes:
            for p in scene.placements:
                per = counts.setdefault(p.object_id, {})
                per[p.stable_pose_index] = per.get(p.stable_pose_index, 0) + 1
        return PoseHistogram(counts)

    def total(self, object_id: str) -> int:
        return sum(self.counts.get(object_id, {}).values())

    def object_counts(self) -> dict[str, int]:
        return {oid: self.total(oid) for oid in sorted(self.counts)}


@dataclass(frozen=True)
class SceneSet:
    scenes: tuple[str, ...]  # scene ids, sorted
    histogram: PoseHistogram
    score: float


def object_count_constraint(
    scenes: Sequence[Scene],
    cfg: SelectionConfig,
    object_ids: Iterable[str] | None = None,
) -> bool:
    """True iff every object's appearance count lies in [count_min, count_max].

    ``object_ids`` fixes the object universe; objects from it that never
    appear count as zero (and so fail whenever count_min > 0).
    """
    counts: dict[str, int] = {}
    for scene in scenes:
        for p in scene.placements:
            counts[p.object_id] = counts.get(p.object_id, 0) + 1
    universe = set(object_ids) if object_ids is not None else set(counts)
    universe |= set(counts)
    return all(
        cfg.count_min <= counts.get(oid, 0) <= cfg.count_max for oid in universe
    )


def pose_entropy(hist: PoseHistogram) -> float:
    """Sum over objects of the Shannon entropy (natural log) of the
    normalized stable-pose count distribution."""
    if not hist.counts:
        raise ValueError("empty pose histogram")
    score = 0.0
    for oid in sorted(hist.counts):
        values = np.array(
            [hist.counts[oid][k] for k in sorted(hist.counts[oid])], dtype=float
        )
        total = values.sum()
        if total < 1:
            raise ValueError(f"object {oid!r} has zero total count")
        p = values / total
        nz = p > 0
        score += float(-(p[nz] * np.log(p[nz])).sum())
    return score


def entropy_upper_bound(
    pose_counts: Mapping[str, int], cfg: SelectionConfig
) -> float:
    """Best achievable pose_entropy for a set under the count cap."""
    return sum(
        math.log(min(n, cfg.count_max)) if min(n, cfg.count_max) > 0 else 0.0
        for n in pose_counts.values()
    )


class _SubsetScorer:
    """Vectorized validity checks and entropy scores over candidate subsets."""

    def __init__(self, candidates: Sequence[Scene], cfg: SelectionConfig):
        self.cfg = cfg
        universe = sorted({p.object_id for s in candidates for p in s.placements})
        obj_col = {oid: i for i, oid in enumerate(universe)}
        keys = sorted(
            {(p.object_id, p.stable_pose_index) for s in candidates for p in s.placements}
        )
        pose_col = {key: i for i, key in enumerate(keys)}
        self.universe = universe
        self.obj_blocks = [
            [pose_col[key] for key in keys if key[0] == oid] for oid in universe
        ]
        n = len(candidates)
        self.scene_obj = np.zeros((n, len(universe)), dtype=np.int32)
        self.scene_pose = np.zeros((n, len(keys)), dtype=np.int32)
        for si, s in enumerate(candidates):
            for p in s.placements:
                self.scene_obj[si, obj_col[p.object_id]] += 1
                self.scene_pose[si, pose_col[(p.object_id, p.stable_pose_index)]] += 1
        self.feasible = np.array([s.feasible is not False for s in candidates])

    def split_valid(self, subsets: np.ndarray) -> tuple[np.ndarray, int, int]:
        """(valid subsets, infeasible count, out-of-bounds count)."""
        ok = self.feasible[subsets].all(axis=1)
        n_infeasible = int(len(subsets) - ok.sum())
        counts = self.scene_obj[subsets[ok]].sum(axis=1)
        in_bounds = (
            (counts >= self.cfg.count_min) & (counts <= self.cfg.count_max)
        ).all(axis=1)
        n_bounds = int(len(counts) - in_bounds.sum())
        return subsets[ok][in_bounds], n_infeasible, n_bounds

    def scores(self, valid: np.ndarray) -> np.ndarray:
        hist = self.scene_pose[valid].sum(axis=1).astype(float)
        totals = self.scene_obj[valid].sum(axis=1).astype(float)
        out = np.zeros(len(valid))
        for oi in range(len(self.universe)):
            block = hist[:, self.obj_blocks[oi]]
            tot = totals[:, oi]
            present = tot > 0
            p = np.zeros_like(block)
            p[present] = block[present] / tot[present, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = np.where(p > 0, p * np.log(p), 0.0)
            out -= terms.sum(axis=1)
        return out


def _swap_neighbors(subset: np.ndarray, n_cand: int) -> np.ndarray:
    """All subsets reachable by replacing one member with one outsider."""
    inside = set(int(i) for i in subset)
    outside = np.array([j for j in range(n_cand) if j not in inside], dtype=int)
    if not len(outside):
        return np.empty((0, len(subset)), dtype=int)
    k = len(subset)
    neighbors = np.repeat(subset[None, :], k * len(outside), axis=0)
    row = 0
    for slot in range(k):
        neighbors[row : row + len(outside), slot] = outside
        row += len(outside)
    return neighbors


def _hill_climb(
    best: np.ndarray, scorer: _SubsetScorer, ids: Sequence[str], bound: float
) -> np.ndarray:
    """Deterministic single-swap ascent from the sampled argmax.

    Random sampling alone rarely lands on a locally optimal set; polishing
    with best-improvement swaps makes the returned set dominate any modest
    independent sample of valid sets.
    """
    current = np.sort(best)
    current_score = float(scorer.scores(current[None, :])[0])
    n_cand = len(scorer.feasible)
    while current_score < bound - 1e-12:
        neighbors, _, _ = scorer.split_valid(_swap_neighbors(current, n_cand))
        if not len(neighbors):
            break
        scores = scorer.scores(neighbors)
        top = float(scores.max())
        # strict improvement only, so the ascent terminates; ties within
        # one batch compare exactly, resolved to the smallest id tuple
        if top <= current_score + 1e-12:
            break
        key = None
        for nb in neighbors[scores == top]:
            nb_ids = tuple(sorted(ids[int(i)] for i in nb))
            if key is None or nb_ids < key:
                key = nb_ids
                current = np.sort(nb)
        current_score = top
    return current


def select_best_set(
    candidates: Sequence[Scene],
    cfg: SelectionConfig,
    seed: int,
    *,
    pose_counts: Mapping[str, int] | None = None,
    refine: bool = True,
) -> SceneSet:
    """Sample ``cfg.num_sets`` random k-subsets and return the best valid
    one, polished by deterministic single-swap hill-climbing.

    Subsets containing scenes flagged infeasible, or violating the object
    count bounds over the full candidate object universe, are discarded.
    Survivors are scored with :func:`pose_entropy`; ties break toward the
    lexicographically smallest sorted scene-id list.  The swap refinement
    never lowers the score, so the result still dominates every sampled
    subset.  When ``pose_counts`` (object id -> number of stable poses) is
    given, the search stops early once a set attains the theoretical
    entropy upper bound.

    Raises :class:`SelectionError` with rejection diagnostics when no valid
    subset is found.
    """
    n_cand = len(candidates)
    if n_cand < cfg.k:
        raise SelectionError(
            f"need at least k={cfg.k} candidates, got {n_cand}",
            {"candidates": n_cand},
        )
    ids = [s.id for s in candidates]
    if len(set(ids)) != n_cand:
        raise ValueError("candidate scene ids must be distinct")

    scorer = _SubsetScorer(candidates, cfg)
    bound = entropy_upper_bound(pose_counts, cfg) if pose_counts else math.inf
    rng = np.random.default_rng(seed)
    diagnostics = {"sampled": 0, "infeasible_scene": 0, "count_bounds": 0, "valid": 0}
    shortlist: list[np.ndarray] = []
    remaining = cfg.num_sets
    stop = False

    while remaining > 0 and not stop:
        m = min(_CHUNK, remaining)
        remaining -= m
        diagnostics["sampled"] += m
        u = rng.random((m, n_cand))
        subsets = np.argpartition(u, cfg.k - 1, axis=1)[:, : cfg.k]
        valid, n_inf, n_bounds = scorer.split_valid(subsets)
        diagnostics["infeasible_scene"] += n_inf
        diagnostics["count_bounds"] += n_bounds
        diagnostics["valid"] += len(valid)
        if not len(valid):
            continue
        scores = scorer.scores(valid)
        near_max = scores >= scores.max() - _SCORE_SLACK
        shortlist.extend(valid[near_max])
        if scores.max() >= bound - 1e-12:
            stop = True

    if not shortlist:
        raise SelectionError(
            "no valid scene set found "
            f"(sampled {diagnostics['sampled']}, "
            f"{diagnostics['infeasible_scene']} had infeasible scenes, "
            f"{diagnostics['count_bounds']} broke count bounds)",
            diagnostics,
        )

    by_index = {i: s for i, s in enumerate(candidates)}

    def exact_entry(subset: np.ndarray):
        subset_scenes = [by_index[int(i)] for i in subset]
        h = PoseHistogram.from_scenes(subset_scenes)
        exact = pose_entropy(h)
        sorted_ids = tuple(sorted(s.id for s in subset_scenes))
        return (-exact, sorted_ids), (exact, sorted_ids, h, subset)

    best_key = None
    best_entry = None
    for subset in shortlist:
        key, entry = exact_entry(subset)
        if best_key is None or key < best_key:
            best_key = key
            best_entry = entry

    if refine:
        climbed = _hill_climb(best_entry[3], scorer, ids, bound)
        key, entry = exact_entry(climbed)
        if key < best_key:
            best_entry = entry

    score, sorted_ids, histogram, _ = best_entry
    return SceneSet(scenes=sorted_ids, histogram=histogram, score=score)


# ---------------------------------------------------------------------------
# set file I/O


def format_count_summary(hist: PoseHistogram) -> str:
    """Human-readable per-object appearance counts (one row per object)."""
    counts = hist.object_counts()
    width = max((len(oid) for oid in counts), default=6)
    lines = [f"{'object':<{width}}  count"]
    for oid, n in counts.items():
        lines.append(f"{oid:<{width}}  {n}")
    lines.append(f"{'total':<{width}}  {sum(counts.values())}")
    return "\n".join(lines) + "\n"


def save_scene_set(
    path: str | Path, scene_set: SceneSet, scene_files: Mapping[str, str] | None = None
) -> None:
    doc = {
        "scenes": list(scene_set.scenes),
        "scene_files": dict(scene_files) if scene_files else None,
        "score": scene_set.score,
        "histogram": {
            oid: {str(k): v for k, v in poses.items()}
            for oid, poses in scene_set.histogram.counts.items()
        },
        "object_counts": scene_set.histogram.object_counts(),
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_scene_set(path: str | Path) -> SceneSet:
    doc = json.loads(Path(path).read_text())
    hist = PoseHistogram(
        {
            oid: {int(k): int(v) for k, v in poses.items()}
            for oid, poses in doc["histogram"].items()
        }
    )
    return SceneSet(tuple(doc["scenes"]), hist, float(doc["score"]))

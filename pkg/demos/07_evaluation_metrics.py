"""The evaluation layer: pose error, segmentation quality, failure taxonomy.

ADD-S measures average closest-point distance between a model under the
estimated vs true pose (symmetry-tolerant).  Segmentation predictions are
matched one-to-one to ground truth and scored by overlap and boundary
P/R/F.  Trial outcomes classify into perception / planning / execution
failures by phase and aggregate into per-object result tables.
"""

import numpy as np

from sceneforge.fixtures import make_object_library
from sceneforge.geometry import Pose, rotation_z, sample_surface_points
from sceneforge.metrics import (
    MaskSet,
    TrialEvent,
    TrialRecord,
    add_s,
    aggregate_results,
    segmentation_report,
)

# --- pose error -----------------------------------------------------------
mesh = make_object_library()["005_tomato_soup_can"]
pts = sample_surface_points(mesh, 512, seed=0)
gt = Pose(np.eye(3), np.array([0.8, 0.0, 0.8]))
spun = Pose(gt.rotation @ rotation_z(np.pi / 2), gt.translation)  # symmetric spin
shifted = Pose(gt.rotation, gt.translation + [0.02, 0.0, 0.0])
print(f"ADD-S, can spun 90 deg about its axis: {add_s(spun, gt, pts) * 1000:.2f} mm")
print(f"ADD-S, can shifted 2 cm:              {add_s(shifted, gt, pts) * 1000:.2f} mm")

# --- segmentation ---------------------------------------------------------
gt_mask = np.zeros((48, 64), dtype=bool)
gt_mask[10:30, 20:44] = True
pred_mask = np.roll(gt_mask, 2, axis=1)  # slightly off
report = segmentation_report(
    MaskSet((pred_mask,), "predicted"), MaskSet((gt_mask,), "ground-truth")
)
o, b = report["overlap"], report["boundary"]
print(
    f"\nsegmentation: overlap P/R/F {o['precision']:.1f}/{o['recall']:.1f}/{o['f']:.1f}"
    f", boundary F {b['f']:.1f}, >=75% overlap: {report['overlap75']:.0f}%"
)

# --- failure taxonomy and result tables ------------------------------------
events = {
    "clean run": TrialEvent(True, True, True, True, False, True),
    "never seen": TrialEvent(False, False, False, False, False, False),
    "no motion plan": TrialEvent(True, True, False, False, False, False),
    "slipped at lift": TrialEvent(True, True, True, False, False, False),
    "dropped in transit": TrialEvent(True, True, True, True, False, False),
}
records = []
print()
for i, (label, ev) in enumerate(events.items()):
    rec = TrialRecord.from_event(f"s{i}", "011_banana", "near-to-far", ev, note=label)
    print(f"{label:<20} -> {rec.outcome}, {rec.phase}")
    records.append(rec)

table = aggregate_results(records)
print("\n" + table.table5_text("near-to-far"))
print(table.table3_text())

"""Reference renders and the replication overlay bundle.

The software rasterizer draws a scene from the head camera's viewpoint into
color, instance-index, and depth buffers; the overlay bundle adds one
silhouette layer per object plus the metadata a human needs to replicate
the scene physically (camera intrinsics/extrinsics, table height,
checklist).
"""

from pathlib import Path

from sceneforge.fixtures import make_object_library
from sceneforge.geometry import compute_stable_poses
from sceneforge.reachability import (
    GridSpec,
    TableSpec,
    analytic_reach_oracle,
    compute_reachability_map,
)
from sceneforge.render import default_camera, export_overlay_asset, rasterize_scene
from sceneforge.scenes import ObjectModel, generate_scene

library = make_object_library()
objects = [ObjectModel(m, tuple(compute_stable_poses(m))) for m in library.values()]
oracle = analytic_reach_oracle((0.0, 0.0, 1.0), 0.35, 1.1)
rmap = compute_reachability_map(TableSpec(), GridSpec(), oracle, iterations=20)

cam = default_camera()
scene = generate_scene(objects, rmap, seed=42, camera=cam)
meshes = {o.object_id: o.mesh for o in objects}
img = rasterize_scene(scene, meshes, cam)

visible = (img.instance >= 0).mean()
print(f"rendered {cam.width}x{cam.height}; {visible:.1%} of pixels covered")
for k, p in enumerate(scene.placements):
    px = int((img.instance == k).sum())
    depth = img.depth[img.instance == k]
    rng = f"{depth.min():.2f}-{depth.max():.2f} m" if px else "hidden"
    print(f"  [{k}] {p.object_id:<24} {px:>6} px  depth {rng}")

out = Path("out/overlay_demo")
bundle = export_overlay_asset(img, scene, out)
print(f"\noverlay bundle -> {bundle.directory}")
for name in sorted(bundle.metadata["files"].values()):
    print(f"  {name}")
print(f"table height in metadata: {bundle.metadata['table_height']} m")

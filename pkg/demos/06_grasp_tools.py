"""Grasp utilities: downsampling, frame transforms, top-down fallback.

A synthetic 100-grasp set is thinned with farthest-point sampling so the
kept grasps spread over the object, transformed into the robot base frame
at a scene placement, and compared with the PCA top-down fallback grasp
computed straight from a point cloud.
"""

import numpy as np

from sceneforge.fixtures import box_mesh, make_grasp_set
from sceneforge.geometry import PointCloud, Pose, rotation_z, sample_surface_points
from sceneforge.grasps import downsample_grasps, grasp_to_base_frame, top_down_grasp

mesh = box_mesh(0.10, 0.04, 0.12, "demo_box")
grasps = make_grasp_set(mesh, n=100, seed=3)
print(f"offline set: {len(grasps)} grasps around {grasps.object_id!r}")

thin = downsample_grasps(grasps, 12)
spread = np.linalg.norm(
    thin.translations()[:, None] - thin.translations()[None, :], axis=2
)
print(f"farthest-point kept 12; min pairwise spacing {spread[spread > 0].min():.3f} m")

object_pose = Pose(rotation_z(0.6), np.array([0.75, -0.1, 0.805]))
base_grasp = grasp_to_base_frame(thin.grasps[0], object_pose)
print(f"first grasp in base frame: t = {base_grasp.translation.round(3)}")

cloud = PointCloud(object_pose.transform(sample_surface_points(mesh, 400, seed=1).points))
td = top_down_grasp(cloud)
closing = tuple(td.pose.rotation[:, 0].round(3).tolist())
print(f"\ntop-down fallback: closing axis {closing}, width {td.width * 100:.1f} cm")
print(f"gripper hovers at {td.pose.translation.round(3)} (standoff {td.standoff} m)")

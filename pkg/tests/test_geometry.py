import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from sceneforge.errors import GeometryError, ParseError
from sceneforge.fixtures import box_mesh, cylinder_mesh
from sceneforge.geometry import (
    PointCloud,
    Pose,
    TriMesh,
    compute_stable_poses,
    farthest_point_sample,
    load_mesh,
    load_stable_poses,
    matrix_to_quat,
    mesh_center_of_mass,
    oriented_bbox_xy,
    pca_xy,
    quat_to_matrix,
    rotation_z,
    sample_surface_points,
    save_stable_poses,
)

CUBE_OBJ = """\
o cube
v -0.5 -0.5 -0.5
v 0.5 -0.5 -0.5
v 0.5 0.5 -0.5
v -0.5 0.5 -0.5
v -0.5 -0.5 0.5
v 0.5 -0.5 0.5
v 0.5 0.5 0.5
v -0.5 0.5 0.5
f 1 3 2
f 1 4 3
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 3 4 8
f 3 8 7
f 1 5 8
f 1 8 4
f 2 3 7
f 2 7 6
"""


def random_rotation(rng):
    q = rng.normal(size=4)
    return quat_to_matrix(q / np.linalg.norm(q))


# ---------------------------------------------------------------------------
# mesh loading


class TestLoadMesh:
    def test_cube_fixture_counts(self, tmp_path):
        path = tmp_path / "cube.obj"
        path.write_text(CUBE_OBJ)
        mesh = load_mesh(path)
        assert mesh.num_vertices == 8
        assert mesh.num_faces == 12
        assert mesh.name == "cube"

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.obj"
        path.write_text("")
        with pytest.raises(ParseError):
            load_mesh(path)

    def test_out_of_range_face_index(self, tmp_path):
        path = tmp_path / "bad.obj"
        # last face references vertex 9 of an 8-vertex mesh
        path.write_text(CUBE_OBJ.replace("f 2 7 6", "f 2 7 9"))
        with pytest.raises(ParseError, match="9"):
            load_mesh(path)

    def test_nonfinite_coordinate(self, tmp_path):
        path = tmp_path / "nan.obj"
        path.write_text("v 0 0 nan\nv 0 1 0\nv 1 0 0\nf 1 2 3\n")
        with pytest.raises(ParseError):
            load_mesh(path)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_mesh(tmp_path / "does_not_exist.obj")

    def test_face_index_slash_suffixes(self, tmp_path):
        path = tmp_path / "slash.obj"
        path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1/1 2/2/2 3/3/3\n")
        mesh = load_mesh(path)
        assert mesh.num_faces == 1

    def test_trimesh_invariants(self):
        with pytest.raises(ValueError):
            TriMesh(np.zeros((3, 3)), [[0, 1, 3]])
        with pytest.raises(ValueError):
            TriMesh([[0, 0, np.inf], [0, 1, 0], [1, 0, 0]], [[0, 1, 2]])


# ---------------------------------------------------------------------------
# stable poses


def support_validator(mesh, com, pose):
    """Independent COM-in-support check: rotate the mesh, take the lowest
    vertices as the support set, and require the projected COM strictly
    inside their 2D hull.

    Faces merged at up to 0.1 degree are not exactly planar, so support
    membership uses a diameter-scaled height tolerance.
    """
    rotated = mesh.vertices @ pose.rotation.T
    diameter = float(np.linalg.norm(np.ptp(rotated, axis=0)))
    tol = diameter * math.sin(math.radians(0.1)) + 1e-9
    zmin = rotated[:, 2].min()
    support = rotated[rotated[:, 2] <= zmin + tol][:, :2]
    if len(support) < 3:
        return False
    com2d = (np.asarray(com) @ pose.rotation.T)[:2]
    hull = ConvexHull(support)
    poly = support[hull.vertices]  # counterclockwise
    k = len(poly)
    dists = []
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        edge = q - p
        cross = edge[0] * (com2d[1] - p[1]) - edge[1] * (com2d[0] - p[0])
        dists.append(cross / np.linalg.norm(edge))
    return min(dists) > 0


class TestStablePoses:
    def test_unit_cube_six_equal_poses(self):
        cube = box_mesh(1, 1, 1, "cube")
        poses = compute_stable_poses(cube)
        assert len(poses) == 6
        for p in poses:
            assert p.probability == pytest.approx(1 / 6, abs=1e-6)
            assert p.rest_height == pytest.approx(0.5, abs=1e-9)

    def test_plate_top_two_poses_equal_and_largest(self):
        plate = box_mesh(0.10, 0.10, 0.01, "plate")
        poses = compute_stable_poses(plate)
        # oracle: every hull face passes the COM test for a box, so 6 poses
        assert len(poses) == 6
        assert poses[0].probability == pytest.approx(poses[1].probability, abs=1e-9)
        assert poses[0].probability > poses[2].probability
        assert poses[0].rest_height == pytest.approx(0.005, abs=1e-9)

    def test_every_library_object_has_a_pose(self, object_models):
        assert len(object_models) == 16
        for obj in object_models:
            assert len(obj.stable_poses) >= 1

    def test_probabilities_normalized(self, object_models):
        for obj in object_models:
            total = sum(p.probability for p in obj.stable_poses)
            assert total == pytest.approx(1.0, abs=1e-6)

    def test_com_in_support_for_library(self, object_models, object_library):
        for obj in object_models:
            com = mesh_center_of_mass(object_library[obj.object_id])
            for pose in obj.stable_poses:
                assert support_validator(obj.mesh, com, pose), obj.object_id

    def test_rotation_invariance(self):
        mesh = box_mesh(0.08, 0.05, 0.12, "box")
        base = compute_stable_poses(mesh)
        rng = np.random.default_rng(3)
        for _ in range(5):
            rot = random_rotation(rng)
            rotated = TriMesh(mesh.vertices @ rot.T, mesh.faces, "rot")
            got = compute_stable_poses(rotated)
            a = sorted((round(p.probability, 9), round(p.rest_height, 9)) for p in base)
            b = sorted((round(p.probability, 9), round(p.rest_height, 9)) for p in got)
            assert len(a) == len(b)
            for (pa, ha), (pb, hb) in zip(a, b):
                assert pa == pytest.approx(pb, abs=1e-6)
                assert ha == pytest.approx(hb, abs=1e-6)

    def test_degenerate_hull_rejected(self):
        flat = TriMesh(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]],
            [[0, 1, 2], [1, 3, 2]],
        )
        with pytest.raises(GeometryError):
            compute_stable_poses(flat, com=(0.5, 0.5, 0.0))

    def test_zero_volume_mesh_needs_explicit_com(self):
        flat = TriMesh(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]],
            [[0, 1, 2], [1, 3, 2]],
        )
        with pytest.raises(GeometryError):
            mesh_center_of_mass(flat)

    def test_random_convex_meshes_pass_support_validator(self):
        rng = np.random.default_rng(42)
        for trial in range(100):
            pts = rng.normal(size=(rng.integers(8, 30), 3)) * rng.uniform(
                0.02, 0.1, size=3
            )
            hull = ConvexHull(pts)
            mesh = TriMesh(pts, hull.simplices, f"random-{trial}")
            com = pts[hull.vertices].mean(axis=0)  # interior point
            poses = compute_stable_poses(mesh, com=com)
            for pose in poses:
                assert support_validator(mesh, com, pose)

    def test_pose_file_round_trip(self, tmp_path):
        poses = compute_stable_poses(box_mesh(0.1, 0.06, 0.04))
        path = tmp_path / "poses.txt"
        save_stable_poses(path, poses)
        loaded = load_stable_poses(path)
        assert len(loaded) == len(poses)
        for a, b in zip(poses, loaded):
            assert np.array_equal(a.rotation, b.rotation)
            assert a.rest_height == b.rest_height
            assert a.probability == b.probability


# ---------------------------------------------------------------------------
# center of mass


def test_center_of_mass_offset_box():
    mesh = box_mesh(0.2, 0.1, 0.3)
    shifted = TriMesh(mesh.vertices + np.array([1.0, -2.0, 0.5]), mesh.faces)
    com = mesh_center_of_mass(shifted)
    assert com == pytest.approx([1.0, -2.0, 0.5], abs=1e-12)


# ---------------------------------------------------------------------------
# planar PCA


def box_cloud(sx, sy, nx=21, ny=9):
    xs = np.linspace(-sx / 2, sx / 2, nx)
    ys = np.linspace(-sy / 2, sy / 2, ny)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(gx.size)])
    return PointCloud(pts)


class TestPcaXy:
    def test_axis_aligned_box(self):
        pca = pca_xy(box_cloud(0.10, 0.04))
        assert pca.major == pytest.approx([1.0, 0.0], abs=1e-9)
        assert pca.minor == pytest.approx([0.0, 1.0], abs=1e-9)
        assert pca.extents[0] == pytest.approx(0.05, abs=1e-12)
        assert pca.extents[1] == pytest.approx(0.02, abs=1e-12)

    def test_rotation_equivariance_30_degrees(self):
        cloud = box_cloud(0.10, 0.04)
        base = pca_xy(cloud)
        rot = rotation_z(math.radians(30))
        rotated = PointCloud(cloud.points @ rot.T)
        got = pca_xy(rotated)
        expected_major = rot[:2, :2] @ base.major
        assert got.major == pytest.approx(expected_major, abs=1e-6)
        assert got.extents[0] == pytest.approx(base.extents[0], abs=1e-9)
        assert got.extents[1] == pytest.approx(base.extents[1], abs=1e-9)

    def test_two_point_collinear(self):
        pca = pca_xy(PointCloud([[0, 0, 0], [1, 0, 0]]))
        assert pca.major == pytest.approx([1.0, 0.0], abs=1e-12)
        assert pca.extents == pytest.approx((0.5, 0.0), abs=1e-12)

    def test_coincident_points_rejected(self):
        with pytest.raises(GeometryError):
            pca_xy(PointCloud([[1, 2, 0], [1, 2, 5], [1, 2, -1]]))

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0, 2 * math.pi - 1e-9), st.integers(0, 10_000))
    def test_equivariance_property(self, angle, seed):
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(30, 3)) * np.array([0.08, 0.03, 0.01])
        base = pca_xy(PointCloud(pts))
        rot = rotation_z(angle)
        got = pca_xy(PointCloud(pts @ rot.T))
        rotated_major = rot[:2, :2] @ base.major
        # equal up to the sign convention
        dot = abs(float(rotated_major @ got.major))
        assert dot == pytest.approx(1.0, abs=1e-9)
        assert got.extents[0] == pytest.approx(base.extents[0], abs=1e-9)


# ---------------------------------------------------------------------------
# oriented bounding box


class TestOrientedBbox:
    def test_axis_aligned_matches_aabb(self):
        cloud = box_cloud(0.10, 0.04)
        box = oriented_bbox_xy(cloud)
        assert box.extents == pytest.approx([0.05, 0.02, 0.0], abs=1e-6)
        assert box.center == pytest.approx([0.0, 0.0, 0.0], abs=1e-9)

    def test_rotated_box_area(self):
        cloud = box_cloud(0.10, 0.04)
        rot = rotation_z(math.radians(30))
        rotated = PointCloud(cloud.points @ rot.T)
        box = oriented_bbox_xy(rotated)
        obb_area = 4 * box.extents[0] * box.extents[1]
        xy = rotated.points[:, :2]
        aabb = np.ptp(xy, axis=0)
        assert obb_area <= aabb[0] * aabb[1] + 1e-12
        assert obb_area == pytest.approx(0.10 * 0.04, rel=1e-6)

    def test_single_point_rejected(self):
        with pytest.raises(GeometryError):
            oriented_bbox_xy(PointCloud([[1, 2, 3]]))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000))
    def test_containment_property(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(rng.integers(3, 40), 3))
        if np.ptp(pts[:, :2], axis=0).max() < 1e-9:
            return
        box = oriented_bbox_xy(PointCloud(pts))
        assert box.contains(pts).all()


# ---------------------------------------------------------------------------
# farthest point sampling


def greedy_fps_oracle(points, n, start):
    """Exhaustive evaluation of the greedy max-min rule."""
    pts = np.asarray(points, dtype=float)
    sel = [start]
    while len(sel) < min(n, len(pts)):
        best, best_d = None, -1.0
        for i in range(len(pts)):
            if i in sel:
                continue
            d = min(float(np.linalg.norm(pts[i] - pts[j])) for j in sel)
            if d > best_d:  # strict: keeps the lowest index on ties
                best_d, best = d, i
        sel.append(best)
    return sel


class TestFarthestPointSample:
    def test_collinear_ten_points(self):
        pts = [[float(x), 0.0, 0.0] for x in range(10)]
        assert farthest_point_sample(pts, 3, start=0) == [0, 9, 4]
        assert farthest_point_sample(pts, 3, start=0) == greedy_fps_oracle(pts, 3, 0)

    def test_n_equals_count_returns_permutation(self):
        rng = np.random.default_rng(0)
        pts = rng.normal(size=(12, 3))
        idx = farthest_point_sample(pts, 12, start=4)
        assert sorted(idx) == list(range(12))
        assert idx[0] == 4

    def test_n_exceeding_count(self):
        pts = np.eye(3)
        assert sorted(farthest_point_sample(pts, 99, start=0)) == [0, 1, 2]

    def test_two_clusters(self):
        rng = np.random.default_rng(1)
        a = rng.normal(scale=0.01, size=(10, 3))
        b = rng.normal(scale=0.01, size=(10, 3)) + np.array([1.0, 0, 0])
        pts = np.vstack([a, b])
        idx = farthest_point_sample(pts, 2, start=3)
        assert idx[0] == 3
        assert idx[1] >= 10  # second point in cluster B
        # brute-force max-min check
        dists = np.linalg.norm(pts - pts[3], axis=1)
        assert dists[idx[1]] == dists.max()

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            farthest_point_sample(np.zeros((0, 3)), 1, 0)
        with pytest.raises(ValueError):
            farthest_point_sample(np.zeros((4, 3)), 1, start=7)

    def test_matches_oracle_on_random_clouds(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            pts = rng.normal(size=(rng.integers(5, 25), 3))
            n = int(rng.integers(1, len(pts) + 1))
            start = int(rng.integers(len(pts)))
            assert farthest_point_sample(pts, n, start) == greedy_fps_oracle(
                pts, n, start
            )

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000), st.integers(2, 60))
    def test_two_sample_optimality(self, seed, count):
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(count, 3))
        start = int(rng.integers(count))
        idx = farthest_point_sample(pts, 2, start)
        dists = np.linalg.norm(pts - pts[start], axis=1)
        assert dists[idx[1]] == dists.max()

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_min_distance_monotonicity(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.normal(size=(20, 3))

        def min_pairwise(idx):
            sel = pts[idx]
            d = np.linalg.norm(sel[:, None] - sel[None, :], axis=2)
            return d[np.triu_indices(len(idx), 1)].min()

        prev = math.inf
        for n in range(2, 12):
            idx = farthest_point_sample(pts, n, start=0)
            cur = min_pairwise(idx)
            assert cur <= prev + 1e-12
            prev = cur


# ---------------------------------------------------------------------------
# pose and quaternion plumbing


class TestPose:
    def test_compose_matches_homogeneous_product(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a = Pose(random_rotation(rng), rng.normal(size=3))
            b = Pose(random_rotation(rng), rng.normal(size=3))
            ab = a @ b
            ha = np.eye(4)
            ha[:3, :3], ha[:3, 3] = a.rotation, a.translation
            hb = np.eye(4)
            hb[:3, :3], hb[:3, 3] = b.rotation, b.translation
            hab = ha @ hb
            assert np.allclose(ab.rotation, hab[:3, :3], atol=1e-12)
            assert np.allclose(ab.translation, hab[:3, 3], atol=1e-12)

    def test_inverse(self):
        rng = np.random.default_rng(6)
        p = Pose(random_rotation(rng), rng.normal(size=3))
        ident = p @ p.inverse()
        assert np.allclose(ident.rotation, np.eye(3), atol=1e-12)
        assert np.allclose(ident.translation, 0, atol=1e-12)

    def test_quaternion_round_trip(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            rot = random_rotation(rng)
            again = quat_to_matrix(matrix_to_quat(rot))
            assert np.allclose(rot, again, atol=1e-9)

    def test_non_orthonormal_rejected(self):
        with pytest.raises(ValueError):
            Pose(np.eye(3) * 1.01, np.zeros(3))


def test_sample_surface_points_deterministic():
    mesh = cylinder_mesh(0.04, 0.1)
    a = sample_surface_points(mesh, 256, seed=3)
    b = sample_surface_points(mesh, 256, seed=3)
    assert np.array_equal(a.points, b.points)
    # samples lie within the bounding cylinder
    r = np.hypot(a.points[:, 0], a.points[:, 1])
    assert (r <= 0.04 + 1e-9).all()
    assert (np.abs(a.points[:, 2]) <= 0.05 + 1e-9).all()

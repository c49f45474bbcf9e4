"""Mesh ingestion and the geometric primitives used by every other module.

Covers triangle meshes, statically stable resting poses, planar PCA,
oriented bounding boxes, and farthest-point sampling.  Everything here is a
pure function of its inputs; all value types freeze their arrays so they are
safe to share across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import GeometryError, ParseError

ORTHONORMAL_TOL = 1e-9
# Hull facets closer than this dihedral angle are treated as one flat face.
COPLANAR_MERGE_ANGLE_DEG = 0.1
# Resting is only accepted when the COM projects at least this far (meters)
# inside every support-polygon edge; balancing on an edge is unsafe on a
# real table.
COM_SUPPORT_MARGIN = 1e-3


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a)  # private copy so no outside reference can mutate it
    out.flags.writeable = False
    return out


def _require_finite(a: np.ndarray, what: str) -> None:
    if not np.isfinite(a).all():
        raise ValueError(f"{what} must be finite")


@dataclass(frozen=True)
class TriMesh:
    """Triangle mesh with vertices in meters, in the object's own frame."""

    vertices: np.ndarray  # (n, 3) float
    faces: np.ndarray  # (m, 3) int
    name: str = ""

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        f = np.asarray(self.faces, dtype=int).reshape(-1, 3)
        _require_finite(v, "mesh vertices")
        if f.size and (f.min() < 0 or f.max() >= len(v)):
            raise ValueError(
                f"face index out of range: max {f.max()} for {len(v)} vertices"
            )
        object.__setattr__(self, "vertices", _frozen(v))
        object.__setattr__(self, "faces", _frozen(f))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def transformed(self, pose: "Pose") -> np.ndarray:
        """Vertices mapped through ``pose`` (does not mutate the mesh)."""
        return pose.transform(self.vertices)


@dataclass(frozen=True)
class Pose:
    """Rigid transform: ``p_out = rotation @ p_in + translation``."""

    rotation: np.ndarray  # (3, 3)
    translation: np.ndarray  # (3,)

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        _require_finite(r, "rotation")
        _require_finite(t, "translation")
        err = np.abs(r.T @ r - np.eye(3)).max()
        if err > ORTHONORMAL_TOL:
            raise ValueError(f"rotation is not orthonormal (error {err:.3e})")
        if np.linalg.det(r) < 0:
            raise ValueError("rotation must be proper (det = +1)")
        object.__setattr__(self, "rotation", _frozen(r))
        object.__setattr__(self, "translation", _frozen(t))

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.eye(3), np.zeros(3))

    def transform(self, points: np.ndarray) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        return p @ self.rotation.T + self.translation

    def compose(self, other: "Pose") -> "Pose":
        """``self @ other``: apply ``other`` first, then ``self``."""
        return Pose(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def __matmul__(self, other: "Pose") -> "Pose":
        return self.compose(other)

    def inverse(self) -> "Pose":
        rt = self.rotation.T
        return Pose(rt, -rt @ self.translation)

    def as_quaternion(self) -> np.ndarray:
        return matrix_to_quat(self.rotation)

    @staticmethod
    def from_quaternion(quat: Sequence[float], translation: Sequence[float]) -> "Pose":
        return Pose(quat_to_matrix(quat), np.asarray(translation, dtype=float))


@dataclass(frozen=True)
class StablePose:
    """One statically stable resting orientation of an object.

    ``rotation`` maps the object frame into a frame whose supporting face
    lies on the plane z = -rest_height; the object origin sits rest_height
    above the table.
    """

    rotation: np.ndarray  # (3, 3)
    rest_height: float
    probability: float

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        err = np.abs(r.T @ r - np.eye(3)).max()
        if err > ORTHONORMAL_TOL or abs(np.linalg.det(r) - 1.0) > ORTHONORMAL_TOL:
            raise ValueError("stable pose rotation must be a proper rotation")
        if not 0.0 <= self.probability <= 1.0 + 1e-12:
            raise ValueError(f"probability {self.probability} outside [0, 1]")
        object.__setattr__(self, "rotation", _frozen(r))


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # (n, 3)

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if len(p) == 0:
            raise ValueError("point cloud is empty")
        _require_finite(p, "point cloud")
        object.__setattr__(self, "points", _frozen(p))

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class OrientedBox:
    """Box aligned with two horizontal axes plus world Z.

    ``axes`` rows are [major, minor, z]; ``extents`` are half-lengths.
    """

    center: np.ndarray  # (3,)
    axes: np.ndarray  # (3, 3) rows are unit vectors
    extents: np.ndarray  # (3,) half-lengths

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(3)
        a = np.asarray(self.axes, dtype=float).reshape(3, 3)
        e = np.asarray(self.extents, dtype=float).reshape(3)
        if np.abs(a @ a.T - np.eye(3)).max() > 1e-6:
            raise ValueError("box axes must be orthonormal")
        if (e < 0).any():
            raise ValueError("box extents must be non-negative")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "axes", _frozen(a))
        object.__setattr__(self, "extents", _frozen(e))

    def contains(self, points: np.ndarray, slack: float = 1e-9) -> np.ndarray:
        local = (np.asarray(points, dtype=float) - self.center) @ self.axes.T
        return (np.abs(local) <= self.extents + slack).all(axis=-1)

    def corners_xy(self) -> np.ndarray:
        """The four corners of the horizontal footprint, (4, 2)."""
        u = self.axes[0, :2] * self.extents[0]
        v = self.axes[1, :2] * self.extents[1]
        c = self.center[:2]
        return np.array([c + u + v, c + u - v, c - u - v, c - u + v])


# ---------------------------------------------------------------------------
# quaternions (x, y, z, w convention, canonical sign w >= 0)


def quat_to_matrix(quat: Sequence[float]) -> np.ndarray:
    q = np.asarray(quat, dtype=float).reshape(4)
    n = np.linalg.norm(q)
    if n < 1e-12:
        raise ValueError("zero-norm quaternion")
    x, y, z, w = q / n
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def matrix_to_quat(rotation: np.ndarray) -> np.ndarray:
    """Rotation matrix -> unit quaternion (x, y, z, w), w >= 0."""
    r = np.asarray(rotation, dtype=float).reshape(3, 3)
    t = np.trace(r)
    if t > 0:
        s = math.sqrt(t + 1.0) * 2
        w = 0.25 * s
        x = (r[2, 1] - r[1, 2]) / s
        y = (r[0, 2] - r[2, 0]) / s
        z = (r[1, 0] - r[0, 1]) / s
    else:
        i = int(np.argmax(np.diag(r)))
        if i == 0:
            s = math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2]) * 2
            x = 0.25 * s
            y = (r[0, 1] + r[1, 0]) / s
            z = (r[0, 2] + r[2, 0]) / s
            w = (r[2, 1] - r[1, 2]) / s
        elif i == 1:
            s = math.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2]) * 2
            x = (r[0, 1] + r[1, 0]) / s
            y = 0.25 * s
            z = (r[1, 2] + r[2, 1]) / s
            w = (r[0, 2] - r[2, 0]) / s
        else:
            s = math.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1]) * 2
            x = (r[0, 2] + r[2, 0]) / s
            y = (r[1, 2] + r[2, 1]) / s
            z = 0.25 * s
            w = (r[1, 0] - r[0, 1]) / s
    q = np.array([x, y, z, w])
    q /= np.linalg.norm(q)
    # Canonical sign so serialization is byte-stable.
    nz = np.nonzero(np.abs(q) > 1e-12)[0]
    if len(nz) and q[3] == 0.0 and q[nz[0]] < 0:
        q = -q
    elif q[3] < 0:
        q = -q
    return q


def rotation_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


# ---------------------------------------------------------------------------
# mesh I/O (Wavefront-style v/f records, meters)


def load_mesh(path: str | Path) -> TriMesh:
    """Parse a Wavefront-style triangle mesh (``v``/``f`` records).

    Face indices are 1-based; ``f`` entries may carry ``/vt/vn`` suffixes,
    only the vertex index is used.  Raises :class:`ParseError` naming the
    offending line for unreadable files, zero faces, bad indices, or
    non-finite coordinates.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"cannot read mesh file {path}: {e}") from e

    vertices: list[list[float]] = []
    faces: list[list[int]] = []
    name = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        tag = tokens[0]
        if tag == "v":
            if len(tokens) < 4:
                raise ParseError(f"{path}:{lineno}: vertex needs 3 coordinates")
            try:
                xyz = [float(t) for t in tokens[1:4]]
            except ValueError as e:
                raise ParseError(f"{path}:{lineno}: bad vertex coordinate") from e
            if not all(math.isfinite(c) for c in xyz):
                raise ParseError(f"{path}:{lineno}: non-finite vertex coordinate")
            vertices.append(xyz)
        elif tag == "f":
            if len(tokens) != 4:
                raise ParseError(
                    f"{path}:{lineno}: only triangle faces are supported "
                    f"(got {len(tokens) - 1} vertices)"
                )
            idx = []
            for t in tokens[1:4]:
                head = t.split("/")[0]
                try:
                    i = int(head)
                except ValueError as e:
                    raise ParseError(f"{path}:{lineno}: bad face index {head!r}") from e
                if i < 0:
                    i = len(vertices) + 1 + i  # relative indexing
                idx.append(i - 1)
            faces.append(idx)
        elif tag in ("o", "g") and len(tokens) > 1 and not name:
            name = tokens[1]
        # other records (vn, vt, mtllib, usemtl, s) are ignored

    if not faces:
        raise ParseError(f"{path}: mesh has no faces")
    nv = len(vertices)
    for fi, tri in enumerate(faces):
        for i in tri:
            if not 0 <= i < nv:
                raise ParseError(
                    f"{path}: face {fi} references vertex {i + 1} "
                    f"but only {nv} vertices exist"
                )
    return TriMesh(np.array(vertices), np.array(faces), name=name or path.stem)


def save_mesh(path: str | Path, mesh: TriMesh) -> None:
    lines = [f"o {mesh.name}"] if mesh.name else []
    lines += [
        f"v {float(v[0])!r} {float(v[1])!r} {float(v[2])!r}" for v in mesh.vertices
    ]
    lines += [f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}" for f in mesh.faces]
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# stable poses


def mesh_center_of_mass(mesh: TriMesh) -> np.ndarray:
    """Uniform-density COM from the signed tetrahedron decomposition."""
    a = mesh.vertices[mesh.faces[:, 0]]
    b = mesh.vertices[mesh.faces[:, 1]]
    c = mesh.vertices[mesh.faces[:, 2]]
    vols = np.einsum("ij,ij->i", a, np.cross(b, c)) / 6.0
    total = vols.sum()
    if abs(total) < 1e-12:
        raise GeometryError(
            f"mesh {mesh.name!r} has zero enclosed volume; pass an explicit COM"
        )
    centroids = (a + b + c) / 4.0  # fourth tet vertex is the origin
    return (centroids * vols[:, None]).sum(axis=0) / total


def _rotation_to_minus_z(normal: np.ndarray) -> np.ndarray:
    """Minimal rotation taking ``normal`` to (0, 0, -1)."""
    target = np.array([0.0, 0.0, -1.0])
    c = float(normal @ target)
    axis = np.cross(normal, target)
    s = np.linalg.norm(axis)
    if s < 1e-12:
        if c > 0:
            return np.eye(3)
        # normal straight up: flip about X
        return np.diag([1.0, -1.0, -1.0])
    k = axis / s
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + kx * s + kx @ kx * (1.0 - c)


def _plane_basis(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    e = np.eye(3)[int(np.argmin(np.abs(normal)))]
    u = np.cross(normal, e)
    u /= np.linalg.norm(u)
    return u, np.cross(normal, u)


def _solid_angle_of_polygon(apex: np.ndarray, polygon: np.ndarray) -> float:
    """Solid angle subtended at ``apex`` by a planar convex polygon (3D verts)."""
    total = 0.0
    p0 = polygon[0]
    for i in range(1, len(polygon) - 1):
        a = p0 - apex
        b = polygon[i] - apex
        c = polygon[i + 1] - apex
        la, lb, lc = np.linalg.norm(a), np.linalg.norm(b), np.linalg.norm(c)
        num = abs(float(a @ np.cross(b, c)))
        den = la * lb * lc + (a @ b) * lc + (a @ c) * lb + (b @ c) * la
        total += 2.0 * math.atan2(num, den)
    return total


class _SupportFace(NamedTuple):
    normal: np.ndarray  # outward unit normal
    plane_d: float  # n . x for points on the face
    polygon3d: np.ndarray  # (k, 3) convex polygon vertices


def _merged_hull_faces(hull: ConvexHull, merge_angle_deg: float) -> list[_SupportFace]:
    normals = hull.equations[:, :3]
    cos_tol = math.cos(math.radians(merge_angle_deg))
    groups: list[list[int]] = []
    reps: list[np.ndarray] = []
    for fi in range(len(hull.simplices)):
        n = normals[fi]
        for gi, rep in enumerate(reps):
            if float(n @ rep) >= cos_tol:
                groups[gi].append(fi)
                break
        else:
            groups.append([fi])
            reps.append(n)

    faces = []
    for members in groups:
        n = normals[members].sum(axis=0)
        n /= np.linalg.norm(n)
        vert_idx = np.unique(hull.simplices[members])
        verts = hull.points[vert_idx]
        plane_d = float(np.mean(verts @ n))
        u, v = _plane_basis(n)
        flat = np.column_stack([verts @ u, verts @ v])
        if len(flat) < 3:
            continue
        try:
            poly = ConvexHull(flat)
        except QhullError:
            continue  # degenerate sliver, cannot support anything
        faces.append(_SupportFace(n, plane_d, verts[poly.vertices]))
    return faces


def _point_in_polygon_margin(point2d: np.ndarray, polygon2d: np.ndarray) -> float:
    """Min signed distance from the point to the CCW polygon's edges (inside > 0)."""
    margin = math.inf
    k = len(polygon2d)
    for i in range(k):
        p, q = polygon2d[i], polygon2d[(i + 1) % k]
        edge = q - p
        length = np.linalg.norm(edge)
        if length < 1e-15:
            continue
        cross = edge[0] * (point2d[1] - p[1]) - edge[1] * (point2d[0] - p[0])
        margin = min(margin, cross / length)
    return margin


def compute_stable_poses(
    mesh: TriMesh,
    com: Sequence[float] | str = "uniform-density",
    *,
    merge_angle_deg: float = COPLANAR_MERGE_ANGLE_DEG,
    com_margin: float = COM_SUPPORT_MARGIN,
) -> list[StablePose]:
    """Statically stable resting orientations of a mesh on a plane.

    A convex-hull face yields a stable pose when the center of mass projects
    strictly inside the face's support polygon (at least ``com_margin`` from
    every edge).  Each accepted pose's probability is proportional to the
    solid angle its face subtends at the COM, a quasi-static proxy for how
    likely the object is to settle on that face; probabilities are
    normalized to sum to 1.  Returned poses are sorted by descending
    probability.
    """
    if isinstance(com, str):
        if com != "uniform-density":
            raise ValueError(f"unknown COM mode {com!r}")
        com_point = mesh_center_of_mass(mesh)
    else:
        com_point = np.asarray(com, dtype=float).reshape(3)

    try:
        hull = ConvexHull(mesh.vertices)
    except (QhullError, ValueError) as e:
        raise GeometryError(f"degenerate convex hull for mesh {mesh.name!r}: {e}") from e

    accepted: list[tuple[float, _SupportFace]] = []
    for face in _merged_hull_faces(hull, merge_angle_deg):
        u, v = _plane_basis(face.normal)
        poly2d = face.polygon3d @ np.column_stack([u, v])
        com2d = com_point @ np.column_stack([u, v])
        if _point_in_polygon_margin(com2d, poly2d) < com_margin:
            continue
        omega = _solid_angle_of_polygon(com_point, face.polygon3d)
        accepted.append((omega, face))

    if not accepted:
        return []

    total = sum(w for w, _ in accepted)
    poses = []
    for omega, face in accepted:
        rot = _rotation_to_minus_z(face.normal)
        poses.append(
            StablePose(
                rotation=rot,
                rest_height=face.plane_d,
                probability=omega / total,
            )
        )
    poses.sort(key=lambda p: -p.probability)
    return poses


def save_stable_poses(path: str | Path, poses: Sequence[StablePose]) -> None:
    """One text record per pose: 9 row-major rotation floats, rest height,
    probability."""
    lines = ["# r00 r01 r02 r10 r11 r12 r20 r21 r22 rest_height probability"]
    for p in poses:
        vals = [*p.rotation.ravel(), p.rest_height, p.probability]
        lines.append(" ".join(repr(float(v)) for v in vals))
    Path(path).write_text("\n".join(lines) + "\n")


def load_stable_poses(path: str | Path) -> list[StablePose]:
    poses = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 11:
            raise ParseError(f"{path}:{lineno}: expected 11 fields, got {len(parts)}")
        try:
            vals = [float(t) for t in parts]
        except ValueError as e:
            raise ParseError(f"{path}:{lineno}: bad float") from e
        poses.append(
            StablePose(np.array(vals[:9]).reshape(3, 3), vals[9], vals[10])
        )
    return poses


# ---------------------------------------------------------------------------
# planar PCA and oriented boxes


class PlanarPca(NamedTuple):
    major: np.ndarray  # unit 2D vector
    minor: np.ndarray  # unit 2D vector
    extents: tuple[float, float]  # max |projection| along (major, minor)


def _fix_axis_sign(axis: np.ndarray) -> np.ndarray:
    # Flip so the larger-magnitude component is positive; ties prefer +X.
    if abs(axis[0]) > abs(axis[1]):
        keep = axis[0] > 0
    elif abs(axis[1]) > abs(axis[0]):
        keep = axis[1] > 0
    else:
        keep = axis[0] > 0
    return axis if keep else -axis


def pca_xy(cloud: PointCloud) -> PlanarPca:
    """Principal axes of the cloud's X-Y footprint.

    Axes are the eigenvectors of the 2x2 covariance (major eigenvalue
    first); extents are the max absolute centered projections.  Sign
    convention: each axis is flipped so its larger-magnitude component is
    positive (ties resolve toward +X), making downstream grasp orientations
    deterministic.
    """
    xy = cloud.points[:, :2]
    if len(xy) < 2 or np.ptp(xy, axis=0).max() < 1e-12:
        raise GeometryError("all points coincide in X-Y; PCA is undefined")
    mean = xy.mean(axis=0)
    centered = xy - mean
    cov = centered.T @ centered / len(xy)
    _, vecs = np.linalg.eigh(cov)  # ascending eigenvalues
    minor = _fix_axis_sign(vecs[:, 0])
    major = _fix_axis_sign(vecs[:, 1])
    ext_major = float(np.abs(centered @ major).max())
    ext_minor = float(np.abs(centered @ minor).max())
    return PlanarPca(major, minor, (ext_major, ext_minor))


def oriented_bbox_xy(cloud: PointCloud) -> OrientedBox:
    """Oriented bounding box from planar PCA axes plus world Z."""
    pca = pca_xy(cloud)
    axes = np.array(
        [
            [pca.major[0], pca.major[1], 0.0],
            [pca.minor[0], pca.minor[1], 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    proj = cloud.points @ axes.T
    lo, hi = proj.min(axis=0), proj.max(axis=0)
    center_local = (lo + hi) / 2.0
    return OrientedBox(
        center=axes.T @ center_local,
        axes=axes,
        extents=(hi - lo) / 2.0,
    )


# ---------------------------------------------------------------------------
# farthest point sampling


def farthest_point_sample(
    points: np.ndarray | Sequence[Sequence[float]], n: int, start: int = 0
) -> list[int]:
    """Greedy farthest-point sampling over 3D points.

    The first index is ``start``; each following index maximizes the minimum
    distance to the already-selected set, ties broken by lowest index.  If
    ``n`` meets or exceeds the point count, all indices are returned in
    selection order.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        raise ValueError("cannot sample from an empty point list")
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= start < len(pts):
        raise ValueError(f"start index {start} out of range for {len(pts)} points")

    n = min(n, len(pts))
    selected = [start]
    dist = np.linalg.norm(pts - pts[start], axis=1)
    dist[start] = -1.0
    while len(selected) < n:
        nxt = int(np.argmax(dist))  # argmax returns the lowest tying index
        selected.append(nxt)
        dist = np.minimum(dist, np.linalg.norm(pts - pts[nxt], axis=1))
        dist[nxt] = -1.0
    return selected


def sample_surface_points(mesh: TriMesh, n: int, seed: int = 0) -> PointCloud:
    """Deterministic area-weighted surface sampling (uniform per triangle)."""
    a = mesh.vertices[mesh.faces[:, 0]]
    b = mesh.vertices[mesh.faces[:, 1]]
    c = mesh.vertices[mesh.faces[:, 2]]
    areas = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    total = areas.sum()
    if total <= 0:
        raise GeometryError(f"mesh {mesh.name!r} has zero surface area")
    rng = np.random.default_rng(seed)
    tri = rng.choice(len(areas), size=n, p=areas / total)
    r1 = np.sqrt(rng.random(n))
    r2 = rng.random(n)
    pts = (
        a[tri] * (1 - r1)[:, None]
        + b[tri] * (r1 * (1 - r2))[:, None]
        + c[tri] * (r1 * r2)[:, None]
    )
    return PointCloud(pts)

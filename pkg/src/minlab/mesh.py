"""Triangulated patches of immersed surfaces.

A patch is a structured fan-plus-rings triangulation of the parameter
disk |z| <= rho (for the catenoid: rows of a periodic strip |u| <= rho).
Ring spacing is graded by 1/sqrt(lambda), with lambda taken as the
minimum of the conformal factor over the ring, so that ambient edge
lengths track ``target_h`` wherever the surface stays close to the
patch center.  Construction is deterministic: identical inputs yield
bit-identical meshes.

The module also extracts connected components of extrinsic balls
(triangles whose three vertices lie strictly inside the ball, flood
filled through shared edges from the root vertex), integrates ambient
areas, fits area-growth laws, and round-trips meshes through the
``minlab-mesh v1`` text format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import surfaces
from ._kernels import backend
from .errors import ArgumentError, DegenerateError, ResourceError

DEFAULT_VERTEX_CAP = 4_000_000
_GRADING_ANGLES = 64


# ---------------------------------------------------------------------------
# construction helpers


def _ring_lambda_min(spec, t):
    """Minimum conformal factor over the parameter circle |z| = t."""
    if t == 0.0:
        _, _, _, lam = surfaces.evaluate_batch(spec, np.array([0.0]), np.array([0.0]))
        return float(lam[0])
    theta = np.linspace(0.0, 2.0 * math.pi, _GRADING_ANGLES, endpoint=False)
    if spec.kind == "catenoid":
        u = np.full(_GRADING_ANGLES, t)
        v = theta
    else:
        u = t * np.cos(theta)
        v = t * np.sin(theta)
    _, _, _, lam = surfaces.evaluate_batch(spec, u, v)
    return float(lam.min())


def _graded_radii(spec, rho, target_h):
    """Ring radii 0 < t_1 < ... < t_K = rho with dt = h / sqrt(lambda_min)."""
    radii = []
    t = 0.0
    while True:
        dt = target_h / math.sqrt(_ring_lambda_min(spec, t))
        if t + 1.5 * dt >= rho:
            radii.append(rho)
            break
        t += dt
        radii.append(t)
    return np.array(radii)


def _ring_sizes(spec, radii, target_h):
    """Vertex count per ring, targeting parameter-equilateral triangles."""
    sizes = []
    for t in radii:
        dt = target_h / math.sqrt(_ring_lambda_min(spec, float(t)))
        sizes.append(max(6, int(round(2.0 * math.pi * t / dt))))
    return np.array(sizes, dtype=np.int64)


def _band_triangles(start_a, n_a, ang_a, start_b, n_b, ang_b):
    """Triangulate the band between two closed vertex rings.

    Rings are given by their first global vertex index, size, and sorted
    angles in [0, 2pi).  The two circular sequences are merged by angle
    (stable, inner ring first on ties), yielding n_a + n_b triangles with
    consistent orientation.  Vectorized; deterministic.
    """
    ev_ang = np.concatenate([np.append(ang_a[1:], ang_a[0] + 2.0 * math.pi),
                             np.append(ang_b[1:], ang_b[0] + 2.0 * math.pi)])
    ev_tag = np.concatenate([np.zeros(n_a, dtype=np.int8), np.ones(n_b, dtype=np.int8)])
    order = np.argsort(ev_ang, kind="stable")
    tag = ev_tag[order]

    is_a = tag == 0
    a_adv = np.cumsum(is_a)          # advances of A up to and including event
    b_adv = np.cumsum(~is_a)
    a_before = a_adv - is_a          # index of current A vertex at the event
    b_before = b_adv - (~is_a)

    tris = np.empty((n_a + n_b, 3), dtype=np.int64)
    ai = a_before % n_a
    aj = a_adv % n_a
    bi = b_before % n_b
    bj = b_adv % n_b
    # CCW with A the inner ring: A-event (A_i, B_j, A_{i+1}),
    # B-event (A_i, B_j, B_{j+1})
    tris[is_a, 0] = start_a + ai[is_a]
    tris[is_a, 1] = start_b + bi[is_a]
    tris[is_a, 2] = start_a + aj[is_a]
    tris[~is_a, 0] = start_a + ai[~is_a]
    tris[~is_a, 1] = start_b + bi[~is_a]
    tris[~is_a, 2] = start_b + bj[~is_a]
    return tris


def _disk_layout(spec, rho, target_h, vertex_cap):
    radii = _graded_radii(spec, rho, target_h)
    sizes = _ring_sizes(spec, radii, target_h)
    n_vertices = 1 + int(sizes.sum())
    if n_vertices > vertex_cap:
        raise ResourceError(
            f"triangulation needs {n_vertices} vertices, cap is {vertex_cap}",
            required=n_vertices,
            cap=vertex_cap,
        )
    params = np.empty((n_vertices, 2))
    params[0] = 0.0
    angles = []
    starts = np.empty(len(radii), dtype=np.int64)
    at = 1
    for k, (t, n) in enumerate(zip(radii, sizes)):
        offset = 0.5 if (k % 2) else 0.0
        ang = 2.0 * math.pi * (np.arange(n) + offset) / n
        starts[k] = at
        params[at : at + n, 0] = t * np.cos(ang)
        params[at : at + n, 1] = t * np.sin(ang)
        angles.append(ang)
        at += n

    tri_blocks = []
    n0 = int(sizes[0])
    fan = np.empty((n0, 3), dtype=np.int64)
    fan[:, 0] = 0
    fan[:, 1] = starts[0] + np.arange(n0)
    fan[:, 2] = starts[0] + (np.arange(n0) + 1) % n0
    tri_blocks.append(fan)
    for k in range(len(radii) - 1):
        tri_blocks.append(
            _band_triangles(
                int(starts[k]), int(sizes[k]), angles[k],
                int(starts[k + 1]), int(sizes[k + 1]), angles[k + 1],
            )
        )
    return params, np.concatenate(tri_blocks)


def _strip_layout(spec, rho, target_h, vertex_cap):
    """Periodic strip layout for the catenoid: rows at graded u, periodic v."""
    rows = [0.0]
    u = 0.0
    while True:
        du = target_h / math.sqrt(_ring_lambda_min(spec, u))
        if u + 1.5 * du >= rho:
            rows.append(rho)
            break
        u += du
        rows.append(u)
    rows = np.array(rows)
    rows = np.concatenate([-rows[:0:-1], rows])  # symmetric in u

    sizes = []
    for u in rows:
        n = max(8, int(round(2.0 * math.pi * math.cosh(u) / target_h)))
        sizes.append(n)
    sizes = np.array(sizes, dtype=np.int64)
    n_vertices = int(sizes.sum())
    if n_vertices > vertex_cap:
        raise ResourceError(
            f"triangulation needs {n_vertices} vertices, cap is {vertex_cap}",
            required=n_vertices,
            cap=vertex_cap,
        )

    params = np.empty((n_vertices, 2))
    angles = []
    starts = np.empty(len(rows), dtype=np.int64)
    at = 0
    for j, (u, n) in enumerate(zip(rows, sizes)):
        offset = 0.5 if (j % 2) else 0.0
        ang = 2.0 * math.pi * (np.arange(n) + offset) / n
        starts[j] = at
        params[at : at + n, 0] = u
        params[at : at + n, 1] = ang
        angles.append(ang)
        at += n

    tri_blocks = []
    for j in range(len(rows) - 1):
        tri_blocks.append(
            _band_triangles(
                int(starts[j]), int(sizes[j]), angles[j],
                int(starts[j + 1]), int(sizes[j + 1]), angles[j + 1],
            )
        )
    return params, np.concatenate(tri_blocks)


# ---------------------------------------------------------------------------
# mesh


@dataclass
class SurfaceMesh:
    """Immutable triangulated patch with per-vertex jet data."""

    spec: surfaces.ImmersionSpec
    target_h: float
    periodic_v: bool
    params: np.ndarray      # (V, 2) parameter coordinates
    positions: np.ndarray   # (V, 3) ambient coordinates
    lam: np.ndarray         # (V,)  conformal factor
    triangles: np.ndarray   # (T, 3) int32, consistent orientation
    _edge_cache: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for arr in (self.params, self.positions, self.lam, self.triangles):
            arr.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return self.params.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @cached_property
    def origin_vertex(self) -> int:
        """Vertex closest to the image of the parameter origin."""
        base = self.spec.base_point()
        return int(np.argmin(((self.positions - base) ** 2).sum(axis=1)))

    # -- topology ----------------------------------------------------------

    def _edge_tables(self):
        """(edges (E,2), tri_edges (T,3), edge_tri_count (E,), neighbors (T,3))."""
        if self._edge_cache is None:
            tri = self.triangles.astype(np.int64)
            ii = np.concatenate([tri[:, 0], tri[:, 1], tri[:, 2]])
            jj = np.concatenate([tri[:, 1], tri[:, 2], tri[:, 0]])
            lo = np.minimum(ii, jj)
            hi = np.maximum(ii, jj)
            key = lo * self.n_vertices + hi
            uniq, inverse, counts = np.unique(key, return_inverse=True, return_counts=True)
            if counts.max() > 2:
                raise ArgumentError("non-manifold triangulation")
            edges = np.column_stack([uniq // self.n_vertices, uniq % self.n_vertices])
            t = self.n_triangles
            tri_edges = np.column_stack([inverse[:t], inverse[t : 2 * t], inverse[2 * t :]])
            tri_edges = tri_edges.astype(np.int32)

            # neighbor across each local edge: the other triangle sharing it
            flat_eids = tri_edges.ravel()
            order = np.argsort(flat_eids, kind="stable")
            flat_tri = np.repeat(np.arange(t, dtype=np.int32), 3)[order]
            sorted_eids = flat_eids[order]
            owner = np.full((len(edges), 2), -1, dtype=np.int32)
            first = np.searchsorted(sorted_eids, np.arange(len(edges)))
            owner[:, 0] = flat_tri[first]
            second_mask = counts == 2
            owner[second_mask, 1] = flat_tri[first[second_mask] + 1]
            neighbors = np.where(
                owner[tri_edges, 0] == np.arange(t, dtype=np.int32)[:, None],
                owner[tri_edges, 1],
                owner[tri_edges, 0],
            ).astype(np.int32)
            object.__setattr__(self, "_edge_cache", (edges, tri_edges, counts, neighbors))
        return self._edge_cache

    @property
    def edges(self) -> np.ndarray:
        return self._edge_tables()[0]

    @property
    def tri_edges(self) -> np.ndarray:
        return self._edge_tables()[1]

    @property
    def edge_tri_count(self) -> np.ndarray:
        return self._edge_tables()[2]

    @property
    def adjacency(self) -> np.ndarray:
        """(T, 3) neighbor triangle across each local edge, -1 at boundary."""
        return self._edge_tables()[3]

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges) + self.n_triangles

    # -- geometry ----------------------------------------------------------

    def triangle_param_edges(self, tri_indices=None):
        """Per-triangle parameter edge vectors (p1 - p0, p2 - p0).

        For periodic meshes the v-differences are wrapped into [-pi, pi)
        so that seam triangles get their true shape.
        """
        tris = self.triangles if tri_indices is None else self.triangles[tri_indices]
        p = self.params[tris]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        if self.periodic_v:
            two_pi = 2.0 * math.pi
            for e in (e1, e2):
                e[:, 1] = (e[:, 1] + math.pi) % two_pi - math.pi
        return e1, e2

    def param_triangle_areas(self, tri_indices=None) -> np.ndarray:
        e1, e2 = self.triangle_param_edges(tri_indices)
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def ambient_triangle_areas(self) -> np.ndarray:
        p = self.positions[self.triangles]
        c = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
        return 0.5 * np.linalg.norm(c, axis=1)

    def ambient_edge_lengths(self) -> np.ndarray:
        e = self.edges
        return np.linalg.norm(self.positions[e[:, 0]] - self.positions[e[:, 1]], axis=1)

    def edge_length_stats(self) -> dict:
        """Soft [h/4, 4h] ambient edge-length report (not enforced)."""
        lengths = self.ambient_edge_lengths()
        lo, hi = self.target_h / 4.0, 4.0 * self.target_h
        within = float(np.mean((lengths >= lo) & (lengths <= hi)))
        return {
            "min": float(lengths.min()),
            "max": float(lengths.max()),
            "median": float(np.median(lengths)),
            "fraction_within_soft_bounds": within,
        }

    def max_conformal_defect(self) -> float:
        _, du, dv, lam = surfaces.evaluate_batch(self.spec, self.params[:, 0], self.params[:, 1])
        e = (du * du).sum(axis=1)
        g = (dv * dv).sum(axis=1)
        f = (du * dv).sum(axis=1)
        return float((np.maximum(np.abs(e - g), np.abs(f)) / np.maximum(lam, 1e-300)).max())

    def max_minimality_defect(self) -> float:
        fuu, _, fvv = surfaces.second_derivatives_batch(
            self.spec, self.params[:, 0], self.params[:, 1]
        )
        return float(np.linalg.norm(fuu + fvv, axis=1).max())

    # -- subcomplexes --------------------------------------------------------

    def whole(self) -> "Subcomplex":
        return Subcomplex._build(self, np.arange(self.n_triangles, dtype=np.int64))


def triangulate(
    spec: surfaces.ImmersionSpec,
    rho: float,
    target_h: float,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
) -> SurfaceMesh:
    """Structured graded triangulation of the parameter patch of radius rho."""
    if not (rho > 0.0 and math.isfinite(rho)):
        raise ArgumentError("rho must be positive and finite")
    if not (target_h > 0.0 and math.isfinite(target_h)):
        raise ArgumentError("target_h must be positive and finite")

    periodic = spec.kind == "catenoid"
    if periodic:
        params, tris = _strip_layout(spec, rho, target_h, vertex_cap)
        u, v = params[:, 0], params[:, 1]
    else:
        params, tris = _disk_layout(spec, rho, target_h, vertex_cap)
        u, v = params[:, 0], params[:, 1]
    pos, _, _, lam = surfaces.evaluate_batch(spec, u, v)

    tris = np.ascontiguousarray(tris, dtype=np.int32)
    mesh = SurfaceMesh(
        spec=spec,
        target_h=float(target_h),
        periodic_v=periodic,
        params=params,
        positions=pos,
        lam=lam,
        triangles=tris,
    )
    areas = mesh.param_triangle_areas()
    if areas.min() <= 1e-14 * target_h * target_h:
        raise ArgumentError("degenerate parameter triangle produced")
    return mesh


def build_patch(
    spec: surfaces.ImmersionSpec,
    ambient_radius: float,
    target_h: float,
    vertex_cap: int = DEFAULT_VERTEX_CAP,
) -> SurfaceMesh:
    """Triangulate a patch large enough to cover B_R components through the origin."""
    rho = surfaces.param_radius_for_ball(spec, ambient_radius)
    return triangulate(spec, rho, target_h, vertex_cap)


# ---------------------------------------------------------------------------
# subcomplexes and ball components


@dataclass
class Subcomplex:
    """A set of mesh triangles with its induced boundary/interior split."""

    mesh: SurfaceMesh
    tri_indices: np.ndarray       # (t,) sorted triangle ids
    vertices: np.ndarray          # (m,) sorted vertex ids of the subcomplex
    boundary_vertices: np.ndarray
    interior_vertices: np.ndarray
    boundary_edge_mask: np.ndarray  # over global edge ids
    tri_member_mask: np.ndarray     # over global triangle ids

    @classmethod
    def _build(cls, mesh: SurfaceMesh, tri_indices: np.ndarray) -> "Subcomplex":
        tri_indices = np.sort(np.asarray(tri_indices, dtype=np.int64))
        tri_edges = mesh.tri_edges[tri_indices]
        edge_count = np.bincount(tri_edges.ravel(), minlength=len(mesh.edges))
        boundary_edge_mask = edge_count == 1
        verts = np.unique(mesh.triangles[tri_indices])
        bedges = mesh.edges[boundary_edge_mask]
        bverts = np.unique(bedges)
        interior = np.setdiff1d(verts, bverts, assume_unique=True)
        member = np.zeros(mesh.n_triangles, dtype=bool)
        member[tri_indices] = True
        return cls(
            mesh=mesh,
            tri_indices=tri_indices,
            vertices=verts.astype(np.int64),
            boundary_vertices=bverts.astype(np.int64),
            interior_vertices=interior.astype(np.int64),
            boundary_edge_mask=boundary_edge_mask,
            tri_member_mask=member,
        )

    @property
    def n_triangles(self) -> int:
        return len(self.tri_indices)

    def euler_characteristic(self) -> int:
        edge_ids = np.unique(self.mesh.tri_edges[self.tri_indices])
        return len(self.vertices) - len(edge_ids) + len(self.tri_indices)

    def area(self) -> float:
        return surface_area(self.mesh, self.tri_indices)

    def vertex_areas(self) -> np.ndarray:
        """Lumped ambient vertex areas (flat triangle area / 3), length V."""
        areas = _triangle_areas(self.mesh, self.tri_indices) / 3.0
        out = np.zeros(self.mesh.n_vertices)
        np.add.at(out, self.mesh.triangles[self.tri_indices].ravel(), np.repeat(areas, 3))
        return out


@dataclass
class BallComponent(Subcomplex):
    """Connected component of an extrinsic ball through a root vertex."""

    root: int = -1
    radius: float = 0.0


def _triangle_areas(mesh: SurfaceMesh, tri_indices) -> np.ndarray:
    p = mesh.positions[mesh.triangles[tri_indices]]
    c = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    return 0.5 * np.linalg.norm(c, axis=1)


def surface_area(mesh: SurfaceMesh, tri_indices) -> float:
    """Ambient area of a triangle subset (flat-triangle approximation)."""
    tri_indices = np.asarray(tri_indices)
    if tri_indices.size == 0:
        raise ArgumentError("triangle subset must be nonempty")
    return float(_triangle_areas(mesh, tri_indices).sum())


def ball_component(mesh: SurfaceMesh, root: int, radius: float) -> BallComponent:
    """Component of {x : |x - x_root| < radius} through the root vertex.

    Membership is vertex-strict (all three triangle vertices inside) and
    connectivity is through shared edges, seeded by every included
    triangle incident to the root (the continuum component contains a
    full neighborhood of the root).
    """
    if not (radius > 0.0 and math.isfinite(radius)):
        raise ArgumentError("radius must be positive and finite")
    center = mesh.positions[root]
    d2 = ((mesh.positions - center) ** 2).sum(axis=1)
    inside_v = d2 < radius * radius
    tri = mesh.triangles
    inside_t = inside_v[tri[:, 0]] & inside_v[tri[:, 1]] & inside_v[tri[:, 2]]

    incident = np.nonzero((tri == root).any(axis=1) & inside_t)[0]
    if incident.size == 0:
        raise DegenerateError(
            f"radius {radius} is below the mesh resolution at vertex {root}"
        )
    visited = backend.flood_fill(
        mesh.adjacency, inside_t.astype(np.uint8), incident.astype(np.int32)
    )
    tri_idx = np.nonzero(visited)[0]
    comp = Subcomplex._build(mesh, tri_idx)
    # a component boundary edge that is also a patch boundary edge means the
    # ball leaks past the triangulated patch: the component would be truncated
    mesh_boundary = mesh.edge_tri_count == 1
    if np.any(comp.boundary_edge_mask & mesh_boundary):
        raise ArgumentError(
            f"ball of radius {radius} is not covered by the patch "
            f"(component reaches the patch boundary)"
        )
    return BallComponent(
        mesh=mesh,
        tri_indices=comp.tri_indices,
        vertices=comp.vertices,
        boundary_vertices=comp.boundary_vertices,
        interior_vertices=comp.interior_vertices,
        boundary_edge_mask=comp.boundary_edge_mask,
        tri_member_mask=comp.tri_member_mask,
        root=int(root),
        radius=float(radius),
    )


def area_growth_fit(mesh: SurfaceMesh, root: int, radii) -> tuple:
    """(C_a, exponent): max area/r^2 and the log-log least-squares slope."""
    radii = np.asarray(radii, dtype=float)
    if len(radii) < 3:
        raise ArgumentError("area growth fit needs at least 3 radii")
    if np.any(np.diff(radii) <= 0):
        raise ArgumentError("radii must be strictly increasing")
    areas = np.array([ball_component(mesh, root, r).area() for r in radii])
    c_a = float((areas / radii**2).max())
    slope = float(np.polyfit(np.log(radii), np.log(areas), 1)[0])
    return c_a, slope


def convex_hull_check(component: Subcomplex) -> float:
    """Max distance of interior vertices outside the hull of boundary vertices.

    Uses signed facet distances of the 3D convex hull; coplanar boundary
    point sets fall back to a plane fit plus a 2D hull in that plane.
    """
    from scipy.spatial import ConvexHull, QhullError

    pts = component.mesh.positions
    bnd = pts[component.boundary_vertices]
    interior = pts[component.interior_vertices]
    if len(interior) == 0:
        return 0.0
    if len(bnd) < 4:
        raise ArgumentError("need at least 4 boundary points")

    def facet_violation(points, hull_points):
        hull = ConvexHull(hull_points)
        d = points @ hull.equations[:, :-1].T + hull.equations[:, -1]
        return float(np.maximum(d.max(axis=1), 0.0).max())

    try:
        return facet_violation(interior, bnd)
    except QhullError:
        centroid = bnd.mean(axis=0)
        _, _, vt = np.linalg.svd(bnd - centroid, full_matrices=False)
        normal = vt[-1]
        basis = vt[:2]
        off_plane = float(np.abs((interior - centroid) @ normal).max())
        bnd2 = (bnd - centroid) @ basis.T
        int2 = (interior - centroid) @ basis.T
        try:
            hull = ConvexHull(bnd2)
            d = int2 @ hull.equations[:, :-1].T + hull.equations[:, -1]
            in_plane = float(np.maximum(d.max(axis=1), 0.0).max())
        except QhullError:
            in_plane = 0.0
        return max(off_plane, in_plane)


# ---------------------------------------------------------------------------
# text format


def save_mesh(mesh: SurfaceMesh, path) -> None:
    """Write the ``minlab-mesh v1`` line format (exact decimal round trip)."""
    with open(path, "w") as fh:
        fh.write(
            f"minlab-mesh v1 {mesh.spec.kind} {mesh.spec.order} "
            f"{1 if mesh.periodic_v else 0}\n"
        )
        for (u, v), (x, y, z), lam in zip(
            mesh.params.tolist(), mesh.positions.tolist(), mesh.lam.tolist()
        ):
            fh.write(f"v {u!r} {v!r} {x!r} {y!r} {z!r} {lam!r}\n")
        for i, j, k in mesh.triangles.tolist():
            fh.write(f"t {i} {j} {k}\n")


def load_mesh(path) -> SurfaceMesh:
    """Read a ``minlab-mesh v1`` file.

    ``target_h`` is not part of the format; it is reconstructed as the
    median ambient edge length.
    """
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 5 or header[0] != "minlab-mesh" or header[1] != "v1":
            raise ArgumentError(f"not a minlab-mesh v1 file: {path}")
        kind, order, periodic = header[2], int(header[3]), header[4] == "1"
        verts, tris = [], []
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:7]])
            elif parts[0] == "t":
                tris.append([int(x) for x in parts[1:4]])
            else:
                raise ArgumentError(f"unexpected record {parts[0]!r} in {path}")
    data = np.array(verts)
    mesh = SurfaceMesh(
        spec=surfaces.ImmersionSpec(kind, order),
        target_h=1.0,
        periodic_v=periodic,
        params=np.ascontiguousarray(data[:, 0:2]),
        positions=np.ascontiguousarray(data[:, 2:5]),
        lam=np.ascontiguousarray(data[:, 5]),
        triangles=np.array(tris, dtype=np.int32),
    )
    mesh.target_h = float(np.median(mesh.ambient_edge_lengths()))
    return mesh

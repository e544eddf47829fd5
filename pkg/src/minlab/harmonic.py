"""Discrete harmonic functions on subcomplexes.

Harmonicity is discretized through cotangent weights computed from the
*parameter-domain* triangle shapes.  Because the charts are conformal
and the Dirichlet energy of a surface is conformally invariant in two
dimensions, these flat weights are exact for the surface; no ambient
metric approximation enters the solve.

Level sets are extracted by marching triangles with linear interpolation
on ambient edges.  Vertices hitting a level exactly are nudged by
+1e-14 * (1 + |s|) first, so every crossed triangle carries exactly one
segment and degenerate cases are dispatched deterministically.

Assembly, solves and extractions never mutate the mesh; solves on
distinct components may run concurrently, while a single solve is
internally sequential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._kernels import backend
from .errors import ArgumentError, DegenerateError
from .mesh import Subcomplex, SurfaceMesh

CG_TOLERANCE = 1e-10
EXACT_HIT_SHIFT = 1e-14


@dataclass
class ScalarField:
    """Per-vertex real values, optionally restricted to a subcomplex.

    Entries outside the domain are NaN and are never read by the
    operations below (they restrict to subcomplex vertices first).
    """

    mesh: SurfaceMesh
    values: np.ndarray
    domain: Subcomplex = None

    @classmethod
    def from_coordinate(cls, mesh: SurfaceMesh, axis: int) -> "ScalarField":
        if axis not in (0, 1, 2):
            raise ArgumentError("coordinate axis must be 0, 1 or 2")
        return cls(mesh, mesh.positions[:, axis].copy())

    @classmethod
    def from_parameter(cls, mesh: SurfaceMesh, which: str) -> "ScalarField":
        if which not in ("u", "v"):
            raise ArgumentError("parameter coordinate must be 'u' or 'v'")
        return cls(mesh, mesh.params[:, 0 if which == "u" else 1].copy())

    @classmethod
    def constant(cls, mesh: SurfaceMesh, value: float) -> "ScalarField":
        return cls(mesh, np.full(mesh.n_vertices, float(value)))

    def restricted_values(self, vertex_ids) -> np.ndarray:
        vals = self.values[vertex_ids]
        if not np.all(np.isfinite(vals)):
            raise ArgumentError("field is not defined on the requested vertices")
        return vals

    def transformed(self, fn) -> "ScalarField":
        """New field with fn applied where defined (NaN stays NaN)."""
        vals = self.values.copy()
        ok = np.isfinite(vals)
        vals[ok] = fn(vals[ok])
        return ScalarField(self.mesh, vals, self.domain)


def _subset_tris(subset):
    if isinstance(subset, Subcomplex):
        return subset.mesh, subset.tri_indices, subset
    raise ArgumentError("subset must be a Subcomplex (ball component or mesh.whole())")


def _field_on(field: ScalarField, mesh: SurfaceMesh):
    if field.mesh is not mesh:
        raise ArgumentError("field and subset belong to different meshes")
    return field.values


# ---------------------------------------------------------------------------
# energy and solves


class DirichletForm:
    """Quadratic Dirichlet energy of a subcomplex, split by boundary.

    The kernel of the full form is exactly the constants; with boundary
    vertices eliminated the interior block is positive definite.
    """

    def __init__(self, component: Subcomplex):
        mesh = component.mesh
        tris = mesh.triangles[component.tri_indices].astype(np.int64)
        e1, e2 = mesh.triangle_param_edges(component.tri_indices)
        # cotangents of the angles opposite to each local edge
        area2 = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]  # 2 * signed area
        e0 = e2 - e1  # p2 - p1
        cot0 = (e1 * e2).sum(axis=1) / area2    # angle at p0, weights edge (p1,p2)
        cot1 = -(e0 * e1).sum(axis=1) / area2   # angle at p1, weights edge (p2,p0)
        cot2 = (e0 * e2).sum(axis=1) / area2    # angle at p2, weights edge (p0,p1)

        rows = np.concatenate([tris[:, 1], tris[:, 2], tris[:, 0]])
        cols = np.concatenate([tris[:, 2], tris[:, 0], tris[:, 1]])
        w = 0.5 * np.concatenate([cot0, cot1, cot2])

        n = mesh.n_vertices
        w_mat = sp.coo_matrix((w, (rows, cols)), shape=(n, n))
        w_mat = (w_mat + w_mat.T).tocsr()
        lap = sp.diags(np.asarray(w_mat.sum(axis=1)).ravel()) - w_mat

        self.component = component
        self.interior = component.interior_vertices
        self.boundary = component.boundary_vertices
        self.l_ii = lap[self.interior][:, self.interior].tocsr()
        self.l_ib = lap[self.interior][:, self.boundary].tocsr()
        self._w = w_mat
        self._laplacian = lap.tocsr()

    def energy(self, values: np.ndarray) -> float:
        """f^T L f over the subcomplex (f given on all mesh vertices)."""
        vals = np.where(np.isfinite(values), values, 0.0)
        mask = np.zeros(len(vals), dtype=bool)
        mask[self.component.vertices] = True
        vals = np.where(mask, vals, 0.0)
        return float(vals @ (self._laplacian @ vals))


def assemble_energy(component: Subcomplex) -> DirichletForm:
    if len(component.interior_vertices) < 1:
        raise ArgumentError("component has no interior vertices")
    return DirichletForm(component)


def solve_dirichlet(component: Subcomplex, boundary_values,
                    form: DirichletForm = None) -> ScalarField:
    """Minimize the Dirichlet energy subject to the given boundary data.

    ``boundary_values`` is either a ScalarField (restricted to the
    component boundary) or an array aligned with
    ``component.boundary_vertices``.  Solved by diagonally preconditioned
    conjugate gradients to relative residual 1e-10 (cap 10 n iterations).
    A pre-assembled ``form`` for the same component may be passed when
    solving many right-hand sides.
    """
    mesh = component.mesh
    if len(component.boundary_vertices) == 0:
        raise DegenerateError("component has an empty boundary: singular system")
    if isinstance(boundary_values, ScalarField):
        g = boundary_values.restricted_values(component.boundary_vertices)
    else:
        g = np.asarray(boundary_values, dtype=float)
        if g.shape != component.boundary_vertices.shape:
            raise ArgumentError("boundary data does not match the boundary vertex set")
    if not np.all(np.isfinite(g)):
        raise ArgumentError("boundary data must be finite")

    values = np.full(mesh.n_vertices, np.nan)
    values[component.boundary_vertices] = g
    if form is None:
        form = assemble_energy(component)
    elif form.component is not component:
        raise ArgumentError("form was assembled for a different component")
    n = len(form.interior)
    if n > 0:
        b = -(form.l_ib @ g)
        x0 = np.full(n, float(g.mean()))
        x, _, _ = backend.pcg(
            form.l_ii.indptr,
            form.l_ii.indices,
            form.l_ii.data,
            b,
            form.l_ii.diagonal(),
            x0,
            CG_TOLERANCE,
            10 * max(n, 1),
        )
        values[form.interior] = x
    return ScalarField(mesh, values, component)


def dirichlet_energy(field: ScalarField, subset) -> float:
    """Sum over triangles of |grad_param f|^2 times parameter area.

    By conformal invariance this equals the surface Dirichlet energy.
    """
    mesh, tris, _ = _subset_tris(subset)
    vals = _field_on(field, mesh)
    gx, gy, area = _param_gradients(mesh, tris, vals)
    return float(((gx * gx + gy * gy) * area).sum())


def _param_gradients(mesh, tri_indices, values):
    """Per-triangle parameter-domain gradient and parameter area."""
    tris = mesh.triangles[tri_indices]
    f = values[tris]
    if not np.all(np.isfinite(f)):
        raise ArgumentError("field is not defined on the whole subset")
    e1, e2 = mesh.triangle_param_edges(tri_indices)
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    d1 = f[:, 1] - f[:, 0]
    d2 = f[:, 2] - f[:, 0]
    gx = (d1 * e2[:, 1] - d2 * e1[:, 1]) / det
    gy = (d2 * e1[:, 0] - d1 * e2[:, 0]) / det
    return gx, gy, 0.5 * det


def gradient_l1(field: ScalarField, subset) -> float:
    """Surface integral of |grad f|: parameter gradient scaled to the
    surface metric, against ambient triangle areas (not conformally
    invariant)."""
    mesh, tris, _ = _subset_tris(subset)
    vals = _field_on(field, mesh)
    gx, gy, _ = _param_gradients(mesh, tris, vals)
    lam_tri = mesh.lam[mesh.triangles[tris]].mean(axis=1)
    p = mesh.positions[mesh.triangles[tris]]
    amb_area = 0.5 * np.linalg.norm(
        np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1
    )
    return float((np.sqrt(gx * gx + gy * gy) / np.sqrt(lam_tri) * amb_area).sum())


# ---------------------------------------------------------------------------
# level sets


@dataclass
class LevelComponent:
    length: float
    touches_boundary: bool
    segment_ids: np.ndarray


@dataclass
class LevelSet:
    """Polyline approximation of {f = s} on a subcomplex."""

    level: float
    segments: np.ndarray          # (m, 2, 3) ambient endpoints
    labels: np.ndarray            # (m,) component label per segment
    components: list              # list[LevelComponent]
    total_length: float
    triangle_ids: np.ndarray      # (m,) crossed triangle per segment
    segment_edges: np.ndarray     # (m, 2) global ids of the crossed edges

    def component_lengths(self) -> np.ndarray:
        return np.array([c.length for c in self.components])


def level_set(field: ScalarField, s: float, subset, link_components: bool = True) -> LevelSet:
    """Marching-triangles extraction of the level {f = s}.

    ``link_components=False`` skips the component assembly (labels and
    component list stay empty); used by bulk length integrations.
    """
    if not math.isfinite(s):
        raise ArgumentError("level must be finite")
    mesh, tri_idx, comp = _subset_tris(subset)
    vals = _field_on(field, mesh).copy()
    sub_verts = comp.vertices
    exact = vals[sub_verts] == s
    if exact.any():
        vals[sub_verts[exact]] = s + EXACT_HIT_SHIFT * (1.0 + abs(s))

    tris = mesh.triangles[tri_idx].astype(np.int64)
    f = vals[tris]
    if not np.all(np.isfinite(f)):
        raise ArgumentError("field is not defined on the whole subset")
    above = f > s
    n_above = above.sum(axis=1)
    crossed = (n_above == 1) | (n_above == 2)
    if not crossed.any():
        return LevelSet(s, np.zeros((0, 2, 3)), np.zeros(0, dtype=np.int64), [], 0.0,
                        np.zeros(0, dtype=np.int64), np.zeros((0, 2), dtype=np.int64))

    ct = np.nonzero(crossed)[0]
    fa = f[ct]
    aab = above[ct]
    # local edges 0:(0,1) 1:(1,2) 2:(2,0); mesh.tri_edges uses the same order
    locals_ = np.stack(
        [aab[:, 0] != aab[:, 1], aab[:, 1] != aab[:, 2], aab[:, 2] != aab[:, 0]],
        axis=1,
    )
    # exactly two crossed edges per crossed triangle
    first_local = np.argmax(locals_, axis=1)
    last_local = 2 - np.argmax(locals_[:, ::-1], axis=1)

    edge_v0 = np.array([0, 1, 2])
    edge_v1 = np.array([1, 2, 0])

    def endpoint(local_edge):
        a = tris[ct, edge_v0[local_edge]]
        b = tris[ct, edge_v1[local_edge]]
        fa_, fb_ = vals[a], vals[b]
        t = (s - fa_) / (fb_ - fa_)
        return mesh.positions[a] + t[:, None] * (mesh.positions[b] - mesh.positions[a])

    p_start = endpoint(first_local)
    p_end = endpoint(last_local)
    segments = np.stack([p_start, p_end], axis=1)
    lengths = np.linalg.norm(p_end - p_start, axis=1)

    sub_tri_edges = mesh.tri_edges[tri_idx][crossed]
    rows = np.arange(len(ct))
    seg_edges = np.column_stack(
        [sub_tri_edges[rows, first_local], sub_tri_edges[rows, last_local]]
    ).astype(np.int64)

    if not link_components:
        return LevelSet(s, segments, np.zeros(len(ct), dtype=np.int64), [],
                        float(lengths.sum()), tri_idx[ct], seg_edges)

    # link segments that share a crossed mesh edge
    eids = seg_edges.T.reshape(-1)
    seg_of = np.concatenate([rows, rows])
    order = np.argsort(eids, kind="stable")
    eids_sorted = eids[order]
    seg_sorted = seg_of[order]
    same = eids_sorted[1:] == eids_sorted[:-1]
    pair_a = seg_sorted[:-1][same]
    pair_b = seg_sorted[1:][same]
    labels = backend.link_segments(len(ct), pair_a.astype(np.int64), pair_b.astype(np.int64))

    boundary_edge = comp.boundary_edge_mask[eids]  # per (segment, endpoint record)
    seg_touches = np.zeros(len(ct), dtype=bool)
    np.logical_or.at(seg_touches, seg_of, boundary_edge)

    n_comp = labels.max() + 1 if len(labels) else 0
    comp_len = np.bincount(labels, weights=lengths, minlength=n_comp)
    comp_touch = np.zeros(n_comp, dtype=bool)
    np.logical_or.at(comp_touch, labels, seg_touches)
    components = [
        LevelComponent(float(comp_len[c]), bool(comp_touch[c]),
                       np.nonzero(labels == c)[0])
        for c in range(n_comp)
    ]
    return LevelSet(
        level=s,
        segments=segments,
        labels=labels,
        components=components,
        total_length=float(lengths.sum()),
        triangle_ids=tri_idx[ct],
        segment_edges=seg_edges,
    )


def nodal_length(field: ScalarField, subset) -> float:
    """Total ambient length of the zero level set."""
    return level_set(field, 0.0, subset).total_length


def coarea_check(field: ScalarField, subset, n_levels: int) -> float:
    """Relative mismatch between the |grad f| integral and the midpoint-rule
    integral of level-set lengths over the field's range."""
    if n_levels < 16:
        raise ArgumentError("coarea check needs at least 16 levels")
    mesh, _, comp = _subset_tris(subset)
    vals = _field_on(field, mesh)[comp.vertices]
    vmin, vmax = float(vals.min()), float(vals.max())
    if vmin == vmax:
        return 0.0  # both sides vanish: exact
    step = (vmax - vmin) / n_levels
    levels = vmin + step * (np.arange(n_levels) + 0.5)
    total = sum(
        level_set(field, float(s), subset, link_components=False).total_length
        for s in levels
    ) * step
    g1 = gradient_l1(field, subset)
    return abs(g1 - total) / max(g1, 1e-300)


def save_field(field: ScalarField, path) -> None:
    """Write the ``minlab-field v1`` format (one value per vertex line)."""
    with open(path, "w") as fh:
        fh.write(f"minlab-field v1 {len(field.values)}\n")
        for x in field.values.tolist():
            fh.write(f"{x!r}\n")


def load_field(mesh: SurfaceMesh, path) -> ScalarField:
    with open(path) as fh:
        header = fh.readline().split()
        if header[:2] != ["minlab-field", "v1"]:
            raise ArgumentError(f"not a minlab-field v1 file: {path}")
        n = int(header[2])
        vals = np.array([float(fh.readline()) for _ in range(n)])
    if n != mesh.n_vertices:
        raise ArgumentError("field length does not match mesh")
    return ScalarField(mesh, vals)


def save_level_set_csv(ls: LevelSet, path) -> None:
    """CSV of segment endpoints: x1,y1,z1,x2,y2,z2,component_id."""
    with open(path, "w") as fh:
        fh.write("x1,y1,z1,x2,y2,z2,component_id\n")
        for seg, lab in zip(ls.segments.tolist(), ls.labels.tolist()):
            (a, b) = seg
            fh.write(
                f"{a[0]!r},{a[1]!r},{a[2]!r},{b[0]!r},{b[1]!r},{b[2]!r},{lab}\n"
            )

"""Exact-enough 3-D convex geometry.

Bounded convex polyhedra appear in two forms: a half-space representation
(`SupportPolyhedron`: outward unit directions plus support numbers) and an
explicit boundary complex (`MeshPolyhedron`: vertices, face cycles, areas,
edge lengths).  `intersect_halfspaces` converts the first into the second by
enumerating triple plane intersections; `convex_hull` builds the second from
a point cloud.  All tolerances are relative to the body scale (bounding-box
diagonal); inputs are assumed desk-scale, no exact predicates.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull as _Qhull
from scipy.spatial import QhullError
from scipy.spatial.distance import pdist

from .errors import DegenerateBody, DuplicateDirection, UnboundedRegion

# Two directions within this angle (radians; equal to chord length at this
# magnitude) count as one direction.
DIRECTION_TOL = 1e-9
# Vertex dedup and on-plane classification tolerance, times the body scale.
MERGE_TOL = 1e-9
# Determinant floor for a usable triple plane intersection.
_DET_TOL = 1e-12


def unit(v):
    """Normalized copy of a nonzero vector."""
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return v / n


def _cross3(a, b):
    # np.cross has heavy call overhead for single 3-vectors
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def as_unit_rows(directions):
    """Validate an (k, 3) array of unit rows (norm 1 within 1e-12)."""
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    if d.ndim != 2 or d.shape[1] != 3:
        raise ValueError(f"expected an (k, 3) direction array, got {d.shape}")
    norms = np.linalg.norm(d, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-12):
        raise ValueError("directions must be unit vectors (within 1e-12)")
    return d


def check_distinct_directions(directions, tol=DIRECTION_TOL):
    """Raise DuplicateDirection if two rows are closer than `tol` radians."""
    d = np.asarray(directions, float)
    diff = d[:, None, :] - d[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    np.fill_diagonal(dist, np.inf)
    i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
    if dist[i, j] < tol:
        raise DuplicateDirection(
            f"directions {i} and {j} coincide within {tol} rad")


def check_positive_spanning(directions):
    """Raise UnboundedRegion unless the origin is strictly inside the convex
    hull of the direction endpoints (equivalently, the directions positively
    span 3-space and every half-space intersection with these normals is
    bounded)."""
    d = np.asarray(directions, float)
    try:
        hull = _Qhull(d)
    except QhullError as exc:
        raise UnboundedRegion(
            "directions do not positively span 3-space") from exc
    # hull equations: n.x + b <= 0 inside; strict interior needs b < 0
    if np.any(hull.equations[:, 3] > -1e-10):
        raise UnboundedRegion(
            "origin is not strictly inside the hull of the directions")


@dataclass(frozen=True)
class SupportPolyhedron:
    """Half-space representation: the body is the set of points x with
    x . directions[j] <= support_numbers[j] for all j."""

    directions: np.ndarray
    support_numbers: np.ndarray

    def __post_init__(self):
        d = as_unit_rows(self.directions)
        h = np.asarray(self.support_numbers, dtype=float).ravel()
        if d.shape[0] < 4:
            raise ValueError("need at least 4 directions")
        if len(h) != d.shape[0]:
            raise ValueError("one support number per direction required")
        check_distinct_directions(d)
        check_positive_spanning(d)
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "support_numbers", h)

    @property
    def k(self):
        return self.directions.shape[0]


@dataclass(frozen=True)
class MeshPolyhedron:
    """Boundary complex of a bounded convex polyhedron.

    `faces[j]` is a cycle of vertex indices, counterclockwise as seen from
    outside along `face_normals[j]`; it is empty when plane j does not touch
    the body in a 2-dimensional face, in which case `face_areas[j]` is 0, so
    index j stays aligned with the generating direction list.  `edge_lengths`
    maps unordered face-index pairs to the shared edge length (positive
    entries only).
    """

    vertices: np.ndarray
    faces: list
    face_normals: np.ndarray
    face_areas: np.ndarray
    edge_lengths: dict

    def __post_init__(self):
        object.__setattr__(self, "vertices",
                           np.atleast_2d(np.asarray(self.vertices, float)))
        object.__setattr__(self, "face_normals",
                           np.atleast_2d(np.asarray(self.face_normals, float)))
        object.__setattr__(self, "face_areas",
                           np.asarray(self.face_areas, float).ravel())

    @property
    def face_count(self):
        """Number of faces with positive area."""
        return int(np.count_nonzero(self.face_areas > 0.0))

    @property
    def scale(self):
        """Bounding-box diagonal; the reference length for tolerances."""
        return float(np.linalg.norm(self.vertices.max(axis=0)
                                    - self.vertices.min(axis=0)))

    @property
    def centroid(self):
        return self.vertices.mean(axis=0)

    def diameter(self):
        """Exact diameter (max pairwise vertex distance)."""
        if len(self.vertices) < 2:
            return 0.0
        return float(pdist(self.vertices).max())

    def edge_length(self, i, j):
        key = (i, j) if i < j else (j, i)
        return self.edge_lengths.get(key, 0.0)

    def adjacency(self):
        """Face-adjacency graph as a frozenset of index pairs."""
        return frozenset(self.edge_lengths.keys())

    def face_support_numbers(self):
        """Per-face plane offsets n_j . x for x on face j (NaN if absent)."""
        h = np.full(len(self.face_areas), np.nan)
        for j, cyc in enumerate(self.faces):
            if cyc:
                pts = self.vertices[list(cyc)]
                h[j] = float(pts.mean(axis=0) @ self.face_normals[j])
        return h

    def translate(self, t):
        t = np.asarray(t, float)
        return dataclasses.replace(self, vertices=self.vertices + t)


def _sorted_cycle(vertices, idx, normal):
    """Order the on-plane vertex indices counterclockwise around `normal`
    and return (cycle, signed polygon area by the shoelace rule)."""
    pts = vertices[idx]
    c = pts.mean(axis=0)
    seed = np.zeros(3)
    seed[int(np.argmin(np.abs(normal)))] = 1.0
    b1 = _cross3(normal, seed)
    b1 /= np.sqrt(b1 @ b1)
    b2 = _cross3(normal, b1)
    rel = pts - c
    u, v = rel @ b1, rel @ b2
    order = np.argsort(np.arctan2(v, u), kind="stable")
    u, v = u[order], v[order]
    un = np.empty_like(u)
    un[:-1], un[-1] = u[1:], u[0]
    vn = np.empty_like(v)
    vn[:-1], vn[-1] = v[1:], v[0]
    area = 0.5 * float(u @ vn - v @ un)
    return [int(i) for i in idx[order]], area


def _edges_from_cycles(vertices, faces):
    """Shared-edge lengths keyed by unordered face pairs, from face cycles."""
    owner = {}
    lengths = {}
    for f, cyc in enumerate(faces):
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            key = (a, b) if a < b else (b, a)
            if key in owner:
                g = owner.pop(key)
                fk = (g, f) if g < f else (f, g)
                lengths[fk] = float(np.linalg.norm(vertices[a] - vertices[b]))
            else:
                owner[key] = f
    return lengths


def _dedup_points(points, tol):
    """Cluster points within `tol` (connected components of the proximity
    graph, grown breadth-first) and return (component means, label per
    point).  Clusters are tiny and far apart, so each grows in O(1) rounds."""
    m = len(points)
    d2 = ((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
    t2 = tol * tol
    labels = np.full(m, -1, dtype=int)
    n = 0
    for i in range(m):
        if labels[i] >= 0:
            continue
        members = d2[i] <= t2
        while True:
            grown = members | (d2[:, members].min(axis=1) <= t2)
            if (grown == members).all():
                break
            members = grown
        labels[members] = n
        n += 1
    sums = np.zeros((n, 3))
    np.add.at(sums, labels, points)
    counts = np.bincount(labels, minlength=n).astype(float)
    return sums / counts[:, None], labels


def _intersect_arrays(directions, offsets, *, check_spanning=True):
    """Core half-space intersection on raw arrays.

    For every pair of non-parallel planes, all triple intersections with the
    remaining planes are computed (Cramer's rule, vectorized); the ones lying
    on the body are kept, and the two extreme survivors along the pair's line
    are that pair's shared-edge endpoints.  Vertices are the deduplicated
    endpoint set; face cycles come from on-plane classification.
    """
    D = np.asarray(directions, float)
    h = np.asarray(offsets, float)
    k = len(D)
    if not np.all(np.isfinite(h)):
        raise DegenerateBody("non-finite support numbers")
    if check_spanning:
        check_positive_spanning(D)

    ii, jj = np.triu_indices(k, 1)
    w = np.cross(D[ii], D[jj])
    wn = np.linalg.norm(w, axis=1)
    keep = wn > DIRECTION_TOL
    ii, jj, w, wn = ii[keep], jj[keep], w[keep], wn[keep]
    npair = len(ii)
    if npair == 0:
        raise DegenerateBody("no transversal plane pairs")

    # x(p, q) solves [n_i; n_j; n_q] x = [h_i; h_j; h_q] by Cramer's rule
    cjq = np.cross(D[jj][:, None, :], D[None, :, :])
    cqi = np.cross(D[None, :, :], D[ii][:, None, :])
    det = w @ D.T
    num = (h[ii][:, None, None] * cjq + h[jj][:, None, None] * cqi
           + h[None, :, None] * w[:, None, :])
    solvable = np.abs(det) > _DET_TOL
    X = np.zeros_like(num)
    np.divide(num, det[:, :, None], out=X, where=solvable[:, :, None])

    # worst constraint violation of each candidate point; blocked so the
    # (pairs, k, k) tensor never exceeds a few MB at large k
    marg = np.empty((npair, k))
    block = max(1, 2_000_000 // (k * k))
    for s in range(0, npair, block):
        e = min(npair, s + block)
        dots = np.einsum("pqc,rc->pqr", X[s:e], D)
        dots -= h[None, None, :]
        marg[s:e] = dots.max(axis=2)

    # provisional pass to learn the body scale, then the final tolerance
    coarse = solvable & (marg <= 1e-7 * max(1.0, float(np.abs(h).max())))
    if not coarse.any():
        raise DegenerateBody("empty half-space intersection")
    pts = X[coarse]
    scale = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    if scale == 0.0:
        raise DegenerateBody("intersection has empty interior")
    tol = MERGE_TOL * scale
    feas = solvable & (marg <= tol)
    if not feas.any():
        raise DegenerateBody("empty half-space intersection")

    # extreme feasible points along each pair's line
    axis = w / wn[:, None]
    t = np.einsum("pqc,pc->pq", X, axis)
    lo_idx = np.argmin(np.where(feas, t, np.inf), axis=1)
    hi_idx = np.argmax(np.where(feas, t, -np.inf), axis=1)
    has = feas.any(axis=1)
    rows = np.arange(npair)
    lo = X[rows, lo_idx]
    hi = X[rows, hi_idx]
    hit = np.where(has)[0]
    cand = np.concatenate([lo[hit], hi[hit]])

    verts, labels = _dedup_points(cand, tol)
    if len(verts) < 4:
        raise DegenerateBody("fewer than 4 distinct vertices")
    sv = np.linalg.svd(verts - verts.mean(axis=0), compute_uv=False)
    if sv[2] <= 1e-9 * sv[0]:
        raise DegenerateBody("intersection has empty interior")

    nh = len(hit)
    lo_lab, hi_lab = labels[:nh], labels[nh:]

    # faces: on-plane classification against deduplicated vertices
    plane_gap = np.abs(verts @ D.T - h[None, :])
    faces = []
    areas = np.zeros(k)
    noise_area = 4.0 * tol * scale  # spread of a merely grazing plane
    for j in range(k):
        idx = np.where(plane_gap[:, j] <= 3.0 * tol)[0]
        if len(idx) < 3:
            faces.append([])
            continue
        cyc, area = _sorted_cycle(verts, idx, D[j])
        if area <= noise_area:
            faces.append([])
        else:
            faces.append(cyc)
            areas[j] = area

    edge_lengths = {}
    for pos, p in enumerate(hit):
        a, b = lo_lab[pos], hi_lab[pos]
        if a == b:
            continue
        fi, fj = int(ii[p]), int(jj[p])
        if not (faces[fi] and faces[fj]):
            continue
        length = float(np.linalg.norm(verts[a] - verts[b]))
        if length > tol:
            edge_lengths[(min(fi, fj), max(fi, fj))] = length

    return MeshPolyhedron(vertices=verts, faces=faces, face_normals=D.copy(),
                          face_areas=areas, edge_lengths=edge_lengths)


def intersect_halfspaces(p: SupportPolyhedron) -> MeshPolyhedron:
    """Boundary complex of the intersection of the half-spaces of `p`.

    Planes that do not touch the body keep their index slot with area 0 and
    an empty cycle, so face j always corresponds to direction j.
    """
    return _intersect_arrays(p.directions, p.support_numbers,
                             check_spanning=True)


def convex_hull(points) -> MeshPolyhedron:
    """Convex hull with coplanar facets merged into geometric faces."""
    pts = np.atleast_2d(np.asarray(points, float))
    if len(pts) < 4:
        raise DegenerateBody("need at least 4 points")
    scale = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    sv = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    if scale == 0.0 or sv[2] <= 1e-9 * sv[0]:
        raise DegenerateBody("points lie within 1e-9*scale of a plane")
    try:
        hull = _Qhull(pts)
    except QhullError as exc:
        raise DegenerateBody("degenerate point set") from exc

    verts = pts[hull.vertices]
    remap = {int(old): new for new, old in enumerate(hull.vertices)}

    # merge triangles whose plane equations agree within tolerance
    eqs = hull.equations
    order = np.lexsort((eqs[:, 3], eqs[:, 2], eqs[:, 1], eqs[:, 0]))
    tolvec = np.array([1e-9, 1e-9, 1e-9, 1e-9 * max(1.0, scale)])
    groups = []
    for t in order:
        if groups and np.all(np.abs(eqs[t] - eqs[groups[-1][-1]]) <= tolvec):
            groups[-1].append(t)
        else:
            groups.append([t])

    faces = []
    normals = []
    areas = []
    for members in groups:
        vids = np.unique(hull.simplices[members])
        idx = np.array([remap[int(v)] for v in vids])
        n_hint = eqs[members[0], :3]
        cyc, area = _sorted_cycle(verts, idx, n_hint)
        if area < 0:
            cyc = cyc[::-1]
        ring = verts[cyc]
        area_vec = 0.5 * np.cross(ring, np.roll(ring, -1, axis=0)).sum(axis=0)
        faces.append(cyc)
        normals.append(unit(area_vec))
        areas.append(float(np.linalg.norm(area_vec)))

    return MeshPolyhedron(vertices=verts, faces=faces,
                          face_normals=np.array(normals),
                          face_areas=np.array(areas),
                          edge_lengths=_edges_from_cycles(verts, faces))


def volume(p: MeshPolyhedron) -> float:
    """Volume as one third of the sum of face areas times their signed plane
    distance from an interior reference point (the vertex centroid); the
    choice of reference point does not matter."""
    ref = p.centroid
    total = 0.0
    for j, cyc in enumerate(p.faces):
        if not cyc:
            continue
        point = p.vertices[list(cyc)].mean(axis=0)
        total += p.face_areas[j] * float((point - ref) @ p.face_normals[j])
    return float(total) / 3.0


def support_value(p: MeshPolyhedron, d) -> float:
    """Support function of the body at direction d: max of d . v over
    the vertices."""
    return float((p.vertices @ np.asarray(d, float)).max())


def vector_area_residual(p: MeshPolyhedron):
    """Sum of area-weighted outward normals; zero for a closed surface."""
    return (p.face_areas[:, None] * p.face_normals).sum(axis=0)


def integral_mean_curvature(p: MeshPolyhedron) -> float:
    """Half the sum over edges of edge length times exterior dihedral angle
    (which for adjacent outward normals is just the angle between them)."""
    if not p.edge_lengths:
        return 0.0
    pairs = np.array(list(p.edge_lengths.keys()))
    lengths = np.array(list(p.edge_lengths.values()))
    ni = p.face_normals[pairs[:, 0]]
    nj = p.face_normals[pairs[:, 1]]
    sin = np.linalg.norm(np.cross(ni, nj), axis=1)
    cos = (ni * nj).sum(axis=1)
    return 0.5 * float(lengths @ np.arctan2(sin, cos))


@dataclass(frozen=True)
class ContainmentResult:
    """Outcome of a translate-inside query.

    `margin` is the largest uniform slack s with inner + t + (s ball
    support shift) still inside; nonnegative (up to tolerance) iff some
    translate fits.  On failure `certificate` holds Farkas weights: a convex
    combination of outer face constraints with zero normal sum whose total
    slack is negative, proving infeasibility.
    """

    contained: bool
    translation: np.ndarray | None
    margin: float
    certificate: dict | None = None

    def __bool__(self):
        return self.contained


def contains_by_translation(outer: MeshPolyhedron,
                            inner: MeshPolyhedron) -> ContainmentResult:
    """Decide whether some translate of `inner` fits inside `outer`.

    Maximizes the slack s subject to n_i . t + s <= h_i - h_inner(n_i) over
    the facet directions of `outer`; a translate exists iff the optimum is
    >= -1e-9 * scale.
    """
    live = np.where(outer.face_areas > 0)[0]
    normals = outer.face_normals[live]
    h_outer = outer.face_support_numbers()[live]
    rhs = np.array([h_outer[m] - support_value(inner, normals[m])
                    for m in range(len(live))])
    a_ub = np.hstack([normals, np.ones((len(live), 1))])
    res = linprog(c=[0.0, 0.0, 0.0, -1.0], A_ub=a_ub, b_ub=rhs,
                  bounds=[(None, None)] * 4, method="highs")
    if res.status != 0:
        raise RuntimeError(f"containment LP failed: {res.message}")
    t, s = res.x[:3], float(res.x[3])
    ok = s >= -1e-9 * outer.scale
    cert = None
    if not ok:
        weights = -np.asarray(res.ineqlin.marginals, float)
        cert = {"directions": normals, "weights": weights, "deficit": s}
    return ContainmentResult(contained=ok,
                             translation=t if ok else None,
                             margin=s, certificate=cert)


def validate_mesh(mesh: MeshPolyhedron) -> MeshPolyhedron:
    """Check the boundary-complex invariants; raise ValueError on violation.

    Verifies convex support (no vertex beyond any face plane), the Euler
    characteristic, closure of the vector area, and that positive edge
    lengths appear exactly for adjacent positive faces.
    """
    tol = 1e-9 * mesh.scale
    h = mesh.face_support_numbers()
    for j, cyc in enumerate(mesh.faces):
        if not cyc:
            continue
        gap = mesh.vertices @ mesh.face_normals[j] - h[j]
        if gap.max() > tol:
            raise ValueError(f"vertex beyond plane of face {j}")
    v = len(mesh.vertices)
    e = len(mesh.edge_lengths)
    f = mesh.face_count
    if v - e + f != 2:
        raise ValueError(f"Euler characteristic V-E+F = {v - e + f} != 2")
    resid = float(np.linalg.norm(vector_area_residual(mesh)))
    if resid > 1e-9 * mesh.face_areas.sum():
        raise ValueError("vector area of the surface does not close up")
    for (i, j), length in mesh.edge_lengths.items():
        if length <= 0:
            raise ValueError(f"non-positive edge length for faces {i},{j}")
        if not (mesh.faces[i] and mesh.faces[j]):
            raise ValueError(f"edge between absent faces {i},{j}")
    return mesh

"""Shared test utilities: independent oracles and random-body generators."""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from blaschke3d.geometry import MeshPolyhedron, SupportPolyhedron, \
    intersect_halfspaces
from blaschke3d.herisson import random_herisson


def divergence_volume(mesh: MeshPolyhedron) -> float:
    """Independent volume oracle: fan-triangulate every face and sum
    (centroid . normal) * area / 3 over the triangles."""
    total = 0.0
    for cyc in mesh.faces:
        if not cyc:
            continue
        ring = mesh.vertices[cyc]
        a = ring[0]
        for b, c in zip(ring[1:-1], ring[2:]):
            area_vec = 0.5 * np.cross(b - a, c - a)
            centroid = (a + b + c) / 3.0
            total += float(centroid @ area_vec) / 3.0
    return total


def random_tangent_mesh(k: int, seed: int, jitter=0.0):
    """Mesh of a random polyhedron circumscribing the unit sphere, with all
    k faces present; optional support-number jitter keeps faces alive by
    retrying seeds."""
    s = seed
    for _ in range(50):
        h = random_herisson(k, s)
        rng = np.random.default_rng(s + 77)
        offsets = np.ones(k) + jitter * rng.uniform(-1.0, 1.0, k)
        mesh = intersect_halfspaces(SupportPolyhedron(h.directions, offsets))
        if mesh.face_count == k and mesh.face_areas.min() \
                > 0.02 * mesh.face_areas.max():
            return mesh
        s += 1000
    raise AssertionError(f"no healthy tangent mesh for k={k}, seed={seed}")


def vertex_sets_match(a: MeshPolyhedron, b: MeshPolyhedron, tol) -> bool:
    """Same vertex sets within tol under optimal pairing by nearest point."""
    if len(a.vertices) != len(b.vertices):
        return False
    d = cdist(a.vertices, b.vertices)
    return float(d.min(axis=0).max()) <= tol and \
        float(d.min(axis=1).max()) <= tol


def centered(mesh: MeshPolyhedron) -> MeshPolyhedron:
    return mesh.translate(-mesh.centroid)

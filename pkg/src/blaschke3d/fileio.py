"""File formats: the `.her` face-data format, OFF meshes, and sphere-domain
polygon files.

A `.her` file starts with the face count k, followed by k lines of
`nx ny nz F`: an outward normal (not necessarily unit) and the face area.
Blank lines and `#` comments are allowed.  Floats are printed with 17
significant digits, so print/parse round trips are exact.
"""
from __future__ import annotations

import numpy as np

from .errors import NonConvexInput, ParseError
from .geometry import MeshPolyhedron, convex_hull, validate_mesh
from .herisson import Herisson, validate_herisson
from .spherical import SphericalPolygon


def _fmt(x):
    return f"{float(x):.17g}"


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_herisson_file(text: str) -> Herisson:
    """Parse the face-data format; normals are normalized to unit length and
    the closure-repair gate of `validate_herisson` applies."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input")
    lineno, head = lines[0]
    try:
        k = int(head)
    except ValueError:
        raise ParseError(f"line {lineno}: expected the face count, got "
                         f"{head!r}") from None
    if k < 1:
        raise ParseError(f"line {lineno}: face count must be positive")
    body = lines[1:]
    if len(body) < k:
        raise ParseError(f"header announces {k} faces but only {len(body)} "
                         "data lines follow")
    if len(body) > k:
        raise ParseError(f"header announces {k} faces but {len(body)} "
                         "data lines follow")
    dirs = np.empty((k, 3))
    areas = np.empty(k)
    for row, (lineno, line) in enumerate(body):
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(f"line {lineno}: expected 'nx ny nz area', got "
                             f"{line!r}")
        try:
            nx, ny, nz, area = (float(p) for p in parts)
        except ValueError:
            raise ParseError(f"line {lineno}: malformed number") from None
        v = np.array([nx, ny, nz])
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise ParseError(f"line {lineno}: zero normal")
        # leave already-unit normals untouched so round trips are exact
        if abs(norm - 1.0) > 1e-12:
            v = v / norm
        dirs[row] = v
        areas[row] = area
    return validate_herisson(dirs, areas)


def format_herisson(h: Herisson) -> str:
    """Canonical printer for the face-data format."""
    lines = [str(h.k)]
    for d, f in zip(h.directions, h.areas):
        lines.append(" ".join([_fmt(d[0]), _fmt(d[1]), _fmt(d[2]), _fmt(f)]))
    return "\n".join(lines) + "\n"


def export_off(p: MeshPolyhedron) -> str:
    """Standard OFF text: vertices at 17 significant digits, face cycles
    counterclockwise from outside.  Zero-area placeholder faces are omitted."""
    cycles = [c for c in p.faces if c]
    n_edges = sum(len(c) for c in cycles) // 2
    lines = ["OFF", f"{len(p.vertices)} {len(cycles)} {n_edges}"]
    for v in p.vertices:
        lines.append(" ".join(_fmt(x) for x in v))
    for c in cycles:
        lines.append(" ".join([str(len(c))] + [str(i) for i in c]))
    return "\n".join(lines) + "\n"


def import_off(text: str) -> MeshPolyhedron:
    """Parse OFF text, reject non-convex input, and rebuild the mesh (face
    merge, areas, edge lengths) through `convex_hull`."""
    lines = [line for _, line in _content_lines(text)]
    if not lines or lines[0] != "OFF":
        raise ParseError("missing OFF header")
    try:
        nv, nf, _ = (int(x) for x in lines[1].split())
    except (ValueError, IndexError):
        raise ParseError("malformed OFF counts line") from None
    if len(lines) < 2 + nv + nf:
        raise ParseError("truncated OFF file")
    try:
        verts = np.array([[float(x) for x in lines[2 + i].split()]
                          for i in range(nv)])
        faces = []
        for i in range(nf):
            parts = [int(x) for x in lines[2 + nv + i].split()]
            if len(parts) != parts[0] + 1:
                raise ParseError(f"face {i}: vertex count mismatch")
            faces.append(parts[1:])
    except ValueError:
        raise ParseError("malformed OFF body") from None
    if verts.shape[1:] != (3,):
        raise ParseError("OFF vertices must be 3-D")
    for i, cyc in enumerate(faces):
        if any(v < 0 or v >= nv for v in cyc):
            raise ParseError(f"face {i} references a vertex out of range")
    _check_convex(verts, faces)
    mesh = convex_hull(verts)
    return validate_mesh(mesh)


def _check_convex(verts, faces):
    scale = float(np.linalg.norm(verts.max(axis=0) - verts.min(axis=0)))
    tol = 1e-8 * scale
    # every stated face plane must support the whole vertex set
    for i, cyc in enumerate(faces):
        if len(cyc) < 3:
            raise ParseError(f"face {i} has fewer than 3 vertices")
        ring = verts[cyc]
        normal = 0.5 * np.cross(ring, np.roll(ring, -1, axis=0)).sum(axis=0)
        nn = np.linalg.norm(normal)
        if nn < 1e-14 * scale * scale:
            raise NonConvexInput(f"face {i} is degenerate")
        normal = normal / nn
        offset = float(ring.mean(axis=0) @ normal)
        if (verts @ normal - offset).max() > tol:
            raise NonConvexInput(f"face {i} plane cuts through the body")
    # every vertex must be extreme
    hull = convex_hull(verts)
    if len(hull.vertices) != len(verts):
        raise NonConvexInput("some vertices are not extreme points")


def parse_polygon_file(text: str) -> SphericalPolygon:
    """One vertex per line, three reals; vectors are normalized when within
    1e-6 of unit length and rejected otherwise."""
    rows = []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected three reals")
        try:
            v = np.array([float(p) for p in parts])
        except ValueError:
            raise ParseError(f"line {lineno}: malformed number") from None
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > 1e-6:
            raise ParseError(f"line {lineno}: vertex norm {norm:.8f} is not "
                             "within 1e-6 of 1")
        rows.append(v / norm)
    return SphericalPolygon(np.array(rows) if rows else np.zeros((0, 3)))

#!/usr/bin/env python3
"""Rebuild the classic bodies and their sums, writing OFF meshes plus a
JSON measurement summary.

Usage: python scripts/build_gallery.py [--out DIR]
"""
import argparse
import json
from pathlib import Path

from blaschke3d.bodies import rotated_tetrahedron_pair
from blaschke3d.fileio import export_off, parse_herisson_file
from blaschke3d.geometry import (integral_mean_curvature, volume)
from blaschke3d.solver import continuation_solve
from blaschke3d.sums import blaschke_sum_bodies, minkowski_sum

DATA = Path(__file__).resolve().parent.parent / "data"


def measure(mesh):
    return {"faces": mesh.face_count,
            "vertices": len(mesh.vertices),
            "volume": volume(mesh),
            "total_area": float(mesh.face_areas.sum()),
            "integral_mean_curvature": integral_mean_curvature(mesh)}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="gallery", help="output directory")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    bodies = {}
    for name in ("icosahedron", "dodecahedron", "grunbaum", "cube"):
        herisson = parse_herisson_file((DATA / f"{name}.her").read_text())
        _, mesh, trace = continuation_solve(herisson)
        bodies[name] = mesh
        (out / f"{name}.off").write_text(export_off(mesh))
        print(f"{name}: {mesh.face_count} faces in {trace.steps_taken} steps,"
              f" {trace.combinatorial_changes} combinatorial changes")

    football = blaschke_sum_bodies(bodies["dodecahedron"],
                                   bodies["icosahedron"])
    (out / "football.off").write_text(export_off(football))

    cube_ico = blaschke_sum_bodies(bodies["cube"], bodies["icosahedron"])
    (out / "cube_icosahedron.off").write_text(export_off(cube_ico))

    t1, t2 = rotated_tetrahedron_pair(1.0)
    twisted = minkowski_sum(t1, t2)
    (out / "tetrahedra_minkowski.off").write_text(export_off(twisted))

    summary = {name: measure(mesh) for name, mesh in bodies.items()}
    summary["football"] = measure(football)
    summary["cube_icosahedron"] = measure(cube_ico)
    summary["tetrahedra_minkowski"] = measure(twisted)
    report = out / "measurements.json"
    report.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(f"wrote {report}")


if __name__ == "__main__":
    main()

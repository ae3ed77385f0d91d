#!/usr/bin/env python3
"""Convergence table for the spherical identity residual.

Prints the residual norm of 2*integral_D N dsigma + integral_dD n ds against
the refinement depth for the hemisphere, the octant triangle, and a random
spherical cap polygon.
"""
import numpy as np

from blaschke3d.spherical import SphericalPolygon, spherical_identity_residual


def cap_polygon(seed=5, n=5, radius=0.8):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(3)
    c /= np.linalg.norm(c)
    b1 = np.cross(c, [0.0, 0.0, 1.0])
    b1 /= np.linalg.norm(b1)
    b2 = np.cross(c, b1)
    angles = np.sort(rng.uniform(0, 2 * np.pi, n))
    pts = [np.cos(radius) * c
           + np.sin(radius) * (np.cos(a) * b1 + np.sin(a) * b2)
           for a in angles]
    return SphericalPolygon(np.array(pts))


def main():
    domains = {
        "hemisphere": SphericalPolygon(np.array(
            [[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]], float)),
        "octant": SphericalPolygon(np.eye(3)),
        "random cap": cap_polygon(),
    }
    print(f"{'refine':>6} " + " ".join(f"{name:>14}" for name in domains))
    previous = None
    for r in range(1, 8):
        row = [np.linalg.norm(spherical_identity_residual(poly, r))
               for poly in domains.values()]
        cells = " ".join(f"{x:14.3e}" for x in row)
        note = ""
        if previous is not None:
            ratios = [b / a if a > 0 else float("nan")
                      for a, b in zip(previous, row)]
            note = "   ratios " + " ".join(f"{x:6.3f}" for x in ratios)
        print(f"{r:>6} {cells}{note}")
        previous = row


if __name__ == "__main__":
    main()

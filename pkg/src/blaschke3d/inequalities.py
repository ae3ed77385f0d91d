"""Volume inequalities for the two additions, as executable checks.

Every check returns an `InequalityReport` whose verdict uses one relative
tolerance: within the band is `equality`, above it `holds`, below it
`fails`.  `fuzz_campaign` runs the checks over seeded random body pairs;
failures are reported as data, never raised.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PremiseViolated
from .geometry import (DIRECTION_TOL, MeshPolyhedron, contains_by_translation,
                       volume)
from .herisson import (Herisson, blaschke_add, blaschke_scale,
                       herisson_of_mesh, random_herisson)
from .solver import ContinuationConfig, continuation_solve
from .sums import blaschke_sum_bodies, minkowski_sum

#: single relative tolerance for verdicts; the equality band equals it
VERDICT_TOL = 1e-9


@dataclass(frozen=True)
class InequalityReport:
    """One evaluated inequality, stated as lhs >= rhs."""

    name: str
    lhs: float
    rhs: float
    equality_tol: float = VERDICT_TOL
    diagnosis: dict = field(default_factory=dict)

    @property
    def residual(self):
        return self.lhs - self.rhs

    @property
    def verdict(self):
        band = self.equality_tol * max(abs(self.lhs), abs(self.rhs))
        if abs(self.residual) <= band:
            return "equality"
        return "holds" if self.residual > 0 else "fails"

    @property
    def ok(self):
        return self.verdict != "fails"

    def to_dict(self):
        out = {"name": self.name, "lhs": float(self.lhs),
               "rhs": float(self.rhs), "residual": float(self.residual),
               "verdict": self.verdict,
               "equality_tol": float(self.equality_tol)}
        if self.diagnosis:
            out["diagnosis"] = {k: _jsonable(v)
                                for k, v in self.diagnosis.items()}
        return out


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _bm_report(vol_p, vol_q, vol_mink):
    return InequalityReport("brunn_minkowski", lhs=vol_mink ** (1.0 / 3.0),
                            rhs=vol_p ** (1.0 / 3.0) + vol_q ** (1.0 / 3.0))


def _ks_report(vol_p, vol_q, vol_blaschke, homothetic, ratio):
    return InequalityReport(
        "kneser_suss", lhs=vol_blaschke ** (2.0 / 3.0),
        rhs=vol_p ** (2.0 / 3.0) + vol_q ** (2.0 / 3.0),
        diagnosis={"homothetic": homothetic, "area_ratio": ratio})


def _exponent_reports(vol_p, vol_q, vol_mink, vol_blaschke, a):
    e4, e5 = a / 3.0, 2.0 * a / 3.0
    return (InequalityReport(f"power_minkowski[a={a:g}]",
                             lhs=vol_mink ** e4,
                             rhs=vol_p ** e4 + vol_q ** e4,
                             diagnosis={"a": a}),
            InequalityReport(f"power_blaschke[a={a:g}]",
                             lhs=vol_blaschke ** e5,
                             rhs=vol_p ** e5 + vol_q ** e5,
                             diagnosis={"a": a}))


def homothety_ratio(ha: Herisson, hb: Herisson):
    """If the two herissons have the same directions and one common positive
    area ratio (within 1e-6 relative), return it; else None.  This is what
    `homothetic` means for bodies known by their face data."""
    if ha.k != hb.k:
        return None
    ratios = np.empty(ha.k)
    for idx, (d, f) in enumerate(zip(ha.directions, ha.areas)):
        gap = np.linalg.norm(hb.directions - d, axis=1)
        hit = int(np.argmin(gap))
        if gap[hit] > DIRECTION_TOL:
            return None
        ratios[idx] = hb.areas[hit] / f
    mean = float(ratios.mean())
    if np.abs(ratios - mean).max() <= 1e-6 * mean:
        return mean
    return None


def brunn_minkowski_check(p: MeshPolyhedron, q: MeshPolyhedron):
    """Vol(P+Q)^(1/3) >= Vol(P)^(1/3) + Vol(Q)^(1/3)."""
    return _bm_report(volume(p), volume(q), volume(minkowski_sum(p, q)))


def kneser_suss_check(p: MeshPolyhedron, q: MeshPolyhedron,
                      cfg: ContinuationConfig | None = None):
    """Vol(P#Q)^(2/3) >= Vol(P)^(2/3) + Vol(Q)^(2/3), with equality exactly
    for homothetic bodies; the report's diagnosis carries the homothety
    detector so the equivalence can be cross-checked."""
    ratio = homothety_ratio(herisson_of_mesh(p), herisson_of_mesh(q))
    return _ks_report(volume(p), volume(q),
                      volume(blaschke_sum_bodies(p, q, cfg)),
                      ratio is not None, ratio)


def monotonicity_check(hk: Herisson, hl: Herisson,
                       cfg: ContinuationConfig | None = None):
    """Domination of face data implies domination of volume.

    Requires every direction of `hk` to appear in `hl` with at least the
    same area (up to 1e-9 of hk's total); then Vol(L) >= Vol(K).  The
    diagnosis also carries whether K fits inside L by translation, which may
    be false even though the volumes are ordered.
    """
    slack = 1e-9 * hk.total_area
    for d, f in zip(hk.directions, hk.areas):
        gap = np.linalg.norm(hl.directions - d, axis=1)
        hit = int(np.argmin(gap))
        if gap[hit] > DIRECTION_TOL or hl.areas[hit] < f - slack:
            raise PremiseViolated(
                "dominating herisson misses or underweights direction "
                f"{np.array2string(d, precision=6)}", direction=d)
    _, mesh_k, _ = continuation_solve(hk, cfg)
    _, mesh_l, _ = continuation_solve(hl, cfg)
    fit = contains_by_translation(mesh_l, mesh_k)
    return InequalityReport(
        "volume_monotonicity", lhs=volume(mesh_l), rhs=volume(mesh_k),
        diagnosis={"contains_by_translation": fit.contained,
                   "containment_margin": fit.margin})


def sum_comparison_check(p: MeshPolyhedron, q: MeshPolyhedron,
                         cfg: ContinuationConfig | None = None):
    """Vol(P+Q) >= Vol(P#Q): the Blaschke sum never beats the Minkowski sum
    in volume."""
    return InequalityReport("minkowski_vs_blaschke",
                            lhs=volume(minkowski_sum(p, q)),
                            rhs=volume(blaschke_sum_bodies(p, q, cfg)))


def exponent_check(p: MeshPolyhedron, q: MeshPolyhedron, a: float,
                   cfg: ContinuationConfig | None = None):
    """Both basic inequalities with their exponents scaled by a > 0: they
    survive any a >= 1 and break for some bodies whenever 0 < a < 1
    (homothetic pairs already do).  Returns the two reports."""
    if not a > 0:
        raise ValueError("exponent factor a must be positive")
    return _exponent_reports(volume(p), volume(q),
                             volume(minkowski_sum(p, q)),
                             volume(blaschke_sum_bodies(p, q, cfg)), a)


def lemma_inequality(a: float, x: float) -> bool:
    """Whether (1+x)^a >= 1 + x^a (true for a >= 1, breaks for 0 < a < 1)."""
    if not (a > 0 and x > 0):
        raise ValueError("need a > 0 and x > 0")
    return (1.0 + x) ** a >= 1.0 + x ** a


# -- fuzz campaign -----------------------------------------------------------

_ALL_CHECKS = ("bm", "ks", "thm71", "thm75", "thm81")


@dataclass(frozen=True)
class FuzzConfig:
    """Campaign parameters.  `a` feeds the thm81 check; `homothetic_pairs`
    replaces the second random body with a scaled copy of the first, the
    regime where the a < 1 failures are guaranteed."""

    trials: int
    faces_min: int = 6
    faces_max: int = 12
    seed: int = 0
    checks: tuple = _ALL_CHECKS
    a: float = 1.5
    homothetic_pairs: bool = False
    solver: ContinuationConfig = field(
        default_factory=lambda: ContinuationConfig(dt_initial=0.5))

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not (4 <= self.faces_min <= self.faces_max):
            raise ValueError("need 4 <= faces_min <= faces_max")
        unknown = set(self.checks) - set(_ALL_CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")


def _derived_seed(seed, trial, slot):
    return seed * 1000003 + trial * 17 + slot


def fuzz_campaign(cfg: FuzzConfig) -> dict:
    """Run the selected checks over `trials` seeded random pairs.

    Deterministic under the seed.  The summary counts verdicts per check,
    tracks the worst relative residual, records the derived seeds of any
    failures, and counts trials where the Kneser-Suss equality verdict and
    the homothety detector disagree.
    """
    stats = {name: {"holds": 0, "equality": 0, "fails": 0,
                    "worst_residual": np.inf, "failure_seeds": []}
             for name in cfg.checks}
    mismatches = 0
    for trial in range(cfg.trials):
        rng = np.random.default_rng(_derived_seed(cfg.seed, trial, 0))
        kp = int(rng.integers(cfg.faces_min, cfg.faces_max + 1))
        kq = int(rng.integers(cfg.faces_min, cfg.faces_max + 1))
        hp = random_herisson(kp, _derived_seed(cfg.seed, trial, 1))
        if cfg.homothetic_pairs:
            hq = blaschke_scale(hp, float(rng.uniform(0.5, 2.0)))
        else:
            hq = random_herisson(kq, _derived_seed(cfg.seed, trial, 2))

        _, mesh_p, _ = continuation_solve(hp, cfg.solver)
        _, mesh_q, _ = continuation_solve(hq, cfg.solver)
        vol_p, vol_q = volume(mesh_p), volume(mesh_q)
        combined = blaschke_add(hp, hq)
        _, mesh_b, _ = continuation_solve(combined, cfg.solver)
        vol_b = volume(mesh_b)
        vol_m = volume(minkowski_sum(mesh_p, mesh_q))

        reports = {}
        if "bm" in cfg.checks:
            reports["bm"] = _bm_report(vol_p, vol_q, vol_m)
        if "ks" in cfg.checks:
            ratio = homothety_ratio(hp, hq)
            rep = _ks_report(vol_p, vol_q, vol_b, ratio is not None, ratio)
            reports["ks"] = rep
            if (rep.verdict == "equality") != (ratio is not None):
                mismatches += 1
        if "thm71" in cfg.checks:
            # dominating data built by construction: areas(combined) >=
            # areas(hp) direction by direction
            reports["thm71"] = InequalityReport("volume_monotonicity",
                                                lhs=vol_b, rhs=vol_p)
        if "thm75" in cfg.checks:
            reports["thm75"] = InequalityReport("minkowski_vs_blaschke",
                                                lhs=vol_m, rhs=vol_b)
        if "thm81" in cfg.checks:
            rep4, rep5 = _exponent_reports(vol_p, vol_q, vol_m, vol_b, cfg.a)
            # the pair counts once: a failure of either inequality fails it
            worse = min((rep4, rep5), key=lambda r: r.residual
                        / max(abs(r.lhs), abs(r.rhs), 1e-300))
            reports["thm81"] = worse

        for name, rep in reports.items():
            entry = stats[name]
            entry[rep.verdict] += 1
            rel = rep.residual / max(abs(rep.lhs), abs(rep.rhs), 1e-300)
            entry["worst_residual"] = min(entry["worst_residual"], rel)
            if rep.verdict == "fails":
                entry["failure_seeds"].append(_derived_seed(cfg.seed, trial, 0))

    for entry in stats.values():
        if not np.isfinite(entry["worst_residual"]):
            entry["worst_residual"] = None
    unexpected = sorted(
        name for name in cfg.checks
        if stats[name]["fails"] > 0 and (name != "thm81" or cfg.a >= 1.0))
    return {"trials": cfg.trials, "seed": cfg.seed, "a": cfg.a,
            "faces": [cfg.faces_min, cfg.faces_max],
            "checks": {name: stats[name] for name in cfg.checks},
            "ks_equality_mismatches": mismatches,
            "unexpected_failures": unexpected}

"""Trimmed barycenters: consensus that may discard an alpha fraction of mass.

Trimming a weighted ensemble keeps the fraction 1 - alpha of the weight
that sits closest to a candidate center, splitting one atom at the boundary
if needed, and renormalizes.  Alternating that concentration step with a
barycenter recomputation descends the trimmed variance; multistart guards
against local minima.  An exhaustive subset search provides an independent
oracle for small equal-weight ensembles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .barycenter import WeightedEnsemble, fixed_point_barycenter
from .errors import BadWeights, DegenerateTrim, InvalidInput, UnsupportedConfiguration
from .locscatter import LocScatter, w2_distances_sq
from .rng import RngState
from .runtime import map_indexed

__all__ = [
    "TrimConfig",
    "TrimmedResult",
    "BallCheck",
    "trim_weights",
    "trimmed_barycenter",
    "verify_ball_property",
    "variance_curve",
    "brute_force_trimmed",
]

# Slack when comparing cumulative weights against 1 - alpha; cumulative
# sums of weights that sum to one can undershoot the target by a few ulps.
_CUM_TOL = 1e-12


@dataclass(frozen=True)
class TrimConfig:
    """Settings for the iterative trimmed-barycenter search."""

    alpha: float
    restarts: int = 10
    seed: int = 0
    inner_tol: float = 1e-12
    inner_max_iter: int = 1000
    outer_max_iter: int = 100

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise InvalidInput(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.restarts < 1:
            raise InvalidInput("need at least one restart")


@dataclass(frozen=True, eq=False)
class TrimmedResult:
    """Trimmed barycenter plus the diagnostics of the winning restart.

    ``active_weights`` is the renormalized weight vector over the original
    atoms (summing to one, at most one strictly partial entry) and
    ``radius`` is the distance from the barycenter to the farthest atom
    that kept positive weight.
    """

    bary: LocScatter
    active_weights: np.ndarray
    trimmed_variance: float
    outer_iterations: int
    restart_index: int
    radius: float
    variance_history: tuple[float, ...]
    restart_variances: tuple[float, ...]


def trim_weights(distances, weights, alpha: float) -> np.ndarray:
    """Concentrate weights on the atoms nearest to the current center.

    Atoms are ranked by ``distances`` (any monotone transform of distance
    works; squared distances are fine) with ties broken by original index.
    Full weight is kept up to the smallest rank whose cumulative weight
    reaches 1 - alpha, the boundary atom keeps the remainder, everything
    beyond is zeroed, and the kept weights are divided by 1 - alpha.
    """
    if not 0.0 <= alpha < 1.0:
        raise InvalidInput(f"alpha must lie in [0, 1), got {alpha}")
    d = np.asarray(distances, dtype=float)
    lam = np.asarray(weights, dtype=float)
    if d.shape != lam.shape or d.ndim != 1 or d.shape[0] == 0:
        raise BadWeights("distances and weights must be matching vectors")
    if np.any(lam <= 0.0):
        raise BadWeights("weights must be strictly positive")
    if alpha == 0.0:
        return lam.copy()
    target = 1.0 - alpha
    order = np.argsort(d, kind="stable")
    cum = np.cumsum(lam[order])
    reached = np.nonzero(cum >= target - _CUM_TOL)[0]
    if reached.size == 0:
        raise DegenerateTrim(
            f"total weight {cum[-1]!r} cannot cover 1 - alpha = {target!r}")
    boundary = reached[0]
    kept = np.zeros_like(lam)
    kept[order[:boundary]] = lam[order[:boundary]]
    below = cum[boundary - 1] if boundary > 0 else 0.0
    kept[order[boundary]] = min(target - below, lam[order[boundary]])
    return kept / target


def _restart_path(ens: WeightedEnsemble, cfg: TrimConfig, index: int):
    """One multistart path; returns (bary, weights, variance, history)."""
    gen = RngState(cfg.seed).split(index).generator()
    center = ens.members[int(gen.integers(ens.size))]
    lam_final = None
    var = None
    history: list[float] = []
    for _ in range(cfg.outer_max_iter):
        d2 = w2_distances_sq(center, ens.members)
        lam_star = trim_weights(d2, ens.weights, cfg.alpha)
        if lam_final is not None and np.array_equal(lam_star, lam_final):
            break
        active = lam_star > 0.0
        sub = WeightedEnsemble(lam_star[active],
                               tuple(m for m, a in zip(ens.members, active) if a))
        res = fixed_point_barycenter(sub, tol=cfg.inner_tol,
                                     max_iter=cfg.inner_max_iter)
        center = res.bary
        new_var = res.variance
        history.append(new_var)
        stalled = var is not None and var - new_var < 1e-12 * (1.0 + new_var)
        lam_final = lam_star
        var = new_var
        if stalled:
            break
    return center, lam_final, var, history


def trimmed_barycenter(ens: WeightedEnsemble, cfg: TrimConfig) -> TrimmedResult:
    """Best trimmed barycenter over ``cfg.restarts`` seeded starting atoms.

    Each restart starts from a uniformly drawn member, alternates
    concentration (reweighting toward the current center) with estimation
    (recomputing the barycenter of the kept atoms) until the kept-weight
    vector repeats or the trimmed variance stops improving, and the restart
    with the smallest final variance wins; ties go to the lowest restart
    index.  Results depend only on the ensemble and the config.
    """
    paths = map_indexed(lambda r: _restart_path(ens, cfg, r),
                        range(cfg.restarts))
    finals = tuple(p[2] for p in paths)
    best = 0
    for r in range(1, len(paths)):
        if finals[r] < finals[best]:
            best = r
    center, lam_star, var, history = paths[best]
    d2 = w2_distances_sq(center, ens.members)
    radius = float(np.sqrt(np.max(d2[lam_star > 0.0])))
    return TrimmedResult(bary=center, active_weights=lam_star,
                         trimmed_variance=float(var),
                         outer_iterations=len(history),
                         restart_index=best, radius=radius,
                         variance_history=tuple(history),
                         restart_variances=finals)


@dataclass(frozen=True)
class BallCheck:
    """Outcome of the ball-shape verification of a trimmed solution."""

    ok: bool
    radius: float
    violations: tuple[str, ...]


def verify_ball_property(result: TrimmedResult, ens: WeightedEnsemble,
                         alpha: float) -> BallCheck:
    """Check that the kept weights form a ball around the barycenter.

    Atoms strictly inside the radius (the largest distance among atoms with
    positive weight) must keep their full renormalized weight, atoms
    strictly outside must carry none, and at most one atom, sitting on the
    boundary shell, may be partially kept.
    """
    if not 0.0 <= alpha < 1.0:
        raise InvalidInput(f"alpha must lie in [0, 1), got {alpha}")
    lam_star = np.asarray(result.active_weights, dtype=float)
    if lam_star.shape != ens.weights.shape:
        raise BadWeights("active weights do not match the ensemble")
    full = ens.weights / (1.0 - alpha)
    d = np.sqrt(w2_distances_sq(result.bary, ens.members))
    positive = lam_star > 0.0
    violations: list[str] = []
    if not np.any(positive):
        return BallCheck(ok=False, radius=float("nan"),
                         violations=("no atom kept positive weight",))
    radius = float(np.max(d[positive]))
    shell = 1e-9 * (1.0 + radius)
    partial = 0
    for i in range(lam_star.shape[0]):
        w_tol = 1e-9 * full[i]
        if d[i] < radius - shell:
            if abs(lam_star[i] - full[i]) > w_tol:
                violations.append(
                    f"atom {i} strictly inside keeps {lam_star[i]!r} "
                    f"instead of full weight {full[i]!r}")
        elif d[i] > radius + shell:
            if lam_star[i] != 0.0:
                violations.append(
                    f"atom {i} strictly outside keeps weight {lam_star[i]!r}")
        if w_tol < lam_star[i] < full[i] - w_tol:
            partial += 1
            if abs(d[i] - radius) > shell:
                violations.append(
                    f"partially kept atom {i} is off the boundary shell")
    if partial > 1:
        violations.append(f"{partial} atoms are partially kept, expected <= 1")
    total = float(lam_star.sum())
    if abs(total - 1.0) > 1e-9:
        violations.append(f"active weights sum to {total!r}")
    return BallCheck(ok=not violations, radius=radius,
                     violations=tuple(violations))


@dataclass(frozen=True, eq=False)
class CurvePoint:
    alpha: float
    variance: float
    result: TrimmedResult


def variance_curve(ens: WeightedEnsemble, alphas,
                   cfg: TrimConfig) -> list[CurvePoint]:
    """Trimmed variance as a function of the trimming level."""
    alphas = [float(a) for a in alphas]
    if any(not 0.0 <= a < 1.0 for a in alphas):
        raise InvalidInput("every alpha must lie in [0, 1)")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise InvalidInput("alphas must be strictly ascending")
    points = []
    for a in alphas:
        res = trimmed_barycenter(ens, replace(cfg, alpha=a))
        points.append(CurvePoint(alpha=a, variance=res.trimmed_variance,
                                 result=res))
    return points


def brute_force_trimmed(ens: WeightedEnsemble, alpha: float,
                        inner_tol: float = 1e-12,
                        inner_max_iter: int = 1000) -> TrimmedResult:
    """Exhaustive oracle for equal weights and alpha a multiple of 1/k.

    With k equally weighted atoms and alpha = j/k the optimal trimming
    keeps exactly k - j atoms at full weight, so scanning every subset of
    that size and keeping the lowest-variance one (ties resolved toward
    the lexicographically smallest subset) is exact.  Only meant for
    k <= 12.
    """
    k = ens.size
    if k > 12:
        raise UnsupportedConfiguration(f"subset scan limited to k <= 12, got {k}")
    if np.any(np.abs(ens.weights - 1.0 / k) > 1e-9):
        raise UnsupportedConfiguration("subset scan requires equal weights")
    j = round(alpha * k)
    if not 0 <= j < k or abs(alpha - j / k) > 1e-9:
        raise UnsupportedConfiguration(
            f"alpha = {alpha!r} is not a multiple of 1/{k}")
    keep = k - j
    best_var = np.inf
    best_subset = None
    best_bary = None
    for subset in itertools.combinations(range(k), keep):
        sub = WeightedEnsemble(np.full(keep, 1.0 / keep),
                               tuple(ens.members[i] for i in subset))
        res = fixed_point_barycenter(sub, tol=inner_tol,
                                     max_iter=inner_max_iter)
        if res.variance < best_var:
            best_var = res.variance
            best_subset = subset
            best_bary = res.bary
    lam_star = np.zeros(k)
    lam_star[list(best_subset)] = 1.0 / keep
    d2 = w2_distances_sq(best_bary, ens.members)
    radius = float(np.sqrt(np.max(d2[list(best_subset)])))
    return TrimmedResult(bary=best_bary, active_weights=lam_star,
                         trimmed_variance=float(best_var),
                         outer_iterations=0, restart_index=0, radius=radius,
                         variance_history=(float(best_var),),
                         restart_variances=(float(best_var),))

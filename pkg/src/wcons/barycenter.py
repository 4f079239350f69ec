"""Barycenters of weighted location-scatter ensembles.

The barycenter mean is the weighted average of the member means.  The
barycenter scatter is the unique positive definite solution S of

    sum_j lam_j (S^{1/2} S_j S^{1/2})^{1/2} = S

found by the fixed-point iteration

    S <- S^{-1/2} (sum_j lam_j (S^{1/2} S_j S^{1/2})^{1/2})^2 S^{-1/2}

which stays in the positive definite cone and converges from any positive
definite start.  The weighted average of the member S_j is used as the
starting point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadWeights, DimensionMismatch, MaxIterationsExceeded
from .locscatter import LocScatter, w2_distances_sq
from .spd import SpdMatrix, SymMatrix, certify_spd, spd_exp, spd_log, sqrt_psd_batch

__all__ = [
    "WeightedEnsemble",
    "BarycenterResult",
    "fixed_point_barycenter",
    "g_map",
    "barycenter_variance",
    "log_euclidean_mean",
    "linear_mean",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 1000


@dataclass(frozen=True, eq=False)
class WeightedEnsemble:
    """Finitely many family members with strictly positive weights.

    Weights must sum to one within 1e-9 and all members must share a
    dimension.
    """

    weights: np.ndarray
    members: tuple[LocScatter, ...]

    def __post_init__(self):
        lam = np.asarray(self.weights, dtype=float)
        members = tuple(self.members)
        if lam.ndim != 1 or lam.shape[0] != len(members):
            raise BadWeights(
                f"{len(members)} members but weight shape {lam.shape}")
        if len(members) == 0:
            raise BadWeights("ensemble must contain at least one member")
        if np.any(lam <= 0.0) or not np.all(np.isfinite(lam)):
            raise BadWeights("weights must be finite and strictly positive")
        if abs(lam.sum() - 1.0) > 1e-9:
            raise BadWeights(f"weights sum to {float(lam.sum())!r}, expected 1")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise DimensionMismatch(f"members span dimensions {sorted(dims)}")
        lam = lam.copy()
        lam.setflags(write=False)
        object.__setattr__(self, "weights", lam)
        object.__setattr__(self, "members", members)

    @classmethod
    def equal_weights(cls, members) -> "WeightedEnsemble":
        members = tuple(members)
        k = len(members)
        if k == 0:
            raise BadWeights("ensemble must contain at least one member")
        return cls(np.full(k, 1.0 / k), members)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def means(self) -> np.ndarray:
        return np.stack([m.mean for m in self.members])

    def covs(self) -> np.ndarray:
        return np.stack([m.cov.entries for m in self.members])


@dataclass(frozen=True, eq=False)
class BarycenterResult:
    bary: LocScatter
    iterations: int
    residual: float
    variance: float


def _mean_bar(ens: WeightedEnsemble) -> np.ndarray:
    return ens.weights @ ens.means()


def _fixed_point_cov(covs: np.ndarray, lam: np.ndarray, start: np.ndarray,
                     tol: float, max_iter: int) -> tuple[np.ndarray, int, float]:
    """Run the scatter iteration on raw arrays; return (S, steps, residual)."""
    s = start
    for step in range(max_iter + 1):
        spd = certify_spd(s)
        root = spd.sqrt()
        inv_root = spd.inv_sqrt()
        inner = root @ covs @ root
        mixed = np.einsum("k,kij->ij", lam, sqrt_psd_batch(inner))
        mixed = 0.5 * (mixed + mixed.T)
        norm_s = np.linalg.norm(s)
        residual = np.linalg.norm(mixed - s) / norm_s
        s_next = inv_root @ (mixed @ mixed) @ inv_root
        s_next = 0.5 * (s_next + s_next.T)
        change = np.linalg.norm(s_next - s) / norm_s
        if change < tol and residual <= 10.0 * tol:
            return s, step, float(residual)
        s = s_next
    raise MaxIterationsExceeded(
        f"scatter iteration did not converge in {max_iter} steps "
        f"(residual {residual:.3e})",
        last_iterate=s, residual=float(residual))


def fixed_point_barycenter(ens: WeightedEnsemble, tol: float = DEFAULT_TOL,
                           max_iter: int = DEFAULT_MAX_ITER,
                           init: SpdMatrix | None = None) -> BarycenterResult:
    """Barycenter of the ensemble with convergence diagnostics.

    Iterates until the relative Frobenius change of the scatter falls
    below ``tol`` and the relative residual of the fixed-point condition is
    at most ``10 * tol``; raises :class:`MaxIterationsExceeded` otherwise.
    The reported variance is the weighted sum of squared distances from
    the members to the barycenter.
    """
    covs = ens.covs()
    start = init.entries if init is not None else np.einsum(
        "k,kij->ij", ens.weights, covs)
    s, steps, residual = _fixed_point_cov(covs, ens.weights, start, tol, max_iter)
    bary = LocScatter(_mean_bar(ens), certify_spd(s))
    return BarycenterResult(bary=bary, iterations=steps, residual=residual,
                            variance=barycenter_variance(ens, bary))


def g_map(ens: WeightedEnsemble, eta: LocScatter) -> LocScatter:
    """One averaged-transport step applied to the reference member ``eta``.

    Pushing ``eta`` through the weighted average of the optimal maps onto
    the members gives a member whose mean is the weighted mean and whose
    scatter is one step of the barycenter iteration started at ``eta``.
    Iterating this map descends the ensemble variance to the barycenter.
    """
    if eta.dim != ens.dim:
        raise DimensionMismatch(f"reference has dimension {eta.dim}, "
                                f"ensemble {ens.dim}")
    spd = eta.cov
    root = spd.sqrt()
    inv_root = spd.inv_sqrt()
    inner = root @ ens.covs() @ root
    mixed = np.einsum("k,kij->ij", ens.weights, sqrt_psd_batch(inner))
    mixed = 0.5 * (mixed + mixed.T)
    cov = inv_root @ (mixed @ mixed) @ inv_root
    return LocScatter(_mean_bar(ens), certify_spd(0.5 * (cov + cov.T)))


def barycenter_variance(ens: WeightedEnsemble, candidate: LocScatter) -> float:
    """Weighted sum of squared distances from the members to ``candidate``."""
    return float(ens.weights @ w2_distances_sq(candidate, ens.members))


def log_euclidean_mean(ens: WeightedEnsemble) -> LocScatter:
    """Log-Euclidean aggregate: exp of the weighted mean of matrix logs."""
    logs = np.stack([spd_log(m.cov).entries for m in ens.members])
    avg = SymMatrix(np.einsum("k,kij->ij", ens.weights, logs))
    return LocScatter(_mean_bar(ens), spd_exp(avg))


def linear_mean(ens: WeightedEnsemble) -> LocScatter:
    """Arithmetic aggregate: weighted mean of the member scatters."""
    cov = np.einsum("k,kij->ij", ens.weights, ens.covs())
    return LocScatter(_mean_bar(ens), certify_spd(cov))

"""Seeded simulation studies: robust scatter estimation and consensus quality.

The hospital study samples contaminated point clouds for many units, fits
each with a concentration-step covariance estimator, and compares plain,
linear and trimmed aggregation of the per-unit estimates against the clean
target.  The consistency harness tracks how the trimmed barycenter of
growing random ensembles settles down.  Everything is reproducible from a
single 64-bit seed; tasks draw from split sub-streams so execution order
never matters.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from .barycenter import (WeightedEnsemble, fixed_point_barycenter,
                         linear_mean)
from .errors import InvalidInput, SingularSubset
from .locscatter import LocScatter, w2_distance_sq
from .rng import RngState
from .runtime import map_indexed
from .spd import certify_spd
from .trimming import TrimConfig, TrimmedResult, trimmed_barycenter

__all__ = [
    "HospitalConfig",
    "HospitalReport",
    "ConsistencyRow",
    "ConsistencyReport",
    "random_spd",
    "estimate_mcd",
    "c_step_path",
    "hospital_experiment",
    "consistency_harness",
    "gaussian_parameter_law",
    "ellipse_points",
    "ellipse_toy_ensemble",
]

# Split index reserved for the aggregation stage (unit tasks use 0..k-1,
# harness tasks 0..len(n_values)*reps).
_AGGREGATE_TAG = 0x5EED


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, RngState):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise InvalidInput(f"expected RngState or numpy Generator, got {type(rng)}")


def random_spd(dim: int, condition_cap: float, rng) -> "certify_spd":
    """Random positive definite matrix with condition number <= cap.

    Eigenvalues are log-uniform on [cap^-1/2, cap^1/2] and the eigenbasis
    is Haar-distributed orthogonal, so the spectrum is bounded by
    construction.
    """
    if dim < 1:
        raise InvalidInput("dimension must be at least 1")
    if condition_cap < 1.0:
        raise InvalidInput("condition cap must be at least 1")
    gen = _generator(rng)
    half = 0.5 * np.log(condition_cap)
    eigs = np.exp(gen.uniform(-half, half, size=dim))
    q, r = np.linalg.qr(gen.standard_normal((dim, dim)))
    q = q * np.where(np.diag(r) >= 0.0, 1.0, -1.0)
    m = (q * eigs) @ q.T
    return certify_spd(0.5 * (m + m.T))


def _ml_fit(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = points.mean(axis=0)
    centered = points - mean
    return mean, centered.T @ centered / points.shape[0]


def c_step_path(points: np.ndarray, h: int, mean: np.ndarray,
                cov: np.ndarray, max_steps: int = 100):
    """Concentration steps from an initial fit until the support repeats.

    Each step keeps the ``h`` points with smallest Mahalanobis distance
    (ties by original index) and refits mean and maximum-likelihood
    covariance on them; the covariance determinant never increases along
    the path.  Returns ``(mean, cov, support, logdet_history)``.
    """
    support_prev = None
    history: list[float] = []
    for _ in range(max_steps):
        delta = points - mean
        try:
            sol = np.linalg.solve(cov, delta.T)
        except np.linalg.LinAlgError:
            raise SingularSubset("covariance became singular during refit")
        md = np.einsum("ij,ji->i", delta, sol)
        support = np.sort(np.argsort(md, kind="stable")[:h])
        if support_prev is not None and np.array_equal(support, support_prev):
            break
        mean, cov = _ml_fit(points[support])
        sign, logdet = np.linalg.slogdet(cov)
        if sign <= 0:
            raise SingularSubset("support subset has singular covariance")
        history.append(float(logdet))
        support_prev = support
    return mean, cov, support_prev, history


def estimate_mcd(points: np.ndarray, h: int, restarts: int, rng) -> LocScatter:
    """Minimum-covariance-determinant style location and scatter estimate.

    ``restarts`` random (d+1)-point subsets seed concentration paths; the
    final fit with the smallest determinant wins (ties keep the earliest
    restart).  Singular subsets are redrawn, giving up after 10 * restarts
    attempts.  No consistency correction is applied: the raw h-subset
    maximum-likelihood covariance is returned.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise InvalidInput(f"points must be (n, d), got shape {pts.shape}")
    n, d = pts.shape
    if not d + 1 <= h <= n:
        raise InvalidInput(f"need d+1 <= h <= n, got h={h}, n={n}, d={d}")
    if restarts < 1:
        raise InvalidInput("need at least one restart")
    gen = _generator(rng)
    attempts = 10 * restarts
    completed = 0
    best = None
    while completed < restarts:
        if attempts == 0:
            raise SingularSubset(
                f"no nonsingular fit in {10 * restarts} attempts")
        attempts -= 1
        subset = gen.choice(n, size=d + 1, replace=False)
        try:
            mean0, cov0 = _ml_fit(pts[subset])
            mean, cov, _, history = c_step_path(pts, h, mean0, cov0)
        except SingularSubset:
            continue
        completed += 1
        logdet = history[-1]
        if best is None or logdet < best[0]:
            best = (logdet, mean, cov)
    return LocScatter(best[1], certify_spd(best[2]))


def _standard_gaussian(dim: int) -> LocScatter:
    return LocScatter(np.zeros(dim), certify_spd(np.eye(dim)))


@dataclass(frozen=True)
class HospitalConfig:
    """Settings for the contaminated multi-unit estimation study."""

    k: int = 100
    n: int = 100
    inlier: LocScatter = field(
        default_factory=lambda: _standard_gaussian(2))
    outlier: LocScatter = field(
        default_factory=lambda: LocScatter(np.array([4.0, 4.0]),
                                           certify_spd(np.eye(2))))
    contamination_beta: tuple[float, float] | None = (4.0, 36.0)
    mcd_fraction: float = 0.8
    alpha_trim: float = 0.2
    seed: int = 0
    mcd_restarts: int = 5
    trim_restarts: int = 10

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise InvalidInput("k and n must be positive")
        if self.inlier.dim != self.outlier.dim:
            raise InvalidInput("inlier and outlier dimensions differ")
        if self.contamination_beta is not None:
            a, b = self.contamination_beta
            if a <= 0.0 or b <= 0.0:
                raise InvalidInput("Beta parameters must be positive")
        if not 0.0 < self.mcd_fraction <= 1.0:
            raise InvalidInput("mcd_fraction must lie in (0, 1]")
        if not 0.0 <= self.alpha_trim < 1.0:
            raise InvalidInput("alpha_trim must lie in [0, 1)")


@dataclass(frozen=True, eq=False)
class HospitalReport:
    """Distances of three aggregates to the clean target, plus diagnostics."""

    w2_sq_barycenter: float
    w2_sq_trimmed: float
    w2_sq_linear: float
    unit_outlier_counts: tuple[int, ...]
    units_over_20pct: int
    barycenter: LocScatter
    trimmed: TrimmedResult
    linear: LocScatter
    config: HospitalConfig


def mcd_consistency_factor(coverage: float, dim: int) -> float:
    """Expected shrinkage of the covariance of the central ``coverage``
    fraction of a Gaussian sample; dividing a raw h-subset covariance by
    this factor makes the estimate consistent on clean data."""
    q = chi2.ppf(coverage, dim)
    return float(chi2.cdf(q, dim + 2) / coverage)


def _sample_member(p: LocScatter, count: int,
                   gen: np.random.Generator) -> np.ndarray:
    z = gen.standard_normal((count, p.dim))
    return p.mean + z @ p.cov.sqrt()


def _hospital_unit(cfg: HospitalConfig, index: int) -> tuple[LocScatter, int]:
    gen = RngState(cfg.seed).split(index).generator()
    if cfg.contamination_beta is None:
        p = 0.0
    else:
        p = gen.beta(*cfg.contamination_beta)
    mask = gen.random(cfg.n) < p
    clean = _sample_member(cfg.inlier, cfg.n, gen)
    bad = _sample_member(cfg.outlier, cfg.n, gen)
    points = np.where(mask[:, None], bad, clean)
    h = round(cfg.mcd_fraction * cfg.n)
    est = estimate_mcd(points, h, cfg.mcd_restarts, gen)
    scale = 1.0 / mcd_consistency_factor(cfg.mcd_fraction, cfg.inlier.dim)
    est = LocScatter(est.mean, certify_spd(scale * est.cov.entries))
    return est, int(mask.sum())


def hospital_experiment(cfg: HospitalConfig) -> HospitalReport:
    """Run the full study for one seed.

    Every unit draws its contamination level from the Beta law, samples a
    mixture cloud, and reports a robust location-scatter estimate whose
    covariance is rescaled by the clean-data consistency factor for the
    configured coverage (the raw h-subset covariance systematically
    underestimates scale).  The per-unit estimates are aggregated by plain
    barycenter, trimmed barycenter and linear averaging; each aggregate is
    scored by squared distance to the clean target.
    """
    units = map_indexed(lambda i: _hospital_unit(cfg, i), range(cfg.k))
    estimates = tuple(u[0] for u in units)
    counts = tuple(u[1] for u in units)
    ens = WeightedEnsemble.equal_weights(estimates)
    plain = fixed_point_barycenter(ens).bary
    trim_seed = RngState(cfg.seed).split(_AGGREGATE_TAG).seed
    trimmed = trimmed_barycenter(ens, TrimConfig(
        alpha=cfg.alpha_trim, restarts=cfg.trim_restarts, seed=trim_seed))
    linear = linear_mean(ens)
    target = cfg.inlier
    return HospitalReport(
        w2_sq_barycenter=w2_distance_sq(plain, target),
        w2_sq_trimmed=w2_distance_sq(trimmed.bary, target),
        w2_sq_linear=w2_distance_sq(linear, target),
        unit_outlier_counts=counts,
        units_over_20pct=sum(1 for c in counts if c > 0.2 * cfg.n),
        barycenter=plain, trimmed=trimmed, linear=linear, config=cfg)


def gaussian_parameter_law(dim: int = 2, mean_scale: float = 0.3,
                           condition_cap: float = 4.0):
    """Law of a random member: Gaussian mean, bounded-condition scatter."""

    def draw(gen: np.random.Generator) -> LocScatter:
        mean = mean_scale * gen.standard_normal(dim)
        return LocScatter(mean, random_spd(dim, condition_cap, gen))

    return draw


@dataclass(frozen=True, eq=False)
class ConsistencyRow:
    n: int
    median_w2_sq_to_reference: float
    median_trimmed_variance: float
    variance_gap: float


@dataclass(frozen=True, eq=False)
class ConsistencyReport:
    rows: tuple[ConsistencyRow, ...]
    reference: TrimmedResult
    alpha: float
    reps: int
    seed: int


def consistency_harness(law, n_values, alpha: float, reps: int,
                        seed: int, restarts: int = 3) -> ConsistencyReport:
    """Concentration of the trimmed barycenter as ensembles grow.

    For each ensemble size the median squared distance to a reference
    solution (computed from a dedicated draw at the largest size) and the
    median trimmed variance are reported; the variance gap column is the
    absolute difference to the reference variance.
    """
    n_values = [int(n) for n in n_values]
    if not n_values or any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise InvalidInput("ensemble sizes must be strictly ascending")
    if n_values[0] < 1 or reps < 1:
        raise InvalidInput("sizes and reps must be positive")
    base = RngState(seed)

    def solve(state: RngState, count: int) -> TrimmedResult:
        gen = state.generator()
        members = tuple(law(gen) for _ in range(count))
        ens = WeightedEnsemble.equal_weights(members)
        cfg = TrimConfig(alpha=alpha, restarts=restarts,
                         seed=state.split(_AGGREGATE_TAG).seed)
        return trimmed_barycenter(ens, cfg)

    def task(t: int) -> TrimmedResult:
        i, _ = divmod(t, reps)
        return solve(base.split(t), n_values[i])

    results = map_indexed(task, range(len(n_values) * reps))
    reference = solve(base.split(len(n_values) * reps), max(n_values))
    rows = []
    for i, n in enumerate(n_values):
        batch = results[i * reps:(i + 1) * reps]
        dists = [w2_distance_sq(r.bary, reference.bary) for r in batch]
        variances = [r.trimmed_variance for r in batch]
        rows.append(ConsistencyRow(
            n=n,
            median_w2_sq_to_reference=float(np.median(dists)),
            median_trimmed_variance=float(np.median(variances)),
            variance_gap=float(abs(np.median(variances)
                                   - reference.trimmed_variance))))
    return ConsistencyReport(rows=tuple(rows), reference=reference,
                             alpha=alpha, reps=reps, seed=seed)


def ellipse_points(p: LocScatter, count: int) -> np.ndarray:
    """Points of the one-standard-deviation ellipse of a planar member."""
    if p.dim != 2:
        raise InvalidInput("ellipse tracing requires dimension 2")
    if count < 1:
        raise InvalidInput("count must be positive")
    theta = 2.0 * np.pi * np.arange(count) / count
    circle = np.column_stack([np.cos(theta), np.sin(theta)])
    return p.mean + circle @ p.cov.sqrt()


def ellipse_toy_ensemble():
    """The six-member planar toy ensemble shipped with the package.

    Four overlapping near-horizontal ellipses around the origin plus two
    well-separated outliers at indices 4 and 5; trimming one sixth removes
    the far outlier (index 4), one third removes both.  Returns the
    ensemble and the member labels.
    """
    from .ensemble_io import parse_ensemble_text
    ref = importlib.resources.files("wcons").joinpath("data/ellipse_toy.json")
    return parse_ensemble_text(ref.read_text(encoding="utf-8"))

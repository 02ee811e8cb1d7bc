"""Deterministic Monte Carlo for the mean of T^2 / k.

Replication ``r`` of a configuration with seed ``s`` draws every random number
from ``numpy.random.default_rng([s, r])``.  Results therefore depend only on the
configuration, never on chunking or on the number of worker processes.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ellipse import a1_bound, solve_a2
from .equicorr import EquicorrModel, ShiftAlternative, t_star_squared
from .exceptions import InvalidInput
from .hotelling import normalizer, t2_statistics
from .linalg import equicorrelation, solve_spd
from .utils.validation import check_positive_int, check_seed

DEFAULT_SEED = 20100315
WORKERS_ENV = "HOTELLING_EQUICORR_WORKERS"
_CHUNK = 250


@dataclass(frozen=True)
class SimConfig:
    model: EquicorrModel
    delta: tuple
    n_x: int
    n_y: int
    reps: int = 1000
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        delta = self.delta
        if isinstance(delta, ShiftAlternative):
            delta = delta.delta(self.model.n)
        delta = tuple(float(v) for v in delta)
        if len(delta) != self.model.n:
            raise InvalidInput(f"delta has length {len(delta)}, model has n={self.model.n}")
        if not all(math.isfinite(v) for v in delta):
            raise InvalidInput("delta must be finite")
        object.__setattr__(self, "delta", delta)
        check_positive_int(self.n_x, "n_x", 2)
        check_positive_int(self.n_y, "n_y", 2)
        check_positive_int(self.reps, "reps", 1)
        check_seed(self.seed)
        if self.model.n >= self.n_x + self.n_y - 1:
            raise InvalidInput(
                f"n={self.model.n} needs n < n_x + n_y - 1 = {self.n_x + self.n_y - 1}"
            )


@dataclass(frozen=True)
class SimSummary:
    mean_t2_over_k: float
    variance_of_mean: float
    reps_used: int
    config_echo: SimConfig


def replication_rng(seed, index):
    return np.random.default_rng([seed, index])


def sample_equicorr_mvn(model, mean, count, rng):
    """``count`` draws from N(mean, equicorrelation(n, rho)).

    Uses X = mean + sqrt(rho) Z0 1 + sqrt(1 - rho) Z with one shared normal
    Z0 per observation, which is exact for this covariance.
    """
    mean = np.asarray(mean, dtype=float)
    if mean.shape != (model.n,):
        raise InvalidInput(f"mean must have length {model.n}")
    count = check_positive_int(count, "count")
    z = rng.standard_normal((count, model.n + 1))
    return mean + math.sqrt(model.rho) * z[:, :1] + math.sqrt(1.0 - model.rho) * z[:, 1:]


def _replicate_block(cfg, start, stop):
    n = cfg.model.n
    mu_y = -np.asarray(cfg.delta)
    zero = np.zeros(n)
    xs = np.empty((stop - start, cfg.n_x, n))
    ys = np.empty((stop - start, cfg.n_y, n))
    for i, r in enumerate(range(start, stop)):
        rng = replication_rng(cfg.seed, r)
        xs[i] = sample_equicorr_mvn(cfg.model, zero, cfg.n_x, rng)
        ys[i] = sample_equicorr_mvn(cfg.model, mu_y, cfg.n_y, rng)
    return t2_statistics(xs, ys) / normalizer(cfg.n_x, cfg.n_y)


def worker_count():
    """Worker processes requested through the environment (default 1)."""
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    return max(value, 1)


def _blocks(reps):
    return [(s, min(s + _CHUNK, reps)) for s in range(0, reps, _CHUNK)]


def simulate_values(cfg, workers=None):
    """Per-replication T^2 / k values in replication order."""
    workers = worker_count() if workers is None else max(int(workers), 1)
    blocks = _blocks(cfg.reps)
    if workers == 1 or len(blocks) == 1:
        parts = [_replicate_block(cfg, a, b) for a, b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_replicate_block, [cfg] * len(blocks),
                                  [a for a, _ in blocks], [b for _, b in blocks]))
    return np.concatenate(parts)


def summarize(values, cfg):
    values = np.asarray(values, dtype=float)
    reps = values.size
    mean = math.fsum(values) / reps
    if reps > 1:
        var = math.fsum((values - mean) ** 2) / (reps - 1)
    else:
        var = 0.0
    return SimSummary(mean, var / reps, reps, cfg)


def run_simulation(cfg, workers=None):
    """Mean of T^2 / k over ``cfg.reps`` replications, with its MC variance.

    X ~ N(0, Sigma) and Y ~ N(-delta, Sigma) so that mu_x - mu_y = delta.
    NotPositiveDefinite from a singular pooled covariance is not caught.
    """
    return summarize(simulate_values(cfg, workers), cfg)


def expected_t2_over_k(sigma, delta, n_x, n_y):
    """Exact E[T^2 / k] from the noncentral F mean.

    ``sigma`` is a covariance matrix or an :class:`EquicorrModel`.  With
    N = n_x + n_y and lambda = k delta' Sigma^-1 delta this is
    (N - 2)(n + lambda) / ((N - n - 3) k).
    """
    if isinstance(sigma, EquicorrModel):
        sigma = equicorrelation(sigma.n, sigma.rho)
    sigma = np.asarray(sigma, dtype=float)
    delta = np.asarray(delta, dtype=float)
    n = sigma.shape[-1]
    if delta.shape != (n,):
        raise InvalidInput(f"delta must have length {n}")
    total = n_x + n_y
    if n >= total - 3:
        raise InvalidInput(f"mean of T^2 is infinite unless n < n_x + n_y - 3 (n={n}, N={total})")
    k = normalizer(n_x, n_y)
    lam = k * float(delta @ solve_spd(sigma, delta))
    return (total - 2) * (n + lam) / ((total - n - 3) * k)


def sample_size(n, ns_factor):
    """round(ns_factor * n), halves rounded up."""
    return int(math.floor(ns_factor * n + 0.5 + 1e-9))


def config_seed(master_seed, *index):
    """Seed for one configuration of a multi-configuration run."""
    ss = np.random.SeedSequence([check_seed(master_seed), *index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class CurvePoint:
    m: int
    mean_t2_over_k: float
    variance_of_mean: float
    t_star_squared: float
    expected_t2_over_k: float


def figure3_curve(n, rho, ns_factor, reps=1000, seed=DEFAULT_SEED, workers=None):
    """Simulated and theoretical statistic for m = 1..n unit shifts."""
    model = EquicorrModel(n, rho)
    if n < 2:
        raise InvalidInput("figure3_curve needs n >= 2")
    n_s = sample_size(n, ns_factor)
    points = []
    for m in range(1, n + 1):
        alt = ShiftAlternative(m)
        cfg = SimConfig(model, alt, n_s, n_s, reps, config_seed(seed, m))
        summary = run_simulation(cfg, workers)
        if n < 2 * n_s - 3:
            exact = expected_t2_over_k(model, cfg.delta, n_s, n_s)
        else:
            exact = None
        points.append(CurvePoint(m, summary.mean_t2_over_k, summary.variance_of_mean,
                                 t_star_squared(model, alt), exact))
    return points


TABLE1_RHOS = (0.3, 0.9)
TABLE1_SAMPLE_SIZES = (5, 10, 20)
# reference a1 abscissae, two decimals
TABLE1_ABSCISSAE = {
    0.3: (-0.84, -0.63, -0.42, -0.21, 0.00, 0.21, 0.42, 0.63, 0.84, 1.05),
    0.9: (-1.83, -1.38, -0.92, -0.46, 0.00, 0.46, 0.92, 1.38, 1.83, 2.29),
}
# spacing used for other rho: fractions of the a1 bound
_ABSCISSA_FRACTIONS = tuple(-0.8 + 0.2 * j for j in range(10))


def table1_abscissae(rho):
    if rho in TABLE1_ABSCISSAE:
        return TABLE1_ABSCISSAE[rho]
    bound = a1_bound(rho)
    return tuple(round(f * bound, 2) for f in _ABSCISSA_FRACTIONS)


def table1_shifts(rho):
    """Ten shifts on the unit iso-power curve at the table's a1 abscissae.

    The upper root a2 is taken.  An abscissa that rounds past the a1 bound is
    pulled back onto it, where the two roots merge.
    """
    bound = a1_bound(rho)
    shifts = []
    for a1 in table1_abscissae(rho):
        if abs(a1) > bound:
            a1 = math.copysign(bound, a1)
        roots = solve_a2(rho, a1) or (rho * a1,)
        shifts.append((a1, max(roots)))
    return shifts


@dataclass(frozen=True)
class Table1Cell:
    rho: float
    a1: float
    a2: float
    ns: int
    mean_t2_over_k: float
    variance_of_mean: float
    expected_t2_over_k: float
    t_star_squared: float


@dataclass(frozen=True)
class Table1Column:
    rho: float
    ns: int
    across_row_variance: float
    mean_variance_of_mean: float


def table1(rhos: Sequence[float] = TABLE1_RHOS, sample_sizes: Sequence[int] = TABLE1_SAMPLE_SIZES,
           reps=1000, seed=DEFAULT_SEED, workers: Optional[int] = None):
    """Two-dimensional Table 1 protocol: cells and per-column variances."""
    cells, columns = [], []
    for i, rho in enumerate(rhos):
        model = EquicorrModel(2, rho)
        shifts = table1_shifts(rho)
        for j, ns in enumerate(sample_sizes):
            means, mc_vars = [], []
            for row, (a1, a2) in enumerate(shifts):
                cfg = SimConfig(model, (a1, a2), ns, ns, reps, config_seed(seed, i, j, row))
                summary = run_simulation(cfg, workers)
                sigma = equicorrelation(2, rho)
                tstar = float(np.array([a1, a2]) @ solve_spd(sigma, np.array([a1, a2])))
                cells.append(Table1Cell(rho, a1, a2, ns, summary.mean_t2_over_k,
                                        summary.variance_of_mean,
                                        expected_t2_over_k(model, (a1, a2), ns, ns), tstar))
                means.append(summary.mean_t2_over_k)
                mc_vars.append(summary.variance_of_mean)
            columns.append(Table1Column(rho, ns, float(np.var(means, ddof=1)),
                                        math.fsum(mc_vars) / len(mc_vars)))
    return cells, columns

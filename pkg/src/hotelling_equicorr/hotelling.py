"""Two-sample Hotelling T^2 test.

The exact path uses the F transform

    (n_x + n_y - n - 1) / (n (n_x + n_y - 2)) * T^2  ~  F(n, n_x + n_y - n - 1)

and requires ``n < n_x + n_y - 1``.  Outside that range the pooled covariance
is singular; :func:`permutation_test` swaps the inverse for a Moore-Penrose
pseudo-inverse and calibrates by relabelling the pooled observations.
"""

from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .exceptions import DegenerateDimension
from .linalg import DEFAULT_RANK_TOL, cho_solve, cholesky, pseudo_inverse
from .special import f_sf
from .utils.validation import check_positive_int, check_seed, check_two_samples

EXACT_F = "exact_f"
PERMUTATION = "permutation"

MIN_PERMUTATIONS = 100
# relative slack when counting permuted statistics that tie the observed one
TIE_RTOL = 1e-10
_PERM_CHUNK = 512


@dataclass(frozen=True)
class HotellingResult:
    t2: float
    k: float
    f_stat: Optional[float]
    df1: int
    df2: Optional[int]
    p_value: float
    method: str
    n_permutations: Optional[int] = None

    def to_dict(self):
        return asdict(self)


def normalizer(n_x, n_y):
    """k = n_x n_y / (n_x + n_y)."""
    return n_x * n_y / (n_x + n_y)


def f_transform(t2, n, n_x, n_y):
    return t2 * (n_x + n_y - n - 1) / (n * (n_x + n_y - 2))


def _scatter(x):
    centred = x - x.mean(axis=-2, keepdims=True)
    return np.einsum("...ki,...kj->...ij", centred, centred)


def _mean_diff_and_pooled(x, y):
    # works on single samples (n_obs, n) and on stacks (..., n_obs, n)
    n_x, n_y = x.shape[-2], y.shape[-2]
    diff = x.mean(axis=-2) - y.mean(axis=-2)
    S = (_scatter(x) + _scatter(y)) / (n_x + n_y - 2)
    S = 0.5 * (S + np.swapaxes(S, -1, -2))
    return diff, S


def pooled_covariance(x, y):
    """Pooled within-group covariance with divisor n_x + n_y - 2."""
    x, y = check_two_samples(x, y)
    return _mean_diff_and_pooled(x, y)[1]


def t2_statistics(x, y):
    """T^2 for a stack of sample pairs ``x (..., n_x, n)``, ``y (..., n_y, n)``.

    No validation; raises NotPositiveDefinite if any pooled covariance is
    singular.
    """
    diff, S = _mean_diff_and_pooled(x, y)
    L = cholesky(S)
    quad = np.einsum("...i,...i->...", diff, cho_solve(L, diff))
    return normalizer(x.shape[-2], y.shape[-2]) * quad


def _pinv_statistics(x, y, rank_tol):
    diff, S = _mean_diff_and_pooled(x, y)
    quad = np.einsum("...i,...ij,...j->...", diff, pseudo_inverse(S, rank_tol), diff)
    return normalizer(x.shape[-2], y.shape[-2]) * quad


def hotelling_t2(x, y):
    """Exact two-sample Hotelling test.

    Parameters
    ----------
    x, y : array-like of shape (n_obs, n_vars)
        Observations of the two groups, one row per observation.

    Returns
    -------
    HotellingResult
        With ``method == "exact_f"``.

    Raises
    ------
    DegenerateDimension
        If ``n_vars >= n_x + n_y - 1``.
    NotPositiveDefinite
        If the pooled covariance is numerically singular.
    """
    x, y = check_two_samples(x, y)
    n_x, n_y, n = x.shape[0], y.shape[0], x.shape[1]
    if n >= n_x + n_y - 1:
        raise DegenerateDimension(
            f"n={n} variables with n_x={n_x}, n_y={n_y}: need n < n_x + n_y - 1; "
            "use the permutation test"
        )
    t2 = max(float(t2_statistics(x, y)), 0.0)
    f_stat = f_transform(t2, n, n_x, n_y)
    df2 = n_x + n_y - n - 1
    return HotellingResult(
        t2=t2,
        k=normalizer(n_x, n_y),
        f_stat=f_stat,
        df1=n,
        df2=df2,
        p_value=f_sf(f_stat, n, df2),
        method=EXACT_F,
    )


def permutation_indices(n_total, seed, index):
    """Shuffled pooled indices for permutation ``index``; depends only on (seed, index)."""
    rng = np.random.default_rng([seed, index])
    return rng.permutation(n_total)


def permutation_test(x, y, reps=5000, seed=20100315, rank_tol=DEFAULT_RANK_TOL):
    """Permutation Hotelling test with a pseudo-inverse pooled covariance.

    The p-value is ``(1 + #{permuted >= observed}) / (reps + 1)``. Each
    relabelling draws from its own generator keyed by ``(seed, i)``, so the
    result does not depend on how permutations are batched.
    """
    x, y = check_two_samples(x, y)
    reps = check_positive_int(reps, "reps", MIN_PERMUTATIONS)
    seed = check_seed(seed)
    n_x, n_y, n = x.shape[0], y.shape[0], x.shape[1]
    pooled = np.vstack([x, y])
    n_total = n_x + n_y

    observed = max(float(_pinv_statistics(x, y, rank_tol)), 0.0)
    threshold = observed - TIE_RTOL * max(observed, 1.0)

    exceed = 0
    for start in range(0, reps, _PERM_CHUNK):
        stop = min(start + _PERM_CHUNK, reps)
        idx = np.stack([permutation_indices(n_total, seed, i) for i in range(start, stop)])
        shuffled = pooled[idx]
        stats = _pinv_statistics(shuffled[:, :n_x], shuffled[:, n_x:], rank_tol)
        exceed += int(np.count_nonzero(stats >= threshold))

    df2 = n_total - n - 1
    return HotellingResult(
        t2=observed,
        k=normalizer(n_x, n_y),
        f_stat=f_transform(observed, n, n_x, n_y) if df2 > 0 else None,
        df1=n,
        df2=df2 if df2 > 0 else None,
        p_value=(1 + exceed) / (reps + 1),
        method=PERMUTATION,
        n_permutations=reps,
    )


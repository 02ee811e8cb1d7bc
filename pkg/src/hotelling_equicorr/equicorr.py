"""Closed-form population statistic under equicorrelation.

With unit variances and common correlation ``rho`` the inverse covariance has
diagonal ``alpha`` and off-diagonal ``-beta``.  Shifting the first ``m`` of
``n`` coordinates by ``a`` gives the population statistic

    T*^2(m) = a^2 m (1 + (n - m - 1) rho) / ((1 - rho)(1 + (n - 1) rho))

which is the large-sample limit of ``T^2 / k``.  Everything here is evaluated
from these factored expressions, never by inverting a matrix.

Sign of the one-vs-all gap: evaluating T*^2 directly gives

    T*^2(1) - T*^2(n) = -(n - 1)(1 - 2 rho) / ((1 - rho)(1 + (n - 1) rho))

so the gap is negative exactly when rho < 0.5.  The often-quoted form without
the leading minus has the opposite sign.
"""

import math
from dataclasses import dataclass

from .exceptions import InvalidInput

# increments this small relative to their terms count as ties in argmax_m
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class EquicorrModel:
    """Dimension ``n`` and common correlation ``rho`` in [0, 1)."""

    n: int
    rho: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInput(f"n must be a positive integer, got {self.n!r}")
        if not (0.0 <= self.rho < 1.0):
            raise InvalidInput(f"rho must lie in [0, 1), got {self.rho!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def denominator(self):
        return (1.0 - self.rho) * (1.0 + (self.n - 1) * self.rho)


@dataclass(frozen=True)
class InverseCoefficients:
    alpha: float
    beta: float


@dataclass(frozen=True)
class ShiftAlternative:
    """First ``m`` coordinates shifted by ``a``, the rest unshifted."""

    m: int
    a: float = 1.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise InvalidInput(f"m must be a nonnegative integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))

    def delta(self, n):
        """Shift vector of length ``n``."""
        if self.m > n:
            raise InvalidInput(f"m={self.m} exceeds dimension n={n}")
        return [self.a] * self.m + [0.0] * (n - self.m)


def _check_m(model, m, upper):
    if int(m) != m or not 0 <= m <= upper:
        raise InvalidInput(f"m must be an integer in [0, {upper}], got {m!r}")


def inverse_coefficients(model):
    d = model.denominator
    return InverseCoefficients(
        alpha=(1.0 + (model.n - 2) * model.rho) / d,
        beta=model.rho / d,
    )


def t_star_squared(model, alt):
    """Population statistic for ``alt`` under ``model``."""
    _check_m(model, alt.m, model.n)
    m, n, rho = alt.m, model.n, model.rho
    return alt.a * alt.a * (m * (1.0 + (n - m - 1) * rho) / model.denominator)


def increment(model, m):
    """T*^2(m + 1) - T*^2(m) for unit shifts, i.e. alpha - 2 m beta."""
    _check_m(model, m, model.n - 1)
    return (1.0 + (model.n - 2 * m - 2) * model.rho) / model.denominator


def increment_positive_threshold(n, m):
    """Supremum of rho for which adding coordinate m+1 still raises T*^2.

    Returns None when the increment is positive for every rho in [0, 1).
    """
    if int(n) != n or n < 1:
        raise InvalidInput(f"n must be a positive integer, got {n!r}")
    if int(m) != m or not 0 <= m < n:
        raise InvalidInput(f"m must be an integer in [0, {n - 1}], got {m!r}")
    h2 = 2 * m + 2 - n
    if h2 <= 0:
        return None
    return 1.0 / h2


def one_vs_all_gap(model):
    """T*^2(1) - T*^2(n): negative iff rho < 0.5, exactly zero at rho = 0.5."""
    if model.n < 2:
        raise InvalidInput("one_vs_all_gap needs n >= 2")
    return -(model.n - 1) * (1.0 - 2.0 * model.rho) / model.denominator


def continuous_argmax(model):
    """Stationary point (1 + (n - 1) rho) / (2 rho) of m -> T*^2(m)."""
    if model.rho == 0:
        return math.inf
    return (1.0 + (model.n - 1) * model.rho) / (2.0 * model.rho)


def argmax_m(model):
    """Integer m in [1, n] maximising T*^2, ties broken toward smaller m.

    T*^2 is concave in m, so only the two integers around the stationary
    point need checking.  For rho = 0 T*^2 = m and the answer is n.
    """
    if model.rho == 0:
        return model.n
    m_star = continuous_argmax(model)
    lo = min(max(int(math.floor(m_star)), 1), model.n)
    if lo == model.n:
        return lo
    # T*^2(lo + 1) - T*^2(lo) has the sign of 1 + (n - 2 lo - 2) rho
    step = (model.n - 2 * lo - 2) * model.rho
    if 1.0 + step > TIE_RTOL * (1.0 + abs(step)):
        return lo + 1
    return lo

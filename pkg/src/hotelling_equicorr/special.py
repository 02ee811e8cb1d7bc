"""Regularized incomplete beta function and the central F distribution."""

import math

from .exceptions import InvalidInput

MAX_ITER = 300
CF_EPS = 1e-14
_TINY = 1e-300


def _betacf(a, b, x):
    # modified Lentz evaluation of the continued fraction for I_x(a, b)
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def _front(a, b, x):
    log_bt = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    return math.exp(log_bt)


def betainc(a, b, x):
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise InvalidInput("betainc needs a > 0 and b > 0")
    if not 0.0 <= x <= 1.0:
        raise InvalidInput(f"betainc needs 0 <= x <= 1, got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x < (a + 1.0) / (a + b + 2.0):
        return _front(a, b, x) * _betacf(a, b, x) / a
    return 1.0 - _front(a, b, x) * _betacf(b, a, 1.0 - x) / b


def betainc_complement(a, b, x):
    """1 - I_x(a, b), evaluated without cancellation in the upper tail."""
    if a <= 0 or b <= 0:
        raise InvalidInput("betainc needs a > 0 and b > 0")
    if not 0.0 <= x <= 1.0:
        raise InvalidInput(f"betainc needs 0 <= x <= 1, got {x!r}")
    if x == 0.0:
        return 1.0
    if x == 1.0:
        return 0.0
    if x < (a + 1.0) / (a + b + 2.0):
        return 1.0 - _front(a, b, x) * _betacf(a, b, x) / a
    return _front(a, b, x) * _betacf(b, a, 1.0 - x) / b


def _check_f_args(x, d1, d2):
    if not x >= 0:
        raise InvalidInput(f"F quantile must be nonnegative, got {x!r}")
    if d1 <= 0 or d2 <= 0:
        raise InvalidInput(f"degrees of freedom must be positive, got ({d1}, {d2})")


def f_cdf(x, d1, d2):
    """P(F <= x) for F ~ F(d1, d2)."""
    _check_f_args(x, d1, d2)
    if math.isinf(x):
        return 1.0
    if x == 0:
        return 0.0
    # z = d1 x / (d1 x + d2), written to keep 1 - z accurate
    z = d1 * x / (d1 * x + d2)
    if z > 0.5:
        return betainc_complement(d2 / 2.0, d1 / 2.0, d2 / (d1 * x + d2))
    return betainc(d1 / 2.0, d2 / 2.0, z)


def f_sf(x, d1, d2):
    """P(F > x) for F ~ F(d1, d2); the upper-tail p-value."""
    _check_f_args(x, d1, d2)
    if math.isinf(x):
        return 0.0
    if x == 0:
        return 1.0
    z = d1 * x / (d1 * x + d2)
    if z > 0.5:
        return betainc(d2 / 2.0, d1 / 2.0, d2 / (d1 * x + d2))
    return betainc_complement(d1 / 2.0, d2 / 2.0, z)

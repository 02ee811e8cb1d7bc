"""Two-dimensional iso-power curves.

For ``n = 2`` a shift ``(a1, a2)`` has the same population statistic as the
unit shift ``(1, 0)`` exactly when

    a1^2 + a2^2 - 2 rho a1 a2 - 1 = 0.

Rotating by +pi/4 turns this into ``x^2 (1 - rho) + y^2 (1 + rho) = 1``: an
ellipse with major radius ``1/sqrt(1 - rho)`` along a1 = a2 and minor radius
``1/sqrt(1 + rho)`` along a1 = -a2.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidInput

ROTATION_ANGLE = math.pi / 4
DISCRIMINANT_TOL = 1e-12


class ShiftPair(NamedTuple):
    a1: float
    a2: float


def _check_rho(rho):
    if not 0.0 <= rho < 1.0:
        raise InvalidInput(f"rho must lie in [0, 1), got {rho!r}")


def principal_radii(rho):
    """(major, minor) radii of the unit iso-power ellipse."""
    _check_rho(rho)
    return math.sqrt(1.0 / (1.0 - rho)), math.sqrt(1.0 / (1.0 + rho))


@dataclass(frozen=True)
class IsoPowerEllipse:
    rho: float
    major_radius: float
    minor_radius: float
    rotation_angle: float = ROTATION_ANGLE

    @classmethod
    def from_rho(cls, rho):
        major, minor = principal_radii(rho)
        return cls(float(rho), major, minor)

    def point(self, t):
        """Pair at parameter angle ``t`` (t = 0 lies on the a1 = a2 axis)."""
        x = self.major_radius * np.cos(t)
        y = self.minor_radius * np.sin(t)
        c, s = math.cos(self.rotation_angle), math.sin(self.rotation_angle)
        return x * c - y * s, x * s + y * c

    def extreme_points(self):
        """Endpoints of the major axis (a1 = a2) and minor axis (a1 = -a2)."""
        quarter = [0.0, math.pi / 2, math.pi, 3 * math.pi / 2]
        return [ShiftPair(*map(float, self.point(t))) for t in quarter]


def iso_power_residual(rho, p):
    """a1^2 + a2^2 - 2 rho a1 a2 - 1; zero on the curve through (1, 0)."""
    _check_rho(rho)
    a1, a2 = p
    return a1 * a1 + a2 * a2 - 2.0 * rho * a1 * a2 - 1.0


def a1_bound(rho):
    """Largest |a1| for which the iso-power curve has a real a2."""
    _check_rho(rho)
    return math.sqrt(1.0 / (1.0 - rho * rho))


def solve_a2(rho, a1):
    """Real roots a2 of the iso-power equation for fixed a1, ascending.

    Empty outside ``|a1| <= a1_bound(rho)``, a single double root when the
    discriminant is within DISCRIMINANT_TOL of zero.
    """
    _check_rho(rho)
    centre = rho * a1
    disc = centre * centre - (a1 * a1 - 1.0)
    if disc < -DISCRIMINANT_TOL:
        return ()
    if disc <= DISCRIMINANT_TOL:
        return (centre,)
    half = math.sqrt(disc)
    return (centre - half, centre + half)


def ellipse_angles(count):
    """Parameter angles 2 pi j / count, j = 0 .. count - 1."""
    if int(count) != count or count < 4:
        raise InvalidInput(f"count must be an integer >= 4, got {count!r}")
    return 2.0 * math.pi * np.arange(int(count)) / int(count)


def ellipse_points(rho, count):
    """``count`` pairs on the unit iso-power curve, at :func:`ellipse_angles`."""
    t = ellipse_angles(count)
    a1, a2 = IsoPowerEllipse.from_rho(rho).point(t)
    return [ShiftPair(float(u), float(v)) for u, v in zip(a1, a2)]

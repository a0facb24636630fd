"""Reference configurations with closed-form data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import NoMassSolution, RegionInvalid
from .dynamics import Configuration, grad_potential

__all__ = [
    "FamilyParams",
    "LambdaSplit",
    "pentatope",
    "family_mass",
    "family_q",
    "lambda_closed_form",
    "ngon_family",
]

#: ceiling for the polar-mass root search
MASS_MAX = 1e3


def pentatope():
    """Five equal unit masses at the vertices of the regular 4-simplex.

    Every pairwise inner product equals -1/4, so all ten distances agree
    and the total force on each body vanishes: the classic special
    central configuration on the sphere.
    """
    s = math.sqrt
    positions = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [-0.25, s(15.0) / 4.0, 0.0, 0.0],
            [-0.25, -s(5.0 / 48.0), s(5.0 / 6.0), 0.0],
            [-0.25, -s(5.0 / 48.0), -s(5.0 / 24.0), s(5.0 / 8.0)],
            [-0.25, -s(5.0 / 48.0), -s(5.0 / 24.0), -s(5.0 / 8.0)],
        ]
    )
    return Configuration(1, np.ones(5), positions)


@dataclass(frozen=True)
class FamilyParams:
    """Parameters (c, theta) of the two-plus-polygon spherical family.

    ``c`` is the z-height of the polygon ring, ``theta`` the zw-angle of
    the symmetric polar pair, ``n`` the ring size.  Positive polar
    masses require c and cos(theta) to have opposite signs, recorded by
    ``region_valid``.
    """

    c: float
    theta: float
    n: int = 3

    def __post_init__(self):
        if not -1.0 < self.c < 1.0 or self.c == 0.0:
            raise ValueError(f"c must lie in (-1, 1) \\ {{0}}, got {self.c}")
        if not 0.0 < self.theta < math.pi or self.theta == math.pi / 2.0:
            raise ValueError(f"theta must lie in (0, pi) \\ {{pi/2}}, got {self.theta}")
        if self.n < 3:
            raise ValueError(f"ring size n must be >= 3, got {self.n}")

    @property
    def r(self):
        return math.sqrt(1.0 - self.c * self.c)

    @property
    def region_valid(self):
        neg = -1.0 < self.c < 0.0 and 0.0 < self.theta < math.pi / 2.0
        pos = 0.0 < self.c < 1.0 and math.pi / 2.0 < self.theta < math.pi
        return neg or pos


def _params(c, theta, n=3):
    if isinstance(c, FamilyParams):
        return c
    return FamilyParams(float(c), float(theta), n)


def _require_region(p):
    if not p.region_valid:
        raise RegionInvalid(f"(c, theta) = ({p.c:.6g}, {p.theta:.6g}) gives a non-positive polar mass")


def family_mass(c, theta=None):
    """Polar mass making the triangle version of the family central."""
    p = _params(c, theta)
    _require_region(p)
    s2 = math.sin(2.0 * p.theta)
    denom = 2.0 * math.cos(p.theta) * (1.0 - p.c * p.c * math.cos(p.theta) ** 2) ** 1.5
    return -3.0 * p.c * abs(s2) ** 3 / denom


def _ring_positions(c, r, n):
    rows = []
    for k in range(n):
        ang = 2.0 * math.pi * k / n
        rows.append([r * math.cos(ang), r * math.sin(ang), c, 0.0])
    return rows


def family_q(c, theta=None):
    """The two-plus-triangle family member at (c, theta).

    Bodies 0 and 1 are the polar pair of mass ``family_mass`` at
    (0, 0, cos theta, +-sin theta); bodies 2..4 are unit masses on an
    equilateral ring at height z = c.
    """
    p = _params(c, theta)
    m = family_mass(p)
    rows = [
        [0.0, 0.0, math.cos(p.theta), math.sin(p.theta)],
        [0.0, 0.0, math.cos(p.theta), -math.sin(p.theta)],
    ] + _ring_positions(p.c, p.r, 3)
    masses = np.array([m, m, 1.0, 1.0, 1.0])
    return Configuration(1, masses, np.array(rows))


class LambdaSplit(NamedTuple):
    """Multiplier of the family: ring part, polar part, single formula."""

    lam1: float
    lam2: float
    lam: float


def lambda_closed_form(c, theta=None):
    """Closed forms of the family multiplier.

    ``lam1`` comes from the ring equations alone, ``lam2`` from the
    polar pair, and ``lam`` is the single combined expression.  All
    three agree on region-valid parameters; lam1 + lam2 = lam is the
    split actually used to derive the mass.
    """
    p = _params(c, theta)
    _require_region(p)
    m = family_mass(p)
    cos_ring = 1.5 * p.c * p.c - 0.5
    sin3_ring = (1.0 - cos_ring * cos_ring) ** 1.5
    lam1 = -3.0 / (2.0 * sin3_ring)
    sin3_polar = (1.0 - p.c * p.c * math.cos(p.theta) ** 2) ** 1.5
    lam2 = -m * math.cos(p.theta) / (p.c * sin3_polar)
    lam = 1.5 * (
        -8.0 / (3.0 * math.sqrt(3.0) * (1.0 + 3.0 * p.c * p.c) ** 1.5 * (1.0 - p.c * p.c) ** 1.5)
        + abs(math.sin(2.0 * p.theta)) ** 3 / (1.0 - p.c * p.c * math.cos(p.theta) ** 2) ** 3
    )
    return LambdaSplit(lam1=lam1, lam2=lam2, lam=lam)


def ngon_family(n, c, theta, m_max=MASS_MAX):
    """Ring of n unit masses plus a polar pair of solved mass.

    Generalizes ``family_q`` to arbitrary ring size.  The polar mass is
    the root of the net tangential force on a polar body, which is
    exactly quadratic in the mass, so a sign-change bracket on
    (0, m_max] pins it down.

    Raises
    ------
    RegionInvalid
        Parameters outside the positive-mass region.
    NoMassSolution
        No root with 0 < m <= m_max.
    """
    p = _params(c, theta, n)
    _require_region(p)
    polar = [
        [0.0, 0.0, math.cos(p.theta), math.sin(p.theta)],
        [0.0, 0.0, math.cos(p.theta), -math.sin(p.theta)],
    ]
    positions = np.array(polar + _ring_positions(p.c, p.r, n))
    tangent = np.array([0.0, 0.0, math.sin(p.theta), -math.cos(p.theta)])

    def balance(m):
        cfg = Configuration(1, np.array([m, m] + [1.0] * n), positions, validate=False)
        return float(grad_potential(cfg)[0] @ tangent)

    lo = 1e-9
    f_lo, f_hi = balance(lo), balance(m_max)
    if f_lo == 0.0:
        raise NoMassSolution("balance vanishes at the lower bracket edge")
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoMassSolution(f"no sign change for the polar mass in ({lo:g}, {m_max:g}]")
    m = brentq(balance, lo, m_max, xtol=1e-14, rtol=8.9e-16)
    return Configuration(1, np.array([m, m] + [1.0] * n), positions)

"""Signed geometry on the unit sphere S3 and the unit hyperboloid H3.

Points live in R4 as rows (x, y, z, w).  A single sign ``sigma`` selects
the space: +1 for the sphere inside Euclidean R4, -1 for the upper sheet
of the hyperboloid inside Minkowski R^(3,1).  Both are the level set

    sdot(q, q, sigma) = sigma,

with the extra sheet condition w > 0 when sigma = -1.  Keeping the sign
as data lets every formula downstream (trig kernels, forces, rotations)
be written once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ProjectionPole, SingularPair

__all__ = [
    "CLAMP_TOL",
    "ON_TOL",
    "RHO_TOL",
    "POLE_TOL",
    "GroupElement",
    "PolarZW",
    "sdot",
    "on_manifold",
    "project_to_manifold",
    "tangent_project",
    "geodesic_distance",
    "apply_group",
    "polar_zw",
    "stereographic",
    "poincare_ball",
]

#: half-width of the guard band around the singular set (collisions on
#: both spaces, antipodal pairs on the sphere)
CLAMP_TOL = 1e-12

#: default tolerance for manifold membership tests
ON_TOL = 1e-9

#: below this cylindrical zw-radius the spherical polar angle is undefined
RHO_TOL = 1e-10

#: stereographic projection refuses points this close to its pole
POLE_TOL = 1e-12


def _check_sigma(sigma):
    if sigma not in (1, -1):
        raise ValueError(f"sigma must be +1 or -1, got {sigma!r}")


def sdot(u, v, sigma):
    """Signed inner product of 4-vectors.

    Computes ``x_u x_v + y_u y_v + z_u z_v + sigma * w_u w_v``.  For
    sigma = +1 this is the Euclidean dot product on R4, for sigma = -1
    the Minkowski product with (+,+,+,-) signature.  Broadcasts over
    leading axes, so arrays of shape (N, 4) work row-wise.

    Parameters
    ----------
    u, v : array_like, shape (..., 4)
    sigma : int
        +1 or -1.

    Returns
    -------
    float or ndarray
    """
    _check_sigma(sigma)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    out = (u[..., :3] * v[..., :3]).sum(axis=-1) + sigma * u[..., 3] * v[..., 3]
    return out


def on_manifold(u, sigma, tol=ON_TOL):
    """True where ``u`` lies on the selected space to within ``tol``.

    Membership means ``|sdot(u, u, sigma) - sigma| <= tol``, plus
    ``w > 0`` on the hyperboloid (upper sheet only).
    """
    u = np.asarray(u, dtype=float)
    ok = np.abs(sdot(u, u, sigma) - sigma) <= tol
    if sigma == -1:
        ok = ok & (u[..., 3] > 0.0)
    return bool(ok) if np.isscalar(ok) or ok.ndim == 0 else ok


def project_to_manifold(u, sigma):
    """Radially rescale ``u`` onto the unit sphere or hyperboloid.

    The rescaling is exact: the output satisfies the defining equation
    to machine precision.  Raises ``ValueError`` when no positive
    rescaling exists (null or wrongly-signed vectors, lower sheet).
    """
    _check_sigma(sigma)
    u = np.asarray(u, dtype=float)
    s = sdot(u, u, sigma)
    good = np.asarray(s * sigma > 0.0)
    if not good.all():
        raise ValueError("vector cannot be rescaled onto the manifold")
    if sigma == -1 and not (u[..., 3] > 0.0).all():
        raise ValueError("hyperboloid points must have w > 0")
    scale = np.sqrt(sigma * s)
    return u / np.asarray(scale)[..., np.newaxis]


def tangent_project(v, q, sigma):
    """Component of ``v`` tangent to the manifold at on-manifold ``q``.

    Subtracts the signed-normal part: ``v - sigma * sdot(v, q, sigma) * q``.
    The result satisfies ``sdot(result, q, sigma) = 0``.
    """
    v = np.asarray(v, dtype=float)
    q = np.asarray(q, dtype=float)
    coef = sigma * sdot(v, q, sigma)
    return v - np.asarray(coef)[..., np.newaxis] * q


def geodesic_distance(u, v, sigma, clamp_tol=CLAMP_TOL):
    """Geodesic distance between two on-manifold points.

    For sigma = +1 this is ``arccos(sdot(u, v, +1))`` in (0, pi); for
    sigma = -1 it is ``arccosh(-sdot(u, v, -1))`` in (0, inf).  Inputs
    whose inner product falls within ``clamp_tol`` of the singular
    boundary (cos d = +-1, respectively cosh d = 1) raise
    ``SingularPair`` instead of returning 0, pi, or NaN: the potential
    is undefined there and silently clamping would hide a collision.

    Raises
    ------
    SingularPair
        If the pair is inside the guard band around the singular set.
    """
    _check_sigma(sigma)
    p = float(sdot(u, v, sigma))
    if sigma == 1:
        if abs(p) > 1.0 - clamp_tol:
            raise SingularPair()
        return float(np.arccos(p))
    if p > -1.0 - clamp_tol:
        raise SingularPair()
    return float(np.arccosh(-p))


@dataclass(frozen=True)
class GroupElement:
    """Isometry (psi, chi) from the two commuting one-parameter groups.

    ``psi`` rotates the xy-plane.  ``chi`` rotates the zw-plane when
    sigma = +1 and boosts it (hyperbolic rotation) when sigma = -1.
    Together these generate the symmetries that preserve both conserved
    angular momenta.
    """

    psi: float
    chi: float
    sigma: int

    def __post_init__(self):
        _check_sigma(self.sigma)

    def matrix(self):
        """The 4x4 matrix acting on column vectors."""
        g = np.zeros((4, 4))
        c, s = np.cos(self.psi), np.sin(self.psi)
        g[0, 0], g[0, 1] = c, -s
        g[1, 0], g[1, 1] = s, c
        if self.sigma == 1:
            c2, s2 = np.cos(self.chi), np.sin(self.chi)
            g[2, 2], g[2, 3] = c2, -s2
            g[3, 2], g[3, 3] = s2, c2
        else:
            ch, sh = np.cosh(self.chi), np.sinh(self.chi)
            g[2, 2], g[2, 3] = ch, -sh
            g[3, 2], g[3, 3] = -sh, ch
        return g

    def inverse(self):
        return GroupElement(-self.psi, -self.chi, self.sigma)


def apply_group(g, u):
    """Apply ``g`` to a point or an array of row points."""
    u = np.asarray(u, dtype=float)
    return u @ g.matrix().T


@dataclass(frozen=True)
class PolarZW:
    """Polar form of the zw-plane part of a point.

    ``rho`` is the zw-radius and ``phi`` the angle (sigma = +1) or
    rapidity (sigma = -1).  On the sphere ``phi`` is undefined when
    ``rho`` vanishes; ``defined`` records that, and ``phi`` is NaN
    there.  On the hyperboloid ``rho = sqrt(w^2 - z^2) >= 1`` for
    on-manifold points, so ``phi`` always exists there; off-manifold
    vectors whose zw-part is not future-timelike come back undefined.
    """

    rho: float
    phi: float
    defined: bool


def polar_zw(u, sigma, rho_tol=RHO_TOL):
    """Split the zw-components of ``u`` into radius and angle/rapidity.

    Conventions: z = rho sin(phi), w = rho cos(phi) on the sphere and
    z = rho sinh(phi), w = rho cosh(phi) on the hyperboloid, so phi = 0
    always means z = 0, w > 0.
    """
    _check_sigma(sigma)
    u = np.asarray(u, dtype=float)
    z, w = float(u[2]), float(u[3])
    if sigma == 1:
        rho = float(np.hypot(z, w))
        if rho < rho_tol:
            return PolarZW(rho=rho, phi=float("nan"), defined=False)
        return PolarZW(rho=rho, phi=float(np.arctan2(z, w)), defined=True)
    ss = w * w - z * z
    if w <= 0.0 or ss <= rho_tol * rho_tol:
        return PolarZW(rho=float("nan"), phi=float("nan"), defined=False)
    return PolarZW(rho=float(np.sqrt(ss)), phi=float(np.arctanh(z / w)), defined=True)


def stereographic(u, pole_tol=POLE_TOL):
    """Stereographic image of a sphere point from the pole (0, 0, 1, 0).

    Returns the 3-vector (x, y, w) / (1 - z).  Points with ``|1 - z|``
    below ``pole_tol`` raise ``ProjectionPole``.
    """
    u = np.asarray(u, dtype=float)
    denom = 1.0 - float(u[2])
    if abs(denom) < pole_tol:
        raise ProjectionPole("point at the projection pole (0, 0, 1, 0)")
    return np.array([u[0], u[1], u[3]]) / denom


def poincare_ball(u):
    """Poincare-ball image (x, y, z) / (1 + w) of a hyperboloid point.

    On-manifold points (w >= 1) always land strictly inside the unit
    ball.
    """
    u = np.asarray(u, dtype=float)
    return np.array([u[0], u[1], u[2]]) / (1.0 + float(u[3]))

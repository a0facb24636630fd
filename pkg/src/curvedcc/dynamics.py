"""Point masses on the curved spaces: forces, conserved quantities, motion.

The interaction is the cotangent potential, the curved analogue of the
Newtonian 1/r law.  With the unified trig kernels (circular functions on
the sphere, hyperbolic ones on the hyperboloid) every formula below is
written once and dispatches on the sign ``sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleSpin, SingularPair
from .manifold import CLAMP_TOL, ON_TOL, _check_sigma, apply_group, geodesic_distance, sdot

__all__ = [
    "TANGENT_TOL",
    "Configuration",
    "PhaseState",
    "Trajectory",
    "unified_trig",
    "force_pair",
    "grad_potential",
    "potential",
    "moment",
    "grad_moment",
    "eom_rhs",
    "energy",
    "momentum_xy",
    "momentum_zw",
    "integrate",
    "relative_equilibrium_velocities",
]

#: default tolerance for velocity tangency checks
TANGENT_TOL = 1e-8


def unified_trig(x, sigma):
    """Return the kernel triple (sn, csn, ctn) at ``x``.

    (sin, cos, cot) when sigma = +1 and (sinh, cosh, coth) when
    sigma = -1.  Accepts scalars or arrays.  ``ctn`` diverges to +inf as
    x -> 0+, which is the correct limiting behaviour for the potential;
    callers are expected to keep x > 0 wherever ctn is consumed.
    """
    _check_sigma(sigma)
    x = np.asarray(x, dtype=float)
    if sigma == 1:
        sn, csn = np.sin(x), np.cos(x)
    else:
        sn, csn = np.sinh(x), np.cosh(x)
    with np.errstate(divide="ignore"):
        ctn = csn / sn
    return sn, csn, ctn


class Configuration:
    """Masses with on-manifold positions, for one curvature sign.

    Parameters
    ----------
    sigma : int
        +1 (sphere) or -1 (hyperboloid).
    masses : array_like, shape (N,)
        Strictly positive.
    positions : array_like, shape (N, 4)
        Rows on the manifold selected by ``sigma``.
    validate : bool
        When False, skip the invariant checks.  Used internally for
        intermediate iterates that are allowed to drift off-manifold;
        everything user-facing should validate.
    on_tol : float
        Membership tolerance used by validation.

    Raises
    ------
    ValueError
        Off-manifold rows, non-positive masses, bad shapes.
    SingularPair
        Some pair is inside the collision/antipodal guard band.
    """

    def __init__(self, sigma, masses, positions, validate=True, on_tol=ON_TOL):
        self.sigma = int(sigma)
        self.masses = np.atleast_1d(np.asarray(masses, dtype=float))
        self.positions = np.asarray(positions, dtype=float)
        if validate:
            self._validate(on_tol)

    @property
    def n(self):
        return len(self.masses)

    def _validate(self, on_tol):
        _check_sigma(self.sigma)
        if self.positions.ndim != 2 or self.positions.shape[1] != 4:
            raise ValueError(f"positions must have shape (N, 4), got {self.positions.shape}")
        if self.masses.ndim != 1 or len(self.masses) != self.positions.shape[0]:
            raise ValueError("masses and positions disagree on the number of bodies")
        if len(self.masses) < 1:
            raise ValueError("need at least one body")
        if not np.isfinite(self.positions).all() or not np.isfinite(self.masses).all():
            raise ValueError("non-finite input")
        if (self.masses <= 0.0).any():
            raise ValueError("masses must be strictly positive")
        norms = sdot(self.positions, self.positions, self.sigma)
        bad = np.abs(norms - self.sigma) > on_tol
        if self.sigma == -1:
            bad = bad | (self.positions[:, 3] <= 0.0)
        if bad.any():
            raise ValueError(f"bodies {np.flatnonzero(bad).tolist()} are off the manifold")
        _distance_matrix(self.sigma, self.positions)  # raises SingularPair if needed

    def copy(self):
        return Configuration(self.sigma, self.masses.copy(), self.positions.copy(), validate=False)

    def transformed(self, g):
        """New configuration moved by a ``GroupElement``."""
        return Configuration(self.sigma, self.masses.copy(), apply_group(g, self.positions), validate=False)

    def distance_matrix(self):
        """All pairwise geodesic distances, zero diagonal."""
        d = _distance_matrix(self.sigma, self.positions)
        np.fill_diagonal(d, 0.0)
        return d

    def __repr__(self):
        space = "S3" if self.sigma == 1 else "H3"
        return f"Configuration({self.n} bodies on {space})"


def _sdot_matrix(sigma, q):
    w = q * np.array([1.0, 1.0, 1.0, float(sigma)])
    return q @ w.T


def _distance_matrix(sigma, q, clamp_tol=CLAMP_TOL):
    """Pairwise distances with a placeholder 1.0 on the diagonal.

    The diagonal placeholder keeps downstream sn(d)**3 divisions finite;
    every consumer explicitly zeroes diagonal coefficients.
    """
    p = _sdot_matrix(sigma, q)
    n = p.shape[0]
    iu = np.triu_indices(n, 1)
    vals = p[iu]
    # Negated comparisons so that NaN (a blown-up step) counts as bad.
    if sigma == 1:
        bad = ~(np.abs(vals) <= 1.0 - clamp_tol)
    else:
        bad = ~(vals <= -1.0 - clamp_tol)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise SingularPair(int(iu[0][k]), int(iu[1][k]))
    if sigma == 1:
        d = np.arccos(np.clip(p, -1.0, 1.0))
    else:
        d = np.arccosh(np.maximum(-p, 1.0))
    np.fill_diagonal(d, 1.0)
    return d


def _forces(sigma, masses, q):
    """Stacked attraction forces, one row per body."""
    d = _distance_matrix(sigma, q)
    sn, csn, _ = unified_trig(d, sigma)
    coef = np.outer(masses, masses) / sn**3
    np.fill_diagonal(coef, 0.0)
    pull = coef @ q
    weight = (coef * csn).sum(axis=1)
    return pull - weight[:, np.newaxis] * q


def force_pair(config, i, j):
    """Force exerted on body ``i`` by body ``j``.

    Implements m_i m_j (q_j - csn(d) q_i) / sn(d)^3 with d the geodesic
    distance.  The result is tangent to the manifold at q_i.
    """
    if i == j:
        raise ValueError("a body exerts no force on itself")
    qi = config.positions[i]
    qj = config.positions[j]
    try:
        d = geodesic_distance(qi, qj, config.sigma)
    except SingularPair:
        raise SingularPair(i, j) from None
    sn, csn, _ = unified_trig(d, config.sigma)
    return config.masses[i] * config.masses[j] * (qj - csn * qi) / sn**3


def grad_potential(config):
    """Total force on each body, shape (N, 4).

    Equals the sum of ``force_pair(config, i, j)`` over j != i, computed
    with pair matrices rather than an explicit double loop.
    """
    return _forces(config.sigma, config.masses, config.positions)


def potential(config):
    """Cotangent potential U = sum over pairs of m_i m_j ctn(d_ij)."""
    d = _distance_matrix(config.sigma, config.positions)
    _, _, ctn = unified_trig(d, config.sigma)
    iu = np.triu_indices(config.n, 1)
    return float((np.outer(config.masses, config.masses) * ctn)[iu].sum())


def moment(config):
    """Weighted squared distance from the zw-axis: sum of m (x^2 + y^2)."""
    q = config.positions
    return float((config.masses * (q[:, 0] ** 2 + q[:, 1] ** 2)).sum())


def grad_moment(config):
    """Constrained gradient of ``moment``, one tangent row per body.

    These are the closed-form tangential gradients; the zw-components
    pick up a sign flip between the two spaces because the normal
    direction does.
    """
    return _grad_moment(config.sigma, config.masses, config.positions)


def _grad_moment(sigma, masses, q):
    x, y, z, w = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    r2 = x * x + y * y
    out = np.empty_like(q)
    if sigma == 1:
        a = w * w + z * z
        out[:, 0] = x * a
        out[:, 1] = y * a
        out[:, 2] = -z * r2
        out[:, 3] = -w * r2
    else:
        a = w * w - z * z
        out[:, 0] = x * a
        out[:, 1] = y * a
        out[:, 2] = z * r2
        out[:, 3] = w * r2
    return 2.0 * masses[:, np.newaxis] * out


class PhaseState:
    """A configuration plus velocities tangent to the manifold.

    Raises ``ValueError`` when some ``sdot(v_i, q_i, sigma)`` exceeds
    ``tangent_tol``, unless ``validate=False``.
    """

    def __init__(self, config, velocities, validate=True, tangent_tol=TANGENT_TOL):
        self.config = config
        self.velocities = np.asarray(velocities, dtype=float)
        if validate:
            if self.velocities.shape != config.positions.shape:
                raise ValueError(
                    f"velocities shape {self.velocities.shape} does not match positions {config.positions.shape}"
                )
            if not np.isfinite(self.velocities).all():
                raise ValueError("non-finite velocities")
            drift = np.abs(sdot(self.velocities, config.positions, config.sigma))
            if drift.max() > tangent_tol:
                raise ValueError(
                    f"velocities not tangent to the manifold (max violation {drift.max():.3e})"
                )


def _accelerations(sigma, masses, q, v):
    f = _forces(sigma, masses, q)
    v2 = sdot(v, v, sigma)
    return f / masses[:, np.newaxis] - sigma * v2[:, np.newaxis] * q


def eom_rhs(state):
    """Accelerations of the constrained equations of motion, shape (N, 4).

    q_ddot_i = F_i / m_i - sigma * sdot(q_dot_i, q_dot_i, sigma) * q_i.
    The second term is the constraint force holding each body on the
    manifold; together with tangent initial velocities it preserves both
    constraints to first order.
    """
    cfg = state.config
    return _accelerations(cfg.sigma, cfg.masses, cfg.positions, state.velocities)


def energy(state):
    """Conserved energy E = T - U with T = (1/2) sum m sdot(v, v, sigma)."""
    cfg = state.config
    t = 0.5 * float((cfg.masses * sdot(state.velocities, state.velocities, cfg.sigma)).sum())
    return t - potential(cfg)


def momentum_xy(state):
    """Angular momentum about the xy-rotation: sum of m (x vy - y vx)."""
    q = state.config.positions
    v = state.velocities
    return float((state.config.masses * (q[:, 0] * v[:, 1] - q[:, 1] * v[:, 0])).sum())


def momentum_zw(state):
    """Angular momentum about the zw-rotation/boost: sum of m (z vw - w vz)."""
    q = state.config.positions
    v = state.velocities
    return float((state.config.masses * (q[:, 2] * v[:, 3] - q[:, 3] * v[:, 2])).sum())


@dataclass
class Trajectory:
    """Sampled output of ``integrate``.

    Arrays are indexed by sample; ``positions`` and ``velocities`` have
    shape (T, N, 4).  ``aborted`` is set when the run stopped early on a
    singular pair, in which case the arrays hold the samples completed
    before the bad step.
    """

    sigma: int
    masses: np.ndarray
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    energy: np.ndarray
    momentum_xy: np.ndarray
    momentum_zw: np.ndarray
    aborted: bool = False
    abort_reason: str = field(default="")

    def __len__(self):
        return len(self.times)

    def state(self, k):
        """The k-th sample as a ``PhaseState`` (validation skipped)."""
        cfg = Configuration(self.sigma, self.masses, self.positions[k], validate=False)
        return PhaseState(cfg, self.velocities[k], validate=False)

    @property
    def states(self):
        return [self.state(k) for k in range(len(self))]


def _renormalize(sigma, q, v):
    """Exactly rescale rows of ``q`` onto the manifold and re-tangent ``v``.

    A row whose quadratic form has the wrong sign (or is not finite)
    cannot be rescaled: the step has left the sheet entirely, which with
    this force law only happens when a close encounter blows up.  That
    is reported as a singular pair so the integrator aborts cleanly.
    """
    s = sigma * sdot(q, q, sigma)
    if not np.all(s > 0.0):
        raise SingularPair()
    q = q / np.sqrt(s)[:, np.newaxis]
    v = v - (sigma * sdot(v, q, sigma))[:, np.newaxis] * q
    return q, v


def integrate(state, dt, t_end):
    """Fixed-step RK4 with per-step projection back onto the manifold.

    After every step the positions are rescaled exactly onto the
    manifold and the velocities re-projected to the tangent spaces, so
    constraint drift does not accumulate.  Energy and both angular
    momenta are logged at every sample.  A singular pair encountered
    inside a step aborts the run; the returned trajectory then carries
    the samples completed so far plus ``aborted=True`` and the reason.

    Parameters
    ----------
    state : PhaseState
    dt : float
        Step size, > 0.
    t_end : float
        Total integration time, > 0.  The number of steps is
        ``round(t_end / dt)``, at least 1.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    cfg = state.config
    sigma, masses = cfg.sigma, cfg.masses
    n_steps = max(1, int(round(t_end / dt)))

    q = cfg.positions.copy()
    v = state.velocities.copy()
    shape = (n_steps + 1,) + q.shape
    times = np.empty(n_steps + 1)
    qs = np.empty(shape)
    vs = np.empty(shape)
    es = np.empty(n_steps + 1)
    jxys = np.empty(n_steps + 1)
    jzws = np.empty(n_steps + 1)

    def record(k, t, q, v):
        st = PhaseState(Configuration(sigma, masses, q, validate=False), v, validate=False)
        times[k] = t
        qs[k] = q
        vs[k] = v
        es[k] = energy(st)
        jxys[k] = momentum_xy(st)
        jzws[k] = momentum_zw(st)

    aborted = False
    reason = ""
    record(0, 0.0, q, v)
    filled = 1
    for k in range(n_steps):
        try:
            a1 = _accelerations(sigma, masses, q, v)
            q2 = q + 0.5 * dt * v
            v2 = v + 0.5 * dt * a1
            a2 = _accelerations(sigma, masses, q2, v2)
            q3 = q + 0.5 * dt * v2
            v3 = v + 0.5 * dt * a2
            a3 = _accelerations(sigma, masses, q3, v3)
            q4 = q + dt * v3
            v4 = v + dt * a3
            a4 = _accelerations(sigma, masses, q4, v4)
            q = q + (dt / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4)
            v = v + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            q, v = _renormalize(sigma, q, v)
            record(k + 1, (k + 1) * dt, q, v)
            filled += 1
        except SingularPair as exc:
            aborted = True
            reason = str(exc)
            break

    sl = slice(0, filled)
    return Trajectory(
        sigma=sigma,
        masses=masses.copy(),
        times=times[sl],
        positions=qs[sl],
        velocities=vs[sl],
        energy=es[sl],
        momentum_xy=jxys[sl],
        momentum_zw=jzws[sl],
        aborted=aborted,
        abort_reason=reason,
    )


def relative_equilibrium_velocities(config, lam, s):
    """Initial velocities turning a central configuration into a relative equilibrium.

    The velocity field is alpha * (-y, x, 0, 0) + beta * (0, 0, -w, z)
    on the sphere and alpha * (-y, x, 0, 0) + beta * (0, 0, w, z) on the
    hyperboloid.  The spin parameter ``s = alpha >= 0`` fixes the free
    rate; the other follows from beta^2 - alpha^2 = 2 lam (sphere) or
    alpha^2 + beta^2 = -2 lam (hyperboloid).

    Raises
    ------
    InfeasibleSpin
        When no real beta exists: 2 lam + s^2 < 0 on the sphere, or
        lam > 0 / s^2 > -2 lam on the hyperboloid.  A radicand within
        round-off of zero is treated as exactly zero so the extremal
        spins remain usable.
    """
    if s < 0.0:
        raise ValueError("spin parameter s must be >= 0")
    sigma = config.sigma
    if sigma == 1:
        b2 = 2.0 * lam + s * s
    else:
        b2 = -2.0 * lam - s * s
    slack = 1e-12 * max(1.0, abs(lam), s * s)
    if b2 < -slack:
        raise InfeasibleSpin(f"no real rotation rates for lam={lam:.6g}, s={s:.6g}, sigma={sigma:+d}")
    alpha = s
    beta = float(np.sqrt(max(b2, 0.0)))
    q = config.positions
    v = np.zeros_like(q)
    v[:, 0] = -alpha * q[:, 1]
    v[:, 1] = alpha * q[:, 0]
    if sigma == 1:
        v[:, 2] = -beta * q[:, 3]
        v[:, 3] = beta * q[:, 2]
    else:
        v[:, 2] = beta * q[:, 3]
        v[:, 3] = beta * q[:, 2]
    return v

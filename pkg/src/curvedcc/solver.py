"""Numerical search for central configurations.

The search runs damped least squares on the stacked system

    F_i - lam * grad_moment_i = 0   (4 rows per body)
    sdot(q_i, q_i, sigma) - sigma = 0   (1 row per body)

in the unknowns (q_1, ..., q_N, lam).  The Jacobian is analytic.
Damping follows the gain-ratio schedule: a trial step is accepted only
when it lowers the cost, the damping parameter shrinks or grows with
the ratio of actual to predicted decrease, and a trial step that lands
inside the singular guard band is retried with sharply raised damping
up to three times before the search gives up.  Because only descending
steps are accepted, the final iterate of a failed search is also its
best one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import CurvedNBodyError, DegenerateConfig, GaugeDegenerate, SingularPair
from .manifold import RHO_TOL, GroupElement, _check_sigma, project_to_manifold, sdot
from .dynamics import (
    Configuration,
    grad_potential,
    unified_trig,
    _distance_matrix,
    _forces,
    _grad_moment,
)
from .ccstat import (
    COPLANAR_TOL,
    CCReport,
    cc_residual,
    classify_dimension,
    common_phi,
    fit_lambda,
    normalize_to_h2xyw,
)
from .catalog import family_q, lambda_closed_form

__all__ = [
    "H3_INIT_SCALE",
    "MIN_INIT_DISTANCE",
    "SolveOptions",
    "SolveOutcome",
    "SpecialCurvePoint",
    "random_configuration",
    "config_fingerprint",
    "find_cc",
    "canonical_gauge",
    "special_curve",
]

#: standard deviation of the Gaussian (x, y, z) draw for hyperbolic starts;
#: wider draws frequently start inside the escape-to-infinity descent
#: valley of the hyperbolic equations (residual decays forever while the
#: configuration spreads without bound), so keep this moderate
H3_INIT_SCALE = 0.5

#: random starts are redrawn until every pair is at least this far apart
MIN_INIT_DISTANCE = 0.1

#: scan resolution and polish tolerance for the special curve
N_SCAN = 64
THETA_XTOL = 1e-13

#: every returned curve point must beat this total-force bound
CURVE_FORCE_TOL = 1e-8


@dataclass(frozen=True)
class SolveOptions:
    """Knobs for ``find_cc``.

    ``lam_init=None`` means start from the least-squares multiplier of
    the initial configuration.  ``seed`` feeds the random start when no
    initial configuration is supplied.
    """

    max_iter: int = 1000
    step_tol: float = 1e-14
    residual_tol: float = 1e-10
    lam_init: float | None = None
    damping_init: float = 1e-2
    seed: int = 0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.step_tol <= 0.0 or self.residual_tol <= 0.0 or self.damping_init <= 0.0:
            raise ValueError("tolerances and damping must be positive")


@dataclass
class SolveOutcome:
    """Result of one search.

    ``converged`` means the refitted residual of the renormalized final
    configuration beat ``residual_tol``.  ``fingerprint`` is the sorted
    list of pairwise distances (NaN-filled when the final iterate was
    too broken to measure), the gauge-invariant key used for
    deduplication.
    """

    converged: bool
    config: Configuration
    report: CCReport
    iterations: int
    fingerprint: np.ndarray
    message: str = ""


def random_configuration(sigma, masses, rng, min_distance=MIN_INIT_DISTANCE, scale=H3_INIT_SCALE):
    """Draw a well-separated random starting configuration.

    Sphere: rows of four standard normals, normalized.  Hyperboloid:
    Gaussian (x, y, z) with standard deviation ``scale``, lifted through
    w = sqrt(1 + x^2 + y^2 + z^2).  Draws are rejected until every
    pairwise distance exceeds ``min_distance``.
    """
    _check_sigma(sigma)
    masses = np.atleast_1d(np.asarray(masses, dtype=float))
    n = len(masses)
    while True:
        if sigma == 1:
            raw = rng.normal(size=(n, 4))
            q = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        else:
            xyz = scale * rng.normal(size=(n, 3))
            w = np.sqrt(1.0 + (xyz * xyz).sum(axis=1))
            q = np.column_stack([xyz, w])
        try:
            cfg = Configuration(sigma, masses, q)
        except SingularPair:
            continue
        if n < 2:
            return cfg
        d = cfg.distance_matrix()
        if d[np.triu_indices(n, 1)].min() > min_distance:
            return cfg


def config_fingerprint(config):
    """Sorted pairwise distances: invariant under isometries and relabeling."""
    d = config.distance_matrix()
    return np.sort(d[np.triu_indices(config.n, 1)])


def _grad_moment_jac(sigma, m, qi):
    x, y, z, w = qi
    r2 = x * x + y * y
    if sigma == 1:
        a = w * w + z * z
        out = np.array(
            [
                [a, 0.0, 2 * x * z, 2 * x * w],
                [0.0, a, 2 * y * z, 2 * y * w],
                [-2 * x * z, -2 * y * z, -r2, 0.0],
                [-2 * x * w, -2 * y * w, 0.0, -r2],
            ]
        )
    else:
        a = w * w - z * z
        out = np.array(
            [
                [a, 0.0, -2 * x * z, 2 * x * w],
                [0.0, a, -2 * y * z, 2 * y * w],
                [2 * x * z, 2 * y * z, r2, 0.0],
                [2 * x * w, 2 * y * w, 0.0, r2],
            ]
        )
    return 2.0 * m * out


def _residual(sigma, masses, u):
    """Stacked force and constraint rows at the packed unknowns ``u``."""
    n = len(masses)
    q = u[:-1].reshape(n, 4)
    lam = u[-1]
    force_rows = _forces(sigma, masses, q) - lam * _grad_moment(sigma, masses, q)
    constraint = sdot(q, q, sigma) - sigma
    return np.concatenate([force_rows.ravel(), constraint])


def _jacobian(sigma, masses, u):
    """Analytic Jacobian of ``_residual``, shape (5N, 4N + 1)."""
    n = len(masses)
    q = u[:-1].reshape(n, 4)
    lam = u[-1]
    gsign = np.array([1.0, 1.0, 1.0, float(sigma)])
    d = _distance_matrix(sigma, q)
    sn, csn, _ = unified_trig(d, sigma)
    jac = np.zeros((5 * n, 4 * n + 1))
    eye4 = np.eye(4)
    gm = _grad_moment(sigma, masses, q)
    for i in range(n):
        rows = slice(4 * i, 4 * i + 4)
        gqi = gsign * q[i]
        for j in range(n):
            if j == i:
                continue
            mm = masses[i] * masses[j]
            s3 = sn[i, j] ** 3
            s5 = sn[i, j] ** 5
            cs = csn[i, j]
            gqj = gsign * q[j]
            diff = q[j] - cs * q[i]
            jac[rows, 4 * j : 4 * j + 4] += mm * (
                (eye4 - sigma * np.outer(q[i], gqi)) / s3 + (3.0 * cs / s5) * np.outer(diff, gqi)
            )
            jac[rows, 4 * i : 4 * i + 4] += mm * (
                (-cs * eye4 - sigma * np.outer(q[i], gqj)) / s3 + (3.0 * cs / s5) * np.outer(diff, gqj)
            )
        jac[rows, 4 * i : 4 * i + 4] -= lam * _grad_moment_jac(sigma, masses[i], q[i])
        jac[rows, -1] = -gm[i]
        jac[4 * n + i, 4 * i : 4 * i + 4] = 2.0 * gqi
    return jac


def find_cc(sigma, masses, init=None, opts=None):
    """Search for a central configuration.

    Parameters
    ----------
    sigma : int
        +1 or -1.
    masses : array_like, shape (N,)
        Strictly positive, N >= 2.
    init : Configuration, optional
        Starting positions.  When omitted, a random start is drawn from
        ``numpy.random.default_rng(opts.seed)``.
    opts : SolveOptions, optional

    Returns
    -------
    SolveOutcome
        Always returned; inspect ``converged``.  The final positions are
        rescaled exactly onto the manifold and the multiplier refitted
        before the verdict, so a converged outcome is a valid
        ``Configuration`` whose refitted residual beats the tolerance.
    """
    _check_sigma(sigma)
    opts = opts if opts is not None else SolveOptions()
    masses = np.atleast_1d(np.asarray(masses, dtype=float))
    if len(masses) < 2:
        raise ValueError("the search needs at least two bodies")
    if (masses <= 0.0).any():
        raise ValueError("masses must be strictly positive")
    if init is None:
        rng = np.random.default_rng(opts.seed)
        init = random_configuration(sigma, masses, rng)
    elif init.sigma != sigma:
        raise ValueError("init.sigma does not match the requested sigma")
    elif init.positions.shape[0] != len(masses):
        raise ValueError("init and masses disagree on the number of bodies")

    n = len(masses)
    lam0 = opts.lam_init
    if lam0 is None:
        lam0 = fit_lambda(Configuration(sigma, masses, init.positions, validate=False))
    u = np.concatenate([init.positions.ravel(), [float(lam0)]])
    r = _residual(sigma, masses, u)
    cost = 0.5 * float(r @ r)
    mu = float(opts.damping_init)
    nu = 2.0
    eye = np.eye(4 * n + 1)
    iterations = 0
    message = "max_iter reached"
    prev_rinf = float("inf")
    polish_left = 8

    for it in range(opts.max_iter):
        rinf = float(np.abs(r).max())
        at_tol = rinf < 0.5 * opts.residual_tol
        if at_tol:
            message = "residual tolerance met"
            # A few extra iterations while convergence is still fast: wide
            # configurations have tiny force scales, so meeting the absolute
            # tolerance can leave the coordinates orders of magnitude less
            # accurate than the quadratic tail is happy to deliver.
            if rinf > prev_rinf / 1.25 or polish_left <= 0:
                break
            polish_left -= 1
        prev_rinf = rinf
        iterations = it + 1
        jac = _jacobian(sigma, masses, u)
        grad = jac.T @ r
        normal = jac.T @ jac
        unorm = float(np.linalg.norm(u))
        accepted = False
        singular_streak = 0
        for _ in range(80):
            delta = np.linalg.solve(normal + mu * eye, -grad)
            if np.linalg.norm(delta) <= opts.step_tol * (unorm + opts.step_tol):
                message = "step shrank below step_tol"
                break
            try:
                r_try = _residual(sigma, masses, u + delta)
            except SingularPair:
                singular_streak += 1
                if singular_streak > 3:
                    message = "trial steps kept hitting singular pairs"
                    break
                mu *= 100.0
                nu = 2.0
                continue
            cost_try = 0.5 * float(r_try @ r_try)
            predicted = 0.5 * float(delta @ (mu * delta - grad))
            if cost_try < cost and predicted > 0.0:
                gain = (cost - cost_try) / predicted
                mu *= max(1.0 / 3.0, 1.0 - (2.0 * gain - 1.0) ** 3)
                nu = 2.0
                u = u + delta
                r = r_try
                cost = cost_try
                accepted = True
                break
            mu *= nu
            nu *= 2.0
            if mu > 1e15:
                message = "damping exploded without an acceptable step"
                break
        if not accepted:
            if at_tol:
                message = "residual tolerance met"
            break

    q = u[:-1].reshape(n, 4)
    lam = float(u[-1])
    try:
        q = project_to_manifold(q, sigma)
        config = Configuration(sigma, masses, q)
        valid = True
    except (ValueError, SingularPair) as exc:
        config = Configuration(sigma, masses, q, validate=False)
        valid = False
        message = f"final iterate unusable: {exc}"

    if valid:
        lam = fit_lambda(config)
        report = cc_residual(config, lam)
        try:
            report.dim_class = classify_dimension(config)
        except DegenerateConfig:
            report.dim_class = None
        report.common_phi = common_phi(config)
        fingerprint = config_fingerprint(config)
        converged = report.residual_inf < opts.residual_tol
    else:
        report = CCReport(
            lam=lam,
            residual_per_body=np.full(n, np.inf),
            residual_inf=float("inf"),
            is_special=False,
        )
        fingerprint = np.full(n * (n - 1) // 2, np.nan)
        converged = False

    return SolveOutcome(
        converged=converged,
        config=config,
        report=report,
        iterations=iterations,
        fingerprint=fingerprint,
        message=message,
    )


def canonical_gauge(config, rho_tol=RHO_TOL, coplanar_tol=COPLANAR_TOL):
    """Rotate a configuration into a standard representative of its orbit.

    Hyperbolic configurations with a common rapidity are first boosted
    into the z = 0 slice.  Then an xy-rotation puts the body farthest
    from the zw-axis onto the half-plane y = 0, x > 0.  Applying the
    gauge twice gives the same configuration.

    Raises
    ------
    GaugeDegenerate
        When every body sits on the zw-axis and no xy-gauge exists.
    """
    cfg = config
    if cfg.sigma == -1 and common_phi(cfg, coplanar_tol) is not None:
        cfg, _ = normalize_to_h2xyw(cfg, coplanar_tol)
    radius = np.hypot(cfg.positions[:, 0], cfg.positions[:, 1])
    k = int(np.argmax(radius))
    if radius[k] < rho_tol:
        raise GaugeDegenerate("every body sits on the zw-axis")
    psi = -float(np.arctan2(cfg.positions[k, 1], cfg.positions[k, 0]))
    return cfg.transformed(GroupElement(psi=psi, chi=0.0, sigma=cfg.sigma))


@dataclass(frozen=True)
class SpecialCurvePoint:
    """One c-slice of the vanishing-multiplier curve."""

    c: float
    theta: float | None
    lam: float | None
    max_force: float | None
    found: bool
    note: str = ""


def special_curve(c_values, n_scan=N_SCAN, theta_xtol=THETA_XTOL):
    """Trace the vanishing-multiplier curve of the two-plus-triangle family.

    For each ring height c in (-1, 0) the closed-form multiplier is
    scanned on ``n_scan`` interior theta samples in (0, pi/2); the
    largest-theta sign change is polished with a bracketed root solve.
    Slices without a sign change (the multiplier stays positive for
    small |c|) come back with ``found=False`` and note "no_sign_change"
    rather than raising.
    """
    out = []
    for c in np.atleast_1d(np.asarray(c_values, dtype=float)):
        if not -1.0 < c < 0.0:
            raise ValueError(f"the curve is traced for c in (-1, 0), got {c}")
        thetas = np.linspace(0.0, np.pi / 2.0, n_scan + 2)[1:-1]
        vals = np.array([lambda_closed_form(c, t).lam for t in thetas])
        theta_star = None
        for k in range(len(thetas) - 1, 0, -1):
            if vals[k] == 0.0:
                theta_star = float(thetas[k])
                break
            if vals[k - 1] * vals[k] < 0.0:
                theta_star = float(
                    brentq(
                        lambda t: lambda_closed_form(c, t).lam,
                        thetas[k - 1],
                        thetas[k],
                        xtol=theta_xtol,
                        rtol=8.9e-16,
                    )
                )
                break
        if theta_star is None:
            out.append(SpecialCurvePoint(float(c), None, None, None, False, "no_sign_change"))
            continue
        lam_at = lambda_closed_form(c, theta_star).lam
        cfg = family_q(c, theta_star)
        max_force = float(np.linalg.norm(grad_potential(cfg), axis=1).max())
        if max_force >= CURVE_FORCE_TOL:
            raise CurvedNBodyError(
                f"curve point at c={c:.6g} fails the force check ({max_force:.3e})"
            )
        out.append(SpecialCurvePoint(float(c), theta_star, float(lam_at), max_force, True))
    return out

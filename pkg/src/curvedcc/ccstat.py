"""Central-configuration tests, classification, and coplanarity tools."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateConfig, NotCoplanar
from .manifold import RHO_TOL, GroupElement, apply_group, polar_zw
from .dynamics import Configuration, grad_moment, grad_potential, unified_trig, _distance_matrix

__all__ = [
    "LAM_TOL",
    "CC_TOL",
    "RANK_TOL",
    "COPLANAR_TOL",
    "DENOM_TOL",
    "DimClass",
    "CCReport",
    "NecessarySums",
    "fit_lambda",
    "cc_residual",
    "classify_dimension",
    "necessary_sums",
    "common_phi",
    "normalize_to_h2xyw",
]

#: |lam| below this counts as the special (lam = 0) case
LAM_TOL = 1e-9
#: residual threshold entering the ``is_special`` verdict
CC_TOL = 1e-9
#: relative singular-value cutoff for the dimension classes
RANK_TOL = 1e-8
#: max angle/rapidity spread still counted as one plane
COPLANAR_TOL = 1e-8
#: below this squared-gradient mass the lambda fit is declared degenerate
DENOM_TOL = 1e-14


class DimClass(str, Enum):
    """Dimension classes by rank of the (N, 4) position matrix."""

    GEODESIC = "geodesic"
    TWO_DIMENSIONAL = "2d"
    THREE_DIMENSIONAL = "3d"

    def __str__(self):
        return self.value


@dataclass
class CCReport:
    """Verdict of a central-configuration check at a given multiplier."""

    lam: float
    residual_per_body: np.ndarray
    residual_inf: float
    is_special: bool
    lam_degenerate: bool = False
    dim_class: DimClass | None = None
    common_phi: float | None = None


@dataclass(frozen=True)
class NecessarySums:
    """Per-body first-order sums; NaN where the body's angle is undefined."""

    values: np.ndarray
    defined: np.ndarray


def fit_lambda(config, denom_tol=DENOM_TOL, return_degenerate=False):
    """Least-squares multiplier for the central-configuration equations.

    Minimizes the stacked Euclidean norm of grad_potential - lam *
    grad_moment over lam, giving the ratio of the two gradients' inner
    product to the squared norm of grad_moment.  A squared norm below
    ``denom_tol`` (every body on the zw-axis) makes the fit meaningless;
    lam is then 0 and the degenerate flag is set.
    """
    f = grad_potential(config)
    g = grad_moment(config)
    denom = float((g * g).sum())
    if denom < denom_tol:
        lam, degenerate = 0.0, True
    else:
        lam, degenerate = float((f * g).sum() / denom), False
    if return_degenerate:
        return lam, degenerate
    return lam


def cc_residual(config, lam, lam_tol=LAM_TOL, cc_tol=CC_TOL):
    """Residual report for the equations F_i = lam * grad_moment_i.

    ``residual_per_body`` holds Euclidean norms of the per-body defect,
    ``residual_inf`` their maximum.  ``is_special`` is the verdict
    "central and with vanishing multiplier": |lam| < lam_tol and
    residual_inf < cc_tol.
    """
    f = grad_potential(config)
    g = grad_moment(config)
    defect = f - lam * g
    per_body = np.linalg.norm(defect, axis=1)
    inf = float(per_body.max())
    return CCReport(
        lam=float(lam),
        residual_per_body=per_body,
        residual_inf=inf,
        is_special=bool(abs(lam) < lam_tol and inf < cc_tol),
    )


def classify_dimension(config, rank_tol=RANK_TOL):
    """Dimension class from the numerical rank of the position matrix.

    Rank 2 spans one geodesic, 3 a two-dimensional piece, 4 the full
    space.  Rank below 2 cannot happen for valid configurations (two
    distinct non-singular points are independent) and raises
    ``DegenerateConfig``.
    """
    svals = np.linalg.svd(config.positions, compute_uv=False)
    rank = int((svals > rank_tol * svals[0]).sum())
    if rank <= 1:
        raise DegenerateConfig(f"position matrix has rank {rank}")
    return {2: DimClass.GEODESIC, 3: DimClass.TWO_DIMENSIONAL, 4: DimClass.THREE_DIMENSIONAL}[rank]


def _polar_arrays(config, rho_tol):
    rho = np.empty(config.n)
    phi = np.zeros(config.n)
    defined = np.zeros(config.n, dtype=bool)
    for i in range(config.n):
        p = polar_zw(config.positions[i], config.sigma, rho_tol)
        rho[i] = p.rho
        defined[i] = p.defined
        if p.defined:
            phi[i] = p.phi
    return rho, phi, defined


def necessary_sums(config, rho_tol=RHO_TOL):
    """First-order obstruction sums over the zw-angles.

    For each body i with a defined angle phi_i the value is

        sum over j != i with rho_j > 0 of
            m_i m_j rho_j sn(phi_j - phi_i) / sn(d_ij)^3.

    Central configurations make every defined entry vanish.  Entries for
    bodies whose angle is undefined (zero zw-radius on the sphere) are
    NaN with ``defined`` False; such bodies are also dropped from the
    sums of others since their term carries the factor rho_j with an
    arbitrary angle.
    """
    rho, phi, defined = _polar_arrays(config, rho_tol)
    d = _distance_matrix(config.sigma, config.positions)
    sn, _, _ = unified_trig(d, config.sigma)
    sn_dphi, _, _ = unified_trig(phi[np.newaxis, :] - phi[:, np.newaxis], config.sigma)
    term = np.outer(config.masses, config.masses) * rho[np.newaxis, :] * sn_dphi / sn**3
    np.fill_diagonal(term, 0.0)
    term[:, ~defined] = 0.0
    values = term.sum(axis=1)
    values[~defined] = np.nan
    return NecessarySums(values=values, defined=defined)


def common_phi(config, tol=COPLANAR_TOL):
    """The shared zw-angle/rapidity, or None.

    Returns the rho-weighted mean angle when every defined angle sits
    within ``tol`` of it, and None otherwise (also when no body has a
    defined angle).
    """
    rho, phi, defined = _polar_arrays(config, RHO_TOL)
    if not defined.any():
        return None
    weights = rho[defined]
    mean = float((weights * phi[defined]).sum() / weights.sum())
    if np.abs(phi[defined] - mean).max() < tol:
        return mean
    return None


def normalize_to_h2xyw(config, tol=COPLANAR_TOL):
    """Boost a coplanar hyperbolic configuration into the z = 0 slice.

    Finds the common rapidity and applies the zw-boost killing it, so
    all bodies land on the copy of H2 spanned by (x, y, w).  Returns the
    new configuration and the group element used.

    Raises
    ------
    NotCoplanar
        When no common rapidity exists at tolerance ``tol``.
    ValueError
        For spherical input.
    """
    if config.sigma != -1:
        raise ValueError("only hyperboloid configurations can be boosted to the z = 0 slice")
    phi = common_phi(config, tol)
    if phi is None:
        raise NotCoplanar(f"zw-rapidities spread wider than {tol:g}")
    g = GroupElement(psi=0.0, chi=phi, sigma=-1)
    return Configuration(config.sigma, config.masses.copy(), apply_group(g, config.positions)), g

import math

import numpy as np
import pytest

import curvedcc as cc
from curvedcc.solver import SolveOptions

LAM_SPOT = 0.7032114190386308


def test_random_configuration_contract():
    rng = np.random.default_rng(4)
    for sigma in (1, -1):
        cfg = cc.random_configuration(sigma, [1.0, 2.0, 0.5], rng, min_distance=0.2)
        assert cfg.sigma == sigma
        assert cc.on_manifold(cfg.positions, sigma).all()
        d = cfg.distance_matrix()
        assert d[~np.eye(3, dtype=bool)].min() >= 0.2


def test_find_cc_is_deterministic_per_seed():
    for sigma, masses in ((1, [1.0, 1.0, 1.0]), (-1, [1.0, 2.0, 0.5])):
        a = cc.find_cc(sigma, masses, opts=SolveOptions(seed=11))
        b = cc.find_cc(sigma, masses, opts=SolveOptions(seed=11))
        assert a.converged and b.converged
        assert np.array_equal(a.fingerprint, b.fingerprint)  # bitwise
        assert a.report.lam == b.report.lam


def test_found_solutions_survive_recomputation():
    for sigma in (1, -1):
        out = cc.find_cc(sigma, [1.0, 2.0, 0.5], opts=SolveOptions(seed=11))
        assert out.converged
        rep = cc.cc_residual(out.config, out.report.lam)
        assert rep.residual_inf < 1e-10
        assert rep.residual_inf == out.report.residual_inf


def test_hyperbolic_solutions_have_nonzero_multiplier():
    out = cc.find_cc(-1, [1.0, 2.0, 0.5], opts=SolveOptions(seed=11))
    assert out.converged
    assert abs(out.report.lam) > 1e-9
    assert not out.report.is_special


def test_find_cc_accepts_exact_family_start():
    init = cc.family_q(-0.5, math.pi / 4.0)
    out = cc.find_cc(1, init.masses, init=init)
    assert out.converged
    assert out.iterations <= 2
    assert out.report.lam == pytest.approx(LAM_SPOT, abs=1e-12)


def test_find_cc_recovers_perturbed_pentatope():
    # the regular simplex sits on a one-parameter branch of solutions, so a
    # perturbed start is only guaranteed to land somewhere nearby on it
    rng = np.random.default_rng(7)
    base = cc.pentatope()
    noisy = cc.project_to_manifold(base.positions + 1e-3 * rng.normal(size=(5, 4)), 1)
    out = cc.find_cc(1, base.masses, init=cc.Configuration(1, base.masses, noisy))
    assert out.converged
    assert out.report.residual_inf < 1e-10
    assert np.abs(out.fingerprint - cc.config_fingerprint(base)).max() < 5e-3
    assert cc.cc_residual(out.config, out.report.lam).residual_inf < 1e-10


@pytest.mark.parametrize(
    "sigma,base,full_group",
    [(1, 200, True), (-1, 700, False)],
    ids=["sphere", "hyperboloid"],
)
def test_gauge_transformed_starts_find_the_same_orbit(sigma, base, full_group):
    for seed in range(10):
        rng = np.random.default_rng(base + seed)
        masses = [1.0, 1.0, 1.0]
        init = cc.random_configuration(sigma, masses, rng)
        chi = float(rng.uniform(0, 2 * math.pi)) if full_group else 0.0
        g = cc.GroupElement(psi=float(rng.uniform(0, 2 * math.pi)), chi=chi, sigma=sigma)
        a = cc.find_cc(sigma, masses, init=init, opts=SolveOptions(seed=seed))
        b = cc.find_cc(sigma, masses, init=init.transformed(g), opts=SolveOptions(seed=seed))
        assert a.converged and b.converged, seed
        fa = cc.config_fingerprint(cc.canonical_gauge(a.config))
        fb = cc.config_fingerprint(cc.canonical_gauge(b.config))
        assert np.abs(fa - fb).max() < 1e-4, seed


def test_canonical_gauge_is_idempotent():
    can = cc.canonical_gauge(cc.family_q(-0.5, math.pi / 4.0))
    again = cc.canonical_gauge(can)
    assert np.abs(can.positions - again.positions).max() < 1e-12


def test_canonical_gauge_removes_rotation():
    fam = cc.family_q(-0.5, math.pi / 4.0)
    rot = fam.transformed(cc.GroupElement(psi=1.1, chi=0.0, sigma=1))
    a = cc.canonical_gauge(fam)
    b = cc.canonical_gauge(rot)
    assert np.abs(a.positions - b.positions).max() < 1e-10


def test_canonical_gauge_flattens_boosted_pair():
    pair = cc.Configuration(
        -1,
        [1.0, 2.0],
        np.array(
            [
                [math.sinh(0.5), 0.0, 0.0, math.cosh(0.5)],
                [-math.sinh(0.4), 0.0, 0.0, math.cosh(0.4)],
            ]
        ),
    )
    boosted = pair.transformed(cc.GroupElement(psi=0.3, chi=0.7, sigma=-1))
    can = cc.canonical_gauge(boosted)
    assert np.abs(can.positions[:, 2]).max() < 1e-12


def test_canonical_gauge_degenerate_on_zw_axis():
    zw_only = cc.Configuration(
        1,
        [1.0, 1.0],
        np.array(
            [
                [0.0, 0.0, math.sin(0.4), math.cos(0.4)],
                [0.0, 0.0, -math.sin(0.4), math.cos(0.4)],
            ]
        ),
    )
    with pytest.raises(cc.GaugeDegenerate):
        cc.canonical_gauge(zw_only)


def test_fingerprint_is_gauge_invariant():
    fam = cc.family_q(-0.5, math.pi / 4.0)
    fp = cc.config_fingerprint(fam)
    for psi, chi in ((0.9, 0.0), (2.2, 1.3)):
        g = cc.GroupElement(psi=psi, chi=chi, sigma=1)
        assert np.abs(fp - cc.config_fingerprint(fam.transformed(g))).max() < 1e-12

"""End-to-end acceptance gate.

Run with ``pytest tests/test_acceptance.py -v -s``.  Each test prints a
single ``[criterion NN]`` line with the measured numbers so the whole
gate can be audited from the console output.
"""

import math

import numpy as np
import pytest

import curvedcc as cc
from curvedcc import cli

LAM_ORACLE = 0.7032114190386308          # dual-path closed form at c=-1/2, theta=pi/4
MASS_ORACLE = 24.0 / (7.0 * math.sqrt(7.0))
THETA_STAR_ORACLE = 0.9754145029554944


def _line(num, label, ok, detail):
    print(f"[criterion {num:02d}] {label}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


@pytest.fixture(scope="module")
def family_grid():
    cs = np.linspace(-0.9, -0.1, 9)
    thetas = np.linspace(0.1 * math.pi / 2.0, 0.9 * math.pi / 2.0, 9)
    pairs = [(c, t) for c in cs for t in thetas]
    pairs += [(-c, math.pi - t) for c, t in pairs]
    grid = []
    for c, t in pairs:
        cfg = cc.family_q(c, t)
        grid.append((c, t, cfg, cc.fit_lambda(cfg)))
    return grid


def test_criterion_01_pentatope_forces_vanish():
    cfg = cc.pentatope()
    max_force = float(np.linalg.norm(cc.grad_potential(cfg), axis=1).max())
    dots = cfg.positions @ cfg.positions.T
    dot_err = float(np.abs(dots[~np.eye(5, dtype=bool)] + 0.25).max())
    ok = max_force < 1e-12 and dot_err < 1e-15
    assert _line(1, "pentatope forces vanish", ok,
                 f"max_force={max_force:.3g}, dot_err={dot_err:.3g}")


def test_criterion_02_family_residual_on_both_rectangles(family_grid):
    worst = max(cc.cc_residual(cfg, lam).residual_inf for _, _, cfg, lam in family_grid)
    ok = worst < 1e-10
    assert _line(2, "family residual on both rectangles", ok,
                 f"162 points, worst residual={worst:.3g}")


def test_criterion_03_multiplier_closed_form(family_grid):
    worst_fit = 0.0
    worst_dual = 0.0
    for c, t, _, lam in family_grid:
        split = cc.lambda_closed_form(c, t)
        worst_fit = max(worst_fit, abs(lam - split.lam))
        worst_dual = max(worst_dual, abs(split.lam1 + split.lam2 - split.lam))
    spot = cc.lambda_closed_form(-0.5, math.pi / 4.0).lam
    ok = worst_fit < 1e-9 and worst_dual < 1e-12 and abs(spot - LAM_ORACLE) < 1e-5
    assert _line(3, "multiplier closed form", ok,
                 f"fit gap={worst_fit:.3g}, dual gap={worst_dual:.3g}, spot={spot:.10f}")


def test_criterion_04_polar_mass_spot_value():
    m_closed = cc.family_mass(-0.5, math.pi / 4.0)
    m_root = float(cc.ngon_family(3, -0.5, math.pi / 4.0).masses[0])
    ok = abs(m_closed - MASS_ORACLE) < 1e-6 and abs(m_root - m_closed) < 1e-8
    assert _line(4, "polar mass spot value", ok,
                 f"closed={m_closed:.10f}, root solve gap={abs(m_root - m_closed):.3g}")


def test_criterion_05_hyperbolic_solutions_flatten_to_a_slice():
    rng = np.random.default_rng(24)
    converged = 0
    phi_defined = 0
    z_worst = 0.0
    for _ in range(20):
        masses = rng.uniform(0.5, 2.0, 3)
        seed = int(rng.integers(2**31))
        out = cc.find_cc(-1, masses, opts=cc.SolveOptions(seed=seed))
        if not out.converged:
            continue
        converged += 1
        if cc.common_phi(out.config, tol=1e-8) is not None:
            phi_defined += 1
        flat, _ = cc.normalize_to_h2xyw(out.config)
        z_worst = max(z_worst, float(np.abs(flat.positions[:, 2]).max()))
    ok = converged >= 15 and phi_defined == converged and z_worst < 1e-8
    assert _line(5, "hyperbolic solutions flatten to a slice", ok,
                 f"{converged}/20 converged, {phi_defined} with common rapidity, max|z|={z_worst:.3g}")


def test_criterion_06_two_body_multiplier_closed_form():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(5):
        m = float(rng.uniform(0.5, 2.0))
        a = float(rng.uniform(0.3, 1.2))
        cfg = cc.Configuration(
            -1, [m, m],
            np.array([[math.sinh(a), 0.0, 0.0, math.cosh(a)],
                      [-math.sinh(a), 0.0, 0.0, math.cosh(a)]]),
        )
        worst = max(worst, abs(cc.fit_lambda(cfg) + m / math.sinh(2.0 * a) ** 3))
    ok = worst < 1e-9
    assert _line(6, "two-body multiplier closed form", ok, f"worst gap={worst:.3g}")


def test_criterion_07_gradients_match_finite_differences():
    h = 1e-6
    rng = np.random.default_rng(40)
    worst = 0.0
    for sigma in (1, -1):
        for n in (2, 3, 5):
            masses = rng.uniform(0.5, 2.0, n)
            cfg = cc.random_configuration(sigma, masses, rng, min_distance=0.3)
            for _ in range(40):
                t = cc.tangent_project(rng.normal(size=(n, 4)), cfg.positions, sigma)
                for gfun, vfun in ((cc.grad_potential, cc.potential),
                                   (cc.grad_moment, cc.moment)):
                    directional = float(np.sum(cc.sdot(gfun(cfg), t, sigma)))
                    qp = cc.project_to_manifold(cfg.positions + h * t, sigma)
                    qm = cc.project_to_manifold(cfg.positions - h * t, sigma)
                    fd = (vfun(cc.Configuration(sigma, masses, qp, validate=False))
                          - vfun(cc.Configuration(sigma, masses, qm, validate=False))) / (2 * h)
                    worst = max(worst, abs(directional - fd) / max(abs(fd), 1e-12))
    ok = worst < 1e-6
    assert _line(7, "gradients match finite differences", ok,
                 f"240 directions x 2 gradients, worst rel err={worst:.3g}")


def test_criterion_08_relative_equilibrium_conservation():
    cfg = cc.family_q(-0.5, math.pi / 4.0)
    lam = cc.fit_lambda(cfg)
    velocities = cc.relative_equilibrium_velocities(cfg, lam, 0.0)
    traj = cc.integrate(cc.PhaseState(cfg, velocities), 1e-3, 10.0)
    assert not traj.aborted

    iu = np.triu_indices(cfg.n, 1)
    d0 = cfg.distance_matrix()[iu]
    drift = 0.0
    for k in range(len(traj)):
        dk = cc.Configuration(1, cfg.masses, traj.positions[k], validate=False).distance_matrix()[iu]
        drift = max(drift, float(np.abs(dk - d0).max()))
    de = float(np.abs(traj.energy - traj.energy[0]).max())
    djxy = float(np.abs(traj.momentum_xy - traj.momentum_xy[0]).max())
    djzw = float(np.abs(traj.momentum_zw - traj.momentum_zw[0]).max())
    ok = drift < 1e-8 and de < 1e-10 and djxy < 1e-10 and djzw < 1e-10
    assert _line(8, "relative equilibrium conservation", ok,
                 f"distance drift={drift:.3g} (bound 1e-08), dE={de:.3g}, dJxy={djxy:.3g}, dJzw={djzw:.3g}")


def test_criterion_09_necessary_sign_sums(family_grid):
    worst = 0.0
    for _, _, cfg, _ in family_grid:
        sums = cc.necessary_sums(cfg)
        worst = max(worst, float(np.abs(sums.values[sums.defined]).max()))

    rng = np.random.default_rng(9)
    top = -math.inf
    negative = 0
    for _ in range(10):
        masses = rng.uniform(0.5, 2.0, 4)
        xyz = rng.normal(size=(4, 3))
        w = np.sqrt(1.0 + np.sum(xyz * xyz, axis=1))
        cfg = cc.Configuration(-1, masses, np.column_stack([xyz, w]))
        phi = np.array([cc.polar_zw(p, -1).phi for p in cfg.positions])
        k = int(np.argmax(phi))
        sums = cc.necessary_sums(cfg)
        assert sums.defined[k]
        value = float(sums.values[k])
        top = max(top, value)
        negative += value < 0.0
    ok = worst < 1e-10 and negative == 10
    assert _line(9, "necessary sign sums", ok,
                 f"grid worst={worst:.3g}, {negative}/10 max-rapidity sums negative (largest {top:.3g})")


def test_criterion_10_vanishing_multiplier_curve():
    points = cc.special_curve(np.linspace(-0.9, -0.5, 9))
    found = sum(p.found for p in points)
    worst_lam = max(abs(p.lam) for p in points if p.found)
    worst_force = max(p.max_force for p in points if p.found)
    theta_half = points[-1].theta
    ok = (found == 9 and worst_lam < 1e-10 and worst_force < 1e-8
          and abs(theta_half - 0.9752) < 1e-3)
    assert _line(10, "vanishing-multiplier curve", ok,
                 f"{found}/9 roots, worst |lambda|={worst_lam:.3g}, worst force={worst_force:.3g}, "
                 f"theta*(-1/2)={theta_half:.6f}")


def test_criterion_11_ring_generalization():
    worst = 0.0
    for n in (4, 5):
        cfg = cc.ngon_family(n, -0.5, math.pi / 4.0)
        worst = max(worst, cc.cc_residual(cfg, cc.fit_lambda(cfg)).residual_inf)
    mass_gap = abs(float(cc.ngon_family(3, -0.5, math.pi / 4.0).masses[0])
                   - cc.family_mass(-0.5, math.pi / 4.0))
    ok = worst < 1e-10 and mass_gap < 1e-10
    assert _line(11, "ring generalization", ok,
                 f"worst residual={worst:.3g}, triangle mass gap={mass_gap:.3g}")


def test_criterion_12_projection_ball_membership(tmp_path, capsys, family_grid):
    checked = 0
    bad = 0
    for c, _, cfg, _ in family_grid:
        path = tmp_path / "member.json"
        cli.write_config_file(str(path), cfg)
        out_path = tmp_path / "member.csv"
        assert cli.main(["project", str(path), "--mode", "stereographic",
                         "--out", str(out_path)]) == 0
        rows = [r.split(",") for r in out_path.read_text().strip().splitlines()[1:]]
        inside = [r[5] == "true" for r in rows]
        # polar pair first, then the ring; membership flips with the rectangle
        expect = [c > 0, c > 0, c < 0, c < 0, c < 0]
        checked += 1
        bad += inside != expect
    capsys.readouterr()
    ok = bad == 0
    assert _line(12, "projection ball membership", ok,
                 f"{checked} configurations, {bad} misclassified")

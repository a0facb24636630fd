"""Figure rendering for the CLI report paths.  Headless backend only."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_projection(coords, inside, masses, mode, path):
    """3D scatter of projected bodies with the unit sphere for scale."""
    coords = np.asarray(coords, dtype=float)
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    u = np.linspace(0.0, 2.0 * np.pi, 24)
    v = np.linspace(0.0, np.pi, 12)
    ax.plot_wireframe(
        np.outer(np.cos(u), np.sin(v)),
        np.outer(np.sin(u), np.sin(v)),
        np.outer(np.ones_like(u), np.cos(v)),
        color="0.85",
        linewidth=0.5,
    )
    if len(coords):
        sizes = 40.0 * np.asarray(masses, dtype=float) / max(np.max(masses), 1e-12)
        colors = ["C0" if flag else "C3" for flag in inside]
        ax.scatter(coords[:, 0], coords[:, 1], coords[:, 2], s=20.0 + sizes, c=colors, depthshade=False)
    ax.set_title(mode)
    ax.set_box_aspect((1, 1, 1))
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_special_curve(cs, thetas, path):
    """theta*(c) for the slices where the curve exists."""
    cs = np.asarray(cs, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    have = [(c, t) for c, t in zip(cs, thetas) if t is not None]
    if have:
        xs, ys = zip(*have)
        ax.plot(xs, ys, "o-", color="C0")
    ax.set_xlabel("ring height c")
    ax.set_ylabel("theta at vanishing multiplier")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trajectory(times, energy, jxy, jzw, drift, path):
    """Distance drift and conservation errors over a run."""
    times = np.asarray(times, dtype=float)
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    top.semilogy(times, np.maximum(np.asarray(drift, dtype=float), 1e-18), color="C0")
    top.set_ylabel("max distance drift")
    top.grid(True, alpha=0.3)
    for series, label, color in (
        (energy, "|E - E0|", "C1"),
        (jxy, "|Jxy - Jxy0|", "C2"),
        (jzw, "|Jzw - Jzw0|", "C4"),
    ):
        err = np.abs(np.asarray(series, dtype=float) - float(series[0]))
        bottom.semilogy(times, np.maximum(err, 1e-18), label=label, color=color)
    bottom.set_xlabel("t")
    bottom.set_ylabel("conservation error")
    bottom.legend(loc="best", fontsize=8)
    bottom.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""Self-verification suites: solver cross-checks and analytic oracles.

These are the checks behind the ``validate`` CLI subcommand.  Each suite
returns (name, passed, detail); they are deliberately redundant with the
unit tests so a deployed installation can re-verify itself without a
test harness.
"""

from __future__ import annotations

import math

import numpy as np

from .lyapunov import (
    integrate_lyapunov,
    solve_lyapunov,
    solve_lyapunov_oracle,
    stability_check,
)
from .measures import gaussian_steering, log_negativity, tmsv_covariance
from .model import build_drift
from .params import resolve_system_params


def random_stable_system(rng: np.random.Generator, n_modes: int):
    """A random stable drift matrix and PSD diffusion, dimension 2*n_modes."""
    n = 2 * n_modes
    drift = rng.normal(size=(n, n))
    margin = float(np.linalg.eigvals(drift).real.max())
    drift -= (margin + 0.5 + rng.uniform(0.0, 1.0)) * np.eye(n)
    root = rng.normal(size=(n, n))
    diffusion = root @ root.T + 0.1 * np.eye(n)
    return drift, diffusion


def check_solver_vs_oracle(n_systems: int = 100, seed: int = 20240) -> tuple:
    """Bartels-Stewart against the Kronecker solve on random systems."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(n_systems):
        n_modes = 2 + k % 9  # sizes 2..10
        drift, diffusion = random_stable_system(rng, n_modes)
        cov = solve_lyapunov(drift, diffusion)
        ref = solve_lyapunov_oracle(drift, diffusion)
        rel = float(np.linalg.norm(cov - ref) / np.linalg.norm(ref))
        worst = max(worst, rel)
    passed = worst < 1e-8
    return "solver-vs-oracle", passed, f"max relative difference {worst:.3e} over {n_systems} systems"


def check_integration_oracle(n_systems: int = 10, seed: int = 31337) -> tuple:
    """Algebraic solution against direct time integration."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(n_systems):
        drift, diffusion = random_stable_system(rng, 2 + k % 4)
        cov = solve_lyapunov(drift, diffusion)
        ref = integrate_lyapunov(drift, diffusion)
        rel = float(np.linalg.norm(cov - ref) / np.linalg.norm(cov))
        worst = max(worst, rel)
    passed = worst < 1e-6
    return "integration-oracle", passed, f"max relative difference {worst:.3e} over {n_systems} systems"


def check_tmsv_family() -> tuple:
    """Entanglement and steering of the squeezed-vacuum family."""
    worst = 0.0
    for r in (0.1, 0.5, 1.0):
        cov = tmsv_covariance(r)
        worst = max(worst, abs(log_negativity(cov) - 2.0 * r))
        expected = math.log(math.cosh(2.0 * r))
        worst = max(worst, abs(gaussian_steering(cov, 0) - expected))
        worst = max(worst, abs(gaussian_steering(cov, 1) - expected))
    passed = worst < 1e-10
    return "analytic-measures", passed, f"max deviation {worst:.3e}"


def check_decoupled_spectrum() -> tuple:
    """Drift eigenvalues in the zero-coupling limit against the analytic set."""
    params = resolve_system_params(
        {"D_ma": 0.0, "D_b1b2": 0.0, "G_m": 0.0, "G_c": 0.0}
    )
    drift = build_drift(params)
    got = np.sort_complex(np.linalg.eigvals(drift))
    detunings = (
        (params.gamma_b1, params.omega_b1),
        (params.gamma_b2, params.omega_b2),
        (params.gamma_m, params.delta_m_tilde + params.barnett_shift),
        (params.gamma_c, params.delta_c_tilde),
        (params.gamma_a, params.delta_a),
    )
    expected = np.sort_complex(
        np.array([s * 1j * d - g for g, d in detunings for s in (+1, -1)])
    )
    scale = np.abs(expected).max()
    worst = float(np.abs(got - expected).max() / scale)
    margin = stability_check(drift)
    passed = worst < 1e-12 and margin.stable
    return "decoupled-spectrum", passed, f"max relative deviation {worst:.3e}"


def run_all(stream=None) -> bool:
    """Run every suite, print one line per suite, return overall pass."""
    checks = (
        check_solver_vs_oracle,
        check_integration_oracle,
        check_tmsv_family,
        check_decoupled_spectrum,
    )
    ok = True
    for check in checks:
        name, passed, detail = check()
        ok &= passed
        line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
        if stream is not None:
            print(line, file=stream)
        else:
            print(line)
    return ok

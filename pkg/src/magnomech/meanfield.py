"""Classical steady-state amplitudes and the effective couplings they set.

The strong magnon and optical drives produce large coherent amplitudes;
these fix the effective magno- and optomechanical couplings that enter
the linearized drift matrix, and the mechanical displacements shift the
drive detunings.  The closed-form amplitude expressions and the
displacement shifts couple to each other, so the full solution is a
small fixed-point iteration over the two real displacements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, SingularPointError
from .model import feedback_rates
from .params import DriveParams, SystemParams

_SQRT2 = math.sqrt(2.0)

#: Relative tolerance on amplitude changes declaring the fixed point converged.
CONVERGENCE_TOL = 1e-10
#: Hard cap on fixed-point iterations.
MAX_ITERATIONS = 1000
#: Under-relaxation factor applied to displacement updates.
DAMPING = 0.5


@dataclass(frozen=True)
class SteadyAmplitudes:
    """Mean-field amplitudes with the derived couplings and detunings.

    ``g_m_eff`` and ``g_c_eff`` are the complex effective couplings
    -i*sqrt(2)*D_mb1*<m> and +i*sqrt(2)*D_cb2*<c>; ``delta_m_eff`` and
    ``delta_c_eff`` are the fully shifted detunings (rotation shift and
    feedback shift included) at which the amplitudes were evaluated.
    """

    m_avg: complex
    c_avg: complex
    b1_avg: complex
    b2_avg: complex
    g_m_eff: complex
    g_c_eff: complex
    delta_m_eff: float
    delta_c_eff: float
    iterations: int = 0


def amplitudes_once(
    params: SystemParams,
    drives: DriveParams,
    detunings: tuple[float, float],
) -> SteadyAmplitudes:
    """Evaluate the closed-form steady-state amplitudes once.

    ``detunings`` is the pair (delta_m_eff, delta_c_eff) of effective
    magnon and optical detunings at which to evaluate; they are stored
    unchanged on the returned record.
    """
    p, d = params, drives
    delta_m_eff, delta_c_eff = detunings
    gamma_c_fb, _, _ = feedback_rates(p.gamma_c, p.reflectivity, p.theta)

    den_a = 1j * p.delta_a + p.gamma_a
    if den_a == 0:
        raise SingularPointError("microwave response (i*delta_a + gamma_a) vanishes")
    den_m = (1j * delta_m_eff + p.gamma_m) + p.D_ma**2 / den_a
    if den_m == 0:
        raise SingularPointError("magnon amplitude denominator vanishes")
    den_c = 1j * delta_c_eff + gamma_c_fb
    if den_c == 0:
        raise SingularPointError("optical amplitude denominator vanishes")

    m_avg = d.rabi / den_m
    c_avg = p.psi * d.laser_coupling / den_c

    z1 = 1j * p.gamma_b1 - p.omega_b1
    z2 = 1j * p.gamma_b2 - p.omega_b2
    den_b = p.D_b1b2**2 - z1 * z2
    if den_b == 0:
        raise SingularPointError("mechanical amplitude denominator vanishes")
    c2 = abs(c_avg) ** 2
    m2 = abs(m_avg) ** 2
    b1_avg = (c2 * d.bare_D_cb2 * p.D_b1b2 - m2 * d.bare_D_mb1 * z2) / den_b
    b2_avg = (c2 * d.bare_D_cb2 * z1 - m2 * d.bare_D_mb1 * p.D_b1b2) / den_b

    return SteadyAmplitudes(
        m_avg=m_avg,
        c_avg=c_avg,
        b1_avg=b1_avg,
        b2_avg=b2_avg,
        g_m_eff=-1j * _SQRT2 * d.bare_D_mb1 * m_avg,
        g_c_eff=1j * _SQRT2 * d.bare_D_cb2 * c_avg,
        delta_m_eff=delta_m_eff,
        delta_c_eff=delta_c_eff,
    )


def approx_amplitudes(
    params: SystemParams,
    drives: DriveParams,
    detunings: tuple[float, float],
) -> tuple[complex, complex]:
    """Leading-order amplitudes valid when detunings dominate dampings.

    Returns the pure-imaginary estimates
    ``<m> ~ -i*rabi/(delta_m_eff - D_ma^2/delta_a)`` and
    ``<c> ~ -i*psi*laser_coupling/delta_c_eff``, used as a cross-check
    of :func:`amplitudes_once` and as a fallback description.
    """
    p, d = params, drives
    delta_m_eff, delta_c_eff = detunings
    if p.delta_a == 0 or delta_c_eff == 0:
        raise SingularPointError("approximate amplitudes need nonzero detunings")
    den_m = delta_m_eff - p.D_ma**2 / p.delta_a
    if den_m == 0:
        raise SingularPointError("approximate magnon denominator vanishes")
    m_avg = -1j * d.rabi / den_m
    c_avg = -1j * p.psi * d.laser_coupling / delta_c_eff
    return m_avg, c_avg


def _base_detunings(params: SystemParams) -> tuple[float, float]:
    _, shift, _ = feedback_rates(params.gamma_c, params.reflectivity, params.theta)
    return (
        params.delta_m_tilde + params.barnett_shift,
        params.delta_c_tilde + shift,
    )


def _amplitude_change(new: SteadyAmplitudes, old: SteadyAmplitudes) -> float:
    eps = 1e-30
    pairs = (
        (new.m_avg, old.m_avg),
        (new.c_avg, old.c_avg),
        (new.b1_avg, old.b1_avg),
        (new.b2_avg, old.b2_avg),
    )
    return max(abs(a - b) / (abs(b) + eps) for a, b in pairs)


def solve_self_consistent(
    params: SystemParams, drives: DriveParams
) -> SteadyAmplitudes:
    """Solve the amplitude equations with displacement back-action.

    The mechanical displacements Re<b1>, Re<b2> shift the magnon and
    optical detunings, which feed back into the amplitudes.  A damped
    fixed-point iteration on the two displacements runs until the
    largest relative amplitude change drops below ``CONVERGENCE_TOL``;
    the returned record carries the converged detunings and the number
    of refinement evaluations in ``iterations``.
    """
    p, d = params, drives
    delta_m0, delta_c0 = _base_detunings(p)
    x1 = 0.0
    x2 = 0.0
    previous = amplitudes_once(p, d, (delta_m0, delta_c0))
    x1 += DAMPING * (previous.b1_avg.real - x1)
    x2 += DAMPING * (previous.b2_avg.real - x2)
    change = math.inf
    for iteration in range(1, MAX_ITERATIONS + 1):
        detunings = (
            delta_m0 + 2.0 * d.bare_D_mb1 * x1,
            delta_c0 - 2.0 * d.bare_D_cb2 * x2,
        )
        current = amplitudes_once(p, d, detunings)
        change = _amplitude_change(current, previous)
        if change < CONVERGENCE_TOL:
            return SteadyAmplitudes(
                m_avg=current.m_avg,
                c_avg=current.c_avg,
                b1_avg=current.b1_avg,
                b2_avg=current.b2_avg,
                g_m_eff=current.g_m_eff,
                g_c_eff=current.g_c_eff,
                delta_m_eff=current.delta_m_eff,
                delta_c_eff=current.delta_c_eff,
                iterations=iteration,
            )
        previous = current
        x1 += DAMPING * (current.b1_avg.real - x1)
        x2 += DAMPING * (current.b2_avg.real - x2)
    raise ConvergenceError(
        f"mean-field iteration did not converge in {MAX_ITERATIONS} steps "
        f"(last relative change {change:.3e})",
        residual=change,
    )

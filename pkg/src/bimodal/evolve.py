"""Time evolution: spectral propagation, exact frames, and fixed-step RK4.

Static generators are propagated through their eigendecomposition, which
is exact to round-off at any time.  The oscillating exact generators are
handled through :class:`~bimodal.hamiltonian.StaticFrame` recipes, which
reduce them to a static problem plus diagonal phases.  A classic
fourth-order Runge-Kutta stepper is kept for arbitrary time-dependent
generators and as an independent cross-check of the frame algebra.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    LargeStepWarning,
    NormDriftError,
    NotHermitianError,
    StepTooLargeError,
)
from .hamiltonian import PhysicalParams, StaticFrame, rabi_drive
from .hilbert import HilbertSpace, Operator, StateVector

__all__ = [
    "Trajectory",
    "SpectralPropagator",
    "propagate_static",
    "propagate_frame",
    "max_step",
    "propagate_rk4",
    "compare_to_effective",
]

#: Minimum sampling density of the fastest oscillation, points per cycle.
POINTS_PER_CYCLE = 50


@dataclass
class Trajectory:
    """Sampled states of one propagation run."""

    times: np.ndarray
    states: list[StateVector]
    dt: float
    n_steps: int
    norm_drift: float


class SpectralPropagator:
    """Exact evolution under a static Hermitian generator.

    Diagonalizes once; ``at`` and ``trajectory`` are then cheap matrix
    products.  Raises :class:`NotHermitianError` when handed a
    non-Hermitian matrix, since eigh would silently return garbage.
    """

    def __init__(self, hamiltonian: Operator, check: bool = True, tol: float = 1e-10):
        if check and not hamiltonian.is_hermitian(tol):
            raise NotHermitianError("generator is not Hermitian within %g" % tol)
        self.space = hamiltonian.space
        self._w, self._u = np.linalg.eigh(hamiltonian.matrix)
        self._ud = self._u.conj().T

    def at(self, psi0: StateVector, t: float) -> StateVector:
        c = self._ud @ psi0.amplitudes
        return StateVector(self.space, self._u @ (np.exp(-1j * self._w * t) * c))

    def trajectory(self, psi0: StateVector, times: Sequence[float]) -> list[StateVector]:
        times = np.asarray(times, dtype=float)
        c = self._ud @ psi0.amplitudes
        # dim x n_times block of phase-rotated coefficients, one matmul back.
        block = self._u @ (np.exp(-1j * np.outer(self._w, times)) * c[:, None])
        return [StateVector(self.space, block[:, k]) for k in range(times.size)]


def propagate_static(hamiltonian: Operator, psi0: StateVector, t: float) -> StateVector:
    """One-shot exact evolution under a static generator."""
    return SpectralPropagator(hamiltonian).at(psi0, t)


def propagate_frame(
    frame: StaticFrame,
    psi0: StateVector,
    times: Sequence[float],
    apply_phases: bool = True,
) -> list[StateVector]:
    """Exact evolution of an oscillating generator via its static frame.

    With ``apply_phases=False`` the diagonal frame factor is dropped;
    that factor is a product of single-mode phase rotations, so
    mode-entanglement measures are identical either way.
    """
    times = np.asarray(times, dtype=float)
    states = SpectralPropagator(frame.hamiltonian).trajectory(psi0, times)
    if not apply_phases:
        return states
    return [
        StateVector(s.space, frame.phases(t) * s.amplitudes)
        for t, s in zip(times, states)
    ]


def max_step(omega_fast: float, points_per_cycle: int = POINTS_PER_CYCLE) -> float:
    """Largest RK4 step resolving ``omega_fast``: one cycle over ``points_per_cycle``."""
    if omega_fast <= 0.0:
        raise ValueError("omega_fast must be positive")
    return (2.0 * math.pi / omega_fast) / points_per_cycle


def propagate_rk4(
    h_of_t: Callable[[float], Operator],
    psi0: StateVector,
    t_final: float,
    dt: float | None = None,
    omega_fast: float | None = None,
    sample_times: Sequence[float] | None = None,
    norm_tol: float = 1e-6,
    allow_large_step: bool = False,
) -> Trajectory:
    """Classic fixed-step RK4 for a time-dependent generator.

    Parameters
    ----------
    h_of_t : callable
        Maps a time to the generator at that time.
    dt : float or None
        Target step.  When omitted it is set from ``omega_fast`` via
        :func:`max_step`; when both are given, a ``dt`` exceeding the
        resolution rule raises :class:`StepTooLargeError` unless
        ``allow_large_step`` is set, which downgrades it to a
        :class:`LargeStepWarning`.
    sample_times : sequence or None
        Strictly increasing times at which to record the state,
        defaulting to ``[0, t_final]``.  Steps are shortened so each
        sample time is hit exactly.
    norm_tol : float
        Maximum tolerated deviation of the state norm from its initial
        value; exceeded means the step is too coarse for the dynamics.
    """
    if dt is None:
        if omega_fast is None:
            raise ValueError("provide dt or omega_fast")
        dt = max_step(omega_fast)
    elif omega_fast is not None and dt > max_step(omega_fast) * (1.0 + 1e-12):
        message = "dt=%g exceeds %g required for omega_fast=%g" % (
            dt,
            max_step(omega_fast),
            omega_fast,
        )
        if not allow_large_step:
            raise StepTooLargeError(message)
        warnings.warn(message, LargeStepWarning, stacklevel=2)
    if sample_times is None:
        sample_times = [0.0, t_final]
    times = np.asarray(sample_times, dtype=float)
    if times.size == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValueError("sample_times must be non-empty and strictly increasing")

    space = psi0.space
    y = psi0.amplitudes.astype(complex).copy()
    norm0 = np.linalg.norm(y)
    states: list[StateVector] = []
    drift = 0.0
    n_steps = 0

    t_now = 0.0
    h_end = h_of_t(t_now).matrix
    for t_target in times:
        span = t_target - t_now
        if span > 0.0:
            n = max(1, math.ceil(span / dt - 1e-12))
            h = span / n
            for _ in range(n):
                h_start = h_end
                h_mid = h_of_t(t_now + 0.5 * h).matrix
                h_end = h_of_t(t_now + h).matrix
                k1 = -1j * (h_start @ y)
                k2 = -1j * (h_mid @ (y + (0.5 * h) * k1))
                k3 = -1j * (h_mid @ (y + (0.5 * h) * k2))
                k4 = -1j * (h_end @ (y + h * k3))
                y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                t_now += h
                n_steps += 1
            t_now = t_target
        drift = max(drift, abs(float(np.linalg.norm(y)) - norm0))
        if drift > norm_tol:
            raise NormDriftError(
                "norm drifted by %.3e (tol %.0e) at t=%g" % (drift, norm_tol, t_now)
            )
        states.append(StateVector(space, y.copy()))
    return Trajectory(times, states, dt, n_steps, drift)


def compare_to_effective(
    space: HilbertSpace,
    params: PhysicalParams,
    psi0: StateVector,
    times: Sequence[float],
    effective: Operator,
    drive_frame: bool = True,
    model: str = "auto",
) -> np.ndarray:
    """Fidelity of an effective model against the exact dynamics.

    Evolves ``psi0`` exactly (through the static frame of the one-atom
    or collective generator, chosen by ``model`` or the register size)
    and under ``effective``; when ``drive_frame`` is set, the effective
    result is carried back through the bare drive before comparing.
    Returns ``|<exact|effective>|^2`` at each time.
    """
    from .hamiltonian import collective_frame, one_atom_frame

    times = np.asarray(times, dtype=float)
    if model == "auto":
        model = "one" if space.n_atoms == 1 else "collective"
    if model == "one":
        frame = one_atom_frame(space, params)
    elif model == "collective":
        frame = collective_frame(space, params)
    else:
        raise ValueError("model must be 'auto', 'one' or 'collective'")
    exact_states = propagate_frame(frame, psi0, times)
    eff_states = SpectralPropagator(effective).trajectory(psi0, times)
    if drive_frame:
        drive = SpectralPropagator(rabi_drive(space, params))
        eff_states = [drive.at(s, t) for t, s in zip(times, eff_states)]
    return np.array(
        [abs(ex.overlap(ef)) ** 2 for ex, ef in zip(exact_states, eff_states)]
    )

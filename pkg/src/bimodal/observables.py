"""Reduced states, entanglement measures, Wigner maps, and peak finding."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._kernels import wigner_values
from .errors import EmptyGridError, GridTooCoarseWarning, SpaceMismatchError
from .hilbert import (
    DensityMatrix,
    HilbertSpace,
    ModeSpace,
    RegisterSpace,
    StateVector,
)

__all__ = [
    "partial_trace",
    "linear_entropy",
    "mode_entanglement",
    "fidelity",
    "WignerGrid",
    "wigner",
    "PacketReport",
    "detect_packets",
    "local_minima",
    "first_minimum",
]

#: Grid cells larger than this (in either direction) undersample the
#: oscillations a cutoff-limited state can carry.
MAX_CELL = 0.125


def _reduced_space(space: HilbertSpace, keep: str):
    if keep == "a":
        return ModeSpace(space.n_max_a)
    if keep == "b":
        return ModeSpace(space.n_max_b)
    if keep == "atoms":
        return RegisterSpace(space.n_atoms)
    raise ValueError("keep must be 'a', 'b' or 'atoms', got %r" % (keep,))


def partial_trace(state, keep: str = "a") -> DensityMatrix:
    """Reduced density matrix of one subsystem.

    Parameters
    ----------
    state : StateVector or DensityMatrix
        A state on the full two-mode (plus register) space.
    keep : str
        Which factor survives: ``'a'``, ``'b'`` or ``'atoms'``.
    """
    space = state.space
    if not isinstance(space, HilbertSpace):
        raise SpaceMismatchError("partial trace needs the composite space")
    shape = (space.dim_a, space.dim_b, space.dim_atoms)
    target = _reduced_space(space, keep)
    if isinstance(state, StateVector):
        psi = state.amplitudes.reshape(shape)
        if keep == "a":
            rho = np.einsum("ijk,ljk->il", psi, psi.conj())
        elif keep == "b":
            rho = np.einsum("ijk,ilk->jl", psi, psi.conj())
        else:
            rho = np.einsum("ijk,ijl->kl", psi, psi.conj())
        return DensityMatrix(target, rho)
    if isinstance(state, DensityMatrix):
        full = state.matrix.reshape(shape + shape)
        if keep == "a":
            rho = np.einsum("ijkljk->il", full)
        elif keep == "b":
            rho = np.einsum("ijkilk->jl", full)
        else:
            rho = np.einsum("ijkijl->kl", full)
        return DensityMatrix(target, rho)
    raise TypeError("expected StateVector or DensityMatrix, got %r" % type(state))


def linear_entropy(rho: DensityMatrix) -> float:
    """Linear entropy ``1 - Tr(rho^2)`` of a density matrix.

    Zero for pure states, approaching ``1 - 1/d`` for the maximally
    mixed state.
    """
    return 1.0 - rho.purity()


def mode_entanglement(state: StateVector, keep: str = "a") -> float:
    """Linear entropy of one mode of a pure composite state."""
    return linear_entropy(partial_trace(state, keep))


def fidelity(x, y) -> float:
    """Fidelity between two states; at least one must be pure.

    Pure against pure gives ``|<x|y>|^2``; pure against mixed gives
    ``<x|rho|x>``.
    """
    if isinstance(x, DensityMatrix) and isinstance(y, DensityMatrix):
        raise TypeError("mixed-mixed fidelity is not provided; purify one side")
    if isinstance(x, DensityMatrix):
        x, y = y, x
    if isinstance(y, DensityMatrix):
        if x.space != y.space:
            raise SpaceMismatchError("states live on different spaces")
        v = x.amplitudes
        return float(np.real(np.vdot(v, y.matrix @ v)))
    return abs(x.overlap(y)) ** 2


@dataclass
class WignerGrid:
    """Wigner values ``values[i, j] = W(qs[i], ps[j])``."""

    qs: np.ndarray
    ps: np.ndarray
    values: np.ndarray

    @property
    def cell_area(self) -> float:
        dq = float(self.qs[1] - self.qs[0]) if self.qs.size > 1 else 0.0
        dp = float(self.ps[1] - self.ps[0]) if self.ps.size > 1 else 0.0
        return dq * dp

    def normalization(self) -> float:
        """Riemann estimate of the phase-space integral (1 for full support)."""
        return float(self.values.sum() * self.cell_area)


def _as_mode_density(state) -> np.ndarray:
    if isinstance(state, StateVector):
        if isinstance(state.space, HilbertSpace):
            raise SpaceMismatchError(
                "two-mode state: reduce with partial_trace before the Wigner map"
            )
        v = state.amplitudes
        return np.outer(v, v.conj())
    if isinstance(state, DensityMatrix):
        if isinstance(state.space, HilbertSpace):
            raise SpaceMismatchError(
                "two-mode density: reduce with partial_trace before the Wigner map"
            )
        return state.matrix
    m = np.asarray(state, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SpaceMismatchError("expected a square single-mode density matrix")
    return m


def wigner(
    state,
    qs: np.ndarray | None = None,
    ps: np.ndarray | None = None,
    extent: float = 8.0,
    points: int = 161,
    threads: int = 1,
    backend: str | None = None,
) -> WignerGrid:
    """Wigner function of a single-mode state on a rectangular grid.

    The convention is ``W(q, p) = (2/pi) Tr[rho D(2 gamma) Pi]`` with
    ``gamma = q + ip``: a coherent state ``|alpha>`` peaks at
    ``(Re alpha, Im alpha)`` with ``W = 2/pi``, and values are bounded
    by ``2/pi`` in magnitude.

    Parameters
    ----------
    state : StateVector, DensityMatrix or ndarray
        Single-mode state; composite states must be reduced first.
    qs, ps : ndarray or None
        Grid axes; default is ``points`` samples over ``[-extent, extent]``.
    threads : int
        Row-wise worker threads for the compiled kernel.
    """
    rho = _as_mode_density(state)
    if qs is None:
        qs = np.linspace(-extent, extent, points)
    if ps is None:
        ps = np.linspace(-extent, extent, points)
    qs = np.asarray(qs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    if qs.size == 0 or ps.size == 0:
        raise EmptyGridError("phase-space grid has zero points")
    for axis, name in ((qs, "q"), (ps, "p")):
        if axis.size > 1:
            step = float(np.max(np.diff(axis)))
            if step > MAX_CELL:
                warnings.warn(
                    "%s step %.4f exceeds %.3f; fine structure may alias"
                    % (name, step, MAX_CELL),
                    GridTooCoarseWarning,
                    stacklevel=2,
                )
    values = wigner_values(rho, qs, ps, threads=threads, backend=backend)
    return WignerGrid(qs, ps, values)


@dataclass
class PacketReport:
    """Local maxima of a Wigner map above a relative threshold."""

    count: int
    positions: np.ndarray
    values: np.ndarray


def detect_packets(grid: WignerGrid, threshold: float = 0.1) -> PacketReport:
    """Count well-formed peaks of a Wigner map.

    A grid point is a packet peak when it exceeds all eight neighbours
    and its value is at least ``threshold`` times the grid maximum.
    Returns the peaks sorted by decreasing value.
    """
    w = grid.values
    if w.size == 0:
        raise EmptyGridError("cannot detect packets on an empty grid")
    cutoff = threshold * float(w.max())
    padded = np.full((w.shape[0] + 2, w.shape[1] + 2), -np.inf)
    padded[1:-1, 1:-1] = w
    core = padded[1:-1, 1:-1]
    mask = core >= cutoff
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = padded[1 + di : padded.shape[0] - 1 + di,
                             1 + dj : padded.shape[1] - 1 + dj]
            mask &= core > shifted
    idx = np.argwhere(mask)
    vals = w[mask]
    order = np.argsort(vals)[::-1]
    idx = idx[order]
    vals = vals[order]
    positions = np.column_stack([grid.qs[idx[:, 0]], grid.ps[idx[:, 1]]])
    return PacketReport(len(vals), positions, vals)


def _smooth(values: np.ndarray, window: int) -> np.ndarray:
    if window <= 1:
        return values.astype(float)
    window = min(window, values.size)
    kernel = np.ones(window) / window
    # Reflect the edges so the average stays unbiased at the boundaries.
    pad = window // 2
    ext = np.concatenate([values[pad:0:-1], values, values[-2 : -2 - pad : -1]])
    out = np.convolve(ext, kernel, mode="same")[pad : pad + values.size]
    return out


def local_minima(
    values: np.ndarray,
    smooth_window: int = 9,
    prominence: float = 0.3,
) -> list[int]:
    """Indices of prominent dips of a sampled curve.

    The curve is smoothed by a centered moving average, interior local
    minima are located, and each must rise on both sides by at least
    ``prominence`` times the smoothed peak-to-peak range before a deeper
    value occurs.  Returned indices point into the raw series (the
    deepest raw sample within half a window of the smoothed dip).
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyGridError("empty series")
    y = _smooth(values, smooth_window)
    span = float(y.max() - y.min())
    if span == 0.0:
        return []
    need = prominence * span
    found = []
    half = max(1, smooth_window // 2)
    for i in range(1, y.size - 1):
        if not (y[i] < y[i - 1] and y[i] <= y[i + 1]):
            continue
        sides = []
        for step in (-1, +1):
            best = -np.inf
            j = i + step
            while 0 <= j < y.size:
                best = max(best, y[j])
                if y[j] < y[i]:
                    break
                j += step
            sides.append(best - y[i])
        if min(sides) >= need:
            lo = max(0, i - half)
            hi = min(values.size, i + half + 1)
            found.append(lo + int(np.argmin(values[lo:hi])))
    # Merge duplicates produced by flat smoothed bottoms.
    return sorted(set(found))


def first_minimum(
    times: np.ndarray,
    values: np.ndarray,
    smooth_window: int = 9,
    prominence: float = 0.3,
) -> tuple[float, float] | None:
    """Time and value of the earliest prominent dip, or None."""
    idx = local_minima(values, smooth_window, prominence)
    if not idx:
        return None
    i = idx[0]
    return float(times[i]), float(values[i])

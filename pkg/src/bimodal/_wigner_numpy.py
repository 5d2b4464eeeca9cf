"""Pure NumPy Wigner kernel, the fallback when the compiled one is absent.

Evaluates W(q, p) = (2/pi) sum_{n,m} rho[n,m] (-1)^n D[m,n](2(q+ip))
through the stable two-term recurrence of displacement matrix elements,
vectorized over all grid points at once.  Every factor in the recurrence
is bounded by construction, so the kernel is safe at any cutoff the
package allows.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["compute"]


def compute(coeff: np.ndarray, qs: np.ndarray, ps: np.ndarray, threads: int = 1) -> np.ndarray:
    """Accumulate the parity-weighted displacement sum on a grid.

    Parameters
    ----------
    coeff : ndarray
        Density matrix already multiplied by the parity signs,
        ``rho * (-1)**n`` down the rows.
    qs, ps : ndarray
        Grid axes; the result has shape ``(len(qs), len(ps))``.
    threads : int
        Ignored here; the compiled kernel uses it.

    Returns
    -------
    ndarray
        ``W`` values including the ``2/pi`` prefactor.
    """
    d = coeff.shape[0]
    grid_q, grid_p = np.meshgrid(qs, ps, indexing="ij")
    xi = 2.0 * (grid_q + 1j * grid_p).ravel()
    npts = xi.size

    sq = np.sqrt(np.arange(1, d))
    row = np.empty((npts, d), dtype=complex)
    row[:, 0] = np.exp(-0.5 * np.abs(xi) ** 2)
    neg = -np.conj(xi)
    for n in range(1, d):
        row[:, n] = row[:, n - 1] * neg / sq[n - 1]

    out = (row @ coeff[:, 0]).real.copy()
    prev = row
    for m in range(1, d):
        nxt = np.empty_like(prev)
        inv = 1.0 / math.sqrt(m)
        nxt[:, 0] = xi * prev[:, 0] * inv
        nxt[:, 1:] = (xi[:, None] * prev[:, 1:] + sq[None, :] * prev[:, :-1]) * inv
        out += (nxt @ coeff[:, m]).real
        prev = nxt
    return (2.0 / math.pi) * out.reshape(len(qs), len(ps))

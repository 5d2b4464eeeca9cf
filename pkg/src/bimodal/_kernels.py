"""Kernel dispatch: compiled extension when present, NumPy otherwise.

Both backends implement the identical parity-weighted displacement sum;
tests pin them against each other and against analytic values.  Threads
split the grid by rows into independent chunks, so the reduction order
inside each output element never depends on the thread count.
"""

from __future__ import annotations

import threading

import numpy as np

from . import _wigner_numpy

try:
    from . import _wigner_cy

    HAVE_COMPILED = True
except ImportError:
    _wigner_cy = None
    HAVE_COMPILED = False

BACKEND = "compiled" if HAVE_COMPILED else "numpy"

__all__ = ["BACKEND", "HAVE_COMPILED", "wigner_values"]


def _compute_compiled(coeff, qs, ps, threads):
    out = np.empty((qs.size, ps.size), dtype=float)
    if threads <= 1 or qs.size < 2 * threads:
        _wigner_cy.fill_rows(coeff, qs, ps, out, 0, qs.size)
        return out
    bounds = np.linspace(0, qs.size, threads + 1).astype(int)
    workers = [
        threading.Thread(
            target=_wigner_cy.fill_rows, args=(coeff, qs, ps, out, lo, hi)
        )
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    ]
    for w in workers:
        w.start()
    for w in workers:
        w.join()
    return out


def wigner_values(
    rho: np.ndarray,
    qs: np.ndarray,
    ps: np.ndarray,
    threads: int = 1,
    backend: str | None = None,
) -> np.ndarray:
    """Wigner function of a single-mode density matrix on a grid.

    ``backend`` forces ``"numpy"`` or ``"compiled"`` (used by tests and
    benchmarks); by default the compiled kernel is used when available.
    """
    rho = np.ascontiguousarray(rho, dtype=complex)
    qs = np.ascontiguousarray(qs, dtype=float)
    ps = np.ascontiguousarray(ps, dtype=float)
    parity = np.where(np.arange(rho.shape[0]) % 2, -1.0, 1.0)
    coeff = np.ascontiguousarray(rho * parity[:, None])
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel not available")
        return _compute_compiled(coeff, qs, ps, threads)
    if backend == "numpy":
        return _wigner_numpy.compute(coeff, qs, ps, threads)
    raise ValueError("unknown backend %r" % (backend,))

"""Truncated Hilbert space for two cavity modes and a register of qubits.

Basis ordering
--------------
The composite space is mode a (Fock levels 0..n_max_a), then mode b
(0..n_max_b), then ``n_atoms`` two-level atoms.  A basis state
``|n_a, n_b; atoms>`` sits at flat index

    ((n_a * (n_max_b + 1) + n_b) * 2**n_atoms) + atomic_index

where the atomic index encodes atom i in bit i (atom 0 is the least
significant bit) with ``|g> = 0`` and ``|e> = 1``.  Operators are built
as ``kron(kron(M_a, M_b), M_atoms)`` and the atomic chain is
``kron(atom_{N-1}, ..., atom_0)``.

The total dimension is capped at ``DIM_CAP`` so that a misconfigured
run fails fast instead of allocating absurd dense matrices.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AtomCountMismatchError,
    DimensionCapError,
    IndexOutOfRangeError,
    NegativeArgError,
    NoAtomsError,
    SpaceMismatchError,
    TruncationError,
    TruncationWarning,
)

__all__ = [
    "DIM_CAP",
    "ModeSpace",
    "RegisterSpace",
    "HilbertSpace",
    "make_space",
    "Operator",
    "StateVector",
    "DensityMatrix",
    "identity",
    "annihilator",
    "number_operator",
    "total_number",
    "atomic_sigma",
    "collective_op",
    "coherent_amplitudes",
    "poisson_tail",
    "coherent_state",
    "fock_state",
    "atomic_product",
]

DIM_CAP = 4096

# Single-atom matrices in the {|g>, |e>} basis; index 0 is |g>.
_KET_G = np.array([1.0, 0.0], dtype=complex)
_KET_E = np.array([0.0, 1.0], dtype=complex)
_KET_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
_KET_MINUS = np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0)

_SIGMA = {
    "gg": np.outer(_KET_G, _KET_G.conj()),
    "ee": np.outer(_KET_E, _KET_E.conj()),
    "eg": np.outer(_KET_E, _KET_G.conj()),
    "ge": np.outer(_KET_G, _KET_E.conj()),
    "pp": np.outer(_KET_PLUS, _KET_PLUS.conj()),
    "mm": np.outer(_KET_MINUS, _KET_MINUS.conj()),
    "pm": np.outer(_KET_PLUS, _KET_MINUS.conj()),
    "mp": np.outer(_KET_MINUS, _KET_PLUS.conj()),
}
_SIGMA["z"] = _SIGMA["ee"] - _SIGMA["gg"]
_SIGMA["x"] = _SIGMA["eg"] + _SIGMA["ge"]

_ATOM_KETS = {"g": _KET_G, "e": _KET_E, "+": _KET_PLUS, "-": _KET_MINUS}


@dataclass(frozen=True)
class ModeSpace:
    """A single bosonic mode truncated at ``n_max`` photons."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise NegativeArgError("n_max must be >= 0, got %d" % self.n_max)
        if self.n_max + 1 > DIM_CAP:
            raise DimensionCapError(
                "single-mode dimension %d exceeds cap %d" % (self.n_max + 1, DIM_CAP)
            )

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class RegisterSpace:
    """The qubit register on its own, e.g. after tracing out the modes."""

    n_atoms: int

    def __post_init__(self):
        if self.n_atoms < 0:
            raise NegativeArgError("n_atoms must be >= 0, got %d" % self.n_atoms)
        if 2**self.n_atoms > DIM_CAP:
            raise DimensionCapError("register dimension exceeds cap %d" % DIM_CAP)

    @property
    def dim(self) -> int:
        return 2**self.n_atoms


@dataclass(frozen=True)
class HilbertSpace:
    """Two truncated modes and ``n_atoms`` qubits, in fixed kron order.

    Parameters
    ----------
    n_max_a, n_max_b : int
        Photon-number cutoffs of modes a and b.
    n_atoms : int
        Number of two-level atoms appended after the modes.
    """

    n_max_a: int
    n_max_b: int
    n_atoms: int = 0

    def __post_init__(self):
        for name in ("n_max_a", "n_max_b", "n_atoms"):
            value = getattr(self, name)
            if value < 0:
                raise NegativeArgError("%s must be >= 0, got %d" % (name, value))
        if self.dim > DIM_CAP:
            raise DimensionCapError(
                "total dimension %d exceeds cap %d "
                "(n_max_a=%d, n_max_b=%d, n_atoms=%d)"
                % (self.dim, DIM_CAP, self.n_max_a, self.n_max_b, self.n_atoms)
            )

    @property
    def dim_a(self) -> int:
        return self.n_max_a + 1

    @property
    def dim_b(self) -> int:
        return self.n_max_b + 1

    @property
    def dim_atoms(self) -> int:
        return 2**self.n_atoms

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b * self.dim_atoms

    def index_of(self, n_a: int, n_b: int, excited: tuple[int, ...] = ()) -> int:
        """Flat basis index of ``|n_a, n_b>`` with the listed atoms excited."""
        if not 0 <= n_a <= self.n_max_a:
            raise IndexOutOfRangeError("n_a=%d outside 0..%d" % (n_a, self.n_max_a))
        if not 0 <= n_b <= self.n_max_b:
            raise IndexOutOfRangeError("n_b=%d outside 0..%d" % (n_b, self.n_max_b))
        atomic = 0
        for i in excited:
            if not 0 <= i < self.n_atoms:
                raise IndexOutOfRangeError(
                    "atom index %d outside 0..%d" % (i, self.n_atoms - 1)
                )
            atomic |= 1 << i
        return (n_a * self.dim_b + n_b) * self.dim_atoms + atomic

    def occupations(self, mode: str) -> np.ndarray:
        """Diagonal photon occupation of ``mode`` as a length-``dim`` int array."""
        if mode == "a":
            block = np.repeat(np.arange(self.dim_a), self.dim_b)
        elif mode == "b":
            block = np.tile(np.arange(self.dim_b), self.dim_a)
        else:
            raise ValueError("mode must be 'a' or 'b', got %r" % (mode,))
        return np.repeat(block, self.dim_atoms)


def make_space(n_max_a: int, n_max_b: int | None = None, n_atoms: int = 0) -> HilbertSpace:
    """Convenience constructor; ``n_max_b`` defaults to ``n_max_a``."""
    if n_max_b is None:
        n_max_b = n_max_a
    return HilbertSpace(n_max_a, n_max_b, n_atoms)


def _same_space(left, right):
    if left.space != right.space:
        raise SpaceMismatchError(
            "operands live on %r and %r" % (left.space, right.space)
        )


class Operator:
    """Dense operator on a :class:`HilbertSpace` or :class:`ModeSpace`.

    Thin wrapper around a complex matrix that carries its space along,
    so that mixed-space arithmetic fails loudly instead of silently
    broadcasting.
    """

    __slots__ = ("space", "matrix")

    def __init__(self, space, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise SpaceMismatchError(
                "matrix shape %r does not match dimension %d" % (matrix.shape, space.dim)
            )
        self.space = space
        self.matrix = matrix

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(1.0, float(np.abs(self.matrix).max()))
        return bool(np.abs(self.matrix - self.matrix.conj().T).max() <= tol * scale)

    def expectation(self, state: "StateVector") -> complex:
        _same_space(self, state)
        return complex(np.vdot(state.amplitudes, self.matrix @ state.amplitudes))

    def __add__(self, other: "Operator") -> "Operator":
        _same_space(self, other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        _same_space(self, other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix / complex(scalar))

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _same_space(self, other)
            return Operator(self.space, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            _same_space(self, other)
            return StateVector(self.space, self.matrix @ other.amplitudes)
        return NotImplemented

    def __repr__(self):
        return "Operator(dim=%d)" % self.space.dim


class StateVector:
    """Pure state on a :class:`HilbertSpace` or :class:`ModeSpace`."""

    __slots__ = ("space", "amplitudes")

    def __init__(self, space, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (space.dim,):
            raise SpaceMismatchError(
                "amplitude shape %r does not match dimension %d"
                % (amplitudes.shape, space.dim)
            )
        self.space = space
        self.amplitudes = amplitudes

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.space, self.amplitudes / n)

    def overlap(self, other: "StateVector") -> complex:
        """Inner product ``<self|other>``."""
        _same_space(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __add__(self, other: "StateVector") -> "StateVector":
        _same_space(self, other)
        return StateVector(self.space, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "StateVector") -> "StateVector":
        _same_space(self, other)
        return StateVector(self.space, self.amplitudes - other.amplitudes)

    def __mul__(self, scalar) -> "StateVector":
        return StateVector(self.space, self.amplitudes * complex(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return "StateVector(dim=%d, norm=%.6f)" % (self.space.dim, self.norm())


class DensityMatrix:
    """Mixed state on a :class:`ModeSpace` or :class:`HilbertSpace`."""

    __slots__ = ("space", "matrix")

    def __init__(self, space, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise SpaceMismatchError(
                "matrix shape %r does not match dimension %d" % (matrix.shape, space.dim)
            )
        self.space = space
        self.matrix = matrix

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        v = state.amplitudes
        return cls(state.space, np.outer(v, v.conj()))

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __repr__(self):
        return "DensityMatrix(dim=%d)" % self.space.dim


def identity(space) -> Operator:
    return Operator(space, np.eye(space.dim, dtype=complex))


def _mode_matrices(space: HilbertSpace, mode: str, local: np.ndarray) -> np.ndarray:
    """Embed a single-mode matrix into the full space."""
    if mode == "a":
        full = np.kron(local, np.eye(space.dim_b))
    elif mode == "b":
        full = np.kron(np.eye(space.dim_a), local)
    else:
        raise ValueError("mode must be 'a' or 'b', got %r" % (mode,))
    if space.n_atoms:
        full = np.kron(full, np.eye(space.dim_atoms))
    return full


def _lowering(dim: int) -> np.ndarray:
    m = np.zeros((dim, dim), dtype=complex)
    rng = np.arange(1, dim)
    m[rng - 1, rng] = np.sqrt(rng)
    return m


def annihilator(space, mode: str = "a") -> Operator:
    """Photon annihilation operator of one mode, embedded in ``space``."""
    if isinstance(space, ModeSpace):
        return Operator(space, _lowering(space.dim))
    local = _lowering(space.dim_a if mode == "a" else space.dim_b)
    return Operator(space, _mode_matrices(space, mode, local))


def number_operator(space, mode: str = "a") -> Operator:
    """Diagonal photon-number operator of one mode."""
    if isinstance(space, ModeSpace):
        return Operator(space, np.diag(np.arange(space.dim, dtype=complex)))
    return Operator(space, np.diag(space.occupations(mode).astype(complex)))


def total_number(space: HilbertSpace) -> Operator:
    """Total photon number across both modes (atoms untouched)."""
    diag = space.occupations("a") + space.occupations("b")
    return Operator(space, np.diag(diag.astype(complex)))


def _atomic_embed(space: HilbertSpace, local: np.ndarray, atom: int) -> np.ndarray:
    """Embed a 2x2 matrix on one atom of the chain, atom 0 least significant."""
    if space.n_atoms == 0:
        raise NoAtomsError("space has no atoms")
    if not 0 <= atom < space.n_atoms:
        raise IndexOutOfRangeError(
            "atom index %d outside 0..%d" % (atom, space.n_atoms - 1)
        )
    chain = np.kron(
        np.eye(2 ** (space.n_atoms - 1 - atom)), np.kron(local, np.eye(2**atom))
    )
    return np.kron(np.eye(space.dim_a * space.dim_b), chain)


def atomic_sigma(space: HilbertSpace, kind: str, atom: int = 0) -> Operator:
    """Single-atom operator embedded in the full space.

    Parameters
    ----------
    kind : str
        One of ``gg, ee, eg, ge, z, x`` in the energy basis, or
        ``pp, mm, pm, mp`` in the dressed basis ``|+->``.
    atom : int
        Which atom of the chain carries the operator.
    """
    if kind not in _SIGMA:
        raise ValueError("unknown atomic operator %r" % (kind,))
    return Operator(space, _atomic_embed(space, _SIGMA[kind], atom))


def collective_op(space: HilbertSpace, kind: str) -> Operator:
    """Sum of one-atom operators over the whole register.

    ``kind`` follows :func:`atomic_sigma`; for example ``eg`` gives the
    collective raising operator and ``z`` the population imbalance
    (eigenvalues run over ``-N, -N+2, ..., N``).
    """
    if space.n_atoms == 0:
        raise NoAtomsError("collective operator on a space without atoms")
    total = np.zeros((space.dim, space.dim), dtype=complex)
    for atom in range(space.n_atoms):
        total += _atomic_embed(space, _SIGMA[kind], atom)
    return Operator(space, total)


def coherent_amplitudes(n_max: int, alpha: complex) -> np.ndarray:
    """Truncated coherent-state coefficients ``e^{-|a|^2/2} a^n / sqrt(n!)``.

    The vector is *not* renormalized; its squared norm is one minus the
    Poisson tail beyond the cutoff.
    """
    if n_max < 0:
        raise NegativeArgError("n_max must be >= 0")
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def poisson_tail(n_max: int, alpha: complex) -> float:
    """Probability weight of a coherent state beyond ``n_max`` photons."""
    nu = abs(alpha) ** 2
    if nu == 0.0:
        return 0.0
    term = math.exp(-nu)
    acc = term
    for n in range(1, n_max + 1):
        term *= nu / n
        acc += term
    return max(0.0, 1.0 - acc)


def _check_tail(n_max: int, alpha: complex, label: str, warn: float, fail: float):
    tail = poisson_tail(n_max, alpha)
    if tail > fail:
        raise TruncationError(
            "mode %s: cutoff %d leaves tail %.3e > %.0e for amplitude %r"
            % (label, n_max, tail, fail, alpha)
        )
    if tail > warn:
        warnings.warn(
            "mode %s: cutoff %d leaves tail %.3e" % (label, n_max, tail),
            TruncationWarning,
            stacklevel=3,
        )


def atomic_product(n_atoms: int, spec: str = "+") -> np.ndarray:
    """Product state of the atom register.

    Parameters
    ----------
    spec : str
        Either a single character applied to every atom or one character
        per atom, drawn from ``g e + -``.  Atom 0 is the rightmost
        character, matching the bit ordering of the basis index.
    """
    if n_atoms == 0:
        return np.ones(1, dtype=complex)
    if len(spec) == 1:
        spec = spec * n_atoms
    if len(spec) != n_atoms:
        raise AtomCountMismatchError(
            "state spec %r has %d characters for %d atoms" % (spec, len(spec), n_atoms)
        )
    try:
        kets = [_ATOM_KETS[c] for c in spec]
    except KeyError as exc:
        raise ValueError("unknown atomic symbol %r in %r" % (exc.args[0], spec)) from exc
    out = kets[-1]
    # spec is written atom N-1 .. atom 0, so the kron chain is in listed order.
    for ket in reversed(kets[:-1]):
        out = np.kron(ket, out)
    return out


def coherent_state(
    space,
    alpha: complex,
    beta: complex | None = None,
    atoms: str = "+",
    tail_warn: float = 1e-8,
    tail_fail: float = 1e-4,
) -> StateVector:
    """Normalized truncated coherent (product) state.

    On a :class:`ModeSpace` only ``alpha`` is used.  On a
    :class:`HilbertSpace` the state is ``|alpha>_a |beta>_b`` times an
    atomic product state given by ``atoms``.  Raises
    :class:`TruncationError` when the cutoff swallows more than
    ``tail_fail`` of the Poisson weight, and warns above ``tail_warn``.
    """
    if isinstance(space, ModeSpace):
        _check_tail(space.n_max, alpha, "a", tail_warn, tail_fail)
        vec = coherent_amplitudes(space.n_max, alpha)
        return StateVector(space, vec / np.linalg.norm(vec))
    if beta is None:
        beta = 0.0
    _check_tail(space.n_max_a, alpha, "a", tail_warn, tail_fail)
    _check_tail(space.n_max_b, beta, "b", tail_warn, tail_fail)
    vec = np.kron(
        coherent_amplitudes(space.n_max_a, alpha),
        coherent_amplitudes(space.n_max_b, beta),
    )
    if space.n_atoms:
        vec = np.kron(vec, atomic_product(space.n_atoms, atoms))
    return StateVector(space, vec / np.linalg.norm(vec))


def fock_state(space, n_a: int, n_b: int = 0, excited: tuple[int, ...] = ()) -> StateVector:
    """Basis state ``|n_a, n_b>`` with the listed atoms excited."""
    if isinstance(space, ModeSpace):
        if not 0 <= n_a <= space.n_max:
            raise IndexOutOfRangeError("n=%d outside 0..%d" % (n_a, space.n_max))
        vec = np.zeros(space.dim, dtype=complex)
        vec[n_a] = 1.0
        return StateVector(space, vec)
    vec = np.zeros(space.dim, dtype=complex)
    vec[space.index_of(n_a, n_b, excited)] = 1.0
    return StateVector(space, vec)

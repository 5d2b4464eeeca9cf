"""Generators for a driven two-level register coupled to two cavity modes.

The hierarchy goes from the exact interaction-picture coupling through a
dispersive (far-detuned) model, a frame rotating with the classical
drive, and finally the time-averaged quadratic generators, in which the
two-mode quadratic form ``O`` produces beam-splitter-like dynamics with
a photon-number-squared phase profile.

Conventions
-----------
All couplings are angular frequencies.  ``chi = lam**2 / delta`` is the
dispersive strength and ``mu = chi**2 / (2 * omega_rabi)`` the second
order (drive-averaged) strength.  Atomic ``|+->`` states are the
eigenstates of the drive, ``sigma_x |+-> = +-|+->``.

The detuning phase conventions of the single-atom and collective exact
generators differ (the oscillating factor multiplies the raising
operator with opposite signs); each matches the rotating frame in which
its effective model is derived, and both are covered by the exact
frame-propagation helpers below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AtomCountMismatchError,
    NegativeArgError,
    NoAtomsError,
    ZeroDetuningError,
    ZeroDriveError,
)
from .hilbert import (
    HilbertSpace,
    Operator,
    annihilator,
    atomic_sigma,
    collective_op,
    total_number,
)

__all__ = [
    "PhysicalParams",
    "StaticFrame",
    "quadratic_form",
    "rabi_drive",
    "exact_one_atom",
    "one_atom_frame",
    "dispersive_one_atom",
    "beam_splitter",
    "dressed_exchange_one_atom",
    "conditional_quadratic_one_atom",
    "quadratic_bs",
    "amplified_quadratic_bs",
    "exact_collective",
    "collective_frame",
    "dispersive_collective",
    "dressed_exchange_collective",
    "conditional_quadratic_collective",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Physical rates of the driven cavity QED model, all angular.

    Parameters
    ----------
    lam : float
        Atom-mode coupling strength (identical for both modes).
    delta : float
        Atom-mode detuning; the dispersive regime needs ``|delta| >> lam``.
    omega_rabi : float
        Classical drive (Rabi) strength.
    n_atoms : int
        Register size used by the collective generators.
    epsilon : float or None
        Collective two-atom energy shift; defaults to ``2 * chi``.
    """

    lam: float
    delta: float
    omega_rabi: float
    n_atoms: int = 1
    epsilon: float | None = None

    def __post_init__(self):
        if self.n_atoms < 0:
            raise NegativeArgError("n_atoms must be >= 0, got %d" % self.n_atoms)

    @property
    def chi(self) -> float:
        """Dispersive strength ``lam**2 / delta``."""
        if self.delta == 0.0:
            raise ZeroDetuningError("dispersive strength undefined at delta = 0")
        return self.lam**2 / self.delta

    @property
    def mu(self) -> float:
        """Drive-averaged quadratic strength ``chi**2 / (2 * omega_rabi)``."""
        if self.omega_rabi == 0.0:
            raise ZeroDriveError("quadratic strength undefined at omega_rabi = 0")
        return self.chi**2 / (2.0 * self.omega_rabi)

    @property
    def epsilon_value(self) -> float:
        """Collective shift, ``2 * chi`` unless overridden."""
        return 2.0 * self.chi if self.epsilon is None else self.epsilon


@dataclass(frozen=True)
class StaticFrame:
    """Exact propagation recipe ``psi(t) = P(t) exp(-i H t) psi0``.

    ``P(t)`` is the diagonal phase ``exp(1j * sign * delta * t * n)``
    with ``n`` the total photon number of each basis state.  Because the
    phase is a local unitary on the modes, mode entanglement measures
    are unaffected by it.
    """

    hamiltonian: Operator
    photon_numbers: np.ndarray
    sign: int
    delta: float

    def phases(self, t: float) -> np.ndarray:
        return np.exp(1j * self.sign * self.delta * t * self.photon_numbers)


def _require_atoms(space: HilbertSpace, expected: int):
    if space.n_atoms != expected:
        raise AtomCountMismatchError(
            "generator needs %d atom(s), space has %d" % (expected, space.n_atoms)
        )


def _require_collective(space: HilbertSpace, params: PhysicalParams):
    if params.n_atoms == 0:
        raise NoAtomsError("collective generator with n_atoms = 0")
    if space.n_atoms != params.n_atoms:
        raise AtomCountMismatchError(
            "params declare %d atoms, space has %d" % (params.n_atoms, space.n_atoms)
        )


def quadratic_form(space: HilbertSpace, include_identity: bool = True) -> Operator:
    """Two-mode quadratic form ``a'a + b'b + a'b + ab' (+ 1)``.

    This operator generates a balanced mode exchange; with the identity
    included its square drives the averaged quadratic dynamics.  It acts
    trivially on any atoms present.
    """
    a = annihilator(space, "a")
    b = annihilator(space, "b")
    m = a.dag() @ a + b.dag() @ b + a.dag() @ b + a @ b.dag()
    if include_identity:
        m = m + Operator(space, np.eye(space.dim, dtype=complex))
    return m


def rabi_drive(space: HilbertSpace, params: PhysicalParams) -> Operator:
    """Bare drive ``omega_rabi * sum_i sigma_x,i``.

    The effective quadratic generators live in the frame co-rotating
    with this term; propagate with it to map their output back to the
    frame of the exact generators.
    """
    if space.n_atoms == 0:
        raise NoAtomsError("drive acts on atoms; space has none")
    return params.omega_rabi * collective_op(space, "x")


def exact_one_atom(space: HilbertSpace, params: PhysicalParams, t: float = 0.0) -> Operator:
    """Exact interaction-picture generator for a single driven atom.

    ``lam (a + b) e^{i delta t} sigma_eg + h.c. + omega_rabi sigma_x``.
    """
    _require_atoms(space, 1)
    ab = annihilator(space, "a") + annihilator(space, "b")
    seg = atomic_sigma(space, "eg")
    coupling = params.lam * np.exp(1j * params.delta * t) * (ab @ seg)
    return coupling + coupling.dag() + params.omega_rabi * atomic_sigma(space, "x")


def one_atom_frame(space: HilbertSpace, params: PhysicalParams) -> StaticFrame:
    """Time-independent form of :func:`exact_one_atom`.

    Moving to the frame of the total photon number ``n = a'a + b'b``
    removes the oscillating phase:
    ``psi(t) = exp(-1j delta t n) exp(-i H t) psi0`` with
    ``H = lam [(a+b) sigma_eg + h.c.] + omega_rabi sigma_x - delta n``.
    """
    _require_atoms(space, 1)
    ab = annihilator(space, "a") + annihilator(space, "b")
    coupling = params.lam * (ab @ atomic_sigma(space, "eg"))
    n_op = total_number(space)
    h = (
        coupling
        + coupling.dag()
        + params.omega_rabi * atomic_sigma(space, "x")
        - params.delta * n_op
    )
    numbers = np.real(np.diag(n_op.matrix)).copy()
    return StaticFrame(h, numbers, sign=-1, delta=params.delta)


def dispersive_one_atom(space: HilbertSpace, params: PhysicalParams) -> Operator:
    """Far-detuned single-atom model.

    ``omega_rabi sigma_x + chi Q sigma_z + 2 chi sigma_ee`` with ``Q``
    the quadratic form without identity.  Equal, up to a constant, to
    ``omega_rabi sigma_x + chi O (sigma_pm + sigma_mp)`` with the
    identity-including ``O``.
    """
    _require_atoms(space, 1)
    q = quadratic_form(space, include_identity=False)
    return (
        params.omega_rabi * atomic_sigma(space, "x")
        + params.chi * (q @ atomic_sigma(space, "z"))
        + (2.0 * params.chi) * atomic_sigma(space, "ee")
    )


def beam_splitter(space: HilbertSpace, params: PhysicalParams) -> Operator:
    """Mode-only balanced exchange ``chi * (a'a + b'b + a'b + ab')``."""
    return params.chi * quadratic_form(space, include_identity=False)


def dressed_exchange_one_atom(
    space: HilbertSpace, params: PhysicalParams, t: float = 0.0
) -> Operator:
    """Dispersive model in the drive frame.

    ``chi O (sigma_pm e^{2i omega_rabi t} + sigma_mp e^{-2i omega_rabi t})``
    which time-averages to :func:`conditional_quadratic_one_atom` at
    second order when ``omega_rabi >> chi``.
    """
    _require_atoms(space, 1)
    o = quadratic_form(space, include_identity=True)
    phase = np.exp(2j * params.omega_rabi * t)
    term = params.chi * phase * (o @ atomic_sigma(space, "pm"))
    return term + term.dag()


def conditional_quadratic_one_atom(
    space: HilbertSpace, params: PhysicalParams, include_identity: bool = True
) -> Operator:
    """Averaged generator ``mu O^2 (sigma_pp - sigma_mm)``."""
    _require_atoms(space, 1)
    o = quadratic_form(space, include_identity)
    sz_dressed = atomic_sigma(space, "pp") - atomic_sigma(space, "mm")
    return params.mu * (o @ o @ sz_dressed)


def quadratic_bs(
    space: HilbertSpace, params: PhysicalParams, include_identity: bool = True
) -> Operator:
    """Mode-only quadratic generator ``mu O^2``.

    This is the dynamics seen by the modes when the dressed atom is
    pinned in ``|+>``; its number-squared phases turn a coherent state
    into multi-component superpositions at rational fractions of the
    recurrence time.
    """
    o = quadratic_form(space, include_identity)
    return params.mu * (o @ o)


def amplified_quadratic_bs(
    space: HilbertSpace, params: PhysicalParams, include_identity: bool = True
) -> Operator:
    """Register-enhanced quadratic generator ``n_atoms * mu O^2``.

    A register of ``n_atoms`` dressed atoms prepared in ``|+...+>``
    multiplies the quadratic rate by the register size, shortening the
    superposition time proportionally.
    """
    if params.n_atoms == 0:
        raise NoAtomsError("amplified generator with n_atoms = 0")
    return float(params.n_atoms) * quadratic_bs(space, params, include_identity)


def exact_collective(space: HilbertSpace, params: PhysicalParams, t: float = 0.0) -> Operator:
    """Exact interaction-picture generator for the driven register.

    ``lam [(a+b) e^{-i delta t} J_+ + h.c.] + eps J_+ J_- + omega_rabi (J_+ + J_-)``
    with collective ladder operators ``J_+- = sum_i sigma_eg/ge,i``.
    """
    _require_collective(space, params)
    ab = annihilator(space, "a") + annihilator(space, "b")
    jp = collective_op(space, "eg")
    jm = collective_op(space, "ge")
    coupling = params.lam * np.exp(-1j * params.delta * t) * (ab @ jp)
    return (
        coupling
        + coupling.dag()
        + params.epsilon_value * (jp @ jm)
        + params.omega_rabi * (jp + jm)
    )


def collective_frame(space: HilbertSpace, params: PhysicalParams) -> StaticFrame:
    """Time-independent form of :func:`exact_collective`.

    ``psi(t) = exp(+1j delta t n) exp(-i H t) psi0`` with
    ``H = lam [(a+b) J_+ + h.c.] + eps J_+ J_- + omega_rabi (J_+ + J_-) + delta n``.
    """
    _require_collective(space, params)
    ab = annihilator(space, "a") + annihilator(space, "b")
    jp = collective_op(space, "eg")
    jm = collective_op(space, "ge")
    n_op = total_number(space)
    coupling = params.lam * (ab @ jp)
    h = (
        coupling
        + coupling.dag()
        + params.epsilon_value * (jp @ jm)
        + params.omega_rabi * (jp + jm)
        + params.delta * n_op
    )
    numbers = np.real(np.diag(n_op.matrix)).copy()
    return StaticFrame(h, numbers, sign=+1, delta=params.delta)


def dispersive_collective(
    space: HilbertSpace, params: PhysicalParams, z_coupling: float = 2.0
) -> Operator:
    """Far-detuned register model ``-z chi Q J_z + omega_rabi (J_+ + J_-)``.

    ``J_z = sum_i (sigma_ee - sigma_gg)_i`` carries no one-half, and
    ``Q`` is the quadratic form without identity.  ``z_coupling`` sets
    the coefficient of the ``Q J_z`` term in units of ``chi``; the
    default is 2, and a second-order elimination of the far-detuned
    coupling alone gives 1.  Compare both against the exact dynamics
    with the validation tools when it matters.
    """
    _require_collective(space, params)
    q = quadratic_form(space, include_identity=False)
    jz = collective_op(space, "z")
    return (-z_coupling * params.chi) * (q @ jz) + params.omega_rabi * collective_op(
        space, "x"
    )


def dressed_exchange_collective(
    space: HilbertSpace, params: PhysicalParams, t: float = 0.0
) -> Operator:
    """Register model in the drive frame.

    ``-chi Q (Jt_+ e^{2i omega_rabi t} + Jt_- e^{-2i omega_rabi t})``
    where ``Jt_+- = sum_i |+-><-+|_i`` ladder the dressed states.
    """
    _require_collective(space, params)
    q = quadratic_form(space, include_identity=False)
    phase = np.exp(2j * params.omega_rabi * t)
    term = (-params.chi) * phase * (q @ collective_op(space, "pm"))
    return term + term.dag()


def conditional_quadratic_collective(
    space: HilbertSpace, params: PhysicalParams, include_identity: bool = True
) -> Operator:
    """Averaged register generator ``mu O^2 Jt_z``.

    ``Jt_z = sum_i (|+><+| - |-><-|)_i``; on the product state
    ``|+...+>`` it acts as the number ``n_atoms``, reducing this to
    :func:`amplified_quadratic_bs` on the modes.
    """
    _require_collective(space, params)
    o = quadratic_form(space, include_identity)
    jtz = collective_op(space, "pp") - collective_op(space, "mm")
    return params.mu * (o @ o @ jtz)

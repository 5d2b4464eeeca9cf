"""Effective parameters, validity margins, and experimental feasibility.

The derivation chain is controlled by a ladder of scale separations.
Each is written here as ``small << large`` and scored by the margin
``large / small``; a margin of at least 10 counts as satisfied by
default, and reports always carry the raw numbers so a stricter or
looser bar can be applied downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ecs import ECSSchedule
from .hamiltonian import PhysicalParams

__all__ = [
    "EffectiveParams",
    "effective_params",
    "InequalityCheck",
    "RegimeReport",
    "check_regime",
    "schedule",
    "FeasibilitySetup",
    "FeasibilityRow",
    "MICROWAVE",
    "OPTICAL",
    "DEFAULT_SCHEDULES",
    "feasibility_table",
]

#: Default bar for "much smaller than".
DEFAULT_MARGIN = 10.0


@dataclass(frozen=True)
class EffectiveParams:
    """Derived rates and their characteristic times.

    ``tau_chi = pi / chi`` is the full period of the linear exchange;
    ``tau_mu = pi / mu`` the recurrence time of the quadratic phases.
    """

    chi: float
    mu: float
    tau_chi: float
    tau_mu: float


def effective_params(params: PhysicalParams) -> EffectiveParams:
    """Dispersive and drive-averaged rates from the physical inputs."""
    chi = params.chi
    mu = params.mu
    return EffectiveParams(chi=chi, mu=mu, tau_chi=math.pi / abs(chi), tau_mu=math.pi / abs(mu))


@dataclass(frozen=True)
class InequalityCheck:
    """One scale separation ``small << large`` with its margin."""

    name: str
    small: float
    large: float
    threshold: float

    @property
    def margin(self) -> float:
        if self.small == 0.0:
            return math.inf
        return self.large / self.small

    @property
    def passed(self) -> bool:
        return self.margin >= self.threshold

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "small": self.small,
            "large": self.large,
            "margin": self.margin,
            "passed": self.passed,
        }


@dataclass
class RegimeReport:
    """All separations required by one derivation stage."""

    stage: str
    n_bar_a: float
    n_bar_b: float
    threshold: float
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "n_bar_a": self.n_bar_a,
            "n_bar_b": self.n_bar_b,
            "threshold": self.threshold,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def check_regime(
    params: PhysicalParams,
    n_bar_a: float = 0.0,
    n_bar_b: float = 0.0,
    stage: str = "dispersive",
    threshold: float = DEFAULT_MARGIN,
) -> RegimeReport:
    """Margins of the separations backing one stage of the derivation.

    Stages
    ------
    ``dispersive``
        Far-detuned elimination: drive and photon-enhanced couplings
        both well below the detuning.
    ``nonlinear``
        Additionally, the dispersive shifts seen by the occupied levels
        stay well below the drive, so the drive frame averages them.
    ``n_atom``
        Register variant: the drive must stay below the detuning per
        atom, which tightens with the register size.
    """
    report = RegimeReport(stage, n_bar_a, n_bar_b, threshold)
    lam = abs(params.lam)
    delta = abs(params.delta)
    omega = abs(params.omega_rabi)
    checks = report.checks

    def add(name, small, large):
        checks.append(InequalityCheck(name, small, large, threshold))

    if stage not in ("dispersive", "nonlinear", "n_atom"):
        raise ValueError("stage must be dispersive, nonlinear or n_atom")

    add("omega << |delta|", omega, delta)
    add("sqrt(n_a) lam << |delta|", math.sqrt(n_bar_a) * lam, delta)
    add("sqrt(n_b) lam << |delta|", math.sqrt(n_bar_b) * lam, delta)

    if stage == "nonlinear":
        chi = abs(params.chi)
        add("n_a chi << omega", n_bar_a * chi, omega)
        add("n_b chi << omega", n_bar_b * chi, omega)
        add("n_a sqrt(n_b+1) chi << omega", n_bar_a * math.sqrt(n_bar_b + 1.0) * chi, omega)
        add("n_b sqrt(n_a+1) chi << omega", n_bar_b * math.sqrt(n_bar_a + 1.0) * chi, omega)
    elif stage == "n_atom":
        n = max(1, params.n_atoms)
        add("omega << |delta| / N", omega, delta / n)
    return report


def schedule(r: int, s: int, mu: float) -> ECSSchedule:
    """Fractional-revival schedule; see :class:`~bimodal.ecs.ECSSchedule`."""
    return ECSSchedule(r, s, mu)


@dataclass(frozen=True)
class FeasibilitySetup:
    """An experimental platform: rates plus its loss timescales."""

    name: str
    lam: float
    delta: float
    omega_rabi: float
    atomic_decay: float
    cavity_decoherence: float

    def params(self) -> PhysicalParams:
        return PhysicalParams(self.lam, self.delta, self.omega_rabi)


#: Cavity QED with long-lived circular-state atoms in a superconducting
#: resonator: kHz couplings against tens-of-millisecond lifetimes.
MICROWAVE = FeasibilitySetup(
    name="microwave",
    lam=2.0 * math.pi * 47e3,
    delta=2.0 * math.pi * 235e3,
    omega_rabi=2.0 * math.pi * 47e3,
    atomic_decay=30e-3,
    cavity_decoherence=0.13,
)

#: Strong-coupling optical cavity with trapped alkali atoms: MHz
#: couplings against sub-microsecond lifetimes.
OPTICAL = FeasibilitySetup(
    name="optical",
    lam=2.0 * math.pi * 16e6,
    delta=2.0 * math.pi * 80e6,
    omega_rabi=2.0 * math.pi * 16e6,
    atomic_decay=0.66e-6,
    cavity_decoherence=0.33e-6,
)

DEFAULT_SCHEDULES: tuple[tuple[int, int], ...] = ((2, 3), (2, 5), (2, 7), (2, 11))


@dataclass
class FeasibilityRow:
    """Derived timescales of one setup next to its loss timescales."""

    name: str
    lam: float
    delta: float
    omega_rabi: float
    chi: float
    mu: float
    tau_chi: float
    tau_mu: float
    gate_times: dict[tuple[int, int], float]
    atomic_decay: float
    cavity_decoherence: float

    @property
    def loss_time(self) -> float:
        return min(self.atomic_decay, self.cavity_decoherence)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "lam": self.lam,
            "delta": self.delta,
            "omega_rabi": self.omega_rabi,
            "chi": self.chi,
            "mu": self.mu,
            "tau_chi": self.tau_chi,
            "tau_mu": self.tau_mu,
            "atomic_decay": self.atomic_decay,
            "cavity_decoherence": self.cavity_decoherence,
        }
        for (r, s), t in self.gate_times.items():
            d["t_gate_%d_%d" % (r, s)] = t
        return d


def feasibility_table(
    setups: tuple[FeasibilitySetup, ...] = (MICROWAVE, OPTICAL),
    schedules: tuple[tuple[int, int], ...] = DEFAULT_SCHEDULES,
) -> list[FeasibilityRow]:
    """Gate times against loss timescales for each platform."""
    rows = []
    for setup in setups:
        eff = effective_params(setup.params())
        gates = {
            (r, s): ECSSchedule(r, s, eff.mu).t_gate for (r, s) in schedules
        }
        rows.append(
            FeasibilityRow(
                name=setup.name,
                lam=setup.lam,
                delta=setup.delta,
                omega_rabi=setup.omega_rabi,
                chi=eff.chi,
                mu=eff.mu,
                tau_chi=eff.tau_chi,
                tau_mu=eff.tau_mu,
                gate_times=gates,
                atomic_decay=setup.atomic_decay,
                cavity_decoherence=setup.cavity_decoherence,
            )
        )
    return rows

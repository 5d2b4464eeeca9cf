"""Scale-separation margins, derived rates, and platform tables."""

import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bimodal import (
    DEFAULT_SCHEDULES,
    MICROWAVE,
    OPTICAL,
    ECSSchedule,
    NotPrimeWarning,
    PhysicalParams,
    check_regime,
    effective_params,
    feasibility_table,
    schedule,
)


class TestEffectiveParams:
    def test_microwave_rates(self):
        # frozen by tests/oracles/oracle_effective_params.py
        eff = effective_params(MICROWAVE.params())
        assert eff.chi == pytest.approx(59061.9418874881, rel=1e-12)
        assert eff.chi == pytest.approx(2.0 * math.pi * 9400.0, rel=1e-12)
        assert eff.mu == pytest.approx(5906.19418874881, rel=1e-12)
        assert eff.mu == pytest.approx(2.0 * math.pi * 940.0, rel=1e-12)
        assert eff.tau_chi == pytest.approx(5.31914893617021e-5, rel=1e-12)
        assert eff.tau_mu == pytest.approx(5.31914893617021e-4, rel=1e-12)

    def test_optical_rates(self):
        # frozen by tests/oracles/oracle_effective_params.py
        eff = effective_params(OPTICAL.params())
        assert eff.chi == pytest.approx(20106192.9829747, rel=1e-12)
        assert eff.mu == pytest.approx(2010619.29829747, rel=1e-12)
        assert eff.tau_chi == pytest.approx(1.5625e-7, rel=1e-12)
        assert eff.tau_mu == pytest.approx(1.5625e-6, rel=1e-12)

    @given(
        lam=st.floats(1e2, 1e8),
        ratio=st.floats(1.5, 50.0),
        omega=st.floats(1e2, 1e8),
    )
    @settings(max_examples=40, deadline=None)
    def test_period_definitions(self, lam, ratio, omega):
        eff = effective_params(PhysicalParams(lam, ratio * lam, omega))
        assert eff.tau_chi * eff.chi == pytest.approx(math.pi, rel=1e-14)
        assert eff.tau_mu * eff.mu == pytest.approx(math.pi, rel=1e-14)


class TestRegimeChecks:
    def test_dispersive_margins(self):
        p = PhysicalParams(lam=1.0, delta=20.0, omega_rabi=1.0)
        report = check_regime(p, n_bar_a=1.0, n_bar_b=4.0)
        assert report.stage == "dispersive"
        assert len(report.checks) == 3
        margins = {c.name: c.margin for c in report.checks}
        assert margins["omega << |delta|"] == pytest.approx(20.0)
        assert margins["sqrt(n_a) lam << |delta|"] == pytest.approx(20.0)
        assert margins["sqrt(n_b) lam << |delta|"] == pytest.approx(10.0)
        assert report.passed

    def test_nonlinear_adds_drive_separations(self):
        p = PhysicalParams(lam=1.0, delta=20.0, omega_rabi=1.0)
        report = check_regime(p, n_bar_a=1.0, n_bar_b=1.0, stage="nonlinear")
        assert len(report.checks) == 7
        chi = p.chi
        margins = {c.name: c.margin for c in report.checks}
        assert margins["n_a chi << omega"] == pytest.approx(1.0 / chi)
        assert margins["n_a sqrt(n_b+1) chi << omega"] == pytest.approx(
            1.0 / (math.sqrt(2.0) * chi)
        )

    def test_register_stage_tightens_with_size(self):
        p = PhysicalParams(lam=1.0, delta=12.5, omega_rabi=1.0, n_atoms=5)
        report = check_regime(p, stage="n_atom")
        per_atom = [c for c in report.checks if c.name == "omega << |delta| / N"][0]
        assert per_atom.margin == pytest.approx(2.5)
        assert not per_atom.passed
        assert not report.passed

    def test_vacuum_margins_are_infinite(self):
        p = PhysicalParams(lam=1.0, delta=15.0, omega_rabi=1.0)
        report = check_regime(p, n_bar_a=0.0, n_bar_b=0.0)
        inf_checks = [c for c in report.checks if "sqrt" in c.name]
        assert all(math.isinf(c.margin) and c.passed for c in inf_checks)

    def test_threshold_is_adjustable(self):
        p = PhysicalParams(lam=1.0, delta=5.0, omega_rabi=1.0)
        assert not check_regime(p).passed
        assert check_regime(p, threshold=4.0).passed

    def test_stage_validation(self):
        with pytest.raises(ValueError):
            check_regime(PhysicalParams(1.0, 10.0, 1.0), stage="bogus")

    @given(
        scale=st.floats(1e-3, 1e6),
        delta_ratio=st.floats(2.0, 40.0),
        n_a=st.floats(0.0, 9.0),
        n_b=st.floats(0.0, 9.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_margins_are_scale_covariant(self, scale, delta_ratio, n_a, n_b):
        # rescaling every rate leaves all margins unchanged
        base = PhysicalParams(lam=1.0, delta=delta_ratio, omega_rabi=1.0)
        scaled = PhysicalParams(
            lam=scale, delta=delta_ratio * scale, omega_rabi=scale
        )
        for stage in ("dispersive", "nonlinear"):
            r0 = check_regime(base, n_a, n_b, stage=stage)
            r1 = check_regime(scaled, n_a, n_b, stage=stage)
            for c0, c1 in zip(r0.checks, r1.checks):
                if math.isinf(c0.margin):
                    assert math.isinf(c1.margin)
                else:
                    assert c1.margin == pytest.approx(c0.margin, rel=1e-9)

    def test_report_serialization(self):
        p = PhysicalParams(lam=1.0, delta=12.0, omega_rabi=1.0)
        d = check_regime(p, n_bar_a=1.0).to_dict()
        assert d["stage"] == "dispersive"
        assert d["passed"] is True
        assert {c["name"] for c in d["checks"]} == {
            "omega << |delta|",
            "sqrt(n_a) lam << |delta|",
            "sqrt(n_b) lam << |delta|",
        }


class TestFeasibility:
    def test_schedule_alias(self):
        sch = schedule(2, 3, mu=1.0)
        assert isinstance(sch, ECSSchedule)
        assert sch.t_gate == pytest.approx(math.pi / 3.0)

    def test_default_schedules_are_quiet(self):
        # every default denominator is prime, so building the table warns
        # about nothing
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            rows = feasibility_table()
        assert [row.name for row in rows] == ["microwave", "optical"]

    def test_gate_times_scale_with_fraction(self):
        rows = feasibility_table()
        for row in rows:
            tau_mu = row.tau_mu
            for (r, s), t_gate in row.gate_times.items():
                assert t_gate == pytest.approx(tau_mu * r / (2.0 * s), rel=1e-12)
        assert set(rows[0].gate_times) == set(DEFAULT_SCHEDULES)

    def test_microwave_gates_beat_losses(self):
        row = [r for r in feasibility_table() if r.name == "microwave"][0]
        assert row.loss_time == pytest.approx(30e-3)
        assert max(row.gate_times.values()) < row.loss_time

    def test_optical_gates_chase_losses(self):
        # the slowest optical gate overruns the cavity decoherence time;
        # the table reports it rather than hiding it
        row = [r for r in feasibility_table() if r.name == "optical"][0]
        assert row.loss_time == pytest.approx(0.33e-6)
        assert max(row.gate_times.values()) > row.loss_time
        assert min(row.gate_times.values()) < row.loss_time

    def test_row_serialization(self):
        d = feasibility_table()[0].to_dict()
        for r, s in DEFAULT_SCHEDULES:
            assert "t_gate_%d_%d" % (r, s) in d
        assert d["name"] == "microwave"

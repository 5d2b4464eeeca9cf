"""Reduced states, entropy, Wigner maps, and peak/dip detection."""

import math

import numpy as np
import pytest

from bimodal import (
    HAVE_COMPILED,
    DensityMatrix,
    EmptyGridError,
    GridTooCoarseWarning,
    ModeSpace,
    SpaceMismatchError,
    StateVector,
    coherent_amplitudes,
    coherent_state,
    detect_packets,
    fidelity,
    first_minimum,
    fock_state,
    linear_entropy,
    local_minima,
    make_space,
    mode_entanglement,
    partial_trace,
    wigner,
)

# Small cutoffs keep these runs fast; the leaked tails sit far below
# every tolerance asserted here.
pytestmark = pytest.mark.filterwarnings("ignore::bimodal.errors.TruncationWarning")

TWO_OVER_PI = 2.0 / math.pi


def bell_like():
    # (|0,0> + |1,1>)/sqrt(2) on a two-mode space
    space = make_space(1, 1, 0)
    v = np.zeros(space.dim, dtype=complex)
    v[space.index_of(0, 0)] = 1.0
    v[space.index_of(1, 1)] = 1.0
    return StateVector(space, v / math.sqrt(2.0))


def cat_state(z: float, n_max: int = 30) -> StateVector:
    c = coherent_amplitudes(n_max, z) + coherent_amplitudes(n_max, -z)
    return StateVector(ModeSpace(n_max), c / np.linalg.norm(c))


class TestPartialTrace:
    def test_bell_like_is_maximally_mixed(self):
        rho = partial_trace(bell_like(), "a")
        assert np.allclose(rho.matrix, 0.5 * np.eye(2), atol=1e-14)
        rho_b = partial_trace(bell_like(), "b")
        assert np.allclose(rho_b.matrix, 0.5 * np.eye(2), atol=1e-14)

    def test_density_input_agrees_with_state_input(self):
        psi = coherent_state(make_space(4, 4, 1), 0.4, 0.2, atoms="+")
        from_state = partial_trace(psi, "b").matrix
        from_density = partial_trace(DensityMatrix.from_state(psi), "b").matrix
        assert np.allclose(from_state, from_density, atol=1e-13)

    def test_register_reduction(self):
        space = make_space(1, 1, 1)
        v = np.zeros(space.dim, dtype=complex)
        v[space.index_of(0, 0)] = 1.0
        v[space.index_of(1, 0, (0,))] = 1.0
        rho = partial_trace(StateVector(space, v / math.sqrt(2)), "atoms")
        assert np.allclose(rho.matrix, 0.5 * np.eye(2), atol=1e-14)

    def test_trace_is_one(self):
        psi = coherent_state(make_space(6, 6, 0), 0.8, -0.5j)
        assert partial_trace(psi, "a").trace() == pytest.approx(1.0, abs=1e-12)

    def test_schmidt_spectra_match_across_modes(self):
        rng = np.random.default_rng(5)
        space = make_space(4, 4, 0)
        v = rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim)
        psi = StateVector(space, v).normalized()
        sa = np.linalg.eigvalsh(partial_trace(psi, "a").matrix)
        sb = np.linalg.eigvalsh(partial_trace(psi, "b").matrix)
        assert np.allclose(sa, sb, atol=1e-10)

    def test_requires_composite_space(self):
        psi = coherent_state(ModeSpace(8), 0.5)
        with pytest.raises(SpaceMismatchError):
            partial_trace(psi, "a")


class TestLinearEntropy:
    def test_pure_state_is_zero(self):
        psi = coherent_state(ModeSpace(12), 0.9)
        assert linear_entropy(DensityMatrix.from_state(psi)) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_balanced_mixture(self):
        rho = DensityMatrix(ModeSpace(1), 0.5 * np.eye(2))
        assert linear_entropy(rho) == pytest.approx(0.5)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(2)
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        q, _ = np.linalg.qr(rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))
        space = ModeSpace(4)
        before = linear_entropy(DensityMatrix(space, rho))
        after = linear_entropy(DensityMatrix(space, q @ rho @ q.conj().T))
        assert abs(before - after) < 1e-10

    def test_mode_entanglement_of_bell_like(self):
        assert mode_entanglement(bell_like(), "a") == pytest.approx(0.5, abs=1e-12)


class TestFidelity:
    def test_pure_pure(self):
        space = ModeSpace(25)
        a = coherent_state(space, 1.0)
        b = coherent_state(space, 0.4 + 0.3j)
        assert fidelity(a, b) == pytest.approx(
            math.exp(-abs(1.0 - (0.4 + 0.3j)) ** 2), abs=1e-8
        )

    def test_pure_mixed_symmetry(self):
        space = ModeSpace(10)
        psi = coherent_state(space, 0.5)
        rho = DensityMatrix.from_state(coherent_state(space, 0.2))
        f1 = fidelity(psi, rho)
        f2 = fidelity(rho, psi)
        assert f1 == pytest.approx(f2, abs=1e-14)
        assert f1 == pytest.approx(fidelity(psi, coherent_state(space, 0.2)), abs=1e-12)

    def test_mixed_mixed_rejected(self):
        rho = DensityMatrix(ModeSpace(1), 0.5 * np.eye(2))
        with pytest.raises(TypeError):
            fidelity(rho, rho)


class TestWigner:
    def test_vacuum_peak(self):
        grid = wigner(fock_state(ModeSpace(6), 0), extent=2.0, points=33)
        i = np.argmin(np.abs(grid.qs))
        j = np.argmin(np.abs(grid.ps))
        assert grid.values[i, j] == pytest.approx(TWO_OVER_PI, abs=1e-12)

    def test_coherent_peak_location(self):
        grid = wigner(coherent_state(ModeSpace(35), 3.0), extent=8.0, points=161)
        i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
        assert (grid.qs[i], grid.ps[j]) == (3.0, 0.0)
        assert grid.values[i, j] == pytest.approx(TWO_OVER_PI, abs=1e-6)

    def test_normalization_and_bounds(self):
        psi = cat_state(2.0)
        grid = wigner(psi, extent=8.0, points=161)
        assert grid.normalization() == pytest.approx(1.0, abs=1e-3)
        assert grid.values.max() <= TWO_OVER_PI + 1e-9
        assert grid.values.min() >= -TWO_OVER_PI - 1e-9

    def test_cat_point_values(self):
        # frozen by tests/oracles/oracle_wigner_cat.py (closed form for the
        # even superposition of amplitudes +-2)
        psi = cat_state(2.0)
        expected = {
            (0.0, 0.0): 0.63661977236758134308,
            (2.0, 0.0): 0.31841663144565520531,
            (0.0, math.pi / 8.0): -0.46734909766442615878,
            (1.0, 0.5): -0.0080262489757184916658,
        }
        for (q, p), want in expected.items():
            grid = wigner(psi, qs=np.array([q]), ps=np.array([p]))
            assert grid.values[0, 0] == pytest.approx(want, abs=1e-9)

    def test_coherent_point_values(self):
        # frozen by tests/oracles/oracle_wigner_cat.py
        psi = coherent_state(ModeSpace(30), 1.0 + 0.5j)
        cases = [
            (1.0, 0.5, 0.63661977236758134308),
            (0.0, 0.0, 0.052256933138739678772),
            (2.0, 1.0, 0.052256933138739678772),
        ]
        for q, p, want in cases:
            grid = wigner(psi, qs=np.array([q]), ps=np.array([p]))
            assert grid.values[0, 0] == pytest.approx(want, abs=1e-9)

    def test_coarse_grid_warns(self):
        with pytest.warns(GridTooCoarseWarning):
            wigner(fock_state(ModeSpace(4), 0), extent=8.0, points=41)

    def test_empty_grid_rejected(self):
        with pytest.raises(EmptyGridError):
            wigner(fock_state(ModeSpace(4), 0), qs=np.array([]), ps=np.array([0.0]))

    def test_composite_state_rejected(self):
        psi = coherent_state(make_space(3, 3, 0), 0.2, 0.1)
        with pytest.raises(SpaceMismatchError):
            wigner(psi)

    def test_thread_count_does_not_change_values(self):
        psi = cat_state(1.5, n_max=20)
        one = wigner(psi, extent=4.0, points=81, threads=1)
        three = wigner(psi, extent=4.0, points=81, threads=3)
        assert np.array_equal(one.values, three.values)

    @pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")
    def test_backends_agree(self):
        psi = cat_state(1.5, n_max=20)
        fast = wigner(psi, extent=4.0, points=81, backend="compiled")
        slow = wigner(psi, extent=4.0, points=81, backend="numpy")
        assert np.abs(fast.values - slow.values).max() < 1e-12


class TestPacketDetection:
    def test_single_coherent_packet(self):
        grid = wigner(coherent_state(ModeSpace(20), 1.5), extent=6.0, points=121)
        report = detect_packets(grid, threshold=0.1)
        assert report.count == 1
        assert report.positions[0] == pytest.approx([1.5, 0.0], abs=0.05)

    def test_cat_has_two_packets_and_fringes(self):
        grid = wigner(cat_state(2.0), extent=6.0, points=121)
        packets = detect_packets(grid, threshold=0.4)
        # threshold 0.4 keeps the two packets and the central fringe crest
        assert packets.count == 3
        xs = sorted(packets.positions[:, 0])
        assert xs[0] == pytest.approx(-2.0, abs=0.05)
        assert xs[-1] == pytest.approx(2.0, abs=0.05)

    def test_values_sorted_descending(self):
        grid = wigner(cat_state(2.0), extent=6.0, points=121)
        report = detect_packets(grid, threshold=0.05)
        assert np.all(np.diff(report.values) <= 0)

    @pytest.mark.filterwarnings("ignore::bimodal.errors.GridTooCoarseWarning")
    def test_empty_grid_rejected(self):
        grid = wigner(fock_state(ModeSpace(3), 0), extent=2.0, points=17)
        grid.values = grid.values[:0, :0]
        with pytest.raises(EmptyGridError):
            detect_packets(grid)


class TestDipDetection:
    def test_clean_dip(self):
        t = np.linspace(0.0, 10.0, 400)
        v = 1.0 - np.exp(-((t - 4.0) ** 2))
        out = first_minimum(t, v)
        assert out is not None
        t_dip, v_dip = out
        assert t_dip == pytest.approx(4.0, abs=0.1)
        assert v_dip == pytest.approx(0.0, abs=1e-3)

    def test_monotone_series_has_no_dip(self):
        t = np.linspace(0.0, 1.0, 100)
        assert first_minimum(t, t.copy()) is None
        assert local_minima(np.ones(50)) == []

    def test_shallow_wiggle_filtered_by_prominence(self):
        t = np.linspace(0.0, 2.0 * math.pi, 300)
        v = t / 10.0 + 0.001 * np.sin(40.0 * t)
        assert local_minima(v, smooth_window=9, prominence=0.3) == []

    def test_earliest_of_two_dips(self):
        t = np.linspace(0.0, 10.0, 500)
        v = 1.0 - 0.8 * np.exp(-((t - 3.0) ** 2)) - 0.9 * np.exp(-((t - 7.0) ** 2))
        t_dip, _ = first_minimum(t, v)
        assert t_dip == pytest.approx(3.0, abs=0.1)

    def test_empty_series_rejected(self):
        with pytest.raises(EmptyGridError):
            local_minima(np.array([]))

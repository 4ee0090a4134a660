import math

import pytest

from dirac_ladder import (CODATA_ALPHA, CoulombSystem, CriticalCoupling,
                          NonPhysical, QuantumState, delta_pair, energy,
                          energy_difference, exponent_w, make_state,
                          validity_exponent)
from conftest import all_states


class TestMakeState:
    def test_ground_state(self):
        s = make_state(1, 0.5, -1)
        assert (s.l, s.kappa, s.n_r) == (0, -1, 0)

    def test_nodeless_positive_eps_rejected(self):
        with pytest.raises(NonPhysical):
            make_state(1, 0.5, +1)

    def test_derived_labels(self):
        s = make_state(3, 1.5, +1)
        assert (s.l, s.kappa, s.n_r) == (2, 2, 1)

    @pytest.mark.parametrize("n,j,eps", [
        (0, 0.5, -1),       # n below 1
        (1, 1.5, -1),       # n < j + 1/2
        (2, 1.0, -1),       # j not half-integer
        (2, 0.5, 0),        # bad eps
    ])
    def test_invalid_labels(self, n, j, eps):
        with pytest.raises(NonPhysical):
            make_state(n, j, eps)

    def test_derived_consistency_grid(self):
        for s in all_states(5):
            assert s.l == (s.two_j + s.eps) // 2
            assert s.l >= 0
            assert s.kappa == s.eps * (s.two_j + 1) // 2
            assert s.kappa != 0
            assert s.n_r == s.n - (s.two_j + 1) // 2
            assert s.n_r >= 0
            # kappa negates under the parity-label flip where both exist
            if s.n_r > 0:
                flipped = QuantumState(s.n, s.two_j, -s.eps)
                assert flipped.kappa == -s.kappa


class TestCoulombSystem:
    def test_coupling(self):
        sys_ = CoulombSystem(Z=20)
        assert sys_.g == pytest.approx(20 * CODATA_ALPHA, rel=1e-15)

    def test_from_coupling(self):
        sys_ = CoulombSystem.from_coupling(0.5, mass=2.0)
        assert sys_.g == 0.5
        assert sys_.mass == 2.0

    @pytest.mark.parametrize("kwargs", [
        dict(Z=0), dict(Z=-1), dict(Z=2, alpha=0.0), dict(Z=2, mass=-1.0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(NonPhysical):
            CoulombSystem(**kwargs)


class TestEnergy:
    def test_ground_state_g_half(self, sys_half, s1s):
        # closed form: E = m*w/(j+1/2) with w = sqrt(1 - 1/4)
        assert energy(sys_half, s1s) == pytest.approx(math.sqrt(0.75), rel=1e-15)

    @pytest.mark.parametrize("g", [0.1, 0.5, 0.9])
    def test_nodeless_closed_form(self, g):
        sys_ = CoulombSystem.from_coupling(g)
        for n in range(1, 5):
            s = QuantumState(n, 2 * n - 1, -1)
            w = exponent_w(sys_, s)
            closed = sys_.mass * w / (n)  # j + 1/2 = n for these states
            assert abs(energy(sys_, s) - closed) <= 1e-14 * closed

    def test_zero_coupling_limit(self):
        sys_ = CoulombSystem.from_coupling(1e-8)
        for s in all_states(3):
            assert energy(sys_, s) == pytest.approx(1.0, abs=1e-15)

    def test_hydrogen_reference_values(self, hydrogen):
        # 50-digit evaluations of the spectrum, frozen
        refs = {
            (1, 1, -1): 0.9999733739682668824179,
            (2, 1, -1): 0.9999933434699120241984,
            (2, 3, -1): 0.9999933435585308098197,
            (3, 1, -1): 0.9999970415520297053899,
        }
        for labels, ref in refs.items():
            assert energy(hydrogen, QuantumState(*labels)) == pytest.approx(
                ref, rel=1e-15)

    def test_degeneracy_in_eps(self, hydrogen):
        minus = energy(hydrogen, QuantumState(2, 1, -1))
        plus = energy(hydrogen, QuantumState(2, 1, +1))
        assert minus == plus  # spectrum depends on (n, j) only

    def test_monotone_in_n(self, sys_half):
        for two_j, eps in ((1, -1), (1, +1), (3, -1)):
            n_start = (two_j + 1) // 2 + (1 if eps == 1 else 0)
            values = [energy(sys_half, QuantumState(n, two_j, eps))
                      for n in range(max(n_start, 1), 6)]
            assert all(a < b for a, b in zip(values, values[1:]))

    def test_bounds(self, sys_half):
        for s in all_states(4):
            E = energy(sys_half, s)
            assert 0.0 < E < sys_half.mass

    def test_critical_coupling(self):
        sys_ = CoulombSystem.from_coupling(1.0)
        with pytest.raises(CriticalCoupling):
            energy(sys_, QuantumState(1, 1, -1))


class TestEnergyDifference:
    def test_matches_direct_subtraction(self, sys_half, s1s, s2p32):
        direct = energy(sys_half, s2p32) - energy(sys_half, s1s)
        stable = energy_difference(sys_half, s2p32, s1s)
        assert stable == pytest.approx(direct, rel=1e-13)

    def test_degenerate_pair_exactly_zero(self, hydrogen):
        a = QuantumState(2, 1, -1)
        b = QuantumState(2, 1, +1)
        assert energy_difference(hydrogen, b, a) == 0.0

    def test_hydrogen_reference(self, hydrogen):
        # frozen 50-digit value of E(3,3/2,-) - E(2,1/2,-); the direct float
        # subtraction only carries ~11 good digits here
        ref = 0.000003698108375128282869526
        got = energy_difference(hydrogen, QuantumState(3, 3, -1),
                                QuantumState(2, 1, -1))
        assert got == pytest.approx(ref, rel=1e-13)

    def test_antisymmetry(self, sys_half, s1s, s2s):
        assert energy_difference(sys_half, s2s, s1s) == pytest.approx(
            -energy_difference(sys_half, s1s, s2s), rel=1e-15)


class TestDeltaPair:
    def test_mixed_pair(self):
        s1 = make_state(1, 0.5, -1)
        s2 = make_state(3, 1.5, +1)
        d = delta_pair(s1, s2)
        assert (d.minus, d.plus) == (6, 2)

    def test_identical(self):
        s = make_state(2, 1.5, -1)
        d = delta_pair(s, s)
        assert (d.minus, d.plus) == (0, 2 * s.eps * (s.two_j + 1))

    def test_opposite_eps_same_j(self):
        s1 = make_state(2, 0.5, +1)
        s2 = make_state(2, 0.5, -1)
        d = delta_pair(s1, s2)
        assert (d.minus, d.plus) == (-4, 0)

    def test_even_integers(self, sys_half):
        states = all_states(4)
        for s1 in states:
            for s2 in states:
                d = delta_pair(s1, s2)
                assert d.minus % 2 == 0 and d.plus % 2 == 0
                assert (d.minus == 0) == (s1.kappa == s2.kappa)


class TestValidityExponent:
    def test_above_boundary(self, sys_half, s1s):
        assert validity_exponent(sys_half, s1s, s1s, -2) is True

    def test_below_boundary(self, sys_half, s1s):
        assert validity_exponent(sys_half, s1s, s1s, -3) is False

    def test_exact_boundary_rejected(self, sys_half, s1s):
        w = exponent_w(sys_half, s1s)
        lam = -(2 * w + 1)
        assert validity_exponent(sys_half, s1s, s1s, lam) is False


class TestExponentW:
    def test_range(self):
        for g in (1e-6, 0.3, 0.9):
            sys_ = CoulombSystem.from_coupling(g)
            for s in all_states(4):
                w = exponent_w(sys_, s)
                assert 0.0 < w <= (s.two_j + 1) / 2

    def test_small_coupling_stays_close_to_j_half(self):
        sys_ = CoulombSystem(Z=1)
        s = QuantumState(1, 1, -1)
        assert exponent_w(sys_, s) == pytest.approx(
            math.sqrt(1 - sys_.g ** 2), rel=1e-15)

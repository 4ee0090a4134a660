import math

import pytest

from dirac_ladder import (AbortOnDrift, CoulombSystem, DiagonalCase,
                          DiagonalInputs, DivergentIntegral, OperatorKind,
                          Provenance, QuantumState, SingularDenominator,
                          VariantUnresolved, coefficients, delta_pair, descend,
                          element_analytic, energy, ladder, solve_radial,
                          step_beta, step_diagonal_kappa, step_plain)
from conftest import GRID_Z, all_states


def oracle_pair(sys_, s1, s2):
    return solve_radial(sys_, s1), solve_radial(sys_, s2)


def oracle_value(sys_, s1, s2, kind, lam):
    wf1, wf2 = oracle_pair(sys_, s1, s2)
    return element_analytic(wf1, wf2, kind, lam).value


class TestCoefficients:
    def test_lambda_zero_reductions(self, sys_half, s1s, s2p32):
        c = coefficients(sys_half, s1s, s2p32, 0)
        E1 = energy(sys_half, s1s)
        E2 = energy(sys_half, s2p32)
        assert c.c0 == pytest.approx(E2 ** 2 - E1 ** 2, rel=1e-12)
        assert c.b0 == 0.0
        d = delta_pair(s1s, s2p32)
        assert c.b2 == float(d.minus ** 2)
        assert c.e2 == pytest.approx(d.plus / 2 * d.minus ** 2, rel=1e-15)

    def test_golden_fixture_lambda_two(self, sys_half, s1s, s2p32):
        """Frozen 50-digit evaluation of the full coefficient set."""
        c = coefficients(sys_half, s1s, s2p32, 2)
        refs = dict(
            c0=0.004672184602951856438218,
            c1=-0.004970466803713053272836,
            c2=2.105717856756484583916,
            c3=0.0,
            d2=-1.682846429730546248252,
            d3=-1.427062525527223109056,
            b0=-31.91640786499873817846,
            b2=12.0,
            e0=-30.09833984538068588894,
            e1=16.40888173106966229812,
            e2=36.0,
        )
        for name, ref in refs.items():
            got = getattr(c, name)
            if ref == 0.0:
                assert got == 0.0
            else:
                assert got == pytest.approx(ref, rel=1e-13), name
        assert c.denominators[0] == pytest.approx(-8.204440865534831149062,
                                                  rel=1e-13)
        assert c.denominators[1] == pytest.approx(-4.204440865534831149062,
                                                  rel=1e-13)

    def test_diagonal_pair_rejected(self, sys_half, s1s, s2s):
        with pytest.raises(DiagonalCase):
            coefficients(sys_half, s1s, s2s, 1)

    def test_degenerate_energy_denominator_at_zero(self, hydrogen):
        # equal (n, j), opposite eps: E2 = E1 exactly, so the lam=0
        # denominator (E2-E1)*Delta^- vanishes identically
        a = QuantumState(2, 1, -1)
        b = QuantumState(2, 1, +1)
        with pytest.raises(SingularDenominator):
            coefficients(hydrogen, a, b, 0)


class TestSteps:
    def test_linearity_zero_inputs(self, sys_half, s1s, s2p32):
        c = coefficients(sys_half, s1s, s2p32, 1)
        assert step_plain(c, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0)) == 0.0
        assert step_beta(c, 0.0, 0.0, 0.0, 0.0) == 0.0

    def test_single_step_matches_oracle(self, sys_half, s1s, s2p32):
        lam = 1
        c = coefficients(sys_half, s1s, s2p32, lam)
        plain_prev = tuple(oracle_value(sys_half, s1s, s2p32, OperatorKind.PLAIN,
                                        lam - i) for i in (1, 2, 3))
        beta_prev = tuple(oracle_value(sys_half, s1s, s2p32, OperatorKind.BETA,
                                       lam - i) for i in (1, 2, 3))
        x = step_plain(c, plain_prev, beta_prev)
        ref_x = oracle_value(sys_half, s1s, s2p32, OperatorKind.PLAIN, lam)
        assert x == pytest.approx(ref_x, rel=1e-8)
        y = step_beta(c, x, plain_prev[1], beta_prev[0], beta_prev[1])
        ref_y = oracle_value(sys_half, s1s, s2p32, OperatorKind.BETA, lam)
        assert y == pytest.approx(ref_y, rel=1e-8)

    def test_degenerate_energy_c0_singular(self, hydrogen):
        a = QuantumState(2, 1, -1)
        b = QuantumState(2, 1, +1)
        c = coefficients(hydrogen, a, b, 2)  # lam=2 denominators are fine
        assert abs(c.c0) < 1e-9
        with pytest.raises(SingularDenominator):
            step_plain(c, (1.0, 1.0, 1.0), (1.0, 1.0, 1.0))


class TestLadder:
    def test_empty_range(self, sys_half, s1s, s2p32):
        table = ladder(sys_half, s1s, s2p32, 3, 2)
        assert table.entries == {} and table.seeds == {}

    def test_offdiagonal_matches_oracle(self, sys_half, s1s, s2p32):
        table = ladder(sys_half, s1s, s2p32, 0, 6)
        assert sorted(table.entries) == list(range(0, 7))
        assert sorted(table.seeds) == [-3, -2, -1]
        wf1, wf2 = oracle_pair(sys_half, s1s, s2p32)
        for lam, entry in table.entries.items():
            assert entry.provenance is Provenance.RECURRENCE
            x = element_analytic(wf1, wf2, OperatorKind.PLAIN, lam).value
            y = element_analytic(wf1, wf2, OperatorKind.BETA, lam).value
            assert entry.plain == pytest.approx(x, rel=1e-10)
            assert entry.beta == pytest.approx(y, rel=1e-10)
            assert entry.err_est < 1e-8

    def test_relabeling_invariance(self, sys_half, s1s, s2p32):
        fwd = ladder(sys_half, s1s, s2p32, 0, 4)
        rev = ladder(sys_half, s2p32, s1s, 0, 4)
        for lam in range(0, 5):
            assert fwd.entries[lam].plain == pytest.approx(
                rev.entries[lam].plain, rel=1e-12)
            assert fwd.entries[lam].beta == pytest.approx(
                rev.entries[lam].beta, rel=1e-12)

    def test_seed_gate_rejected_up_front(self, sys_half, s1s):
        # j1 = j2 = 1/2 with different kappa: w1 + w2 - 2 < 0 at g = 0.5
        other = QuantumState(2, 1, +1)
        with pytest.raises(DivergentIntegral):
            ladder(sys_half, s1s, other, 0, 3)

    def test_degenerate_pair_falls_back_to_oracle(self, sys_half):
        a = QuantumState(3, 3, -1)
        b = QuantumState(3, 3, +1)  # same (n, j): degenerate energies
        table = ladder(sys_half, a, b, 0, 4)
        wf1, wf2 = oracle_pair(sys_half, a, b)
        for lam, entry in table.entries.items():
            assert entry.provenance is Provenance.SEED
            x = element_analytic(wf1, wf2, OperatorKind.PLAIN, lam).value
            assert entry.plain == pytest.approx(x, rel=1e-12)

    def test_abort_on_drift_with_poisoned_seeds(self, sys_half, s1s, s2p32):
        table = ladder(sys_half, s1s, s2p32, 0, 6)
        seeds = {mu: (v[0] * (1 + 2e-4), v[1]) for mu, v in table.seeds.items()}
        with pytest.raises(AbortOnDrift) as info:
            ladder(sys_half, s1s, s2p32, 0, 6, seeds=seeds)
        assert info.value.drift > 1e-6

    def test_diagonal_dispatch(self, sys_half, s1s, s2s):
        table = ladder(sys_half, s1s, s2s, 0, 4)
        assert sorted(table.diagonal_steps) == list(range(0, 5))
        for step in table.diagonal_steps.values():
            assert step.variant == "corrected"
            assert step.residual_corrected <= 1e-10
            assert step.residual_printed > 1e-3
        wf1, wf2 = oracle_pair(sys_half, s1s, s2s)
        for lam, entry in table.entries.items():
            y = element_analytic(wf1, wf2, OperatorKind.BETA, lam).value
            assert entry.beta == pytest.approx(y, rel=1e-9)

    def test_fully_diagonal_ladder(self, sys_half, s1s):
        table = ladder(sys_half, s1s, s1s, 0, 3)
        wf = solve_radial(sys_half, s1s)
        for lam, entry in table.entries.items():
            y = element_analytic(wf, wf, OperatorKind.BETA, lam).value
            assert entry.beta == pytest.approx(y, rel=1e-10)


class TestDiagonalStep:
    def test_desk_check_lambda_zero(self, sys_half, s1s):
        """Fully diagonal lam=0: corrected gives <beta>, printed misses badly."""
        wf = solve_radial(sys_half, s1s)
        val = lambda kind, lam: element_analytic(wf, wf, kind, lam).value
        inputs = DiagonalInputs(
            plain_lam=val(OperatorKind.PLAIN, 0),
            plain_lm2=val(OperatorKind.PLAIN, -2),
            beta_lm1=val(OperatorKind.BETA, -1),
            beta_lm2=val(OperatorKind.BETA, -2),
            oracle_beta=val(OperatorKind.BETA, 0),
        )
        step = step_diagonal_kappa(sys_half, s1s, s1s, 0, inputs)
        assert step.variant == "corrected"
        assert step.value == pytest.approx(math.sqrt(0.75), rel=1e-12)
        assert step.residual_corrected <= 1e-12
        # printed variant solves m = <beta/r> + E<beta> instead of
        # m = g<beta/r> + E<beta>; at g=0.5 that is off by ~1/3
        assert 0.2 < step.residual_printed < 0.5

    def test_requires_equal_kappa(self, sys_half, s1s, s2p32):
        inputs = DiagonalInputs(1.0, 1.0, 1.0, 1.0, 1.0)
        with pytest.raises(DiagonalCase):
            step_diagonal_kappa(sys_half, s1s, s2p32, 0, inputs)

    def test_variant_unresolved_on_garbage(self, sys_half, s1s, s2s):
        inputs = DiagonalInputs(1.0, 2.0, 3.0, 4.0, oracle_beta=123.0)
        with pytest.raises(VariantUnresolved) as info:
            step_diagonal_kappa(sys_half, s1s, s2s, 1, inputs)
        assert info.value.residual_printed > 0
        assert info.value.residual_corrected > 0


class TestLadderGrid:
    def test_many_pairs_many_couplings(self):
        """Ladder vs oracle across Z and pair shapes (light version)."""
        pairs = [((1, 1, -1), (2, 3, -1)), ((2, 1, -1), (3, 3, -1)),
                 ((2, 3, -1), (4, 5, 1)), ((3, 3, 1), (4, 7, -1))]
        for Z in GRID_Z:
            sys_ = CoulombSystem(Z=Z)
            for lbl1, lbl2 in pairs:
                s1 = QuantumState(*lbl1)
                s2 = QuantumState(*lbl2)
                table = ladder(sys_, s1, s2, 0, 6)
                wf1, wf2 = oracle_pair(sys_, s1, s2)
                for lam, entry in table.entries.items():
                    x = element_analytic(wf1, wf2, OperatorKind.PLAIN, lam).value
                    y = element_analytic(wf1, wf2, OperatorKind.BETA, lam).value
                    assert entry.plain == pytest.approx(x, rel=1e-8)
                    assert entry.beta == pytest.approx(y, rel=1e-8)


class TestDescend:
    def test_downward_extension_matches_oracle(self, sys_half, s2p32):
        s3d = QuantumState(3, 5, -1)
        with pytest.warns(UserWarning, match="cancellation"):
            base = ladder(sys_half, s2p32, s3d, 0, 4)
            extended = descend(sys_half, s2p32, s3d, base, -4)
        wf1, wf2 = oracle_pair(sys_half, s2p32, s3d)
        entry = extended.entries[-4]
        x = element_analytic(wf1, wf2, OperatorKind.PLAIN, -4).value
        y = element_analytic(wf1, wf2, OperatorKind.BETA, -4).value
        assert entry.plain == pytest.approx(x, rel=1e-6)
        assert entry.beta == pytest.approx(y, rel=1e-6)

    def test_gate_stops_descent(self, sys_half, s1s, s2p32):
        base = ladder(sys_half, s1s, s2p32, 0, 3)
        with pytest.warns(UserWarning):
            with pytest.raises(DivergentIntegral):
                descend(sys_half, s1s, s2p32, base, -5)

import math

import numpy as np
import pytest

from semiop import harness as h
from semiop import structured as st
from semiop.errors import BadRank, HypothesisViolation, UnknownCheck
from semiop.linalg import numerical_radius
from semiop.semi import SemiContext, a_seminorm, admits_a_adjoint, w_a

from .conftest import random_ctx


class TestGenerators:
    def test_psd_rank(self):
        for d in range(1, 5):
            for r in range(d + 1):
                A = h.random_psd(d, r, seed=d * 10 + r)
                lam = np.linalg.eigvalsh(A)
                assert np.sum(lam > 1e-9) == r
                assert np.all(lam > -1e-12) and np.all(lam < 2 + 1e-9)
                assert np.all(lam[lam > 1e-9] >= 0.1 - 1e-9)
        np.testing.assert_array_equal(h.random_psd(3, 0, 1), 0)

    def test_psd_deterministic(self):
        np.testing.assert_array_equal(h.random_psd(3, 2, 5), h.random_psd(3, 2, 5))

    def test_bad_rank(self):
        with pytest.raises(BadRank):
            h.random_psd(2, 3, 0)
        with pytest.raises(BadRank):
            h.random_psd(2, -1, 0)

    def test_admissible(self):
        ctx = random_ctx(3, 1, 4)
        assert all(admits_a_adjoint(ctx, h.random_admissible(ctx, s)) for s in range(100))
        full = random_ctx(2, 2, 4)
        Z = np.random.default_rng(3)
        T = h.random_admissible(full, 3)
        np.testing.assert_array_equal(T, Z.standard_normal((2, 2)) + 1j * Z.standard_normal((2, 2)))

    def test_nilpotent(self):
        for r in (1, 2, 3):
            ctx = random_ctx(3, r, r)
            N = h.random_nilpotent(ctx, 0)
            np.testing.assert_allclose(N @ N, 0, atol=1e-10)
            assert admits_a_adjoint(ctx, N)


class TestCatalog:
    def test_ids_unique_and_named(self):
        ids = h.catalog_ids()
        assert len(ids) == len(set(ids))
        for required in ("lemma1.1-iv", "thm2.1-even", "thm2.1-odd-odd", "thm2.1-odd-even",
                         "thm2.5-even", "thm2.5-odd-gap", "cor3.2-even", "cor3.2-odd", "prop4.3",
                         "lemma4.8", "thm-general-nn", "rem3.4"):
            assert required in ids

    def test_unknown(self):
        with pytest.raises(UnknownCheck):
            h.run_check("no-such-check")

    def test_hypothesis_violation(self):
        with pytest.raises(HypothesisViolation):
            h.run_check("thm2.1-even", trials=1, blocks=3)
        with pytest.raises(HypothesisViolation):
            h.run_check("thm2.5-even", trials=1, blocks=2)

    @pytest.mark.parametrize("check_id", h.catalog_ids())
    def test_every_check_passes_briefly(self, check_id):
        rep = h.run_check(check_id, trials=6, seed=11, workers=1)
        assert rep.passed, rep.failures

    def test_overrides(self):
        rep = h.run_check("lemma1.4", trials=4, seed=0, dim=2, blocks=3, rank="deficient")
        assert rep.passed and rep.trials == 4

    def test_report_json_shape(self):
        d = h.run_check("lemma1.1-iv", trials=3, seed=7).to_dict()
        assert set(d) == {"id", "kind", "seed", "trials", "max_violation", "failures", "pass"}


class TestPairing:
    @pytest.mark.parametrize("n", range(1, 12))
    def test_pairs_cover_indices(self, n):
        pairs, centre = h.thm21_pairs(n)
        seen = sorted([a for a, _ in pairs] + [b for _, b in pairs] + ([centre] if centre else []))
        assert seen == list(range(1, n + 1))
        assert all(a + b == n + 1 for a, b in pairs)


class TestGap:
    def test_scalar_instances(self):
        lo = numerical_radius([[2, 3, 2], [3, 2, 3], [2, 3, 2]]).value
        hi = numerical_radius([[3, 2, 3], [2, 3, 2], [3, 2, 3]]).value
        assert lo == pytest.approx(3 + math.sqrt(19), abs=1e-9) and lo > 7
        assert hi == pytest.approx((9 + math.sqrt(41)) / 2, abs=1e-9) and hi < 8
        assert h.run_check("thm2.5-odd-gap").passed

    def test_even_scalar_instance(self):
        # R = T = 2, S = 3, n = 4: every side equals 10
        M = np.array(h._rst_pattern(4, 2.0, 3.0, 2.0))
        assert numerical_radius(M).value == pytest.approx(10.0, abs=1e-9)


class TestKnownFailures:
    """Instances outside the range where the stated relations hold."""

    def test_pattern_formula_fails_at_n2(self):
        # at n = 2 the middle block S never appears, yet the formula uses it
        rng = np.random.default_rng(0)
        R, S, T = (rng.standard_normal((2, 2)) for _ in range(3))
        ctx = SemiContext.identity(2)
        lhs = st.BlockMatrix(np.array(h._rst_pattern(2, R, S, T), dtype=complex), ctx).w()
        rhs = max(w_a(ctx, R + T), w_a(ctx, R + T - 2 * S), w_a(ctx, R - T))
        assert abs(lhs - rhs) > 1e-3

    def test_fourier_bound_counterexample(self):
        # D_1 = E_12, D_3 = E_21, others 0: w(lcirc) = 1 but w(D_0) + max w(D_j) = 1/2
        n = 4
        E = np.array([[0, 1], [0, 0]], dtype=complex)
        D = np.zeros((n, 2, 2), dtype=complex)
        D[1], D[3] = E, E.conj().T
        w = np.exp(2j * np.pi / n)
        # invert D_j = sum_i w^{j(1-i)} T_i
        F = np.array([[w ** (j * (1 - i)) for i in range(1, n + 1)] for j in range(n)])
        Ts = np.einsum("ij,jkl->ikl", np.linalg.inv(F), D)
        np.testing.assert_allclose(st.fourier_sums(Ts), D, atol=1e-12)
        ctx = SemiContext.identity(2)
        lhs = st.lcirc(list(Ts), ctx).w()
        rhs = w_a(ctx, D[0]) + max(w_a(ctx, D[j]) for j in range(1, n))
        assert lhs == pytest.approx(1.0, abs=1e-9)
        assert rhs == pytest.approx(0.5, abs=1e-9)

    def test_prop42_weaker_reading_also_checked(self):
        rep = h.run_check("prop4.2", trials=4, seed=1)
        assert rep.passed


class TestDeterminism:
    def test_serial_parallel_identical(self):
        ids = ["lemma1.1-iv", "thm3.1", "cor3.4-odd", "thm2.5-odd-gap"]
        a = [r.to_dict() for r in h.run_catalog(ids, trials=5, seed=3, workers=0)]
        b = [r.to_dict() for r in h.run_catalog(ids, trials=5, seed=3, workers=4)]
        c = [r.to_dict() for r in h.run_catalog(ids[::-1], trials=5, seed=3, workers=2)]
        assert a == b == c
        order = h.catalog_ids()
        assert [r["id"] for r in a] == sorted(ids, key=order.index)

    def test_trial_level_parallel(self):
        a = h.run_check("lemma1.7", trials=6, seed=9, workers=1).to_dict()
        b = h.run_check("lemma1.7", trials=6, seed=9, workers=3).to_dict()
        assert a == b

    def test_env_threads(self, monkeypatch):
        monkeypatch.setenv("SEMIOP_THREADS", "0")
        assert h._workers() == 0
        monkeypatch.setenv("SEMIOP_THREADS", "junk")
        assert h._workers() == 0


def test_seminorm_helpers_agree():
    ctx = random_ctx(2, 1, 3)
    t = h.Trial(ctx, 2, np.random.default_rng(0))
    T = t.op()
    assert t.norm(T) == a_seminorm(ctx, T) and t.w(T) == w_a(ctx, T)

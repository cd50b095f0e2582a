import logging
import math

import numpy as np
import pytest

from semiop.errors import DimensionMismatch, NotAdmissible
from semiop.harness import random_nilpotent
from semiop.semi import (
    SemiContext,
    a_adjoint,
    a_inner,
    a_norm,
    a_numerical_radius,
    a_numerical_radius_zamani,
    a_seminorm,
    a_spectral_radius,
    admits_a_adjoint,
    im_a,
    is_a_positive,
    is_a_selfadjoint,
    is_a_unitary,
    re_a,
    reduce,
    sampling_lower_bound,
    w_a,
)

from .conftest import A42, T2142, cgauss, random_ctx


@pytest.fixture
def ex():
    return SemiContext.from_weight(A42)


class TestContext:
    def test_invariants(self, ctx):
        P = ctx.proj_R
        np.testing.assert_allclose(P @ P, P, atol=1e-10)
        np.testing.assert_allclose(P, P.conj().T, atol=1e-12)
        np.testing.assert_allclose(ctx.sqrt_A @ ctx.sqrt_A, ctx.A, atol=1e-10)
        np.testing.assert_allclose(ctx.sqrt_A @ ctx.pinv_sqrt_A, P, atol=1e-10)
        np.testing.assert_allclose(ctx.A @ ctx.pinv_A, P, atol=1e-10)

    def test_immutable(self, ex):
        with pytest.raises(ValueError):
            ex.A[0, 0] = 1.0

    def test_inflate(self, ctx):
        big = ctx.inflate(3)
        assert big.d == 3 * ctx.d and big.rank == 3 * ctx.rank
        np.testing.assert_allclose(big.pinv_A, np.linalg.pinv(big.A, hermitian=True), atol=1e-9)
        assert ctx.inflate(3) is big and ctx.inflate(1) is ctx

    def test_rank(self, ex):
        assert ex.rank == 1 and not ex.full_rank


class TestInner:
    def test_identity(self):
        assert a_inner(SemiContext.identity(2), [1, 0], [1, 0]) == 1

    def test_example(self, ex):
        assert a_inner(ex, [1, 0], [0, 1]) == pytest.approx(2)

    def test_null_vector(self, ex):
        x = [1, -2]  # A x = 0
        assert a_inner(ex, x, x) == pytest.approx(0) and a_norm(ex, x) == pytest.approx(0)

    def test_conjugate_linear(self, ctx, rng):
        x, y = cgauss(rng, ctx.d), cgauss(rng, ctx.d)
        assert a_inner(ctx, x, 1j * y) == pytest.approx(-1j * a_inner(ctx, x, y))
        assert a_inner(ctx, x, x).real >= -1e-12

    def test_mismatch(self, ex):
        with pytest.raises(DimensionMismatch):
            a_inner(ex, [1, 0, 0], [1, 0])


class TestAdjoint:
    def test_example(self, ex):
        np.testing.assert_allclose(a_adjoint(ex, T2142), [[3.2, 1.6], [1.6, 0.8]], atol=1e-12)

    def test_identity_weight(self, rng):
        T = cgauss(rng, 3, 3)
        np.testing.assert_allclose(a_adjoint(SemiContext.identity(3), T), T.conj().T, atol=1e-14)

    def test_identity_operator(self):
        ctx = random_ctx(3, 3, 1)
        np.testing.assert_allclose(a_adjoint(ctx, np.eye(3)), np.eye(3), atol=1e-12)

    def test_solves_defining_equation(self, ctx, admissible):
        T = admissible(1)
        np.testing.assert_allclose(ctx.A @ a_adjoint(ctx, T), T.conj().T @ ctx.A, atol=1e-10)

    def test_admissibility(self, ex):
        assert admits_a_adjoint(SemiContext.identity(2), np.ones((2, 2)))
        ctx = SemiContext.from_weight(np.diag([1.0, 0.0]))
        # T* A = 0 here, so this one is admissible
        assert admits_a_adjoint(ctx, [[0.0, 0.0], [1.0, 0.0]])
        T = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert not admits_a_adjoint(ctx, T)
        # brute force: R(T* A) is spanned by e2, which is not in R(A) = span(e1)
        cols = T.conj().T @ ctx.A
        assert np.linalg.matrix_rank(np.column_stack([ctx.A, cols])) > np.linalg.matrix_rank(ctx.A)

    def test_constructed_admissible(self, ctx, admissible):
        assert all(admits_a_adjoint(ctx, admissible(s)) for s in range(100))
        assert admits_a_adjoint(ctx, np.zeros((ctx.d, ctx.d)))

    def test_warning_and_strict(self, caplog):
        ctx = SemiContext.from_weight(np.diag([1.0, 0.0]))
        T = np.array([[0.0, 1.0], [0.0, 0.0]])
        with caplog.at_level(logging.WARNING):
            a_adjoint(ctx, T)
        assert "not contained" in caplog.text
        with pytest.raises(NotAdmissible):
            a_adjoint(ctx, T, strict=True)

    def test_calculus(self, ctx, admissible):
        T, S = admissible(1), admissible(2)
        s = lambda X: a_adjoint(ctx, X)  # noqa: E731
        np.testing.assert_allclose(s(s(s(T))), s(T), atol=1e-10)
        np.testing.assert_allclose(s(T @ S), s(S) @ s(T), atol=1e-10)
        np.testing.assert_allclose(s(T + S), s(T) + s(S), atol=1e-10)


class TestReduceSeminorm:
    def test_reduce_examples(self, rng, ex):
        T = cgauss(rng, 2, 2)
        np.testing.assert_allclose(reduce(SemiContext.identity(2), T), T, atol=1e-14)
        np.testing.assert_allclose(reduce(ex, np.eye(2)), ex.proj_R, atol=1e-12)
        D = SemiContext.from_weight(np.diag([4.0, 1.0]))
        np.testing.assert_allclose(reduce(D, [[0, 1], [0, 0]]), [[0, 2], [0, 0]], atol=1e-12)
        assert w_a(D, [[0, 1], [0, 0]]) == pytest.approx(1.0)
        assert sampling_lower_bound(D, [[0, 1], [0, 0]]) == pytest.approx(1.0, rel=0.05)

    def test_seminorm(self, rng, ex):
        T = cgauss(rng, 3, 3)
        assert a_seminorm(SemiContext.identity(3), T) == pytest.approx(np.linalg.norm(T, 2))
        N = np.outer([1, -2], [1, 1])  # range in N(A)
        assert a_seminorm(ex, N) == pytest.approx(0, abs=1e-12)

    def test_seminorm_brute_force(self, ctx, admissible, rng):
        # sup ||Tx||_A / ||x||_A over random x: never above the computed value
        T = admissible(5)
        X = cgauss(rng, 4000, ctx.d)
        num = np.einsum("ij,ij->i", (X @ T.T).conj(), (X @ T.T) @ ctx.A.T).real
        den = np.einsum("ij,ij->i", X.conj(), X @ ctx.A.T).real
        ok = den > 1e-12
        assert np.sqrt(np.max(num[ok] / den[ok])) <= a_seminorm(ctx, T) + 1e-9

    def test_sharp_preserves_seminorm(self, ctx, admissible):
        T = admissible(3)
        Ts = a_adjoint(ctx, T)
        assert a_seminorm(ctx, Ts) == pytest.approx(a_seminorm(ctx, T), rel=1e-7)
        assert a_seminorm(ctx, Ts @ T) == pytest.approx(a_seminorm(ctx, T) ** 2, rel=1e-7)


class TestRadius:
    def test_nilpotent(self):
        assert w_a(SemiContext.identity(2), [[0, 1], [0, 0]]) == pytest.approx(0.5)

    def test_cross_instance(self):
        M = [[3, 2, 3], [2, 3, 2], [3, 2, 3]]
        assert w_a(SemiContext.identity(3), M) == pytest.approx((9 + math.sqrt(41)) / 2, abs=1e-10)

    def test_selfadjoint(self, ctx, admissible):
        Z = admissible(4)
        T = (Z + a_adjoint(ctx, Z)) / 2
        assert is_a_selfadjoint(ctx, T)
        assert w_a(ctx, T) == pytest.approx(a_seminorm(ctx, T), rel=1e-9, abs=1e-12)

    def test_witness(self, ctx, admissible):
        T = admissible(6)
        res = a_numerical_radius(ctx, T)
        x = res.witness
        assert res.method == "reduction"
        if ctx.rank:
            assert a_norm(ctx, x) == pytest.approx(1.0, abs=1e-9)
            assert abs(a_inner(ctx, T @ x, x)) >= res.value - res.achieved_tol - 1e-9
            np.testing.assert_allclose(ctx.proj_R @ x, x, atol=1e-9)

    def test_real_part_route(self, ctx, admissible, ex):
        for s in range(5):
            T = admissible(s)
            assert a_numerical_radius_zamani(ctx, T) == pytest.approx(w_a(ctx, T), abs=1e-8)
        assert a_numerical_radius_zamani(ex, T2142) == pytest.approx(w_a(ex, T2142), abs=1e-9)
        H = np.array([[1.0, 2j], [-2j, 3.0]])
        assert a_numerical_radius_zamani(SemiContext.identity(2), H) == pytest.approx(np.linalg.norm(H, 2))
        assert a_numerical_radius_zamani(ex, np.zeros((2, 2))) == 0

    def test_real_part_route_rejects(self):
        ctx = SemiContext.from_weight(np.diag([1.0, 0.0]))
        with pytest.raises(NotAdmissible):
            a_numerical_radius_zamani(ctx, [[0, 1], [0, 0]])

    def test_sampling_oracle(self, ctx, admissible):
        T = admissible(7)
        w = w_a(ctx, T)
        lo = sampling_lower_bound(ctx, T, 10_000, seed=1)
        assert lo <= w + 1e-8
        assert lo >= 0.95 * w

    def test_sharp_invariance_and_sandwich(self, ctx, admissible):
        for s in range(5):
            T = admissible(s)
            w = w_a(ctx, T)
            assert w == pytest.approx(w_a(ctx, a_adjoint(ctx, T)), abs=1e-7)
            nrm = a_seminorm(ctx, T)
            assert nrm / 2 - 1e-8 <= w <= nrm + 1e-8

    def test_nilpotent_half_norm(self, ctx):
        N = random_nilpotent(ctx, 3)
        np.testing.assert_allclose(N @ N, 0, atol=1e-10)
        assert w_a(ctx, N) == pytest.approx(a_seminorm(ctx, N) / 2, abs=1e-9)

    def test_zero_weight(self):
        ctx = SemiContext.from_weight(np.zeros((2, 2)))
        T = np.ones((2, 2))
        assert ctx.rank == 0
        assert w_a(ctx, T) == 0 and a_seminorm(ctx, T) == 0 and a_spectral_radius(ctx, T) == 0


class TestSpectral:
    def test_examples(self):
        I2 = SemiContext.identity(2)
        assert a_spectral_radius(I2, np.diag([2.0, 1.0])) == pytest.approx(2)
        assert a_spectral_radius(I2, [[0, 1], [0, 0]]) == 0

    def test_powers(self, ctx, admissible):
        S = admissible(8)
        r = a_spectral_radius(ctx, S)
        for k in range(2, 5):
            assert a_spectral_radius(ctx, np.linalg.matrix_power(S, k)) == pytest.approx(r**k, rel=1e-7, abs=1e-12)


class TestPredicates:
    def test_example_selfadjoint(self, ex):
        assert is_a_selfadjoint(ex, T2142)
        AT = A42 @ re_a(ex, T2142)
        np.testing.assert_allclose(AT, AT.conj().T, atol=1e-12)

    def test_parts(self, ctx, admissible, rng):
        T = admissible(9)
        R, I = re_a(ctx, T), im_a(ctx, T)
        assert is_a_selfadjoint(ctx, R) and is_a_selfadjoint(ctx, I)
        P = ctx.proj_R
        np.testing.assert_allclose(P @ (R + 1j * I) @ P, P @ T @ P, atol=1e-9)
        H = cgauss(rng, 3, 3)
        H = (H + H.conj().T) / 2
        I3 = SemiContext.identity(3)
        np.testing.assert_allclose(re_a(I3, H), H, atol=1e-14)
        np.testing.assert_allclose(im_a(I3, H), 0, atol=1e-14)

    def test_positive(self, ctx, admissible):
        T = admissible(10)
        Ts = a_adjoint(ctx, T)
        assert is_a_positive(ctx, Ts @ T) and is_a_positive(ctx, T @ Ts)
        assert not is_a_positive(SemiContext.identity(2), -np.eye(2))

    def test_unitary(self, rng):
        U, _ = np.linalg.qr(cgauss(rng, 3, 3))
        assert is_a_unitary(SemiContext.identity(3), U)
        assert not is_a_unitary(SemiContext.identity(3), 2 * U)

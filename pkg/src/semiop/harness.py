"""Seeded randomized verification of weighted numerical radius relations.

Every entry of :data:`CATALOG` pairs a block-matrix construction with a
closed-form right-hand side built from block-level ``w_A`` and ``||.||_A``
values.  :func:`run_check` evaluates it on reproducible random instances.
"""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import structured as st
from .errors import BadRank, HypothesisViolation, UnknownCheck
from .linalg import numerical_radius
from .semi import (
    SemiContext,
    a_adjoint,
    a_numerical_radius_zamani,
    a_seminorm,
    a_spectral_radius,
    sampling_lower_bound,
    w_a,
)

log = logging.getLogger(__name__)

EQUALITY = "equality"
UPPER_BOUND = "upper-bound"
STRUCTURAL = "structural"

TOL_EQ = 1e-6
TOL_INEQ = 1e-8
TOL_STRUCT = 1e-10

Comparison = tuple[float, float]


# ---------------------------------------------------------------- generators

def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _gaussian(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_psd(d: int, rank: int, seed) -> np.ndarray:
    """Hermitian PSD ``d x d`` matrix with ``rank`` eigenvalues in ``[0.1, 2]``, the rest zero.

    ``seed`` may be an integer or a ``numpy.random.Generator``.
    """
    if not 0 <= rank <= d:
        raise BadRank(f"rank must lie in [0, {d}], got {rank}")
    rng = _rng(seed)
    Q, _ = np.linalg.qr(_gaussian(rng, d, d))
    lam = np.zeros(d)
    lam[:rank] = rng.uniform(0.1, 2.0, rank)
    M = (Q * lam) @ Q.conj().T
    return (M + M.conj().T) / 2


def random_admissible(ctx: SemiContext, seed) -> np.ndarray:
    """A random operator with an A-adjoint: ``A^+ Z A``, or ``Z`` itself when ``A`` is invertible."""
    Z = _gaussian(_rng(seed), ctx.d, ctx.d)
    if ctx.full_rank:
        return Z
    return ctx.pinv_A @ Z @ ctx.A


def random_nilpotent(ctx: SemiContext, seed) -> np.ndarray:
    """An admissible ``N`` with ``N^2 = 0``, of the form ``P u (A y)^*`` with ``(A y)^* u = 0``."""
    rng = _rng(seed)
    u = _gaussian(rng, ctx.d)
    if ctx.rank < 2:
        # P u is orthogonal to the one-dimensional range, so only N = 0 has this form
        return np.zeros((ctx.d, ctx.d), dtype=np.complex128)
    Ay = ctx.A @ _gaussian(rng, ctx.d)
    nrm = np.vdot(Ay, Ay).real
    if nrm > 0:
        u = u - (np.vdot(Ay, u) / nrm) * Ay
    return ctx.proj_R @ np.outer(u, Ay.conj())


# ------------------------------------------------------------------ trials

@dataclass
class Trial:
    """One random instance: a weight, a block count and a private generator."""

    ctx: SemiContext
    n: int
    rng: np.random.Generator

    @property
    def d(self) -> int:
        return self.ctx.d

    @property
    def zero(self) -> np.ndarray:
        return np.zeros((self.d, self.d), dtype=np.complex128)

    def op(self) -> np.ndarray:
        return random_admissible(self.ctx, self.rng)

    def ops(self, k: int) -> list[np.ndarray]:
        return [self.op() for _ in range(k)]

    def w(self, T) -> float:
        return w_a(self.ctx, T)

    def norm(self, T) -> float:
        return a_seminorm(self.ctx, T)

    def grid(self, rows) -> st.BlockMatrix:
        return st.BlockMatrix(np.array(rows, dtype=np.complex128), self.ctx)

    def bw(self, rows) -> float:
        """Weighted numerical radius of a block grid under ``diag(A, ..., A)``."""
        return self.grid(rows).w()

    def pair_w(self, X, Y) -> float:
        """``w([[O, X], [Y, O]])``."""
        O = self.zero
        return self.bw([[O, X], [Y, O]])


@dataclass(frozen=True)
class CheckSpec:
    """A catalog entry.

    ``run`` maps a :class:`Trial` to a list of ``(lhs, rhs)`` comparisons.
    ``n_ok`` encodes the block-count hypotheses.
    ``verdict`` replaces the per-comparison rule when the relation is about
    the whole sample (non-comparability witnesses).
    """

    id: str
    kind: str
    relation: str
    run: Callable[[Trial], list[Comparison]]
    dims: tuple[int, ...] = (1, 2, 3)
    blocks: tuple[int, ...] = (2, 3, 4, 5, 6)
    n_ok: Callable[[int], bool] = lambda n: n >= 1
    requires: frozenset = frozenset({"admissible"})
    verdict: Callable[[list[Comparison]], bool] | None = None
    fixed: bool = False


@dataclass
class CheckReport:
    id: str
    kind: str
    trials: int
    seed: int
    failures: list[tuple[int, float, float, float]]
    max_violation: float
    elapsed: float
    passed: bool

    def to_dict(self) -> dict:
        """JSON-ready view; ``elapsed`` is left out so reports are reproducible."""
        return {
            "id": self.id,
            "kind": self.kind,
            "seed": self.seed,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "failures": [
                {"trial": t, "lhs": lhs, "rhs": rhs, "violation": v}
                for t, lhs, rhs, v in self.failures
            ],
            "pass": self.passed,
        }


# ----------------------------------------------------------- calculus checks

def _rel(x: float, y: float) -> Comparison:
    """Rescale an equality so that the harness' ``max(1, |rhs|)`` rule reads as relative."""
    s = max(1.0, abs(y))
    return x / s, y / s


def _resid(X, Y) -> Comparison:
    X, Y = np.asarray(X), np.asarray(Y)
    scale = max(1.0, float(np.max(np.abs(Y), initial=0.0)))
    return float(np.max(np.abs(X - Y), initial=0.0)) / scale, 0.0


def _eq11(t: Trial):
    T = t.op()
    Ts = a_adjoint(t.ctx, T)
    n2 = t.norm(T) ** 2
    return [_rel(t.norm(Ts @ T), n2), _rel(t.norm(T @ Ts), n2), _rel(t.norm(Ts) ** 2, n2)]


def _eq13(t: Trial):
    T = t.op()
    w, nrm = t.w(T), t.norm(T)
    return [(nrm / 2, w), (w, nrm)]


def _eq14(t: Trial):
    T = t.op()
    return [(t.w(T), t.w(a_adjoint(t.ctx, T)))]


def _eq15(t: Trial):
    N = random_nilpotent(t.ctx, t.rng)
    return [(t.w(N), t.norm(N) / 2)]


def _selfadjoint_eq(t: Trial):
    Z = t.op()
    T = (Z + a_adjoint(t.ctx, Z)) / 2
    return [(t.w(T), t.norm(T))]


def _triple_sharp(t: Trial):
    T = t.op()
    s = lambda X: a_adjoint(t.ctx, X)  # noqa: E731
    return [_resid(s(s(s(T))), s(T))]


def _sharp_product(t: Trial):
    T, S = t.ops(2)
    s = lambda X: a_adjoint(t.ctx, X)  # noqa: E731
    return [_resid(s(T @ S), s(S) @ s(T))]


def _sharp_sum(t: Trial):
    T, S = t.ops(2)
    s = lambda X: a_adjoint(t.ctx, X)  # noqa: E731
    return [_resid(s(T + S), s(T) + s(S))]


def _power_radius(t: Trial):
    S = t.op()
    r = a_spectral_radius(t.ctx, S)
    out = []
    P = S
    for k in range(2, 5):
        P = P @ S
        out.append(_rel(a_spectral_radius(t.ctx, P), r**k))
    return out


def _real_part_formula(t: Trial):
    T = t.op()
    return [(a_numerical_radius_zamani(t.ctx, T), t.w(T))]


def _sampling(t: Trial):
    T = t.op()
    seed = int(t.rng.integers(2**31))
    return [(sampling_lower_bound(t.ctx, T, samples=2000, seed=seed), t.w(T))]


def _spectral_below_w(t: Trial):
    T = t.op()
    return [(a_spectral_radius(t.ctx, T), t.w(T))]


# ----------------------------------------------------------- 2x2 and diagonal

def _l11_i(t: Trial):
    T1, T2 = t.ops(2)
    O = t.zero
    return [(t.bw([[T1, O], [O, T2]]), max(t.w(T1), t.w(T2)))]


def _l11_ii(t: Trial):
    T1, T2 = t.ops(2)
    return [(t.pair_w(T1, T2), t.pair_w(T2, T1))]


def _l11_iii(t: Trial):
    T1, T2 = t.ops(2)
    phase = np.exp(1j * t.rng.uniform(0, 2 * np.pi))
    return [(t.pair_w(T1, phase * T2), t.pair_w(T1, T2))]


def _l11_iv(t: Trial):
    T1, T2 = t.ops(2)
    return [(t.bw([[T1, T2], [T2, T1]]), max(t.w(T1 + T2), t.w(T1 - T2)))]


def _l12(t: Trial):
    T1, T2 = t.ops(2)
    return [(t.bw([[T2, -T1], [T1, T2]]), max(t.w(T1 + 1j * T2), t.w(T1 - 1j * T2)))]


def _l13(t: Trial):
    M = t.grid([[t.op() for _ in range(t.n)] for _ in range(t.n)])
    return [_resid(st.block_a_adjoint(M).flatten(), M.a_adjoint().flatten())]


def _l14(t: Trial):
    Ts = t.ops(t.n)
    return [(st.block_diag(Ts, t.ctx).w(), max(t.w(T) for T in Ts))]


def _l15(t: Trial):
    n = t.n
    Ts = t.ops(n)
    lhs = st.block_offdiag(Ts, t.ctx).w()
    if n % 2 == 0:
        rhs = sum(t.norm(T) for T in Ts) / 2
    else:
        c = n // 2
        rhs = t.w(Ts[c]) + sum(t.norm(T) for i, T in enumerate(Ts) if i != c) / 2
    return [(lhs, rhs)]


def _l17(t: Trial):
    n = t.n
    S = [[t.op() for _ in range(n)] for _ in range(n)]
    s = np.array([[t.w(S[i][i]) if i == j else t.pair_w(S[i][j], S[j][i]) for j in range(n)]
                  for i in range(n)])
    return [(t.bw(S), numerical_radius(s).value)]


# ------------------------------------------------------------ cross-diagonal

def thm21_pairs(n: int) -> tuple[list[tuple[int, int]], int | None]:
    """1-based index pairs ``(a, b)`` of the 2x2 compressions, and the centre if ``n`` is odd.

    The ranges follow the three parity cases literally; every pair
    satisfies ``a + b = n + 1``.
    """
    if n % 2 == 0:
        return [(n - (2 * i - 1), 2 * i) for i in range(1, n // 2 + 1)], None
    half = (n + 1) // 2
    if half % 2 == 1:
        lo, hi = (n - 1) // 4, (n + 7) // 4
    else:
        lo, hi = (n - 3) // 4, (n + 5) // 4
    pairs = [(n - (2 * i - 1), 2 * i) for i in range(1, lo + 1)]
    pairs += [(n - (2 * i - 2), 2 * i - 1) for i in range(hi, half + 1)]
    return pairs, half


def _cross_instance(t: Trial):
    n = t.n
    Ts, Ss = t.ops(n), t.ops(n)
    if n % 2:
        Ss[n // 2] = Ts[n // 2]
    return Ts, Ss


def _cross_rhs(t: Trial, Ts, Ss) -> float:
    pairs, centre = thm21_pairs(t.n)
    vals = [t.bw([[Ts[a - 1], Ss[a - 1]], [Ss[b - 1], Ts[b - 1]]]) for a, b in pairs]
    if centre is not None:
        vals.append(t.w(Ts[centre - 1]))
    return max(vals)


def _thm21(t: Trial):
    Ts, Ss = _cross_instance(t)
    return [(st.cross_diag(Ts, Ss, t.ctx).w(), _cross_rhs(t, Ts, Ss))]


def _thm21_structure(t: Trial):
    """Conjugating by the pairing permutation leaves only 2x2 (and one 1x1) diagonal blocks."""
    n = t.n
    Ts, Ss = _cross_instance(t)
    M = st.cross_diag(Ts, Ss, t.ctx)
    U = st.cross_permutation_unitary(t.ctx, n)
    C = (U.a_adjoint() @ M.a_adjoint() @ U).blocks
    mask = np.zeros((n, n), dtype=bool)
    r = 0
    while r < n:
        size = 2 if r + 1 < n and _pair_slot(n, r) else 1
        mask[r:r + size, r:r + size] = True
        r += size
    off = float(np.max(np.abs(C[~mask]), initial=0.0))
    return [(off / max(1.0, float(np.max(np.abs(C)))), 0.0)]


def _pair_slot(n: int, r: int) -> bool:
    """Whether permuted rows ``r`` and ``r+1`` (0-based) hold a pair ``(j, n+1-j)``."""
    pi = st.cross_permutation(n)
    return pi[r] + pi[r + 1] == n + 1


def _rem21_i(t: Trial):
    n = t.n
    Ss = t.ops(n)
    Ts = [t.zero] * n
    if n % 2:
        Ts[n // 2] = Ss[n // 2]
    lhs = st.cross_diag(Ts, Ss, t.ctx).w()
    vals = [t.pair_w(Ss[j], Ss[n - 1 - j]) for j in range(n // 2)]
    if n % 2:
        vals.append(t.w(Ss[n // 2]))
    return [(lhs, max(vals))]


def _rem21_ii(t: Trial):
    n = t.n
    Ts = t.ops(n)
    Ss = [t.zero] * n
    if n % 2:
        Ss[n // 2] = Ts[n // 2]
    return [(st.cross_diag(Ts, Ss, t.ctx).w(), max(t.w(T) for T in Ts))]


def _cor22(t: Trial):
    n = t.n
    Ts, Ss = [None] * n, [None] * n
    for j in range((n + 1) // 2):
        Ts[j] = Ts[n - 1 - j] = t.op()
        Ss[j] = Ss[n - 1 - j] = t.op()
    if n % 2:
        Ss[n // 2] = Ts[n // 2]
    vals = [max(t.w(Ts[j] + Ss[j]), t.w(Ts[j] - Ss[j])) for j in range(n // 2)]
    if n % 2:
        vals.append(t.w(Ts[n // 2]))
    return [(st.cross_diag(Ts, Ss, t.ctx).w(), max(vals))]


def _rem22(centre: str):
    def run(t: Trial):
        n = t.n
        T, S = t.ops(2)
        Ts, Ss = [T] * n, [S] * n
        rhs = [t.w(T + S), t.w(T - S)]
        if n % 2:
            c = n // 2
            if centre == "T":
                Ss = list(Ss)
                Ss[c] = T
                rhs.append(t.w(T))
            else:
                Ts = list(Ts)
                Ts[c] = S
                rhs.append(t.w(S))
        return [(st.cross_diag(Ts, Ss, t.ctx).w(), max(rhs))]
    return run


def _rem23(t: Trial):
    T = t.op()
    return [(st.cross_diag([T] * t.n, [T] * t.n, t.ctx).w(), 2 * t.w(T))]


def _rst_pattern(n: int, R, S, T) -> list[list]:
    return [[R if i == j else (T if i + j == n - 1 else S) for j in range(n)] for i in range(n)]


def _thm25(t: Trial):
    n = t.n
    R, S, T = t.ops(3)
    rhs = max(t.w(R + T + (n - 2) * S), t.w(R + T - 2 * S), t.w(R - T))
    return [(t.bw(_rst_pattern(n, R, S, T)), rhs)]


#: Scalar ``(R, S, T)`` instances at ``n = 3`` on opposite sides of the even-n formula.
GAP_INSTANCES = ((2.0, 3.0, 2.0), (3.0, 2.0, 3.0))


def _thm25_gap(t: Trial):
    out = []
    for R, S, T in GAP_INSTANCES:
        M = np.array(_rst_pattern(3, R, S, T), dtype=np.complex128)
        lhs = numerical_radius(M).value
        rhs = max(abs(R + T + S), abs(R + T - 2 * S), abs(R - T))
        out.append((lhs, rhs))
    return out


def _both_orders(cmps: list[Comparison]) -> bool:
    return any(l > r + TOL_EQ for l, r in cmps) and any(l < r - TOL_EQ for l, r in cmps)


# ---------------------------------------------------------------- circulants

def _thm31(t: Trial):
    Ts = t.ops(t.n)
    return [(st.lcirc(Ts, t.ctx).w(), st.lcirc_fourier_form(Ts, t.ctx).w())]


def _rem31(t: Trial):
    Ts = t.ops(t.n)
    return [(st.lcirc(Ts, t.ctx).w(), st.lcirc(Ts[::-1], t.ctx).w())]


def _rem31_skew(t: Trial):
    Ts = t.ops(t.n)
    return [(st.slcirc(Ts, t.ctx).w(), st.slcirc(Ts[::-1], t.ctx).w())]


def _cor32(t: Trial):
    Ts = t.ops(t.n)
    D = st.fourier_sums(Ts)
    rhs = t.w(D[0]) + max(t.w(D[j]) for j in range(1, t.n))
    return [(st.lcirc(Ts, t.ctx).w(), rhs)]


def _thm33(t: Trial):
    Ts = t.ops(t.n)
    return [(st.slcirc(Ts, t.ctx).w(), st.slcirc_fourier_form(Ts, t.ctx).w())]


def _cor34(t: Trial):
    n = t.n
    Ts = t.ops(n)
    norms = sum(t.norm(T) for T in Ts)
    if n % 2 == 0:
        rhs = n / 2 * norms
    else:
        rhs = sum(t.w(T) for T in Ts) + (n - 1) / 2 * norms
    return [(st.slcirc(Ts, t.ctx).w(), rhs)]


def _phase_family(t: Trial, T) -> list[np.ndarray]:
    sigma = np.exp(1j * np.pi / t.n)
    return [sigma**k * T for k in range(t.n)]


def _rem34(t: Trial):
    T = t.op()
    fam = _phase_family(t, T)
    sc = st.scirc(fam, t.ctx)
    J = st.exchange_J(t.n, ctx=t.ctx)
    return [
        (sc.w(), t.n * t.w(T)),
        (st.slcirc(fam, t.ctx).w(), (sc @ J).w()),
    ]


def _rem34_chain(t: Trial):
    fam = _phase_family(t, t.op())
    return [(st.slcirc(fam, t.ctx).w(), st.scirc(fam, t.ctx).w())]


def _rem34_nilpotent(t: Trial):
    fam = _phase_family(t, random_nilpotent(t.ctx, t.rng))
    return [(st.slcirc(fam, t.ctx).w(), st.scirc(fam, t.ctx).w())]


def _lcirc_via_J(t: Trial):
    Ts = t.ops(t.n)
    J = st.exchange_J(t.n, ctx=t.ctx)
    return [
        _resid(st.lcirc(Ts, t.ctx).blocks, (st.circ(Ts[::-1], t.ctx) @ J).blocks),
        _resid(st.slcirc(Ts, t.ctx).blocks, (st.scirc(Ts[::-1], t.ctx) @ J).blocks),
    ]


# ------------------------------------------------------ imaginary circulants

R2 = math.sqrt(2.0)


def _imag(sign: int):
    return st.lcirc_i if sign > 0 else st.slcirc_i


def _prop41(sign: int):
    def run(t: Trial):
        T1, T2 = t.ops(2)
        return [(_imag(sign)([T1, T2], t.ctx).w(), t.w(T1) + t.w(T2))]
    return run


def _mix(t: Trial, X, Y) -> float:
    return (t.norm(X - Y) + t.norm(X + Y)) / R2


def _prop42(sign: int):
    def run(t: Trial):
        T1, T2, T3 = t.ops(3)
        lhs = _imag(sign)([T1, T2, T3], t.ctx).w()
        base = t.w(T3) + max(t.w(T1), t.w(T2))
        spread = t.norm(T1 - T2) + t.norm(T1 + T2)
        return [(lhs, base + spread / R2), (lhs, base + R2 * spread)]
    return run


def _prop43(sign: int):
    def run(t: Trial):
        T1, T2, T3, T4 = t.ops(4)
        rhs = (t.w(T4) + 2 * max(t.w(T1), t.w(T3))
               + _mix(t, T1, T2) + _mix(t, T2, T3))
        return [(_imag(sign)([T1, T2, T3, T4], t.ctx).w(), rhs)]
    return run


def _prop45(t: Trial):
    Ts = t.ops(5)
    T1, T2, T3, T4, T5 = Ts
    rhs = (t.w(T5) + max(t.w(T2), t.w(T3)) + max(t.w(T1), t.w(T4))
           + sum(_mix(t, Ts[i + 1], Ts[i]) for i in range(3))
           + math.hypot(t.w(T4), t.w(T2)))
    return [(st.lcirc_i(Ts, t.ctx).w(), rhs)]


# ------------------------------------------------------- general n x n bounds

def _quad(w0: float, s: float) -> float:
    """``(w0 + sqrt(w0^2 + s)) / 2``."""
    return 0.5 * (w0 + math.sqrt(w0 * w0 + s))


def _full(t: Trial):
    return [[t.op() for _ in range(t.n)] for _ in range(t.n)]


def _arrow(t: Trial):
    n, O = t.n, t.zero
    S = _full(t)
    grid = [[S[i][j] if i == 0 or j == 0 else O for j in range(n)] for i in range(n)]
    s = sum(t.pair_w(S[0][k], S[k][0]) ** 2 for k in range(1, n))
    return [(t.bw(grid), _quad(t.w(S[0][0]), 4 * s))]


def _arrow_sym(zero_corner: bool):
    def run(t: Trial):
        n, O = t.n, t.zero
        row = t.ops(n)
        if zero_corner:
            row[0] = O
        grid = [[row[max(i, j)] if i == 0 or j == 0 else O for j in range(n)] for i in range(n)]
        s = sum(t.w(row[k]) ** 2 for k in range(1, n))
        rhs = math.sqrt(s) if zero_corner else _quad(t.w(row[0]), 4 * s)
        return [(t.bw(grid), rhs)]
    return run


def _first_row(t: Trial):
    n, O = t.n, t.zero
    row = t.ops(n)
    grid = [row] + [[O] * n for _ in range(n - 1)]
    s = sum(t.norm(row[k]) ** 2 for k in range(1, n))
    return [(t.bw(grid), _quad(t.w(row[0]), s))]


def _general(t: Trial):
    n = t.n
    S = _full(t)
    rhs = sum(_quad(t.w(S[i][i]), 4 * sum(t.pair_w(S[i][j], S[j][i]) ** 2 for j in range(i + 1, n)))
              for i in range(n))
    return [(t.bw(S), rhs)]


def _general_sym(t: Trial):
    n = t.n
    U = _full(t)
    S = [[U[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)]
    rhs = sum(_quad(t.w(S[i][i]), 4 * sum(t.w(S[i][j]) ** 2 for j in range(i + 1, n)))
              for i in range(n))
    return [(t.bw(S), rhs)]


def _general_tri(t: Trial):
    n, O = t.n, t.zero
    U = _full(t)
    S = [[U[i][j] if j >= i else O for j in range(n)] for i in range(n)]
    rhs = sum(_quad(t.w(S[i][i]), sum(t.norm(S[i][j]) ** 2 for j in range(i + 1, n)))
              for i in range(n))
    return [(t.bw(S), rhs)]


def _general_const(t: Trial):
    n, O = t.n, t.zero
    T, S = t.ops(2)
    wT, wS, nS = t.w(T), t.w(S), t.norm(S)
    sym = [[T if i == j else S for j in range(n)] for i in range(n)]
    tri = [[T if i == j else (S if j > i else O) for j in range(n)] for i in range(n)]
    rhs_sym = sum(_quad(wT, 4 * (n - 1 - i) * wS**2) for i in range(n))
    rhs_tri = sum(_quad(wT, (n - 1 - i) * nS**2) for i in range(n))
    return [(t.bw(sym), rhs_sym), (t.bw(tri), rhs_tri)]


def _lemma48(t: Trial):
    T1, T2 = t.ops(2)
    O = t.zero
    return [(t.bw([[O, T1, O], [T1, O, T2], [O, T2, O]]), math.hypot(t.w(T1), t.w(T2)))]


# ------------------------------------------------------------ unitaries

_UNITARIES = {
    "dft": st.dft_unitary,
    "skew-dft": st.skew_dft_unitary,
    "cross": st.cross_permutation_unitary,
    "corner": st.corner_rotation_unitary,
}


def _unitary(name: str):
    def run(t: Trial):
        return [(st.unitarity_defect(_UNITARIES[name](t.ctx, t.n)), 0.0)]
    return run


def _circ_dft_structure(t: Trial):
    n = t.n
    U = st.dft_unitary(t.ctx, n)
    C = (U.a_adjoint() @ st.circ(t.ops(n), t.ctx).a_adjoint() @ U).blocks
    off = ~np.eye(n, dtype=bool)
    return [(float(np.max(np.abs(C[off]), initial=0.0)) / max(1.0, float(np.max(np.abs(C)))), 0.0)]


def _unitary_invariance(t: Trial):
    n = t.n
    big = t.ctx.inflate(n)
    Z = _gaussian(t.rng, big.d, big.d)
    M = Z if big.full_rank else big.pinv_A @ Z @ big.A
    name = list(_UNITARIES)[int(t.rng.integers(len(_UNITARIES)))]
    U = _UNITARIES[name](t.ctx, n).flatten()
    Us = a_adjoint(big, U)
    return [(w_a(big, Us @ M @ U), w_a(big, M))]


# ------------------------------------------------------------------ catalog

def _even(n: int) -> bool:
    return n % 2 == 0


def _odd(n: int) -> bool:
    return n % 2 == 1


def _spec(id, kind, relation, run, **kw) -> CheckSpec:
    return CheckSpec(id=id, kind=kind, relation=relation, run=run, **kw)


_ONE = dict(blocks=(1,), n_ok=lambda n: n == 1)
_TWO = dict(blocks=(2,), n_ok=lambda n: n == 2)


def _exactly(k: int) -> dict:
    return dict(blocks=(k,), n_ok=lambda n, k=k: n == k)


CATALOG: tuple[CheckSpec, ...] = (
    # weighted calculus
    _spec("eq1.1", EQUALITY, "||T# T|| = ||T T#|| = ||T||^2 = ||T#||^2", _eq11, **_ONE),
    _spec("eq1.3", UPPER_BOUND, "||T||/2 <= w(T) <= ||T||", _eq13, **_ONE),
    _spec("eq1.4", EQUALITY, "w(T) = w(T#)", _eq14, **_ONE),
    _spec("eq1.5", EQUALITY, "T^2 = 0 implies w(T) = ||T||/2", _eq15, **_ONE,
          requires=frozenset({"admissible", "nilpotent"})),
    _spec("selfadjoint-w", EQUALITY, "A-selfadjoint T has w(T) = ||T||", _selfadjoint_eq, **_ONE),
    _spec("sharp-triple", STRUCTURAL, "((T#)#)# = T#", _triple_sharp, **_ONE),
    _spec("sharp-product", STRUCTURAL, "(TS)# = S# T#", _sharp_product, **_ONE),
    _spec("sharp-sum", STRUCTURAL, "(T+S)# = T# + S#", _sharp_sum, **_ONE),
    _spec("lemma1.6", EQUALITY, "r(S^k) = r(S)^k for k = 2, 3, 4", _power_radius, **_ONE),
    _spec("real-part-formula", EQUALITY, "sup_t ||Re(e^{it} T)|| = w(T)", _real_part_formula, **_ONE),
    _spec("sampling-oracle", UPPER_BOUND, "sampled |<Tx, x>| <= w(T)", _sampling, **_ONE),
    _spec("spectral-below-w", UPPER_BOUND, "r(T) <= w(T)", _spectral_below_w, **_ONE),
    # block basics
    _spec("lemma1.1-i", EQUALITY, "w(diag(T1, T2)) = max w(Ti)", _l11_i, **_TWO),
    _spec("lemma1.1-ii", EQUALITY, "w([[O, T1], [T2, O]]) = w([[O, T2], [T1, O]])", _l11_ii, **_TWO),
    _spec("lemma1.1-iii", EQUALITY, "w([[O, T1], [e^{it} T2, O]]) = w([[O, T1], [T2, O]])", _l11_iii, **_TWO),
    _spec("lemma1.1-iv", EQUALITY, "w([[T1, T2], [T2, T1]]) = max w(T1 +- T2)", _l11_iv, **_TWO),
    _spec("lemma1.2", EQUALITY, "w([[T2, -T1], [T1, T2]]) = max w(T1 +- i T2)", _l12, **_TWO),
    _spec("lemma1.3", STRUCTURAL, "blockwise adjoint equals the adjoint under diag(A, ..., A)", _l13),
    _spec("lemma1.4", EQUALITY, "w(diag(T1..Tn)) = max w(Ti)", _l14),
    _spec("lemma1.5", UPPER_BOUND, "anti-diagonal: sum ||Ti|| / 2, centre by w for odd n", _l15),
    _spec("lemma1.7", UPPER_BOUND, "w(S) <= w([s_ij]) for the compressed scalar matrix", _l17),
    # cross-diagonal
    _spec("thm2.1-even", EQUALITY, "cross-diagonal = max over 2x2 compressions", _thm21,
          blocks=(2, 4, 6), n_ok=_even),
    _spec("thm2.1-odd-odd", EQUALITY, "cross-diagonal, n and (n+1)/2 odd", _thm21,
          blocks=(5, 9), n_ok=lambda n: n % 2 == 1 and ((n + 1) // 2) % 2 == 1,
          requires=frozenset({"admissible", "center-equal"})),
    _spec("thm2.1-odd-even", EQUALITY, "cross-diagonal, n odd and (n+1)/2 even", _thm21,
          blocks=(3, 7), n_ok=lambda n: n % 2 == 1 and ((n + 1) // 2) % 2 == 0,
          requires=frozenset({"admissible", "center-equal"})),
    _spec("thm2.1-structure", STRUCTURAL, "pairing permutation block-diagonalises the cross matrix",
          _thm21_structure, blocks=(1, 2, 3, 4, 5, 6, 7, 8),
          requires=frozenset({"admissible", "center-equal"})),
    _spec("rem2.1-i", EQUALITY, "zero diagonal: max over anti-diagonal pairs", _rem21_i),
    _spec("rem2.1-ii", EQUALITY, "zero anti-diagonal: max w(Ti)", _rem21_ii),
    _spec("cor2.2", EQUALITY, "mirrored blocks: max w(Tj +- Sj)", _cor22,
          requires=frozenset({"admissible", "center-equal", "symmetric"})),
    _spec("rem2.2-even", EQUALITY, "constant cross matrix: max w(T +- S)", _rem22("T"),
          blocks=(2, 4, 6), n_ok=_even),
    _spec("rem2.2-odd-T", EQUALITY, "constant cross matrix, centre T", _rem22("T"),
          blocks=(3, 5), n_ok=_odd),
    _spec("rem2.2-odd-S", EQUALITY, "constant cross matrix, centre S", _rem22("S"),
          blocks=(3, 5), n_ok=_odd),
    _spec("rem2.3", EQUALITY, "T = S gives 2 w(T)", _rem23),
    _spec("thm2.5-even", EQUALITY, "R/S/T pattern = max w(R+T+(n-2)S), w(R+T-2S), w(R-T)", _thm25,
          blocks=(4, 6), n_ok=lambda n: n % 2 == 0 and n >= 4),
    _spec("thm2.5-odd-gap", STRUCTURAL, "odd n: the even-n formula is neither an upper nor a lower bound",
          _thm25_gap, dims=(1,), blocks=(3,), n_ok=lambda n: n == 3, verdict=_both_orders, fixed=True),
    # circulants
    _spec("lcirc-circ-J", STRUCTURAL, "lcirc(T1..Tn) = circ(Tn..T1) J, same for the skew pair", _lcirc_via_J),
    _spec("circ-dft-structure", STRUCTURAL, "U# circ# U is block diagonal", _circ_dft_structure),
    _spec("thm3.1", EQUALITY, "w(lcirc) = w of the Fourier-sum arrangement", _thm31),
    _spec("rem3.1", EQUALITY, "w(lcirc(T1..Tn)) = w(lcirc(Tn..T1))", _rem31),
    _spec("rem3.1-skew", EQUALITY, "w(slcirc(T1..Tn)) = w(slcirc(Tn..T1))", _rem31_skew),
    _spec("cor3.2-even", UPPER_BOUND, "w(lcirc) <= w(D0) + max w(Dj)", _cor32,
          blocks=(2, 4, 6), n_ok=_even),
    _spec("cor3.2-odd", UPPER_BOUND, "w(lcirc) <= w(D0) + max w(Dj)", _cor32,
          blocks=(3, 5), n_ok=_odd),
    _spec("thm3.3", EQUALITY, "w(slcirc) = w of the skew Fourier-sum anti-diagonal", _thm33),
    _spec("cor3.4-even", UPPER_BOUND, "w(slcirc) <= (n/2) sum ||Ti||", _cor34, blocks=(2, 4, 6), n_ok=_even),
    _spec("cor3.4-odd", UPPER_BOUND, "w(slcirc) <= sum w(Ti) + (n-1)/2 sum ||Ti||", _cor34,
          blocks=(3, 5), n_ok=_odd),
    _spec("rem3.4", EQUALITY, "w(scirc(T, sT, ..)) = n w(T) and w(slcirc(..)) = w(scirc(..) J)", _rem34),
    _spec("rem3.4-chain", UPPER_BOUND, "w(slcirc(T, sT, ..)) <= w(scirc(T, sT, ..))", _rem34_chain),
    _spec("rem3.4-nilpotent", EQUALITY, "T^2 = 0: w(slcirc(T, sT, ..)) = w(scirc(T, sT, ..))",
          _rem34_nilpotent, requires=frozenset({"admissible", "nilpotent"})),
    # imaginary left circulants
    _spec("prop4.1", UPPER_BOUND, "w([[T1, T2], [T2, iT1]]) <= w(T1) + w(T2)", _prop41(1), **_TWO),
    _spec("cor4.1", UPPER_BOUND, "w([[T1, T2], [T2, -iT1]]) <= w(T1) + w(T2)", _prop41(-1), **_TWO),
    _spec("prop4.2", UPPER_BOUND, "n = 3 bound with 1/sqrt2 and sqrt2 coefficients", _prop42(1), **_exactly(3)),
    _spec("cor4.2", UPPER_BOUND, "n = 3 bound, -i variant", _prop42(-1), **_exactly(3)),
    _spec("prop4.3", UPPER_BOUND, "n = 4 bound", _prop43(1), **_exactly(4)),
    _spec("cor4.3", UPPER_BOUND, "n = 4 bound, -i variant", _prop43(-1), **_exactly(4)),
    _spec("prop4.5", UPPER_BOUND, "n = 5 bound", _prop45, **_exactly(5)),
    # general bounds
    _spec("lemma-arrow", UPPER_BOUND, "first row and column", _arrow),
    _spec("lemma-arrow-sym", UPPER_BOUND, "first row and column, mirrored", _arrow_sym(False),
          requires=frozenset({"admissible", "symmetric"})),
    _spec("lemma-arrow-zero", UPPER_BOUND, "mirrored arrow with zero corner", _arrow_sym(True),
          requires=frozenset({"admissible", "symmetric"})),
    _spec("rem3.6-first-row", UPPER_BOUND, "first row only", _first_row),
    _spec("thm-general-nn", UPPER_BOUND, "full n x n bound", _general),
    _spec("cor-general-sym", UPPER_BOUND, "symmetric block pattern", _general_sym,
          requires=frozenset({"admissible", "symmetric"})),
    _spec("cor-general-tri", UPPER_BOUND, "upper-triangular block pattern", _general_tri),
    _spec("cor-general-const", UPPER_BOUND, "constant T on the diagonal, S elsewhere", _general_const),
    _spec("lemma4.8", UPPER_BOUND, "tridiagonal cross: sqrt(w(T1)^2 + w(T2)^2)", _lemma48, **_exactly(3)),
    # weighted unitaries
    _spec("unitary-dft", STRUCTURAL, "U U# = U# U = diag(P, ..., P)", _unitary("dft"),
          blocks=tuple(range(1, 9))),
    _spec("unitary-skew-dft", STRUCTURAL, "U U# = U# U = diag(P, ..., P)", _unitary("skew-dft"),
          blocks=tuple(range(1, 9))),
    _spec("unitary-cross", STRUCTURAL, "U U# = U# U = diag(P, ..., P)", _unitary("cross"),
          blocks=tuple(range(1, 9))),
    _spec("unitary-corner", STRUCTURAL, "U U# = U# U = diag(P, ..., P)", _unitary("corner"),
          blocks=tuple(range(1, 9))),
    _spec("unitary-invariance", EQUALITY, "w(U# M U) = w(M)", _unitary_invariance,
          blocks=(1, 2, 3, 4)),
)

_BY_ID = {spec.id: spec for spec in CATALOG}
if len(_BY_ID) != len(CATALOG):  # pragma: no cover
    raise RuntimeError("duplicate check id in catalog")


def catalog_ids() -> list[str]:
    return [spec.id for spec in CATALOG]


def get_check(check_id: str) -> CheckSpec:
    try:
        return _BY_ID[check_id]
    except KeyError:
        raise UnknownCheck(check_id) from None


# -------------------------------------------------------------------- runner

RANK_MODES = ("full", "deficient")


def _rank_for(d: int, mode: str) -> int:
    return d if mode == "full" else d - 1


def _schedule(spec: CheckSpec, dim, blocks, rank) -> list[tuple[int, int, str]]:
    dims = spec.dims if dim is None else (dim,)
    ns = spec.blocks if blocks is None else (blocks,)
    modes = RANK_MODES if rank is None else (rank,)
    if rank is not None and rank not in RANK_MODES:
        raise ValueError(f"rank mode must be one of {RANK_MODES}, got {rank!r}")
    for n in ns:
        if not spec.n_ok(n):
            raise HypothesisViolation(f"{spec.id} does not apply to n = {n}")
    for d in dims:
        if d < 1:
            raise HypothesisViolation(f"block size must be positive, got {d}")
    combos = [(d, n, m) for m in modes for d in dims for n in ns
              if not (m == "deficient" and d == 1 and rank is None)]
    return combos


def _violation(kind: str, lhs: float, rhs: float) -> float:
    if kind == EQUALITY:
        return abs(lhs - rhs) / max(1.0, abs(rhs))
    if kind == UPPER_BOUND:
        return lhs - rhs
    return lhs - rhs


def _limit(kind: str, tol_eq: float, tol_ineq: float) -> float:
    return {EQUALITY: tol_eq, UPPER_BOUND: tol_ineq}.get(kind, TOL_STRUCT)


def _one_trial(spec: CheckSpec, combos, seed: int, k: int) -> list[Comparison]:
    sub = seed + k
    d, n, mode = combos[k % len(combos)]
    rng = np.random.default_rng(sub)
    ctx = SemiContext.from_weight(random_psd(d, _rank_for(d, mode), rng))
    return spec.run(Trial(ctx, n, rng))


def _workers() -> int:
    raw = os.environ.get("SEMIOP_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        return max(0, int(raw))
    except ValueError:
        log.warning("ignoring non-integer SEMIOP_THREADS=%r", raw)
        return 0


def _pmap(fn, items: Iterable, workers: int) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_check(spec: CheckSpec | str, trials: int = 100, seed: int = 0,
              tol_eq: float = TOL_EQ, tol_ineq: float = TOL_INEQ, *,
              dim: int | None = None, blocks: int | None = None,
              rank: str | None = None, workers: int | None = None) -> CheckReport:
    """Run ``trials`` seeded instances of one catalog check.

    Trial ``k`` draws everything from ``default_rng(seed + k)`` and uses the
    ``k``-th (block size, block count, rank mode) combination, cycling, so
    the report does not depend on ``workers``.
    """
    if isinstance(spec, str):
        spec = get_check(spec)
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    start = time.perf_counter()
    combos = _schedule(spec, dim, blocks, rank)
    n_trials = 1 if spec.fixed else trials
    workers = _workers() if workers is None else workers
    results = _pmap(lambda k: _one_trial(spec, combos, seed, k), range(n_trials), workers)

    limit = _limit(spec.kind, tol_eq, tol_ineq)
    failures: list[tuple[int, float, float, float]] = []
    worst = -math.inf
    flat = []
    for k, cmps in enumerate(results):
        for lhs, rhs in cmps:
            lhs, rhs = float(lhs), float(rhs)
            v = _violation(spec.kind, lhs, rhs)
            flat.append((lhs, rhs))
            worst = max(worst, v)
            if spec.verdict is None and not v <= limit:
                failures.append((k, lhs, rhs, v))
    if spec.verdict is not None:
        passed = spec.verdict(flat)
        if not passed:
            failures = [(0, lhs, rhs, lhs - rhs) for lhs, rhs in flat]
    else:
        passed = not failures
    if worst == -math.inf:
        worst = 0.0
    return CheckReport(spec.id, spec.kind, n_trials, seed, failures, worst,
                       time.perf_counter() - start, passed)


def run_catalog(ids: Iterable[str] | None = None, trials: int = 100, seed: int = 0,
                tol_eq: float = TOL_EQ, tol_ineq: float = TOL_INEQ, *,
                dim: int | None = None, blocks: int | None = None,
                rank: str | None = None, workers: int | None = None) -> list[CheckReport]:
    """Run several checks; the result follows catalog order whatever the schedule."""
    wanted = catalog_ids() if ids is None else list(ids)
    specs = [get_check(i) for i in wanted]
    specs.sort(key=lambda s: catalog_ids().index(s.id))
    workers = _workers() if workers is None else workers

    def one(spec):
        return run_check(spec, trials, seed, tol_eq, tol_ineq, dim=dim, blocks=blocks,
                         rank=rank, workers=1)

    return _pmap(one, specs, workers)

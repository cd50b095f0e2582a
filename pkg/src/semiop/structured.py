"""Block operator matrices and the weighted unitaries that reorganise them.

A :class:`BlockMatrix` is an ``n x n`` grid of ``d x d`` blocks acting on
``C^d (+) ... (+) C^d`` with the block-diagonal weight ``diag(A, ..., A)``.
Constructors take the blocks in the 1-based order used in the literature
(``T_1, ..., T_n``) and hide the 0-based indexing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import semi
from .errors import CenterConflict, DegreeTooSmall, DimensionMismatch, EmptyList
from .linalg import RadiusResult, as_cmatrix
from .semi import SemiContext


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """``blocks[i, j]`` is the ``(i, j)`` block (0-based), shape ``(n, n, d, d)``."""

    blocks: np.ndarray
    ctx: SemiContext

    def __post_init__(self):
        b = self.blocks
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
            raise DimensionMismatch(f"blocks must have shape (n, n, d, d), got {b.shape}")
        if b.shape[2] != self.ctx.d:
            raise DimensionMismatch(f"block size {b.shape[2]} does not match weight size {self.ctx.d}")
        b.setflags(write=False)

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def d(self) -> int:
        return self.blocks.shape[2]

    @property
    def big_ctx(self) -> SemiContext:
        """The inflated weight ``diag(A, ..., A)``."""
        return self.ctx.inflate(self.n)

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j]

    def flatten(self) -> np.ndarray:
        n, d = self.n, self.d
        return self.blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d).copy()

    @classmethod
    def from_flat(cls, M, n: int, ctx: SemiContext) -> "BlockMatrix":
        M = as_cmatrix(M)
        d = ctx.d
        if M.shape != (n * d, n * d):
            raise DimensionMismatch(f"flat matrix has shape {M.shape}, expected {(n * d, n * d)}")
        return cls(M.reshape(n, d, n, d).transpose(0, 2, 1, 3).copy(), ctx)

    def _like(self, flat: np.ndarray) -> "BlockMatrix":
        return BlockMatrix.from_flat(flat, self.n, self.ctx)

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        return self._like(self.flatten() @ other.flatten())

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix(self.blocks + other.blocks, self.ctx)

    def __sub__(self, other: "BlockMatrix") -> "BlockMatrix":
        return BlockMatrix(self.blocks - other.blocks, self.ctx)

    def __mul__(self, c) -> "BlockMatrix":
        return BlockMatrix(self.blocks * c, self.ctx)

    __rmul__ = __mul__

    def __neg__(self) -> "BlockMatrix":
        return BlockMatrix(-self.blocks, self.ctx)

    def a_adjoint(self) -> "BlockMatrix":
        """Adjoint of the flattened matrix under the inflated weight."""
        return self._like(semi.a_adjoint(self.big_ctx, self.flatten()))

    def numerical_radius(self, tol: float = 1e-10) -> RadiusResult:
        return semi.a_numerical_radius(self.big_ctx, self.flatten(), tol)

    def w(self) -> float:
        return semi.w_a(self.big_ctx, self.flatten())

    def seminorm(self) -> float:
        return semi.a_seminorm(self.big_ctx, self.flatten())


def _stack(Ts: Sequence, ctx: SemiContext | None):
    if len(Ts) == 0:
        raise EmptyList("at least one block is required")
    mats = [as_cmatrix(T, f"T_{k + 1}") for k, T in enumerate(Ts)]
    d = mats[0].shape[0]
    for k, T in enumerate(mats):
        if T.shape != (d, d):
            raise DimensionMismatch(f"T_{k + 1} has shape {T.shape}, expected {(d, d)}")
    if ctx is None:
        ctx = SemiContext.identity(d)
    elif ctx.d != d:
        raise DimensionMismatch(f"blocks are {d}x{d} but the weight is {ctx.d}x{ctx.d}")
    return np.stack(mats), ctx


def _from_rule(Ts, ctx, rule) -> BlockMatrix:
    """Build ``[coef * T_idx]`` where ``rule(r, c) -> (idx, coef)``, all 0-based."""
    T, ctx = _stack(Ts, ctx)
    n, d = len(T), T.shape[1]
    out = np.zeros((n, n, d, d), dtype=np.complex128)
    for r in range(n):
        for c in range(n):
            idx, coef = rule(r, c, n)
            if coef != 0:
                out[r, c] = coef * T[idx]
    return BlockMatrix(out, ctx)


def circ(Ts, ctx=None) -> BlockMatrix:
    """Circulant: first row ``T_1..T_n``, each row shifted right by one."""
    return _from_rule(Ts, ctx, lambda r, c, n: ((c - r) % n, 1))


def lcirc(Ts, ctx=None) -> BlockMatrix:
    """Left circulant: first row ``T_1..T_n``, each row shifted left by one."""
    return _from_rule(Ts, ctx, lambda r, c, n: ((c + r) % n, 1))


def scirc(Ts, ctx=None) -> BlockMatrix:
    """Skew circulant: ``circ`` with every block below the main diagonal negated."""
    return _from_rule(Ts, ctx, lambda r, c, n: ((c - r) % n, -1 if r > c else 1))


def slcirc(Ts, ctx=None) -> BlockMatrix:
    """Skew left circulant: ``lcirc`` with every block below the anti-diagonal negated."""
    return _from_rule(Ts, ctx, lambda r, c, n: ((c + r) % n, -1 if r + c > n - 1 else 1))


def lcirc_i(Ts, ctx=None) -> BlockMatrix:
    """Imaginary left circulant: left rotations whose wrapped blocks are multiplied by ``i``.

    Row 2 is ``(T_2, ..., T_n, i T_1)`` and the last row is
    ``(T_n, i T_1, ..., i T_{n-1})``.
    """
    return _from_rule(Ts, ctx, lambda r, c, n: ((c + r) % n, 1j if r + c > n - 1 else 1))


def slcirc_i(Ts, ctx=None) -> BlockMatrix:
    """Imaginary skew left circulant: as :func:`lcirc_i` with ``-i`` on wrapped blocks."""
    return _from_rule(Ts, ctx, lambda r, c, n: ((c + r) % n, -1j if r + c > n - 1 else 1))


def cross_diag(Ts, Ss, ctx=None, atol: float = 1e-12) -> BlockMatrix:
    """Cross-diagonal matrix: ``T_i`` at ``(i, i)`` and ``S_i`` at ``(i, n+1-i)``.

    For odd ``n`` the middle cell is shared, so ``T_(n+1)/2`` must equal
    ``S_(n+1)/2``.
    """
    if len(Ts) != len(Ss):
        raise DimensionMismatch(f"got {len(Ts)} diagonal and {len(Ss)} anti-diagonal blocks")
    T, ctx = _stack(Ts, ctx)
    S, _ = _stack(Ss, ctx)
    n, d = len(T), ctx.d
    if n % 2 == 1:
        c = n // 2
        if not np.allclose(T[c], S[c], rtol=0, atol=atol):
            raise CenterConflict("odd cross-diagonal matrix needs T_(n+1)/2 == S_(n+1)/2")
    out = np.zeros((n, n, d, d), dtype=np.complex128)
    for i in range(n):
        out[i, n - 1 - i] = S[i]
        out[i, i] = T[i]
    return BlockMatrix(out, ctx)


def block_diag(Ts, ctx=None) -> BlockMatrix:
    T, ctx = _stack(Ts, ctx)
    n, d = len(T), ctx.d
    out = np.zeros((n, n, d, d), dtype=np.complex128)
    for i in range(n):
        out[i, i] = T[i]
    return BlockMatrix(out, ctx)


def block_offdiag(Ts, ctx=None) -> BlockMatrix:
    """``T_i`` on the anti-diagonal at ``(i, n+1-i)``."""
    T, ctx = _stack(Ts, ctx)
    n, d = len(T), ctx.d
    out = np.zeros((n, n, d, d), dtype=np.complex128)
    for i in range(n):
        out[i, n - 1 - i] = T[i]
    return BlockMatrix(out, ctx)


def exchange_J(n: int, d: int | None = None, ctx: SemiContext | None = None) -> BlockMatrix:
    """``J = offdiag(I, ..., I)``."""
    if ctx is None:
        ctx = SemiContext.identity(d if d is not None else 1)
    return block_offdiag([np.eye(ctx.d)] * n, ctx)


def from_pattern(pattern: np.ndarray, ctx: SemiContext) -> BlockMatrix:
    """Kronecker lift ``pattern (x) I_d`` of a scalar ``n x n`` matrix."""
    pattern = as_cmatrix(pattern, "pattern")
    eye = np.eye(ctx.d)
    return BlockMatrix(pattern[:, :, None, None] * eye, ctx)


def dft_unitary(ctx: SemiContext, n: int) -> BlockMatrix:
    """Block Fourier matrix with ``(j, k)`` block ``omega^(jk) I / sqrt(n)``, ``omega = e^(2 pi i/n)``."""
    j, k = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return from_pattern(np.exp(2j * np.pi * j * k / n) / math.sqrt(n), ctx)


def skew_dft_unitary(ctx: SemiContext, n: int) -> BlockMatrix:
    """Rows ``(sigma omega^j)^(j+k) I / sqrt(n)`` built on the roots of ``z^n = -1``.

    ``sigma = e^(pi i/n)`` and ``omega = e^(2 pi i/n)``; ``j, k`` are 0-based.
    """
    sigma = cmath.exp(1j * math.pi / n)
    omega = cmath.exp(2j * math.pi / n)
    pattern = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        z = sigma * omega**j
        for k in range(n):
            pattern[j, k] = z ** (j + k)
    return from_pattern(pattern / math.sqrt(n), ctx)


def cross_permutation(n: int) -> list[int]:
    """The 1-based involution that pairs row ``i`` with row ``n+1-i`` into adjacent slots.

    Even ``n``: ``i`` for even ``i``, ``n - i`` for odd ``i``.  Odd ``n``
    switches the rule at ``(n+1)/2``.
    """
    half = (n + 1) / 2
    pi = []
    for i in range(1, n + 1):
        if n % 2 == 0:
            pi.append(i if i % 2 == 0 else n - i)
        elif i < half:
            pi.append(i if i % 2 == 0 else n - i)
        else:
            pi.append(n - i if i % 2 == 0 else i)
    return pi


def cross_permutation_unitary(ctx: SemiContext, n: int) -> BlockMatrix:
    """Block permutation with ``I`` at ``(i, pi(i))``, see :func:`cross_permutation`."""
    pattern = np.zeros((n, n))
    for i, j in enumerate(cross_permutation(n)):
        pattern[i, j - 1] = 1.0
    return from_pattern(pattern, ctx)


def corner_rotation_unitary(ctx: SemiContext, n: int) -> BlockMatrix:
    """``(1/sqrt 2) [[iI, I], [I, iI]]`` spread over the four corners, ``I`` in between."""
    if n == 1:
        return from_pattern(np.eye(1), ctx)
    pattern = np.eye(n, dtype=np.complex128)
    r = 1 / math.sqrt(2)
    pattern[0, 0] = pattern[-1, -1] = 1j * r
    pattern[0, -1] = pattern[-1, 0] = r
    return from_pattern(pattern, ctx)


def block_a_adjoint(M: BlockMatrix) -> BlockMatrix:
    """Blockwise A-adjoint: block ``(i, j)`` is ``(M_ji)^#``."""
    n, d = M.n, M.d
    out = np.zeros((n, n, d, d), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            out[i, j] = semi.a_adjoint(M.ctx, M.blocks[j, i], strict=True)
    return BlockMatrix(out, M.ctx)


def unitarity_defect(U: BlockMatrix) -> float:
    """``max(|U U^# - P|, |U^# U - P|)`` with ``P = diag(P_R(A), ...)``."""
    big = U.big_ctx
    F = U.flatten()
    Us = semi.a_adjoint(big, F)
    P = big.proj_R
    return float(max(np.max(np.abs(F @ Us - P)), np.max(np.abs(Us @ F - P))))


def lcirc_fourier_form(Ts, ctx=None) -> BlockMatrix:
    """Matrix with the same weighted numerical radius as ``lcirc(T_1..T_n)``.

    ``D_0 = sum T_i`` sits at ``(1, 1)`` and
    ``D_j = sum_i omega^(j(1-i)) T_i`` at ``(n+1-j, j+1)`` for ``j >= 1``.
    """
    T, ctx = _stack(Ts, ctx)
    n, d = len(T), ctx.d
    out = np.zeros((n, n, d, d), dtype=np.complex128)
    D = fourier_sums(T)
    out[0, 0] = D[0]
    for j in range(1, n):
        out[n - j, j] = D[j]
    return BlockMatrix(out, ctx)


def fourier_sums(Ts) -> np.ndarray:
    """``D_j = sum_{i=1}^n omega^(j(1-i)) T_i`` for ``j = 0..n-1``."""
    T = np.asarray(Ts, dtype=np.complex128)
    n = len(T)
    i = np.arange(n)
    coef = np.exp(-2j * np.pi * np.outer(np.arange(n), i) / n)
    return np.einsum("ji,ikl->jkl", coef, T)


def skew_fourier_sums(Ts) -> np.ndarray:
    """``E_j = sum_{i=1}^n (sigma omega^j)^(i+1) T_i`` for ``j = 0..n-1``."""
    T = np.asarray(Ts, dtype=np.complex128)
    n = len(T)
    sigma = cmath.exp(1j * math.pi / n)
    omega = cmath.exp(2j * math.pi / n)
    coef = np.array([[(sigma * omega**j) ** (i + 1) for i in range(1, n + 1)] for j in range(n)])
    return np.einsum("ji,ikl->jkl", coef, T)


def slcirc_fourier_form(Ts, ctx=None) -> BlockMatrix:
    """Anti-diagonal matrix with the same weighted numerical radius as ``slcirc``.

    Row ``j+1`` holds ``E_j`` (see :func:`skew_fourier_sums`) in column ``n-j``.
    """
    T, ctx = _stack(Ts, ctx)
    return block_offdiag(list(skew_fourier_sums(T)), ctx)


def shift_matrix(n: int) -> np.ndarray:
    """The ``n x n`` forward shift: ones on the subdiagonal."""
    return np.eye(n, k=-1, dtype=np.complex128)


def companion(P) -> BlockMatrix:
    """Block Frobenius companion matrix of a monic matrix polynomial.

    ``P`` is a :class:`~semiop.bounds.MatrixPolynomial` or a sequence
    ``[S_1, ..., S_n]`` for ``I z^n + S_n z^(n-1) + ... + S_1``.  The first
    block row is ``(-S_n, ..., -S_1)`` with identities on the subdiagonal.
    """
    coeffs = list(getattr(P, "coeffs", P))
    n = len(coeffs)
    if n < 2:
        raise DegreeTooSmall(f"companion matrix needs degree >= 2, got {n}")
    S, ctx = _stack(coeffs, None)
    d = ctx.d
    out = np.zeros((n, n, d, d), dtype=np.complex128)
    for c in range(n):
        out[0, c] = -S[n - 1 - c]
    for r in range(1, n):
        out[r, r - 1] = np.eye(d)
    return BlockMatrix(out, ctx)

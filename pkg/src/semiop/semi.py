"""Operators on a semi-Hilbert space ``(C^d, <A., .>)`` for a PSD weight ``A``.

All weighted quantities are computed through the reduction
``T -> A^{1/2} T (A^{1/2})^+``, which carries ``<Tx, x>_A`` to an ordinary
inner product on the range of ``A``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, NotAdmissible
from .linalg import (
    EigDecomp,
    PSDFactors,
    RadiusResult,
    angular_sup,
    as_cmatrix,
    numerical_radius,
    op_norm,
    psd_factors,
    spectral_radius_est,
    symmetrize,
)

log = logging.getLogger(__name__)

#: Tolerance for the structural predicates on unit-scaled data.
STRUCT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SemiContext:
    """A PSD weight together with its precomputed spectral factors."""

    A: np.ndarray
    eig: EigDecomp
    pinv_A: np.ndarray
    sqrt_A: np.ndarray
    pinv_sqrt_A: np.ndarray
    proj_R: np.ndarray
    rank: int
    rank_tol: float

    @classmethod
    def from_weight(cls, A, rank_tol: float | None = None) -> "SemiContext":
        A = symmetrize(as_cmatrix(A, "weight"))
        f = psd_factors(A, rank_tol)
        return cls._from_factors(A, f)

    @classmethod
    def identity(cls, d: int) -> "SemiContext":
        return cls.from_weight(np.eye(d))

    @classmethod
    def _from_factors(cls, A: np.ndarray, f: PSDFactors) -> "SemiContext":
        arrays = [A, f.eig.values, f.eig.vectors, f.pinv, f.sqrt, f.pinv_sqrt, f.proj]
        for arr in arrays:
            arr.setflags(write=False)
        return cls(A, f.eig, f.pinv, f.sqrt, f.pinv_sqrt, f.proj, f.rank, f.rank_tol)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def full_rank(self) -> bool:
        return self.rank == self.d

    @cached_property
    def _inflated(self) -> dict:
        return {}

    def inflate(self, n: int) -> "SemiContext":
        """The block-diagonal weight ``diag(A, ..., A)`` with ``n`` copies."""
        if n == 1:
            return self
        if n in self._inflated:
            return self._inflated[n]
        eye = np.eye(n)

        def kr(M):
            return np.kron(eye, M)

        vals = np.tile(self.eig.values, n)
        vecs = kr(self.eig.vectors)
        order = np.argsort(vals, kind="stable")
        f = PSDFactors(
            eig=EigDecomp(vals[order], vecs[:, order]),
            pinv=kr(self.pinv_A),
            sqrt=kr(self.sqrt_A),
            pinv_sqrt=kr(self.pinv_sqrt_A),
            proj=kr(self.proj_R),
            rank=n * self.rank,
            rank_tol=self.rank_tol,
        )
        big = SemiContext._from_factors(kr(self.A), f)
        self._inflated[n] = big
        return big

    @cached_property
    def complement(self) -> np.ndarray:
        """Projection onto the null space of ``A``."""
        return np.eye(self.d) - self.proj_R

    def check(self, T, name: str = "operator") -> np.ndarray:
        T = as_cmatrix(T, name)
        if T.shape != (self.d, self.d):
            raise DimensionMismatch(f"{name} has shape {T.shape}, weight is {self.d}x{self.d}")
        return T

    def vector(self, x, name: str = "vector") -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128).reshape(-1)
        if x.size != self.d:
            raise DimensionMismatch(f"{name} has length {x.size}, expected {self.d}")
        return x


def a_inner(ctx: SemiContext, x, y) -> complex:
    """``<x, y>_A = <Ax, y> = y* A x``."""
    x = ctx.vector(x, "x")
    y = ctx.vector(y, "y")
    return complex(np.vdot(y, ctx.A @ x))


def a_norm(ctx: SemiContext, x) -> float:
    x = ctx.vector(x)
    return math.sqrt(max(np.vdot(x, ctx.A @ x).real, 0.0))


def admits_a_adjoint(ctx: SemiContext, T) -> bool:
    """True iff ``R(T* A)`` lies in ``R(A)``, tested as ``(I - P) T* A = 0``."""
    T = ctx.check(T)
    TsA = T.conj().T @ ctx.A
    # measure against ||T|| ||A|| so rounding noise in a near-zero T*A is not flagged
    scale = np.linalg.norm(T) * np.linalg.norm(ctx.A)
    if scale == 0.0:
        return True
    resid = np.linalg.norm(ctx.complement @ TsA)
    return bool(resid <= max(ctx.rank_tol, 1e-12) * 1e2 * scale)


def a_adjoint(ctx: SemiContext, T, *, strict: bool = False) -> np.ndarray:
    """The distinguished A-adjoint ``A^+ T* A``.

    The formula is evaluated for any ``T``; when ``T`` has no A-adjoint a
    warning is logged, or :class:`NotAdmissible` raised if ``strict``.
    """
    T = ctx.check(T)
    if not admits_a_adjoint(ctx, T):
        if strict:
            raise NotAdmissible("operator does not admit an A-adjoint")
        log.warning("a_adjoint: R(T*A) is not contained in R(A); returning A^+ T* A anyway")
    return ctx.pinv_A @ T.conj().T @ ctx.A


def reduce(ctx: SemiContext, T) -> np.ndarray:
    """``A^{1/2} T (A^{1/2})^+``: the ordinary operator carrying the A-geometry of ``T``."""
    T = ctx.check(T)
    return ctx.sqrt_A @ T @ ctx.pinv_sqrt_A


def a_seminorm(ctx: SemiContext, T) -> float:
    """``||T||_A``, the operator seminorm induced by ``A``."""
    return op_norm(reduce(ctx, T))


def _witness(ctx: SemiContext, res: RadiusResult) -> np.ndarray:
    return ctx.pinv_sqrt_A @ res.witness


def a_numerical_radius(ctx: SemiContext, T, tol: float = 1e-10) -> RadiusResult:
    """``w_A(T) = sup{|<Tx, x>_A| : ||x||_A = 1}``.

    The witness is returned in original coordinates and lies in ``R(A)``.
    """
    res = numerical_radius(reduce(ctx, T), tol)
    return RadiusResult(
        value=res.value,
        theta_star=res.theta_star,
        witness=_witness(ctx, res),
        method="reduction",
        achieved_tol=res.achieved_tol,
    )


def w_a(ctx: SemiContext, T) -> float:
    """Shorthand for ``a_numerical_radius(ctx, T).value``."""
    return numerical_radius(reduce(ctx, T)).value


def re_a(ctx: SemiContext, T) -> np.ndarray:
    """A-real part ``(T + T^#)/2``; requires an A-adjoint."""
    T = ctx.check(T)
    return (T + a_adjoint(ctx, T, strict=True)) / 2


def im_a(ctx: SemiContext, T) -> np.ndarray:
    """A-imaginary part ``(T - T^#)/(2i)``; requires an A-adjoint."""
    T = ctx.check(T)
    return (T - a_adjoint(ctx, T, strict=True)) / 2j


def a_numerical_radius_zamani(ctx: SemiContext, T, tol: float = 1e-10) -> float:
    """``sup_t ||Re_A(e^{it} T)||_A``, an independent route to ``w_A``.

    ``Re_A(e^{it} T) = cos(t) Re_A(T) - sin(t) Im_A(T)``; both parts are
    A-selfadjoint, so the seminorm is the spectral norm of a Hermitian
    reduction and equals ``max(lambda_max, -lambda_min)``.
    """
    T = ctx.check(T)
    if not admits_a_adjoint(ctx, T):
        raise NotAdmissible("the real-part formula needs an operator with an A-adjoint")
    if ctx.rank == 0 or not np.any(T):
        return 0.0
    H0 = reduce(ctx, re_a(ctx, T))
    K = reduce(ctx, im_a(ctx, T))
    H0 = (H0 + H0.conj().T) / 2
    K = (K + K.conj().T) / 2
    # ||X|| = max(lambda_max(X), lambda_max(-X)), and -X(t) = X(t + pi)
    _, value = angular_sup(H0, K, width=min(tol, 1e-6))
    return max(value, 0.0)


def a_spectral_radius(ctx: SemiContext, T, steps: int = 40) -> float:
    """``r_A(T) = lim ||T^n||_A^(1/n)``."""
    return spectral_radius_est(reduce(ctx, T), steps)


def sampling_lower_bound(ctx: SemiContext, T, samples: int = 10_000, seed: int = 0) -> float:
    """``max |<Tx, x>_A|`` over random ``x`` normalised to ``||x||_A = 1``.

    A Monte-Carlo lower bound for ``w_A(T)`` that shares no code with the
    angle sweep.
    """
    T = ctx.check(T)
    if ctx.rank == 0:
        return 0.0
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((samples, ctx.d)) + 1j * rng.standard_normal((samples, ctx.d))
    AX = X @ ctx.A.T
    norms = np.einsum("ij,ij->i", X.conj(), AX).real
    ok = norms > 1e-12 * np.max(norms)
    X, AX, norms = X[ok], AX[ok], norms[ok]
    TX = X @ T.T
    vals = np.abs(np.einsum("ij,ij->i", AX.conj(), TX)) / norms
    return float(np.max(vals))


def is_a_selfadjoint(ctx: SemiContext, T, tol: float = STRUCT_TOL) -> bool:
    T = ctx.check(T)
    AT = ctx.A @ T
    return bool(np.max(np.abs(AT - AT.conj().T), initial=0.0) <= tol * max(1.0, np.max(np.abs(AT))))


def is_a_positive(ctx: SemiContext, T, tol: float = STRUCT_TOL) -> bool:
    T = ctx.check(T)
    if not is_a_selfadjoint(ctx, T, tol):
        return False
    AT = ctx.A @ T
    scale = max(1.0, op_norm(AT))
    return bool(np.linalg.eigvalsh((AT + AT.conj().T) / 2)[0] >= -tol * scale)


def is_a_unitary(ctx: SemiContext, U, tol: float = STRUCT_TOL) -> bool:
    """``||Ux||_A = ||U^# x||_A = ||x||_A`` for all ``x``.

    Checked as ``U* A U = A`` and ``(U^#)* A U^# = A``.
    """
    U = ctx.check(U)
    if not admits_a_adjoint(ctx, U):
        return False
    Us = a_adjoint(ctx, U)
    scale = max(1.0, np.max(np.abs(ctx.A)))
    r1 = np.max(np.abs(U.conj().T @ ctx.A @ U - ctx.A))
    r2 = np.max(np.abs(Us.conj().T @ ctx.A @ Us - ctx.A))
    return bool(max(r1, r2) <= tol * scale * 10)

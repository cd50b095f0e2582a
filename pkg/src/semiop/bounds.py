"""Eigenvalue bounds for monic matrix polynomials and two closed-form constants.

For ``P(z) = I z^n + S_n z^(n-1) + ... + S_2 z + S_1`` every eigenvalue
satisfies ``|lambda| <= rho(C(P)) <= w(C(P))`` where ``C(P)`` is the block
companion matrix; both bounds below estimate ``w(C(P))`` from the
coefficients alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegreeTooSmall, DimensionMismatch, NegativeNorm
from .linalg import as_cmatrix, numerical_radius, op_norm, spectral_radius_est
from .structured import companion


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """Monic ``I z^n + S_n z^(n-1) + ... + S_1``; ``coeffs`` is ``[S_1, ..., S_n]``."""

    coeffs: tuple[np.ndarray, ...]

    def __init__(self, coeffs: Sequence):
        mats = tuple(as_cmatrix(S, f"S_{k + 1}") for k, S in enumerate(coeffs))
        if not mats:
            raise DegreeTooSmall("a matrix polynomial needs at least one coefficient")
        d = mats[0].shape[0]
        for k, S in enumerate(mats):
            if S.shape != (d, d):
                raise DimensionMismatch(f"S_{k + 1} has shape {S.shape}, expected {(d, d)}")
            S.setflags(write=False)
        object.__setattr__(self, "coeffs", mats)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def dim(self) -> int:
        return self.coeffs[0].shape[0]

    def S(self, k: int) -> np.ndarray:
        """The 1-based coefficient ``S_k``."""
        return self.coeffs[k - 1]

    def __call__(self, z: complex) -> np.ndarray:
        out = np.eye(self.dim, dtype=np.complex128)
        for S in reversed(self.coeffs):
            out = out * z + S
        return out

    def companion(self) -> np.ndarray:
        return companion(self).flatten()


@dataclass(frozen=True)
class BoundReport:
    method: str
    bound: float
    components: dict = field(default_factory=dict)
    rho_check: float | None = None

    @property
    def holds(self) -> bool | None:
        if self.rho_check is None:
            return None
        return self.rho_check <= self.bound + 1e-6

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "bound": self.bound,
            "components": dict(self.components),
            "rho_check": self.rho_check,
            "rho_le_bound": self.holds,
        }


def _require_degree(P: MatrixPolynomial) -> None:
    if P.degree < 2:
        raise DegreeTooSmall(f"bound needs degree >= 2, got {P.degree}")


def _rho(P: MatrixPolynomial, rho_check: bool) -> float | None:
    return spectral_radius_est(P.companion()) if rho_check else None


def bound_thm53(P: MatrixPolynomial, rho_check: bool = False) -> BoundReport:
    """``(w(S_n) + sqrt(w(S_n)^2 + 4 w([[O, S_{n-1}], [I, O]])^2 + sum_{k<=n-2} ||S_k||^2)) / 2 + cos(pi/n)``."""
    _require_degree(P)
    n, d = P.degree, P.dim
    w_top = numerical_radius(P.S(n)).value
    corner = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    corner[:d, d:] = P.S(n - 1)
    corner[d:, :d] = np.eye(d)
    w_corner = numerical_radius(corner).value
    tail = sum(op_norm(P.S(k)) ** 2 for k in range(1, n - 1))
    cos_term = math.cos(math.pi / n)
    bound = 0.5 * (w_top + math.sqrt(w_top**2 + 4 * w_corner**2 + tail)) + cos_term
    comps = {"w_top": w_top, "w_corner": w_corner, "norm_sq_sum": tail, "cos_term": cos_term}
    return BoundReport("thm53", bound, comps, _rho(P, rho_check))


def bound_thm54(P: MatrixPolynomial, rho_check: bool = False) -> BoundReport:
    """``(w(S_n) + sqrt(w(S_n)^2 + sum_{k<=n-1} ||S_k||^2)) / 2 + cos(pi/(n+1))``."""
    _require_degree(P)
    n = P.degree
    w_top = numerical_radius(P.S(n)).value
    tail = sum(op_norm(P.S(k)) ** 2 for k in range(1, n))
    cos_term = math.cos(math.pi / (n + 1))
    bound = 0.5 * (w_top + math.sqrt(w_top**2 + tail)) + cos_term
    comps = {"w_top": w_top, "norm_sq_sum": tail, "cos_term": cos_term}
    return BoundReport("thm54", bound, comps, _rho(P, rho_check))


BOUNDS = {"thm53": bound_thm53, "thm54": bound_thm54}


def _nonneg(x: float, what: str) -> float:
    x = float(x)
    if not x >= 0:
        raise NegativeNorm(f"{what} must be nonnegative, got {x}")
    return x


def foguel_bound(hankel_norm: float) -> float:
    """``3/2 + sqrt(1 + x^2)/2``, a numerical radius bound for ``[[S*, X], [O, S]]`` with ``||X|| = x``."""
    x = _nonneg(hankel_norm, "hankel_norm")
    return 1.5 + 0.5 * math.sqrt(1.0 + x * x)


def hankel_symbol_bound() -> float:
    """Sup-norm of the symbol ``-i (pi - t) e^{-it}``, which dominates the Hankel operator norm."""
    return math.pi


def little_hankel_bound(phi_sup: float, n: int) -> float:
    """``(1 + sqrt(n)) / 2 * phi_sup``."""
    phi_sup = _nonneg(phi_sup, "phi_sup")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return (1.0 + math.sqrt(n)) / 2.0 * phi_sup


# ------------------------------------------------------------- desk checks

def foguel_desk_check(n: int = 64, trials: int = 100, seed: int = 0,
                      x_max: float = math.pi) -> list[tuple[float, float]]:
    """``(w([[S*, X], [O, S]]), foguel_bound(||X||))`` for the truncated shift ``S``.

    ``X`` is a random complex matrix rescaled to norm ``U(0, x_max)``.
    """
    rng = np.random.default_rng(seed)
    S = np.eye(n, k=-1, dtype=np.complex128)
    out = []
    M = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    M[:n, :n] = S.conj().T
    M[n:, n:] = S
    for _ in range(trials):
        X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        X *= rng.uniform(0.0, x_max) / op_norm(X)
        M[:n, n:] = X
        out.append((numerical_radius(M).value, foguel_bound(op_norm(X))))
    return out


def little_hankel_desk_check(n: int = 2, d: int = 4, trials: int = 50, seed: int = 0,
                             phi_sup: float = 1.0) -> list[tuple[float, float]]:
    """``(w(M), little_hankel_bound(phi_sup, n))`` where ``M`` has first block row ``(B, ..., B)``.

    ``B`` is random with ``||B|| <= phi_sup``; all other blocks vanish.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        B = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        B *= rng.uniform(0.0, phi_sup) / op_norm(B)
        M = np.zeros((n * d, n * d), dtype=np.complex128)
        for k in range(n):
            M[:d, k * d:(k + 1) * d] = B
        out.append((numerical_radius(M).value, little_hankel_bound(phi_sup, n)))
    return out


def random_polynomial(degree: int, d: int, seed) -> MatrixPolynomial:
    rng = np.random.default_rng(seed)
    return MatrixPolynomial([rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
                             for _ in range(degree)])


#: The 3x3 example: ``S_3 = 0``, ``S_2 = J + I``, ``S_1 = J + 3I`` with ``J`` the all-ones matrix.
EXAMPLE_POLY = MatrixPolynomial([
    [[4, 1, 1], [1, 4, 1], [1, 1, 4]],
    [[2, 1, 1], [1, 2, 1], [1, 1, 2]],
    np.zeros((3, 3)),
])

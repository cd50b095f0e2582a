"""Dense complex linear algebra used by the weighted-operator code.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
The Hermitian eigensolver is a cyclic Jacobi method with complex rotations;
the numerical radius is found by maximising ``lambda_max(Re(e^{i t} M))``
over the angle ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD

EPS = np.finfo(float).eps

#: Relative tolerance below which ``M - M*`` is treated as rounding noise.
HERMITIAN_TOL = 1e-10
#: Relative tolerance below which a negative eigenvalue is clamped to zero.
PSD_TOL = 1e-10
#: Default relative cut-off for the numerical rank of a PSD matrix.
RANK_TOL = 1e-12

GRID_POINTS = 720
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def as_cmatrix(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a finite 2-D ``complex128`` array."""
    arr = np.array(M, dtype=np.complex128, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _require_square(M: np.ndarray, name: str = "matrix") -> int:
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {M.shape}")
    return M.shape[0]


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


def symmetrize(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Check that ``M`` is Hermitian up to ``tol`` (relative, max-norm) and
    return ``(M + M*)/2``."""
    M = as_cmatrix(M)
    _require_square(M)
    scale = np.max(np.abs(M)) if M.size else 0.0
    skew = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if skew > tol * max(scale, 1e-300):
        raise NotHermitian(f"matrix is not Hermitian (max |M - M*| = {skew:.3e})")
    return hermitian_part(M)


@dataclass(frozen=True)
class EigDecomp:
    """Eigenvalues in ascending order and orthonormal eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.vectors
        return (V * self.values) @ V.conj().T


def hermitian_eig(M, tol: float = 1e-13, max_sweeps: int = 100) -> EigDecomp:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Sweeps stop once the off-diagonal Frobenius mass drops below
    ``tol * ||M||_F``.

    Raises
    ------
    NotHermitian
        If ``M`` is not Hermitian within :data:`HERMITIAN_TOL`.
    NoConvergence
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    a = symmetrize(M)
    n = a.shape[0]
    V = np.eye(n, dtype=np.complex128)
    norm_f = np.linalg.norm(a)
    if n <= 1 or norm_f == 0.0:
        return EigDecomp(np.real(np.diag(a)).copy(), V)

    target = tol * norm_f
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a[off_mask]) ** 2)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag < EPS * 1e-3 * norm_f:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # J = [[c, s*phase], [-s*conj(phase), c]] on the (p, q) plane
                j = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                cols = a[:, [p, q]] @ j
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = j.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vc = V[:, [p, q]] @ j
                V[:, p], V[:, q] = vc[:, 0], vc[:, 1]
    else:
        off = math.sqrt(float(np.sum(np.abs(a[off_mask]) ** 2)))
        if off > target:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    return EigDecomp(values[order].copy(), V[:, order].copy())


@dataclass(frozen=True)
class PSDFactors:
    """Spectral data of a PSD matrix: everything a weighted context needs."""

    eig: EigDecomp
    pinv: np.ndarray
    sqrt: np.ndarray
    pinv_sqrt: np.ndarray
    proj: np.ndarray
    rank: int
    rank_tol: float


def psd_factors(M, rank_tol: float | None = None) -> PSDFactors:
    """Pseudoinverse, square root and range projection of a PSD matrix.

    Eigenvalues below ``rank_tol * lambda_max`` count as zero.  The default
    ``rank_tol`` is :data:`RANK_TOL`.
    """
    eig = hermitian_eig(M)
    lam = eig.values
    n = lam.size
    lam_max = float(np.max(np.abs(lam))) if n else 0.0
    if n and lam[0] < -PSD_TOL * max(lam_max, 1e-300):
        raise NotPSD(f"matrix has a negative eigenvalue {lam[0]:.3e}")
    rtol = RANK_TOL if rank_tol is None else float(rank_tol)
    keep = lam > rtol * lam_max if lam_max > 0 else np.zeros(n, dtype=bool)
    lam = np.where(keep, lam, 0.0)
    V = eig.vectors
    inv = np.zeros(n)
    inv[keep] = 1.0 / lam[keep]
    root = np.sqrt(lam)
    inv_root = np.zeros(n)
    inv_root[keep] = 1.0 / root[keep]
    Vk = V[:, keep]
    return PSDFactors(
        eig=EigDecomp(lam, V),
        pinv=(V * inv) @ V.conj().T,
        sqrt=(V * root) @ V.conj().T,
        pinv_sqrt=(V * inv_root) @ V.conj().T,
        proj=Vk @ Vk.conj().T,
        rank=int(np.count_nonzero(keep)),
        rank_tol=rtol,
    )


def pinv(M, rank_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse of a Hermitian PSD matrix."""
    return psd_factors(M, rank_tol).pinv


def psd_sqrt(M) -> np.ndarray:
    """The unique PSD square root of a Hermitian PSD matrix."""
    return psd_factors(M).sqrt


def op_norm(M) -> float:
    """Spectral norm, i.e. ``sqrt(lambda_max(M* M))``."""
    M = np.asarray(M, dtype=np.complex128)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def lambda_max(H: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(H)[-1])


def golden_section_max(f, a: float, b: float, width: float = 1e-10):
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


@dataclass(frozen=True)
class RadiusResult:
    """A numerical radius together with the angle and vector attaining it."""

    value: float
    theta_star: float
    witness: np.ndarray
    method: str = "theta-sweep"
    achieved_tol: float = 0.0
    cross_checks: dict = field(default_factory=dict)


def _sweep_lambda_max(H0: np.ndarray, K: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    n = H0.shape[0]
    out = np.empty(thetas.size)
    # keep each batched eigvalsh call around 16 MB
    chunk = max(1, int(2**20 // max(n * n, 1)))
    for start in range(0, thetas.size, chunk):
        th = thetas[start:start + chunk]
        stack = np.cos(th)[:, None, None] * H0 - np.sin(th)[:, None, None] * K
        out[start:start + chunk] = np.linalg.eigvalsh(stack)[:, -1]
    return out


def angular_sup(H0: np.ndarray, K: np.ndarray, grid: int = GRID_POINTS,
                width: float = 1e-10, refine: int = 3):
    """Maximise ``lambda_max(cos(t) H0 - sin(t) K)`` over ``t`` in ``[0, 2 pi)``.

    A uniform grid locates the candidate peaks; the ``refine`` highest local
    maxima are polished by golden-section search.  Returns ``(t*, value)``.
    """
    thetas = 2.0 * np.pi * np.arange(grid) / grid
    vals = _sweep_lambda_max(H0, K, thetas)
    step = 2.0 * np.pi / grid
    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    if peaks.size == 0:
        peaks = np.array([int(np.argmax(vals))])
    peaks = peaks[np.argsort(-vals[peaks], kind="stable")][:refine]

    def f(t):
        return lambda_max(math.cos(t) * H0 - math.sin(t) * K)

    best_t, best_v = float(thetas[peaks[0]]), float(vals[peaks[0]])
    for k in peaks:
        t, v = golden_section_max(f, thetas[k] - step, thetas[k] + step, width)
        if v > best_v:
            best_t, best_v = t, v
    return best_t % (2.0 * np.pi), best_v


def numerical_radius(M, tol: float = 1e-10) -> RadiusResult:
    """Classical numerical radius ``w(M) = sup |<Mx, x>|`` over unit ``x``.

    Uses ``w(M) = max_t lambda_max(Re(e^{it} M))``.  The witness is the top
    eigenvector at the optimal angle, so ``|<M x, x>|`` reproduces the value.
    """
    M = as_cmatrix(M)
    n = _require_square(M)
    if not np.any(M):
        e = np.zeros(n, dtype=np.complex128)
        e[0] = 1.0
        return RadiusResult(0.0, 0.0, e, "theta-sweep", 0.0)
    H0 = hermitian_part(M)
    K = (M - M.conj().T) / 2j
    theta, value = angular_sup(H0, K, width=min(tol, 1e-6))
    if not math.isfinite(value):
        raise NoConvergence("numerical radius sweep produced a non-finite value")
    _, vecs = np.linalg.eigh(math.cos(theta) * H0 - math.sin(theta) * K)
    x = vecs[:, -1]
    attained = abs(np.vdot(x, M @ x))
    value = max(value, 0.0)
    return RadiusResult(value, theta, x, "theta-sweep", max(tol, abs(value - attained)))


def spectral_radius_est(M, steps: int = 40) -> float:
    """Estimate ``max |eig(M)|`` as ``min_k ||M^(2^k)||^(1/2^k)``, ``k <= steps``.

    Each term is an upper bound for the spectral radius and the sequence
    converges to it.  Powers are normalised at every squaring so that
    nothing overflows; a power that becomes exactly zero gives 0.
    """
    M = as_cmatrix(M)
    _require_square(M)
    B = M.copy()
    log_scale = 0.0  # M^(2^k) = exp(log_scale) * B
    best = math.inf
    for k in range(steps + 1):
        nb = op_norm(B)
        if nb == 0.0:
            return 0.0
        best = min(best, math.exp((log_scale + math.log(nb)) / 2.0**k))
        if k == steps:
            break
        B = B / nb
        log_scale = 2.0 * (log_scale + math.log(nb))
        B = B @ B
    return best


def power_iteration_radius(M, iters: int = 2000, seed: int = 0) -> float:
    """Geometric-mean growth rate of ``||M^k x||`` for a random start vector.

    Independent cross-check for :func:`spectral_radius_est`; converges slowly
    when several eigenvalues share the top modulus.
    """
    M = as_cmatrix(M)
    n = _require_square(M)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    log_growth = 0.0
    burn = iters // 2
    for k in range(iters):
        x = M @ x
        nx = np.linalg.norm(x)
        if nx == 0.0:
            return 0.0
        x /= nx
        if k >= burn:
            log_growth += math.log(nx)
    return math.exp(log_growth / (iters - burn))

"""Small-dimension symmetric linear algebra and the ball-constrained quadratic solver.

Everything here works on dense matrices of dimension at most a few dozen. The
ball-constrained minimizer solves

    min_{||nu|| <= S}  nu^T A nu - 2 b^T nu

for symmetric, possibly indefinite ``A`` through an eigendecomposition and the secular
equation ``||(A + mu I)^{-1} b|| = S``. A batched variant solves many problems sharing a
dimension at once, which is what the grid policies need every round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from .config import get_settings
from .errors import DimensionMismatchError, NonFiniteInputError, SolverConvergenceError
from .logging_config import get_logger

logger = get_logger()

FloatArray = NDArray[np.float64]

TRS_TOL = 1e-10
TRS_MAX_ITER = 200


@dataclass(frozen=True)
class SymMatrix:
    """Dense symmetric real matrix, symmetrized as (A + A^T)/2 on construction."""

    entries: FloatArray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatchError(f"Expected a square matrix, got shape {arr.shape}")
        arr = 0.5 * (arr + arr.T)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def identity(cls, dim: int) -> SymMatrix:
        return cls(np.eye(dim))

    @classmethod
    def zeros(cls, dim: int) -> SymMatrix:
        return cls(np.zeros((dim, dim)))

    @classmethod
    def diag(cls, values: ArrayLike) -> SymMatrix:
        return cls(np.diag(np.asarray(values, dtype=np.float64)))

    def __add__(self, other: SymMatrix) -> SymMatrix:
        _check_same_dim(self, other)
        return SymMatrix(self.entries + other.entries)

    def __sub__(self, other: SymMatrix) -> SymMatrix:
        _check_same_dim(self, other)
        return SymMatrix(self.entries - other.entries)

    def __mul__(self, scalar: float) -> SymMatrix:
        return SymMatrix(self.entries * float(scalar))

    __rmul__ = __mul__

    def to_list(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.entries]


MatrixLike = Union[SymMatrix, ArrayLike]


@dataclass(frozen=True)
class EigenDecomp:
    """Eigenvalues in ascending order and the matching orthonormal eigenvector columns."""

    eigenvalues: FloatArray
    eigenvectors: FloatArray

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def reconstruct(self) -> FloatArray:
        q = self.eigenvectors
        return np.asarray((q * self.eigenvalues) @ q.T, dtype=np.float64)


def as_array(A: MatrixLike) -> FloatArray:
    """Return the symmetric entries of ``A`` as a float array."""
    if isinstance(A, SymMatrix):
        return A.entries
    return SymMatrix(np.asarray(A, dtype=np.float64)).entries


def _check_same_dim(A: SymMatrix, B: SymMatrix) -> None:
    if A.dim != B.dim:
        raise DimensionMismatchError(f"Matrix dimensions differ: {A.dim} vs {B.dim}")


def _check_finite(name: str, value: NDArray[np.float64]) -> None:
    if not np.all(np.isfinite(value)):
        raise NonFiniteInputError(f"{name} contains non-finite entries")


def quad_form(A: MatrixLike, x: ArrayLike) -> float:
    """Quadratic form x^T A x.

    Raises:
        DimensionMismatchError: If ``x`` does not match the dimension of ``A``.
    """
    mat = as_array(A)
    vec = np.asarray(x, dtype=np.float64).reshape(-1)
    if vec.shape[0] != mat.shape[0]:
        raise DimensionMismatchError(
            f"Vector of length {vec.shape[0]} does not match matrix dimension {mat.shape[0]}"
        )
    return float(vec @ mat @ vec)


def sym_eigen(A: MatrixLike) -> EigenDecomp:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    Raises:
        NonFiniteInputError: If ``A`` has NaN or infinite entries.
    """
    mat = np.asarray(A.entries if isinstance(A, SymMatrix) else A, dtype=np.float64)
    _check_finite("matrix", mat)
    mat = as_array(mat)
    eigenvalues, eigenvectors = linalg.eigh(mat)
    return EigenDecomp(
        eigenvalues=np.asarray(eigenvalues, dtype=np.float64),
        eigenvectors=np.asarray(eigenvectors, dtype=np.float64),
    )


def min_eigenvalue(A: MatrixLike) -> float:
    return sym_eigen(A).min_eigenvalue


def is_psd(A: MatrixLike, tol: float | None = None) -> bool:
    """Whether every eigenvalue of ``A`` is at least ``-tol``, by default the configured ``psd_tol``."""
    if tol is None:
        tol = get_settings().psd_tol
    return min_eigenvalue(A) >= -tol


def loewner_leq(A: MatrixLike, B: MatrixLike, tol: float = 0.0) -> bool:
    """Loewner order test: True iff lambda_min(B - A) >= -tol.

    Raises:
        DimensionMismatchError: If the matrices differ in dimension.
    """
    a = as_array(A)
    b = as_array(B)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Matrix dimensions differ: {a.shape[0]} vs {b.shape[0]}")
    return min_eigenvalue(b - a) >= -tol


def psd_factor(A: MatrixLike) -> FloatArray:
    """Return L with L L^T = A, clamping negative eigenvalue dust to zero."""
    decomp = sym_eigen(A)
    root = np.sqrt(np.clip(decomp.eigenvalues, 0.0, None))
    return np.asarray(decomp.eigenvectors * root, dtype=np.float64)


def quadratic_objective(A: ArrayLike, b: ArrayLike, nu: ArrayLike) -> FloatArray:
    """Evaluate nu^T A nu - 2 b^T nu row-wise for stacked problems."""
    mats = np.asarray(A, dtype=np.float64)
    vecs = np.asarray(nu, dtype=np.float64)
    lin = np.asarray(b, dtype=np.float64)
    if mats.ndim == 2:
        mats = mats[None]
    if vecs.ndim == 1:
        vecs = vecs[None]
    lin = np.broadcast_to(lin, vecs.shape)
    quad = np.einsum("mi,mij,mj->m", vecs, mats, vecs)
    return np.asarray(quad - 2.0 * np.einsum("mi,mi->m", lin, vecs), dtype=np.float64)


def min_quadratic_on_ball(
    A: MatrixLike,
    b: ArrayLike,
    S: float,
    tol: float = TRS_TOL,
    max_iter: int = TRS_MAX_ITER,
) -> FloatArray:
    """Minimize nu^T A nu - 2 b^T nu over the ball ||nu|| <= S.

    ``A`` may be indefinite. Interior solutions are returned directly; boundary solutions
    come from the secular equation, and the hard case (``b`` orthogonal to the bottom
    eigenspace) is completed with a bottom-eigenvector component.

    Args:
        A: Symmetric matrix of the quadratic term.
        b: Linear coefficient vector.
        S: Ball radius, must be positive.
        tol: Tolerance on the norm residual of the secular equation.
        max_iter: Maximum number of bisection steps.

    Returns:
        The minimizer as a float vector.

    Raises:
        NonFiniteInputError: On NaN or infinite inputs.
        DimensionMismatchError: If ``b`` does not match ``A``.
        SolverConvergenceError: If no feasible minimizer could be produced.
    """
    mat = np.asarray(A.entries if isinstance(A, SymMatrix) else A, dtype=np.float64)
    vec = np.asarray(b, dtype=np.float64).reshape(-1)
    if mat.ndim != 2 or vec.shape[0] != mat.shape[0]:
        raise DimensionMismatchError(
            f"Linear term of length {vec.shape[0]} does not match matrix shape {mat.shape}"
        )
    return min_quadratic_on_ball_batch(mat[None], vec[None], S, tol=tol, max_iter=max_iter)[0]


def min_quadratic_on_ball_batch(
    A: ArrayLike,
    b: ArrayLike,
    S: float,
    tol: float = TRS_TOL,
    max_iter: int = TRS_MAX_ITER,
) -> FloatArray:
    """Batched :func:`min_quadratic_on_ball` over stacked problems.

    Args:
        A: Array of shape (m, d, d).
        b: Array of shape (m, d) or (d,), broadcast over the batch.
        S: Common ball radius.
        tol: Secular-equation norm tolerance.
        max_iter: Maximum bisection steps.

    Returns:
        Array of shape (m, d) of minimizers.
    """
    mats = np.asarray(A, dtype=np.float64)
    if mats.ndim == 2:
        mats = mats[None]
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise DimensionMismatchError(f"Expected stacked square matrices, got shape {mats.shape}")
    m, d, _ = mats.shape
    vecs = np.asarray(b, dtype=np.float64)
    if vecs.shape[-1] != d:
        raise DimensionMismatchError(f"Linear term of length {vecs.shape[-1]} does not match {d}")
    vecs = np.broadcast_to(vecs, (m, d))
    _check_finite("matrix", mats)
    _check_finite("linear term", vecs)
    if not np.isfinite(S) or S <= 0:
        raise NonFiniteInputError(f"Ball radius must be positive and finite, got {S}")
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")

    mats = 0.5 * (mats + np.swapaxes(mats, 1, 2))
    eigenvalues, eigenvectors = np.linalg.eigh(mats)
    w = np.einsum("mji,mj->mi", eigenvectors, vecs)
    coef = _ball_coefficients(eigenvalues, w, float(S), tol, max_iter)
    nu = np.einsum("mij,mj->mi", eigenvectors, coef)

    norms = np.linalg.norm(nu, axis=1)
    bad = ~np.all(np.isfinite(nu), axis=1) | (norms > S + tol)
    if np.any(bad):
        first = int(np.flatnonzero(bad)[0])
        best = nu[first]
        if np.all(np.isfinite(best)) and norms[first] > 0:
            best = best * (S / norms[first])
        raise SolverConvergenceError(
            f"Ball-constrained solver failed for problem {first} (norm {norms[first]:.6g}, radius {S})",
            best_iterate=best,
            arm=first,
        )
    return np.asarray(nu, dtype=np.float64)


def _ball_coefficients(
    lam: FloatArray, w: FloatArray, S: float, tol: float, max_iter: int
) -> FloatArray:
    """Solve in the eigenbasis: returns coefficients of the minimizer per problem."""
    m, d = lam.shape
    scale = np.maximum(1.0, np.abs(lam).max(axis=1))
    eps = 1e-12 * scale
    lam_min = lam[:, 0]
    w_norm = np.linalg.norm(w, axis=1)
    coef = np.zeros_like(w)

    # interior: strictly positive definite with the unconstrained minimizer in the ball
    pd = lam_min > eps
    safe = np.where(pd[:, None], lam, 1.0)
    free = np.where(pd[:, None], w / safe, 0.0)
    interior = pd & (np.linalg.norm(free, axis=1) <= S)
    coef[interior] = free[interior]

    # hard case: singular or indefinite, no mass on the bottom eigenspace
    mu_floor = np.maximum(0.0, -lam_min)
    bottom = lam <= (lam_min + eps)[:, None]
    shifted = lam + mu_floor[:, None]
    rest = np.divide(w, shifted, out=np.zeros_like(w), where=~bottom & (shifted > 0))
    rest_norm = np.linalg.norm(rest, axis=1)
    bottom_mass = np.linalg.norm(np.where(bottom, w, 0.0), axis=1)
    hard = ~pd & (bottom_mass <= 1e-12 * np.maximum(1.0, w_norm)) & (rest_norm <= S)
    if np.any(hard):
        coef[hard] = rest[hard]
        reach = hard & (lam_min < -eps)
        tau = np.sqrt(np.clip(S**2 - rest_norm**2, 0.0, None))
        coef[reach, 0] += tau[reach]
        logger.debug(f"Ball solver hard case on {int(hard.sum())} of {m} problems")

    active = ~(interior | hard)
    if not np.any(active):
        return coef

    idx = np.flatnonzero(active)
    lam_a = lam[idx]
    w_a = w[idx]
    lo = mu_floor[idx].copy()
    hi = lo + w_norm[idx] / S
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        denom = lam_a + mid[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            nrm = np.linalg.norm(
                np.divide(w_a, denom, out=np.full_like(w_a, np.inf), where=denom > 0), axis=1
            )
        outside = nrm > S
        lo = np.where(outside, mid, lo)
        hi = np.where(outside, hi, mid)
        denom_hi = lam_a + hi[:, None]
        hi_norm = np.linalg.norm(
            np.divide(w_a, denom_hi, out=np.zeros_like(w_a), where=denom_hi > 0), axis=1
        )
        if np.all(np.abs(hi_norm - S) <= tol):
            break

    denom_hi = lam_a + hi[:, None]
    sol = np.divide(w_a, denom_hi, out=np.zeros_like(w_a), where=denom_hi > 0)
    sol_norm = np.linalg.norm(sol, axis=1)
    short = S - sol_norm > tol
    if np.any(short):
        # near-hard case: the root sits at the pole, finish along the bottom eigenvector
        first = sol[short, 0]
        sign = np.where(w_a[short, 0] < 0, -1.0, 1.0)
        tau = -np.abs(first) + np.sqrt(first**2 + np.clip(S**2 - sol_norm[short] ** 2, 0.0, None))
        sol[short, 0] = first + sign * tau
        logger.debug(f"Ball solver completed {int(short.sum())} near-hard problems")
    coef[idx] = sol
    return coef

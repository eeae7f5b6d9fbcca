"""Weighted inner products, adjoints, simplex Laplace operators, Fourier bases.

The n-Laplace operator acts on n-signals over the standard simplex. With
``P_n`` the boundary matrix of dimension n and ``W_n`` the diagonal matrix of
positive simplex weights, the default assembly is

    L_up   = P_{n+1} W_{n+1}^{-1} P_{n+1}^T W_n      (zero for n = N)
    L_down = W_n^{-1} P_n^T W_{n-1} P_n              (zero for n = 0)

which is the unique matrix of the operator "boundary of the weighted adjoint
plus weighted adjoint of the boundary": ``W_n L_n`` is symmetric, so L_n is
self-adjoint for the weighted inner product and diagonalizable with real
non-negative spectrum. The Fourier basis is obtained by whitening with
``W^(1/2)`` and running a symmetric eigensolver, which yields w-orthonormal
eigenvectors by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, NumericalError, ValidationError
from .simplices import StructuralSimplex, boundary_matrix, simplex_count

# Dense eigendecomposition cap; larger dimensions fail fast instead of thrashing.
DENSE_DIMENSION_CAP = 5000

DEFAULT_KERNEL_TOLERANCE = 1e-8

# Relative threshold under which a tiny negative eigenvalue is treated as zero.
EIGENVALUE_NOISE_TOLERANCE = 1e-10


@dataclass(frozen=True)
class WeightedInnerProduct:
    """Diagonal inner product <x, y> = sum_i w_i x_i y_i on n-signals."""

    dimension: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValidationError("weights must be a non-empty vector")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValidationError("inner-product weights must be finite and > 0")
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.weights.size

    def pairing(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.dot(np.asarray(x) * self.weights, np.asarray(y)))

    def norm_squared(self, x: np.ndarray) -> float:
        return self.pairing(x, x)


def weighted_inner_product(simplex: StructuralSimplex, n: int) -> WeightedInnerProduct:
    return WeightedInnerProduct(dimension=n, weights=simplex.weight_vector(n))


@dataclass(frozen=True)
class LaplaceOperator:
    """Dense n-Laplace matrix with its up and down components kept separately."""

    dimension: int
    matrix: np.ndarray
    up: np.ndarray
    down: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralDiagnostics:
    """Residuals emitted alongside every Fourier basis, for auditability."""

    self_adjointness: float
    diagonalization: float
    orthonormality: float
    inversion: float

    def to_jsonable(self) -> dict:
        return {
            "self_adjointness": self.self_adjointness,
            "diagonalization": self.diagonalization,
            "orthonormality": self.orthonormality,
            "inversion": self.inversion,
        }


@dataclass(frozen=True)
class FourierBasis:
    """Eigenvalues plus the forward/inverse change-of-basis matrices.

    The columns of ``inverse`` are the eigenvectors, orthonormal for the
    weighted inner product: inverse^T W inverse = I. ``forward @ inverse`` is
    the identity, and ``forward @ L @ inverse`` is diagonal.
    """

    dimension: int
    eigenvalues: np.ndarray
    forward: np.ndarray
    inverse: np.ndarray
    weights: np.ndarray
    diagnostics: SpectralDiagnostics


def _check_spectral_dim(simplex: StructuralSimplex, n: int) -> int:
    d = simplex_count(simplex.N, n)
    if d > DENSE_DIMENSION_CAP:
        raise CapacityError(
            f"dimension n={n} has {d} simplices, above the dense cap {DENSE_DIMENSION_CAP}"
        )
    return d


def adjoint_matrix(simplex: StructuralSimplex, n: int) -> np.ndarray:
    """Matrix of the weighted adjoint of the (n+1)-boundary, mapping n-signals up.

    Equals ``W_{n+1}^{-1} P_{n+1}^T W_n`` and satisfies
    <P_{n+1} a, b>_{w_n} = <a, adjoint b>_{w_{n+1}} for all vectors a, b.
    """
    if not 0 <= n < simplex.N:
        raise ValidationError(f"adjoint needs 0 <= n < N, got n={n}, N={simplex.N}")
    _check_spectral_dim(simplex, n + 1)
    P = boundary_matrix(simplex.N, n + 1)
    w_n = simplex.weight_vector(n)
    w_up = simplex.weight_vector(n + 1)
    return (P.T.toarray() * w_n[None, :]) / w_up[:, None]


def laplacian(
    simplex: StructuralSimplex,
    n: int,
    formula: Literal["adjoint", "alternate"] = "adjoint",
) -> LaplaceOperator:
    """Assemble the dense n-Laplace operator of a structural simplex.

    ``formula='adjoint'`` (default) is the self-consistent assembly described
    in the module docstring. ``formula='alternate'`` swaps the placement of
    the weight and inverse-weight matrices (up = W_n^{-1} P_{n+1} W_{n+1}
    P_{n+1}^T, down = P_n^T W_{n-1}^{-1} P_n W_n); it is also self-adjoint for
    the weighted inner product and is retained for comparison runs only, with
    no claim of equivalence.
    """
    N = simplex.N
    if not 0 <= n <= N:
        raise ValidationError(f"simplex dimension n={n} out of range [0, {N}]")
    if formula not in ("adjoint", "alternate"):
        raise ValidationError(f"unknown laplacian formula {formula!r}")
    d = _check_spectral_dim(simplex, n)
    w_n = simplex.weight_vector(n)

    up = np.zeros((d, d))
    if n < N:
        P = boundary_matrix(N, n + 1)
        w_up = simplex.weight_vector(n + 1)
        if formula == "adjoint":
            up = (P @ sp.diags(1.0 / w_up) @ P.T).toarray() * w_n[None, :]
        else:
            up = (P @ sp.diags(w_up) @ P.T).toarray() / w_n[:, None]

    down = np.zeros((d, d))
    if n > 0:
        P = boundary_matrix(N, n)
        w_dn = simplex.weight_vector(n - 1)
        if formula == "adjoint":
            down = (P.T @ sp.diags(w_dn) @ P).toarray() / w_n[:, None]
        else:
            down = (P.T @ sp.diags(1.0 / w_dn) @ P).toarray() * w_n[None, :]

    return LaplaceOperator(dimension=n, matrix=up + down, up=up, down=down)


def self_adjointness_residual(operator: LaplaceOperator, inner: WeightedInnerProduct) -> float:
    """Relative asymmetry of W L, which vanishes exactly for a self-adjoint L."""
    WL = inner.weights[:, None] * operator.matrix
    denom = np.linalg.norm(WL)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(WL - WL.T) / denom)


def fourier_basis(operator: LaplaceOperator, inner: WeightedInnerProduct) -> FourierBasis:
    """Diagonalize the Laplace operator into a w-orthonormal eigenbasis.

    The whitened matrix ``W^(1/2) L W^(-1/2)`` is symmetric, so a symmetric
    eigensolver applies; eigenvalues come out real and ascending, and the
    eigenvector sign is fixed so each one's first nonzero component in the
    canonical order is positive.
    """
    if operator.dimension != inner.dimension:
        raise ValidationError(
            f"operator dimension {operator.dimension} != inner-product dimension {inner.dimension}"
        )
    L = operator.matrix
    w = inner.weights
    if L.shape != (w.size, w.size):
        raise ValidationError(f"shape mismatch: L is {L.shape}, weights have {w.size} entries")
    if w.size > DENSE_DIMENSION_CAP:
        raise CapacityError(f"{w.size} components exceed the dense cap {DENSE_DIMENSION_CAP}")

    root = np.sqrt(w)
    sym = (L * root[:, None]) / root[None, :]
    sym = (sym + sym.T) / 2.0
    try:
        eigenvalues, Q = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc

    scale = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    floor = -EIGENVALUE_NOISE_TOLERANCE * scale
    if np.any(eigenvalues < floor):
        raise NumericalError(
            f"negative eigenvalue {eigenvalues.min():.3e} below the noise floor {floor:.3e}"
        )
    eigenvalues = np.where(eigenvalues < 0.0, 0.0, eigenvalues)

    inverse = Q / root[:, None]
    for j in range(inverse.shape[1]):
        col = inverse[:, j]
        nonzero = np.nonzero(np.abs(col) > 1e-12 * np.max(np.abs(col)))[0]
        if nonzero.size and col[nonzero[0]] < 0:
            Q[:, j] = -Q[:, j]
            inverse[:, j] = -col
    forward = Q.T * root[None, :]

    diag = forward @ L @ inverse
    denom = max(float(np.linalg.norm(L)), np.finfo(float).tiny)
    diag_res = float(np.linalg.norm(diag - np.diag(eigenvalues)) / denom)
    orth_res = float(np.max(np.abs(inverse.T @ (w[:, None] * inverse) - np.eye(w.size))))
    inv_res = float(np.max(np.abs(forward @ inverse - np.eye(w.size))))
    diagnostics = SpectralDiagnostics(
        self_adjointness=self_adjointness_residual(operator, inner),
        diagonalization=diag_res,
        orthonormality=orth_res,
        inversion=inv_res,
    )
    return FourierBasis(
        dimension=operator.dimension,
        eigenvalues=eigenvalues,
        forward=forward,
        inverse=inverse,
        weights=w,
        diagnostics=diagnostics,
    )


def kernel_dimension(eigenvalues: np.ndarray, tol: float = DEFAULT_KERNEL_TOLERANCE) -> int:
    """Count eigenvalues below ``tol * max(eigenvalues)``; all, if the matrix is zero."""
    lam = np.asarray(eigenvalues, dtype=float)
    top = float(lam.max(initial=0.0))
    if top <= 0.0:
        return lam.size
    return int(np.count_nonzero(lam < tol * top))

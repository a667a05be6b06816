"""Complex Hermitian linear algebra: spectral decomposition, functional
calculus, operator means, Löwner-order tests, and seeded random generation of
positive definite matrices.

All values are immutable after construction (backing arrays are frozen) and
all operations are pure functions; RNG state lives in explicit seed
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EigenDecompositionError,
    EigenvalueFloorError,
)

EIG_FLOOR = 1e-12
HERMITICITY_TOL = 1e-12
CONDITION_CAP = 1e6


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def hermitian_part(M: np.ndarray) -> np.ndarray:
    """(M + M^*)/2, the projection onto the Hermitian matrices."""
    return (M + M.conj().T) / 2.0


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """An n x n complex Hermitian matrix, re-symmetrized on construction."""

    entries: np.ndarray
    _spectral: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        M = np.asarray(self.entries, dtype=np.complex128)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
            raise DimensionMismatchError(f"expected a square matrix, got shape {M.shape}")
        drift = np.abs(M - M.conj().T).max()
        if drift > 1e-8:
            raise ValueError(f"matrix is not Hermitian (asymmetry {drift:.3e})")
        object.__setattr__(self, "entries", _freeze(hermitian_part(M)))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def spectrum(self) -> "SpectralDecomposition":
        """Spectral decomposition, computed once and cached."""
        if not self._spectral:
            self._spectral.append(eigh(self))
        return self._spectral[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in ascending order and the diagonalizing unitary."""

    eigenvalues: np.ndarray
    unitary: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _freeze(np.asarray(self.eigenvalues, dtype=np.float64)))
        object.__setattr__(self, "unitary", _freeze(np.asarray(self.unitary, dtype=np.complex128)))

    def reconstruct(self) -> np.ndarray:
        U = self.unitary
        return hermitian_part((U * self.eigenvalues) @ U.conj().T)


@dataclass(frozen=True, eq=False)
class PDMatrix:
    """A Hermitian matrix together with a positivity certificate."""

    matrix: HermitianMatrix
    min_eig: float

    @classmethod
    def from_hermitian(cls, H: HermitianMatrix) -> "PDMatrix":
        lam = float(H.spectrum().eigenvalues[0])
        if lam <= 0.0:
            raise EigenvalueFloorError(lam, 0.0, "not positive definite")
        return cls(H, lam)

    @classmethod
    def from_array(cls, M) -> "PDMatrix":
        return cls.from_hermitian(HermitianMatrix(M))

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.entries

    def spectrum(self) -> SpectralDecomposition:
        return self.matrix.spectrum()

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def eigh(H: HermitianMatrix) -> SpectralDecomposition:
    """Spectral decomposition with ascending eigenvalues.

    Deterministic for a fixed input; wraps LAPACK non-convergence in a
    diagnostic naming the matrix norm and dimension.
    """
    M = H.entries if isinstance(H, HermitianMatrix) else np.asarray(H)
    try:
        w, U = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError(
            f"eigh failed to converge for dim {M.shape[0]}, "
            f"Frobenius norm {np.linalg.norm(M):.6e}: {exc}") from exc
    return SpectralDecomposition(w, U)


def func_calc(A: PDMatrix, fn: Callable[[np.ndarray], np.ndarray]) -> HermitianMatrix:
    """Apply a scalar function on (0, inf) through the spectral decomposition.

    fn receives the ascending eigenvalue array and must return the mapped
    array.  Eigenvalues at or below EIG_FLOOR are rejected, not clamped.
    """
    dec = A.spectrum()
    w = dec.eigenvalues
    if w[0] <= EIG_FLOOR:
        raise EigenvalueFloorError(float(w[0]), EIG_FLOOR, "functional calculus domain")
    y = np.asarray(fn(w), dtype=np.complex128)
    U = dec.unitary
    return HermitianMatrix((U * y) @ U.conj().T)


def trace(H, normalized: bool = False) -> float:
    """Sum of diagonal real parts; divided by the dimension when normalized."""
    M = np.asarray(H)
    t = float(np.trace(M).real)
    return t / M.shape[0] if normalized else t


def mean_arith(A: PDMatrix, B: PDMatrix) -> PDMatrix:
    """Arithmetic operator mean (A + B)/2."""
    if A.dim != B.dim:
        raise DimensionMismatchError(f"dims {A.dim} and {B.dim} differ")
    return PDMatrix.from_array((A.entries + B.entries) / 2.0)


def mean_harm(A: PDMatrix, B: PDMatrix) -> PDMatrix:
    """Harmonic operator mean 2(A^{-1} + B^{-1})^{-1}."""
    if A.dim != B.dim:
        raise DimensionMismatchError(f"dims {A.dim} and {B.dim} differ")
    Ai = func_calc(A, lambda w: 1.0 / w).entries
    Bi = func_calc(B, lambda w: 1.0 / w).entries
    S = PDMatrix.from_array(Ai + Bi)
    return PDMatrix.from_array(2.0 * func_calc(S, lambda w: 1.0 / w).entries)


def inv(A: PDMatrix) -> PDMatrix:
    return PDMatrix.from_array(func_calc(A, lambda w: 1.0 / w).entries)


def sqrtm_pd(A: PDMatrix) -> PDMatrix:
    return PDMatrix.from_array(func_calc(A, np.sqrt).entries)


def loewner_leq(A, B, tol: float = 0.0) -> bool:
    """A <= B in the Löwner order, up to -tol on the smallest eigenvalue."""
    Ma, Mb = np.asarray(A), np.asarray(B)
    if Ma.shape != Mb.shape:
        raise DimensionMismatchError(f"shapes {Ma.shape} and {Mb.shape} differ")
    gap = np.linalg.eigvalsh(hermitian_part(Mb - Ma))[0]
    return bool(gap >= -tol)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish unitary from QR of a complex Gaussian, phase-fixed."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pd(n: int, seed, eig_range: tuple[float, float] = (0.1, 10.0)) -> PDMatrix:
    """Seeded random PD matrix with log-uniform spectrum in eig_range.

    seed may be an integer or an existing numpy Generator.  Deterministic per
    (n, seed, eig_range).
    """
    lo, hi = float(eig_range[0]), float(eig_range[1])
    if not (0.0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got ({lo}, {hi})")
    if hi / lo > CONDITION_CAP:
        raise ValueError(f"eig_range condition {hi / lo:.3e} exceeds cap {CONDITION_CAP:.1e}")
    rng = _as_rng(seed)
    Q = random_unitary(n, rng)
    lam = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    H = HermitianMatrix((Q * lam) @ Q.conj().T)
    return PDMatrix(H, float(H.spectrum().eigenvalues[0]))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> HermitianMatrix:
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianMatrix(scale * hermitian_part(G))


def identity_pd(n: int) -> PDMatrix:
    return PDMatrix(HermitianMatrix(np.eye(n, dtype=np.complex128)), 1.0)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent per-trial stream from a splittable counter construction."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))

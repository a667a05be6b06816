"""Strictly positive linear maps M_m(C) -> M_k(C) in Kraus form
Phi(X) = sum_i C_i^* X C_i, with seeded sampling, unital normalization, and a
strict-positivity certificate min_eig(Phi(I)) > 1e-8.

The certificate suffices for Kraus-form maps: Phi(X) >= lam_min(X) Phi(I)
for PD X, so a strictly positive Phi(I) pushes the whole PD cone into the
PD cone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, PositivityCertificateError
from .matcore import HermitianMatrix, hermitian_part

CERTIFICATE_FLOOR = 1e-8
_MAX_RESAMPLE = 16


@dataclass(frozen=True, eq=False)
class PositiveMap:
    """Kraus operators stacked as a (q, m, k) complex array."""

    kraus: np.ndarray

    def __post_init__(self):
        K = np.asarray(self.kraus, dtype=np.complex128)
        if K.ndim != 3 or K.shape[0] < 1:
            raise ValueError(f"expected a nonempty (q, m, k) Kraus stack, got shape {K.shape}")
        K = np.ascontiguousarray(K)
        K.flags.writeable = False
        object.__setattr__(self, "kraus", K)
        if self.certificate() <= CERTIFICATE_FLOOR:
            raise PositivityCertificateError(
                f"Phi(I) has min eigenvalue {self.certificate():.3e} "
                f"<= {CERTIFICATE_FLOOR:.1e}; map is not certifiably strictly positive")

    @property
    def in_dim(self) -> int:
        return self.kraus.shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus.shape[2]

    def on_identity(self) -> np.ndarray:
        """Phi(I_m) = sum_i C_i^* C_i."""
        K = self.kraus
        return hermitian_part(np.einsum("qij,qil->jl", K.conj(), K))

    def certificate(self) -> float:
        return float(np.linalg.eigvalsh(self.on_identity())[0])

    def is_unital(self, tol: float = 1e-10) -> bool:
        return bool(np.linalg.norm(self.on_identity() - np.eye(self.out_dim)) <= tol)


def identity_map(n: int) -> PositiveMap:
    return PositiveMap(np.eye(n, dtype=np.complex128)[None, :, :])


def apply(pmap: PositiveMap, X) -> HermitianMatrix:
    """Phi(X) = sum_i C_i^* X C_i, re-symmetrized."""
    M = np.asarray(X, dtype=np.complex128)
    if M.shape != (pmap.in_dim, pmap.in_dim):
        raise DimensionMismatchError(
            f"map expects a {pmap.in_dim}x{pmap.in_dim} input, got {M.shape}")
    K = pmap.kraus
    out = np.einsum("qja,jl,qlb->ab", K.conj(), M, K)
    return HermitianMatrix(hermitian_part(out))


def random_map(m: int, k: int, num_kraus: int, seed) -> PositiveMap:
    """Seeded complex Gaussian Kraus operators, rescaled so ||Phi(I)|| = 1.

    Requires num_kraus * m >= k, otherwise Phi(I) is structurally rank
    deficient.  Resamples up to 16 times if the certificate fails.
    """
    if num_kraus < 1:
        raise ValueError("need at least one Kraus operator")
    if num_kraus * m < k:
        raise ValueError(
            f"num_kraus*m = {num_kraus * m} < k = {k}: Phi(I) cannot be full rank")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    for _ in range(_MAX_RESAMPLE):
        K = (rng.standard_normal((num_kraus, m, k))
             + 1j * rng.standard_normal((num_kraus, m, k)))
        phi_id = hermitian_part(np.einsum("qij,qil->jl", K.conj(), K))
        w = np.linalg.eigvalsh(phi_id)
        K = K / np.sqrt(w[-1])
        if w[0] / w[-1] > CERTIFICATE_FLOOR:
            return PositiveMap(K)
    raise PositivityCertificateError(
        f"no certifiably strictly positive map after {_MAX_RESAMPLE} resamples "
        f"(m={m}, k={k}, num_kraus={num_kraus})")


def normalize_unital(pmap: PositiveMap) -> PositiveMap:
    """Right-multiply the Kraus operators by Phi(I)^{-1/2} so Phi(I) = I."""
    w, U = np.linalg.eigh(pmap.on_identity())
    root_inv = (U * (w ** -0.5)) @ U.conj().T
    return PositiveMap(pmap.kraus @ root_inv)

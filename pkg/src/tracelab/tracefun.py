"""Two-variable trace functionals and the variational trace formula.

The central object is the functional

    (A, B) -> Tr h( Phi(f(A))^{1/2} Psi(g(B)) Phi(f(A))^{1/2} )

together with its inverse-form rewrite -Tr t(h)(A'^{-1/2} B'^{-1} A'^{-1/2}),
the variational identity Tr h(A) = inf_B Tr(AB - conj(h)(B)) evaluated both by
a scalar-duality oracle and by projected gradient descent over the PD cone,
and the rewritten Z-objective the convexity proof pivots on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import matcore, posmap, scalarfun
from .errors import (ConvergenceError, DimensionMismatchError,
                     EigenvalueFloorError, SpecValidationError)
from .matcore import EIG_FLOOR, HermitianMatrix, PDMatrix, hermitian_part
from .scalarfun import ScalarFunction, TransformedFunction, breve, check, tilde

PGD_FLOOR = 1e-8


@dataclass(frozen=True, eq=False)
class FunctionalSpec:
    """The tuple (h, f, g, Phi, Psi) defining a trace functional, plus the
    convexity direction being claimed and the trace normalization."""

    h: ScalarFunction
    f: ScalarFunction
    g: ScalarFunction
    phi: posmap.PositiveMap
    psi: posmap.PositiveMap
    mode: str  # "convex" | "concave"
    normalized: bool = False

    def __post_init__(self):
        if self.mode not in ("convex", "concave"):
            raise ValueError(f"mode must be 'convex' or 'concave', got {self.mode!r}")
        if self.phi.out_dim != self.psi.out_dim:
            raise DimensionMismatchError(
                f"maps disagree on output dim: {self.phi.out_dim} vs {self.psi.out_dim}")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.phi.in_dim, self.psi.in_dim, self.phi.out_dim


def _numeric_or(prop_value, numeric_check):
    return numeric_check() if prop_value is None else prop_value


def _certify_monotone_family(fn: ScalarFunction, decreasing: bool) -> bool:
    """Numeric certificate: positivity on a grid plus the Löwner PSD test of
    fn (or -fn) on three independent point sets."""
    grid = np.exp(np.linspace(np.log(1e-3), np.log(1e3), 61))
    if fn.eval_array(grid).min() <= 0:
        return False
    probe = fn.negate() if decreasing else fn
    points = ([0.5, 1.0, 2.0, 4.0], [0.1, 0.9, 3.0, 7.5, 20.0],
              [0.02, 0.2, 1.3, 11.0, 80.0, 300.0])
    return all(scalarfun.loewner_monotonicity_oracle(probe, p) for p in points)


def spec_problems(spec: FunctionalSpec, samples: int = 2000, seed: int = 0) -> list[str]:
    """All hypothesis failures of the spec's mode, empty when valid."""
    problems = []
    h = spec.h
    if h.prop("nondecreasing") is False:
        problems.append("h must be nondecreasing (nonincreasing h is unsupported)")
    if spec.mode == "convex":
        th = tilde(h)
        if not _numeric_or(th.prop("concave"), lambda: scalarfun.is_concave_numeric(th)):
            problems.append("reflection of h is not concave")
        if h.prop("prod_zero") is False:
            problems.append("x*h(x) does not vanish as x -> 0")
        try:
            hb = breve(h)
            if not scalarfun.satisfies_eq1(hb.as_scalar_function(), samples, seed):
                problems.append("breve-conjugate of h violates the mean inequality chain")
        except ValueError as exc:
            problems.append(f"breve-conjugate of h undefined: {exc}")
        for name, fn in (("f", spec.f), ("g", spec.g)):
            ok = _numeric_or(fn.positive_operator_monotone_decreasing,
                             lambda fn=fn: _certify_monotone_family(fn, decreasing=True))
            if not ok:
                problems.append(f"{name} is not positive operator monotone decreasing")
    else:
        if not _numeric_or(h.prop("concave"), lambda: scalarfun.is_concave_numeric(h)):
            problems.append("h is not concave")
        if h.prop("ratio_zero") is False:
            problems.append("h(x)/x does not vanish as x -> infinity")
        try:
            hc = check(h)
            if not scalarfun.satisfies_eq1(hc.as_scalar_function(), samples, seed):
                problems.append("conjugate of h violates the mean inequality chain")
        except ValueError as exc:
            problems.append(f"conjugate of h undefined: {exc}")
        for name, fn in (("f", spec.f), ("g", spec.g)):
            ok = _numeric_or(fn.positive_operator_monotone,
                             lambda fn=fn: _certify_monotone_family(fn, decreasing=False))
            if not ok:
                problems.append(f"{name} is not positive operator monotone")
    return problems


def validate_spec(spec: FunctionalSpec, samples: int = 2000, seed: int = 0) -> None:
    problems = spec_problems(spec, samples, seed)
    if problems:
        raise SpecValidationError(problems)


def trace_fn(M: HermitianMatrix | PDMatrix, fn, normalized: bool = False) -> float:
    """Tr fn(M) through the spectrum, rejecting eigenvalues at the floor."""
    w = M.spectrum().eigenvalues
    if w[0] <= EIG_FLOOR:
        raise EigenvalueFloorError(float(w[0]), EIG_FLOOR, "trace functional argument")
    v = float(np.sum(fn.eval_array(w)))
    return v / w.shape[0] if normalized else v


def primed(spec: FunctionalSpec, A: PDMatrix, B: PDMatrix) -> tuple[PDMatrix, PDMatrix]:
    """(Phi(f(A)), Psi(g(B))) as certified PD matrices."""
    if A.dim != spec.phi.in_dim or B.dim != spec.psi.in_dim:
        raise DimensionMismatchError(
            f"inputs ({A.dim}, {B.dim}) do not match map domains "
            f"({spec.phi.in_dim}, {spec.psi.in_dim})")
    Ap = PDMatrix.from_hermitian(posmap.apply(spec.phi, matcore.func_calc(A, spec.f.eval_array)))
    Bp = PDMatrix.from_hermitian(posmap.apply(spec.psi, matcore.func_calc(B, spec.g.eval_array)))
    return Ap, Bp


def core_functional(spec: FunctionalSpec, A: PDMatrix, B: PDMatrix) -> float:
    """Tr h(Phi(f(A))^{1/2} Psi(g(B)) Phi(f(A))^{1/2})."""
    Ap, Bp = primed(spec, A, B)
    S = matcore.func_calc(Ap, np.sqrt).entries
    M = PDMatrix.from_array(S @ Bp.entries @ S)
    return trace_fn(M, spec.h, spec.normalized)


def inverse_form(spec: FunctionalSpec, A: PDMatrix, B: PDMatrix) -> float:
    """-Tr t(h)(A'^{-1/2} B'^{-1} A'^{-1/2}); equals core_functional by the
    spectral reflection identity."""
    Ap, Bp = primed(spec, A, B)
    Si = matcore.func_calc(Ap, lambda w: w ** -0.5).entries
    Bi = matcore.func_calc(Bp, lambda w: 1.0 / w).entries
    M = PDMatrix.from_array(Si @ Bi @ Si)
    return -trace_fn(M, tilde(spec.h), spec.normalized)


# -- variational formula -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VariationalResult:
    """Outcome of a PD-cone minimization; gap_vs_oracle measures agreement
    with the scalar-duality value (near-optimality is not attainment)."""

    value: float
    minimizer: PDMatrix
    iterations: int
    gap_vs_oracle: float
    converged: bool
    grad_norm: float


@dataclass(frozen=True)
class PgdOptions:
    max_iter: int = 500
    rel_tol: float = 1e-10
    armijo_c: float = 1e-4
    step0: float = 1.0
    init: str = "stationary"  # or "identity"
    floor: float = PGD_FLOOR
    fd_step: float = 1e-6
    gap_tol: float = 1e-6


def _conjugate_scalar(h: ScalarFunction) -> ScalarFunction:
    return check(h).as_scalar_function()


def spectral_gradient(B, fn, fd_step: float = 1e-6) -> np.ndarray:
    """Gradient of X -> Tr fn(X) at Hermitian PD B: fn'(B) with the derivative
    taken by central differences per eigenvalue (step fd_step * lambda)."""
    w, U = np.linalg.eigh(np.asarray(B))
    e = fd_step * w
    d = (fn.eval_array(w + e) - fn.eval_array(w - e)) / (2.0 * e)
    return hermitian_part((U * d) @ U.conj().T)


def _project_psd(M: np.ndarray, floor: float) -> np.ndarray:
    w, U = np.linalg.eigh(hermitian_part(M))
    w = np.maximum(w, floor)
    return hermitian_part((U * w) @ U.conj().T)


def _pgd_minimize(C: np.ndarray, fn: ScalarFunction, L: Optional[np.ndarray],
                  X0: np.ndarray, opts: PgdOptions):
    """Minimize Tr(C X) - Tr fn(L X L) over PD X (L Hermitian; None = I).

    Returns (value, X, iterations, converged, grad_norm).
    """

    def inner(X):
        M = X if L is None else hermitian_part(L @ X @ L)
        return M

    def objective(X):
        w = np.linalg.eigvalsh(inner(X))
        if w[0] <= 0.0:
            return math.inf
        return float(np.trace(C @ X).real) - float(np.sum(fn.eval_array(w)))

    def gradient(X):
        D = spectral_gradient(inner(X), fn, opts.fd_step)
        if L is not None:
            D = hermitian_part(L @ D @ L)
        return hermitian_part(C - D)

    X = _project_psd(X0, opts.floor)
    val = objective(X)
    it = 0
    grad_norm = math.inf
    converged = False
    while it < opts.max_iter:
        G = gradient(X)
        grad_norm = float(np.linalg.norm(G))
        if grad_norm < 1e-14:
            converged = True
            break
        alpha = opts.step0
        new_val, new_X = math.inf, X
        while alpha > 1e-18:
            cand = _project_psd(X - alpha * G, opts.floor)
            cand_val = objective(cand)
            if cand_val <= val - opts.armijo_c * alpha * grad_norm ** 2:
                new_val, new_X = cand_val, cand
                break
            alpha /= 2.0
        it += 1
        if not math.isfinite(new_val) or new_val >= val - opts.rel_tol * (1.0 + abs(val)):
            X = new_X if new_val < val else X
            val = min(val, new_val)
            converged = True
            break
        X, val = new_X, new_val
    return val, X, it, converged, grad_norm


def trace_h_variational_oracle(h: ScalarFunction, A: PDMatrix, tol: float = 1e-10) -> float:
    """Tr h(A) through scalar duality: the infimum restricted to matrices
    commuting with A splits into per-eigenvalue conjugates
    inf_b (lam*b - conj(h)(b)), which biconjugation sends back to h(lam)."""
    hc = _conjugate_scalar(h)
    total = 0.0
    for lam in A.spectrum().eigenvalues:
        res = scalarfun.legendre_numeric(hc, float(lam), tol=tol, validate=False)
        if res.boundary:
            raise ValueError(
                f"scalar dual hit the domain boundary at eigenvalue {lam:.6e}; "
                "the conjugate's limit assumptions fail here")
        total += res.value
    return total


def _stationary_init(h: ScalarFunction, A: PDMatrix) -> np.ndarray:
    """Commuting initial point: per eigenvalue of A, the scalar minimizer of
    b -> lam*b - conj(h)(b)."""
    hc = _conjugate_scalar(h)
    dec = A.spectrum()
    bs = np.array([scalarfun.legendre_numeric(hc, float(lam), validate=False).minimizer
                   for lam in dec.eigenvalues])
    U = dec.unitary
    return hermitian_part((U * bs) @ U.conj().T)


def trace_h_variational_pgd(h: ScalarFunction, A: PDMatrix,
                            opts: PgdOptions = PgdOptions()) -> VariationalResult:
    """Minimize G(B) = Tr(AB - conj(h)(B)) over the PD cone by projected
    gradient descent with Armijo backtracking; independently confirms the
    scalar-duality value."""
    hc = _conjugate_scalar(h)
    if opts.init == "stationary":
        B0 = _stationary_init(h, A)
    elif opts.init == "identity":
        B0 = np.eye(A.dim, dtype=np.complex128)
    else:
        raise ValueError(f"unknown init {opts.init!r}")
    val, B, it, converged, grad_norm = _pgd_minimize(A.entries, hc, None, B0, opts)
    oracle = trace_h_variational_oracle(h, A)
    gap = abs(val - oracle)
    if not converged and gap > opts.gap_tol * (1.0 + abs(oracle)):
        raise ConvergenceError(
            f"projected gradient stalled after {it} iterations: "
            f"objective {val:.9e}, oracle {oracle:.9e}, gap {gap:.3e}, "
            f"final gradient norm {grad_norm:.3e}")
    return VariationalResult(val, PDMatrix.from_array(B), it, gap, converged, grad_norm)


# -- the rewritten Z-objective ---------------------------------------------------

def variational_objective_Z(spec: FunctionalSpec, A: PDMatrix, B: PDMatrix,
                            Z: PDMatrix) -> float:
    """J(Z) = Tr(Z^{1/2} B'^{-1} Z^{1/2} - breve(h)(Z^{1/2} A' Z^{1/2}))."""
    if spec.mode != "convex":
        raise SpecValidationError(["the rewritten objective belongs to convex mode"])
    Ap, Bp = primed(spec, A, B)
    if Z.dim != Ap.dim:
        raise DimensionMismatchError(f"Z has dim {Z.dim}, expected {Ap.dim}")
    hb = breve(spec.h).as_scalar_function()
    R = matcore.func_calc(Z, np.sqrt).entries
    Bi = matcore.func_calc(Bp, lambda w: 1.0 / w).entries
    term1 = float(np.trace(R @ Bi @ R).real)
    M = PDMatrix.from_array(R @ Ap.entries @ R)
    return term1 - trace_fn(M, hb)


def minimize_objective_Z(spec: FunctionalSpec, A: PDMatrix, B: PDMatrix,
                         opts: PgdOptions = PgdOptions()) -> VariationalResult:
    """inf_Z J(Z) by PGD; the oracle it is checked against is the reflected
    trace value Tr t(h)(A'^{-1/2} B'^{-1} A'^{-1/2}) the identity promises."""
    Ap, Bp = primed(spec, A, B)
    hb = breve(spec.h).as_scalar_function()
    S = matcore.func_calc(Ap, np.sqrt).entries
    Si = matcore.func_calc(Ap, lambda w: w ** -0.5).entries
    Bi = matcore.func_calc(Bp, lambda w: 1.0 / w).entries
    C = PDMatrix.from_array(hermitian_part(Si @ Bi @ Si))
    oracle = trace_fn(C, tilde(spec.h))
    if opts.init == "stationary":
        # commuting optimum of Tr(CW) - Tr hb(W), pulled back through Z = A'^{-1/2} W A'^{-1/2}
        W0 = _stationary_init_from_conjugate(hb, C)
        Z0 = hermitian_part(Si @ W0 @ Si)
    else:
        Z0 = np.eye(Ap.dim, dtype=np.complex128)
    val, Z, it, converged, grad_norm = _pgd_minimize(Bi, hb, S, Z0, opts)
    gap = abs(val - oracle)
    if not converged and gap > opts.gap_tol * (1.0 + abs(oracle)):
        raise ConvergenceError(
            f"Z-objective descent stalled after {it} iterations: value {val:.9e}, "
            f"oracle {oracle:.9e}, final gradient norm {grad_norm:.3e}")
    Zpd = PDMatrix.from_array(Z)
    return VariationalResult(variational_objective_Z(spec, A, B, Zpd), Zpd, it,
                             gap, converged, grad_norm)


def _stationary_init_from_conjugate(conj_fn: ScalarFunction, C: PDMatrix) -> np.ndarray:
    dec = C.spectrum()
    bs = np.array([scalarfun.legendre_numeric(conj_fn, float(lam), validate=False).minimizer
                   for lam in dec.eigenvalues])
    U = dec.unitary
    return hermitian_part((U * bs) @ U.conj().T)

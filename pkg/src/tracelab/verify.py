"""Randomized property suites for the convexity/concavity theorems, the
supporting propositions, and the sharpness counterexample search.

Every trial draws its own RNG stream from (suite seed, trial index), so a
report is identical however the trials are scheduled.  Suites route through
the kernel backend when all functions are encodable, otherwise through the
object-level functional evaluation; witnesses are serialized in hex floats
and replay bit-exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels, matcore, posmap, scalarfun, tracefun
from .errors import EigenvalueFloorError, SpecValidationError
from .matcore import EIG_FLOOR, PDMatrix, hermitian_part, trial_rng
from .report import TrialReport, complex_matrix_from_hex, complex_matrix_to_hex
from .scalarfun import ScalarFunction, TransformedFunction, tilde
from .tracefun import FunctionalSpec

DEFAULT_TOL = 1e-9
REL_SLACK = 1e-7


@dataclass(frozen=True)
class TrialConfig:
    """Shared knobs of a randomized suite; spec is required by the joint
    suites and ignored by the rest."""

    spec: Optional[FunctionalSpec] = None
    trials: int = 1000
    seed: int = 0
    tol: float = DEFAULT_TOL
    eig_range: tuple = (0.1, 10.0)
    dims: Optional[tuple] = None  # (m, n, k) where a suite needs them
    validate: bool = True
    route: str = "core"  # or "inverse" for the joint suites
    rel_slack: float = REL_SLACK

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")
        if self.route not in ("core", "inverse"):
            raise ValueError(f"route must be 'core' or 'inverse', got {self.route!r}")


def _sample_pair_stacks(dim: int, trials: int, seed: int, eig_range):
    A1 = np.empty((trials, dim, dim), dtype=np.complex128)
    A2 = np.empty((trials, dim, dim), dtype=np.complex128)
    for i in range(trials):
        rng = trial_rng(seed, i)
        A1[i] = matcore.random_pd(dim, rng, eig_range).entries
        A2[i] = matcore.random_pd(dim, rng, eig_range).entries
    return A1, A2


def _sample_joint(m: int, n: int, trials: int, seed: int, eig_range):
    A1 = np.empty((trials, m, m), dtype=np.complex128)
    A2 = np.empty((trials, m, m), dtype=np.complex128)
    B1 = np.empty((trials, n, n), dtype=np.complex128)
    B2 = np.empty((trials, n, n), dtype=np.complex128)
    for i in range(trials):
        rng = trial_rng(seed, i)
        A1[i] = matcore.random_pd(m, rng, eig_range).entries
        A2[i] = matcore.random_pd(m, rng, eig_range).entries
        B1[i] = matcore.random_pd(n, rng, eig_range).entries
        B2[i] = matcore.random_pd(n, rng, eig_range).entries
    return A1, A2, B1, B2


def _raise_floor(suite: str, status: np.ndarray):
    bad = int(np.nonzero(status)[0][0])
    raise EigenvalueFloorError(0.0, EIG_FLOOR,
                               f"{suite}: trial {bad} left the functional-calculus domain")


def _effective_violations(gaps, scales, tol, rel_slack):
    thresholds = np.maximum(tol, rel_slack * np.abs(scales))
    return int(np.sum(gaps < -thresholds))


def _joint_encodings(spec: FunctionalSpec, route: str):
    encs = [spec.f.encode(), spec.g.encode(), spec.h.encode(), tilde(spec.h).encode()]
    if any(e is None for e in encs[:3]):
        return None
    if route == "inverse" and encs[3] is None:
        return None
    if encs[3] is None:
        encs[3] = encs[2]  # unused placeholder on the core route
    return encs


def _joint_gaps_python(spec, A1, A2, B1, B2, route):
    evaluate = tracefun.inverse_form if route == "inverse" else tracefun.core_functional
    trials = A1.shape[0]
    gaps = np.empty(trials)
    scales = np.empty(trials)
    sign = -1.0 if spec.mode == "concave" else 1.0
    for t in range(trials):
        v1 = evaluate(spec, PDMatrix.from_array(A1[t]), PDMatrix.from_array(B1[t]))
        v2 = evaluate(spec, PDMatrix.from_array(A2[t]), PDMatrix.from_array(B2[t]))
        vm = evaluate(spec, PDMatrix.from_array((A1[t] + A2[t]) / 2),
                      PDMatrix.from_array((B1[t] + B2[t]) / 2))
        mean = (v1 + v2) / 2.0
        gaps[t] = sign * (mean - vm)
        scales[t] = abs(mean)
    return gaps, scales


def _run_joint(cfg: TrialConfig, suite: str) -> TrialReport:
    t0 = time.perf_counter()
    spec = cfg.spec
    if spec is None:
        raise SpecValidationError([f"{suite} needs cfg.spec"])
    m, n, _ = spec.dims
    if cfg.dims is not None and tuple(cfg.dims[:2]) != (m, n):
        raise SpecValidationError(
            [f"cfg dims {cfg.dims} disagree with map domains ({m}, {n})"])
    if cfg.validate:
        tracefun.validate_spec(spec)
    A1, A2, B1, B2 = _sample_joint(m, n, cfg.trials, cfg.seed, cfg.eig_range)
    encs = _joint_encodings(spec, cfg.route)
    if encs is not None:
        gaps, scales, status = kernels.joint_gaps(
            A1, B1, A2, B2, spec.phi.kraus, spec.psi.kraus, *encs,
            1 if cfg.route == "inverse" else 0,
            spec.mode == "concave", spec.normalized, EIG_FLOOR)
        if status.any():
            _raise_floor(suite, status)
    else:
        gaps, scales = _joint_gaps_python(spec, A1, A2, B1, B2, cfg.route)
    worst = int(np.argmin(gaps))
    witness = {
        "kind": suite,
        "trial": worst,
        "gap": float(gaps[worst]),
        "inputs": {
            "A1": complex_matrix_to_hex(A1[worst]),
            "A2": complex_matrix_to_hex(A2[worst]),
            "B1": complex_matrix_to_hex(B1[worst]),
            "B2": complex_matrix_to_hex(B2[worst]),
        },
    }
    return TrialReport(
        suite=suite,
        trials=cfg.trials,
        violations=_effective_violations(gaps, scales, cfg.tol, cfg.rel_slack),
        min_gap=float(gaps[worst]),
        worst_witness=witness,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        seed=cfg.seed,
        tol=cfg.tol,
        gaps=gaps,
        extra={"route": cfg.route, "normalized": spec.normalized,
               "h": spec.h.label, "f": spec.f.label, "g": spec.g.label,
               "dims": list(spec.dims)},
    )


def joint_convexity_suite(cfg: TrialConfig) -> TrialReport:
    """Midpoint convexity gaps mean-of-endpoints minus value-at-midpoint."""
    if cfg.spec is None or cfg.spec.mode != "convex":
        raise SpecValidationError(["joint_convexity_suite needs a convex-mode spec"])
    return _run_joint(cfg, "joint_convexity")


def joint_concavity_suite(cfg: TrialConfig) -> TrialReport:
    """Mirror suite with reversed gap sign: value-at-midpoint minus mean."""
    if cfg.spec is None or cfg.spec.mode != "concave":
        raise SpecValidationError(["joint_concavity_suite needs a concave-mode spec"])
    return _run_joint(cfg, "joint_concavity")


def replay_joint(spec: FunctionalSpec, witness: dict, route: str = "core") -> float:
    """Recompute a joint-suite witness gap from its serialized inputs."""
    inp = witness["inputs"]
    A1 = complex_matrix_from_hex(inp["A1"])[None]
    A2 = complex_matrix_from_hex(inp["A2"])[None]
    B1 = complex_matrix_from_hex(inp["B1"])[None]
    B2 = complex_matrix_from_hex(inp["B2"])[None]
    encs = _joint_encodings(spec, route)
    if encs is not None:
        gaps, _, status = kernels.joint_gaps(
            A1, B1, A2, B2, spec.phi.kraus, spec.psi.kraus, *encs,
            1 if route == "inverse" else 0,
            spec.mode == "concave", spec.normalized, EIG_FLOOR)
        if status.any():
            _raise_floor("replay", status)
    else:
        gaps, _ = _joint_gaps_python(spec, A1, A2, B1, B2, route)
    return float(gaps[0])


def operator_convexity_suite(fn_g: ScalarFunction, fn_f: ScalarFunction,
                             pmap: posmap.PositiveMap, cfg: TrialConfig) -> TrialReport:
    """Matrix midpoint convexity of A -> g(Phi(f(A))): smallest eigenvalue of
    mean-of-endpoints minus value-at-midpoint per trial."""
    t0 = time.perf_counter()
    if cfg.validate:
        problems = []
        if not _certified(fn_g, decreasing=False, positive=False):
            problems.append("g is not operator monotone")
        if not _certified(fn_f, decreasing=True, positive=True):
            problems.append("f is not positive operator monotone decreasing")
        if problems:
            raise SpecValidationError(problems)
    m = pmap.in_dim
    A1, A2 = _sample_pair_stacks(m, cfg.trials, cfg.seed, cfg.eig_range)
    enc_f, enc_g = fn_f.encode(), fn_g.encode()
    if enc_f is not None and enc_g is not None:
        gaps, status = kernels.operator_midpoint_gaps(A1, A2, pmap.kraus, enc_f, enc_g, EIG_FLOOR)
        if status.any():
            _raise_floor("operator_convexity", status)
    else:
        gaps = _operator_gaps_python(fn_g, fn_f, pmap, A1, A2)
    worst = int(np.argmin(gaps))
    witness = {"kind": "operator_convexity", "trial": worst, "gap": float(gaps[worst]),
               "inputs": {"A1": complex_matrix_to_hex(A1[worst]),
                          "A2": complex_matrix_to_hex(A2[worst])}}
    return TrialReport(
        suite="operator_convexity",
        trials=cfg.trials,
        violations=int(np.sum(gaps < -cfg.tol)),
        min_gap=float(gaps[worst]),
        worst_witness=witness,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        seed=cfg.seed,
        tol=cfg.tol,
        gaps=gaps,
        extra={"g": fn_g.label, "f": fn_f.label, "dims": [pmap.in_dim, pmap.out_dim]},
    )


def _certified(fn: ScalarFunction, decreasing: bool, positive: bool) -> bool:
    analytic = (fn.positive_operator_monotone_decreasing if decreasing
                else (fn.positive_operator_monotone if positive else fn.operator_monotone))
    if analytic is not None:
        return analytic
    probe = fn.negate() if decreasing else fn
    ok = scalarfun.loewner_monotonicity_oracle(probe, [0.5, 1.0, 2.0, 4.0, 8.0])
    if positive or decreasing:
        grid = np.exp(np.linspace(np.log(1e-3), np.log(1e3), 41))
        ok = ok and fn.eval_array(grid).min() > 0
    return ok


def _operator_gaps_python(fn_g, fn_f, pmap, A1, A2):
    trials = A1.shape[0]
    gaps = np.empty(trials)
    for t in range(trials):
        Xs = []
        for M in (A1[t], A2[t], (A1[t] + A2[t]) / 2):
            fA = matcore.func_calc(PDMatrix.from_array(M), fn_f.eval_array)
            Y = PDMatrix.from_hermitian(posmap.apply(pmap, fA))
            Xs.append(matcore.func_calc(Y, fn_g.eval_array).entries)
        D = hermitian_part((Xs[0] + Xs[1]) / 2 - Xs[2])
        gaps[t] = float(np.linalg.eigvalsh(D)[0])
    return gaps


def replay_operator(fn_g, fn_f, pmap, witness: dict) -> float:
    A1 = complex_matrix_from_hex(witness["inputs"]["A1"])[None]
    A2 = complex_matrix_from_hex(witness["inputs"]["A2"])[None]
    enc_f, enc_g = fn_f.encode(), fn_g.encode()
    if enc_f is not None and enc_g is not None:
        gaps, status = kernels.operator_midpoint_gaps(A1, A2, pmap.kraus, enc_f, enc_g, EIG_FLOOR)
        if status.any():
            _raise_floor("replay", status)
        return float(gaps[0])
    return float(_operator_gaps_python(fn_g, fn_f, pmap, A1, A2)[0])


def jensen_trace_suite(fn: ScalarFunction, maps: posmap.PositiveMap,
                       cfg: TrialConfig) -> TrialReport:
    """Trace Jensen inequality for a convex fn on (0, inf) and a unital Kraus
    family: Tr fn(sum C_i^* A_i C_i) <= Tr sum C_i^* fn(A_i) C_i."""
    t0 = time.perf_counter()
    if not maps.is_unital(1e-10):
        raise SpecValidationError(["Kraus family is not unital; run normalize_unital first"])
    if cfg.validate and fn.prop("convex") is False:
        raise SpecValidationError([f"{fn.label} is not convex on (0, inf)"])
    n, q = maps.in_dim, maps.kraus.shape[0]
    A = np.empty((cfg.trials, q, n, n), dtype=np.complex128)
    for i in range(cfg.trials):
        rng = trial_rng(cfg.seed, i)
        for j in range(q):
            A[i, j] = matcore.random_pd(n, rng, cfg.eig_range).entries
    enc = fn.encode()
    if enc is not None:
        gaps, status = kernels.jensen_gaps(A, maps.kraus, enc, EIG_FLOOR)
        if status.any():
            _raise_floor("jensen_trace", status)
    else:
        gaps = _jensen_gaps_python(fn, maps, A)
    worst = int(np.argmin(gaps))
    witness = {"kind": "jensen_trace", "trial": worst, "gap": float(gaps[worst]),
               "inputs": {"A": [complex_matrix_to_hex(A[worst, j]) for j in range(q)]}}
    return TrialReport(
        suite="jensen_trace",
        trials=cfg.trials,
        violations=int(np.sum(gaps < -cfg.tol)),
        min_gap=float(gaps[worst]),
        worst_witness=witness,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        seed=cfg.seed,
        tol=cfg.tol,
        gaps=gaps,
        extra={"fn": fn.label, "kraus_count": q, "n": n},
    )


def _jensen_gaps_python(fn, maps, A):
    trials, q = A.shape[0], A.shape[1]
    K = maps.kraus
    gaps = np.empty(trials)
    for t in range(trials):
        S = np.zeros((maps.out_dim, maps.out_dim), dtype=np.complex128)
        rhs = 0.0
        for j in range(q):
            S += K[j].conj().T @ A[t, j] @ K[j]
            fA = matcore.func_calc(PDMatrix.from_array(A[t, j]), fn.eval_array).entries
            rhs += float(np.trace(K[j].conj().T @ fA @ K[j]).real)
        lhs = tracefun.trace_fn(PDMatrix.from_array(hermitian_part(S)), fn)
        gaps[t] = rhs - lhs
    return gaps


def replay_jensen(fn, maps, witness: dict) -> float:
    A = np.stack([complex_matrix_from_hex(rows) for rows in witness["inputs"]["A"]])[None]
    enc = fn.encode()
    if enc is not None:
        gaps, status = kernels.jensen_gaps(A, maps.kraus, enc, EIG_FLOOR)
        if status.any():
            _raise_floor("replay", status)
        return float(gaps[0])
    return float(_jensen_gaps_python(fn, maps, A[0:1])[0])


def trace_monotonicity_suite(fn: ScalarFunction, cfg: TrialConfig) -> TrialReport:
    """Pairs A <= B = A + G^*G: checks the ordered-eigenvalue domination and
    Tr fn(A) <= Tr fn(B) for nondecreasing fn."""
    t0 = time.perf_counter()
    if cfg.validate and fn.prop("nondecreasing") is False:
        raise SpecValidationError([f"{fn.label} is not nondecreasing"])
    n = (cfg.dims[1] if cfg.dims else 4)
    A = np.empty((cfg.trials, n, n), dtype=np.complex128)
    G = np.empty((cfg.trials, n, n), dtype=np.complex128)
    for i in range(cfg.trials):
        rng = trial_rng(cfg.seed, i)
        A[i] = matcore.random_pd(n, rng, cfg.eig_range).entries
        G[i] = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)
    enc = fn.encode()
    if enc is None:
        raise SpecValidationError(["trace_monotonicity_suite needs an encodable catalog member"])
    eig_gaps, tr_gaps, status = kernels.monotonicity_gaps(A, G, enc, EIG_FLOOR)
    if status.any():
        _raise_floor("trace_monotonicity", status)
    gaps = np.minimum(eig_gaps, tr_gaps)
    worst = int(np.argmin(gaps))
    witness = {"kind": "trace_monotonicity", "trial": worst, "gap": float(gaps[worst]),
               "inputs": {"A": complex_matrix_to_hex(A[worst]),
                          "G": complex_matrix_to_hex(G[worst])}}
    return TrialReport(
        suite="trace_monotonicity",
        trials=cfg.trials,
        violations=int(np.sum(eig_gaps < -cfg.tol) + np.sum(tr_gaps < -cfg.tol)),
        min_gap=float(gaps[worst]),
        worst_witness=witness,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        seed=cfg.seed,
        tol=cfg.tol,
        gaps=gaps,
        extra={"fn": fn.label, "n": n,
               "min_eig_order_gap": float(eig_gaps.min()),
               "min_trace_gap": float(tr_gaps.min())},
    )


def replay_monotonicity(fn, witness: dict) -> float:
    A = complex_matrix_from_hex(witness["inputs"]["A"])[None]
    G = complex_matrix_from_hex(witness["inputs"]["G"])[None]
    eig_gaps, tr_gaps, status = kernels.monotonicity_gaps(A, G, fn.encode(), EIG_FLOOR)
    if status.any():
        _raise_floor("replay", status)
    return float(min(eig_gaps[0], tr_gaps[0]))


SHARPNESS_SCALAR_GRID = (0.25, 0.5, 1.0, 2.0, 2.5, 4.0)


def sharpness_search(r: float, cfg: TrialConfig) -> TrialReport:
    """Counterexample search for h(x) = -x^(-r), f = g = 1/x, identity maps,
    endpoints constrained to A = B.

    Under the constraint the functional collapses to -Tr A^(2r), which loses
    convexity exactly when 2r > 1, so the search is expected to produce a
    witness for r > 1/2 and nothing for r <= 1/2.  A deterministic scalar
    sweep (1x1 matrices) runs before the random trials because the violating
    direction is essentially one-dimensional.  The report passes when a gap
    below -10*tol is found.
    """
    t0 = time.perf_counter()
    if r <= 0:
        raise ValueError(f"exponent must be > 0, got {r}")
    n = (cfg.dims[0] if cfg.dims else 2)
    h = ScalarFunction.negpower(r)
    f = ScalarFunction.invpower(1)
    spec_n = FunctionalSpec(h, f, f, posmap.identity_map(n), posmap.identity_map(n), "convex")
    spec_1 = FunctionalSpec(h, f, f, posmap.identity_map(1), posmap.identity_map(1), "convex")

    grid = SHARPNESS_SCALAR_GRID
    pairs = [(a, b) for a in grid for b in grid if a < b]
    S1 = np.array([[[a]] for a, _ in pairs], dtype=np.complex128)
    S2 = np.array([[[b]] for _, b in pairs], dtype=np.complex128)
    A1 = np.empty((cfg.trials, n, n), dtype=np.complex128)
    A2 = np.empty((cfg.trials, n, n), dtype=np.complex128)
    for i in range(cfg.trials):
        rng = trial_rng(cfg.seed, i)
        A1[i] = matcore.random_pd(n, rng, cfg.eig_range).entries
        A2[i] = matcore.random_pd(n, rng, cfg.eig_range).entries

    encs1 = _joint_encodings(spec_1, "core")
    g_scalar, _, st1 = kernels.joint_gaps(S1, S1, S2, S2, spec_1.phi.kraus, spec_1.psi.kraus,
                                          *encs1, 0, False, False, EIG_FLOOR)
    encs_n = _joint_encodings(spec_n, "core")
    g_rand, _, st2 = kernels.joint_gaps(A1, A1, A2, A2, spec_n.phi.kraus, spec_n.psi.kraus,
                                        *encs_n, 0, False, False, EIG_FLOOR)
    if st1.any() or st2.any():
        _raise_floor("sharpness_search", np.concatenate([st1, st2]))
    gaps = np.concatenate([g_scalar, g_rand])
    worst = int(np.argmin(gaps))
    if worst < len(pairs):
        w_inputs = {"A1": complex_matrix_to_hex(S1[worst]),
                    "A2": complex_matrix_to_hex(S2[worst]), "scalar_sweep": True}
    else:
        j = worst - len(pairs)
        w_inputs = {"A1": complex_matrix_to_hex(A1[j]),
                    "A2": complex_matrix_to_hex(A2[j]), "scalar_sweep": False}
    witness = {"kind": "sharpness", "trial": worst, "gap": float(gaps[worst]),
               "r": r, "inputs": w_inputs}
    found = int(np.sum(gaps < -10.0 * cfg.tol))
    return TrialReport(
        suite="sharpness_search",
        trials=len(pairs) + cfg.trials,
        violations=found,
        min_gap=float(gaps[worst]),
        worst_witness=witness,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        seed=cfg.seed,
        tol=cfg.tol,
        mode="witness",
        gaps=gaps,
        extra={"r": r, "n": n, "scalar_pairs": len(pairs)},
    )


def replay_sharpness(r: float, witness: dict) -> float:
    A1 = complex_matrix_from_hex(witness["inputs"]["A1"])[None]
    A2 = complex_matrix_from_hex(witness["inputs"]["A2"])[None]
    n = A1.shape[1]
    h = ScalarFunction.negpower(r)
    f = ScalarFunction.invpower(1)
    spec = FunctionalSpec(h, f, f, posmap.identity_map(n), posmap.identity_map(n), "convex")
    gaps, _, status = kernels.joint_gaps(A1, A1, A2, A2, spec.phi.kraus, spec.psi.kraus,
                                         *_joint_encodings(spec, "core"), 0, False, False,
                                         EIG_FLOOR)
    if status.any():
        _raise_floor("replay", status)
    return float(gaps[0])


def remark_operator_concave_check(h_breve: TransformedFunction, pmap: posmap.PositiveMap,
                                  cfg: TrialConfig,
                                  fn_f: ScalarFunction = ScalarFunction.invpower(1)) -> TrialReport:
    """Matrix midpoint concavity of A -> -hb(Z0^{1/2} Phi(f(A)) Z0^{1/2}) for a
    closed-form catalog conjugate hb and random PD pivots Z0."""
    t0 = time.perf_counter()
    if h_breve.closed_form is None:
        raise SpecValidationError(["the remark check needs a closed-form conjugate"])
    m, k = pmap.in_dim, pmap.out_dim
    A1 = np.empty((cfg.trials, m, m), dtype=np.complex128)
    A2 = np.empty((cfg.trials, m, m), dtype=np.complex128)
    Z0 = np.empty((cfg.trials, k, k), dtype=np.complex128)
    for i in range(cfg.trials):
        rng = trial_rng(cfg.seed, i)
        A1[i] = matcore.random_pd(m, rng, cfg.eig_range).entries
        A2[i] = matcore.random_pd(m, rng, cfg.eig_range).entries
        Z0[i] = matcore.random_pd(k, rng, cfg.eig_range).entries
    gaps, status = kernels.remark_gaps(A1, A2, Z0, pmap.kraus, fn_f.encode(),
                                       h_breve.closed_form.encode(), EIG_FLOOR)
    if status.any():
        _raise_floor("remark_operator_concave", status)
    worst = int(np.argmin(gaps))
    witness = {"kind": "remark_operator_concave", "trial": worst, "gap": float(gaps[worst]),
               "inputs": {"A1": complex_matrix_to_hex(A1[worst]),
                          "A2": complex_matrix_to_hex(A2[worst]),
                          "Z0": complex_matrix_to_hex(Z0[worst])}}
    return TrialReport(
        suite="remark_operator_concave",
        trials=cfg.trials,
        violations=int(np.sum(gaps < -cfg.tol)),
        min_gap=float(gaps[worst]),
        worst_witness=witness,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        seed=cfg.seed,
        tol=cfg.tol,
        gaps=gaps,
        extra={"h_breve": h_breve.label, "f": fn_f.label},
    )


def replay_remark(h_breve, pmap, witness: dict,
                  fn_f: ScalarFunction = ScalarFunction.invpower(1)) -> float:
    inp = witness["inputs"]
    gaps, status = kernels.remark_gaps(
        complex_matrix_from_hex(inp["A1"])[None], complex_matrix_from_hex(inp["A2"])[None],
        complex_matrix_from_hex(inp["Z0"])[None], pmap.kraus, fn_f.encode(),
        h_breve.closed_form.encode(), EIG_FLOOR)
    if status.any():
        _raise_floor("replay", status)
    return float(gaps[0])

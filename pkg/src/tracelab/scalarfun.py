"""Scalar function catalog with exact transform algebra.

The catalog covers the functions the trace functionals are built from:
logarithm, powers x^r, negated inverse powers -x^(-r), inverse powers x^(-p),
affine functions, atomic Löwner-representation members
c0 + c1 x + sum_j w_j (x lam_j - 1)/(x + lam_j), their negations, and opaque
numeric callables.  On top of the catalog sit the reflection transform
t(f)(x) = -f(1/x), the concave Legendre conjugate inf_x (tx - f(x)), and the
composite conjugate-of-reflection, each with closed forms where the catalog
admits them and a bracketed golden-section fallback otherwise.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import report
from .kernels import codes
from .kernels import _reference as _ref

CONJUGATE_DOMAIN = (1e-8, 1e8)
CONJUGATE_GRID_POINTS = 161
GOLDEN_TOL = 1e-10
GOLDEN_MAX_ITER = 200

# the fixed 21-point log grid used by all closed-form-vs-numeric agreements
GRID = np.array([10.0 ** (-1.0 + k / 10.0) for k in range(21)])

_PROP_NAMES = (
    "positive", "negative", "om_up", "om_down", "concave", "convex",
    "nondecreasing", "nonincreasing", "ratio_zero", "prod_zero",
)


def _flip(v):
    return None if v is None else not v


@dataclass(frozen=True)
class ScalarFunction:
    """A member of the scalar function catalog.

    kind is one of 'log', 'power', 'negpower', 'invpower', 'affine',
    'loewner', 'logaffine', 'cpow', 'neg', 'numeric'.  Construct through the
    classmethods, which validate parameters.
    """

    kind: str
    r: float = 0.0
    c0: float = 0.0
    c1: float = 0.0
    atoms: tuple = ()
    base: Optional["ScalarFunction"] = None
    fn: Optional[Callable] = field(default=None, compare=False)
    label: str = field(default="", compare=False)
    assume: tuple = ()

    # -- constructors ------------------------------------------------------

    @classmethod
    def log(cls) -> "ScalarFunction":
        return cls("log", label="log")

    @classmethod
    def power(cls, r: float) -> "ScalarFunction":
        if r <= 0:
            raise ValueError(f"power exponent must be > 0, got {r}")
        return cls("power", r=float(r), label=f"power:{r:g}")

    @classmethod
    def negpower(cls, r: float) -> "ScalarFunction":
        if r <= 0:
            raise ValueError(f"negpower exponent must be > 0, got {r}")
        return cls("negpower", r=float(r), label=f"negpower:{r:g}")

    @classmethod
    def invpower(cls, p: float) -> "ScalarFunction":
        if p <= 0:
            raise ValueError(f"invpower exponent must be > 0, got {p}")
        return cls("invpower", r=float(p), label=f"invpower:{p:g}")

    @classmethod
    def affine(cls, c0: float, c1: float) -> "ScalarFunction":
        if c1 < 0:
            raise ValueError(f"affine slope must be >= 0, got {c1}")
        return cls("affine", c0=float(c0), c1=float(c1), label=f"affine:{c0:g},{c1:g}")

    @classmethod
    def loewner(cls, c0: float, c1: float, atoms) -> "ScalarFunction":
        if c1 < 0:
            raise ValueError(f"loewner linear coefficient must be >= 0, got {c1}")
        atoms = tuple((float(l), float(w)) for l, w in atoms)
        for l, w in atoms:
            if l < 0 or w <= 0:
                raise ValueError(f"loewner atoms need lam >= 0 and w > 0, got ({l}, {w})")
        return cls("loewner", c0=float(c0), c1=float(c1), atoms=atoms,
                   label=f"loewner:{c0:g},{c1:g},{list(atoms)}")

    @classmethod
    def logaffine(cls, c0: float, c1: float) -> "ScalarFunction":
        if c1 < 0:
            raise ValueError(f"logaffine log coefficient must be >= 0, got {c1}")
        return cls("logaffine", c0=float(c0), c1=float(c1),
                   label=f"{c0:g} + {c1:g}*log x")

    @classmethod
    def cpow(cls, c: float, s: float) -> "ScalarFunction":
        return cls("cpow", c0=float(c), c1=float(s), label=f"{c:g}*x^{s:g}")

    @classmethod
    def numeric(cls, fn: Callable, label: str = "numeric", assume=()) -> "ScalarFunction":
        """Opaque callable; `assume` lists property names the caller vouches
        for ("name" asserts True, "!name" asserts False)."""
        return cls("numeric", fn=fn, label=label, assume=tuple(assume))

    def negate(self) -> "ScalarFunction":
        if self.kind == "neg":
            return self.base
        return ScalarFunction("neg", base=self, label=f"neg:{self.label}")

    # -- evaluation --------------------------------------------------------

    def eval_array(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        if xs.size and xs.min() <= 0.0:
            raise ValueError(f"function domain is x > 0, got {xs.min()}")
        if self.kind == "neg":
            return -self.base.eval_array(xs)
        if self.kind == "numeric":
            return np.asarray([self.fn(float(x)) for x in np.atleast_1d(xs)],
                              dtype=np.float64).reshape(xs.shape)
        return _ref.eval_many(self.encode(), xs)

    def __call__(self, x: float) -> float:
        return float(self.eval_array(np.array([float(x)]))[0])

    # -- kernel encoding ---------------------------------------------------

    def encode(self) -> Optional[np.ndarray]:
        """Flat float64 encoding for the kernels, or None for numeric members."""
        k = self.kind
        if k == "log":
            return codes.pack(codes.LOG, 1.0)
        if k == "power":
            return codes.pack(codes.POWER, 1.0, self.r)
        if k == "negpower":
            return codes.pack(codes.NEGPOWER, 1.0, self.r)
        if k == "invpower":
            return codes.pack(codes.INVPOWER, 1.0, self.r)
        if k == "affine":
            return codes.pack(codes.AFFINE, 1.0, self.c0, self.c1)
        if k == "loewner":
            lams = [l for l, _ in self.atoms]
            ws = [w for _, w in self.atoms]
            return codes.pack(codes.LOEWNER, 1.0, self.c0, self.c1, lams, ws)
        if k == "logaffine":
            return codes.pack(codes.LOGAFFINE, 1.0, self.c0, self.c1)
        if k == "cpow":
            return codes.pack(codes.CPOW, 1.0, self.c0, self.c1)
        if k == "neg":
            enc = self.base.encode()
            if enc is None:
                return None
            enc = enc.copy()
            enc[1] = -enc[1]
            return enc
        return None

    # -- analytic classification -------------------------------------------

    def prop(self, name: str):
        """Tri-state analytic property: True, False, or None (unknown)."""
        if name not in _PROP_NAMES:
            raise ValueError(f"unknown property {name!r}")
        k = self.kind
        if k == "neg":
            swap = {"positive": "negative", "negative": "positive",
                    "om_up": "om_down", "om_down": "om_up",
                    "concave": "convex", "convex": "concave",
                    "nondecreasing": "nonincreasing",
                    "nonincreasing": "nondecreasing",
                    "ratio_zero": "ratio_zero", "prod_zero": "prod_zero"}
            return self.base.prop(swap[name])
        if k == "numeric":
            if name in self.assume:
                return True
            if ("!" + name) in self.assume:
                return False
            return None
        return getattr(self, "_" + k)(name)

    def _log(self, name):
        return {"positive": False, "negative": False, "om_up": True,
                "om_down": False, "concave": True, "convex": False,
                "nondecreasing": True, "nonincreasing": False,
                "ratio_zero": True, "prod_zero": True}[name]

    def _power(self, name):
        r = self.r
        return {"positive": True, "negative": False, "om_up": r <= 1.0,
                "om_down": False, "concave": r <= 1.0, "convex": r >= 1.0,
                "nondecreasing": True, "nonincreasing": False,
                "ratio_zero": r < 1.0, "prod_zero": True}[name]

    def _negpower(self, name):
        r = self.r
        return {"positive": False, "negative": True, "om_up": r <= 1.0,
                "om_down": False, "concave": True, "convex": False,
                "nondecreasing": True, "nonincreasing": False,
                "ratio_zero": True, "prod_zero": r < 1.0}[name]

    def _invpower(self, name):
        p = self.r
        return {"positive": True, "negative": False, "om_up": False,
                "om_down": p <= 1.0, "concave": False, "convex": True,
                "nondecreasing": False, "nonincreasing": True,
                "ratio_zero": True, "prod_zero": p < 1.0}[name]

    def _affine(self, name):
        c0, c1 = self.c0, self.c1
        return {"positive": c0 >= 0 and (c0 > 0 or c1 > 0),
                "negative": c0 < 0 and c1 == 0, "om_up": True,
                "om_down": c1 == 0, "concave": True, "convex": True,
                "nondecreasing": True, "nonincreasing": c1 == 0,
                "ratio_zero": c1 == 0, "prod_zero": True}[name]

    def _loewner(self, name):
        c0, c1, atoms = self.c0, self.c1, self.atoms
        constant = c1 == 0 and not atoms
        lim0 = -math.inf if any(l == 0 for l, _ in atoms) else \
            c0 - sum(w / l for l, w in atoms if l > 0)
        liminf = math.inf if c1 > 0 else c0 + sum(w * l for l, w in atoms)
        return {"positive": lim0 >= 0 and not (constant and c0 <= 0),
                "negative": liminf <= 0 and not (constant and c0 >= 0),
                "om_up": True, "om_down": constant, "concave": True,
                "convex": constant, "nondecreasing": True,
                "nonincreasing": constant,
                "ratio_zero": c1 == 0,
                "prod_zero": all(l > 0 for l, _ in atoms)}[name]

    def _logaffine(self, name):
        c0, c1 = self.c0, self.c1
        if c1 == 0:
            return {"positive": c0 > 0, "negative": c0 < 0, "om_up": True,
                    "om_down": True, "concave": True, "convex": True,
                    "nondecreasing": True, "nonincreasing": True,
                    "ratio_zero": True, "prod_zero": True}[name]
        return {"positive": False, "negative": False, "om_up": True,
                "om_down": False, "concave": True, "convex": False,
                "nondecreasing": True, "nonincreasing": False,
                "ratio_zero": True, "prod_zero": True}[name]

    def _cpow(self, name):
        c, s = self.c0, self.c1
        if c == 0 or s == 0:
            const = {"positive": c > 0, "negative": c < 0}
            return const.get(name, True) if name in ("positive", "negative") else True
        return {"positive": c > 0, "negative": c < 0,
                "om_up": (c > 0 and 0 < s <= 1) or (c < 0 and -1 <= s < 0),
                "om_down": (c > 0 and -1 <= s < 0) or (c < 0 and 0 < s <= 1),
                "concave": c * s * (s - 1) <= 0, "convex": c * s * (s - 1) >= 0,
                "nondecreasing": c * s > 0, "nonincreasing": c * s < 0,
                "ratio_zero": s < 1, "prod_zero": s > -1}[name]

    # -- named classifications used by the functional specs -----------------

    @property
    def operator_monotone(self):
        return self.prop("om_up")

    @property
    def positive_operator_monotone(self):
        p, m = self.prop("positive"), self.prop("om_up")
        if p is None or m is None:
            return None
        return p and m

    @property
    def positive_operator_monotone_decreasing(self):
        p, m = self.prop("positive"), self.prop("om_down")
        if p is None or m is None:
            return None
        return p and m

    def __repr__(self):
        return f"ScalarFunction({self.label or self.kind})"


# -- tags -------------------------------------------------------------------

def parse_tag(tag: str) -> ScalarFunction:
    """Resolve a catalog tag such as "log", "power:0.5", "invpower:1",
    "affine:0,1", "loewner:c0,c1,[(l,w),...]" or "neg:<tag>"."""
    tag = tag.strip()
    if tag == "log":
        return ScalarFunction.log()
    if tag.startswith("neg:"):
        return parse_tag(tag[4:]).negate()
    head, sep, rest = tag.partition(":")
    if not sep:
        raise ValueError(f"unknown function tag {tag!r}")
    try:
        if head == "power":
            return ScalarFunction.power(float(rest))
        if head == "negpower":
            return ScalarFunction.negpower(float(rest))
        if head == "invpower":
            return ScalarFunction.invpower(float(rest))
        if head == "affine":
            c0, c1 = (float(v) for v in rest.split(","))
            return ScalarFunction.affine(c0, c1)
        if head == "loewner":
            pre, brk, atoms_s = rest.partition("[")
            if not brk or not atoms_s.rstrip().endswith("]"):
                raise ValueError("loewner tag needs an [(l,w),...] atom list")
            c0_s, c1_s = (v for v in pre.split(",") if v != "")
            body = atoms_s.rstrip()[:-1].replace("(", " ").replace(")", " ")
            nums = [float(v) for v in body.replace(",", " ").split()]
            if len(nums) % 2:
                raise ValueError("loewner atoms must be (lam, w) pairs")
            atoms = list(zip(nums[0::2], nums[1::2]))
            return ScalarFunction.loewner(float(c0_s), float(c1_s), atoms)
    except ValueError as exc:
        raise ValueError(f"bad function tag {tag!r}: {exc}") from exc
    raise ValueError(f"unknown function tag {tag!r}")


# -- the reflection transform -------------------------------------------------

def tilde(fn: ScalarFunction) -> ScalarFunction:
    """The reflection x -> -fn(1/x), closed under the catalog where possible.

    log stays log, powers swap with negated inverse powers, and the transform
    is an involution.  Löwner-representation members come back as numeric
    wrappers.
    """
    k = fn.kind
    if k == "log":
        return ScalarFunction.log()
    if k == "power":
        return ScalarFunction.negpower(fn.r)
    if k == "negpower":
        return ScalarFunction.power(fn.r)
    if k == "invpower":
        return ScalarFunction.power(fn.r).negate()
    if k == "cpow":
        return ScalarFunction.cpow(-fn.c0, -fn.c1)
    if k == "logaffine":
        return ScalarFunction.logaffine(-fn.c0, fn.c1)
    if k == "affine" and fn.c1 == 0:
        return ScalarFunction.cpow(-fn.c0, 0.0)
    if k == "affine" and fn.c0 == 0:
        return ScalarFunction.cpow(-fn.c1, -1.0)
    if k == "neg":
        return tilde(fn.base).negate()
    assume = []
    for name, from_name in (("om_up", "om_up"), ("positive", "negative"),
                            ("negative", "positive"),
                            ("nondecreasing", "nondecreasing"),
                            ("ratio_zero", "prod_zero"),
                            ("prod_zero", "ratio_zero")):
        v = fn.prop(from_name)
        if v is True:
            assume.append(name)
        elif v is False:
            assume.append("!" + name)
    return ScalarFunction.numeric(lambda x, _f=fn: -_f(1.0 / x),
                                  label=f"tilde({fn.label})", assume=assume)


# -- numeric Legendre transform ----------------------------------------------

@dataclass(frozen=True)
class LegendreResult:
    """Value and minimizer of inf_x (t x - fn(x)), with a boundary warning
    when the infimum was attained at the truncated domain edge (a sign the
    transform's standing limit assumptions fail at this t)."""

    value: float
    minimizer: float
    boundary: bool


def legendre_numeric(fn: ScalarFunction, t: float, tol: float = GOLDEN_TOL,
                     max_iter: int = GOLDEN_MAX_ITER, validate: bool = True) -> LegendreResult:
    """Concave conjugate inf over x in [1e-8, 1e8] of t*x - fn(x).

    The convex objective is bracketed on a log grid and refined by golden
    section to relative tolerance tol.  Catalog members are validated to be
    concave and nondecreasing; numeric members are trusted.  A failing
    standing limit (fn(x)/x -> 0 at infinity, or t outside the conjugate's
    effective domain) surfaces as the boundary flag, not an error.
    """
    if t <= 0:
        raise ValueError(f"conjugate argument must be > 0, got {t}")
    if validate:
        for name in ("concave", "nondecreasing"):
            if fn.prop(name) is False:
                raise ValueError(
                    f"{fn.label or fn.kind} is not {name}; "
                    "its concave conjugate is not defined")

    lo, hi = CONJUGATE_DOMAIN

    def phi(u: float) -> float:
        x = math.exp(u)
        return t * x - fn(x)

    ulo, uhi = math.log(lo), math.log(hi)
    us = np.linspace(ulo, uhi, CONJUGATE_GRID_POINTS)
    vals = [phi(u) for u in us]
    j = int(np.argmin(vals))
    if j == 0 or j == CONJUGATE_GRID_POINTS - 1:
        return LegendreResult(vals[j], math.exp(us[j]), True)

    a, b = us[j - 1], us[j + 1]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = phi(c), phi(d)
    it = 0
    while (b - a) > tol * max(1.0, abs(a), abs(b)) and it < max_iter:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = phi(d)
        it += 1
    u = (a + b) / 2.0
    return LegendreResult(min(phi(u), fc, fd), math.exp(u), False)


# -- transformed functions -----------------------------------------------------

@dataclass(frozen=True)
class TransformedFunction:
    """A conjugate of a catalog member: kind 'check' is the concave Legendre
    conjugate of base, kind 'breve' the conjugate of base's reflection.
    closed_form, when present, agrees with the numeric definition on GRID."""

    base: ScalarFunction
    kind: str
    closed_form: Optional[ScalarFunction]

    def numeric(self, t: float) -> float:
        src = self.base if self.kind == "check" else tilde(self.base)
        return legendre_numeric(src, t, validate=False).value

    def __call__(self, t: float) -> float:
        if self.closed_form is not None:
            return self.closed_form(t)
        return self.numeric(t)

    def eval_array(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)
        if self.closed_form is not None:
            return self.closed_form.eval_array(ts)
        return np.array([self.numeric(float(t)) for t in ts])

    @property
    def label(self) -> str:
        return f"{self.kind}({self.base.label})"

    def as_scalar_function(self) -> ScalarFunction:
        """The conjugate as a catalog member: the closed form when present,
        else a numeric wrapper.  A conjugate of a valid base is itself concave
        and nondecreasing with vanishing slope at infinity, so the wrapper may
        assume those."""
        if self.closed_form is not None:
            return self.closed_form
        return ScalarFunction.numeric(
            self.numeric, label=self.label,
            assume=("concave", "nondecreasing", "ratio_zero"))


def _as_cpow(fn: ScalarFunction) -> Optional[tuple]:
    if fn.kind == "power":
        return 1.0, fn.r
    if fn.kind == "negpower":
        return -1.0, -fn.r
    if fn.kind == "invpower":
        return 1.0, -fn.r
    if fn.kind == "cpow":
        return fn.c0, fn.c1
    if fn.kind == "neg":
        v = _as_cpow(fn.base)
        return None if v is None else (-v[0], v[1])
    return None


def _conjugate_closed(fn: ScalarFunction) -> Optional[ScalarFunction]:
    """Closed concave conjugate where the catalog admits one."""
    if fn.kind == "log":
        return ScalarFunction.logaffine(1.0, 1.0)
    if fn.kind == "logaffine" and fn.c1 > 0:
        c0, c1 = fn.c0, fn.c1
        return ScalarFunction.logaffine(c1 - c0 - c1 * math.log(c1), c1)
    v = _as_cpow(fn)
    if v is not None:
        c, s = v
        if c * s > 0 and s < 1:
            # stationary point of tx - c x^s: conjugate is c(s-1)(cs)^{s/(1-s)} t^{s/(s-1)}
            coeff = c * (s - 1.0) * (c * s) ** (s / (1.0 - s))
            return ScalarFunction.cpow(coeff, s / (s - 1.0))
    return None


def _require(fn: ScalarFunction, conditions, what: str):
    problems = [name for name in conditions if fn.prop(name) is False]
    if problems:
        raise ValueError(
            f"{what} undefined for {fn.label or fn.kind}: fails {', '.join(problems)}")


def check(fn: ScalarFunction) -> TransformedFunction:
    """The concave Legendre conjugate inf_x (tx - fn(x)) as a function of t."""
    _require(fn, ("concave", "nondecreasing", "ratio_zero"), "concave conjugate")
    return TransformedFunction(fn, "check", _conjugate_closed(fn))


def breve(fn: ScalarFunction) -> TransformedFunction:
    """Conjugate of the reflection: inf_x (tx + fn(1/x)) as a function of t."""
    tf = tilde(fn)
    _require(tf, ("concave", "nondecreasing"), "reflected conjugate")
    _require(fn, ("prod_zero",), "reflected conjugate")
    return TransformedFunction(fn, "breve", _conjugate_closed(tf))


# -- property checks -----------------------------------------------------------

def check_func_eq1(fn, samples: int = 2000, seed: int = 0,
                   sample_range=(1e-3, 1e3), tol: float = 1e-10) -> report.TrialReport:
    """Sampled test of the mean inequality chain

        fn((x+y)/2) >= (fn(x)+fn(y))/2 >= fn(2/(1/x + 1/y))

    over log-uniform pairs.  Violations are reported, not raised.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    lo, hi = sample_range
    xs = np.exp(rng.uniform(np.log(lo), np.log(hi), samples))
    ys = np.exp(rng.uniform(np.log(lo), np.log(hi), samples))
    evals = fn.eval_array
    mean = (evals(xs) + evals(ys)) / 2.0
    g1 = evals((xs + ys) / 2.0) - mean
    g2 = mean - evals(2.0 / (1.0 / xs + 1.0 / ys))
    gaps = np.concatenate([g1, g2])
    worst = int(np.argmin(gaps))
    label = fn.label if hasattr(fn, "label") else "fn"
    witness = {
        "x": report.hexfloat(xs[worst % samples]),
        "y": report.hexfloat(ys[worst % samples]),
        "inequality": "midpoint" if worst < samples else "harmonic",
        "gap": gaps[worst],
    }
    return report.TrialReport(
        suite=f"eq1({label})",
        trials=samples,
        violations=int(np.sum(gaps < -tol)),
        min_gap=float(gaps[worst]),
        worst_witness=witness,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        seed=seed,
        mode="no-violations",
        gaps=gaps,
        tol=tol,
    )


def satisfies_eq1(fn, samples: int = 2000, seed: int = 0, tol: float = 1e-10) -> bool:
    return check_func_eq1(fn, samples=samples, seed=seed, tol=tol).passed


def loewner_monotonicity_oracle(fn, points, tol: float = 1e-9) -> bool:
    """Standard Löwner criterion on a point set: the divided-difference matrix
    [ (f(x_i)-f(x_j))/(x_i-x_j) ], with central-difference derivatives on the
    diagonal, must be positive semidefinite for an operator monotone f."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.size > 12:
        raise ValueError(f"at most 12 points supported, got {pts.size}")
    if pts.min() <= 0:
        raise ValueError("points must be positive")
    if np.unique(pts).size != pts.size:
        raise ValueError("points must be distinct")
    n = pts.size
    f = fn if callable(fn) and not isinstance(fn, ScalarFunction) else fn.__call__
    L = np.empty((n, n))
    for i in range(n):
        h = 1e-6 * pts[i]
        L[i, i] = (f(pts[i] + h) - f(pts[i] - h)) / (2.0 * h)
        for j in range(i):
            L[i, j] = L[j, i] = (f(pts[i]) - f(pts[j])) / (pts[i] - pts[j])
    return bool(np.linalg.eigvalsh(L)[0] >= -tol)


def is_concave_numeric(fn, samples: int = 400, seed: int = 0,
                       sample_range=(1e-3, 1e3), tol: float = 1e-9) -> bool:
    """Midpoint concavity over sampled pairs; the numeric stand-in used when
    the analytic classification is unknown."""
    rng = np.random.default_rng(seed)
    lo, hi = sample_range
    xs = np.exp(rng.uniform(np.log(lo), np.log(hi), samples))
    ys = np.exp(rng.uniform(np.log(lo), np.log(hi), samples))
    evals = fn.eval_array
    gaps = evals((xs + ys) / 2.0) - (evals(xs) + evals(ys)) / 2.0
    return bool(gaps.min() >= -tol)

"""Batch front-end: experiment configs, suite execution, golden-value checks,
and report emission.

Exit codes: 0 all suites passed / all golden rows within tolerance, 1 a suite
or golden row failed, 2 the config failed to parse or validate.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import matcore, posmap, scalarfun, tracefun, verify
from .errors import ConfigError, SpecValidationError, TraceLabError
from .report import complex_matrix_from_hex
from .scalarfun import (GRID, ScalarFunction, breve, check, legendre_numeric,
                        parse_tag, tilde)
from .tracefun import FunctionalSpec
from .verify import TrialConfig

GOLDEN_TOL = 1e-8

_COMMON_KEYS = {"suite", "trials", "seed", "tol", "eig_range"}
_SUITE_KEYS = {
    "joint_convexity": _COMMON_KEYS | {"h", "f", "g", "phi", "psi", "dims",
                                       "normalized", "route"},
    "joint_concavity": _COMMON_KEYS | {"h", "f", "g", "phi", "psi", "dims",
                                       "normalized", "route"},
    "operator_convexity": _COMMON_KEYS | {"g", "f", "phi"},
    "jensen_trace": _COMMON_KEYS | {"fn", "map"},
    "trace_monotonicity": _COMMON_KEYS | {"fn", "n"},
    "sharpness": _COMMON_KEYS | {"r", "n"},
    "remark_concave": _COMMON_KEYS | {"h", "f", "phi"},
}


def _reject_unknown(obj: dict, allowed, where: str):
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys {unknown}", where)


def _tag(obj: dict, key: str, where: str) -> ScalarFunction:
    if key not in obj:
        raise ConfigError(f"missing function tag {key!r}", where)
    try:
        return parse_tag(str(obj[key]))
    except ValueError as exc:
        raise ConfigError(str(exc), f"{where}.{key}") from exc


def _map_descriptor(desc, where: str, default_dims=None) -> posmap.PositiveMap:
    if desc == "identity":
        if default_dims is None:
            raise ConfigError("identity map needs dims", where)
        m, k = default_dims
        if m != k:
            raise ConfigError(f"identity map needs m == k, got ({m}, {k})", where)
        return posmap.identity_map(m)
    if not isinstance(desc, dict):
        raise ConfigError("map descriptor must be 'identity' or an object", where)
    if "kraus" in desc:
        _reject_unknown(desc, {"kraus"}, where)
        try:
            K = np.stack([complex_matrix_from_hex(rows) if isinstance(rows[0][0], str)
                          else np.array([[complex(re, im) for re, im in row] for row in rows])
                          for rows in desc["kraus"]])
            return posmap.PositiveMap(K)
        except (TypeError, ValueError, IndexError) as exc:
            raise ConfigError(f"bad explicit kraus stack: {exc}", f"{where}.kraus") from exc
    _reject_unknown(desc, {"m", "k", "kraus_count", "seed"}, where)
    try:
        m, k = int(desc["m"]), int(desc["k"])
        return posmap.random_map(m, k, int(desc.get("kraus_count", 2)),
                                 int(desc.get("seed", 0)))
    except KeyError as exc:
        raise ConfigError(f"map descriptor missing {exc}", where) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc), where) from exc


def _trial_kwargs(obj: dict) -> dict:
    kw = {}
    if "trials" in obj:
        kw["trials"] = int(obj["trials"])
    if "seed" in obj:
        kw["seed"] = int(obj["seed"])
    if "tol" in obj:
        kw["tol"] = float(obj["tol"])
    if "eig_range" in obj:
        lo, hi = obj["eig_range"]
        kw["eig_range"] = (float(lo), float(hi))
    return kw


def _build_suite(obj: dict, where: str):
    """Returns a zero-argument callable running the configured suite."""
    if not isinstance(obj, dict):
        raise ConfigError("suite entry must be an object", where)
    name = obj.get("suite")
    if name not in _SUITE_KEYS:
        raise ConfigError(f"unknown suite {name!r} (known: {sorted(_SUITE_KEYS)})",
                          f"{where}.suite")
    _reject_unknown(obj, _SUITE_KEYS[name], where)
    kw = _trial_kwargs(obj)

    if name in ("joint_convexity", "joint_concavity"):
        mode = "convex" if name == "joint_convexity" else "concave"
        dims = obj.get("dims")
        if dims is not None:
            if len(dims) != 3:
                raise ConfigError("dims must be [m, n, k]", f"{where}.dims")
            dims = tuple(int(d) for d in dims)
        m, n, k = dims if dims else (3, 3, 3)
        phi = _map_descriptor(obj.get("phi", "identity"), f"{where}.phi", (m, k))
        psi = _map_descriptor(obj.get("psi", "identity"), f"{where}.psi", (n, k))
        h, f, g = _tag(obj, "h", where), _tag(obj, "f", where), _tag(obj, "g", where)
        try:
            spec = FunctionalSpec(h, f, g, phi, psi, mode,
                                  normalized=bool(obj.get("normalized", False)))
        except TraceLabError as exc:
            raise ConfigError(str(exc), where) from exc
        cfg = TrialConfig(spec=spec, route=str(obj.get("route", "core")), **kw)
        runner = (verify.joint_convexity_suite if mode == "convex"
                  else verify.joint_concavity_suite)
        return lambda: runner(cfg)

    if name == "operator_convexity":
        phi = _map_descriptor(obj.get("phi", {"m": 3, "k": 3}), f"{where}.phi")
        fn_g, fn_f = _tag(obj, "g", where), _tag(obj, "f", where)
        cfg = TrialConfig(**kw)
        return lambda: verify.operator_convexity_suite(fn_g, fn_f, phi, cfg)

    if name == "jensen_trace":
        pmap = posmap.normalize_unital(
            _map_descriptor(obj.get("map", {"m": 3, "k": 3}), f"{where}.map"))
        fn = _tag(obj, "fn", where)
        cfg = TrialConfig(**kw)
        return lambda: verify.jensen_trace_suite(fn, pmap, cfg)

    if name == "trace_monotonicity":
        fn = _tag(obj, "fn", where)
        n = int(obj.get("n", 4))
        cfg = TrialConfig(dims=(n, n, n), **kw)
        return lambda: verify.trace_monotonicity_suite(fn, cfg)

    if name == "sharpness":
        if "r" not in obj:
            raise ConfigError("sharpness needs an exponent r", where)
        r = float(obj["r"])
        n = int(obj.get("n", 2))
        cfg = TrialConfig(dims=(n, n, n), **kw)
        return lambda: verify.sharpness_search(r, cfg)

    # remark_concave
    h = _tag(obj, "h", where)
    try:
        hb = breve(h)
    except ValueError as exc:
        raise ConfigError(str(exc), f"{where}.h") from exc
    fn_f = _tag(obj, "f", where) if "f" in obj else ScalarFunction.invpower(1)
    phi = _map_descriptor(obj.get("phi", {"m": 3, "k": 3}), f"{where}.phi")
    cfg = TrialConfig(**kw)
    return lambda: verify.remark_operator_concave_check(hb, phi, cfg, fn_f)


def load_config(path: str):
    """Parse and validate an experiment config; returns (runners, out, fmt)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(exc), path) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}", path) from exc
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object", path)
    _reject_unknown(doc, {"version", "suites", "output", "format"}, path)
    if doc.get("version") != 1:
        raise ConfigError(f"unsupported config version {doc.get('version')!r}; expected 1", path)
    suites = doc.get("suites")
    if not isinstance(suites, list) or not suites:
        raise ConfigError("suites must be a nonempty list", f"{path}.suites")
    fmt = doc.get("format", "json")
    if fmt not in ("json", "csv", "both"):
        raise ConfigError(f"format must be json|csv|both, got {fmt!r}", f"{path}.format")
    runners = [_build_suite(s, f"{path}.suites[{i}]") for i, s in enumerate(suites)]
    return runners, doc.get("output"), fmt


def cmd_run(args) -> int:
    try:
        runners, output, fmt = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        output = args.out
    if args.format:
        fmt = args.format
    results = []
    for i, run in enumerate(runners):
        try:
            rep = run()
        except (TraceLabError, ValueError) as exc:
            print(f"suite[{i}] error: {exc}", file=sys.stderr)
            return 2
        results.append(rep)
        state = "pass" if rep.passed else "FAIL"
        print(f"[{state}] {rep.suite}: trials={rep.trials} violations={rep.violations} "
              f"min_gap={rep.min_gap:.3e} ({rep.runtime_ms:.0f} ms)")
    if output:
        outdir = Path(output)
        outdir.mkdir(parents=True, exist_ok=True)
        if fmt in ("json", "both"):
            payload = {"version": 1, "results": [r.to_dict() for r in results]}
            (outdir / "report.json").write_text(json.dumps(payload, indent=2) + "\n")
        if fmt in ("csv", "both"):
            for i, r in enumerate(results):
                (outdir / f"suite_{i:02d}_{r.suite}.csv").write_text(r.gaps_csv())
        print(f"reports written to {outdir}")
    return 0 if all(r.passed for r in results) else 1


# -- golden-value checks -----------------------------------------------------

def _golden_rows():
    """(label, closed-form, numeric reference) per closed conjugate."""
    rows = []
    log = ScalarFunction.log()
    rows.append(("check(log)", check(log)))
    rows.append(("breve(log)", breve(log)))
    for r in (0.25, 0.5):
        rows.append((f"check(power:{r})", check(ScalarFunction.power(r))))
    for r in (0.25, 0.5, 1.0, 2.0):
        rows.append((f"breve(power:{r})", breve(ScalarFunction.power(r))))
    for r in (0.25, 0.5):
        rows.append((f"check(negpower:{r})", check(ScalarFunction.negpower(r))))
        rows.append((f"breve(negpower:{r})", breve(ScalarFunction.negpower(r))))
    return rows


def golden_legendre_errors():
    """Max relative closed-vs-numeric error on GRID per catalog conjugate."""
    out = []
    for label, tf in _golden_rows():
        closed = tf.closed_form.eval_array(GRID)
        numeric = np.array([tf.numeric(float(t)) for t in GRID])
        err = float(np.max(np.abs(numeric - closed) / (1.0 + np.abs(closed))))
        out.append((label, err))
    return out


def golden_proof_identity_errors(instances: int = 20):
    """Max relative core-vs-inverse-form disagreement over random instances."""
    rng = np.random.default_rng(2024)
    hs = [ScalarFunction.log(), ScalarFunction.power(1), ScalarFunction.power(2),
          ScalarFunction.negpower(0.25), ScalarFunction.negpower(0.5)]
    fs = [ScalarFunction.invpower(1), ScalarFunction.invpower(0.5)]
    out = []
    for h in hs:
        worst = 0.0
        for i in range(instances):
            m, n, k = rng.integers(2, 5, size=3)
            phi = posmap.random_map(int(m), int(k), 2, rng)
            psi = posmap.random_map(int(n), int(k), 2, rng)
            spec = FunctionalSpec(h, fs[i % 2], fs[(i + 1) % 2], phi, psi, "convex")
            A = matcore.random_pd(int(m), rng)
            B = matcore.random_pd(int(n), rng)
            c = tracefun.core_functional(spec, A, B)
            v = tracefun.inverse_form(spec, A, B)
            worst = max(worst, abs(c - v) / (1.0 + abs(c)))
        out.append((f"identity({h.label})", worst))
    return out


def cmd_golden(_args) -> int:
    rows = golden_legendre_errors() + golden_proof_identity_errors()
    width = max(len(r[0]) for r in rows)
    print(f"{'check':<{width}}  max error")
    print("-" * (width + 12))
    failed = []
    for label, err in rows:
        mark = "" if err <= GOLDEN_TOL else "  <-- FAIL"
        print(f"{label:<{width}}  {err:.3e}{mark}")
        if err > GOLDEN_TOL:
            failed.append(label)
    if failed:
        print(f"\n{len(failed)} golden check(s) above {GOLDEN_TOL:.0e}: {failed}")
        return 1
    print(f"\nall {len(rows)} golden checks within {GOLDEN_TOL:.0e}")
    return 0


def cmd_legendre(args) -> int:
    try:
        fn = parse_tag(args.tag)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        ts = [float(v) for v in args.t.split(",")]
    except ValueError:
        print(f"error: bad t grid {args.t!r}", file=sys.stderr)
        return 2
    if any(t <= 0 for t in ts):
        print("error: t grid must be positive", file=sys.stderr)
        return 2

    transforms = []
    for kind in ("check", "breve"):
        src = fn if kind == "check" else tilde(fn)
        try:
            legendre_numeric(src, ts[0])
        except ValueError as exc:
            print(f"# {kind}({args.tag}) undefined: {exc}")
            continue
        transforms.append((kind, src, scalarfun._conjugate_closed(src)))
    if not transforms:
        return 1
    print(f"{'t':>12}  " + "  ".join(
        f"{kind + ' numeric':>16}  {kind + ' closed':>14}" for kind, _, _ in transforms))
    for t in ts:
        cells = []
        for _kind, src, closed_fn in transforms:
            res = legendre_numeric(src, t)
            flag = "*" if res.boundary else " "
            closed = f"{closed_fn(t):14.8g}" if closed_fn is not None else " " * 14
            cells.append(f"{res.value:15.8g}{flag}  {closed}")
        print(f"{t:12.6g}  " + "  ".join(cells))
    print("# * = infimum attained at the truncated domain boundary")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tracelab",
        description="Randomized verification campaigns for operator trace-functional "
                    "convexity and concavity")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the suites in a JSON experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="report directory (overrides config)")
    p_run.add_argument("--format", choices=("json", "csv", "both"))
    p_run.set_defaults(func=cmd_run)

    p_gold = sub.add_parser("golden", help="closed-form vs numeric conjugates and proof identity")
    p_gold.set_defaults(func=cmd_golden)

    p_leg = sub.add_parser("legendre", help="print numeric and closed conjugates of a tag")
    p_leg.add_argument("tag")
    p_leg.add_argument("--t", required=True, help="comma-separated positive grid")
    p_leg.set_defaults(func=cmd_legendre)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

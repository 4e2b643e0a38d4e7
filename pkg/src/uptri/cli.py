"""Command-line interface: ``uptri {classify,scan,alpha-scan,oracle,witness-search}``.

Every flag may also be given in a ``key = value`` file passed with
``--config``; keys are flag names without the leading dashes (``max-word-len``
and ``max_word_len`` are both accepted).  Flags on the command line win.

Exit codes: 0 success, 2 invalid arguments, 3 a residual or oracle check failed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from typing import Optional, Sequence

from . import criteria as C
from . import scan as S
from . import words as W
from .oracle import report, run_oracles
from .triangle import TriangleParams, build_rep, r_from_m, verify_rep

EXIT_OK, EXIT_USAGE, EXIT_RESIDUAL = 0, 2, 3

DEFAULTS = {
    "format": None,
    "workers": 1,
    "seed": 0,
    "tol": 1e-8,
    "max_word_len": 12,
    "max_order": 2000,
    "resolution": None,
    "grid": "xy",
    "perturb": 0.0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI but got {text!r}")
    return lo, hi


def _resolution(text: str) -> tuple[int, int]:
    parts = text.lower().replace("x", ",").split(",")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or NxM but got {text!r}")
    if len(vals) == 1:
        vals = vals * 2
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected N or NxM but got {text!r}")
    return vals[0], vals[1]


def _add_common(p: argparse.ArgumentParser, params=True):
    if params:
        p.add_argument("--r1", type=float)
        p.add_argument("--r2", type=float)
        p.add_argument("--m1", type=float, help="distance; r1 = cosh(m1/2)")
        p.add_argument("--m2", type=float, help="distance; r2 = cosh(m2/2)")
        p.add_argument("--alpha", type=float, help="angular invariant in (0, 2pi)")
    p.add_argument("--config", help="key=value file supplying defaults for any flag")
    p.add_argument("--format", choices=S.FORMATS)
    p.add_argument("--out", help="write output here instead of standard output")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--tol", type=float, help="tolerance of the finite-order test")
    p.add_argument("--max-word-len", type=int)
    p.add_argument("--max-order", type=int)
    p.add_argument("--grid", choices=(S.RR, S.XY))
    p.add_argument("--xrange", type=_range)
    p.add_argument("--yrange", type=_range)
    p.add_argument("--resolution", type=_resolution)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uptri", description="Discreteness criteria for ultra-parallel complex hyperbolic triangle groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    parser.commands = sub.choices
    p = sub.add_parser("classify", help="verdict for one parameter point")
    _add_common(p)
    p.add_argument("--search", action="store_true", help="also enumerate words up to --max-word-len")
    p = sub.add_parser("scan", help="region scan over (r1, r2) or (X, Y)")
    _add_common(p, params=False)
    p = sub.add_parser("alpha-scan", help="verdicts along the angular invariant at fixed r1, r2")
    _add_common(p)
    p.add_argument("--witness", action="store_true", help="test w_A/w_B words for infinite order at every alpha")
    p = sub.add_parser("oracle", help="run the cross-module equivalence suites")
    _add_common(p, params=False)
    p.add_argument("--suite", action="append", choices=("trace", "conditions-star", "shimizu", "ordering", "geometry", "representation"))
    p.add_argument("--perturb", type=float, help=argparse.SUPPRESS)
    p = sub.add_parser("witness-search", help="regular elliptic words with no detected finite order")
    _add_common(p)
    return parser


def read_config(path: str) -> dict:
    out = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read config file: {e}")
    with fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key = value")
            key, value = (x.strip() for x in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def merge_config(ns: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Fill unset flags from the config file, then from ``DEFAULTS``."""
    if ns.config:
        actions = {a.dest: a for a in parser.commands[ns.command]._actions}
        for key, raw in read_config(ns.config).items():
            if key not in actions or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r}")
            if getattr(ns, key) is not None:
                continue
            act = actions[key]
            if act.const is True:  # store_true flags
                value = raw.lower() in ("1", "true", "yes", "on")
            else:
                try:
                    value = act.type(raw) if act.type else raw
                except (ValueError, argparse.ArgumentTypeError) as e:
                    raise UsageError(f"config key {key}: {e}")
                if act.choices and value not in act.choices:
                    raise UsageError(f"config key {key}: {value!r} not in {list(act.choices)}")
            setattr(ns, key, value)
    for key, value in DEFAULTS.items():
        if getattr(ns, key, None) is None and hasattr(ns, key):
            setattr(ns, key, value)
    return ns


def _r_value(ns, idx: int) -> Optional[float]:
    r, m = getattr(ns, f"r{idx}"), getattr(ns, f"m{idx}")
    if r is not None and m is not None:
        raise UsageError(f"give either --r{idx} or --m{idx}, not both")
    if m is not None:
        if not m >= 0:
            raise UsageError(f"--m{idx} must be non-negative")
        return r_from_m(m)
    return r


def params_from(ns, need_alpha: bool = True) -> TriangleParams:
    r1, r2 = _r_value(ns, 1), _r_value(ns, 2)
    if r1 is None or r2 is None:
        raise UsageError("both r1 (or m1) and r2 (or m2) are required")
    alpha = ns.alpha if need_alpha else math.pi
    if alpha is None:
        raise UsageError("--alpha is required")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return TriangleParams.make(r1, r2, alpha)
    except ValueError as e:
        raise UsageError(str(e))


def _check_search_flags(ns):
    if ns.max_word_len < 0 or ns.max_word_len > W.MAX_SEARCH_LEN:
        raise UsageError(f"--max-word-len must lie in [0, {W.MAX_SEARCH_LEN}]")
    if ns.max_order < 2:
        raise UsageError("--max-order must be >= 2")
    if not ns.tol > 0:
        raise UsageError("--tol must be positive")
    if ns.workers < 1:
        raise UsageError("--workers must be >= 1")


def _emit(text: str, ns) -> None:
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_safe(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _witness_dict(w: W.EllipticWitness) -> dict:
    return {
        "word": list(w.word),
        "trace": w.trace,
        "discriminant": w.discriminant,
        "min_order_tested": w.min_order_tested,
        "finite_order_detected": w.finite_order_detected,
        "best_order": w.best_order,
        "best_error": w.best_error,
    }


def verdict_record(v: C.Verdict, rep_report) -> dict:
    p = v.params
    sh = v.shimizu
    reg = v.region
    ells = [l for l in range(-3, 4) if l not in (-1, 0)]
    return _json_safe({
        "params": {"r1": p.r1, "r2": p.r2, "m1": p.m1, "m2": p.m2, "alpha": p.alpha},
        "verdict": v.label,
        "conflict": v.conflict,
        "region": {
            "tag": reg.label,
            "k": reg.k,
            "X": reg.point.X,
            "Y": reg.point.Y,
            "all_alpha_discrete": reg.all_alpha_discrete,
            "phi_k_satisfied": reg.phi_k_satisfied,
            "adjacent": list(reg.adjacent),
        },
        "evidence": [{"criterion": e.criterion, "fired": e.fired, "residual": e.residual, "note": e.note} for e in v.evidence],
        "conditions_star": {
            "lhs": v.star.lhs,
            "sup_f_A": v.star.sup_fa,
            "argmax_l": v.star.argmax_l,
            "f_B": v.star.f_b,
            "holds": v.star.holds,
            "scan_window": v.star.scan_window,
            "saturated": v.star.saturated,
        },
        "traces": {
            "wB": C.trace_wB(p.r1, p.r2, p.alpha),
            "wA": {str(l): C.trace_wA(l, p.r1, p.r2, p.alpha) for l in ells},
        },
        "shimizu": {
            "xi": sh.xi,
            "v": sh.v,
            "lhs": sh.lhs,
            "rhs": sh.rhs,
            "case": sh.case_tag,
            "b": sh.b_coef,
            "c": sh.c_coef,
            "d": sh.d_coef,
            "x_value": sh.x_value,
            "threshold": sh.threshold,
            "non_discrete": sh.closed_form_non_discrete,
            "direct_non_discrete": sh.direct_non_discrete,
        },
        "witnesses": [_witness_dict(w) for w in v.witnesses],
        "representation_residuals": rep_report.residuals,
    })


def cmd_classify(ns) -> int:
    p = params_from(ns)
    _check_search_flags(ns)
    rep_report = verify_rep(build_rep(p.r1, p.r2, p.alpha))
    v = C.decide(
        p.r1, p.r2, p.alpha,
        witness=True,
        search_len=ns.max_word_len if ns.search else 0,
        max_order=ns.max_order,
        tol=ns.tol,
    )
    _emit(json.dumps(verdict_record(v, rep_report), indent=1) + "\n", ns)
    if not rep_report.passed:
        print(f"residual check failed: {rep_report.failures}", file=sys.stderr)
        return EXIT_RESIDUAL
    return EXIT_OK


def _scan_config(ns, mode: str, r1=None, r2=None) -> S.ScanConfig:
    fmt = ns.format or "csv"
    xr = ns.xrange or S.DEFAULT_RANGES[mode][0]
    yr = ns.yrange or S.DEFAULT_RANGES[mode][1]
    res = ns.resolution or ((361, 1) if mode == S.ALPHA else (31, 31))
    try:
        return S.ScanConfig(
            mode=mode, xrange=tuple(xr), yrange=tuple(yr) if yr else None, resolution=tuple(res),
            fmt=fmt, workers=ns.workers, r1=r1, r2=r2,
            witness=getattr(ns, "witness", False), max_order=ns.max_order, tol=ns.tol,
        )
    except ValueError as e:
        raise UsageError(str(e))


def cmd_scan(ns) -> int:
    cfg = _scan_config(ns, ns.grid)
    _emit(S.render(S.run_scan(cfg), cfg), ns)
    return EXIT_OK


def cmd_alpha_scan(ns) -> int:
    p = params_from(ns, need_alpha=False)
    if ns.alpha is not None:
        raise UsageError("alpha-scan sweeps alpha; use --xrange instead of --alpha")
    cfg = _scan_config(ns, S.ALPHA, p.r1, p.r2)
    _emit(S.render(S.run_scan(cfg), cfg), ns)
    return EXIT_OK


def cmd_oracle(ns) -> int:
    results = run_oracles(seed=ns.seed, perturb=ns.perturb, only=ns.suite)
    if ns.format == "json":
        text = json.dumps(report(results), indent=1) + "\n"
    else:
        text = "".join(r.line() + "\n" for r in results)
    _emit(text, ns)
    return EXIT_OK if all(r.passed for r in results) else EXIT_RESIDUAL


def cmd_witness_search(ns) -> int:
    p = params_from(ns)
    _check_search_flags(ns)
    rep = build_rep(p.r1, p.r2, p.alpha)
    found = W.search_elliptic_infinite_order(rep, ns.max_word_len, ns.max_order, ns.tol, ns.workers)
    out = {
        "params": {"r1": p.r1, "r2": p.r2, "alpha": p.alpha},
        "max_word_len": ns.max_word_len,
        "max_order": ns.max_order,
        "tol": ns.tol,
        "label": "non-discrete (numerical witness)" if found else "no witness found",
        "witnesses": [_witness_dict(w) for w in found],
    }
    _emit(json.dumps(_json_safe(out), indent=1) + "\n", ns)
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "scan": cmd_scan,
    "alpha-scan": cmd_alpha_scan,
    "oracle": cmd_oracle,
    "witness-search": cmd_witness_search,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        ns = merge_config(ns, parser)
        if ns.workers is not None and ns.workers < 1:
            raise UsageError("--workers must be >= 1")
        return COMMANDS[ns.command](ns)
    except UsageError as e:
        print(f"uptri: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"uptri: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Closed-form discreteness and ellipticity criteria for [m1, m2, 0] groups.

Everything here is a function of ``r1 >= r2 >= 1`` and the angular invariant.
Comparisons are inclusive with an absolute slack of ``TOL.star``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .heisenberg import shimizu_test
from .hermitian import REGULAR_ELLIPTIC, TOL, classify_trace, deltoid_discriminant
from .triangle import TWO_PI, TriangleParams, rep_from_params
from . import words as W

SQRT3 = math.sqrt(3.0)
L_MAX = 10**6
WINDOW_DELTA = 1e-8
# Goldman-Parker / Schwartz threshold for ideal triangle groups (cited, not derived here)
IDEAL_TRIANGLE_SIN_THRESHOLD = math.sqrt(6.0) / 16.0


# -- f_A, f_B -----------------------------------------------------------------

def _check_ell(ell: int) -> None:
    if ell in (-1, 0):
        raise ValueError("f_A is undefined at ell = -1 and ell = 0")


def f_A(ell: int, r1: float, r2: float) -> float:
    _check_ell(ell)
    return (1.0 - (ell * r1 - (ell + 1) * r2) ** 2) / (ell * (ell + 1))


def f_A_rearranged(ell: int, r1: float, r2: float) -> float:
    _check_ell(ell)
    return (r1 * r1 - 1.0) / (ell + 1) - (r2 * r2 - 1.0) / ell - (r1 - r2) ** 2


def f_B(r1: float, r2: float) -> float:
    return 1.0 - (r1 - r2) ** 2


def f_A_array(ells: np.ndarray, r1: float, r2: float) -> np.ndarray:
    ells = np.asarray(ells, dtype=float)
    return (1.0 - (ells * r1 - (ells + 1) * r2) ** 2) / (ells * (ells + 1))


def scan_window(r1: float, r2: float) -> tuple[int, bool]:
    """Window ``L`` beyond which ``f_A`` is certainly negative, and whether it hit ``L_MAX``."""
    raw = 2 + math.ceil((r1 * r1 + r2 * r2 - 2.0) / max((r1 - r2) ** 2, WINDOW_DELTA))
    return (L_MAX, True) if raw > L_MAX else (raw, False)


def window_ells(window: int) -> np.ndarray:
    return np.concatenate([np.arange(-window, -1), np.arange(1, window + 1)])


@dataclass(frozen=True)
class SupFA:
    value: float
    argmax: Optional[int]
    window: int
    saturated: bool = False


def sup_f_A(r1: float, r2: float) -> SupFA:
    """Supremum of ``f_A`` over the integers other than -1 and 0.

    For ``r1 == r2`` every value is ``-(r^2 - 1) / (ell (ell + 1)) <= 0`` and the
    supremum 0 is only attained when ``r == 1``; ``argmax`` is then 1, and
    ``None`` otherwise.
    """
    if r1 == r2:
        return SupFA(0.0, 1 if r1 == 1.0 else None, 0)
    window, saturated = scan_window(r1, r2)
    ells = window_ells(window)
    vals = f_A_array(ells, r1, r2)
    i = int(np.argmax(vals))
    return SupFA(float(vals[i]), int(ells[i]), window, saturated)


# -- conditions (*) -------------------------------------------------------------

def star_lhs(r1: float, r2: float, alpha: float) -> float:
    return 4.0 * r1 * r2 * math.sin(alpha / 2.0) ** 2


def a_values(ells, r1: float, r2: float, alpha: float) -> np.ndarray:
    theta = (math.pi - alpha) / 2.0
    e = np.exp(1j * theta)
    step = r2 * e + r1 / e
    return np.abs(r2 * e + np.asarray(ells, dtype=float) * step)


def b_value(r1: float, r2: float, alpha: float) -> float:
    theta = (math.pi - alpha) / 2.0
    return abs(r2 * np.exp(1j * theta) + r1 * np.exp(-1j * theta))


@dataclass(frozen=True)
class StarCheck:
    lhs: float
    sup_fa: float
    argmax_l: Optional[int]
    f_b: float
    holds: bool
    scan_window: int
    saturated: bool = False
    direct_holds: Optional[bool] = None

    @property
    def margin(self) -> float:
        return self.lhs - max(self.sup_fa, self.f_b)


def conditions_star(r1: float, r2: float, alpha: float, check: bool = False) -> StarCheck:
    """Evaluate conditions (*) through ``f_A``/``f_B``.

    With ``check=True`` the equivalent form ``a(ell) >= 1, b >= 1`` is also
    evaluated over the same window and stored in ``direct_holds``.
    """
    lhs = star_lhs(r1, r2, alpha)
    sup = sup_f_A(r1, r2)
    fb = f_B(r1, r2)
    holds = lhs >= max(sup.value, fb) - TOL.star
    direct = None
    if check:
        window = sup.window or scan_window(r1, r2)[0]
        a = a_values(window_ells(min(window, L_MAX)), r1, r2, alpha)
        direct = bool(np.min(a) >= 1.0 - TOL.star and b_value(r1, r2, alpha) >= 1.0 - TOL.star)
    return StarCheck(lhs, sup.value, sup.argmax, fb, bool(holds), sup.window, sup.saturated, direct)


def simple_sine_test(r1: float, r2: float, alpha: float) -> bool:
    return math.sin(alpha / 2.0) >= 1.0 / (r1 + r2) - TOL.star


# -- traces ----------------------------------------------------------------------

def trace_wA(ell: int, r1: float, r2: float, alpha: float) -> float:
    s2 = math.sin(alpha / 2.0) ** 2
    return 4.0 * (ell * r1 - (ell + 1) * r2) ** 2 - 1.0 + 16.0 * ell * (ell + 1) * r1 * r2 * s2


def trace_wB(r1: float, r2: float, alpha: float) -> complex:
    return -(4 * r1 * r1 + 4 * r2 * r2 + 1) + 8 * r1 * r2 * complex(math.cos(alpha), math.sin(alpha))


# -- region classification -------------------------------------------------------

TYPE_A, TYPE_B, IDEAL_TYPE_B, BOUNDARY = "typeA", "typeB", "ideal-typeB", "boundary"


@dataclass(frozen=True)
class RegionPoint:
    X: float
    Y: float
    defined: bool


def region_point(r1: float, r2: float) -> RegionPoint:
    if r2 == 1.0:
        return RegionPoint(math.nan, math.nan, False)
    d = r2 * r2 - 1.0
    return RegionPoint((r1 * r1 - r2 * r2) / d, 1.0 / d, True)


def rs_from_xy(X: float, Y: float) -> tuple[float, float]:
    if not Y > 0:
        raise ValueError("figure coordinates need Y > 0")
    r2sq = 1.0 + 1.0 / Y
    return math.sqrt(r2sq + X / Y), math.sqrt(r2sq)


def phi_k(k: int, X: float) -> float:
    return (k * k * X - 2 * k - 1) ** 2 / (4.0 * k * (k + 1) * (k * X - 1))


def typeA_lower(k: int, Y: float) -> float:
    return 1.0 / k + (k + 1) * Y


def boundary_vertices(kmax: int) -> list[tuple[float, float]]:
    """Vertices ``(2/k, 1/(k(k+1)))`` of the broken line separating the two regimes."""
    return [(2.0 / k, 1.0 / (k * (k + 1))) for k in range(1, kmax + 1)]


def broken_line_y(X: float) -> float:
    """Height of the broken line (and its ray of slope 1/2 beyond X = 2)."""
    if X <= 0:
        return 0.0
    k = 1 if X >= 2 else math.ceil(2.0 / X - 1e-15)
    return (X - 1.0 / k) / (k + 1)


def _k_candidates(X: float) -> list[int]:
    if X <= 0:
        return []
    if X >= 2:
        return [1, 2] if X <= 2 + 1e-9 else [1]
    k = math.ceil(2.0 / X)
    return sorted({max(1, k - 1), k, k + 1})


def _typeA_holds(k: int, X: float, Y: float, eps: float) -> bool:
    lower = max(typeA_lower(k, Y), 2.0 / k)
    if X < lower - eps:
        return False
    return k == 1 or X <= 2.0 / (k - 1) + eps


def _typeB_slack(X: float, Y: float) -> float:
    """``min_k (1/k + (k+1) Y) - X``; non-negative exactly in the typeB region."""
    k0 = max(1, int(math.sqrt(1.0 / Y)))
    return min(typeA_lower(k, Y) for k in range(max(1, k0 - 2), k0 + 3)) - X


def all_alpha_intervals_hold(r1: float, r2: float) -> bool:
    """``r1 - r2`` in the union of ``[(r2+1)/k, (r2-1)/(k-1)]`` (k >= 2) and ``[r2+1, inf)``."""
    eps = TOL.star
    diff = r1 - r2
    if diff >= r2 + 1.0 - eps:
        return True
    kmax = int(math.floor((r2 + 1.0) / 2.0)) + 1
    for k in range(2, kmax + 1):
        if (r2 + 1.0) / k - eps <= diff <= (r2 - 1.0) / (k - 1) + eps:
            return True
    return False


def phi_region_holds(r1: float, r2: float) -> tuple[bool, Optional[int]]:
    if r2 == 1.0:
        return r1 >= 3.0 - TOL.star, None
    pt = region_point(r1, r2)
    eps = TOL.star
    for k in _k_candidates(pt.X):
        in_band = pt.X >= 2.0 / k - eps and (k == 1 or pt.X <= 2.0 / (k - 1) + eps)
        if in_band and pt.X > 1.0 / k and pt.Y <= phi_k(k, pt.X) + eps:
            return True, k
    return False, None


@dataclass(frozen=True)
class RegionVerdict:
    tag: str
    k: Optional[int]
    point: RegionPoint
    all_alpha_discrete: bool
    phi_k_satisfied: bool
    adjacent: tuple[str, ...] = ()
    ideal: bool = False

    @property
    def label(self) -> str:
        return f"{self.tag}({self.k})" if self.tag == TYPE_A else self.tag


def classify_region(r1: float, r2: float) -> RegionVerdict:
    if r1 < r2 or r2 < 1.0:
        raise ValueError("classify_region needs r1 >= r2 >= 1")
    phi_ok, _ = phi_region_holds(r1, r2)
    every_alpha = all_alpha_intervals_hold(r1, r2) or phi_ok
    pt = region_point(r1, r2)
    eps = TOL.star * max(1.0, abs(pt.X) if pt.defined else 1.0)
    if not pt.defined:
        # r2 = 1: which f_A value dominates changes at r1 = sqrt(3)
        if abs(r1 - SQRT3) <= eps:
            return RegionVerdict(BOUNDARY, None, pt, every_alpha, phi_ok, ("typeA(1)", IDEAL_TYPE_B), ideal=True)
        if r1 < SQRT3:
            return RegionVerdict(IDEAL_TYPE_B, None, pt, every_alpha, phi_ok, ideal=True)
        return RegionVerdict(TYPE_A, 1, pt, every_alpha, phi_ok, ideal=True)

    X, Y = pt.X, pt.Y
    matches = [f"typeA({k})" for k in _k_candidates(X) if _typeA_holds(k, X, Y, eps)]
    slack = _typeB_slack(X, Y)
    if slack >= -eps:
        matches.append(TYPE_B)
    strict_A = [k for k in _k_candidates(X) if _typeA_holds(k, X, Y, -eps)]
    if len(matches) == 1 and (matches[0] == TYPE_B and slack > eps or strict_A):
        if matches[0] == TYPE_B:
            return RegionVerdict(TYPE_B, None, pt, every_alpha, phi_ok)
        return RegionVerdict(TYPE_A, strict_A[0], pt, every_alpha, phi_ok)
    return RegionVerdict(BOUNDARY, None, pt, every_alpha, phi_ok, tuple(matches))


# -- ellipticity of w_A^(k) ------------------------------------------------------

@dataclass(frozen=True)
class EllipticWindow:
    """Range of ``sin^2(alpha/2)`` where only ``w_A^(k)`` among the ``w_A`` family is elliptic."""

    k: int
    sin2_lo: float
    sin2_hi: float
    reason: str = ""

    @property
    def empty(self) -> bool:
        return not self.sin2_hi > self.sin2_lo

    @property
    def alpha_lo(self) -> float:
        return 2.0 * math.asin(math.sqrt(self.sin2_lo)) if not self.empty else math.nan

    @property
    def alpha_hi(self) -> float:
        return 2.0 * math.asin(math.sqrt(min(self.sin2_hi, 1.0))) if not self.empty else math.nan

    def contains(self, alpha: float) -> bool:
        s2 = math.sin(alpha / 2.0) ** 2
        return not self.empty and self.sin2_lo <= s2 < self.sin2_hi


def wak_elliptic_window(r1: float, r2: float, k: int) -> EllipticWindow:
    if k < 2:
        raise ValueError("k must be >= 2")
    pt = region_point(r1, r2)
    if not pt.defined:
        return EllipticWindow(k, 0.0, 0.0, "needs r2 > 1")
    if not _typeA_holds(k, pt.X, pt.Y, TOL.star):
        return EllipticWindow(k, 0.0, 0.0, f"(r1, r2) outside the typeA({k}) region")
    scale = 4.0 * r1 * r2
    lo = max(f_A(k + 1, r1, r2), f_A(k - 1, r1, r2), 0.0) / scale
    hi = f_A(k, r1, r2) / scale
    if not hi > lo:
        return EllipticWindow(k, lo, hi, "empty: f_A(k) does not exceed its neighbours")
    return EllipticWindow(k, lo, hi)


# -- ellipticity of w_B ------------------------------------------------------------

NEVER_ELLIPTIC, WINDOW, ISOSCELES_THRESHOLD = "never-elliptic", "window", "isosceles-threshold"


def q_poly(x, r1: float, r2: float):
    s = r1 * r1 + r2 * r2
    t = r1 * r1 - r2 * r2
    return 4 * x**3 + x**2 - 2 * x + 1 + 4 * s * x * (1 + x) + 4 * t * t


def q_coefficients(r1: float, r2: float) -> list[float]:
    s = r1 * r1 + r2 * r2
    t = r1 * r1 - r2 * r2
    return [4.0, 1.0 + 4 * s, -2.0 + 4 * s, 1.0 + 4 * t * t]


def wb_never_elliptic_margin(r1: float, r2: float) -> float:
    return 7.0 - 4.0 * (r1 * r1 + r2 * r2) + 16.0 * (r1 * r1 - r2 * r2) ** 2


def q_roots_in_interval(r1: float, r2: float) -> list[float]:
    """Roots of Q in [-1, 1], bracketed by the minimum at X = -1/2."""
    f = lambda x: q_poly(x, r1, r2)
    fmid = f(-0.5)
    if fmid > 0:
        return []
    if fmid == 0:
        return [-0.5]
    roots = []
    left = f(-1.0)
    if left == 0:
        roots.append(-1.0)
    else:
        roots.append(brentq(f, -1.0, -0.5, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    roots.append(brentq(f, -0.5, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return roots


def alpha_from_q_root(x: float, r1: float, r2: float) -> float:
    """Angular invariant in ``[0, pi]`` at which tr(w_B) meets the deltoid point with ``cos(phi) = x``."""
    phi = math.acos(max(-1.0, min(1.0, x)))
    z = 2 * complex(math.cos(phi), math.sin(phi)) + complex(math.cos(2 * phi), -math.sin(2 * phi))
    e = (z + 4 * r1 * r1 + 4 * r2 * r2 + 1) / (8 * r1 * r2)
    return abs(math.atan2(e.imag, e.real))


def isosceles_wb_sin2_threshold(r: float) -> float:
    """``sin^2(alpha0/2)`` separating elliptic from non-elliptic w_B when ``r1 = r2 = r``."""
    u = r * r
    if u - 1.0 < 1e-9:
        return 3.0 / 128.0  # limit r -> 1 of the expression below
    den = u * (64 * u * u - 80 * u + 13 + (8 * u - 7) ** 1.5 * (8 * u + 1) ** 0.5)
    return (2 * u - 2) / den


@dataclass(frozen=True)
class WbEllipticity:
    tag: str
    q_roots: tuple[float, ...]
    alpha_roots: tuple[float, ...]
    elliptic_intervals: tuple[tuple[float, float], ...]
    alpha0: Optional[float] = None
    alpha1: Optional[float] = None
    alpha2: Optional[float] = None

    def is_elliptic(self, alpha: float) -> bool:
        return any(a < alpha < b for a, b in self.elliptic_intervals)


def _elliptic_intervals(r1: float, r2: float, cuts: list[float]) -> tuple[tuple[float, float], ...]:
    edges = sorted({0.0, TWO_PI, *cuts, *(TWO_PI - c for c in cuts)})
    out = []
    for a, b in zip(edges, edges[1:]):
        if b - a <= 1e-14:
            continue
        mid = 0.5 * (a + b)
        if classify_trace(trace_wB(r1, r2, mid)).tag == REGULAR_ELLIPTIC:
            out.append((a, b))
    merged: list[list[float]] = []
    for a, b in out:
        if merged and abs(merged[-1][1] - a) <= 1e-14:
            merged[-1][1] = b
        else:
            merged.append([a, b])
    return tuple((a, b) for a, b in merged)


def wB_ellipticity(r1: float, r2: float) -> WbEllipticity:
    if wb_never_elliptic_margin(r1, r2) > 0:
        return WbEllipticity(NEVER_ELLIPTIC, (), (), ())
    roots = q_roots_in_interval(r1, r2)
    alphas = [alpha_from_q_root(x, r1, r2) for x in roots]
    intervals = _elliptic_intervals(r1, r2, [a for a in alphas if a > 0])
    if r1 == r2:
        nonzero = [a for a in alphas if a > 1e-12]
        a0 = nonzero[0] if nonzero else None
        return WbEllipticity(ISOSCELES_THRESHOLD, tuple(roots), tuple(alphas), intervals, alpha0=a0)
    a1, a2 = sorted(alphas) if len(alphas) == 2 else (alphas[0], alphas[0])
    return WbEllipticity(WINDOW, tuple(roots), tuple(alphas), intervals, alpha1=a1, alpha2=a2)


# -- ordering of f_A values ------------------------------------------------------

def ordering_hypothesis(part: str, k: int, r1: float, r2: float) -> bool:
    if part == "a":
        return k >= 1 and r1 * r1 - 1 >= (k + 2) / k * (r2 * r2 - 1)
    if part == "b":
        return k >= 2 and r1 * r1 - 1 <= (k + 1) / (k - 1) * (r2 * r2 - 1)
    raise ValueError("part must be 'a' or 'b'")


def ordering_counterexamples(part: str, k: int, r1: float, r2: float, span: int = 50, tol: float = 1e-12):
    """Pairs ``(l1, l2)`` in ``[-span, span]`` covered by the ordering claim but violating ``f_A(l1) >= f_A(l2)``."""
    ells = [l for l in range(-span, span + 1) if l not in (-1, 0)]
    vals = {l: f_A(l, r1, r2) for l in ells}
    bad = []
    for l1 in ells:
        for l2 in ells:
            if part == "a":
                covered = (k <= l1 < l2) or (l2 <= -2 and l1 >= k / 2)
            else:
                covered = 1 <= l2 < l1 <= k
            if covered and vals[l1] < vals[l2] - tol * max(1.0, abs(vals[l2])):
                bad.append((l1, l2))
    return bad


# -- overall verdict -----------------------------------------------------------------

DISCRETE, DISCRETE_FAITHFUL, NON_DISCRETE, UNDETERMINED = (
    "discrete",
    "discrete-and-faithful",
    "non-discrete",
    "undetermined",
)


@dataclass(frozen=True)
class Evidence:
    criterion: str
    fired: bool
    residual: float
    note: str = ""


@dataclass
class Verdict:
    verdict: str
    params: TriangleParams
    region: RegionVerdict
    star: StarCheck
    shimizu: object
    evidence: list[Evidence] = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    numerical: bool = False
    conflict: bool = False

    @property
    def label(self) -> str:
        if self.verdict == NON_DISCRETE and self.numerical:
            return "non-discrete (numerical witness)"
        return self.verdict


def decide(
    r1: float,
    r2: float,
    alpha: float,
    witness: bool = True,
    search_len: int = 0,
    max_order: int = 2000,
    tol: float = 1e-8,
) -> Verdict:
    """Combine every criterion into one verdict.

    With ``witness`` set, the ``w_A`` words that the closed forms flag as
    elliptic and ``w_B`` are tested for infinite order; ``search_len > 0``
    additionally enumerates all reduced words up to that length.
    """
    params = TriangleParams.make(r1, r2, alpha)
    r1, r2 = params.r1, params.r2
    ev: list[Evidence] = []

    region = classify_region(r1, r2)
    star = conditions_star(r1, r2, alpha)
    ev.append(Evidence("conditions-star", star.holds, star.margin))
    sine = simple_sine_test(r1, r2, alpha)
    ev.append(Evidence("sine-test", sine, math.sin(alpha / 2) - 1.0 / (r1 + r2)))
    ev.append(Evidence("all-alpha-region", region.all_alpha_discrete, 0.0))
    re_wb = trace_wB(r1, r2, alpha).real
    typeb = region.tag == IDEAL_TYPE_B or region.tag == TYPE_B
    ev.append(Evidence("typeB-trace-wB", typeb and re_wb <= -5 + TOL.star, -5.0 - re_wb,
                       "" if typeb else "not in typeB region"))

    faithful = None
    if region.tag == TYPE_A and not region.ideal:
        tk = trace_wA(region.k, r1, r2, alpha)
        faithful = tk >= 3.0 - TOL.star
        ev.append(Evidence(f"typeA-trace-wA({region.k})", faithful, tk - 3.0,
                           "discrete and faithful iff w_A^(k) non-elliptic"))

    sh = shimizu_test(params)
    ev.append(Evidence("shimizu", sh.closed_form_non_discrete, sh.threshold - sh.x_value))

    witnesses = []
    if witness or search_len:
        rep = rep_from_params(params)
        if search_len:
            witnesses = W.search_elliptic_infinite_order(rep, search_len, max_order, tol)
        else:
            cands = [W.word_wB()]
            if star.argmax_l is not None and star.lhs < star.sup_fa:
                cands.append(W.word_wA(star.argmax_l))
            if region.tag == TYPE_A and region.k:
                cands.append(W.word_wA(region.k))
            for w in dict.fromkeys(cands):
                wit = W.analyze_word(w, rep, max_order, tol)
                if wit is not None and wit.finite_order_detected is None:
                    witnesses.append(wit)
        ev.append(Evidence("elliptic-witness", bool(witnesses), float(len(witnesses))))

    discrete = star.holds or sine or region.all_alpha_discrete or (typeb and re_wb <= -5 + TOL.star)
    nondiscrete = sh.closed_form_non_discrete or bool(witnesses)
    if faithful:
        verdict = DISCRETE_FAITHFUL
    elif discrete:
        verdict = DISCRETE
    elif nondiscrete:
        verdict = NON_DISCRETE
    else:
        verdict = UNDETERMINED
    numerical = verdict == NON_DISCRETE and not sh.closed_form_non_discrete
    return Verdict(verdict, params, region, star, sh, ev, witnesses, numerical,
                   conflict=(discrete or bool(faithful)) and nondiscrete)

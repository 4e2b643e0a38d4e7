"""Cross-module equivalence suites run by ``uptri oracle``.

Each suite draws seeded random parameters, computes the same quantity two
independent ways and reports the worst residual.  ``perturb`` adds a constant
to the closed-form traces; it exists so the negative control can be exercised
from the command line.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import criteria as C
from . import words as W
from .heisenberg import (
    HeisPoint,
    act,
    cygan_distance,
    heis_translation,
    shimizu_rhs_closed,
    shimizu_test,
    unit_spinal_residual,
    vertical_inversion_action,
    VerticalChain,
)
from .triangle import TriangleParams, build_rep, reflection_matrix, verify_rep


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    max_residual: float
    tolerance: float
    failures: int = 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.name}: cases={self.cases} failures={self.failures} "
            f"max_residual={self.max_residual:.3e} tol={self.tolerance:.1e}"
        )


def random_params(rng: np.random.Generator, n: int, r_max: float = 5.0) -> list[TriangleParams]:
    r1 = rng.uniform(1.0, r_max, n)
    r2 = 1.0 + (r1 - 1.0) * rng.uniform(0.0, 1.0, n)
    alpha = rng.uniform(1e-6, 2 * math.pi - 1e-6, n)
    return [TriangleParams(float(a), float(b), float(c)) for a, b, c in zip(r1, r2, alpha)]


def trace_suite(rng, n: int = 500, perturb: float = 0.0, tol: float = 1e-9) -> SuiteResult:
    ells = [l for l in range(-6, 7) if l not in (-1, 0)]
    worst, bad = 0.0, 0
    for p in random_params(rng, n):
        rep = build_rep(p.r1, p.r2, p.alpha)
        res = [abs(np.trace(W.evaluate(W.word_wB(), rep)) - (C.trace_wB(p.r1, p.r2, p.alpha) + perturb))]
        for l in ells:
            closed = C.trace_wA(l, p.r1, p.r2, p.alpha) + perturb
            res.append(abs(np.trace(W.evaluate(W.word_wA(l), rep)) - closed))
        m = max(res)
        worst = max(worst, m)
        bad += m >= tol
    return SuiteResult("trace", bad == 0, n, worst, tol, bad)


def star_suite(rng, n: int = 500, margin: float = 1e-9) -> SuiteResult:
    """f_A/f_B form, a(l)/b closed form and the brute-force orbit must all agree."""
    bad = checked = 0
    worst = 0.0
    for p in random_params(rng, n):
        st = C.conditions_star(p.r1, p.r2, p.alpha, check=True)
        if abs(st.margin) < margin:
            continue
        checked += 1
        window = max(st.scan_window, 1)
        orbit = W.lambda_condition_check(p.r1, p.r2, p.alpha, window)
        if not (st.holds == st.direct_holds == orbit):
            bad += 1
        # a(l) and the orbit norms are the same numbers up to the factor 2
        th = p.theta
        ells = C.window_ells(min(window, 200))
        a = C.a_values(ells, p.r1, p.r2, p.alpha)
        orb = np.array([W.lambda_orbit_norm(W.LambdaElement(int(l), True), p.r1, p.r2, th) for l in ells])
        worst = max(worst, float(np.max(np.abs(orb - 2 * a))))
    return SuiteResult("conditions-star", bad == 0 and worst < 1e-9, checked, worst, 1e-9, bad)


def shimizu_suite(rng, n: int = 1000) -> SuiteResult:
    bad = 0
    worst = 0.0
    for p in random_params(rng, n):
        rep = shimizu_test(p)
        resid = abs(rep.rhs - shimizu_rhs_closed(p.r1, p.r2, p.alpha))
        worst = max(worst, resid / max(1.0, rep.rhs))
        bad += not rep.agree
    return SuiteResult("shimizu", bad == 0 and worst < 1e-9, n, worst, 1e-9, bad)


def ordering_suite(rng, n: int = 100) -> SuiteResult:
    bad = cases = 0
    for part in ("a", "b"):
        got = 0
        while got < n:
            k = int(rng.integers(1 if part == "a" else 2, 6))
            r2 = float(rng.uniform(1.0, 4.0))
            r1 = float(rng.uniform(r2, 10.0))
            if not C.ordering_hypothesis(part, k, r1, r2):
                continue
            got += 1
            bad += bool(C.ordering_counterexamples(part, k, r1, r2))
        cases += got
    return SuiteResult("ordering", bad == 0, cases, float(bad), 0.5, bad)


def geometry_suite(rng, n: int = 10_000, slack: float = 1e-12) -> SuiteResult:
    def pts(m):
        z = rng.normal(size=m) + 1j * rng.normal(size=m)
        v = rng.normal(size=m) * 2
        return [HeisPoint(complex(a), float(b)) for a, b in zip(z, v)]

    P, Q, R = pts(n), pts(n), pts(n)
    violations = 0
    worst = 0.0
    for p, q, r in zip(P, Q, R):
        dpq, dqr, dpr = cygan_distance(p, q), cygan_distance(q, r), cygan_distance(p, r)
        violations += dpr > dpq + dqr + slack
        worst = max(worst, abs(dpq - cygan_distance(q, p)))

    # the reflection in the unit-radius chain round 0 preserves the unit spinal sphere
    rep = build_rep(1.5, 1.2, 1.0)
    for phi in np.linspace(0, 2 * math.pi, 20, endpoint=False):
        for s in (-0.7, 0.0, 0.4):
            rad = (1 - s * s) ** 0.25
            p = HeisPoint(complex(rad * math.cos(phi), rad * math.sin(phi)), s)
            worst = max(worst, abs(unit_spinal_residual(act(rep.i3, p))))

    # inversion in a vertical chain, matrix action against 2 zeta - xi
    for _ in range(20):
        zeta = complex(*rng.normal(size=2))
        xi = complex(*rng.normal(size=2))
        m = reflection_matrix(VerticalChain(zeta).polar)
        q = act(m, HeisPoint(xi, float(rng.normal())))
        worst = max(worst, abs(q.zeta - vertical_inversion_action(zeta, xi)))

    # Cygan metric is invariant under Heisenberg translations
    for p, q in zip(P[:200], Q[:200]):
        t = heis_translation(complex(*rng.normal(size=2)), float(rng.normal()))
        worst = max(worst, abs(cygan_distance(act(t, p), act(t, q)) - cygan_distance(p, q)) / max(1, cygan_distance(p, q)))
    return SuiteResult("geometry", violations == 0 and worst < 1e-9, n, worst, 1e-9, violations)


def rep_suite(rng, n: int = 200) -> SuiteResult:
    bad = 0
    worst = 0.0
    for p in random_params(rng, n):
        r = verify_rep(build_rep(p.r1, p.r2, p.alpha))
        worst = max(worst, max(r.residuals.values()))
        bad += not r.passed
    return SuiteResult("representation", bad == 0, n, worst, 1e-9, bad)


SUITES = {
    "trace": trace_suite,
    "conditions-star": star_suite,
    "shimizu": shimizu_suite,
    "ordering": ordering_suite,
    "geometry": geometry_suite,
    "representation": rep_suite,
}


def run_oracles(seed: int = 0, perturb: float = 0.0, only=None) -> list[SuiteResult]:
    out = []
    for i, (name, fn) in enumerate(SUITES.items()):
        if only and name not in only:
            continue
        rng = np.random.default_rng([seed, i])
        out.append(fn(rng, perturb=perturb) if name == "trace" else fn(rng))
    return out


def report(results: list[SuiteResult]) -> dict:
    return {"passed": all(r.passed for r in results), "suites": [asdict(r) for r in results]}

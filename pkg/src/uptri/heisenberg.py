"""Boundary geometry in the Heisenberg model and the Shimizu test.

Finite boundary points are ``HeisPoint(zeta, v)``; the point at infinity is
the singleton :data:`INFINITY`.  Conventions follow the matrix model: the
translation matrix by ``(tau, t)`` acts by

    (zeta, v) -> (zeta + tau, v + t + 2 Im(tau * conj(zeta)))

which is the group law under which the Cygan metric is invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .hermitian import NULL, POSITIVE, TOL, apply, classify_vector, inverse
from .triangle import SQRT2, TriangleParams, rep_from_params


@dataclass(frozen=True)
class HeisPoint:
    zeta: complex
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.zeta.real) and math.isfinite(self.zeta.imag) and math.isfinite(self.v)):
            raise ValueError("finite Heisenberg points need finite coordinates")


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
BoundaryPoint = Union[HeisPoint, _Infinity]


def stereo_project(p) -> BoundaryPoint:
    p = np.asarray(p, dtype=complex)
    if classify_vector(p) != NULL:
        raise ValueError("stereographic projection is defined on null vectors only")
    scale = float(np.linalg.norm(p))
    if abs(p[2]) <= TOL.sig * scale:
        return INFINITY
    return HeisPoint(complex(p[1] / (p[2] * SQRT2)), float((p[0] / p[2]).imag))


def lift(p: BoundaryPoint) -> np.ndarray:
    """Null vector projecting to ``p``."""
    if p is INFINITY:
        return np.array([1.0, 0.0, 0.0], dtype=complex)
    return np.array([-abs(p.zeta) ** 2 + 1j * p.v, SQRT2 * p.zeta, 1.0], dtype=complex)


def act(m, p: BoundaryPoint) -> BoundaryPoint:
    return stereo_project(apply(m, lift(p)))


def _finite(p):
    if p is INFINITY:
        raise ValueError("the Cygan metric is only defined between finite points")
    return p


def cygan_distance(p: HeisPoint, q: HeisPoint) -> float:
    _finite(p), _finite(q)
    z1, z2 = p.zeta, q.zeta
    w = abs(z1 - z2) ** 2 - 1j * (p.v - q.v) - 2j * (z1 * z2.conjugate()).imag
    return math.sqrt(abs(w))


def heis_translation(tau: complex, t: float) -> np.ndarray:
    tau = complex(tau)
    return np.array(
        [
            [1.0, -SQRT2 * tau.conjugate(), -abs(tau) ** 2 + 1j * t],
            [0.0, 1.0, SQRT2 * tau],
            [0.0, 0.0, 1.0],
        ],
        dtype=complex,
    )


def heis_product(a: tuple[complex, float], b: tuple[complex, float]) -> tuple[complex, float]:
    """Group law matching ``heis_translation(*a) @ heis_translation(*b)``."""
    (t1, s1), (t2, s2) = a, b
    return t1 + t2, s1 + s2 + 2.0 * (t1 * complex(t2).conjugate()).imag


def translation_parts(m, tol: float = 1e-9) -> tuple[complex, float]:
    """Read ``(tau, t)`` off a Heisenberg translation matrix."""
    m = np.asarray(m, dtype=complex)
    if abs(m[2, 2]) <= tol * float(np.max(np.abs(m))):
        raise ValueError("matrix is not a Heisenberg translation")
    m = m / m[2, 2]
    expected = heis_translation(m[1, 2] / SQRT2, m[0, 2].imag)
    if not np.max(np.abs(m - expected)) <= tol * max(1.0, float(np.max(np.abs(m)))):
        raise ValueError("matrix is not a Heisenberg translation")
    return complex(m[1, 2] / SQRT2), float(m[0, 2].imag)


# -- chains ------------------------------------------------------------------

@dataclass(frozen=True)
class VerticalChain:
    zeta0: complex

    @property
    def polar(self) -> np.ndarray:
        return np.array([-SQRT2 * complex(self.zeta0).conjugate(), 1.0, 0.0], dtype=complex)


@dataclass(frozen=True)
class FiniteChain:
    center: HeisPoint
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("chain radius must be positive")

    @property
    def polar(self) -> np.ndarray:
        z0, v0 = self.center.zeta, self.center.v
        return np.array([self.radius**2 - abs(z0) ** 2 + 1j * v0, SQRT2 * z0, 1.0], dtype=complex)

    def point(self, phi: float) -> HeisPoint:
        """Point of the chain above angle ``phi`` on its projected circle."""
        z0, v0 = self.center.zeta, self.center.v
        zeta = z0 + self.radius * complex(math.cos(phi), math.sin(phi))
        return HeisPoint(zeta, v0 - 2.0 * (zeta * complex(z0).conjugate()).imag)


Chain = Union[VerticalChain, FiniteChain]


def polar_of_chain(ch: Chain) -> np.ndarray:
    return ch.polar


def chain_from_polar(c) -> Chain:
    c = np.asarray(c, dtype=complex)
    if classify_vector(c) != POSITIVE:
        raise ValueError("chains correspond to positive polar vectors")
    scale = float(np.linalg.norm(c))
    if abs(c[2]) > TOL.sig * scale:
        c = c / c[2]
        zeta0 = complex(c[1] / SQRT2)
        r2 = c[0].real + abs(zeta0) ** 2
        return FiniteChain(HeisPoint(zeta0, float(c[0].imag)), math.sqrt(r2))
    if abs(c[1]) <= TOL.sig * scale:
        raise ValueError("vector is polar to neither a vertical nor a finite chain")
    c = c / c[1]
    return VerticalChain(complex(-c[0].conjugate() / SQRT2))


def vertical_inversion_action(zeta: complex, xi: complex) -> complex:
    """Foot of the image of the vertical chain through ``xi`` under inversion in the one through ``zeta``."""
    return 2 * zeta - xi


def isometric_sphere_radius(h, tol: float = 1e-12) -> float:
    h = np.asarray(h, dtype=complex)
    h31 = abs(h[2, 0])
    if h31 <= tol * max(1.0, float(np.max(np.abs(h)))):
        raise ValueError("h fixes infinity; it has no isometric sphere")
    return 1.0 / math.sqrt(h31)


def isometric_sphere(h) -> tuple[HeisPoint, float]:
    """Centre ``h^{-1}(inf)`` and Cygan radius of the isometric sphere of ``h``."""
    radius = isometric_sphere_radius(h)
    return act(inverse(h), INFINITY), radius


def unit_spinal_residual(p: HeisPoint) -> float:
    _finite(p)
    return abs(p.zeta) ** 4 + p.v**2 - 1.0


# -- Shimizu -----------------------------------------------------------------

NON_DISCRETE, INCONCLUSIVE = "non-discrete", "inconclusive"


def shimizu_coefficients(r1: float, r2: float) -> tuple[float, float, float]:
    """``(b, c, d)`` with non-discreteness iff ``X^2 - 2bX + c > 0`` and ``X < d``."""
    u = (r1 - r2) ** 2
    s = r1 * r1 + r2 * r2
    d = 1.0 - 16.0 * u
    return d + s, d * d - 16.0 * u * u, d


def shimizu_branch_discriminant(r1: float, r2: float) -> float:
    return 34 * r1**2 * r2**2 - 15 * r1**4 - 15 * r2**4 + 2 * r1**2 + 2 * r2**2


def quadratic_at_d_closed(r1: float, r2: float) -> float:
    d = 1.0 - 16.0 * (r1 - r2) ** 2
    return -2.0 * d * (r1 * r1 + r2 * r2) - 16.0 * (r1 - r2) ** 4


def shimizu_rhs_closed(r1: float, r2: float, alpha: float) -> float:
    """``sqrt(|xi|^4 + v^2) + 4|xi|^2`` written in ``r1, r2, alpha``."""
    s2 = math.sin(alpha / 2.0) ** 2
    u = (r1 - r2) ** 2
    return (
        4.0 * math.sqrt(u * u + 8.0 * r1 * r2 * (r1 * r1 + r2 * r2) * s2)
        + 16.0 * u
        + 64.0 * r1 * r2 * s2
    )


@dataclass(frozen=True)
class ShimizuReport:
    xi: complex
    v: float
    lhs: float
    rhs: float
    case_tag: str
    b_coef: float
    c_coef: float
    d_coef: float
    x_value: float
    threshold: float
    closed_form_non_discrete: bool
    literal_non_discrete: bool
    direct_non_discrete: bool

    @property
    def verdict(self) -> str:
        return NON_DISCRETE if self.closed_form_non_discrete else INCONCLUSIVE

    @property
    def agree(self) -> bool:
        return self.closed_form_non_discrete == self.direct_non_discrete

    @property
    def quadratic_at_d(self) -> float:
        """``d^2 - 2bd + c``; negative whenever ``d > 0``."""
        b, c, d = self.b_coef, self.c_coef, self.d_coef
        return d * d - 2.0 * b * d + c


def shimizu_threshold(r1: float, r2: float) -> tuple[str, float]:
    """Branch tag and the bound on ``X = 64 r1 r2 sin^2(alpha/2)`` below which the group is non-discrete.

    The returned bound already includes the ``X < d`` guard, so it is never
    larger than ``d``.
    """
    b, c, d = shimizu_coefficients(r1, r2)
    disc = shimizu_branch_discriminant(r1, r2)
    if disc >= 0:
        return "real-roots", min(b - math.sqrt(disc), d)
    return "no-real-roots", d


def _literal_bound(r1: float, r2: float) -> float:
    disc = shimizu_branch_discriminant(r1, r2)
    if disc >= 0:
        return 32 * r1 * r2 - 15 * r1**2 - 15 * r2**2 + 1 - math.sqrt(disc)
    return 1.0 - 16.0 * (r1 - r2) ** 2


def shimizu_test(params: TriangleParams) -> ShimizuReport:
    r1, r2 = params.r1, params.r2
    rep = rep_from_params(params)

    g = rep.i2 @ rep.i1
    xi, v = translation_parts(g)
    h = rep.i3
    r_h = isometric_sphere_radius(h)
    p_minus = act(inverse(h), INFINITY)
    p_plus = act(h, INFINITY)
    rhs = (
        cygan_distance(act(g, p_minus), p_minus) * cygan_distance(act(g, p_plus), p_plus)
        + 4.0 * abs(xi) ** 2
    )
    lhs = r_h**2

    b, c, d = shimizu_coefficients(r1, r2)
    tag, bound = shimizu_threshold(r1, r2)
    x = 64.0 * r1 * r2 * params.sin2_half
    return ShimizuReport(
        xi=xi,
        v=v,
        lhs=lhs,
        rhs=rhs,
        case_tag=tag,
        b_coef=b,
        c_coef=c,
        d_coef=d,
        x_value=x,
        threshold=bound,
        closed_form_non_discrete=x < bound,
        literal_non_discrete=x < _literal_bound(r1, r2),
        direct_non_discrete=rhs < lhs,
    )

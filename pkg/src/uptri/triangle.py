"""Standard parametrisation of ultra-parallel [m1, m2, 0] triangle groups.

Given ``r1 >= r2 >= 1`` (``r_j = cosh(m_j / 2)``) and an angular invariant
``alpha`` in ``(0, 2 pi)``, the three complex geodesics have normalised polar
vectors

    c1 = ( sqrt2 r2 e^{-i theta}, 1, 0)
    c2 = (-sqrt2 r1 e^{ i theta}, 1, 0)
    c3 = (1/sqrt2, 0, 1/sqrt2)

with ``theta = (pi - alpha) / 2``; the generators are the order-two complex
reflections in them.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .hermitian import (
    IDENTITY,
    POSITIVE,
    GRAM,
    classify_vector,
    det_residual,
    form_residual,
    herm,
    norm2,
)

SQRT2 = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi


def r_from_m(m: float) -> float:
    if m < 0:
        raise ValueError(f"distance m must be non-negative, got {m}")
    return math.cosh(m / 2.0)


def m_from_r(r: float) -> float:
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return 2.0 * math.acosh(r)


@dataclass(frozen=True)
class TriangleParams:
    r1: float
    r2: float
    alpha: float

    def __post_init__(self):
        if not (self.r2 >= 1.0):
            raise ValueError(f"r2 must be >= 1 (got {self.r2})")
        if not (self.r1 >= self.r2):
            raise ValueError(f"r1 must be >= r2 (got r1={self.r1}, r2={self.r2})")
        if not (0.0 < self.alpha < TWO_PI):
            raise ValueError(f"alpha must lie in the open interval (0, 2pi) (got {self.alpha})")

    @classmethod
    def make(cls, r1: float, r2: float, alpha: float) -> "TriangleParams":
        """Like the constructor, but swaps ``r1 < r2`` with a warning."""
        r1, r2 = float(r1), float(r2)
        if r1 < r2:
            warnings.warn(f"swapping r1={r1} and r2={r2} so that r1 >= r2", stacklevel=2)
            r1, r2 = r2, r1
        return cls(r1, r2, float(alpha))

    @classmethod
    def from_distances(cls, m1: float, m2: float, alpha: float) -> "TriangleParams":
        return cls.make(r_from_m(m1), r_from_m(m2), alpha)

    @property
    def theta(self) -> float:
        return (math.pi - self.alpha) / 2.0

    @property
    def m1(self) -> float:
        return m_from_r(self.r1)

    @property
    def m2(self) -> float:
        return m_from_r(self.r2)

    @property
    def sin2_half(self) -> float:
        return math.sin(self.alpha / 2.0) ** 2


def reflection_matrix(c) -> np.ndarray:
    """Order-two complex reflection ``z -> -z + 2 <z,c>/<c,c> c`` as a matrix."""
    c = np.asarray(c, dtype=complex)
    if classify_vector(c) != POSITIVE:
        raise ValueError("a complex reflection needs a positive polar vector")
    return -IDENTITY + 2.0 * np.outer(c, c.conj()) @ GRAM / norm2(c)


def polar_vectors(params: TriangleParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t = params.theta
    c1 = np.array([SQRT2 * params.r2 * np.exp(-1j * t), 1.0, 0.0], dtype=complex)
    c2 = np.array([-SQRT2 * params.r1 * np.exp(1j * t), 1.0, 0.0], dtype=complex)
    c3 = np.array([1.0 / SQRT2, 0.0, 1.0 / SQRT2], dtype=complex)
    return c1, c2, c3


@dataclass(frozen=True)
class TriangleRep:
    params: TriangleParams
    c1: np.ndarray = field(repr=False)
    c2: np.ndarray = field(repr=False)
    c3: np.ndarray = field(repr=False)
    i1: np.ndarray = field(repr=False)
    i2: np.ndarray = field(repr=False)
    i3: np.ndarray = field(repr=False)

    @property
    def polars(self):
        return self.c1, self.c2, self.c3

    @property
    def generators(self):
        return self.i1, self.i2, self.i3

    def generator(self, k: int) -> np.ndarray:
        return (self.i1, self.i2, self.i3)[k - 1]


def build_rep(r1: float, r2: float, alpha: float) -> TriangleRep:
    params = TriangleParams.make(r1, r2, alpha)
    return rep_from_params(params)


def rep_from_params(params: TriangleParams) -> TriangleRep:
    c1, c2, c3 = polar_vectors(params)
    return TriangleRep(
        params, c1, c2, c3, reflection_matrix(c1), reflection_matrix(c2), reflection_matrix(c3)
    )


def angular_invariant(c1, c2, c3) -> float:
    """Argument of ``<c3,c2><c1,c3><c2,c1>`` reduced to ``[0, 2 pi)``."""
    prod = herm(c3, c2) * herm(c1, c3) * herm(c2, c1)
    return float(np.angle(prod)) % TWO_PI


def existence_check(r1: float, r2: float, r3: float, alpha: float) -> bool:
    """Whether an [m1, m2, m3] triangle with angular invariant ``alpha`` exists."""
    for r in (r1, r2, r3):
        if r < 1:
            raise ValueError(f"all r_j must be >= 1, got {r}")
    return math.cos(alpha) < (r1 * r1 + r2 * r2 + r3 * r3 - 1.0) / (2.0 * r1 * r2 * r3)


def _angle_residual(a: float, b: float) -> float:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)


@dataclass
class RepReport:
    """Residual per invariant, each with the tolerance it must stay under."""

    checks: dict[str, tuple[float, float]]

    @property
    def residuals(self) -> dict[str, float]:
        return {k: v for k, (v, _) in self.checks.items()}

    @property
    def failures(self) -> list[str]:
        return [k for k, (v, t) in self.checks.items() if not v < t]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_rep(rep: TriangleRep, tol: float = 1e-10, matrix_tol: float = 1e-9) -> RepReport:
    p = rep.params
    c1, c2, c3 = rep.polars
    checks: dict[str, tuple[float, float]] = {}
    for name, c in (("norm_c1", c1), ("norm_c2", c2), ("norm_c3", c3)):
        checks[name] = (abs(herm(c, c) - 1.0), tol)
    checks["pair_c3c2_r1"] = (abs(abs(herm(c3, c2)) - p.r1), tol)
    checks["pair_c1c3_r2"] = (abs(abs(herm(c1, c3)) - p.r2), tol)
    checks["pair_c2c1_one"] = (abs(abs(herm(c2, c1)) - 1.0), tol)
    checks["distance_m1"] = (abs(abs(herm(c3, c2)) - math.cosh(p.m1 / 2.0)), tol)
    checks["distance_m2"] = (abs(abs(herm(c1, c3)) - math.cosh(p.m2 / 2.0)), tol)
    checks["angular_invariant"] = (
        _angle_residual(angular_invariant(c1, c2, c3), p.alpha),
        tol,
    )
    for k, m in enumerate(rep.generators, start=1):
        checks[f"involution_i{k}"] = (float(np.max(np.abs(m @ m - IDENTITY))), matrix_tol)
        checks[f"form_i{k}"] = (form_residual(m), matrix_tol)
        checks[f"det_i{k}"] = (det_residual(m), tol)
    return RepReport(checks)

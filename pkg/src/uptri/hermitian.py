"""Linear algebra on C^{2,1} with the anti-diagonal Hermitian form.

Vectors are complex numpy arrays of shape ``(3,)`` and isometries are complex
``(3, 3)`` arrays normalised to determinant one (elements of SU(2,1)). The
form is

    <z, w> = z1 conj(w3) + z2 conj(w2) + z3 conj(w1)

so ``(1, 0, 0)`` and ``(0, 0, 1)`` are null and ``(0, 1, 0)`` is positive.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, fields

import numpy as np

GRAM = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
IDENTITY = np.eye(3, dtype=complex)

NEGATIVE, NULL, POSITIVE = "negative", "null", "positive"
REGULAR_ELLIPTIC, LOXODROMIC, BOUNDARY = "regular-elliptic", "loxodromic", "boundary"


@dataclass
class Tolerances:
    """Process-wide numerical tolerances.

    ``sig`` is relative to ``|z|^2`` when reading the sign of ``<z, z>``;
    ``deltoid`` is relative to ``max(1, |trace|^4)``; ``star`` is the absolute
    slack used when comparing the closed-form inequalities.
    """

    sig: float = 1e-10
    deltoid: float = 1e-9
    star: float = 1e-12


TOL = Tolerances()


def set_tolerances(**kwargs: float) -> None:
    names = {f.name for f in fields(Tolerances)}
    for key, value in kwargs.items():
        if key not in names:
            raise KeyError(f"unknown tolerance {key!r}")
        setattr(TOL, key, float(value))


@contextmanager
def tolerances(**kwargs: float):
    saved = {f.name: getattr(TOL, f.name) for f in fields(Tolerances)}
    set_tolerances(**kwargs)
    try:
        yield TOL
    finally:
        set_tolerances(**saved)


def hvec(z1, z2, z3) -> np.ndarray:
    return np.array([z1, z2, z3], dtype=complex)


def herm(z, w) -> complex:
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return complex(z[0] * np.conj(w[2]) + z[1] * np.conj(w[1]) + z[2] * np.conj(w[0]))


def norm2(z) -> float:
    """Real part of ``<z, z>``."""
    return herm(z, z).real


def classify_vector(z) -> str:
    z = np.asarray(z, dtype=complex)
    scale = float(np.vdot(z, z).real)
    if scale == 0.0:
        raise ValueError("zero vector has no projective class")
    h = norm2(z)
    if abs(h) <= TOL.sig * scale:
        return NULL
    return NEGATIVE if h < 0 else POSITIVE


def bergman_distance(p, q) -> float:
    """Distance between the points of H^2_C represented by negative vectors."""
    for x in (p, q):
        if classify_vector(x) != NEGATIVE:
            raise ValueError("Bergman distance needs negative vectors")
    ratio = (abs(herm(p, q)) ** 2) / (norm2(p) * norm2(q))
    return 2.0 * float(np.arccosh(np.sqrt(max(ratio, 1.0))))


def compose(a, b) -> np.ndarray:
    return np.asarray(a) @ np.asarray(b)


def inverse(a) -> np.ndarray:
    # A^{-1} = J A^H J for any form-preserving A
    a = np.asarray(a, dtype=complex)
    return GRAM @ a.conj().T @ GRAM


def apply(a, z) -> np.ndarray:
    return np.asarray(a, dtype=complex) @ np.asarray(z, dtype=complex)


def trace(a) -> complex:
    return complex(np.trace(a))


def form_residual(m) -> float:
    """Max entry of ``M^H J M - J``; zero for an exact isometry."""
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ GRAM @ m - GRAM)))


def det_residual(m) -> float:
    return float(abs(np.linalg.det(m) - 1.0))


def projectively_equal(z, w, tol: float = 1e-10) -> bool:
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    # rank-one test: z x w vanishes iff parallel (complex cross product)
    cross = np.array(
        [z[1] * w[2] - z[2] * w[1], z[2] * w[0] - z[0] * w[2], z[0] * w[1] - z[1] * w[0]]
    )
    return float(np.max(np.abs(cross))) <= tol * np.linalg.norm(z) * np.linalg.norm(w)


def deltoid_discriminant(z) -> float:
    """``|z|^4 - 8 Re(z^3) + 18 |z|^2 - 27``: negative strictly inside the deltoid."""
    z = complex(z)
    a2 = abs(z) ** 2
    return a2 * a2 - 8.0 * (z**3).real + 18.0 * a2 - 27.0


def deltoid_discriminant_array(z: np.ndarray) -> np.ndarray:
    a2 = np.abs(z) ** 2
    return a2 * a2 - 8.0 * (z**3).real + 18.0 * a2 - 27.0


@dataclass(frozen=True)
class IsometryClass:
    tag: str
    discriminant: float


def classify_trace(tr) -> IsometryClass:
    tr = complex(tr)
    disc = deltoid_discriminant(tr)
    band = TOL.deltoid * max(1.0, abs(tr) ** 4)
    if disc < -band:
        tag = REGULAR_ELLIPTIC
    elif disc > band:
        tag = LOXODROMIC
    else:
        tag = BOUNDARY
    return IsometryClass(tag, disc)


def classify_isometry(m) -> IsometryClass:
    return classify_trace(trace(m))

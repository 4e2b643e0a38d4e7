"""Words in the free product of three copies of Z/2 and their matrices.

A word is a tuple of generator indices in ``{1, 2, 3}``; it evaluates to the
left-to-right product of the corresponding reflections, so ``(1, 2, 3)`` is
``I1 @ I2 @ I3``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .hermitian import IDENTITY, REGULAR_ELLIPTIC, TOL, classify_trace, deltoid_discriminant_array
from .triangle import TriangleRep, build_rep

Word = tuple[int, ...]

MAX_SEARCH_LEN = 20


def _check_letters(w: Iterable[int]) -> Word:
    w = tuple(int(x) for x in w)
    bad = [x for x in w if x not in (1, 2, 3)]
    if bad:
        raise ValueError(f"invalid generator letters {bad}; expected 1, 2 or 3")
    return w


def reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in _check_letters(w):
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(a != b for a, b in zip(w, w[1:]))


def inverse_word(w: Sequence[int]) -> Word:
    # every generator is an involution
    return tuple(reversed(_check_letters(w)))


def evaluate(w: Sequence[int], rep: TriangleRep) -> np.ndarray:
    m = IDENTITY.copy()
    for x in _check_letters(w):
        m = m @ rep.generator(x)
    return m


def word_wA(ell: int) -> Word:
    """Reduced form of ``I1 (I2 I1)^ell I3``."""
    body = [2, 1] * ell if ell >= 0 else [1, 2] * (-ell)
    return reduce([1, *body, 3])


def word_wB() -> Word:
    return (1, 2, 3)


# -- the rotation group Lambda ---------------------------------------------

@dataclass(frozen=True)
class LambdaElement:
    """``(J2 J1)^ell`` when ``reflection`` is false, else ``J1 (J2 J1)^ell``."""

    ell: int
    reflection: bool = False

    @property
    def is_identity(self) -> bool:
        return not self.reflection and self.ell == 0

    def word(self) -> Word:
        body = (2, 1) * self.ell if self.ell >= 0 else (1, 2) * (-self.ell)
        return reduce(((1,) if self.reflection else ()) + body)


def lambda_orbit_point(e: LambdaElement, r1: float, r2: float, theta: float) -> complex:
    step = r2 * np.exp(1j * theta) + r1 * np.exp(-1j * theta)
    if e.reflection:
        return complex(2 * r2 * np.exp(1j * theta) + 2 * e.ell * step)
    return complex(-2 * e.ell * step)


def lambda_orbit_norm(e: LambdaElement, r1: float, r2: float, theta: float) -> float:
    return abs(lambda_orbit_point(e, r1, r2, theta))


def lambda_orbit_bruteforce(r1: float, r2: float, theta: float, window: int) -> np.ndarray:
    """Images of the origin under every non-trivial reduced word in J1, J2 of length <= 2*window + 1.

    Points are produced by applying the half-turns one after another (each
    step is ``z -> 2p - z``), starting with J1 and, separately, with J2.
    """
    p1 = r2 * np.exp(1j * theta)
    p2 = -r1 * np.exp(-1j * theta)
    n = 2 * window + 1
    out = []
    for first, second in ((p1, p2), (p2, p1)):
        centres = np.empty(n, dtype=complex)
        centres[0::2] = first
        centres[1::2] = second
        signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        # z_k = 2 c_k - z_{k-1}  unrolls to  z_k = (-1)^k sum_{i<=k} (-1)^i 2 c_i
        out.append(signs * np.cumsum(signs * 2.0 * centres))
    return np.concatenate(out)


def lambda_condition_check(r1: float, r2: float, alpha: float, window: int) -> bool:
    """Whether every non-identity element of Lambda moves 0 by at least 2 (within the window)."""
    if window < 1:
        raise ValueError("window must be >= 1")
    theta = (math.pi - alpha) / 2.0
    pts = lambda_orbit_bruteforce(r1, r2, theta, window)
    return bool(np.min(np.abs(pts)) >= 2.0 - 2.0 * TOL.star)


def lambda_min_norm(r1: float, r2: float, alpha: float, window: int) -> float:
    theta = (math.pi - alpha) / 2.0
    return float(np.min(np.abs(lambda_orbit_bruteforce(r1, r2, theta, window))))


# -- elliptic witnesses ----------------------------------------------------

@dataclass(frozen=True)
class EllipticWitness:
    word: Word
    trace: complex
    discriminant: float
    min_order_tested: int
    finite_order_detected: Optional[int]
    best_order: int
    best_error: float


def eigen_angles_from_trace(tr: complex) -> np.ndarray:
    """Arguments of the eigenvalues of a regular elliptic element of SU(2,1).

    The characteristic polynomial is ``x^3 - tr x^2 + conj(tr) x - 1``, so the
    eigenvalues follow from the trace alone.
    """
    roots = np.roots([1.0, -tr, np.conj(tr), -1.0])
    return np.sort(np.angle(roots))


def finite_order_scan(angles: np.ndarray, max_order: int, tol: float) -> tuple[Optional[int], int, float]:
    """Smallest projective order ``n <= max_order`` within ``tol``, plus the best approximation seen.

    Projective order ignores a common phase, so only angle differences matter.
    """
    diffs = angles[1:] - angles[0]
    n = np.arange(1, max_order + 1)[:, None]
    wrapped = np.angle(np.exp(1j * n * diffs[None, :]))
    err = np.max(np.abs(wrapped), axis=1)
    best = int(np.argmin(err))
    hits = np.flatnonzero(err <= tol)
    found = int(hits[0] + 1) if hits.size else None
    return found, best + 1, float(err[best])


def analyze_word(w: Sequence[int], rep: TriangleRep, max_order: int = 2000, tol: float = 1e-8) -> Optional[EllipticWitness]:
    """Witness record when ``w`` is regular elliptic, else ``None``."""
    w = reduce(w)
    tr = complex(np.trace(evaluate(w, rep)))
    return _witness_from_trace(w, tr, max_order, tol)


def _witness_from_trace(w: Word, tr: complex, max_order: int, tol: float) -> Optional[EllipticWitness]:
    cls = classify_trace(tr)
    if cls.tag != REGULAR_ELLIPTIC:
        return None
    found, best_n, best_err = finite_order_scan(eigen_angles_from_trace(tr), max_order, tol)
    return EllipticWitness(w, tr, cls.discriminant, max_order, found, best_n, best_err)


def enumerate_reduced(max_len: int, prefix: Word = ()) -> list[Word]:
    """Reduced words of length 1..max_len extending ``prefix`` in length-lexicographic order."""
    prefix = _check_letters(prefix)
    if not is_reduced(prefix):
        raise ValueError("prefix must be a reduced word")
    level = [prefix]
    out: list[Word] = [prefix] if prefix else []
    for _ in range(len(prefix), max_len):
        # parents are in lexicographic order and letters are appended in order
        level = [w + (x,) for w in level for x in (1, 2, 3) if not w or w[-1] != x]
        out.extend(level)
    return out


def _level_traces(rep: TriangleRep, max_len: int, prefix: Word):
    gens = np.stack(rep.generators)
    words = [prefix]
    mats = evaluate(prefix, rep)[None]
    for _ in range(len(prefix), max_len):
        new_words, idx, letters = [], [], []
        for i, w in enumerate(words):
            for x in (1, 2, 3):
                if w and w[-1] == x:
                    continue
                new_words.append(w + (x,))
                idx.append(i)
                letters.append(x - 1)
        mats = np.einsum("nij,njk->nik", mats[idx], gens[letters])
        words = new_words
        yield words, np.einsum("nii->n", mats)


def _search_prefix(args):
    r1, r2, alpha, prefix, max_len, max_order, tol, deltoid = args
    rep = build_rep(r1, r2, alpha)
    found: list[EllipticWitness] = []
    levels = [([prefix], np.array([np.trace(evaluate(prefix, rep))]))]
    levels.extend(_level_traces(rep, max_len, prefix))
    for words, traces in levels:
        disc = deltoid_discriminant_array(traces)
        band = deltoid * np.maximum(1.0, np.abs(traces) ** 4)
        for i in np.flatnonzero(disc < -band):
            wit = _witness_from_trace(words[i], complex(traces[i]), max_order, tol)
            if wit is not None and wit.finite_order_detected is None:
                found.append(wit)
    return found


def search_elliptic_infinite_order(
    rep: TriangleRep,
    max_len: int = 12,
    max_order: int = 2000,
    tol: float = 1e-8,
    workers: int = 1,
) -> list[EllipticWitness]:
    """Regular elliptic words of length <= ``max_len`` with no detected finite order.

    These are numerical evidence of non-discreteness, not a proof: an order
    beyond ``max_order`` cannot be excluded.
    """
    if max_len > MAX_SEARCH_LEN:
        raise ValueError(f"max_len is capped at {MAX_SEARCH_LEN}")
    if max_order < 2:
        raise ValueError("max_order must be >= 2")
    p = rep.params
    prefixes = [(x,) for x in (1, 2, 3)]
    jobs = [(p.r1, p.r2, p.alpha, pre, max_len, max_order, tol, TOL.deltoid) for pre in prefixes if max_len >= 1]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_search_prefix, jobs))
    else:
        chunks = [_search_prefix(j) for j in jobs]
    found = [w for chunk in chunks for w in chunk]
    return sorted(found, key=lambda w: (len(w.word), w.word))

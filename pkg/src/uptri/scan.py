"""Parameter-space scans and their CSV / JSON / SVG renderings.

Three grid modes are supported:

* ``rr``    -- ``r1`` along the first axis, ``r2`` along the second;
* ``xy``    -- the figure coordinates ``X = (r1^2 - r2^2)/(r2^2 - 1)``,
  ``Y = 1/(r2^2 - 1)``;
* ``alpha`` -- the angular invariant at fixed ``(r1, r2)``.

Grid points are independent, so they are evaluated by a process pool and
merged back by grid index; output does not depend on the worker count.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import criteria as C
from .heisenberg import shimizu_threshold

RR, XY, ALPHA = "rr", "xy", "alpha"
FORMATS = ("csv", "json", "svg")

DEFAULT_RANGES = {
    RR: ((1.0, 4.0), (1.0, 4.0)),
    XY: ((0.0, 3.0), (0.0, 0.6)),
    ALPHA: ((0.0, 2.0 * math.pi), None),
}


@dataclass(frozen=True)
class ScanConfig:
    mode: str
    xrange: tuple[float, float]
    yrange: Optional[tuple[float, float]] = None
    resolution: tuple[int, int] = (31, 31)
    fmt: str = "csv"
    workers: int = 1
    r1: Optional[float] = None
    r2: Optional[float] = None
    witness: bool = False
    max_order: int = 2000
    tol: float = 1e-8

    def __post_init__(self):
        if self.mode not in (RR, XY, ALPHA):
            raise ValueError(f"unknown scan mode {self.mode!r}")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        nx, ny = self.resolution
        if nx < 2 or (self.mode != ALPHA and ny < 2):
            raise ValueError("resolution must be >= 2 along every axis")
        axes = [self.xrange] if self.mode == ALPHA else [self.xrange, self.yrange]
        for rng in axes:
            if rng is None or not (math.isfinite(rng[0]) and math.isfinite(rng[1])) or not rng[1] > rng[0]:
                raise ValueError(f"degenerate or invalid range {rng}")
        if self.mode == XY and self.yrange[1] <= 0:
            raise ValueError("xy mode needs part of the range with Y > 0")
        if self.mode == RR and (self.xrange[0] < 1 or self.yrange[0] < 1):
            raise ValueError("r ranges must lie in [1, inf)")
        if self.mode == ALPHA:
            if self.r1 is None or self.r2 is None:
                raise ValueError("alpha scans need r1 and r2")
            if not (self.r1 >= self.r2 >= 1):
                raise ValueError("alpha scans need r1 >= r2 >= 1")
            if self.xrange[0] < 0 or self.xrange[1] > 2 * math.pi:
                raise ValueError("alpha range must lie within [0, 2pi]")
        if self.svg_unsupported:
            raise ValueError("svg output is only available for xy scans")

    @property
    def svg_unsupported(self) -> bool:
        return self.fmt == "svg" and self.mode != XY


def _axis(lo: float, hi: float, n: int, open_ends: bool) -> np.ndarray:
    """``n`` evenly spaced samples; cell midpoints when the ends are excluded."""
    if open_ends:
        return lo + (np.arange(n) + 0.5) * (hi - lo) / n
    return np.linspace(lo, hi, n)


def grid_points(cfg: ScanConfig) -> list[tuple]:
    nx, ny = cfg.resolution
    if cfg.mode == ALPHA:
        # alpha = 0 and 2 pi are not admissible, so sample cell midpoints
        return [(i, 0, float(a)) for i, a in enumerate(_axis(*cfg.xrange, nx, True))]
    xs = _axis(*cfg.xrange, nx, False)
    ys = _axis(*cfg.yrange, ny, cfg.mode == XY and cfg.yrange[0] <= 0)
    return [(i, j, float(x), float(y)) for j, y in enumerate(ys) for i, x in enumerate(xs)]


POINT_COLUMNS = [
    "i", "j", "X", "Y", "r1", "r2", "region", "k", "all_alpha_discrete", "phi_k_satisfied",
    "sup_f_A", "argmax_l", "f_B", "sin2_sine", "sin2_star", "sin2_shimizu", "wb_never_elliptic",
]
ALPHA_COLUMNS = [
    "i", "alpha", "sin2_half", "verdict", "region", "star_holds", "star_margin", "sine_test",
    "shimizu_non_discrete", "trace_wB_re", "trace_wB_im", "wB_elliptic", "n_witnesses",
]


def thresholds(r1: float, r2: float) -> dict:
    """Values of ``sin^2(alpha/2)`` at which the closed-form criteria switch."""
    sup = C.sup_f_A(r1, r2)
    fb = C.f_B(r1, r2)
    _, sh = shimizu_threshold(r1, r2)
    return {
        "sup_f_A": sup.value,
        "argmax_l": sup.argmax,
        "f_B": fb,
        "sin2_sine": 1.0 / (r1 + r2) ** 2,
        "sin2_star": max(fb, sup.value, 0.0) / (4 * r1 * r2),
        "sin2_shimizu": max(sh, 0.0) / (64 * r1 * r2),
        "wb_never_elliptic": C.wb_never_elliptic_margin(r1, r2) > 0,
    }


def _point_record(args) -> dict:
    mode, pt = args
    i, j, x, y = pt
    rec = dict.fromkeys(POINT_COLUMNS)
    rec.update(i=i, j=j)
    if mode == XY:
        if y <= 0:
            rec.update(X=x, Y=y, region="outside")
            return rec
        r1, r2 = C.rs_from_xy(x, y)
    else:
        r1, r2 = x, y
        if r1 < r2:
            rec.update(r1=r1, r2=r2, region="outside")
            return rec
    pt_xy = C.region_point(r1, r2)
    reg = C.classify_region(r1, r2)
    rec.update(
        X=x if mode == XY else pt_xy.X,
        Y=y if mode == XY else pt_xy.Y,
        r1=r1,
        r2=r2,
        region=reg.label,
        k=reg.k,
        all_alpha_discrete=reg.all_alpha_discrete,
        phi_k_satisfied=reg.phi_k_satisfied,
    )
    rec.update(thresholds(r1, r2))
    return rec


def _alpha_record(args) -> dict:
    r1, r2, pt, witness, max_order, tol = args
    i, _, alpha = pt
    v = C.decide(r1, r2, alpha, witness=witness, max_order=max_order, tol=tol)
    tb = C.trace_wB(r1, r2, alpha)
    wb = C.classify_trace(tb).tag == C.REGULAR_ELLIPTIC
    return {
        "i": i,
        "alpha": alpha,
        "sin2_half": math.sin(alpha / 2) ** 2,
        "verdict": v.label,
        "region": v.region.label,
        "star_holds": v.star.holds,
        "star_margin": v.star.margin,
        "sine_test": C.simple_sine_test(r1, r2, alpha),
        "shimizu_non_discrete": v.shimizu.closed_form_non_discrete,
        "trace_wB_re": tb.real,
        "trace_wB_im": tb.imag,
        "wB_elliptic": wb,
        "n_witnesses": len(v.witnesses),
    }


def run_scan(cfg: ScanConfig) -> list[dict]:
    pts = grid_points(cfg)
    if cfg.mode == ALPHA:
        fn, jobs = _alpha_record, [(cfg.r1, cfg.r2, p, cfg.witness, cfg.max_order, cfg.tol) for p in pts]
    else:
        fn, jobs = _point_record, [(cfg.mode, p) for p in pts]
    if cfg.workers > 1 and len(jobs) > 1:
        chunk = max(1, len(jobs) // (4 * cfg.workers))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            # map preserves input order, which is the grid index order
            return list(pool.map(fn, jobs, chunksize=chunk))
    return [fn(j) for j in jobs]


# -- rendering -----------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def columns_for(cfg: ScanConfig) -> list[str]:
    return ALPHA_COLUMNS if cfg.mode == ALPHA else POINT_COLUMNS


def to_csv(records: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for rec in records:
        w.writerow([_fmt(rec.get(c)) for c in columns])
    return buf.getvalue()


def to_json(records: list[dict], cfg: ScanConfig) -> str:
    meta = {
        "mode": cfg.mode,
        "xrange": list(cfg.xrange),
        "yrange": list(cfg.yrange) if cfg.yrange else None,
        "resolution": list(cfg.resolution),
    }
    if cfg.mode == ALPHA:
        meta.update(r1=cfg.r1, r2=cfg.r2)
    if cfg.mode == XY:
        meta["boundary_vertices"] = [list(p) for p in C.boundary_vertices(6)]
    rows = [{k: _json_value(rec.get(k)) for k in columns_for(cfg)} for rec in records]
    return json.dumps({"meta": meta, "records": rows}, indent=1, allow_nan=False) + "\n"


REGION_COLOURS = {"typeB": "#9ecae1", "boundary": "#000000", "outside": "#ffffff"}
_TYPEA_COLOURS = ["#fdd0a2", "#fdae6b", "#fd8d3c", "#e6550d", "#a63603"]


def _colour(rec: dict) -> str:
    tag = rec["region"] or "outside"
    if tag.startswith("typeA"):
        base = _TYPEA_COLOURS[(rec["k"] - 1) % len(_TYPEA_COLOURS)]
        return "#636363" if rec["phi_k_satisfied"] or rec["all_alpha_discrete"] else base
    return REGION_COLOURS.get(tag, "#cccccc")


def phi_curve(k: int, x_lo: float, x_hi: float, n: int = 200) -> list[tuple[float, float]]:
    """Samples of ``Y = Phi_k(X)`` across the k-th strip ``[2/k, 2/(k-1)]``, clipped to the window."""
    a = max(2.0 / k, x_lo)
    b = min(2.0 / (k - 1) if k > 1 else x_hi, x_hi)
    if not b > a:
        return []
    xs = np.linspace(a, b, n)
    return [(float(x), C.phi_k(k, float(x))) for x in xs if k * x > 1]


def to_svg(records: list[dict], cfg: ScanConfig, size: int = 600, kmax: int = 8) -> str:
    (x0, x1), (y0, y1) = cfg.xrange, cfg.yrange
    pad = 40
    sx = lambda x: pad + (x - x0) / (x1 - x0) * size
    sy = lambda y: pad + size - (y - y0) / (y1 - y0) * size
    nx, ny = cfg.resolution
    cw, ch = size / max(nx - 1, 1), size / max(ny - 1, 1)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad}" height="{size + 2 * pad}">',
        f'<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="#ffffff" stroke="#000000"/>',
    ]
    for rec in records:
        out.append(
            f'<rect x="{sx(rec["X"]) - cw / 2:.3f}" y="{sy(rec["Y"]) - ch / 2:.3f}" '
            f'width="{cw:.3f}" height="{ch:.3f}" fill="{_colour(rec)}" stroke="none"/>'
        )
    # broken line through (2/k, 1/(k(k+1))) followed by the ray of slope 1/2 from (2, 1/2)
    line = [(0.0, 0.0)] + list(reversed(C.boundary_vertices(kmax * 4))) + [(x1, 0.5 + (x1 - 2.0) / 2.0)]
    line = sorted(line)
    pts = " ".join(f"{sx(x):.3f},{sy(min(y, y1)):.3f}" for x, y in line if x0 <= x <= x1)
    out.append(f'<polyline points="{pts}" fill="none" stroke="#000000" stroke-width="2"/>')
    for k in range(1, kmax + 1):
        curve = [(x, y) for x, y in phi_curve(k, x0, x1) if y0 <= y <= y1]
        if curve:
            pts = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in curve)
            out.append(f'<polyline points="{pts}" fill="none" stroke="#3182bd" stroke-dasharray="4 2"/>')
    for x, y in C.boundary_vertices(3):
        if x0 <= x <= x1 and y0 <= y <= y1:
            out.append(f'<circle cx="{sx(x):.3f}" cy="{sy(y):.3f}" r="3" fill="#000000"/>')
            out.append(f'<text x="{sx(x) + 5:.3f}" y="{sy(y) - 5:.3f}" font-size="12">({x:.4g}, {y:.4g})</text>')
    out.append(f'<text x="{pad + size / 2}" y="{size + 2 * pad - 8}" font-size="14">X</text>')
    out.append(f'<text x="8" y="{pad + size / 2}" font-size="14">Y</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(records: list[dict], cfg: ScanConfig) -> str:
    if cfg.fmt == "csv":
        return to_csv(records, columns_for(cfg))
    if cfg.fmt == "json":
        return to_json(records, cfg)
    return to_svg(records, cfg)

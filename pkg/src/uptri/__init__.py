"""Numerical toolkit for ultra-parallel [m1, m2, 0] complex hyperbolic triangle groups.

The modules build on one another:

* :mod:`uptri.hermitian` -- the Hermitian form, isometries and trace classification;
* :mod:`uptri.triangle` -- the standard representation from ``(r1, r2, alpha)``;
* :mod:`uptri.heisenberg` -- boundary geometry and the Shimizu test;
* :mod:`uptri.words` -- words in the generators, the rotation group and witness search;
* :mod:`uptri.criteria` -- closed-form discreteness criteria and :func:`decide`;
* :mod:`uptri.scan`, :mod:`uptri.oracle`, :mod:`uptri.cli` -- scans and the command line.
"""
from .criteria import (
    classify_region,
    conditions_star,
    decide,
    f_A,
    f_B,
    simple_sine_test,
    sup_f_A,
    trace_wA,
    trace_wB,
    wB_ellipticity,
)
from .heisenberg import shimizu_test
from .hermitian import classify_isometry, classify_trace, set_tolerances, tolerances
from .triangle import TriangleParams, build_rep, verify_rep
from .words import evaluate, search_elliptic_infinite_order, word_wA, word_wB

__version__ = "0.1.0"

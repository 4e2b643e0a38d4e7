import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uptri import heisenberg as Hs
from uptri.hermitian import NULL, classify_vector, herm
from uptri.triangle import TriangleParams, build_rep, reflection_matrix

from conftest import random_params

coord = st.floats(-5, 5, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(coord, coord, coord)
def test_lift_is_null_and_projects_back(x, y, v):
    p = Hs.HeisPoint(complex(x, y), v)
    z = Hs.lift(p)
    assert classify_vector(z) == NULL
    q = Hs.stereo_project(z * (0.3 - 2j))
    assert q.zeta == pytest.approx(p.zeta, abs=1e-9)
    assert q.v == pytest.approx(p.v, abs=1e-9)


def test_infinity():
    assert Hs.stereo_project([2j, 0, 0]) is Hs.INFINITY
    assert Hs.act(Hs.heis_translation(1 + 1j, 2.0), Hs.INFINITY) is Hs.INFINITY
    with pytest.raises(ValueError):
        Hs.cygan_distance(Hs.INFINITY, Hs.HeisPoint(0j, 0.0))
    with pytest.raises(ValueError):
        Hs.stereo_project([0, 1, 0])


def test_translation_action_and_group_law():
    tau, t = 0.5 - 1j, 0.7
    p = Hs.HeisPoint(1 + 2j, -0.3)
    q = Hs.act(Hs.heis_translation(tau, t), p)
    assert q.zeta == pytest.approx(p.zeta + tau)
    assert q.v == pytest.approx(p.v + t + 2 * (tau * p.zeta.conjugate()).imag)
    a, b = (1 + 1j, 0.5), (-2 + 0.5j, 1.5)
    m = Hs.heis_translation(*a) @ Hs.heis_translation(*b)
    tau2, t2 = Hs.translation_parts(m)
    assert (tau2, t2) == pytest.approx(Hs.heis_product(a, b))
    with pytest.raises(ValueError):
        Hs.translation_parts(reflection_matrix([0.5, 0, 0.5]))


def test_cygan_invariance_and_symmetry(rng):
    for _ in range(50):
        p, q = (Hs.HeisPoint(complex(*rng.normal(size=2)), float(rng.normal())) for _ in range(2))
        m = Hs.heis_translation(complex(*rng.normal(size=2)), float(rng.normal()))
        d = Hs.cygan_distance(p, q)
        assert Hs.cygan_distance(q, p) == pytest.approx(d, rel=1e-12)
        assert Hs.cygan_distance(Hs.act(m, p), Hs.act(m, q)) == pytest.approx(d, rel=1e-10)
    # vertical separation v gives distance sqrt|v|
    assert Hs.cygan_distance(Hs.HeisPoint(0j, 0.0), Hs.HeisPoint(0j, 4.0)) == pytest.approx(2.0)


def test_chain_polar_round_trip():
    ch = Hs.FiniteChain(Hs.HeisPoint(1 - 0.5j, 0.3), 1.7)
    back = Hs.chain_from_polar(2j * ch.polar)
    assert back.center.zeta == pytest.approx(ch.center.zeta)
    assert back.center.v == pytest.approx(ch.center.v)
    assert back.radius == pytest.approx(1.7)
    for phi in np.linspace(0, 6, 7):
        assert herm(Hs.lift(ch.point(phi)), ch.polar) == pytest.approx(0, abs=1e-12)
    vc = Hs.VerticalChain(0.4 + 0.9j)
    assert Hs.chain_from_polar(vc.polar).zeta0 == pytest.approx(vc.zeta0)
    with pytest.raises(ValueError):
        Hs.FiniteChain(Hs.HeisPoint(0j, 0.0), 0.0)


def test_triangle_chains():
    p = TriangleParams(3.0, 2.0, 1.0)
    rep = build_rep(p.r1, p.r2, p.alpha)
    c1, c2 = Hs.chain_from_polar(rep.c1), Hs.chain_from_polar(rep.c2)
    c3 = Hs.chain_from_polar(rep.c3)
    e = complex(math.cos(p.theta), math.sin(p.theta))
    # with these polar vectors C1 and C2 are vertical through -r2 e^{i theta} and r1 e^{-i theta}
    assert c1.zeta0 == pytest.approx(-p.r2 * e)
    assert c2.zeta0 == pytest.approx(p.r1 * e.conjugate())
    assert c3.center.zeta == 0 and c3.radius == pytest.approx(1.0)


def test_vertical_inversion(rng):
    for _ in range(20):
        zeta, xi = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        m = reflection_matrix(Hs.VerticalChain(zeta).polar)
        q = Hs.act(m, Hs.HeisPoint(xi, float(rng.normal())))
        assert abs(q.zeta - Hs.vertical_inversion_action(zeta, xi)) < 1e-10


def test_i3_preserves_unit_spinal_sphere():
    rep = build_rep(2.0, 1.0, 2.0)
    for phi in np.linspace(0, 2 * math.pi, 20, endpoint=False):
        v = math.sin(3 * phi) * 0.9
        r = (1 - v * v) ** 0.25
        p = Hs.HeisPoint(complex(r * math.cos(phi), r * math.sin(phi)), v)
        assert abs(Hs.unit_spinal_residual(p)) < 1e-12
        assert abs(Hs.unit_spinal_residual(Hs.act(rep.i3, p))) < 1e-9


def test_isometric_sphere_of_i3():
    rep = build_rep(2.0, 1.5, 1.0)
    centre, radius = Hs.isometric_sphere(rep.i3)
    assert radius == pytest.approx(1.0)
    assert centre.zeta == pytest.approx(0) and centre.v == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        Hs.isometric_sphere_radius(Hs.heis_translation(1, 0))


def test_i2i1_is_translation():
    p = TriangleParams(2.5, 1.5, 1.2)
    sh = Hs.shimizu_test(p)
    th = p.theta
    xi_expected = 2 * (p.r1 * complex(math.cos(th), -math.sin(th)) + p.r2 * complex(math.cos(th), math.sin(th)))
    assert sh.xi == pytest.approx(xi_expected)
    # the matrix model gives the opposite sign from the +8 r1 r2 sin(2 theta) convention
    assert sh.v == pytest.approx(-8 * p.r1 * p.r2 * math.sin(2 * th))


def test_shimizu_isosceles_threshold():
    # r1 = r2 = r: non-discrete exactly when sin^2(alpha/2) < (2r^2 + 1 - 2r sqrt(r^2 + 1)) / (64 r^2)
    for r in (1.0, 1.5, 2.0):
        _, bound = Hs.shimizu_threshold(r, r)
        expected = (2 * r * r + 1 - 2 * r * math.sqrt(r * r + 1)) / (64 * r * r)
        assert bound / (64 * r * r) == pytest.approx(expected, abs=1e-10)
        s2 = expected * 0.9
        p = TriangleParams(r, r, 2 * math.asin(math.sqrt(s2)))
        rep = Hs.shimizu_test(p)
        assert rep.closed_form_non_discrete and rep.direct_non_discrete


def test_shimizu_identities(rng):
    for p in random_params(rng, 300):
        b, c, d = Hs.shimizu_coefficients(p.r1, p.r2)
        assert b * b - c == pytest.approx(Hs.shimizu_branch_discriminant(p.r1, p.r2), rel=1e-9, abs=1e-9)
        rep = Hs.shimizu_test(p)
        assert rep.quadratic_at_d == pytest.approx(Hs.quadratic_at_d_closed(p.r1, p.r2), rel=1e-9, abs=1e-9)
        if d > 0:
            assert rep.quadratic_at_d < 0
        assert rep.rhs == pytest.approx(Hs.shimizu_rhs_closed(p.r1, p.r2, p.alpha), rel=1e-10)
        assert rep.lhs == pytest.approx(1.0)
        assert rep.agree


def test_literal_bound_differs_without_guard():
    # r1 - r2 > 1/4 with a real-root branch: the unguarded bound exceeds d
    r1, r2 = 1.6, 1.3
    assert Hs.shimizu_branch_discriminant(r1, r2) >= 0
    _, guarded = Hs.shimizu_threshold(r1, r2)
    assert guarded == pytest.approx(1 - 16 * 0.09)
    assert Hs._literal_bound(r1, r2) > guarded

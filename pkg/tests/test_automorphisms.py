"""Translation and inversion automorphisms and their tangent actions."""

import math
import random
from fractions import Fraction

import pytest

from affinelab.arithmetic import ComplexValue, Tolerance
from affinelab.automorphisms import (
    SurfaceAutomorphism,
    conjugates_h_to_inverse,
    marking_automorphism,
)
from affinelab.errors import UsageError
from affinelab.flow import classify, flow
from affinelab.surfaces import AffineSurface, points_equal

TPI = ComplexValue.two_pi_i()
PLANE = AffineSurface.plane()


def test_marking_is_identity_iff_group_contains_it():
    assert marking_automorphism(AffineSurface.cylinder(TPI)).is_identity()
    assert not marking_automorphism(AffineSurface.cylinder(ComplexValue(1))).is_identity()
    two_pi = TPI * ComplexValue(0, -1)
    assert marking_automorphism(AffineSurface.torus(two_pi, TPI)).is_identity()
    assert not marking_automorphism(PLANE).is_identity()


def test_apply_and_inverse_cancel():
    cyl = AffineSurface.cylinder(ComplexValue(1))
    h = marking_automorphism(cyl)
    p = cyl.point(ComplexValue(Fraction(1, 3)))
    q = h.apply(h.inverse().apply(p))
    assert points_equal(p, q)


def test_translation_composition_adds_shifts():
    rng = random.Random(14)
    t = AffineSurface.torus(TPI, ComplexValue(1))
    for _ in range(30):
        c1 = ComplexValue.approx(rng.uniform(-3, 3), rng.uniform(-3, 3))
        c2 = ComplexValue.approx(rng.uniform(-3, 3), rng.uniform(-3, 3))
        a = SurfaceAutomorphism.translation(t, c1)
        b = SurfaceAutomorphism.translation(t, c2)
        p = t.point(ComplexValue.approx(rng.uniform(-3, 3), rng.uniform(-3, 3)))
        lhs = a.compose(b).apply(p)
        rhs = a.apply(b.apply(p))
        assert points_equal(lhs, rhs, Tolerance(1e-9))
        assert a.compose(b).equals(b.compose(a))


def test_inversion_is_involution():
    sigma = conjugates_h_to_inverse(PLANE)
    p = PLANE.point(ComplexValue(2, -3))
    assert points_equal(sigma.apply(sigma.apply(p)), p)
    assert sigma.inverse().equals(sigma)


def test_inversion_conjugates_marking_to_inverse():
    # sigma o h = h^{-1} o sigma, pointwise
    cyl = AffineSurface.cylinder(ComplexValue(1))
    h = marking_automorphism(cyl)
    sigma = conjugates_h_to_inverse(cyl)
    p = cyl.point(ComplexValue(Fraction(1, 3)))
    lhs = sigma.apply(h.apply(p))
    rhs = h.inverse().apply(sigma.apply(p))
    assert points_equal(lhs, rhs)
    # as automorphisms
    assert sigma.compose(h).equals(h.inverse().compose(sigma))


def test_inversion_conjugation_on_torus_points():
    rng = random.Random(3)
    t = AffineSurface.torus(TPI, ComplexValue(1, 1))
    h = marking_automorphism(t)
    sigma = conjugates_h_to_inverse(t)
    for _ in range(100):
        p = t.point(ComplexValue.approx(rng.uniform(-9, 9), rng.uniform(-9, 9)))
        assert points_equal(
            sigma.apply(h.apply(p)), h.inverse().apply(sigma.apply(p)), Tolerance(1e-9)
        )


def test_tangent_action_preserves_or_flips_classification():
    cyl = AffineSurface.cylinder(ComplexValue(1))
    v = cyl.tangent(ComplexValue(0), ComplexValue(Fraction(-1, 2)))
    h = marking_automorphism(cyl)
    moved = h.apply_tangent(v)
    assert moved.u == v.u
    assert classify(moved).tau == classify(v).tau
    sigma = conjugates_h_to_inverse(cyl)
    flipped = sigma.apply_tangent(v)
    assert flipped.u == -v.u
    assert classify(flipped).tau == pytest.approx(-classify(v).tau)
    up = cyl.tangent(ComplexValue(0), ComplexValue(0, 1))
    assert classify(sigma.apply_tangent(up)).kind == "regular_minus"


def test_translation_commutes_with_flow():
    rng = random.Random(61)
    cyl = AffineSurface.cylinder(ComplexValue(2, 1))
    c = ComplexValue.approx(0.7, -1.3)
    a = SurfaceAutomorphism.translation(cyl, c)
    for _ in range(100):
        v = cyl.tangent(
            ComplexValue.approx(rng.uniform(-4, 4), rng.uniform(-4, 4)),
            ComplexValue.approx(rng.uniform(-2, 2), rng.choice([-1, 1]) * rng.uniform(0.1, 2)),
        )
        t = rng.uniform(-5, 5)
        lhs = a.apply_tangent(flow(v, t))
        rhs = flow(a.apply_tangent(v), t)
        assert points_equal(lhs.base_point, rhs.base_point, Tolerance(1e-8))
        assert abs(complex(lhs.u) - complex(rhs.u)) < 1e-10


def test_surface_mismatch_rejected():
    h = marking_automorphism(PLANE)
    other = AffineSurface.cylinder(ComplexValue(1))
    with pytest.raises(UsageError):
        h.apply(other.point(0))
    with pytest.raises(UsageError):
        h.compose(marking_automorphism(other))
    with pytest.raises(UsageError):
        h.equals(marking_automorphism(other))


def test_power_and_identity():
    cyl = AffineSurface.cylinder(ComplexValue(1))
    h = marking_automorphism(cyl)
    assert h.power(0).is_identity()
    assert h.power(2).equals(h.compose(h))
    with pytest.raises(UsageError):
        conjugates_h_to_inverse(cyl).power(2)


def test_plane_inversion_marking_expansion():
    # -(z + 2pi*i) = (-z) - 2pi*i, exactly
    sigma = conjugates_h_to_inverse(PLANE)
    h = marking_automorphism(PLANE)
    z = ComplexValue(3, Fraction(1, 2))
    lhs = sigma.apply_plane(h.apply_plane(z))
    rhs = h.inverse().apply_plane(sigma.apply_plane(z))
    assert lhs == rhs
    assert lhs.is_exact

"""Quotient surfaces, canonical representatives, and the surface parser."""

import math
import random
from fractions import Fraction

import pytest

from affinelab.arithmetic import ComplexValue, Tolerance
from affinelab.errors import InvariantError, ParseError, UsageError
from affinelab.surfaces import (
    AffineSurface,
    DiscreteGroup,
    SurfacePoint,
    parse_surface,
    points_equal,
)

TPI = ComplexValue.two_pi_i()


# ---- discrete groups ----


def test_trivial_group():
    g = DiscreteGroup.trivial()
    assert g.contains(ComplexValue(0))
    assert not g.contains(ComplexValue(1))
    assert g.reduce(ComplexValue(3, 4)) == ComplexValue(3, 4)
    assert g.distance(complex(3, 4)) == 5.0


def test_rank1_membership_exact():
    g = DiscreteGroup.rank1(TPI)
    assert g.contains(TPI * 5)
    assert g.contains(ComplexValue(0))
    assert not g.contains(TPI * ComplexValue(Fraction(1, 2)))
    assert not g.contains(ComplexValue(1))
    assert g.coefficients_of(TPI * -3) == (-3,)
    assert g.coefficients_of(ComplexValue(1)) is None


def test_rank1_membership_approx():
    g = DiscreteGroup.rank1(ComplexValue.approx(0.0, 2 * math.pi))
    assert g.contains(ComplexValue.approx(0.0, 4 * math.pi))
    assert not g.contains(ComplexValue.approx(1e-3, 4 * math.pi))
    assert g.contains(ComplexValue.approx(1e-12, 4 * math.pi))


def test_rank1_rejects_zero_generator():
    with pytest.raises(InvariantError):
        DiscreteGroup.rank1(ComplexValue(0))


def test_rank2_membership():
    g = DiscreteGroup.rank2(TPI, ComplexValue(1))
    assert g.contains(TPI * 2 + ComplexValue(3))
    assert not g.contains(TPI * ComplexValue(Fraction(1, 3)))
    assert g.coefficients_of(TPI * 2 - ComplexValue(5)) == (2, -5)


# ---- canonical representatives ----


def test_reduce_real_line_example():
    g = DiscreteGroup.rank1(ComplexValue(1))
    rep = g.reduce(ComplexValue.approx(7.3))
    assert rep.re == pytest.approx(0.3, abs=1e-12)
    assert rep.im == 0.0


def test_reduce_stays_exact():
    g = DiscreteGroup.rank2(TPI, ComplexValue(1))
    z = TPI * 7 + ComplexValue(Fraction(5, 2)) - TPI * ComplexValue(Fraction(1, 4))
    rep = g.reduce(z)
    assert rep.is_exact
    # the difference is in the group
    assert g.contains(z - rep)


def _brute_min_norm(group, zc, box=6):
    gens = [complex(g) for g in group.generators]
    best = None
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            w = zc - a * gens[0] - b * gens[1]
            if best is None or abs(w) < abs(best):
                best = w
    return abs(best)


def test_reduce_tie_case_square_pi_lattice():
    # z = 5*pi + 3*pi*i over the lattice 2*pi Z + 2*pi*i Z: four corners at
    # distance pi*sqrt(2) tie; the (-pi, -pi) corner wins lexicographically.
    two_pi = ComplexValue.approx(2 * math.pi)
    two_pi_i = ComplexValue.approx(0.0, 2 * math.pi)
    g = DiscreteGroup.rank2(two_pi, two_pi_i)
    z = ComplexValue.approx(5 * math.pi, 3 * math.pi)
    rep = g.reduce(z)
    assert rep.re == pytest.approx(-math.pi, abs=1e-9)
    assert rep.im == pytest.approx(-math.pi, abs=1e-9)
    # equivalence and minimality against a brute-force oracle
    assert g.contains(z - rep, Tolerance(1e-9))
    assert abs(rep) <= _brute_min_norm(g, complex(z)) + 1e-9


def test_reduce_minimality_random():
    rng = random.Random(77)
    for _ in range(40):
        mu = ComplexValue.approx(rng.uniform(-3, 3), rng.uniform(-3, 3))
        nu = ComplexValue.approx(rng.uniform(-3, 3), rng.uniform(-3, 3))
        try:
            g = DiscreteGroup.rank2(mu, nu)
        except InvariantError:
            continue
        z = ComplexValue.approx(rng.uniform(-20, 20), rng.uniform(-20, 20))
        rep = g.reduce(z)
        assert g.contains(z - rep, Tolerance(1e-6))
        assert abs(rep) <= _brute_min_norm(g, complex(z), box=30) + 1e-9


def test_reduce_complex_fast_path_agrees():
    rng = random.Random(31)
    g = DiscreteGroup.rank2(
        ComplexValue.approx(1.7, 0.3), ComplexValue.approx(-0.4, 2.1)
    )
    g1 = DiscreteGroup.rank1(ComplexValue.approx(1.5, -0.5))
    for _ in range(100):
        zc = complex(rng.uniform(-30, 30), rng.uniform(-30, 30))
        assert abs(g.reduce_complex(zc)) == pytest.approx(
            abs(complex(g.reduce(ComplexValue.approx(zc.real, zc.imag)))), abs=1e-12
        )
        assert abs(g1.reduce_complex(zc)) == pytest.approx(
            abs(complex(g1.reduce(ComplexValue.approx(zc.real, zc.imag)))), abs=1e-12
        )


def test_distance():
    g = DiscreteGroup.rank1(ComplexValue(2))
    assert g.distance(complex(1.0, 0.0)) == pytest.approx(1.0)
    assert g.distance(complex(3.9, 0.0)) == pytest.approx(0.1)
    assert g.distance(complex(0.0, 0.7)) == pytest.approx(0.7)


# ---- surfaces, points, tangents ----


def test_surface_kinds_and_accessors():
    p = AffineSurface.plane()
    c = AffineSurface.cylinder(TPI)
    t = AffineSurface.torus(TPI, ComplexValue(1))
    assert (p.kind, c.kind, t.kind) == ("plane", "cylinder", "torus")
    assert c.translation_scalar == TPI
    assert t.lattice.mu == TPI
    with pytest.raises(UsageError):
        p.translation_scalar
    with pytest.raises(UsageError):
        c.lattice


def test_marked_points():
    c = AffineSurface.cylinder(TPI)
    zero, marked = c.marked_points()
    assert zero.z.is_zero()
    assert marked.z == TPI
    # on this cylinder the two marked points coincide
    assert points_equal(zero, marked)
    c2 = AffineSurface.cylinder(ComplexValue(1))
    zero2, marked2 = c2.marked_points()
    assert not points_equal(zero2, marked2)


def test_points_equal_requires_same_surface():
    c1 = AffineSurface.cylinder(TPI)
    c2 = AffineSurface.cylinder(ComplexValue(1))
    with pytest.raises(UsageError):
        points_equal(c1.point(0), c2.point(0))


def test_points_equal_tracks():
    t = AffineSurface.torus(TPI, ComplexValue(1))
    assert points_equal(t.point(TPI * 4 + ComplexValue(2)), t.point(0))
    assert not points_equal(t.point(ComplexValue(Fraction(1, 2))), t.point(0))
    ta = AffineSurface.torus(
        ComplexValue.approx(0.0, 2 * math.pi), ComplexValue.approx(1.0)
    )
    assert points_equal(ta.point(ComplexValue.approx(2.0, 2 * math.pi)), ta.point(0.0))
    assert not points_equal(ta.point(ComplexValue.approx(2.5, 0.0)), ta.point(0.0))


def test_tangent_requires_nonzero_direction():
    c = AffineSurface.cylinder(TPI)
    with pytest.raises(InvariantError):
        c.tangent(0, 0)
    v = c.tangent(ComplexValue(1), ComplexValue(0, 1))
    assert v.is_exact
    assert v.base_point.z == ComplexValue(1)


def test_surface_equality():
    assert AffineSurface.cylinder(TPI) == AffineSurface.cylinder(TPI)
    assert AffineSurface.cylinder(TPI) != AffineSurface.cylinder(ComplexValue(1))
    assert AffineSurface.plane() == AffineSurface.plane()
    assert AffineSurface.plane() != AffineSurface.cylinder(TPI)


# ---- parser ----


def test_parse_surface_forms():
    assert parse_surface("plane").kind == "plane"
    c = parse_surface("cylinder:2pi*i")
    assert c.kind == "cylinder"
    assert c.translation_scalar == TPI
    t = parse_surface("torus:2pi*i,1")
    assert t.kind == "torus"
    assert t.lattice.mu == TPI and t.lattice.nu == ComplexValue(1)
    t2 = parse_surface(" torus: 1+2i , 3i ")
    assert t2.lattice.mu == ComplexValue(1, 2)


def test_parse_surface_rejects_mixed_exactness():
    with pytest.raises(ParseError):
        parse_surface("torus:2pi*i,1.5")
    with pytest.raises(ParseError):
        parse_surface("torus:0.5,1+i")
    # both approximate is fine
    assert parse_surface("torus:1.5,2.5i").kind == "torus"


def test_parse_surface_errors():
    for bad in [
        "sphere",
        "torus:1",
        "torus:1,2,3",
        "torus:1,2",  # dependent basis
        "cylinder:0",
        "cylinder:",
        "",
    ]:
        with pytest.raises(ParseError):
            parse_surface(bad)

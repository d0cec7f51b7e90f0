"""Lifted conjugacies: construction, flow commutation, branch and boundary checks."""

import cmath
import math
import random
from fractions import Fraction

import pytest

from affinelab.arithmetic import ComplexValue, parse_complex
from affinelab.conjugacy import (
    ConjugacyMode,
    CylinderScalar,
    IdentityWitness,
    TorusScalar,
    decide,
    decide_cylinder,
)
from affinelab.errors import InvariantError, UsageError
from affinelab.flow import flow
from affinelab.lift import (
    BaseMap,
    base_invariant_deviation,
    branch_independence,
    build_base,
    lift,
    run_verification,
    verification_passed,
    verify_boundary_relations,
    verify_flow_conjugacy,
)
from affinelab.surfaces import AffineSurface, parse_surface, points_equal

HOLO = ConjugacyMode.HOLOMORPHIC
TPI = ComplexValue.two_pi_i()


def known_conjugate_pair():
    s1 = parse_surface("cylinder:1")
    s2 = parse_surface("cylinder:2pi*i/(2pi*i-1)")
    verdict = decide(s1, s2, HOLO)
    assert verdict.is_conjugate
    return s1, s2, verdict.witness


# ---- base maps ----


class TestBuildBase:
    def test_identity_scalar_gives_identity_map(self):
        s = parse_surface("cylinder:1")
        base = build_base(CylinderScalar(1, ComplexValue(1)), s, s)
        assert complex(base.alpha) == 1
        assert base.beta.is_zero()
        assert not base.normalized

    def test_torus_identity(self):
        s = parse_surface("torus:2pi*i,1")
        base = build_base(TorusScalar(ComplexValue(1)), s, s)
        assert complex(base.alpha) == 1

    def test_minus_sign_scalar_conjugates_markings_directly(self):
        # rho1 = 1/3 and rho2 = 2/3 sum to an integer, so only the folded
        # inversion map works; it must satisfy phi(z+2pi*i) = phi(z)+2pi*i
        # modulo the target group, pointwise
        mu1 = TPI * ComplexValue(3)
        mu2 = TPI * ComplexValue(Fraction(3, 2))
        verdict = decide_cylinder(mu1, mu2, HOLO)
        assert verdict.witness.sign == -1
        s1 = AffineSurface.cylinder(mu1)
        s2 = AffineSurface.cylinder(mu2)
        base = build_base(verdict.witness, s1, s2)
        assert base.normalized
        rng = random.Random(3)
        for _ in range(100):
            z = ComplexValue.approx(rng.uniform(-9, 9), rng.uniform(-9, 9))
            lhs = s2.point(base.apply_plane(z + TPI))
            rhs = s2.point(base.apply_plane(z) + TPI)
            assert points_equal(lhs, rhs)

    def test_real_linear_base_fixes_marking_and_period(self):
        s1 = parse_surface("cylinder:1")
        s2 = parse_surface("cylinder:2")
        verdict = decide(s1, s2, ConjugacyMode.TOPOLOGICAL)
        base = build_base(verdict.witness, s1, s2)
        # exact: 2pi*i -> 2pi*i and mu1 -> mu2
        assert (base.apply_plane(TPI) - TPI).is_zero()
        assert (base.apply_plane(ComplexValue(1)) - ComplexValue(2)).is_zero()

    def test_torus_matrix_base_maps_lattice_onto_lattice(self):
        s1 = parse_surface("torus:2*2pi*i,1")
        s2 = parse_surface("torus:1,2*2pi*i+1")
        verdict = decide(s1, s2, ConjugacyMode.TOPOLOGICAL)
        base = build_base(verdict.witness, s1, s2)
        L1, L2 = s1.lattice, s2.lattice
        for g in (L1.mu, L1.nu):
            img = base.apply_plane(g)
            assert s2.group.contains(img)
        # marking congruence transfers 2pi*i to 2pi*i mod Gamma2
        d = base.apply_plane(TPI) - TPI
        assert s2.group.contains(d)

    def test_witness_surface_mismatch_rejected(self):
        s = parse_surface("torus:2pi*i,1")
        c = parse_surface("cylinder:1")
        with pytest.raises(UsageError):
            build_base(CylinderScalar(1, ComplexValue(1)), s, s)
        with pytest.raises(UsageError):
            build_base(TorusScalar(ComplexValue(1)), c, c)

    def test_check_rejects_non_conjugating_map(self):
        s1 = AffineSurface.cylinder(TPI)
        s2 = AffineSurface.cylinder(TPI * ComplexValue(2))
        with pytest.raises(InvariantError):
            build_base(CylinderScalar(1, ComplexValue(2)), s1, s2)
        # same witness with check off: measured, not raised
        base = build_base(CylinderScalar(1, ComplexValue(2)), s1, s2, check=False)
        assert base_invariant_deviation(base) == pytest.approx(2 * math.pi)


# ---- the lift itself ----


class TestLiftedConjugacy:
    def test_identity_base_is_identity_on_tangents(self):
        s = parse_surface("torus:2pi*i,1")
        psi = lift(build_base(TorusScalar(ComplexValue(1)), s, s))
        v = s.tangent(ComplexValue(Fraction(1, 3), Fraction(1, 7)),
                      ComplexValue(2, 1))
        w = psi.apply(v)
        assert points_equal(w.base_point, v.base_point)
        assert complex(w.u) == complex(v.u)

    def test_unit_direction_reduces_to_base_map(self):
        # Log 1 = 0, so Psi(z, 1) = (phi(z), 1), exactly
        s1, s2, witness = known_conjugate_pair()
        psi = lift(build_base(witness, s1, s2))
        z = ComplexValue(Fraction(1, 5), Fraction(2, 5))
        v = s1.tangent(z, ComplexValue(1))
        w = psi.apply(v)
        expected = psi.base.apply_plane(z)
        assert w.z.is_exact
        assert points_equal(w.base_point, s2.point(expected))

    def test_flow_commutes_on_known_pair(self):
        s1, s2, witness = known_conjugate_pair()
        psi = lift(build_base(witness, s1, s2))
        rng = random.Random(5)
        for t in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0):
            z = ComplexValue.approx(rng.uniform(-2, 2), rng.uniform(-2, 2))
            u = ComplexValue.approx(rng.uniform(-1, 1), rng.uniform(0.2, 1.5))
            v = s1.tangent(z, u)
            lhs = psi.apply(flow(v, t))
            rhs = flow(psi.apply(v), t)
            assert points_equal(lhs.base_point, rhs.base_point, 1e-9)
            assert abs(complex(lhs.u) - complex(rhs.u)) < 1e-12

    def test_apply_complex_agrees_with_apply(self):
        s1, s2, witness = known_conjugate_pair()
        psi = lift(build_base(witness, s1, s2))
        z, u = complex(0.3, -0.7), complex(1.2, 0.4)
        wf, uf = psi.apply_complex(z, u)
        w = psi.apply(s1.tangent(ComplexValue.approx(z.real, z.imag),
                                 ComplexValue.approx(u.real, u.imag)))
        assert s2.group.distance(wf - complex(w.z)) < 1e-12
        assert uf == complex(w.u)

    def test_wrong_surface_rejected(self):
        s1, s2, witness = known_conjugate_pair()
        psi = lift(build_base(witness, s1, s2))
        with pytest.raises(UsageError):
            psi.apply(s2.tangent(ComplexValue(0), ComplexValue(1)))


# ---- verification ----


class TestVerification:
    def test_identity_verification_is_exact(self):
        s = parse_surface("torus:2pi*i,1")
        rep = run_verification(s, s, TorusScalar(ComplexValue(1)), samples=90)
        assert rep.max_deviation == 0.0
        assert rep.branch_ok and rep.boundary_ok
        assert verification_passed(rep)

    def test_known_pair_passes_standard_plan(self):
        s1, s2, witness = known_conjugate_pair()
        rep = run_verification(s1, s2, witness, samples=1000)
        assert rep.max_deviation <= 1e-8
        assert rep.domain_agreements == rep.samples * len(rep.t_grid)
        assert verification_passed(rep)

    def test_square_torus_rotation_passes(self):
        s = parse_surface("torus:2pi,2pi*i")
        rep = run_verification(s, s, TorusScalar(ComplexValue(0, 1)),
                               samples=300)
        assert verification_passed(rep)

    def test_minus_sign_witness_passes(self):
        mu1 = TPI * ComplexValue(3)
        mu2 = TPI * ComplexValue(Fraction(3, 2))
        verdict = decide_cylinder(mu1, mu2, HOLO)
        rep = run_verification(AffineSurface.cylinder(mu1),
                               AffineSurface.cylinder(mu2),
                               verdict.witness, samples=300)
        assert verification_passed(rep)

    def test_real_linear_witness_passes(self):
        s1 = parse_surface("cylinder:1")
        s2 = parse_surface("cylinder:2")
        verdict = decide(s1, s2, ConjugacyMode.TOPOLOGICAL)
        rep = run_verification(s1, s2, verdict.witness, samples=300)
        assert verification_passed(rep)

    def test_torus_matrix_witness_passes(self):
        s1 = parse_surface("torus:2*2pi*i,1")
        s2 = parse_surface("torus:1,2*2pi*i+1")
        verdict = decide(s1, s2, ConjugacyMode.TOPOLOGICAL)
        rep = run_verification(s1, s2, verdict.witness, samples=300)
        assert verification_passed(rep)

    def test_flow_report_counts_and_grid(self):
        s1, s2, witness = known_conjugate_pair()
        psi = lift(build_base(witness, s1, s2))
        rep = verify_flow_conjugacy(psi, n_samples=60, t_grid=(0.5, -0.5))
        assert rep.samples == 60
        assert rep.t_grid == (0.5, -0.5)
        assert rep.domain_agreements == 120
        assert rep.max_deviation <= 1e-9

    def test_report_json_schema(self):
        s = parse_surface("plane")
        rep = run_verification(s, s, IdentityWitness(), samples=30, seed=7)
        d = rep.to_json_dict()
        assert set(d) == {
            "samples", "t_grid", "max_deviation", "domain_agreements",
            "branch_ok", "boundary_ok", "seed",
        }
        assert d["seed"] == 7

    def test_determinism(self):
        s1, s2, witness = known_conjugate_pair()
        a = run_verification(s1, s2, witness, samples=120, seed=3)
        b = run_verification(s1, s2, witness, samples=120, seed=3)
        assert a == b


class TestNegativeControls:
    def test_corrupted_linear_coefficient_fails_branch_independence(self):
        s1, s2, witness = known_conjugate_pair()
        good = build_base(witness, s1, s2)
        bad = BaseMap.from_affine(
            s1, s2, good.alpha + ComplexValue.approx(0.3), good.beta, good.shift
        )
        assert branch_independence(lift(good))
        assert not branch_independence(lift(bad))

    def test_constant_shift_is_harmless(self):
        # shifting phi by a constant changes nothing the verifier measures:
        # the shifted map is still a genuine conjugacy
        s1, s2, witness = known_conjugate_pair()
        good = build_base(witness, s1, s2)
        shifted = BaseMap.from_affine(
            s1, s2, good.alpha, good.beta, ComplexValue.approx(0.37, -1.2)
        )
        rep = run_verification(s1, s2, base=shifted, samples=200)
        assert verification_passed(rep)

    def test_scalar_candidates_fail_for_nonconjugate_cylinders(self):
        # periods 2pi*i and 4pi*i are not conjugate; neither candidate
        # scalar passes, with deviation bounded well away from zero
        s1 = AffineSurface.cylinder(TPI)
        s2 = AffineSurface.cylinder(TPI * ComplexValue(2))
        for lam in (ComplexValue(2), ComplexValue(-2)):
            base = BaseMap.from_affine(s1, s2, lam, shift=ComplexValue.approx(0.11))
            rep = run_verification(s1, s2, base=base, samples=120)
            assert rep.max_deviation >= 1e-2
            assert not verification_passed(rep)

    def test_verifier_catches_wrong_witness_via_report(self):
        s1 = AffineSurface.cylinder(TPI)
        s2 = AffineSurface.cylinder(TPI * ComplexValue(2))
        rep = run_verification(s1, s2, CylinderScalar(1, ComplexValue(2)),
                               samples=120)
        assert rep.max_deviation >= 1e-2


# ---- boundary relations ----


class TestBoundaryRelations:
    def test_identity_boundary_report(self):
        s = parse_surface("cylinder:1")
        psi = lift(build_base(CylinderScalar(1, ComplexValue(1)), s, s))
        rep = verify_boundary_relations(psi)
        assert rep.boundary_ok
        assert rep.max_deviation <= 1e-12
        assert rep.domain_agreements == rep.samples

    def test_known_pair_boundary_report(self):
        s1, s2, witness = known_conjugate_pair()
        psi = lift(build_base(witness, s1, s2))
        rep = verify_boundary_relations(psi)
        assert rep.boundary_ok
        assert rep.max_deviation <= 1e-9

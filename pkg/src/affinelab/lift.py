"""Tangent-bundle conjugacies built from base witnesses, plus verification.

A witness from the decision module determines an affine base map
phi(z) = alpha*z + beta*conj(z) + shift between the quotient bases.  Its
lift to nonzero tangent vectors is

    Psi(z, u) = (phi(z + Log u) - Log u, u)

which conjugates the geodesic flows whenever phi conjugates the marking
automorphisms.  The verifier measures that claim numerically: flow
commutation over a stratified sample plan, independence from the branch of
Log, and the boundary relations across bifurcation sheets.  Deviations are
reported, never asserted, so the same machinery doubles as a negative
control on maps that are not conjugacies.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .arithmetic import (
    ComplexValue,
    DEFAULT_TOLERANCE,
    Tolerance,
    as_complex_value,
    principal_log,
)
from .conjugacy import (
    CylinderRealLinear,
    CylinderScalar,
    IdentityWitness,
    TorusRealLinear,
    TorusScalar,
)
from .errors import InvariantError, UsageError
from .flow import boundary_flow, flow_complex
from .surfaces import AffineSurface, TangentVector

__all__ = [
    "BaseMap",
    "LiftedConjugacy",
    "VerificationReport",
    "STANDARD_T_GRID",
    "PASS_TOLERANCE",
    "build_base",
    "base_invariant_deviation",
    "lift",
    "verify_flow_conjugacy",
    "verify_boundary_relations",
    "branch_independence",
    "run_verification",
    "verification_passed",
]

STANDARD_T_GRID = (-5.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 5.0)
PASS_TOLERANCE = 1e-8

_ONE = ComplexValue(1)
_TPI = ComplexValue.two_pi_i()


class BaseMap:
    """A real-affine plane map phi(z) = alpha*z + beta*conj(z) + shift.

    Every witness the decision module emits is of this form.  `normalized`
    records that an inversion was folded into the coefficients (the
    minus-sign cylinder scalar), so the map conjugates marking to marking
    rather than to its inverse.
    """

    __slots__ = ("witness", "source", "target", "normalized",
                 "alpha", "beta", "shift")

    def __init__(self, witness, source: AffineSurface, target: AffineSurface,
                 alpha, beta=0, shift=0, normalized: bool = False):
        object.__setattr__(self, "witness", witness)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "normalized", bool(normalized))
        object.__setattr__(self, "alpha", as_complex_value(alpha))
        object.__setattr__(self, "beta", as_complex_value(beta))
        object.__setattr__(self, "shift", as_complex_value(shift))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("BaseMap is immutable")

    @classmethod
    def from_affine(cls, source, target, alpha, beta=0, shift=0) -> "BaseMap":
        """Check-free constructor for candidate maps (negative controls)."""
        return cls(None, source, target, alpha, beta, shift)

    @property
    def is_exact(self) -> bool:
        return self.alpha.is_exact and self.beta.is_exact and self.shift.is_exact

    def apply_plane(self, z) -> ComplexValue:
        z = as_complex_value(z)
        w = self.alpha * z
        if not self.beta.is_zero():
            w = w + self.beta * z.conjugate()
        if not self.shift.is_zero():
            w = w + self.shift
        return w

    def coefficients(self) -> "tuple[complex, complex, complex]":
        return (complex(self.alpha), complex(self.beta), complex(self.shift))

    def plane_map(self):
        """Float closure for sampling loops."""
        a, b, c = self.coefficients()
        return lambda z: a * z + b * z.conjugate() + c

    def __repr__(self) -> str:
        a, b, c = self.coefficients()
        return f"BaseMap(alpha={a}, beta={b}, shift={c})"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def build_base(
    witness,
    s1: AffineSurface,
    s2: AffineSurface,
    tol: Tolerance = DEFAULT_TOLERANCE,
    check: bool = True,
) -> BaseMap:
    """Turn a witness into the concrete base map it promises.

    With check=True the marking and deck-group invariants are measured and
    a violation raises; check=False defers judgment to the verifier.
    """
    if isinstance(witness, IdentityWitness):
        _require(s1.kind == s2.kind, "identity witness needs same-kind surfaces")
        base = BaseMap(witness, s1, s2, _ONE)
    elif isinstance(witness, CylinderScalar):
        _require(s1.kind == "cylinder" and s2.kind == "cylinder",
                 "cylinder scalar witness needs two cylinders")
        # sign -1 means the inversion has been folded into the ratio already
        base = BaseMap(witness, s1, s2, witness.ratio,
                       normalized=(witness.sign == -1))
    elif isinstance(witness, CylinderRealLinear):
        _require(s1.kind == "cylinder" and s2.kind == "cylinder",
                 "cylinder real-linear witness needs two cylinders")
        mu1, mu2 = witness.mu1, witness.mu2
        re1 = (mu1 + mu1.conjugate())
        if re1.is_zero():
            raise UsageError("real-linear cylinder witness needs Re(mu1) != 0")
        alpha = (mu2 + mu1.conjugate()) / re1
        base = BaseMap(witness, s1, s2, alpha, alpha - _ONE)
    elif isinstance(witness, TorusScalar):
        _require(s1.kind == "torus" and s2.kind == "torus",
                 "torus scalar witness needs two tori")
        base = BaseMap(witness, s1, s2, witness.alpha)
    elif isinstance(witness, TorusRealLinear):
        _require(s1.kind == "torus" and s2.kind == "torus",
                 "torus matrix witness needs two tori")
        (a, b), (c, d) = witness.matrix
        L1, L2 = s1.lattice, s2.lattice
        A = L2.mu * a + L2.nu * b
        B = L2.mu * c + L2.nu * d
        det = L1.mu * L1.nu.conjugate() - L1.mu.conjugate() * L1.nu
        alpha = (A * L1.nu.conjugate() - L1.mu.conjugate() * B) / det
        beta = (L1.mu * B - A * L1.nu) / det
        base = BaseMap(witness, s1, s2, alpha, beta)
    else:
        raise UsageError(f"unrecognized witness {witness!r}")
    if check:
        dev = base_invariant_deviation(base)
        if dev > max(tol.eps, 1e-10):
            raise InvariantError(
                f"witness does not conjugate the markings: deviation {dev:.3e}"
            )
    return base


def base_invariant_deviation(base: BaseMap) -> float:
    """How far phi is from conjugating marking to marking and Gamma1 to Gamma2.

    Both quantities are z-independent for affine maps: the marking defect is
    (alpha - beta - 1)*2pi*i and the deck defect alpha*g + beta*conj(g) per
    generator, each measured as distance to the target group.
    """
    a, b, _ = base.coefficients()
    g2 = base.target.group
    tpi = complex(0.0, 2.0 * math.pi)
    dev = g2.distance(a * tpi - b * tpi - tpi)
    for gen in base.source.group.generators:
        gc = complex(gen)
        dev = max(dev, g2.distance(a * gc + b * gc.conjugate()))
    return dev


class LiftedConjugacy:
    """Psi(z, u) = (phi(z + Log u) - Log u, u) on nonzero tangent vectors."""

    __slots__ = ("base",)

    def __init__(self, base: BaseMap):
        object.__setattr__(self, "base", base)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("LiftedConjugacy is immutable")

    @property
    def source(self) -> AffineSurface:
        return self.base.source

    @property
    def target(self) -> AffineSurface:
        return self.base.target

    def apply(self, v: TangentVector, branch: int = 0,
              tol: Tolerance = DEFAULT_TOLERANCE) -> TangentVector:
        """Image of v; `branch` shifts Log u by 2*pi*i*branch.

        For a valid base the branch does not matter modulo the target group;
        the default is the principal branch.
        """
        if v.surface != self.base.source:
            raise UsageError("tangent vector does not live on the source surface")
        L = principal_log(v.u)
        if branch:
            L = L + _TPI * branch
        # phi(z + L) - L = phi(z) + (alpha - 1)*L + beta*conj(L): the affine
        # form keeps exact inputs exact whenever the adjustment vanishes
        w = self.base.apply_plane(v.z)
        adj = (self.base.alpha - _ONE) * L + self.base.beta * L.conjugate()
        if not adj.is_zero():
            w = w + adj
        w = self.base.target.group.reduce(w, tol)
        return TangentVector(self.base.target, w, v.u)

    def apply_complex(self, z: complex, u: complex,
                      branch: int = 0) -> "tuple[complex, complex]":
        """Float fast path; the z-part is not reduced."""
        a, b, c = self.base.coefficients()
        L = cmath.log(u)
        if branch:
            L += complex(0.0, 2.0 * math.pi * branch)
        w = a * z + b * z.conjugate() + c + (a - 1.0) * L + b * L.conjugate()
        return (w, u)


def lift(base: BaseMap) -> LiftedConjugacy:
    return LiftedConjugacy(base)


@dataclass(frozen=True)
class VerificationReport:
    samples: int
    t_grid: "tuple[float, ...]"
    max_deviation: float
    domain_agreements: int
    branch_ok: bool
    boundary_ok: bool
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "samples": self.samples,
            "t_grid": list(self.t_grid),
            "max_deviation": self.max_deviation,
            "domain_agreements": self.domain_agreements,
            "branch_ok": self.branch_ok,
            "boundary_ok": self.boundary_ok,
            "seed": self.seed,
        }


def _sample_direction(rng: random.Random, stratum: int) -> complex:
    # thirds: positive real, negative real, near-bifurcation complex with
    # |Im u| pinned at 1e-3 (smaller would conflate branch behavior with
    # float cancellation; true limits are the boundary operation's job)
    if stratum == 0:
        return complex(10.0 ** rng.uniform(-1.0, 1.0), 0.0)
    if stratum == 1:
        return complex(-(10.0 ** rng.uniform(-1.0, 1.0)), 0.0)
    re = rng.uniform(-2.0, 2.0)
    return complex(re, rng.choice((-1.0, 1.0)) * 1e-3)


def _sample_point(rng: random.Random) -> complex:
    return complex(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0))


def verify_flow_conjugacy(
    psi: LiftedConjugacy,
    n_samples: int = 1000,
    t_grid: "tuple[float, ...]" = STANDARD_T_GRID,
    tol: Tolerance = DEFAULT_TOLERANCE,
    seed: int = 0,
) -> VerificationReport:
    """Measure Psi(F^t v) against F^t(Psi v) over a stratified sample plan.

    Domain agreement is counted per (sample, t): the flow is defined at v
    for time t iff it is defined at Psi(v), which holds automatically since
    Psi preserves u; the count records it rather than assuming it.
    """
    if n_samples < 1:
        raise UsageError("need at least one sample")
    rng = random.Random(seed)
    g2 = psi.target.group
    a, b, c = psi.base.coefficients()
    max_dev = 0.0
    agree = 0
    for i in range(n_samples):
        u = _sample_direction(rng, i % 3)
        z = _sample_point(rng)
        L = cmath.log(u)
        w0 = a * z + b * z.conjugate() + c + (a - 1.0) * L + b * L.conjugate()
        for t in t_grid:
            src = flow_complex(z, u, t)
            tgt = flow_complex(w0, u, t)
            if (src is None) == (tgt is None):
                agree += 1
            if src is None or tgt is None:
                continue
            z1, u1 = src
            z2, u2 = tgt
            L1 = cmath.log(u1)
            lhs = a * z1 + b * z1.conjugate() + c \
                + (a - 1.0) * L1 + b * L1.conjugate()
            dev = g2.distance(lhs - z2) + abs(u1 - u2)
            if dev > max_dev:
                max_dev = dev
    return VerificationReport(
        samples=n_samples,
        t_grid=tuple(float(t) for t in t_grid),
        max_deviation=max_dev,
        domain_agreements=agree,
        branch_ok=True,
        boundary_ok=True,
        seed=seed,
    )


def _branch_deviation(psi: LiftedConjugacy, n_samples: int, seed: int) -> float:
    rng = random.Random(seed)
    g2 = psi.target.group
    max_dev = 0.0
    for i in range(n_samples):
        u = _sample_direction(rng, i % 3)
        z = _sample_point(rng)
        w0, _ = psi.apply_complex(z, u, 0)
        for k in (-2, -1, 1, 2):
            wk, _ = psi.apply_complex(z, u, k)
            dev = g2.distance(wk - w0)
            if dev > max_dev:
                max_dev = dev
    return max_dev


def branch_independence(
    psi: LiftedConjugacy,
    n_samples: int = 100,
    tol: float = PASS_TOLERANCE,
    seed: int = 0,
) -> bool:
    """Whether Log u + 2*pi*i*k gives the same image mod the target group.

    True exactly when (alpha - beta - 1)*2pi*i lies in the target group, so
    a corrupted linear coefficient fails here even though the flow
    commutation identity alone would still hold.
    """
    return _branch_deviation(psi, n_samples, seed) <= tol


def _tangent_gap(x: TangentVector, y: TangentVector) -> float:
    dz = complex(x.z) - complex(y.z)
    du = complex(x.u) - complex(y.u)
    return x.surface.group.distance(dz) + abs(du)


def verify_boundary_relations(
    psi: LiftedConjugacy,
    tol: float = PASS_TOLERANCE,
    seed: int = 0,
) -> VerificationReport:
    """Boundary checks across bifurcation sheets tau2 in {1/2, 1, 2}.

    (i) Psi fixes the sheet (u unchanged, counted as agreements);
    (ii) Psi commutes with both one-sided boundary maps F^{t,+-};
    (iii) on each surface separately, F^{t,-} after the marking lift equals
    F^{t,+} (their difference is one full turn, a deck transformation).
    """
    rng = random.Random(seed)
    max_dev = 0.0
    agree = 0
    count = 0
    crossing_times = []
    for tau2 in (Fraction(1, 2), Fraction(1), Fraction(2)):
        tau1 = ComplexValue(-tau2)
        u = ComplexValue(Fraction(-1) / tau2)
        crossing_times.append(float(2 * tau2))
        # exact rational base points keep the whole pipeline on the exact
        # track for exact bases, so an identity witness verifies to 0.0
        # rather than to float rounding noise; approximate bases still pass
        # through principal_log and are measured in floats
        zs = [
            ComplexValue(Fraction(rng.randrange(-32, 33), 16),
                         Fraction(rng.randrange(-32, 33), 16))
            for _ in range(4)
        ]
        for z in zs:
            v = psi.source.tangent(z, u)
            w = psi.apply(v)
            count += 1
            if complex(w.u) == complex(v.u):
                agree += 1
            for side in ("plus", "minus"):
                lhs = psi.apply(boundary_flow(v, tau1, side))
                rhs = boundary_flow(w, tau1, side)
                max_dev = max(max_dev, _tangent_gap(lhs, rhs))
            for vec in (v, w):
                a = boundary_flow(vec.surface.tangent(
                    *_shift_tangent(vec)), tau1, "minus")
                b = boundary_flow(vec, tau1, "plus")
                max_dev = max(max_dev, _tangent_gap(a, b))
    return VerificationReport(
        samples=count,
        t_grid=tuple(crossing_times),
        max_deviation=max_dev,
        domain_agreements=agree,
        branch_ok=True,
        boundary_ok=(max_dev <= tol and agree == count),
        seed=seed,
    )


def _shift_tangent(v: TangentVector) -> "tuple[ComplexValue, ComplexValue]":
    # the tangent lift of the marking: (z, u) -> (z + 2*pi*i, u)
    return (v.z + _TPI, v.u)


def run_verification(
    s1: AffineSurface,
    s2: AffineSurface,
    witness=None,
    base: "BaseMap | None" = None,
    samples: int = 1000,
    t_grid: "tuple[float, ...]" = STANDARD_T_GRID,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOLERANCE,
    pass_tol: float = PASS_TOLERANCE,
) -> VerificationReport:
    """Full verification: base invariants, flow, branch, boundary.

    All measured deviations fold into max_deviation, so a map that fails to
    conjugate the markings cannot pass on flow commutation alone.
    """
    if base is None:
        if witness is None:
            raise UsageError("run_verification needs a witness or a base map")
        base = build_base(witness, s1, s2, tol, check=False)
    psi = lift(base)
    base_dev = base_invariant_deviation(base)
    flow_rep = verify_flow_conjugacy(psi, samples, t_grid, tol, seed)
    branch_dev = _branch_deviation(psi, min(samples, 100), seed)
    boundary_rep = verify_boundary_relations(psi, pass_tol, seed)
    max_dev = max(base_dev, flow_rep.max_deviation, branch_dev,
                  boundary_rep.max_deviation)
    return VerificationReport(
        samples=flow_rep.samples,
        t_grid=flow_rep.t_grid,
        max_deviation=max_dev,
        domain_agreements=flow_rep.domain_agreements,
        branch_ok=(branch_dev <= pass_tol),
        boundary_ok=boundary_rep.boundary_ok,
        seed=seed,
    )


def verification_passed(report: VerificationReport,
                        pass_tol: float = PASS_TOLERANCE) -> bool:
    return (
        report.max_deviation <= pass_tol
        and report.branch_ok
        and report.boundary_ok
        and report.domain_agreements == report.samples * len(report.t_grid)
    )

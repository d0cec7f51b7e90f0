"""Deciding conjugacy of geodesic flows on quotient surfaces.

The flow on a quotient is conjugate (topologically or holomorphically) to the
flow on another exactly when the marking translations by 2*pi*i are conjugate
as automorphisms.  That reduces every decision to arithmetic:

* cylinders: rho = 2*pi*i/mu; holomorphic iff rho2 - rho1 or rho2 + rho1 is
  an integer; topological additionally when both periods have nonzero real
  part (an R-linear map matching (mu, 2*pi*i) bases works);
* tori, holomorphic: a scaling alpha with alpha*Gamma1 = Gamma2 that moves
  2*pi*i by a lattice element; |alpha| is pinned by covolumes, so candidates
  live on one norm shell;
* tori, topological: the coordinates of 2*pi*i in the two lattice bases must
  lie in one orbit of GL(2,Z) acting modulo Z^2.  Rational coordinate pairs
  are classified exactly by their order; otherwise a bounded matrix search
  runs, and exhaustion is reported as Unknown rather than NotConjugate.

Every Conjugate verdict carries a constructive witness; the lift module can
turn any witness into a tangent-bundle conjugacy and verify it numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .arithmetic import (
    ComplexValue,
    DEFAULT_TOLERANCE,
    Lattice,
    Tolerance,
    as_complex_value,
    covolume,
    enumerate_norm_shell,
    is_near_integer,
    lattice_member,
)
from .errors import DomainError, InvariantError, UsageError
from .surfaces import AffineSurface

__all__ = [
    "ConjugacyMode",
    "MarkedTorus",
    "IdentityWitness",
    "CylinderScalar",
    "CylinderRealLinear",
    "TorusScalar",
    "TorusRealLinear",
    "ConjugacyVerdict",
    "decide",
    "decide_cylinder",
    "decide_torus_holomorphic",
    "decide_torus_topological",
    "make_marked_torus",
    "torus_scalar_witnesses",
    "search_torus_real_linear",
    "orbit_order",
]


class ConjugacyMode(Enum):
    HOLOMORPHIC = "holomorphic"
    TOPOLOGICAL = "topological"


def _tol(tol) -> Tolerance:
    if tol is None:
        return DEFAULT_TOLERANCE
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


def _cjson(v: ComplexValue) -> dict:
    return {"re": v.re, "im": v.im}


# ---- witnesses ----


@dataclass(frozen=True)
class IdentityWitness:
    def to_json_dict(self) -> dict:
        return {"type": "identity"}


@dataclass(frozen=True)
class CylinderScalar:
    """z -> ratio*z conjugates the markings; ratio = sign * mu2/mu1.

    The minus-sign case folds the inversion into the ratio: the scalar map
    with the negated ratio conjugates h1 directly to h2.
    """

    sign: int
    ratio: ComplexValue

    def to_json_dict(self) -> dict:
        return {"type": "cylinder_scalar", "sign": self.sign, "ratio": _cjson(self.ratio)}


@dataclass(frozen=True)
class CylinderRealLinear:
    """The R-linear map sending the basis (mu1, 2*pi*i) to (mu2, 2*pi*i)."""

    mu1: ComplexValue
    mu2: ComplexValue

    def to_json_dict(self) -> dict:
        return {
            "type": "cylinder_real_linear",
            "mu1": _cjson(self.mu1),
            "mu2": _cjson(self.mu2),
        }


@dataclass(frozen=True)
class TorusScalar:
    """z -> alpha*z with alpha*Gamma1 = Gamma2 and alpha*2pi*i = 2pi*i mod Gamma2."""

    alpha: ComplexValue

    def to_json_dict(self) -> dict:
        return {"type": "torus_scalar", "alpha": _cjson(self.alpha)}


@dataclass(frozen=True)
class TorusRealLinear:
    """Unimodular change of marking coordinates; rows act on (x, y) from the right."""

    matrix: "tuple[tuple[int, int], tuple[int, int]]"

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if a * d - b * c not in (1, -1):
            raise InvariantError(f"matrix {self.matrix!r} is not unimodular")

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def to_json_dict(self) -> dict:
        return {"type": "torus_real_linear", "matrix": [list(r) for r in self.matrix]}


# ---- verdicts ----


@dataclass(frozen=True)
class ConjugacyVerdict:
    status: str  # "conjugate" | "not_conjugate" | "unknown"
    mode: ConjugacyMode
    witness: object = None
    reason: "str | None" = None
    exact: bool = False
    search_bound: "int | None" = None

    @property
    def is_conjugate(self) -> bool:
        return self.status == "conjugate"

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "status": self.status,
            "witness": self.witness.to_json_dict() if self.witness else None,
            "reason": self.reason,
            "used_tolerance": not self.exact,
            "search_bound": self.search_bound,
        }


def _conjugate(mode, witness, exact, bound=None) -> ConjugacyVerdict:
    return ConjugacyVerdict("conjugate", mode, witness, None, exact, bound)


def _not_conjugate(mode, reason, exact) -> ConjugacyVerdict:
    return ConjugacyVerdict("not_conjugate", mode, None, reason, exact, None)


def _unknown(mode, bound, exact) -> ConjugacyVerdict:
    return ConjugacyVerdict(
        "unknown", mode, None, "search-bound-exhausted", exact, bound
    )


# ---- cylinders ----


def decide_cylinder(
    mu1, mu2, mode: ConjugacyMode, tol: Tolerance = DEFAULT_TOLERANCE
) -> ConjugacyVerdict:
    """Conjugacy of the flows on the cylinders with periods mu1, mu2."""
    mu1 = as_complex_value(mu1)
    mu2 = as_complex_value(mu2)
    tol = _tol(tol)
    if mu1.is_zero() or mu2.is_zero():
        raise DomainError("cylinder periods must be nonzero")
    exact = mu1.is_exact and mu2.is_exact
    tpi = ComplexValue.two_pi_i()
    rho1 = tpi / mu1
    rho2 = tpi / mu2
    for sign in (1, -1):
        if is_near_integer(rho2 - rho1 * sign, tol):
            witness = CylinderScalar(sign, mu2 / mu1 * sign)
            return _conjugate(mode, witness, exact)
    if mode is ConjugacyMode.HOLOMORPHIC:
        return _not_conjugate(mode, "no-integer-marking-relation", exact)
    re1 = mu1.real_part()
    re2 = mu2.real_part()
    if exact:
        both_real = (not re1.is_zero()) and (not re2.is_zero())
    else:
        both_real = abs(re1.re) > tol.eps and abs(re2.re) > tol.eps
    if both_real:
        return _conjugate(mode, CylinderRealLinear(mu1, mu2), exact)
    return _not_conjugate(mode, "purely-imaginary-period-mismatch", exact)


# ---- marked tori ----


class MarkedTorus:
    """A torus lattice plus the coordinates of 2*pi*i in its basis."""

    __slots__ = ("lattice", "x", "y")

    def __init__(self, lattice: Lattice, x: ComplexValue, y: ComplexValue):
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("MarkedTorus is immutable")

    def as_fractions(self) -> "tuple[Fraction, Fraction] | None":
        """(x, y) as exact rationals, or None when irrational or approximate."""
        fx = self.x.as_real_fraction()
        fy = self.y.as_real_fraction()
        if fx is None or fy is None:
            return None
        return (fx, fy)

    def coordinates(self) -> "tuple[float, float]":
        return (self.x.re, self.y.re)

    def __repr__(self) -> str:
        return f"MarkedTorus({self.lattice!r}, x={self.x.re}, y={self.y.re})"


def make_marked_torus(L: Lattice, tol: Tolerance = DEFAULT_TOLERANCE) -> MarkedTorus:
    """Solve 2*pi*i = x*mu + y*nu for real (x, y); exact on exact bases."""
    tol = _tol(tol)
    tpi = ComplexValue.two_pi_i()
    mu, nu = L.mu, L.nu
    x = (nu.conjugate() * tpi).imag_part() / (nu.conjugate() * mu).imag_part()
    y = (mu.conjugate() * tpi).imag_part() / (mu.conjugate() * nu).imag_part()
    residual = mu * x + nu * y - tpi
    if residual.is_exact:
        ok = residual.is_zero()
    else:
        ok = abs(residual) <= max(tol.eps, 1e-12 * max(abs(mu), abs(nu)))
    if not ok:  # pragma: no cover - the lattice invariant rules this out
        raise InvariantError("marking coordinates do not reproduce 2*pi*i")
    return MarkedTorus(L, x, y)


def orbit_order(x: Fraction, y: Fraction) -> int:
    """Order of the rational point (x, y) in the torus R^2/Z^2."""
    return math.lcm(Fraction(x).denominator, Fraction(y).denominator)


# ---- torus holomorphic decision ----


def _alpha_is_valid(alpha, L1: Lattice, L2: Lattice, tol: Tolerance) -> bool:
    # alpha*mu1 is a lattice point of L2 by construction; the other three
    # memberships pin down alpha*Gamma1 = Gamma2 in both directions.
    if lattice_member(alpha * L1.nu, L2, tol) is None:
        return False
    if lattice_member(L2.mu / alpha, L1, tol) is None:
        return False
    if lattice_member(L2.nu / alpha, L1, tol) is None:
        return False
    tpi = ComplexValue.two_pi_i()
    return lattice_member(alpha * tpi - tpi, L2, tol) is not None


def _scalar_candidates(L1: Lattice, L2: Lattice, tol: Tolerance):
    radius = math.sqrt(covolume(L2) / covolume(L1)) * abs(L1.mu)
    shell = enumerate_norm_shell(L2, radius, tol)
    mu1c = complex(L1.mu)
    # prefer the scaling closest to 1 so identical lattices yield alpha = 1
    return sorted(shell, key=lambda lam: (abs(complex(lam) - mu1c), lam.re, lam.im))


def decide_torus_holomorphic(
    L1: Lattice, L2: Lattice, tol: Tolerance = DEFAULT_TOLERANCE
) -> ConjugacyVerdict:
    """Search the covolume-pinned norm shell for a marking-preserving scaling."""
    tol = _tol(tol)
    exact = L1.is_exact and L2.is_exact
    for lam in _scalar_candidates(L1, L2, tol):
        alpha = lam / L1.mu
        if _alpha_is_valid(alpha, L1, L2, tol):
            return _conjugate(ConjugacyMode.HOLOMORPHIC, TorusScalar(alpha), exact)
    # exhaustion leans on the float shell radius, so it is never flagged exact
    return _not_conjugate(
        ConjugacyMode.HOLOMORPHIC, "no-scaling-preserves-marking", False
    )


def torus_scalar_witnesses(
    L1: Lattice, L2: Lattice, tol: Tolerance = DEFAULT_TOLERANCE
) -> "list[TorusScalar]":
    """Every valid scaling witness, in the decision's candidate order."""
    tol = _tol(tol)
    out = []
    for lam in _scalar_candidates(L1, L2, tol):
        alpha = lam / L1.mu
        if _alpha_is_valid(alpha, L1, L2, tol):
            out.append(TorusScalar(alpha))
    return out


# ---- torus topological decision ----


def _ext_gcd(a: int, b: int) -> "tuple[int, int, int]":
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _mat_mul(A, B):
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def _mat_inv_unimodular(M):
    (a, b), (c, d) = M
    det = a * d - b * c
    if det == 1:
        return ((d, -b), (-c, a))
    if det == -1:
        return ((-d, b), (c, -a))
    raise InvariantError(f"matrix {M!r} is not unimodular")  # pragma: no cover


def _canonicalizer(a: int, b: int, n: int):
    """C in SL(2,Z) with (a/n, b/n)*C = (1/n, 0) mod Z^2; needs gcd(a,b,n)=1."""
    g, s, t = _ext_gcd(a, b)
    if g == 0:
        # both coordinates integral: n must be 1 and anything canonicalizes
        return ((1, 0), (0, 1))
    R = ((s, -b // g), (t, a // g))
    one, w, _ = _ext_gcd(g % n, n)
    if one != 1:  # pragma: no cover - gcd(g, n) = 1 guarantees invertibility
        raise InvariantError("marking order is inconsistent")
    w %= n  # inverse of g mod n, taken in [1, n)
    _, z, v = _ext_gcd(w, n)
    M2 = ((w, n), (-v, z))  # det = w*z + n*v = 1 by the Bezout identity
    return _mat_mul(R, M2)


def _frac_part(f: Fraction) -> Fraction:
    return f - math.floor(f)


def _fast_path_rational(
    f1: "tuple[Fraction, Fraction]",
    f2: "tuple[Fraction, Fraction]",
    mode: ConjugacyMode,
) -> ConjugacyVerdict:
    x, y = f1
    p, q = f2
    n1 = orbit_order(x, y)
    n2 = orbit_order(p, q)
    if n1 != n2:
        return _not_conjugate(mode, "marking-orders-differ", True)
    n = n1
    if n == 1:
        return _conjugate(mode, TorusRealLinear(((1, 0), (0, 1))), True)
    a1 = int(_frac_part(x) * n) % n
    b1 = int(_frac_part(y) * n) % n
    a2 = int(_frac_part(p) * n) % n
    b2 = int(_frac_part(q) * n) % n
    C1 = _canonicalizer(a1, b1, n)
    C2 = _canonicalizer(a2, b2, n)
    M = _mat_mul(C1, _mat_inv_unimodular(C2))
    # verify the congruence in exact rationals before trusting the algebra
    u = x * M[0][0] + y * M[1][0] - p
    v = x * M[0][1] + y * M[1][1] - q
    if u.denominator != 1 or v.denominator != 1:  # pragma: no cover
        raise InvariantError("constructed matrix fails the marking congruence")
    return _conjugate(mode, TorusRealLinear(M), True)


def _make_congruence_test(m1: MarkedTorus, m2: MarkedTorus, tol: Tolerance):
    """Two callables test(a, c) for the first and second target coordinates."""
    f1 = m1.as_fractions()
    f2 = m2.as_fractions()
    if f1 is not None and f2 is not None:
        (x, y), (p, q) = f1, f2

        def first(a, c):
            return (x * a + y * c - p).denominator == 1

        def second(b, d):
            return (x * b + y * d - q).denominator == 1

        return first, second
    if m1.x.is_exact and m1.y.is_exact and m2.x.is_exact and m2.y.is_exact:
        x, y = m1.x, m1.y
        p, q = m2.x, m2.y

        def first(a, c):
            return (x * a + y * c - p).field.is_rational_integer()

        def second(b, d):
            return (x * b + y * d - q).field.is_rational_integer()

        return first, second
    x, y = m1.x.re, m1.y.re
    p, q = m2.x.re, m2.y.re
    eps = tol.eps

    def first(a, c):
        w = x * a + y * c - p
        return abs(w - round(w)) <= eps

    def second(b, d):
        w = x * b + y * d - q
        return abs(w - round(w)) <= eps

    return first, second


def search_torus_real_linear(
    L1: Lattice,
    L2: Lattice,
    tol: Tolerance = DEFAULT_TOLERANCE,
    bound: int = 50,
) -> ConjugacyVerdict:
    """Bounded exhaustive search for a unimodular marking congruence.

    Scans every M in GL(2,Z) with entries bounded by `bound` and returns the
    first match in (max-entry, lexicographic) order; exhaustion is Unknown.
    Complete up to the bound: for each admissible first column the det
    condition confines the second column to one arithmetic progression.
    """
    tol = _tol(tol)
    if bound < 1:
        raise UsageError(f"search bound must be >= 1, got {bound!r}")
    mode = ConjugacyMode.TOPOLOGICAL
    m1 = make_marked_torus(L1, tol)
    m2 = make_marked_torus(L2, tol)
    exact = m1.x.is_exact and m1.y.is_exact and m2.x.is_exact and m2.y.is_exact
    first, second = _make_congruence_test(m1, m2, tol)
    matches = []
    for a in range(-bound, bound + 1):
        for c in range(-bound, bound + 1):
            g, s, t = _ext_gcd(a, c)
            if g != 1:
                continue  # det +-1 forces a primitive first column
            if not first(a, c):
                continue
            for det in (1, -1):
                # particular solution of a*d - c*b = det
                d0, b0 = s * det, -t * det
                # family: (b, d) = (b0 + a*k, d0 + c*k)
                ks = set()
                if a != 0:
                    for edge in ((-bound - b0) / a, (bound - b0) / a):
                        ks.add(edge)
                if c != 0:
                    for edge in ((-bound - d0) / c, (bound - d0) / c):
                        ks.add(edge)
                if not ks:
                    continue  # pragma: no cover - (a, c) = (0, 0) is not primitive
                k_lo = math.ceil(min(ks) - 1e-12)
                k_hi = math.floor(max(ks) + 1e-12)
                for k in range(k_lo, k_hi + 1):
                    b = b0 + a * k
                    d = d0 + c * k
                    if abs(b) > bound or abs(d) > bound:
                        continue
                    if second(b, d):
                        key = (max(abs(a), abs(b), abs(c), abs(d)), a, b, c, d)
                        matches.append((key, ((a, b), (c, d))))
    if not matches:
        return _unknown(mode, bound, exact)
    _, best = min(matches, key=lambda item: item[0])
    return _conjugate(mode, TorusRealLinear(best), exact, bound)


def decide_torus_topological(
    L1: Lattice,
    L2: Lattice,
    tol: Tolerance = DEFAULT_TOLERANCE,
    bound: int = 50,
) -> ConjugacyVerdict:
    """Rational markings are classified by order; otherwise bounded search."""
    tol = _tol(tol)
    m1 = make_marked_torus(L1, tol)
    m2 = make_marked_torus(L2, tol)
    f1 = m1.as_fractions()
    f2 = m2.as_fractions()
    if f1 is not None and f2 is not None:
        return _fast_path_rational(f1, f2, ConjugacyMode.TOPOLOGICAL)
    if (f1 is None) != (f2 is None):
        # One marking is exactly rational.  If the other is exact too, its
        # irrationality is proven, so the orders differ (finite vs infinite)
        # and no orbit contains both.  An approximate marking proves nothing.
        other = m2 if f1 is not None else m1
        if other.x.is_exact and other.y.is_exact:
            return _not_conjugate(
                ConjugacyMode.TOPOLOGICAL, "marking-orders-differ", True
            )
    return search_torus_real_linear(L1, L2, tol, bound)


# ---- dispatcher ----


def decide(
    s1: AffineSurface,
    s2: AffineSurface,
    mode: ConjugacyMode = ConjugacyMode.HOLOMORPHIC,
    tol: Tolerance = DEFAULT_TOLERANCE,
    bound: int = 50,
) -> ConjugacyVerdict:
    """Top-level dispatch on surface kinds."""
    tol = _tol(tol)
    if not isinstance(mode, ConjugacyMode):
        mode = ConjugacyMode(mode)
    if s1.kind != s2.kind:
        return _not_conjugate(mode, "underlying-spaces-not-homeomorphic", True)
    if s1.kind == "plane":
        return _conjugate(mode, IdentityWitness(), True)
    if s1.kind == "cylinder":
        return decide_cylinder(s1.translation_scalar, s2.translation_scalar, mode, tol)
    if mode is ConjugacyMode.HOLOMORPHIC:
        return decide_torus_holomorphic(s1.lattice, s2.lattice, tol)
    holo = decide_torus_holomorphic(s1.lattice, s2.lattice, tol)
    if holo.is_conjugate:
        return ConjugacyVerdict(
            "conjugate", mode, holo.witness, None, holo.exact, None
        )
    return decide_torus_topological(s1.lattice, s2.lattice, tol, bound)

"""Quotient surfaces of the exponential-affine plane.

A surface is the plane modulo a discrete translation group: trivial (the
plane itself), rank 1 (a cylinder, generated by one nonzero translation), or
rank 2 (a torus, generated by a lattice).  Points and tangent vectors carry
their surface; representatives are arbitrary and can be canonicalised to the
minimum-norm point of their orbit.

Every surface is marked by the images of 0 and 2*pi*i.  The second marked
point is what conjugacy decisions must preserve, so it is kept exact.
"""

from __future__ import annotations

import math
from typing import Optional

from .arithmetic import (
    ComplexValue,
    DEFAULT_TOLERANCE,
    Lattice,
    Tolerance,
    as_complex_value,
    lattice_member,
    parse_complex,
    round_half_even,
)
from .errors import InvariantError, ParseError, UsageError

__all__ = [
    "DiscreteGroup",
    "AffineSurface",
    "SurfacePoint",
    "TangentVector",
    "points_equal",
    "parse_surface",
]


def _tol(tol) -> Tolerance:
    if tol is None:
        return DEFAULT_TOLERANCE
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


def _select_minimal(candidates: "list[complex]") -> int:
    """Index of the minimum-norm candidate.

    Near-ties within a relative 1e-9 band are broken by the lexicographically
    smallest (Re, Im), compared on a snapped grid so one-ulp noise cannot flip
    the choice.
    """
    norms = [abs(w) for w in candidates]
    least = min(norms)
    band = 1e-9 * max(1.0, least)
    step = band if band > 0 else 1e-9
    ties = [i for i, n in enumerate(norms) if n <= least + band]
    if len(ties) == 1:
        return ties[0]

    def key(i: int):
        w = candidates[i]
        return (round(w.real / step), round(w.imag / step), w.real, w.imag)

    return min(ties, key=key)


class DiscreteGroup:
    """Discrete group of translations acting on the plane (rank 0, 1 or 2)."""

    __slots__ = ("rank", "generators", "_lattice", "_mu_c", "_mu_inv_sq", "_red")

    def __init__(self, rank: int, generators, lattice: "Lattice | None" = None):
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "generators", tuple(generators))
        object.__setattr__(self, "_lattice", lattice)
        if rank == 1:
            mu_c = complex(self.generators[0])
            object.__setattr__(self, "_mu_c", mu_c)
            object.__setattr__(self, "_mu_inv_sq", 1.0 / abs(mu_c) ** 2)
        else:
            object.__setattr__(self, "_mu_c", None)
            object.__setattr__(self, "_mu_inv_sq", None)
        if rank == 2:
            red = lattice.reduced()
            solver = red.coordinate_solver()
            object.__setattr__(
                self, "_red", (complex(red.mu), complex(red.nu), solver, red)
            )
        else:
            object.__setattr__(self, "_red", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("DiscreteGroup is immutable")

    @classmethod
    def trivial(cls) -> "DiscreteGroup":
        return cls(0, ())

    @classmethod
    def rank1(cls, mu) -> "DiscreteGroup":
        mu = as_complex_value(mu)
        if mu.is_zero():
            raise InvariantError("cylinder translation must be nonzero")
        return cls(1, (mu,))

    @classmethod
    def rank2(cls, mu, nu) -> "DiscreteGroup":
        lat = Lattice(mu, nu)
        return cls(2, (lat.mu, lat.nu), lat)

    @classmethod
    def from_lattice(cls, lat: Lattice) -> "DiscreteGroup":
        return cls(2, (lat.mu, lat.nu), lat)

    @property
    def lattice(self) -> "Lattice | None":
        return self._lattice

    @property
    def is_exact(self) -> bool:
        return all(g.is_exact for g in self.generators)

    # -- membership --

    def contains(self, z, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
        z = as_complex_value(z)
        tol = _tol(tol)
        if self.rank == 0:
            if z.is_exact:
                return z.is_zero()
            return abs(z) <= tol.eps
        if z.is_exact and self.is_exact:
            return self.coefficients_of(z) is not None
        return self.distance(complex(z)) <= tol.eps

    def coefficients_of(
        self, z, tol: Tolerance = DEFAULT_TOLERANCE
    ) -> "tuple[int, ...] | None":
        """Integer coordinates of z in the generators, or None."""
        z = as_complex_value(z)
        tol = _tol(tol)
        if self.rank == 0:
            return () if self.contains(z, tol) else None
        if self.rank == 1:
            mu = self.generators[0]
            if z.is_exact and mu.is_exact:
                q = z / mu
                if q.field.is_rational_integer():
                    return (int(q.field.constant_value().re),)
                return None
            zc = complex(z)
            m = round_half_even(
                (zc * self._mu_c.conjugate()).real * self._mu_inv_sq
            )
            if abs(zc - m * self._mu_c) <= tol.eps:
                return (m,)
            return None
        return lattice_member(z, self._lattice, tol)

    # -- canonical representatives --

    def reduce(self, z, tol: Tolerance = DEFAULT_TOLERANCE) -> ComplexValue:
        """Minimum-norm representative of z modulo the group.

        Exact inputs with exact generators stay exact: the integer offsets are
        located in floats, the subtraction happens on the exact track.
        """
        z = as_complex_value(z)
        if self.rank == 0:
            return z
        zc = complex(z)
        if self.rank == 1:
            mu = self.generators[0]
            t = (zc * self._mu_c.conjugate()).real * self._mu_inv_sq
            m0 = round_half_even(t)
            shifts = [m0 - 1, m0, m0 + 1]
            cands = [zc - m * self._mu_c for m in shifts]
            pick = shifts[_select_minimal(cands)]
            return z - mu * pick
        mu_r, nu_r, solver, red = self._red
        i00, i01, i10, i11 = solver
        x = i00 * zc.real + i01 * zc.imag
        y = i10 * zc.real + i11 * zc.imag
        a0 = round_half_even(x)
        b0 = round_half_even(y)
        shifts = []
        cands = []
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                a, b = a0 + da, b0 + db
                shifts.append((a, b))
                cands.append(zc - a * mu_r - b * nu_r)
        a, b = shifts[_select_minimal(cands)]
        return z - red.mu * a - red.nu * b

    def reduce_complex(self, zc: complex) -> complex:
        """Float-only fast path of :meth:`reduce`, without the tie policy."""
        if self.rank == 0:
            return zc
        if self.rank == 1:
            t = (zc * self._mu_c.conjugate()).real * self._mu_inv_sq
            best = zc - round_half_even(t) * self._mu_c
            for m in (-1, 1):
                w = best - m * self._mu_c
                if abs(w) < abs(best):
                    best = w
            return best
        mu_r, nu_r, solver, _ = self._red
        i00, i01, i10, i11 = solver
        x = i00 * zc.real + i01 * zc.imag
        y = i10 * zc.real + i11 * zc.imag
        a0 = round_half_even(x)
        b0 = round_half_even(y)
        best = None
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                w = zc - (a0 + da) * mu_r - (b0 + db) * nu_r
                if best is None or abs(w) < abs(best):
                    best = w
        return best

    def distance(self, zc: complex) -> float:
        """Distance from a float point to the nearest group element."""
        return abs(self.reduce_complex(zc))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteGroup):
            return NotImplemented
        return self.rank == other.rank and self.generators == other.generators

    def __hash__(self):
        return hash((self.rank, self.generators))

    def __repr__(self) -> str:
        return f"DiscreteGroup(rank={self.rank}, generators={self.generators!r})"


class AffineSurface:
    """The plane modulo a discrete translation group, marked at 0 and 2*pi*i."""

    __slots__ = ("group",)

    _KINDS = {0: "plane", 1: "cylinder", 2: "torus"}

    def __init__(self, group: DiscreteGroup):
        object.__setattr__(self, "group", group)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("AffineSurface is immutable")

    @classmethod
    def plane(cls) -> "AffineSurface":
        return cls(DiscreteGroup.trivial())

    @classmethod
    def cylinder(cls, mu) -> "AffineSurface":
        return cls(DiscreteGroup.rank1(mu))

    @classmethod
    def torus(cls, mu, nu) -> "AffineSurface":
        return cls(DiscreteGroup.rank2(mu, nu))

    @property
    def kind(self) -> str:
        return self._KINDS[self.group.rank]

    @property
    def translation_scalar(self) -> ComplexValue:
        """The generator of a cylinder's group."""
        if self.group.rank != 1:
            raise UsageError(f"a {self.kind} has no single translation scalar")
        return self.group.generators[0]

    @property
    def lattice(self) -> Lattice:
        if self.group.rank != 2:
            raise UsageError(f"a {self.kind} has no lattice")
        return self.group.lattice

    def point(self, z) -> "SurfacePoint":
        return SurfacePoint(self, as_complex_value(z))

    def tangent(self, z, u) -> "TangentVector":
        return TangentVector(self, as_complex_value(z), as_complex_value(u))

    def marked_points(self) -> "tuple[SurfacePoint, SurfacePoint]":
        return (self.point(ComplexValue(0)), self.point(ComplexValue.two_pi_i()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineSurface):
            return NotImplemented
        return self.group == other.group

    def __hash__(self):
        return hash(self.group)

    def __repr__(self) -> str:
        gens = ", ".join(repr(complex(g)) for g in self.group.generators)
        return f"AffineSurface({self.kind}{': ' if gens else ''}{gens})"


class SurfacePoint:
    """A point of a surface, stored through one representative in the plane."""

    __slots__ = ("surface", "z")

    def __init__(self, surface: AffineSurface, z: ComplexValue):
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "z", as_complex_value(z))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("SurfacePoint is immutable")

    def canonical_rep(self, tol: Tolerance = DEFAULT_TOLERANCE) -> ComplexValue:
        return self.surface.group.reduce(self.z, _tol(tol))

    def canonical(self, tol: Tolerance = DEFAULT_TOLERANCE) -> "SurfacePoint":
        return SurfacePoint(self.surface, self.canonical_rep(tol))

    def equals(self, other: "SurfacePoint", tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
        return points_equal(self, other, tol)

    def __repr__(self) -> str:
        return f"SurfacePoint({complex(self.z)!r} on {self.surface!r})"


class TangentVector:
    """A point together with a nonzero direction."""

    __slots__ = ("surface", "z", "u")

    def __init__(self, surface: AffineSurface, z: ComplexValue, u: ComplexValue):
        z = as_complex_value(z)
        u = as_complex_value(u)
        if u.is_zero():
            raise InvariantError("tangent direction must be nonzero")
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "u", u)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("TangentVector is immutable")

    @property
    def base_point(self) -> SurfacePoint:
        return SurfacePoint(self.surface, self.z)

    @property
    def is_exact(self) -> bool:
        return self.z.is_exact and self.u.is_exact

    def __repr__(self) -> str:
        return (
            f"TangentVector(z={complex(self.z)!r}, u={complex(self.u)!r} "
            f"on {self.surface!r})"
        )


def points_equal(
    p: SurfacePoint, q: SurfacePoint, tol: Tolerance = DEFAULT_TOLERANCE
) -> bool:
    """Whether two points of the same surface coincide.

    Exact on the exact track (ignoring eps), within eps otherwise.  Points of
    different surfaces are not comparable.
    """
    if p.surface != q.surface:
        raise UsageError("points live on different surfaces")
    return p.surface.group.contains(p.z - q.z, _tol(tol))


def parse_surface(text: str) -> AffineSurface:
    """Parse ``plane``, ``cylinder:<literal>`` or ``torus:<literal>,<literal>``.

    A torus with one exact and one approximate generator is rejected: such a
    basis has no consistent track and would silently degrade every decision.
    """
    body = text.strip()
    if body == "plane":
        return AffineSurface.plane()
    if body.startswith("cylinder:"):
        mu = parse_complex(body[len("cylinder:"):])
        if mu.is_zero():
            raise ParseError("cylinder translation must be nonzero")
        return AffineSurface.cylinder(mu)
    if body.startswith("torus:"):
        parts = body[len("torus:"):].split(",")
        if len(parts) != 2:
            raise ParseError(
                f"torus needs exactly two comma-separated generators, got {text!r}"
            )
        mu = parse_complex(parts[0])
        nu = parse_complex(parts[1])
        if mu.is_exact != nu.is_exact:
            raise ParseError(
                "torus generators mix exact and approximate literals; "
                "write both the same way"
            )
        try:
            return AffineSurface.torus(mu, nu)
        except InvariantError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(
        f"unknown surface {text!r}; expected plane, cylinder:<c> or torus:<c>,<c>"
    )

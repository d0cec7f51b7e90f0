"""Automorphisms of quotient surfaces: translations and the inversion.

Every automorphism used here lifts to z -> (+/-)z + c on the plane.  The
sign and the shift determine it; two shifts describe the same automorphism
of a quotient exactly when they differ by a group element.  The derivative
action on tangent vectors keeps the direction for translations and negates
it for the inversion.
"""

from __future__ import annotations

from .arithmetic import ComplexValue, DEFAULT_TOLERANCE, Tolerance, as_complex_value
from .errors import UsageError
from .surfaces import AffineSurface, SurfacePoint, TangentVector

__all__ = [
    "SurfaceAutomorphism",
    "marking_automorphism",
    "conjugates_h_to_inverse",
]


def _tol(tol) -> Tolerance:
    if tol is None:
        return DEFAULT_TOLERANCE
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


class SurfaceAutomorphism:
    """An automorphism z -> (-z if negate else z) + shift of a quotient."""

    __slots__ = ("surface", "negate", "shift")

    def __init__(self, surface: AffineSurface, negate: bool, shift):
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "negate", bool(negate))
        object.__setattr__(self, "shift", as_complex_value(shift))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("SurfaceAutomorphism is immutable")

    @classmethod
    def identity(cls, surface: AffineSurface) -> "SurfaceAutomorphism":
        return cls(surface, False, ComplexValue(0))

    @classmethod
    def translation(cls, surface: AffineSurface, c) -> "SurfaceAutomorphism":
        return cls(surface, False, c)

    @classmethod
    def inversion(cls, surface: AffineSurface) -> "SurfaceAutomorphism":
        return cls(surface, True, ComplexValue(0))

    @property
    def is_translation(self) -> bool:
        return not self.negate

    # -- action --

    def apply_plane(self, z) -> ComplexValue:
        """The lifted action on a raw representative, without reduction."""
        z = as_complex_value(z)
        return (-z if self.negate else z) + self.shift

    def apply(self, p: SurfacePoint, tol: Tolerance = DEFAULT_TOLERANCE) -> SurfacePoint:
        if p.surface != self.surface:
            raise UsageError("point lives on a different surface")
        return SurfacePoint(
            self.surface, self.surface.group.reduce(self.apply_plane(p.z), _tol(tol))
        )

    def apply_tangent(
        self, v: TangentVector, tol: Tolerance = DEFAULT_TOLERANCE
    ) -> TangentVector:
        if v.surface != self.surface:
            raise UsageError("tangent vector lives on a different surface")
        u = -v.u if self.negate else v.u
        z = self.surface.group.reduce(self.apply_plane(v.z), _tol(tol))
        return TangentVector(self.surface, z, u)

    # -- group structure --

    def compose(self, other: "SurfaceAutomorphism") -> "SurfaceAutomorphism":
        """self after other."""
        if other.surface != self.surface:
            raise UsageError("cannot compose automorphisms of different surfaces")
        shift = (-other.shift if self.negate else other.shift) + self.shift
        return SurfaceAutomorphism(self.surface, self.negate != other.negate, shift)

    def inverse(self) -> "SurfaceAutomorphism":
        # an inversion-type map is an involution; a translation inverts its shift
        if self.negate:
            return self
        return SurfaceAutomorphism(self.surface, False, -self.shift)

    def power(self, k: int) -> "SurfaceAutomorphism":
        if self.negate:
            raise UsageError("powers are only defined for translations")
        return SurfaceAutomorphism(self.surface, False, self.shift * k)

    def is_identity(self, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
        return not self.negate and self.surface.group.contains(self.shift, _tol(tol))

    def equals(
        self, other: "SurfaceAutomorphism", tol: Tolerance = DEFAULT_TOLERANCE
    ) -> bool:
        if other.surface != self.surface:
            raise UsageError("automorphisms of different surfaces are not comparable")
        if self.negate != other.negate:
            return False
        return self.surface.group.contains(self.shift - other.shift, _tol(tol))

    def __repr__(self) -> str:
        head = "-z" if self.negate else "z"
        return f"SurfaceAutomorphism({head} + {complex(self.shift)!r} on {self.surface!r})"


def marking_automorphism(s: AffineSurface) -> SurfaceAutomorphism:
    """Translation by 2*pi*i: the invariant every conjugacy must transport."""
    return SurfaceAutomorphism.translation(s, ComplexValue.two_pi_i())


def conjugates_h_to_inverse(s: AffineSurface) -> SurfaceAutomorphism:
    """The inversion z -> -z; it carries the marking automorphism to its inverse."""
    return SurfaceAutomorphism.inversion(s)

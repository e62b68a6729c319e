"""Level, weight and central-charge arithmetic for admissible sl2 levels."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .exact import Q, RationalLike


class DomainError(ValueError):
    """A mathematical precondition is violated (bad level, range, ...)."""


def virasoro_c(t: RationalLike) -> Fraction:
    """c(t) = 13 - 6t - 6/t."""
    t = Q(t)
    if t == 0:
        raise DomainError("t must be nonzero")
    return 13 - 6 * t - 6 / t


def virasoro_h(r: int, s: int, t: RationalLike) -> Fraction:
    """h_{r,s}(t) = (s^2-1)t/4 - (rs-1)/2 + (r^2-1)/(4t)."""
    t = Q(t)
    if t == 0:
        raise DomainError("t must be nonzero")
    if r < 1 or s < 1:
        raise DomainError("r and s must be positive")
    return Fraction(s * s - 1) * t / 4 - Fraction(r * s - 1, 2) + Fraction(r * r - 1) / (4 * t)


@dataclass(frozen=True)
class AdmissibleLevel:
    u: int
    v: int

    def __post_init__(self):
        if not (isinstance(self.u, int) and isinstance(self.v, int)):
            raise DomainError("u and v must be integers")
        if self.u < 2 or self.v < 1:
            raise DomainError(f"need u >= 2 and v >= 1, got ({self.u},{self.v})")
        if math.gcd(self.u, self.v) != 1:
            raise DomainError(f"u={self.u} and v={self.v} are not coprime")

    @property
    def t(self) -> Fraction:
        return Fraction(self.u, self.v)

    @property
    def k(self) -> Fraction:
        return self.t - 2

    @property
    def c_vir(self) -> Fraction:
        return virasoro_c(self.t)

    @property
    def c_sug(self) -> Fraction:
        return 3 * self.k / (self.k + 2)

    @property
    def integral(self) -> bool:
        """v = 1: an integrable level; most constructions here need v >= 2."""
        return self.v == 1

    def require_fractional(self) -> None:
        if self.v < 2:
            raise DomainError(f"level ({self.u},{self.v}) is integral; v >= 2 required")

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.u, self.v)

    def __str__(self) -> str:
        return f"({self.u},{self.v})"


def level_from_uv(u: int, v: int) -> AdmissibleLevel:
    lvl = AdmissibleLevel(u, v)
    if lvl.integral:
        warnings.warn(f"level {lvl} is integral (v = 1)", stacklevel=2)
    return lvl


def level_from_k(k: RationalLike) -> AdmissibleLevel:
    t = Q(k) + 2
    return AdmissibleLevel(t.numerator, t.denominator)


def affine_lambda(r: int, s: int, lvl: AdmissibleLevel) -> Fraction:
    """lambda_{r,s} = r - 1 - t s (no range check)."""
    return r - 1 - lvl.t * s


def affine_weights(r: int, s: int, lvl: AdmissibleLevel) -> Tuple[Fraction, Fraction]:
    """(lambda_{r,s}, Delta_{r,s}) for 1 <= r <= u-1, 1 <= s <= v-1."""
    u, v = lvl.u, lvl.v
    if not (1 <= r <= u - 1 and 1 <= s <= v - 1):
        raise DomainError(f"(r,s)=({r},{s}) outside 1..{u - 1} x 1..{v - 1}")
    lam = affine_lambda(r, s, lvl)
    delta = Fraction((v * r - u * s) ** 2 - v * v, 4 * u * v)
    return lam, delta


@dataclass(frozen=True)
class DualPair:
    """Levels related by (ell + 2)(k_w + 1) = 1."""
    ell: Fraction
    k_w: Fraction

    @property
    def c_n2(self) -> Fraction:
        return 3 * self.ell / (self.ell + 2)

    @property
    def ell_level(self) -> AdmissibleLevel:
        return level_from_k(self.ell)


def dual_level(x: RationalLike) -> Fraction:
    """The partner of x under (x + 2)(y + 1) = 1."""
    x = Q(x)
    if x == -2:
        raise DomainError("critical level -2 has no dual")
    return 1 / (x + 2) - 1


def dual_levels(lvl) -> DualPair:
    """Dual pair with ell the given level (AdmissibleLevel or rational)."""
    ell = lvl.k if isinstance(lvl, AdmissibleLevel) else Q(lvl)
    return DualPair(ell, dual_level(ell))


def n2_central_charge(ell: RationalLike) -> Fraction:
    ell = Q(ell)
    if ell == -2:
        raise DomainError("critical level")
    return 3 * ell / (ell + 2)


@dataclass(frozen=True)
class CosetTriple:
    base: AdmissibleLevel
    shifted: AdmissibleLevel      # level k + 1, pair (u+v, v)
    minimal: AdmissibleLevel      # minimal-model pair (u+v, u) for k'

    @property
    def k_prime(self) -> Fraction:
        k = self.base.k
        return (k + 3) / (k + 2) - 2


def coset_triple(lvl: AdmissibleLevel) -> CosetTriple:
    u, v = lvl.u, lvl.v
    return CosetTriple(lvl, AdmissibleLevel(u + v, v), AdmissibleLevel(u + v, u))


def ribbon_known(lvl: AdmissibleLevel) -> bool:
    """v in {2,3} and u = -1 mod v."""
    return lvl.v in (2, 3) and (lvl.u + 1) % lvl.v == 0

"""
Weight modules of the simple affine sl2 vertex algebra at admissible level:
labels, spectral flow, identifications, blocks, Loewy data and characters.

Labels print as ``s<flow>(<body>)@(u,v)`` with bodies ``L[r]``, ``D+[r,s]``,
``D-[r,s]``, ``E[lam;r,s]``, ``E+[r,s]``, ``E-[r,s]``, ``P[r,s]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .exact import (PuiseuxSeries, Q, RationalLike, SeriesError, TwoVarCharacter, eta_inverse, fmt)
from .levels import AdmissibleLevel, DomainError, affine_lambda
from .virasoro import MinimalLabel, minimal_character

KINDS = ("L", "D+", "D-", "E", "E+", "E-", "P")
SIMPLE_KINDS = ("L", "D+", "D-", "E")


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * (x.numerator // (2 * x.denominator))


@dataclass(frozen=True)
class ModuleLabel:
    kind: str
    r: int
    s: int
    flow: int
    level: AdmissibleLevel
    lam: Optional[Fraction] = None

    def __post_init__(self):
        u, v = self.level.u, self.level.v
        self.level.require_fractional()
        if self.kind not in KINDS:
            raise DomainError(f"unknown module kind {self.kind!r}")
        if not isinstance(self.flow, int):
            raise DomainError("spectral flow must be an integer")
        if not 1 <= self.r <= u - 1:
            raise DomainError(f"r={self.r} outside 1..{u - 1}")
        if self.kind == "L":
            if self.s != 0:
                raise DomainError("L-kind labels carry no s index")
        elif not 1 <= self.s <= v - 1:
            raise DomainError(f"s={self.s} outside 1..{v - 1}")
        if self.kind == "E":
            if self.lam is None:
                raise DomainError("E-kind labels need lambda")
            lam = _mod2(Q(self.lam))
            object.__setattr__(self, "lam", lam)
            bad = {_mod2(affine_lambda(self.r, self.s, self.level)),
                   _mod2(affine_lambda(u - self.r, v - self.s, self.level))}
            if lam in bad:
                raise DomainError(f"lambda={fmt(lam)} is excluded for E[{self.r},{self.s}] at {self.level}")
        elif self.lam is not None:
            raise DomainError(f"{self.kind}-kind labels carry no lambda")

    @property
    def is_simple(self) -> bool:
        return self.kind in SIMPLE_KINDS

    def body(self) -> str:
        if self.kind == "L":
            return f"L[{self.r}]"
        if self.kind == "E":
            return f"E[{fmt(self.lam)};{self.r},{self.s}]"
        return f"{self.kind}[{self.r},{self.s}]"

    def __str__(self) -> str:
        return f"s{self.flow}({self.body()})@({self.level.u},{self.level.v})"

    def with_flow(self, flow: int) -> "ModuleLabel":
        return replace(self, flow=flow)


def L(r: int, lvl: AdmissibleLevel, flow: int = 0) -> ModuleLabel:
    return ModuleLabel("L", r, 0, flow, lvl)


def D(sign: str, r: int, s: int, lvl: AdmissibleLevel, flow: int = 0) -> ModuleLabel:
    return ModuleLabel("D" + sign, r, s, flow, lvl)


def E(lam: RationalLike, r: int, s: int, lvl: AdmissibleLevel, flow: int = 0) -> ModuleLabel:
    return ModuleLabel("E", r, s, flow, lvl, Q(lam))


def P(r: int, s: int, lvl: AdmissibleLevel, flow: int = 0) -> ModuleLabel:
    return ModuleLabel("P", r, s, flow, lvl)


_LABEL_RE = re.compile(r"^\s*(?:s(-?\d+)\((.*)\)|(.*?))\s*@\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_BODY_RE = re.compile(r"^(L|D\+|D-|E\+|E-|E|P)\[(.*)\]$")


def parse_label(text: str) -> ModuleLabel:
    """Inverse of ``str(label)``; a bare body means flow 0."""
    m = _LABEL_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse module label {text!r}")
    flow = int(m.group(1)) if m.group(1) is not None else 0
    body = (m.group(2) if m.group(1) is not None else m.group(3)).strip()
    lvl = AdmissibleLevel(int(m.group(4)), int(m.group(5)))
    b = _BODY_RE.match(body.replace(" ", ""))
    if not b:
        raise ValueError(f"cannot parse module body {body!r}")
    kind, args = b.group(1), b.group(2)
    try:
        if kind == "E":
            lam, rs = args.split(";")
            r, s = (int(x) for x in rs.split(","))
            return ModuleLabel(kind, r, s, flow, lvl, Q(lam))
        if kind == "L":
            return ModuleLabel(kind, int(args), 0, flow, lvl)
        r, s = (int(x) for x in args.split(","))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise ValueError(f"malformed indices in {body!r}") from None
    return ModuleLabel(kind, r, s, flow, lvl)


# ---------------------------------------------------------------------------
# identifications

def normal_form(x: ModuleLabel) -> ModuleLabel:
    """Canonical representative among isomorphic labels.

    Canonical simples: L[r]; D+[r,s] with s <= v-2; E with (s,r) the
    lexicographically smaller of (s,r), (v-s,u-r).  Non-simple kinds are
    returned unchanged.
    """
    u, v = x.level.u, x.level.v
    if x.kind == "D+" and x.s == v - 1:
        return L(u - x.r, x.level, x.flow + 1)
    if x.kind == "D-":
        if x.s == v - 1:
            return L(u - x.r, x.level, x.flow - 1)
        return D("+", u - x.r, v - 1 - x.s, x.level, x.flow - 1)
    if x.kind == "E":
        if (v - x.s, u - x.r) < (x.s, x.r):
            return E(x.lam, u - x.r, v - x.s, x.level, x.flow)
    return x


def as_dplus(x: ModuleLabel) -> Tuple[int, int, int]:
    """Write an L/D simple as D+[rho, sigma]@f with 1 <= sigma <= v-1."""
    x = normal_form(x)
    u, v = x.level.u, x.level.v
    if x.kind == "L":
        return (u - x.r, v - 1, x.flow - 1)
    if x.kind == "D+":
        return (x.r, x.s, x.flow)
    raise DomainError(f"{x} is not of L/D kind")


def spectral_flow(x: ModuleLabel, n: int) -> ModuleLabel:
    return normal_form(x.with_flow(x.flow + n))


def enumerate_simples(lvl: AdmissibleLevel, flows: Iterable[int],
                      lam_samples: Sequence[RationalLike] = ()) -> List[ModuleLabel]:
    u, v = lvl.u, lvl.v
    out: List[ModuleLabel] = []
    seen = set()

    def push(lab):
        lab = normal_form(lab)
        if lab not in seen:
            seen.add(lab)
            out.append(lab)

    for f in flows:
        for r in range(1, u):
            push(L(r, lvl, f))
        for r in range(1, u):
            for s in range(1, v - 1):
                push(D("+", r, s, lvl, f))
        for lam in lam_samples:
            for s in range(1, v):
                for r in range(1, u):
                    try:
                        push(E(lam, r, s, lvl, f))
                    except DomainError:
                        pass
    return out


# ---------------------------------------------------------------------------
# blocks

@dataclass(frozen=True)
class BlockId:
    kind: str                      # "C" or "E"
    r: int
    n: int                         # C: 0..v-1; E: the flow
    s: int = 0
    lam: Optional[Fraction] = None

    def __str__(self) -> str:
        if self.kind == "C":
            return f"C({self.r},{self.n})"
        return f"E^{self.n}({self.r},{self.s};{fmt(self.lam)})"


def block_member(lvl: AdmissibleLevel, r: int, n: int, M: int) -> ModuleLabel:
    """The simple L^{r,n}_M of the block C(r,n) (normal form).

    With M = -l(v-1) - m, 0 <= m <= v-2, it is
    sigma^{-n-lv-m}(D+_{phi, v-1-m}) where phi = r for even l and u-r for odd l.
    """
    u, v = lvl.u, lvl.v
    if not (1 <= r <= u - 1 and 0 <= n <= v - 1):
        raise DomainError(f"no block C({r},{n}) at {lvl}")
    ell, m = divmod(-M, v - 1)
    phi = r if ell % 2 == 0 else u - r
    return normal_form(D("+", phi, v - 1 - m, lvl, -n - ell * v - m))


def block_of(x: ModuleLabel) -> Tuple[BlockId, Optional[int]]:
    """Block of a simple label and, for C-blocks, its position M."""
    if not x.is_simple:
        raise DomainError("block_of expects a simple label")
    x = normal_form(x)
    if x.kind == "E":
        return BlockId("E", x.r, x.flow, x.s, x.lam), None
    u, v = x.level.u, x.level.v
    rho, sigma, f = as_dplus(x)
    m = v - 1 - sigma
    ell, n = divmod(-f - m, v)
    r = rho if ell % 2 == 0 else u - rho
    M = -ell * (v - 1) - m
    return BlockId("C", r, n), M


# ---------------------------------------------------------------------------
# structure

@dataclass
class StructureData:
    label: ModuleLabel
    sub: Optional[ModuleLabel] = None          # E+/E-: simple submodule
    quotient: Optional[ModuleLabel] = None     # E+/E-: simple quotient
    top: Optional[ModuleLabel] = None          # P: head
    middle: Tuple[ModuleLabel, ...] = ()       # P: middle layer
    socle: Optional[ModuleLabel] = None
    sequence: Tuple[ModuleLabel, ModuleLabel] = ()   # P: (submodule, quotient) of the defining sequence

    @property
    def composition_factors(self) -> List[ModuleLabel]:
        if self.label.kind == "P":
            return [normal_form(x) for x in (self.top, *self.middle, self.socle)]
        return [normal_form(self.sub), normal_form(self.quotient)]

    def arrows(self) -> List[Tuple[str, str]]:
        if self.label.kind == "P":
            t, b = str(normal_form(self.top)), str(normal_form(self.socle))
            out = []
            for m in self.middle:
                out += [(t, str(normal_form(m))), (str(normal_form(m)), b)]
            return out
        return [(str(normal_form(self.quotient)), str(normal_form(self.sub)))]

    def to_json(self) -> dict:
        d = {"label": str(self.label),
             "composition_factors": [str(x) for x in self.composition_factors],
             "arrows": [list(a) for a in self.arrows()]}
        if self.label.kind == "P":
            d.update(top=str(normal_form(self.top)), socle=str(normal_form(self.socle)),
                     middle=[str(normal_form(x)) for x in self.middle],
                     sequence=[str(x) for x in self.sequence])
        else:
            d.update(sub=str(self.sub), quotient=str(self.quotient))
        return d


def structure_of(x: ModuleLabel) -> StructureData:
    u, v = x.level.u, x.level.v
    lvl, f, r, s = x.level, x.flow, x.r, x.s
    if x.kind == "E+":
        return StructureData(x, sub=D("+", r, s, lvl, f), quotient=D("-", u - r, v - s, lvl, f))
    if x.kind == "E-":
        return StructureData(x, sub=D("-", r, s, lvl, f), quotient=D("+", u - r, v - s, lvl, f))
    if x.kind == "P":
        head = D("+", r, s, lvl, f)
        if s < v - 1:
            seq = (ModuleLabel("E+", r, s, f, lvl), ModuleLabel("E+", r, s + 1, f + 1, lvl))
            mid = (D("-", u - r, v - s, lvl, f), D("+", r, s + 1, lvl, f + 1))
        else:
            seq = (ModuleLabel("E+", r, v - 1, f, lvl), ModuleLabel("E+", u - r, 1, f + 2, lvl))
            mid = (D("-", u - r, 1, lvl, f), D("+", u - r, 1, lvl, f + 2))
        return StructureData(x, top=head, middle=mid, socle=head, sequence=seq)
    raise DomainError(f"structure data exists only for E+, E-, P kinds, not {x.kind}")


# ---------------------------------------------------------------------------
# characters

@lru_cache(maxsize=None)
def _relaxed_series(u: int, v: int, r: int, s: int, order: Fraction) -> PuiseuxSeries:
    """ch[M_{r,s}](q) / eta(q)^2 to relative order ``order``."""
    chi = minimal_character(MinimalLabel(u, v, r, s), order)
    ei = eta_inverse(order)
    return (chi * ei * ei).truncate_relative(order)


def relaxed_leading_exponent(x: ModuleLabel) -> Fraction:
    """Lowest q-exponent of the unflowed E coefficient: h - c/24 - 1/12."""
    lab = MinimalLabel(x.level.u, x.level.v, x.r, x.s)
    return lab.h - lab.c / 24 - Fraction(1, 12)


def relaxed_coset(x: ModuleLabel) -> Fraction:
    """Class mod 2 of the z-exponents of the (flowed) E character."""
    k = x.level.k
    return _mod2(-k + 2 * x.lam + k * x.flow)


def relaxed_coefficient(x: ModuleLabel, mu: RationalLike, prec: RationalLike) -> PuiseuxSeries:
    """Coefficient of z^mu in ch[x] for an E-kind x, to absolute q-precision ``prec``."""
    if x.kind != "E":
        raise DomainError("relaxed characters need an E-kind label")
    mu, prec = Q(mu), Q(prec)
    k, ell = x.level.k, x.flow
    if _mod2(mu) != relaxed_coset(x):
        return PuiseuxSeries.zero(prec)
    nu = mu - k * ell
    shift = ell * nu / 2 + k * ell * ell / 4
    lead = relaxed_leading_exponent(x) + shift
    if lead >= prec:
        return PuiseuxSeries.zero(prec)
    f = _relaxed_series(x.level.u, x.level.v, x.r, x.s, prec - lead)
    return f.shift(shift).truncate(prec)


def character(x: Union[ModuleLabel, "LevelOne"], q_order: RationalLike = 8,
              z_window: Tuple[RationalLike, RationalLike] = (-8, 8)) -> TwoVarCharacter:
    """Character of an E-kind simple (window of z-powers, each to relative order
    ``q_order``) or of a level-one module."""
    if isinstance(x, LevelOne):
        return level1_character(x.a, q_order, z_window, x.flow)
    if x.kind != "E":
        raise DomainError(f"characters are provided for E-kind and level-one modules, not {x.kind}")
    q_order = Q(q_order)
    lo, hi = Q(z_window[0]), Q(z_window[1])
    c = relaxed_coset(x)
    mu = lo + _mod2(c - lo)
    k, ell = x.level.k, x.flow
    coeffs = {}
    while mu <= hi:
        nu = mu - k * ell
        lead = relaxed_leading_exponent(x) + ell * nu / 2 + k * ell * ell / 4
        coeffs[mu] = relaxed_coefficient(x, mu, lead + q_order)
        mu += 2
    return TwoVarCharacter(coeffs, (lo, hi), False, c)


@dataclass(frozen=True)
class LevelOne:
    """Integrable level-one module L^1_a: a=1 vacuum, a=2 the other simple."""
    a: int
    flow: int = 0

    def __post_init__(self):
        if self.a not in (1, 2):
            raise DomainError("level-one index a must be 1 or 2")

    def flowed(self) -> "LevelOne":
        """sigma^l L^1_a = L^1_{a+l reduced to {1,2}}."""
        return LevelOne(underline(self.a + self.flow))

    def __str__(self) -> str:
        return f"s{self.flow}(L1[{self.a}])"


def underline(n: int) -> int:
    """1 for odd n, 2 for even n."""
    return 1 if n % 2 else 2


def level1_coefficient(a: int, j: RationalLike, prec: RationalLike) -> PuiseuxSeries:
    """Coefficient of z^j in ch[L^1_a] = sum z^{2n} q^{n^2} / eta (n in Z for a=1,
    Z+1/2 for a=2), to absolute precision ``prec``."""
    j, prec = Q(j), Q(prec)
    if j.denominator != 1 or (int(j) - (a - 1)) % 2:
        return PuiseuxSeries.zero(prec)
    lead = j * j / 4 - Fraction(1, 24)
    if lead >= prec:
        return PuiseuxSeries.zero(prec)
    return eta_inverse(prec - lead).shift(j * j / 4).truncate(prec)


def level1_character(a: int, q_order: RationalLike = 8,
                     z_window: Tuple[RationalLike, RationalLike] = (-8, 8),
                     flow: int = 0) -> TwoVarCharacter:
    """ch[sigma^flow L^1_a]; finite z-support below the uniform precision
    -1/24 + q_order (flagged ``complete``)."""
    q_order = Q(q_order)
    prec = Fraction(-1, 24) + q_order
    coeffs = {}
    j = -1
    while j * j / 4 - Fraction(1, 24) < prec:
        j += 1
    for jj in range(-j, j + 1):
        c = level1_coefficient(a, jj, prec)
        if c.terms:
            coeffs[Fraction(jj)] = c
    lo, hi = Q(z_window[0]), Q(z_window[1])
    ch = TwoVarCharacter(coeffs, (min(lo, -j), max(hi, j)), True, a - 1)
    if flow:
        ch = flow_character(ch, flow, 1)
    return ch


def flow_character(ch: TwoVarCharacter, ell: int, k: RationalLike) -> TwoVarCharacter:
    """z^{k ell} q^{k ell^2/4} ch(z q^{ell/2}, q)."""
    if not isinstance(ell, int):
        raise DomainError("spectral flow must be an integer")
    if not ch.coeffs and not ch.complete:
        raise SeriesError("empty z-window: nothing to flow")
    return ch.substitute_flow(ell, k)

"""
Fusion of ordinary modules L[r] with simples and projectives, the coset
branching rules between levels k, k+1 and the minimal model at k', and an
exact check of the branching character identity.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .affine import (LevelOne, ModuleLabel, normal_form, relaxed_coefficient,
                     relaxed_leading_exponent, level1_coefficient, underline, _mod2)
from .exact import PuiseuxSeries, Q, RationalLike, TwoVarCharacter, denominator_bound, level_bound
from .levels import AdmissibleLevel, DomainError, coset_triple
from .virasoro import MinimalLabel, fusion_coefficient


@dataclass
class FusionDecomposition:
    summands: Counter = field(default_factory=Counter)

    def labels(self) -> List[ModuleLabel]:
        return sorted(self.summands, key=str)

    def __eq__(self, other) -> bool:
        return isinstance(other, FusionDecomposition) and +self.summands == +other.summands

    def __add__(self, other: "FusionDecomposition") -> "FusionDecomposition":
        return FusionDecomposition(self.summands + other.summands)

    def total(self) -> int:
        return sum(self.summands.values())

    def to_json(self) -> list:
        return [{"label": str(x), "multiplicity": self.summands[x]} for x in self.labels()]

    def __str__(self) -> str:
        return " + ".join((f"{m}*" if m > 1 else "") + str(x) for x, m in
                          sorted(self.summands.items(), key=lambda t: str(t[0]))) or "0"


def fuse(r: int, x: ModuleLabel) -> FusionDecomposition:
    """L[r] fused with a simple or projective x; the result is normalized."""
    lvl = x.level
    u = lvl.u
    if not 1 <= r <= u - 1:
        raise DomainError(f"r={r} outside 1..{u - 1}")
    if x.kind in ("E+", "E-"):
        raise DomainError("fusion is available for simple and projective modules only")
    out: Counter = Counter()
    for r2 in range(1, u):
        if not fusion_coefficient(u, r, x.r, r2):
            continue
        if x.kind == "L":
            y = ModuleLabel("L", r2, 0, x.flow, lvl)
        elif x.kind == "E":
            y = ModuleLabel("E", r2, x.s, x.flow, lvl, x.lam + r - 1)
        else:
            y = ModuleLabel(x.kind, r2, x.s, x.flow, lvl)
        out[normal_form(y)] += 1
    return FusionDecomposition(out)


def fuse_decomposition(r: int, d: FusionDecomposition) -> FusionDecomposition:
    out = FusionDecomposition()
    for x, m in d.summands.items():
        for y, n in fuse(r, x).summands.items():
            out.summands[y] += m * n
    return out


# ---------------------------------------------------------------------------
# branching

@dataclass
class BranchingDecomposition:
    """x (x) L^1_b = sum of (level k+1 label) (x) (minimal model label at k')."""
    source: ModuleLabel
    level_one: LevelOne
    a: int
    summands: List[Tuple[ModuleLabel, MinimalLabel]]

    def to_json(self) -> dict:
        return {"source": str(self.source), "level_one": str(self.level_one.flowed()),
                "a": self.a,
                "summands": [{"affine": str(x), "minimal": str(m), "multiplicity": 1}
                             for x, m in self.summands]}


def branching_shift(a: int) -> Fraction:
    """lambda shift a/2 for a in {1,2} (a taken mod 2, a=0 meaning 2)."""
    return Fraction(underline(a), 2)


def branching_rule(x: ModuleLabel, a: int) -> BranchingDecomposition:
    """Decompose sigma^l(x) (x) L^1_{a+l} into level-(k+1) modules times minimal
    models at k', for x of kind E, E+-, D+- or P.  Labels are kept as given
    (not normalized) so the D sign stays visible."""
    if x.kind == "L":
        raise DomainError("write L-kind inputs as flowed D+ modules before branching")
    lvl = x.level
    tri = coset_triple(lvl)
    U = tri.shifted.u
    a = underline(a)
    out = []
    for m in range(1, U):
        if (m + x.r + x.s + a) % 2 != 1:
            continue
        if x.kind == "E":
            y = ModuleLabel("E", m, x.s, x.flow, tri.shifted, x.lam + branching_shift(a))
        else:
            y = ModuleLabel(x.kind, m, x.s, x.flow, tri.shifted)
        out.append((y, MinimalLabel(tri.minimal.u, tri.minimal.v, m, x.r).canonical()))
    return BranchingDecomposition(x, LevelOne(a, x.flow), a, out)


def induct_decompose(r: int, x: ModuleLabel) -> BranchingDecomposition:
    """Image under the r-th induction functor of a level-(k+1) module x with
    first index 1 (kinds E, D+-, P).

    The result pairs each x_m (first index m odd) with M_{m,r} at k', and
    its ``source`` is the level-k partner x' with x' (x) L^1 equal to it.
    """
    big = x.level
    u, v = big.u - big.v, big.v
    if u < 2:
        raise DomainError(f"{big} is not of the form (u+v, v) for an admissible (u, v)")
    lvl = AdmissibleLevel(u, v)
    lvl.require_fractional()
    if x.r != 1:
        raise DomainError("induction applies to modules with first index 1")
    if not 1 <= r <= u - 1:
        raise DomainError(f"r={r} outside 1..{u - 1}")
    if x.kind not in ("E", "D+", "D-", "P"):
        raise DomainError(f"induction is not provided for {x.kind}-kind modules")
    a = underline(r + x.s)
    if x.kind == "E":
        partner = ModuleLabel("E", r, x.s, x.flow, lvl, x.lam - branching_shift(a))
    else:
        partner = ModuleLabel(x.kind, r, x.s, x.flow, lvl)
    return branching_rule(partner, a)


# ---------------------------------------------------------------------------
# character identity

@dataclass
class BranchingResidual:
    residual: TwoVarCharacter
    lhs: TwoVarCharacter
    rhs: TwoVarCharacter
    q_order: Fraction

    @property
    def is_zero(self) -> bool:
        return self.residual.is_zero()


def _relaxed_valuation(x: ModuleLabel, mu: Fraction) -> Fraction:
    """Lowest q-exponent of the z^mu coefficient of ch[x] (E-kind, flowed)."""
    k, ell = x.level.k, x.flow
    return relaxed_leading_exponent(x) + ell * (mu - k * ell) / 2 + k * ell * ell / 4


def _level1_valuation(j: int) -> Fraction:
    return Fraction(j * j, 4) - Fraction(1, 24)


def _lhs_terms(x: ModuleLabel, a: int, M: Fraction, cutoff: Optional[Fraction]):
    """Pairs (j, valuation) of the level-one indices contributing to z^M.

    The valuation is a convex quadratic in j with vertex at j = flow, so the
    scan walks outward from there.  With ``cutoff=None`` only the minimum is
    returned.
    """
    ell = x.flow
    b = underline(a + ell)
    start = ell if (ell - (b - 1)) % 2 == 0 else ell + 1
    val = lambda j: _level1_valuation(j) + _relaxed_valuation(x, M - j)
    if cutoff is None:
        return [(j, val(j)) for j in (start, start - 2)]
    out = []
    for step in (2, -2):
        j = start if step > 0 else start - 2
        while val(j) < cutoff:
            out.append((j, val(j)))
            j += step
    return out


def branching_char_verify(lvl: AdmissibleLevel, r: int, s: int, a: int, ell: int,
                          lam: RationalLike, q_order: RationalLike = 6,
                          z_window: Tuple[RationalLike, RationalLike] = (-8, 8),
                          rhs_lam: Optional[RationalLike] = None) -> BranchingResidual:
    """Residual of ch[sigma^l E^k_{lam;r,s}] ch[L^1_{a+l}] minus
    sum_m ch[sigma^l E^{k+1}_{lam+a/2;m,s}] ch[M^{k'}_{m,r}] on the z-window.

    Each z-coefficient is compared up to q-order ``q_order`` above its lowest
    term.  ``rhs_lam`` replaces lam on the right side only (negative control).
    """
    q_order = Q(q_order)
    a = underline(a)
    x = ModuleLabel("E", r, s, ell, lvl, Q(lam))
    dec = branching_rule(x, a)
    if rhs_lam is not None:
        dec = branching_rule(ModuleLabel("E", r, s, ell, lvl, Q(rhs_lam)), a)
    tri = coset_triple(lvl)
    bound = math.lcm(level_bound(lvl.u, lvl.v), level_bound(tri.shifted.u, tri.shifted.v),
                     level_bound(tri.minimal.u, tri.minimal.v), 2 * Q(lam).denominator,
                     2 * Q(rhs_lam if rhs_lam is not None else lam).denominator)
    lo, hi = Q(z_window[0]), Q(z_window[1])
    k = lvl.k
    b = underline(a + ell)
    coset = _mod2(-k + 2 * x.lam + k * ell + (b - 1))
    lhs, rhs, res = {}, {}, {}
    with denominator_bound(bound):
        M = lo + _mod2(coset - lo)
        while M <= hi:
            prec = min(v for _, v in _lhs_terms(x, a, M, None)) + q_order
            left = PuiseuxSeries.zero(prec)
            for j, _ in _lhs_terms(x, a, M, prec):
                v1, ve = _level1_valuation(j), _relaxed_valuation(x, M - j)
                c1 = level1_coefficient(b, j, prec - ve)
                ce = relaxed_coefficient(x, M - j, prec - v1)
                left = left + (ce * c1).truncate(prec)
            right = PuiseuxSeries.zero(prec)
            for y, mlab in dec.summands:
                ve = _relaxed_valuation(y, M)
                vm = mlab.h - mlab.c / 24
                if ve + vm >= prec:
                    continue
                ce = relaxed_coefficient(y, M, prec - vm)
                if not ce.terms:
                    continue
                chi = _minimal(mlab, prec - ve - vm)
                right = right + (ce * chi).truncate(prec)
            lhs[M], rhs[M] = left, right
            res[M] = (left - right).truncate(prec)
            M += 2
    mk = lambda d: TwoVarCharacter(d, (lo, hi), False, coset)
    return BranchingResidual(mk(res), mk(lhs), mk(rhs), q_order)


_MIN_CACHE: Dict[Tuple[MinimalLabel, Fraction], PuiseuxSeries] = {}


def _minimal(lab: MinimalLabel, order: Fraction) -> PuiseuxSeries:
    from .virasoro import minimal_character
    key = (lab, order)
    f = _MIN_CACHE.get(key)
    if f is None:
        f = minimal_character(lab, order)
        _MIN_CACHE[key] = f
    return f

"""
Virasoro Verma modules in the PBW basis.

A basis vector of V(c, h) at level N is ``L_{-I} w`` for a partition
``I = (i1 >= i2 >= ... )`` of N, stored as the tuple ``I``.  Vectors are
sparse dicts ``partition -> Fraction``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import PuiseuxSeries, Q, RationalLike, fmt
from .levels import DomainError, virasoro_c, virasoro_h
from .linalg import EchelonSpace, Vector, iadd, nullspace, matrix_rank, determinant
from .modekernel import Gen, LowerBoundedModule, ModeEngine, state_field, virasoro_algebra

Partition = Tuple[int, ...]


@lru_cache(maxsize=None)
def partitions(n: int, largest: Optional[int] = None) -> Tuple[Partition, ...]:
    """Partitions of n as weakly decreasing tuples, in ascending tuple order.

    >>> partitions(3)
    ((1, 1, 1), (2, 1), (3,))
    """
    if largest is None:
        largest = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(sorted(out))


def partitions_min_part(n: int, smallest: int) -> List[Partition]:
    return [p for p in partitions(n) if all(x >= smallest for x in p)]


@dataclass
class PBWVector:
    """Sparse vector sum a_I L_{-I} w in V(c, h)."""
    coefficients: Dict[Partition, Fraction]
    c: Fraction
    h: Fraction

    @property
    def level(self) -> int:
        levels = {sum(p) for p in self.coefficients}
        if len(levels) > 1:
            raise DomainError("inhomogeneous PBW vector")
        return levels.pop() if levels else 0

    def to_json(self) -> list:
        return [{"partition": list(p), "coeff": fmt(x)}
                for p, x in sorted(self.coefficients.items())]

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for p, x in sorted(self.coefficients.items()):
            mono = "".join(f"L_{{-{i}}}" for i in p) or "1"
            parts.append(f"({fmt(x)}) {mono}")
        return " + ".join(parts)


class VermaModule(LowerBoundedModule):
    """V(c, h) with the PBW basis; L_n acts by commuting through."""

    def __init__(self, c: RationalLike, h: RationalLike):
        self.c, self.h = Q(c), Q(h)
        self.algebra = virasoro_algebra(self.c)
        self._act: Dict[Tuple[int, Partition], Vector] = {}

    def depth(self, key: Partition) -> Fraction:
        return Fraction(sum(key))

    def act_basis(self, gen: str, n: Fraction, key: Partition) -> Vector:
        if gen != "L":
            raise DomainError(f"unknown generator {gen}")
        if n.denominator != 1:
            raise DomainError("Virasoro modes are integral")
        return self.apply(int(n), key)

    def apply(self, n: int, part: Partition) -> Vector:
        k = (n, part)
        r = self._act.get(k)
        if r is not None:
            return r
        if not part:
            if n > 0:
                r = {}
            elif n == 0:
                r = {(): self.h} if self.h else {}
            else:
                r = {(-n,): Fraction(1)}
        elif n < 0 and -n >= part[0]:
            r = {(-n,) + part: Fraction(1)}
        else:
            p, rest = part[0], part[1:]
            # L_n L_{-p} R = L_{-p} (L_n R) + [L_n, L_{-p}] R
            r = {}
            for key, x in self.apply(n, rest).items():
                iadd(r, self.apply(-p, key), x)
            coeff = n + p
            if coeff:
                for key, x in self.apply(n - p, rest).items():
                    iadd(r, {key: x * coeff})
            if n == p:
                central = self.c * (n ** 3 - n) / 12
                if central:
                    iadd(r, {rest: central})
        self._act[k] = r
        return r

    def apply_vec(self, n: int, v: Vector) -> Vector:
        out: Vector = {}
        for key, x in v.items():
            iadd(out, self.apply(n, key), x)
        return out

    def basis(self, level: int) -> Tuple[Partition, ...]:
        return partitions(level)


_GRAM_CACHE: Dict[Tuple[Fraction, Fraction, int], List[List[Fraction]]] = {}
_VERMA_CACHE: Dict[Tuple[Fraction, Fraction], VermaModule] = {}


def verma(c: RationalLike, h: RationalLike) -> VermaModule:
    key = (Q(c), Q(h))
    m = _VERMA_CACHE.get(key)
    if m is None:
        m = _VERMA_CACHE.setdefault(key, VermaModule(*key))
    return m


def gram_matrix(c: RationalLike, h: RationalLike, N: int) -> List[List[Fraction]]:
    """Shapovalov form at level N over ``partitions(N)`` (memoized)."""
    c, h = Q(c), Q(h)
    key = (c, h, N)
    g = _GRAM_CACHE.get(key)
    if g is not None:
        return [row[:] for row in g]
    V = verma(c, h)
    basis = partitions(N)
    g = []
    for I in basis:
        row = []
        for J in basis:
            vec = {J: Fraction(1)}
            for i in I:              # L_{i_n} ... L_{i_1}: i_1 acts first
                vec = V.apply_vec(i, vec)
                if not vec:
                    break
            row.append(vec.get((), Fraction(0)))
        g.append(row)
    _GRAM_CACHE.setdefault(key, g)
    return [row[:] for row in g]


def gram_determinant(c: RationalLike, h: RationalLike, N: int) -> Fraction:
    return determinant(gram_matrix(c, h, N))


def find_singular_vectors(c: RationalLike, h: RationalLike, N: int) -> List[PBWVector]:
    """Basis of weight h+N vectors killed by L_1 and L_2."""
    if N < 1:
        raise DomainError("N must be at least 1")
    c, h = Q(c), Q(h)
    V = verma(c, h)
    basis = partitions(N)
    cols = []
    for p in basis:
        img = {}
        for n in (1, 2):
            for key, x in V.apply(n, p).items():
                img[(n, key)] = x
        cols.append(img)
    out = []
    lead = (1,) * N
    for kv in nullspace(cols):
        vec = {basis[i]: x for i, x in kv.items()}
        a = vec.get(lead)
        if a:
            vec = {p: x / a for p, x in vec.items()}
        out.append(PBWVector(vec, c, h))
    return out


def is_singular(vec: PBWVector, up_to: Optional[int] = None) -> bool:
    """Check L_n vec = 0 for 1 <= n <= up_to (default: the level)."""
    V = verma(vec.c, vec.h)
    N = vec.level if up_to is None else up_to
    return all(not V.apply_vec(n, vec.coefficients) for n in range(1, N + 1))


def simple_graded_dims(c: RationalLike, h: RationalLike, N_max: int) -> List[int]:
    """dim L(c,h)_n for n = 0..N_max, as ranks of Gram matrices."""
    return [matrix_rank(gram_matrix(c, h, n)) for n in range(N_max + 1)]


# ---------------------------------------------------------------------------
# highest-weight quotients

class HighestWeightModule(LowerBoundedModule):
    """V(c,h) modulo a submodule: the radical (``simple``), the submodule
    generated by given singular vectors, or nothing (``verma``).

    Vectors are represented by their normal forms: remainders after
    reduction by an echelon basis of the submodule at each level.
    """

    def __init__(self, c: RationalLike, h: RationalLike, kind: str = "verma",
                 relations: Sequence[PBWVector] = ()):
        self.c, self.h = Q(c), Q(h)
        self.verma = verma(self.c, self.h)
        self.algebra = self.verma.algebra
        if kind not in ("verma", "simple", "quotient"):
            raise DomainError(f"unknown module kind {kind}")
        self.kind = kind
        self.relations = [r.coefficients for r in relations]
        self._sub: Dict[int, EchelonSpace] = {}
        self._act: Dict[Tuple[int, Partition], Vector] = {}

    def submodule(self, level: int) -> EchelonSpace:
        sp = self._sub.get(level)
        if sp is not None:
            return sp
        sp = EchelonSpace()
        if self.kind == "simple":
            basis = partitions(level)
            g = gram_matrix(self.c, self.h, level)
            cols = [{i: g[i][j] for i in range(len(basis)) if g[i][j]} for j in range(len(basis))]
            for kv in nullspace(cols):
                sp.add({basis[i]: x for i, x in kv.items()})
        elif self.kind == "quotient":
            for rel in self.relations:
                N = sum(next(iter(rel)))
                if N > level:
                    continue
                for I in partitions(level - N):
                    vec = dict(rel)
                    for i in reversed(I):
                        vec = self.verma.apply_vec(-i, vec)
                    sp.add(vec)
        self._sub[level] = sp
        return sp

    def reduce(self, v: Vector) -> Vector:
        by_level: Dict[int, Vector] = {}
        for p, x in v.items():
            by_level.setdefault(sum(p), {})[p] = x
        out: Vector = {}
        for lvl, part in by_level.items():
            iadd(out, self.submodule(lvl).reduce(part))
        return out

    def basis(self, level: int) -> List[Partition]:
        sp = self.submodule(level)
        return [p for p in partitions(level) if p not in sp.rows]

    def dims(self, N_max: int) -> List[int]:
        return [len(self.basis(n)) for n in range(N_max + 1)]

    def depth(self, key: Partition) -> Fraction:
        return Fraction(sum(key))

    def apply(self, n: int, key: Partition) -> Vector:
        k = (n, key)
        r = self._act.get(k)
        if r is None:
            r = self.reduce(self.verma.apply(n, key))
            self._act[k] = r
        return r

    def act_basis(self, gen: str, n: Fraction, key: Partition) -> Vector:
        if gen != "L":
            raise DomainError(f"unknown generator {gen}")
        return self.apply(int(n), key)


def vacuum_spanning_words(max_weight: int) -> List[Partition]:
    """PBW monomials L_{-I}|0> of the universal vacuum module (parts >= 2),
    of weight 2..max_weight."""
    out = []
    for n in range(2, max_weight + 1):
        out.extend(partitions_min_part(n, 2))
    return out


def c1_subspace(module: HighestWeightModule, level: int, engine: Optional[ModeEngine] = None
                ) -> EchelonSpace:
    """C1(W) at the given level: span of u_{(-1)} w, u in V_+ (iterate route)."""
    eng = engine or ModeEngine(module)
    L = Gen("L", 2)
    sp = EchelonSpace()
    for I in vacuum_spanning_words(level):
        wt = sum(I)
        f = state_field([(L, i - 1) for i in I])
        for w in module.basis(level - wt):
            sp.add(module.reduce(eng.mode(f, -wt, {w: Fraction(1)})))
    return sp


def c1_quotient_dims(module: HighestWeightModule, level_max: int) -> List[int]:
    """dim (W / C1(W))_n for n = 0..level_max."""
    eng = ModeEngine(module)
    out = []
    for n in range(level_max + 1):
        out.append(len(module.basis(n)) - c1_subspace(module, n, eng).rank)
    return out


def c1_quotient_dims_direct(module: HighestWeightModule, level_max: int) -> List[int]:
    """Same quantity via C1(W)_n = sum_{j >= 2} L_{-j} W_{n-j}."""
    out = []
    for n in range(level_max + 1):
        sp = EchelonSpace()
        for j in range(2, n + 1):
            for w in module.basis(n - j):
                sp.add(module.apply(-j, w))
        out.append(len(module.basis(n)) - sp.rank)
    return out


# ---------------------------------------------------------------------------
# minimal models

@dataclass(frozen=True)
class MinimalLabel:
    u: int
    v: int
    r: int
    s: int

    def __post_init__(self):
        if self.u < 2 or self.v < 2:
            raise DomainError("minimal models need u, v >= 2")
        from math import gcd
        if gcd(self.u, self.v) != 1:
            raise DomainError("u and v must be coprime")
        if not (1 <= self.r <= self.u - 1 and 1 <= self.s <= self.v - 1):
            raise DomainError(f"(r,s)=({self.r},{self.s}) outside the Kac table of ({self.u},{self.v})")

    def canonical(self) -> "MinimalLabel":
        other = MinimalLabel(self.u, self.v, self.u - self.r, self.v - self.s)
        return self if (self.s, self.r) <= (other.s, other.r) else other

    @property
    def t(self) -> Fraction:
        return Fraction(self.u, self.v)

    @property
    def c(self) -> Fraction:
        return virasoro_c(self.t)

    @property
    def h(self) -> Fraction:
        return virasoro_h(self.r, self.s, self.t)

    def __str__(self) -> str:
        return f"M[{self.r},{self.s}]@({self.u},{self.v})"


def minimal_labels(u: int, v: int) -> List[MinimalLabel]:
    seen = []
    for s in range(1, v):
        for r in range(1, u):
            lab = MinimalLabel(u, v, r, s).canonical()
            if lab not in seen:
                seen.append(lab)
    return seen


def fusion_coefficient(q: int, t: int, t2: int, t3: int) -> int:
    """N^{q, t3}_{t, t2} in {0, 1}."""
    if abs(t - t2) + 1 <= t3 <= min(t + t2 - 1, 2 * q - t - t2 - 1) and (t + t2 + t3) % 2 == 1:
        return 1
    return 0


def minimal_fusion(a: MinimalLabel, b: MinimalLabel) -> Counter:
    if (a.u, a.v) != (b.u, b.v):
        raise DomainError("labels belong to different minimal models")
    out: Counter = Counter()
    for r in range(1, a.u):
        nr = fusion_coefficient(a.u, a.r, b.r, r)
        if not nr:
            continue
        for s in range(1, a.v):
            ns = fusion_coefficient(a.v, a.s, b.s, s)
            if ns:
                out[MinimalLabel(a.u, a.v, r, s).canonical()] += nr * ns
    return out


def fuse_multisets(x: Counter, y: Counter) -> Counter:
    out: Counter = Counter()
    for a, m in x.items():
        for b, n in y.items():
            for c, k in minimal_fusion(a, b).items():
                out[c] += m * n * k
    return out


def minimal_character(lab: MinimalLabel, q_order: RationalLike = 8) -> PuiseuxSeries:
    """q^{h - c/24} sum_n dim L(c,h)_n q^n, relative order ``q_order``."""
    q_order = Q(q_order)
    n_max = -(-q_order.numerator // q_order.denominator) - 1
    dims = simple_graded_dims(lab.c, lab.h, max(n_max, 0))
    lead = lab.h - lab.c / 24
    return PuiseuxSeries({lead + n: d for n, d in enumerate(dims) if d}, lead + q_order)

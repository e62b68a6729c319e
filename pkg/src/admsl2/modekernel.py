"""
Mode calculus for lower-bounded modules.

Conventions
-----------
Modes are weight-adjusted: a field ``A`` of conformal weight ``D`` is
``A(z) = sum_j A_j z^{-j-D}`` and ``A_j`` lowers the weight by ``j``.
For half-integer weights (NS fermions) the indices are half-integers.

The normally ordered product used throughout is the (-1)-product::

    (:AB:)_n = sum_{j <= -D_A} A_j B_{n-j}  +  (-1)^{|A||B|} sum_{j > -D_A} B_{n-j} A_j

and derivatives act by ``(dA)_n = -(n + D_A) A_n``.  On a module graded by
a non-negative depth both sums are finite, so no cutoff is ever needed.

Every sign coming from odd elements passes through :func:`koszul`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Hashable, Iterable, Optional, Sequence, Tuple, Union

from .exact import Q, RationalLike
from .linalg import Vector, iadd


class ModeError(ValueError):
    pass


def koszul(pa: int, pb: int) -> int:
    """Sign (-1)^{pa*pb} for moving an element of parity pa past one of parity pb."""
    return -1 if (pa & pb & 1) else 1


# ---------------------------------------------------------------------------
# bracket tables

Mode = Tuple[str, Fraction]
BracketResult = Tuple[Dict[Mode, Fraction], Fraction]


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    parity: int                 # 0 even, 1 odd
    weight: Fraction

    @property
    def moding(self) -> str:
        return "integer" if self.weight.denominator == 1 else "half-integer"

    def valid_mode(self, n: Fraction) -> bool:
        return (n - self.weight).denominator == 1


class Algebra:
    """A mode algebra: generators plus a closed-form bracket table.

    ``table(a, m, b, n)`` returns ``({(gen, mode): coeff}, central)`` for the
    super-bracket ``[a_m, b_n]``; only one ordering of each pair needs to be
    supplied, the other follows from super-antisymmetry.
    """

    def __init__(self, name: str, gens: Sequence[GeneratorSpec],
                 table: Callable[[str, Fraction, str, Fraction], Optional[BracketResult]]):
        self.name = name
        self.gens = {g.name: g for g in gens}
        self._table = table

    def spec(self, name: str) -> GeneratorSpec:
        try:
            return self.gens[name]
        except KeyError:
            raise ModeError(f"unknown generator {name!r} in algebra {self.name}") from None

    def commutator(self, x: Tuple[str, RationalLike], y: Tuple[str, RationalLike]) -> BracketResult:
        a, m = x[0], Q(x[1])
        b, n = y[0], Q(y[1])
        ga, gb = self.spec(a), self.spec(b)
        if not ga.valid_mode(m) or not gb.valid_mode(n):
            raise ModeError(f"mode index incompatible with moding: {a}_{m}, {b}_{n}")
        res = self._table(a, m, b, n)
        if res is None:
            res = self._table(b, n, a, m)
            if res is None:
                raise ModeError(f"no bracket registered for {a}, {b}")
            # [x, y] = -(-1)^{|x||y|} [y, x]
            s = -koszul(ga.parity, gb.parity)
            modes, central = res
            res = ({k: s * c for k, c in modes.items()}, s * central)
        modes, central = res
        return ({k: Fraction(c) for k, c in modes.items() if c}, Fraction(central))

    def bracket_lin(self, x: Dict[Mode, Fraction], y: Dict[Mode, Fraction]) -> BracketResult:
        """Bilinear extension of the bracket to combinations of modes."""
        out: Dict[Mode, Fraction] = {}
        central = Fraction(0)
        for mx, cx in x.items():
            for my, cy in y.items():
                modes, cen = self.commutator(mx, my)
                central += cx * cy * cen
                iadd(out, modes, cx * cy)
        return out, central

    def parity_of(self, lin: Dict[Mode, Fraction]) -> int:
        ps = {self.spec(g).parity for g, _ in lin}
        if len(ps) > 1:
            raise ModeError("inhomogeneous parity")
        return ps.pop() if ps else 0

    def jacobi_defect(self, x: Mode, y: Mode, z: Mode) -> Tuple[Dict[Mode, Fraction], Fraction]:
        """[x,[y,z]] - [[x,y],z] - (-1)^{|x||y|}[y,[x,z]] (zero for a Lie superalgebra).

        Central elements bracket to zero with everything, so only the
        mode parts of the inner brackets propagate.
        """
        px, py = self.spec(x[0]).parity, self.spec(y[0]).parity
        X, Y, Z = {x: Fraction(1)}, {y: Fraction(1)}, {z: Fraction(1)}
        yz, _ = self.bracket_lin(Y, Z)
        xy, _ = self.bracket_lin(X, Y)
        xz, _ = self.bracket_lin(X, Z)
        a_m, a_c = self.bracket_lin(X, yz)
        b_m, b_c = self.bracket_lin(xy, Z)
        c_m, c_c = self.bracket_lin(Y, xz)
        s = koszul(px, py)
        out = dict(a_m)
        iadd(out, b_m, Fraction(-1))
        iadd(out, c_m, Fraction(-s))
        return out, a_c - b_c - s * c_c


def _delta(a, b) -> int:
    return 1 if a == b else 0


def virasoro_algebra(c: RationalLike, name: str = "L") -> Algebra:
    """[L_m, L_n] = (m-n) L_{m+n} + (m^3-m)/12 delta_{m+n,0} c."""
    c = Q(c)
    gens = [GeneratorSpec(name, 0, Fraction(2))]

    def table(a, m, b, n):
        if a == name and b == name:
            return ({(name, m + n): m - n}, (m ** 3 - m) / 12 * c * _delta(m + n, 0))
        return None
    return Algebra("Virasoro", gens, table)


def n2_algebra(c: RationalLike) -> Algebra:
    """N=2 superconformal algebra (NS), generators T, J, G+, G-."""
    c = Q(c)
    gens = [GeneratorSpec("T", 0, Fraction(2)), GeneratorSpec("J", 0, Fraction(1)),
            GeneratorSpec("G+", 1, Fraction(3, 2)), GeneratorSpec("G-", 1, Fraction(3, 2))]

    def table(a, m, b, n):
        d = _delta(m + n, 0)
        if (a, b) == ("T", "T"):
            return ({("T", m + n): m - n}, m * (m * m - 1) / 12 * c * d)
        if (a, b) == ("T", "J"):
            return ({("J", m + n): -n}, 0)
        if a == "T" and b in ("G+", "G-"):
            return ({(b, m + n): m / 2 - n}, 0)
        if (a, b) == ("J", "J"):
            return ({}, m * c / 3 * d)
        if a == "J" and b == "G+":
            return ({("G+", m + n): 1}, 0)
        if a == "J" and b == "G-":
            return ({("G-", m + n): -1}, 0)
        if (a, b) == ("G+", "G-"):
            return ({("T", m + n): 2, ("J", m + n): m - n}, (4 * m * m - 1) / 12 * c * d)
        if (a, b) in (("G+", "G+"), ("G-", "G-")):
            return ({}, 0)
        return None
    return Algebra("N=2", gens, table)


def heisenberg_algebra(norm: RationalLike, name: str = "X") -> Algebra:
    """[X_m, X_n] = m * norm * delta_{m+n,0}."""
    norm = Q(norm)

    def table(a, m, b, n):
        if a == name and b == name:
            return ({}, m * norm * _delta(m + n, 0))
        return None
    return Algebra("Heisenberg", [GeneratorSpec(name, 0, Fraction(1))], table)


def fermion_algebra(plus: str = "psi+", minus: str = "psi-") -> Algebra:
    """Complex NS fermion pair: {psi+_r, psi-_s} = delta_{r+s,0}."""
    gens = [GeneratorSpec(plus, 1, Fraction(1, 2)), GeneratorSpec(minus, 1, Fraction(1, 2))]

    def table(a, m, b, n):
        if (a, b) == (plus, minus):
            return ({}, _delta(m + n, 0))
        if a == b and a in (plus, minus):
            return ({}, 0)
        return None
    return Algebra("fermions", gens, table)


def direct_sum(name: str, *algs: Algebra) -> Algebra:
    """Mutually commuting union of algebras."""
    owner = {}
    gens = []
    for alg in algs:
        for g in alg.gens.values():
            if g.name in owner:
                raise ModeError(f"duplicate generator {g.name}")
            owner[g.name] = alg
            gens.append(g)

    def table(a, m, b, n):
        if owner[a] is not owner[b]:
            return ({}, 0)
        return owner[a]._table(a, m, b, n)
    return Algebra(name, gens, table)


# ---------------------------------------------------------------------------
# composite fields

class Field:
    """Expression tree over generator fields (hashable, weight- and parity-homogeneous)."""

    weight: Fraction
    parity: int
    _key: tuple

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        return isinstance(other, Field) and self._h == other._h and self._key == other._key

    def _finish(self):
        self._h = hash(self._key)

    # builders
    def __add__(self, other: "Field") -> "Field":
        return Lin([(Fraction(1), self), (Fraction(1), other)])

    def __sub__(self, other: "Field") -> "Field":
        return Lin([(Fraction(1), self), (Fraction(-1), other)])

    def __rmul__(self, c) -> "Field":
        return Lin([(Q(c), self)])

    def __neg__(self) -> "Field":
        return Lin([(Fraction(-1), self)])


class Gen(Field):
    def __init__(self, name: str, weight: RationalLike, parity: int = 0):
        self.name = name
        self.weight = Q(weight)
        self.parity = parity
        self._key = ("gen", name)
        self._finish()

    def __repr__(self):
        return self.name


class Deriv(Field):
    def __init__(self, a: Field):
        self.a = a
        self.weight = a.weight + 1
        self.parity = a.parity
        self._key = ("d", a._key)
        self._finish()

    def __repr__(self):
        return f"d({self.a!r})"


class NOP(Field):
    def __init__(self, a: Field, b: Field):
        self.a, self.b = a, b
        self.weight = a.weight + b.weight
        self.parity = (a.parity + b.parity) % 2
        self._key = ("nop", a._key, b._key)
        self._finish()

    def __repr__(self):
        return f":{self.a!r} {self.b!r}:"


class Lin(Field):
    def __init__(self, terms: Iterable[Tuple[RationalLike, Field]]):
        merged: Dict[Field, Fraction] = {}
        for c, f in terms:
            c = Q(c)
            if isinstance(f, Lin):
                for c2, f2 in f.terms:
                    merged[f2] = merged.get(f2, 0) + c * c2
            else:
                merged[f] = merged.get(f, 0) + c
        self.terms = [(c, f) for f, c in merged.items() if c]
        if not self.terms:
            raise ModeError("empty linear combination of fields")
        ws = {f.weight for _, f in self.terms}
        ps = {f.parity for _, f in self.terms}
        if len(ws) != 1 or len(ps) != 1:
            raise ModeError("linear combinations must be homogeneous in weight and parity")
        self.weight = ws.pop()
        self.parity = ps.pop()
        self._key = ("lin", tuple(sorted(((str(c), f._key) for c, f in self.terms), key=repr)))
        self._finish()

    def __repr__(self):
        return " + ".join(f"({c})*{f!r}" for c, f in self.terms)


def divided_derivative(a: Field, p: int) -> Field:
    """d^p a / p!"""
    f = a
    for _ in range(p):
        f = Deriv(f)
    if p > 1:
        f = Lin([(Fraction(1, factorial(p)), f)])
    return f


def state_field(word: Sequence[Tuple[Field, int]]) -> Field:
    """Field of the state a1_(-p1) a2_(-p2) ... |0> (all p >= 1).

    Uses Y(a_(-p) b, z) = :(d^{p-1} a / (p-1)!)(z) Y(b, z): from the right.
    The vacuum itself has no field here; ``word`` must be non-empty.
    """
    if not word:
        raise ModeError("the vacuum has no composite field in this representation")
    *rest, (a, p) = word
    f = divided_derivative(a, p - 1)
    for b, q in reversed(rest):
        f = NOP(divided_derivative(b, q - 1), f)
    return f


# ---------------------------------------------------------------------------
# modules

class LowerBoundedModule:
    """Interface for modules with a basis graded by non-negative depth."""

    algebra: Algebra

    def act_basis(self, gen: str, n: Fraction, key: Hashable) -> Vector:
        raise NotImplementedError

    def depth(self, key: Hashable) -> Fraction:
        raise NotImplementedError

    def parity(self, key: Hashable) -> int:
        return 0


class ModeEngine:
    """Computes modes of composite fields on a lower-bounded module."""

    def __init__(self, module: LowerBoundedModule):
        self.module = module
        self._memo: Dict[Tuple[Field, Fraction, Hashable], Vector] = {}
        self._gen_memo: Dict[Tuple[str, Fraction, Hashable], Vector] = {}

    # generator action with memo
    def gen_basis(self, name: str, n: Fraction, key: Hashable) -> Vector:
        k = (name, n, key)
        r = self._gen_memo.get(k)
        if r is None:
            if self.module.depth(key) - n < 0:
                r = {}
            else:
                r = self.module.act_basis(name, n, key)
            self._gen_memo[k] = r
        return r

    def gen(self, name: str, n: RationalLike, v: Vector) -> Vector:
        n = Q(n)
        spec = self.module.algebra.spec(name)
        if not spec.valid_mode(n):
            raise ModeError(f"{name}_{n}: index incompatible with moding")
        out: Vector = {}
        for key, c in v.items():
            iadd(out, self.gen_basis(name, n, key), c)
        return out

    def mode(self, f: Field, n: RationalLike, v: Vector) -> Vector:
        n = Q(n)
        if (n - f.weight).denominator != 1:
            raise ModeError(f"mode {n} incompatible with field weight {f.weight}")
        out: Vector = {}
        for key, c in v.items():
            iadd(out, self._mode_basis(f, n, key), c)
        return out

    def _mode_basis(self, f: Field, n: Fraction, key: Hashable) -> Vector:
        mk = (f, n, key)
        r = self._memo.get(mk)
        if r is not None:
            return r
        d = self.module.depth(key)
        if d - n < 0:
            r = {}
        elif isinstance(f, Gen):
            r = self.gen_basis(f.name, n, key)
        elif isinstance(f, Deriv):
            r = dict(self._mode_basis(f.a, n, key))
            s = -(n + f.a.weight)
            r = {k: s * x for k, x in r.items()} if s else {}
        elif isinstance(f, Lin):
            r = {}
            for c, g in f.terms:
                iadd(r, self._mode_basis(g, n, key), c)
        elif isinstance(f, NOP):
            r = self._nop_basis(f, n, key, d)
        else:
            raise ModeError(f"unknown field node {f!r}")
        self._memo[mk] = r
        return r

    def _nop_basis(self, f: NOP, n: Fraction, key: Hashable, d: Fraction) -> Vector:
        a, b = f.a, f.b
        da = a.weight
        out: Vector = {}
        one = {key: Fraction(1)}
        # creation part of a on the left: j <= -da and n - j <= d
        j = n - d
        # align j to the moding of a
        shift = (j - da) - ((j - da).numerator // (j - da).denominator)
        if shift:
            j += 1 - shift
        top = -da
        while j <= top:
            w = self.mode(b, n - j, one)
            if w:
                iadd(out, self.mode(a, j, w))
            j += 1
        # annihilation part of a on the right: -da < j <= d
        s = koszul(a.parity, b.parity)
        j = -da + 1
        while j <= d:
            w = self.mode(a, j, one)
            if w:
                iadd(out, self.mode(b, n - j, w), Fraction(s))
            j += 1
        return out

    def apply_word(self, word: Sequence[Tuple[Union[str, Field], RationalLike]], v: Vector) -> Vector:
        """Apply the operator product x1 x2 ... xk (rightmost acts first)."""
        out = dict(v)
        for x, n in reversed(list(word)):
            if isinstance(x, Field):
                out = self.mode(x, n, out)
            else:
                out = self.gen(x, n, out)
            if not out:
                break
        return out

    def clear(self) -> None:
        self._memo.clear()
        self._gen_memo.clear()

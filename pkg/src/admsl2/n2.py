"""
The N=2 superconformal algebra on the free-field space M_h (x) F (x) pi_lambda.

The space is spanned by monomials ``L_{-A} X_{-C} psi+_{-B} psi-_{-Bt} z``
where ``A`` is a Virasoro basis key (a partition), ``C`` a partition, and
``B``, ``Bt`` strictly decreasing tuples of positive half-integers.  The key
of that monomial is ``(A, C, B, Bt)``.

Two mode labellings are in use.  Internally every field is weight-adjusted
for the free-field grading, where G+ = psi+ has weight 1/2 and G- has
weight 5/2 (the ``"freefield"`` indexing).  The N=2 bracket table holds in
the labelling by T-weight (``"standard"``), related by
``G+_r(standard) = G+_{r+1}(freefield)`` and
``G-_r(standard) = G-_{r-1}(freefield)``; T and J agree in both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exact import Q, RationalLike, fmt
from .levels import DomainError, n2_central_charge
from .linalg import EchelonSpace, Vector, iadd, vscale
from .modekernel import (Deriv, Field, Gen, Lin, LowerBoundedModule, ModeEngine, NOP,
                         direct_sum, fermion_algebra, heisenberg_algebra, n2_algebra,
                         state_field, virasoro_algebra)
from .virasoro import HighestWeightModule, partitions

HALF = Fraction(1, 2)
Key = Tuple[tuple, tuple, tuple, tuple]
TOP: Key = ((), (), (), ())


def _check_ell(ell: Fraction) -> None:
    if ell == 0 or ell == -2:
        raise DomainError(f"level ell={fmt(ell)} is excluded (ell must avoid 0 and -2)")


def c_ell(ell: RationalLike) -> Fraction:
    """Central charge of the Virasoro factor: 1 - 6(ell+1)^2/(ell+2)."""
    ell = Q(ell)
    _check_ell(ell)
    return 1 - 6 * (ell + 1) ** 2 / (ell + 2)


def heisenberg_norm(ell: RationalLike) -> Fraction:
    """[X_m, X_n] = m * norm * delta_{m+n,0} with norm = -8(ell+2)/ell^2."""
    ell = Q(ell)
    _check_ell(ell)
    return -8 * (ell + 2) / ell ** 2


def lambda_tau(ell: RationalLike, lam: RationalLike) -> Fraction:
    ell, lam = Q(ell), Q(lam)
    _check_ell(ell)
    return -lam - 4 * (ell + 2) / ell


def p_factor(r: int, ell: RationalLike, h: RationalLike, lam: RationalLike) -> Fraction:
    """p_r(h, lambda) = (ell+2)h - (r-1+ell*lam/4)^2 - (ell+1)(r-1+ell*lam/4)."""
    ell, h, lam = Q(ell), Q(h), Q(lam)
    x = r - 1 + ell * lam / 4
    return (ell + 2) * h - x * x - (ell + 1) * x


def p_root(r: int, ell: RationalLike, lam: RationalLike) -> Fraction:
    """The h at which p_r vanishes."""
    ell, lam = Q(ell), Q(lam)
    x = r - 1 + ell * lam / 4
    return (x * x + (ell + 1) * x) / (ell + 2)


# ---------------------------------------------------------------------------
# fermion Fock space helpers

@lru_cache(maxsize=None)
def strict_half_sets(total: Fraction, bound: Optional[Fraction] = None) -> Tuple[tuple, ...]:
    """Strictly decreasing tuples of positive half-odd integers below ``bound`` summing to ``total``."""
    if total == 0:
        return ((),)
    out = []
    top = total if bound is None else min(total, bound - 1)
    x = top if (top - HALF).denominator == 1 else top - HALF
    while x >= HALF:
        for rest in strict_half_sets(total - x, x):
            out.append((x,) + rest)
        x -= 1
    return tuple(out)


@lru_cache(maxsize=None)
def fermion_states(depth: Fraction) -> Tuple[Tuple[tuple, tuple], ...]:
    out = []
    d = Fraction(0)
    while d <= depth:
        for b in strict_half_sets(d):
            for bt in strict_half_sets(depth - d):
                out.append((b, bt))
        d += HALF
    return tuple(out)


def _insert(seq: tuple, x: Fraction) -> Tuple[int, tuple]:
    """Insert x into a strictly decreasing tuple; returns (sign, new) or (0, ())."""
    if x in seq:
        return 0, ()
    pos = sum(1 for y in seq if y > x)
    return (-1) ** pos, seq[:pos] + (x,) + seq[pos:]


def _remove(seq: tuple, x: Fraction) -> Tuple[int, tuple]:
    if x not in seq:
        return 0, ()
    pos = seq.index(x)
    return (-1) ** pos, seq[:pos] + seq[pos + 1:]


class FreeFieldModule(LowerBoundedModule):
    """M_h (x) F (x) pi_lambda with M_h a Verma or simple Virasoro module at c_ell."""

    def __init__(self, ell: RationalLike, h: RationalLike, lam: RationalLike,
                 virasoro_factor: str = "verma"):
        self.ell, self.h, self.lam = Q(ell), Q(h), Q(lam)
        _check_ell(self.ell)
        if virasoro_factor not in ("verma", "simple"):
            raise DomainError(f"unknown Virasoro factor {virasoro_factor!r}")
        self.virasoro_factor = virasoro_factor
        self.c_ell = c_ell(self.ell)
        self.kappa = heisenberg_norm(self.ell)
        self.vir = HighestWeightModule(self.c_ell, self.h, virasoro_factor)
        self.algebra = direct_sum("free field", virasoro_algebra(self.c_ell, "L"),
                                  heisenberg_algebra(self.kappa, "X"),
                                  fermion_algebra("psi+", "psi-"))
        self._basis: Dict[Fraction, List[Key]] = {}

    @property
    def base(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.ell, self.h, self.lam)

    def depth(self, key: Key) -> Fraction:
        A, C, B, Bt = key
        return Fraction(sum(A) + sum(C)) + sum(B, Fraction(0)) + sum(Bt, Fraction(0))

    def parity(self, key: Key) -> int:
        return (len(key[2]) + len(key[3])) % 2

    @staticmethod
    def charge(key: Key) -> int:
        """Eigenvalue of the zero mode of :psi+ psi-: (number of psi+ minus psi-)."""
        return len(key[2]) - len(key[3])

    def basis(self, depth: RationalLike) -> List[Key]:
        depth = Q(depth)
        b = self._basis.get(depth)
        if b is not None:
            return b
        out = []
        if depth >= 0 and (2 * depth).denominator == 1:
            for fd2 in range(int(2 * depth) + 1):
                fd = Fraction(fd2, 2)
                rest = depth - fd
                if rest.denominator != 1:
                    continue
                ferm = fermion_states(fd)
                for na in range(int(rest) + 1):
                    for A in self.vir.basis(na):
                        for C in partitions(int(rest) - na):
                            for B, Bt in ferm:
                                out.append((A, C, B, Bt))
        out.sort(key=repr)
        self._basis[depth] = out
        return out

    def dims(self, depth_max: RationalLike) -> List[Tuple[Fraction, int]]:
        depth_max = Q(depth_max)
        out, d = [], Fraction(0)
        while d <= depth_max:
            out.append((d, len(self.basis(d))))
            d += HALF
        return out

    def act_basis(self, gen: str, n: Fraction, key: Key) -> Vector:
        A, C, B, Bt = key
        if gen == "L":
            return {(a, C, B, Bt): x for a, x in self.vir.apply(int(n), A).items()}
        if gen == "X":
            n = int(n)
            if n < 0:
                return {(A, tuple(sorted(C + (-n,), reverse=True)), B, Bt): Fraction(1)}
            if n == 0:
                return {key: self.lam} if self.lam else {}
            mult = C.count(n)
            if not mult:
                return {}
            c2 = list(C)
            c2.remove(n)
            return {(A, tuple(c2), B, Bt): n * self.kappa * mult}
        if gen == "psi+":
            if n < 0:
                s, b2 = _insert(B, -n)
                return {(A, C, b2, Bt): Fraction(s)} if s else {}
            s, bt2 = _remove(Bt, n)
            if not s:
                return {}
            return {(A, C, B, bt2): Fraction(s * (-1) ** len(B))}
        if gen == "psi-":
            if n < 0:
                s, bt2 = _insert(Bt, -n)
                return {(A, C, B, bt2): Fraction(s * (-1) ** len(B))} if s else {}
            s, b2 = _remove(B, n)
            return {(A, C, b2, Bt): Fraction(s)} if s else {}
        raise DomainError(f"unknown generator {gen}")


# ---------------------------------------------------------------------------
# the realization

@dataclass(frozen=True)
class N2Fields:
    T: Field
    J: Field
    Gplus: Field
    Gminus: Field
    g: Field
    a: Field
    W: Field
    Gminus_raw: Field         # :W psi-:, equal to (ell+2)/2 * G-


@lru_cache(maxsize=None)
def n2_fields(ell: Fraction) -> N2Fields:
    ell = Q(ell)
    _check_ell(ell)
    kappa = heisenberg_norm(ell)
    L = Gen("L", 2)
    X = Gen("X", 1)
    pp = Gen("psi+", HALF, 1)
    pm = Gen("psi-", HALF, 1)
    g = NOP(pp, pm)
    a = Lin([(ell / 4, X), (-1, g)])
    J = Lin([(-ell / (2 * (ell + 2)), X), (1, g)])
    aa = NOP(a, a)
    # with the (-1)-product used here the derivative term needs ell+3; this
    # is the choice for which G-_{-1/2} z = p_1 psi-_{-1/2} z and all
    # brackets close
    W = Lin([(ell + 2, L), (-1, aa), (ell + 3, Deriv(a))])
    raw = NOP(W, pm)
    Gm = Lin([(2 / (ell + 2), raw)])
    T = Lin([(1, L), (HALF, NOP(g, g)), (1 / (2 * kappa), NOP(X, X)), (1, Deriv(a))])
    return N2Fields(T, J, pp, Gm, g, a, W, raw)


N2_NAMES = ("T", "J", "Gplus", "Gminus")
_ALG_NAME = {"T": "T", "J": "J", "Gplus": "G+", "Gminus": "G-"}
_FROM_ALG = {v: k for k, v in _ALG_NAME.items()}


@dataclass(frozen=True)
class N2ModeOp:
    which: str
    index: Fraction
    indexing: str = "freefield"

    def __post_init__(self):
        if self.which not in N2_NAMES:
            raise DomainError(f"unknown N=2 generator {self.which!r}")
        object.__setattr__(self, "index", Q(self.index))
        if self.indexing not in ("freefield", "standard"):
            raise DomainError(f"unknown indexing {self.indexing!r}")
        half = self.which in ("Gplus", "Gminus")
        if (self.index.denominator == 2) != half or self.index.denominator > 2:
            raise DomainError(f"{self.which}_{fmt(self.index)} violates the moding")

    def freefield_index(self) -> Fraction:
        if self.indexing == "freefield":
            return self.index
        if self.which == "Gplus":
            return self.index + 1
        if self.which == "Gminus":
            return self.index - 1
        return self.index

    def __str__(self) -> str:
        return f"{self.which}_{{{fmt(self.index)}}}"


@dataclass
class FFVector:
    coefficients: Dict[Key, Fraction]
    base: Tuple[Fraction, Fraction, Fraction]
    virasoro_factor: str = "verma"

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other):
        return (isinstance(other, FFVector) and self.base == other.base
                and self.virasoro_factor == other.virasoro_factor
                and self.coefficients == other.coefficients)

    def scaled(self, c: RationalLike) -> "FFVector":
        return FFVector(vscale(self.coefficients, Q(c)), self.base, self.virasoro_factor)

    def to_json(self) -> list:
        out = []
        for (A, C, B, Bt), x in sorted(self.coefficients.items(), key=repr):
            out.append({"L": list(A), "X": list(C), "psi+": [fmt(b) for b in B],
                        "psi-": [fmt(b) for b in Bt], "coeff": fmt(x)})
        return out


_CONTEXTS: Dict[tuple, Tuple[FreeFieldModule, ModeEngine]] = {}


def context(ell: RationalLike, h: RationalLike, lam: RationalLike,
            virasoro_factor: str = "verma") -> Tuple[FreeFieldModule, ModeEngine]:
    """Shared module and mode engine for the given data (memoized)."""
    key = (Q(ell), Q(h), Q(lam), virasoro_factor)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        mod = FreeFieldModule(*key)
        ctx = _CONTEXTS.setdefault(key, (mod, ModeEngine(mod)))
    return ctx


def top_vector(ell, h, lam, virasoro_factor: str = "verma") -> FFVector:
    """z = w (x) |0> (x) |lambda>."""
    return FFVector({TOP: Fraction(1)}, (Q(ell), Q(h), Q(lam)), virasoro_factor)


def monomial(ell, h, lam, L=(), X=(), psi_plus=(), psi_minus=(),
             virasoro_factor: str = "verma", coeff: RationalLike = 1) -> FFVector:
    """The vector L_{-A} X_{-C} psi+_{-B} psi-_{-Bt} z, with sorting signs applied."""
    mod, _ = context(ell, h, lam, virasoro_factor)
    v: Vector = {TOP: Q(coeff)}
    ops = [("L", -Fraction(i)) for i in L] + [("X", -Fraction(i)) for i in X]
    ops += [("psi+", -Q(b)) for b in psi_plus] + [("psi-", -Q(b)) for b in psi_minus]
    for gen, n in reversed(ops):
        out: Vector = {}
        for k, x in v.items():
            iadd(out, mod.act_basis(gen, n, k), x)
        v = out
    if virasoro_factor == "simple":
        v = _reduce(mod, v)
    return FFVector(v, mod.base, virasoro_factor)


def _reduce(mod: FreeFieldModule, v: Vector) -> Vector:
    out: Vector = {}
    for (A, C, B, Bt), x in v.items():
        for a, y in mod.vir.reduce({A: Fraction(1)}).items():
            iadd(out, {(a, C, B, Bt): y}, x)
    return out


def _field_of(which: str, ell: Fraction) -> Field:
    f = n2_fields(ell)
    return {"T": f.T, "J": f.J, "Gplus": f.Gplus, "Gminus": f.Gminus}[which]


def ff_apply(op: N2ModeOp, v: FFVector) -> FFVector:
    """Exact action of an N=2 mode on a free-field vector."""
    ell, h, lam = v.base
    _, eng = context(ell, h, lam, v.virasoro_factor)
    out = eng.mode(_field_of(op.which, ell), op.freefield_index(), v.coefficients)
    return FFVector(out, v.base, v.virasoro_factor)


def ff_apply_word(ops: Sequence[N2ModeOp], v: FFVector) -> FFVector:
    """Apply ops[0] ops[1] ... ops[-1] (rightmost first)."""
    for op in reversed(list(ops)):
        v = ff_apply(op, v)
        if v.is_zero():
            break
    return v


# ---------------------------------------------------------------------------
# checks

@dataclass
class RelationReport:
    checked: int
    mismatches: List[dict]
    central_charge: Fraction

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"checked": self.checked, "mismatches": self.mismatches,
                "central_charge": fmt(self.central_charge)}


def _modes(which: str, bound: Fraction) -> List[Fraction]:
    half = which in ("Gplus", "Gminus")
    start = -bound
    if half and (start - HALF).denominator != 1:
        start = Fraction(int(start)) - HALF if start < 0 else HALF
    if not half and start.denominator != 1:
        start = Fraction(-(int(-start)))
    while half and (start - HALF).denominator != 1:
        start += HALF
    out, m = [], start
    while m <= bound:
        out.append(m)
        m += 1
    return [m for m in out if abs(m) <= bound]


def verify_relations(ell: RationalLike, h: RationalLike, lam: RationalLike,
                     level_max: RationalLike, virasoro_factor: str = "verma",
                     pairs: Optional[Iterable[Tuple[str, str]]] = None) -> RelationReport:
    """Compare every N=2 bracket [x_m, y_n] (standard indexing, |m|,|n| <= level_max)
    with the commutator of the realized actions on all basis vectors of
    free-field depth <= level_max."""
    ell, h, lam, level_max = Q(ell), Q(h), Q(lam), Q(level_max)
    mod, eng = context(ell, h, lam, virasoro_factor)
    c = n2_central_charge(ell)
    alg = n2_algebra(c)
    states: List[Key] = []
    d = Fraction(0)
    while d <= level_max:
        states.extend(mod.basis(d))
        d += HALF
    if pairs is None:
        pairs = [(x, y) for i, x in enumerate(N2_NAMES) for y in N2_NAMES[i:]]

    def act(which: str, m: Fraction, vec: Vector) -> Vector:
        op = N2ModeOp(which, m, "standard")
        return eng.mode(_field_of(which, ell), op.freefield_index(), vec)

    checked = 0
    mismatches = []
    for x, y in pairs:
        px = 1 if x in ("Gplus", "Gminus") else 0
        py = 1 if y in ("Gplus", "Gminus") else 0
        sign = -1 if (px and py) else 1
        for m in _modes(x, level_max):
            for n in _modes(y, level_max):
                modes, central = alg.commutator((_ALG_NAME[x], m), (_ALG_NAME[y], n))
                for key in states:
                    v = {key: Fraction(1)}
                    lhs = act(x, m, act(y, n, v))
                    iadd(lhs, act(y, n, act(x, m, v)), Fraction(-sign))
                    rhs: Vector = {key: central} if central else {}
                    for (gname, k), coef in modes.items():
                        iadd(rhs, act(_FROM_ALG[gname], k, v), coef)
                    checked += 1
                    if lhs != rhs:
                        mismatches.append({"bracket": f"[{x}_{fmt(m)}, {y}_{fmt(n)}]",
                                           "state": repr(key)})
    return RelationReport(checked, mismatches, c)


def ladder(b: RationalLike) -> List[Fraction]:
    """The descending half-integer ladder b, b-1, ..., 1/2."""
    b = Q(b)
    if b < HALF or (b - HALF).denominator != 1:
        raise DomainError("a ladder top must be a positive half-odd integer")
    return [b - i for i in range(int(b - HALF) + 1)]


def gminus_factor_check(ell: RationalLike, h: RationalLike, lam: RationalLike,
                        D: Sequence[RationalLike]) -> bool:
    """Check :W psi-:_{-b} ... :W psi-:_{-1/2} z == prod_r p_r * psi-_{-b} ... psi-_{-1/2} z.

    Freefield indexing; :W psi-: is G- rescaled by (ell+2)/2.
    """
    D = [Q(x) for x in D]
    if not D or D != ladder(D[0]):
        raise DomainError("D must be a full ladder b, b-1, ..., 1/2")
    z = top_vector(ell, h, lam)
    _, eng = context(ell, h, lam)
    raw = n2_fields(Q(ell)).Gminus_raw
    vec = z.coefficients
    for d in reversed(D):
        vec = eng.mode(raw, -d, vec)
    lhs = FFVector(vec, z.base)
    coeff = Fraction(1)
    for r in range(1, len(D) + 1):
        coeff *= p_factor(r, ell, h, lam)
    rhs = monomial(ell, h, lam, psi_minus=D, coeff=coeff) if coeff else FFVector({}, z.base)
    return lhs.coefficients == rhs.coefficients


def _creation_ops(depth_step: Fraction) -> List[N2ModeOp]:
    """Freefield-indexed N=2 modes lowering the index by exactly depth_step."""
    out = []
    if depth_step.denominator == 1:
        out += [N2ModeOp("T", -depth_step), N2ModeOp("J", -depth_step)]
    else:
        out += [N2ModeOp("Gplus", -depth_step), N2ModeOp("Gminus", -depth_step)]
    return out


def generation_check(ell: RationalLike, h: RationalLike, lam: RationalLike,
                     level_max: RationalLike) -> List[Tuple[Fraction, int, int]]:
    """Per free-field depth: (depth, dim of U(N=2) z at that depth, dim of the full space)."""
    level_max = Q(level_max)
    mod, eng = context(ell, h, lam, "verma")
    ell = Q(ell)
    gen: Dict[Fraction, EchelonSpace] = {Fraction(0): EchelonSpace()}
    gen[Fraction(0)].add({TOP: Fraction(1)})
    out = [(Fraction(0), 1, len(mod.basis(0)))]
    d = HALF
    while d <= level_max:
        sp = EchelonSpace()
        j = HALF
        while j <= d:
            for op in _creation_ops(j):
                f = _field_of(op.which, ell)
                for row in gen[d - j].rows.values():
                    sp.add(eng.mode(f, op.index, row))
            j += HALF
        gen[d] = sp
        out.append((d, sp.rank, len(mod.basis(d))))
        d += HALF
    return out


# ---------------------------------------------------------------------------
# top-level data

def zero_mode_eigenvalue(op_which: str, v: FFVector) -> Fraction:
    """Eigenvalue of T_0 or J_0 on v; raises if v is not an eigenvector."""
    w = ff_apply(N2ModeOp(op_which, 0), v)
    (key, x), *_ = v.coefficients.items()
    val = w.coefficients.get(key, Fraction(0)) / x
    if w.coefficients != vscale(v.coefficients, val):
        raise DomainError(f"vector is not a {op_which}_0 eigenvector")
    return val


@dataclass
class TopData:
    delta: Fraction
    mu: Fraction
    lam_tau: Fraction
    delta_tau: Fraction
    mu_tau: Fraction
    z_weight: Fraction
    z_charge: Fraction

    @property
    def delta_symmetric(self) -> bool:
        return self.delta == self.delta_tau

    @property
    def mu_sum(self) -> Fraction:
        return self.mu + self.mu_tau

    def to_json(self) -> dict:
        return {"delta": fmt(self.delta), "mu": fmt(self.mu), "lambda_tau": fmt(self.lam_tau),
                "delta_tau": fmt(self.delta_tau), "mu_tau": fmt(self.mu_tau),
                "delta_symmetric": self.delta_symmetric, "mu_sum": fmt(self.mu_sum),
                "z_weight": fmt(self.z_weight), "z_charge": fmt(self.z_charge)}


def top_state(ell, h, lam, virasoro_factor: str = "verma") -> FFVector:
    """psi-_{-1/2} z, the state of lowest T_0 eigenvalue."""
    return monomial(ell, h, lam, psi_minus=[HALF], virasoro_factor=virasoro_factor)


def _top_eigen(ell, h, lam) -> Tuple[Fraction, Fraction]:
    t = top_state(ell, h, lam)
    return zero_mode_eigenvalue("T", t), zero_mode_eigenvalue("J", t)


def top_data(ell: RationalLike, h: RationalLike, lam: RationalLike) -> TopData:
    ell, h, lam = Q(ell), Q(h), Q(lam)
    _check_ell(ell)
    lt = lambda_tau(ell, lam)
    d, m = _top_eigen(ell, h, lam)
    dt, mt = _top_eigen(ell, h, lt)
    z = top_vector(ell, h, lam)
    return TopData(d, m, lt, dt, mt, zero_mode_eigenvalue("T", z), zero_mode_eigenvalue("J", z))


# ---------------------------------------------------------------------------
# C1 subspaces

_WEIGHT = {"T": Fraction(2), "J": Fraction(1), "Gplus": Fraction(3, 2), "Gminus": Fraction(3, 2)}
_CHARGE = {"T": 0, "J": 0, "Gplus": 1, "Gminus": -1}


def vacuum_words(max_weight: RationalLike) -> List[Tuple[Fraction, int, Tuple[Tuple[str, Fraction], ...]]]:
    """PBW words of standard-indexed N=2 creation modes on the vacuum,
    with T-weight in (0, max_weight]; returns (weight, charge, word).

    A word is a tuple of (generator, mode) in a fixed PBW order; odd modes
    appear at most once.
    """
    max_weight = Q(max_weight)
    letters = []
    for g in N2_NAMES:
        j = _WEIGHT[g]
        while j <= max_weight:
            letters.append((g, -j))
            j += 1
    out = []

    def rec(start: int, weight: Fraction, charge: int, word: tuple):
        if word:
            out.append((weight, charge, word))
        for i in range(start, len(letters)):
            g, m = letters[i]
            w2 = weight - m
            if w2 > max_weight:
                continue
            odd = g in ("Gplus", "Gminus")
            rec(i + 1 if odd else i, w2, charge + _CHARGE[g], word + ((g, m),))

    rec(0, Fraction(0), 0, ())
    return out


def word_field(word: Sequence[Tuple[str, Fraction]], ell: Fraction) -> Field:
    """Field of the vacuum state word|0>, via the (-p)-product formula."""
    letters = []
    for g, m in word:
        p = -m - _WEIGHT[g] + 1
        letters.append((_field_of(g, ell), int(p)))
    return state_field(letters)


def t_weight_offset(key: Key) -> Fraction:
    """T_0 eigenvalue of a monomial minus that of z."""
    return FreeFieldModule.charge(key) + sum(key[0]) + sum(key[1]) + sum(key[2], Fraction(0)) + sum(key[3], Fraction(0))


def sector_basis(mod: FreeFieldModule, offset: Fraction, charge: int) -> List[Key]:
    """Monomials with T-weight offset ``offset`` and fermion charge ``charge``."""
    depth = offset - charge
    if depth < 0:
        return []
    return [k for k in mod.basis(depth) if FreeFieldModule.charge(k) == charge]


def c1_subspace(mod: FreeFieldModule, eng: ModeEngine, offset: Fraction, charge: int) -> EchelonSpace:
    """C1 at the given (T-weight offset, charge) sector: span of u_{(-1)} w."""
    sp = EchelonSpace()
    lowest = -HALF            # minimal T-weight offset of the free-field space
    for wt, ch, word in vacuum_words(offset - lowest):
        f = word_field(word, mod.ell)
        for w in sector_basis(mod, offset - wt, charge - ch):
            v = eng.mode(f, -f.weight, {w: Fraction(1)})
            if mod.virasoro_factor == "simple":
                v = _reduce(mod, v)
            sp.add(v)
    return sp


def homogeneous_sector(mod: FreeFieldModule, v: Vector) -> Tuple[Fraction, int]:
    sectors = {(t_weight_offset(k), FreeFieldModule.charge(k)) for k in v}
    if len(sectors) != 1:
        raise DomainError("target must be homogeneous in conformal weight and J_0-charge")
    return sectors.pop()


def c1_membership(ell: RationalLike, h: RationalLike, lam: RationalLike,
                  virasoro_factor: str, target: FFVector) -> bool:
    mod, eng = context(ell, h, lam, virasoro_factor)
    if target.is_zero():
        return True
    offset, charge = homogeneous_sector(mod, target.coefficients)
    return c1_subspace(mod, eng, offset, charge).contains(target.coefficients)


def c1_quotient_table(ell: RationalLike, h: RationalLike, lam: RationalLike,
                      virasoro_factor: str, offset_max: RationalLike
                      ) -> List[Tuple[Fraction, int, int, int]]:
    """Rows (T-weight offset, charge, dim Q, dim C1(Q)) for every nonzero sector
    with offset in [-1/2, offset_max]."""
    offset_max = Q(offset_max)
    mod, eng = context(ell, h, lam, virasoro_factor)
    rows = []
    off = -HALF
    while off <= offset_max:
        # charge q needs fermion depth off - q >= q^2/2
        for ch in _charges(off):
            full = len(sector_basis(mod, off, ch))
            if full:
                rows.append((off, ch, full, c1_subspace(mod, eng, off, ch).rank))
        off += HALF
    return rows


def _charges(offset: Fraction) -> List[int]:
    out = []
    q = 0
    while offset - q >= Fraction(q * q, 2):
        out.append(q)
        q += 1
    q = -1
    while offset - q >= Fraction(q * q, 2):
        out.append(q)
        q -= 1
    return sorted(out)

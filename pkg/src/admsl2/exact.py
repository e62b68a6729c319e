"""
Exact rationals and truncated formal series.

A :class:`PuiseuxSeries` is a finite map ``exponent -> coefficient`` (both
:class:`fractions.Fraction`) together with an absolute precision ``prec``:
every term with exponent ``>= prec`` is unknown.  ``prec = None`` means the
series is known exactly (a polynomial).  The relative truncation order of
the series is ``prec - valuation``.

A :class:`TwoVarCharacter` stores, for each z-exponent in a window, the
q-series multiplying that power of z.  All z-exponents share one class
modulo 2.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

RationalLike = Union[int, str, Fraction]


class SeriesError(ValueError):
    """Incompatible truncations, windows or exponent lattices."""


def Q(x: RationalLike) -> Fraction:
    """Parse an exact rational: ints, Fractions or strings like ``"-3/2"``.

    Floats are rejected, nothing in this package is approximate.

    >>> Q("6/4")
    Fraction(3, 2)
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"not an exact rational: {x!r}")


def fmt(x: Fraction) -> str:
    """Render as ``p/q`` (or ``p`` when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# Exponent denominators are checked against a bound configured per
# computation (24*4*u*v for each working level).  None means unchecked.
_BOUND: contextvars.ContextVar[Optional[int]] = contextvars.ContextVar(
    "admsl2_denominator_bound", default=None)


def level_bound(u: int, v: int) -> int:
    return 24 * 4 * u * v


@contextlib.contextmanager
def denominator_bound(*bounds: int):
    """Within the block, every q-exponent must have denominator dividing
    the lcm of ``bounds`` (and of any enclosing bound)."""
    old = _BOUND.get()
    b = 1
    for x in bounds:
        b = b * x // math.gcd(b, x)
    if old is not None:
        b = b * old // math.gcd(b, old)
    token = _BOUND.set(b)
    try:
        yield b
    finally:
        _BOUND.reset(token)


def _check_exponent(e: Fraction) -> None:
    b = _BOUND.get()
    if b is not None and b % e.denominator:
        raise SeriesError(
            f"exponent {fmt(e)} has denominator outside the configured bound {b}")


def _min_prec(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PuiseuxSeries:
    """Truncated series in q with rational exponents and coefficients."""

    __slots__ = ("_terms", "prec")

    def __init__(self, terms: Optional[Dict] = None,
                 prec: Optional[RationalLike] = None):
        self.prec = None if prec is None else Q(prec)
        clean = {}
        for e, c in (terms or {}).items():
            e, c = Q(e), Q(c)
            if c == 0:
                continue
            if self.prec is not None and e >= self.prec:
                continue
            _check_exponent(e)
            clean[e] = clean.get(e, 0) + c
        self._terms = {e: c for e, c in clean.items() if c != 0}
        if self.prec is not None:
            _check_exponent(self.prec)

    # -- constructors -------------------------------------------------
    @classmethod
    def monomial(cls, exponent: RationalLike = 0, coeff: RationalLike = 1,
                 prec: Optional[RationalLike] = None) -> "PuiseuxSeries":
        return cls({Q(exponent): Q(coeff)}, prec)

    @classmethod
    def zero(cls, prec: Optional[RationalLike] = None) -> "PuiseuxSeries":
        return cls({}, prec)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Dict[Fraction, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Fraction, Fraction]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, e: RationalLike) -> Fraction:
        e = Q(e)
        if self.prec is not None and e >= self.prec:
            raise SeriesError(f"coefficient of q^{fmt(e)} is beyond the truncation")
        return self._terms.get(e, Fraction(0))

    def valuation(self) -> Optional[Fraction]:
        return min(self._terms) if self._terms else None

    @property
    def truncation_order(self) -> Optional[Fraction]:
        """Precision measured from the leading exponent (None if exact)."""
        if self.prec is None:
            return None
        v = self.valuation()
        return self.prec - (v if v is not None else self.prec)

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "PuiseuxSeries":
        if isinstance(other, PuiseuxSeries):
            return other
        return PuiseuxSeries({0: Q(other)})

    def __add__(self, other) -> "PuiseuxSeries":
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return PuiseuxSeries(terms, _min_prec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries({e: -c for e, c in self._terms.items()}, self.prec)

    def __sub__(self, other) -> "PuiseuxSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PuiseuxSeries":
        return self._coerce(other) - self

    def scale(self, c: RationalLike) -> "PuiseuxSeries":
        c = Q(c)
        return PuiseuxSeries({e: c * x for e, x in self._terms.items()}, self.prec)

    def shift(self, e: RationalLike) -> "PuiseuxSeries":
        """Multiply by q^e."""
        e = Q(e)
        return PuiseuxSeries({x + e: c for x, c in self._terms.items()},
                             None if self.prec is None else self.prec + e)

    def __mul__(self, other) -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return self.scale(other)
        # an exact zero annihilates everything, truncations included
        if (not self._terms and self.prec is None) or (not other._terms and other.prec is None):
            return PuiseuxSeries({})
        # lowest exponent that could carry a term of each factor
        la = self.valuation() if self._terms else self.prec
        lb = other.valuation() if other._terms else other.prec
        prec = None
        if self.prec is not None:
            prec = self.prec + lb
        if other.prec is not None:
            prec = _min_prec(prec, other.prec + la)
        terms: Dict[Fraction, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = ea + eb
                if prec is not None and e >= prec:
                    continue
                terms[e] = terms.get(e, 0) + ca * cb
        return PuiseuxSeries(terms, prec)

    def __rmul__(self, other) -> "PuiseuxSeries":
        return self.scale(other)

    def truncate(self, prec: RationalLike) -> "PuiseuxSeries":
        prec = Q(prec)
        if self.prec is not None and prec > self.prec:
            raise SeriesError("cannot raise the precision of a truncated series")
        return PuiseuxSeries(self._terms, prec)

    def truncate_relative(self, order: RationalLike) -> "PuiseuxSeries":
        v = self.valuation()
        if v is None:
            return self
        return self.truncate(v + Q(order))

    def inverse(self, order: Optional[RationalLike] = None) -> "PuiseuxSeries":
        """Multiplicative inverse by coefficient recursion.

        The relative order of the result equals that of ``self`` (or
        ``order`` when ``self`` is exact).
        """
        v = self.valuation()
        if v is None:
            raise SeriesError("cannot invert a series with no known nonzero term")
        rel = self.truncation_order if self.prec is not None else None
        if order is not None:
            rel = Q(order) if rel is None else min(rel, Q(order))
        if rel is None:
            raise SeriesError("inverting an exact series needs an explicit order")
        c0 = self._terms[v]
        # normalized tail 1 + sum a_e q^e on the lattice (1/d)Z
        d = 1
        for e in self._terms:
            d = d * (e - v).denominator // math.gcd(d, (e - v).denominator)
        steps = math.ceil(rel * d)
        a = [Fraction(0)] * max(steps, 1)
        for e, c in self._terms.items():
            i = int((e - v) * d)
            if i < steps:
                a[i] = c / c0
        b = [Fraction(0)] * max(steps, 1)
        if steps > 0:
            b[0] = Fraction(1)
        for n in range(1, steps):
            s = Fraction(0)
            for i in range(1, n + 1):
                if a[i]:
                    s += a[i] * b[n - i]
            b[n] = -s
        terms = {Fraction(n, d) - v: bn / c0 for n, bn in enumerate(b[:steps]) if bn}
        return PuiseuxSeries(terms, -v + rel)

    # -- comparison / io ----------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms and self.prec == other.prec

    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        """Equality of all coefficients known to both series."""
        d = self - other
        return d.is_zero()

    def __hash__(self):
        return hash((tuple(sorted(self._terms.items())), self.prec))

    def to_json(self) -> list:
        return [[fmt(e), fmt(c)] for e, c in self.items()]

    @classmethod
    def from_json(cls, data: Iterable, prec: Optional[RationalLike] = None
                  ) -> "PuiseuxSeries":
        return cls({Q(e): Q(c) for e, c in data}, prec)

    def __repr__(self) -> str:
        if not self._terms:
            body = "0"
        else:
            body = " + ".join(f"({fmt(c)})q^{fmt(e)}" for e, c in self.items())
        if self.prec is not None:
            body += f" + O(q^{fmt(self.prec)})"
        return body


def partition_numbers(n_max: int) -> list:
    """p(0..n_max) by the standard coin-counting recursion."""
    p = [0] * (n_max + 1)
    p[0] = 1
    for part in range(1, n_max + 1):
        for i in range(part, n_max + 1):
            p[i] += p[i - part]
    return p


def euler_product(order: int) -> list:
    """Coefficients of prod_{n>=1} (1 - q^n) below q^order."""
    c = [0] * order
    if order == 0:
        return c
    c[0] = 1
    for n in range(1, order):
        for i in range(order - 1, n - 1, -1):
            c[i] -= c[i - n]
    return c


def eta(q_order: RationalLike = 8) -> PuiseuxSeries:
    """Dedekind eta q^{1/24} prod (1 - q^n), relative order ``q_order``."""
    q_order = Q(q_order)
    if q_order <= 0:
        raise SeriesError("q_order must be positive")
    coeffs = euler_product(math.ceil(q_order))
    base = Fraction(1, 24)
    return PuiseuxSeries({base + n: c for n, c in enumerate(coeffs) if c},
                         base + q_order)


def eta_inverse(q_order: RationalLike = 8) -> PuiseuxSeries:
    return eta(q_order).inverse()


Window = Tuple[Fraction, Fraction]


class TwoVarCharacter:
    """Formal series sum_mu z^mu f_mu(q), mu in one class mod 2.

    ``window = (lo, hi)``: the coefficient of every z-exponent in
    ``[lo, hi]`` of the right class is known (absent means zero).
    ``complete = True`` additionally asserts that no z-exponent outside the
    window carries a term below the q-precision (finite z-support).
    """

    __slots__ = ("coeffs", "window", "complete", "coset")

    def __init__(self, coeffs: Dict, window: Tuple[RationalLike, RationalLike],
                 complete: bool = False, coset: Optional[RationalLike] = None):
        lo, hi = Q(window[0]), Q(window[1])
        if lo > hi:
            raise SeriesError("empty z-window")
        self.window: Window = (lo, hi)
        self.complete = complete
        clean = {}
        for mu, f in coeffs.items():
            mu = Q(mu)
            if not isinstance(f, PuiseuxSeries):
                f = PuiseuxSeries({0: Q(f)})
            if not (lo <= mu <= hi) and not complete:
                continue
            clean[mu] = f
        classes = {mu % 2 for mu in clean}
        if coset is not None:
            classes.add(Q(coset) % 2)
        if len(classes) > 1:
            raise SeriesError("z-exponents must lie in a single class mod 2")
        self.coset = classes.pop() if classes else None
        self.coeffs: Dict[Fraction, PuiseuxSeries] = clean

    def __getitem__(self, mu: RationalLike) -> PuiseuxSeries:
        mu = Q(mu)
        if not self.complete and not (self.window[0] <= mu <= self.window[1]):
            raise SeriesError(f"z^{fmt(mu)} lies outside the window")
        return self.coeffs.get(mu, PuiseuxSeries.zero())

    def exponents(self) -> list:
        return sorted(self.coeffs)

    def support_points(self) -> list:
        """All z-exponents of the class inside the window."""
        if self.coset is None:
            return []
        lo, hi = self.window
        start = lo + ((self.coset - lo) % 2)
        out = []
        x = start
        while x <= hi:
            out.append(x)
            x += 2
        return out

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.coeffs.values())

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "TwoVarCharacter") -> "TwoVarCharacter":
        if self.coset is not None and other.coset is not None and self.coset != other.coset:
            raise SeriesError("cannot add characters supported on different classes mod 2")
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        complete = self.complete and other.complete
        if complete:
            lo, hi = min(self.window[0], other.window[0]), max(self.window[1], other.window[1])
        keys = set(self.coeffs) | set(other.coeffs)
        out = {}
        for mu in keys:
            if not complete and not (lo <= mu <= hi):
                continue
            a = self.coeffs.get(mu)
            b = other.coeffs.get(mu)
            out[mu] = a + b if (a is not None and b is not None) else (a if a is not None else b)
        coset = self.coset if self.coset is not None else other.coset
        return TwoVarCharacter(out, (lo, hi), complete, coset)

    def __neg__(self) -> "TwoVarCharacter":
        return TwoVarCharacter({m: -f for m, f in self.coeffs.items()},
                               self.window, self.complete, self.coset)

    def __sub__(self, other: "TwoVarCharacter") -> "TwoVarCharacter":
        return self + (-other)

    def mul_series(self, f: PuiseuxSeries) -> "TwoVarCharacter":
        """Multiply by a z-independent series (acts on each z-coefficient)."""
        return TwoVarCharacter({m: g * f for m, g in self.coeffs.items()},
                               self.window, self.complete, self.coset)

    def mul_z(self, mu: RationalLike) -> "TwoVarCharacter":
        """Multiply by z^mu."""
        mu = Q(mu)
        return TwoVarCharacter({m + mu: g for m, g in self.coeffs.items()},
                               (self.window[0] + mu, self.window[1] + mu),
                               self.complete,
                               None if self.coset is None else self.coset + mu)

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self.mul_series(other)
        if not isinstance(other, TwoVarCharacter):
            return self.mul_series(PuiseuxSeries({0: Q(other)}))
        a, b = self, other
        if not b.complete:
            a, b = b, a
        if not b.complete:
            raise SeriesError("a product needs one factor with finite z-support")
        if not b.coeffs:
            return TwoVarCharacter({}, a.window, a.complete)
        jmin, jmax = min(b.coeffs), max(b.coeffs)
        if a.complete:
            lo, hi = a.window[0] + jmin, a.window[1] + jmax
        else:
            lo, hi = a.window[0] + jmax, a.window[1] + jmin
            if lo > hi:
                raise SeriesError("z-window too narrow for this product")
        out: Dict[Fraction, PuiseuxSeries] = {}
        for mu, f in a.coeffs.items():
            for j, g in b.coeffs.items():
                m = mu + j
                if not a.complete and not (lo <= m <= hi):
                    continue
                p = f * g
                out[m] = out[m] + p if m in out else p
        coset = None
        if a.coset is not None and b.coset is not None:
            coset = a.coset + b.coset
        return TwoVarCharacter(out, (lo, hi), a.complete, coset)

    __rmul__ = __mul__

    def restrict(self, window: Tuple[RationalLike, RationalLike]) -> "TwoVarCharacter":
        lo, hi = Q(window[0]), Q(window[1])
        if not self.complete and (lo < self.window[0] or hi > self.window[1]):
            raise SeriesError("restriction window exceeds the known window")
        return TwoVarCharacter({m: f for m, f in self.coeffs.items() if lo <= m <= hi},
                               (lo, hi), False, self.coset)

    def truncate_relative(self, order: RationalLike) -> "TwoVarCharacter":
        return TwoVarCharacter({m: f.truncate_relative(order) for m, f in self.coeffs.items()},
                               self.window, self.complete, self.coset)

    def substitute_flow(self, ell: int, k: RationalLike) -> "TwoVarCharacter":
        """z^{k ell} q^{k ell^2/4} F(z q^{ell/2}, q)."""
        k = Q(k)
        ell = int(ell)
        half = Fraction(ell, 2)
        pre_z = k * ell
        pre_q = k * ell * ell / 4
        out = {m + pre_z: f.shift(half * m + pre_q) for m, f in self.coeffs.items()}
        return TwoVarCharacter(out, (self.window[0] + pre_z, self.window[1] + pre_z),
                               self.complete,
                               None if self.coset is None else self.coset + pre_z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwoVarCharacter):
            return NotImplemented
        return (self.window == other.window and
                {m: f for m, f in self.coeffs.items() if f} ==
                {m: f for m, f in other.coeffs.items() if f})

    def to_json(self) -> dict:
        return {
            "z_window": [fmt(self.window[0]), fmt(self.window[1])],
            "terms": [[fmt(m), self.coeffs[m].to_json(),
                       None if self.coeffs[m].prec is None else fmt(self.coeffs[m].prec)]
                      for m in sorted(self.coeffs)],
        }

    def __repr__(self) -> str:
        parts = [f"z^{fmt(m)}*[{self.coeffs[m]!r}]" for m in sorted(self.coeffs)]
        return "TwoVarCharacter(" + "; ".join(parts) + f"; window={fmt(self.window[0])}..{fmt(self.window[1])})"


def formal_delta(z_window: Tuple[RationalLike, RationalLike],
                 coset: RationalLike = 0) -> TwoVarCharacter:
    """delta(z^2) = sum_n z^{2n} (shifted to ``coset`` + 2Z) over the window."""
    lo, hi = Q(z_window[0]), Q(z_window[1])
    if lo > hi:
        raise SeriesError("empty z-window")
    c = Q(coset) % 2
    start = lo + ((c - lo) % 2)
    coeffs = {}
    x = start
    while x <= hi:
        coeffs[x] = PuiseuxSeries({0: 1})
        x += 2
    return TwoVarCharacter(coeffs, (lo, hi), False, c)

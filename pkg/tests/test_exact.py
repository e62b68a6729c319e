from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from admsl2.exact import (PuiseuxSeries, Q, SeriesError, TwoVarCharacter, denominator_bound,
                          eta, eta_inverse, fmt, partition_numbers)
from admsl2.linalg import EchelonSpace, determinant, matrix_rank, nullspace, solve_square

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
exponents = st.fractions(min_value=-3, max_value=5, max_denominator=6)


@st.composite
def series(draw):
    terms = draw(st.dictionaries(exponents, rationals, max_size=5))
    prec = draw(st.one_of(st.none(), st.fractions(min_value=6, max_value=9, max_denominator=6)))
    return PuiseuxSeries(terms, prec)


def test_parse_and_format():
    assert Q("6/4") == F(3, 2)
    assert Q(" -7 ") == -7
    assert fmt(F(-3, 2)) == "-3/2" and fmt(F(4)) == "4"
    with pytest.raises(ValueError):
        Q("0.5")
    with pytest.raises(TypeError):
        Q(0.5)
    with pytest.raises(TypeError):
        Q(True)


def test_eta_pentagonal_and_partitions():
    e = eta(12)
    expected = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1}
    for n in range(12):
        assert e.coefficient(F(1, 24) + n) == expected.get(n, 0)
    inv = eta_inverse(10)
    p = partition_numbers(9)
    for n in range(10):
        assert inv.coefficient(F(-1, 24) + n) == p[n]
    assert inv.prec == F(-1, 24) + 10


@given(series(), series())
def test_product_commutes(a, b):
    assert a * b == b * a


@given(series(), series(), series())
@settings(max_examples=40)
def test_product_associates(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(series(), series())
def test_sum_precision_is_minimum(a, b):
    s = a + b
    if a.prec is None or b.prec is None:
        assert s.prec == (a.prec if b.prec is None else b.prec)
    else:
        assert s.prec == min(a.prec, b.prec)


@given(series())
def test_inverse(a):
    if a.valuation() is None:
        with pytest.raises(SeriesError):
            a.inverse(3)
        return
    inv = a.inverse(4)
    one = (a * inv)
    assert one.coefficient(0) == 1
    assert all(c == 0 or e == 0 for e, c in one.items())


def test_truncation_rules():
    f = PuiseuxSeries({0: 1, 1: 2, 3: 5}, 4)
    assert f.truncate(2).terms == {F(0): 1, F(1): 2}
    with pytest.raises(SeriesError):
        f.truncate(5)
    assert f.truncation_order == 4


def test_denominator_bound():
    with denominator_bound(24):
        PuiseuxSeries({F(1, 8): 1})
        with pytest.raises(SeriesError):
            PuiseuxSeries({F(1, 5): 1})
    PuiseuxSeries({F(1, 5): 1})


def test_two_var_character_classes():
    a = TwoVarCharacter({F(1, 3): PuiseuxSeries({0: 1}, 2)}, (-2, 2))
    b = TwoVarCharacter({F(7, 3): PuiseuxSeries({0: 2}, 2)}, (-2, 4))
    s = a + b
    assert s.window == (F(-2), F(2))
    with pytest.raises(SeriesError):
        a + TwoVarCharacter({F(0): PuiseuxSeries({0: 1}, 2)}, (-2, 2))


# -- linear algebra --------------------------------------------------------

small_matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=n, max_size=n),
                       min_size=n, max_size=n))


def _leibniz(m):
    from itertools import permutations
    n, total = len(m), F(0)
    for p in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        term = F(sign)
        for i in range(n):
            term *= m[i][p[i]]
        total += term
    return total


@given(small_matrices)
def test_determinant_matches_leibniz(m):
    assert determinant(m) == _leibniz(m)
    assert (matrix_rank(m) == len(m)) == (determinant(m) != 0)


@given(small_matrices, st.lists(st.fractions(-5, 5, max_denominator=3), min_size=4, max_size=4))
def test_solve_square(m, b):
    if determinant(m) == 0:
        return
    b = b[:len(m)]
    x = solve_square(m, b)
    assert [sum(r[j] * x[j] for j in range(len(m))) for r in m] == b


def test_nullspace_and_echelon():
    cols = [{0: F(1), 1: F(2)}, {0: F(2), 1: F(4)}, {2: F(1)}]
    ker = nullspace(cols)
    assert len(ker) == 1
    v = ker[0]
    for row in range(3):
        assert sum(v.get(i, 0) * cols[i].get(row, 0) for i in range(3)) == 0
    sp = EchelonSpace()
    assert sp.add({"a": F(1), "b": F(1)})
    assert not sp.add({"a": F(2), "b": F(2)})
    assert sp.contains({"a": F(-1), "b": F(-1)})
    assert not sp.contains({"a": F(1)})
    assert sp.rank == 1

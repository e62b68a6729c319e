from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from admsl2.levels import (AdmissibleLevel, DomainError, coset_triple, dual_level, dual_levels,
                           level_from_k, n2_central_charge, ribbon_known, virasoro_c, virasoro_h)
from admsl2.linalg import vadd
from admsl2.modekernel import (Deriv, Gen, ModeEngine, NOP, direct_sum, fermion_algebra,
                               heisenberg_algebra, n2_algebra, virasoro_algebra)
from admsl2.virasoro import verma

coprime_pairs = st.tuples(st.integers(2, 15), st.integers(1, 9)).filter(
    lambda p: __import__("math").gcd(*p) == 1)


def test_level_32():
    lvl = AdmissibleLevel(3, 2)
    assert (lvl.k, lvl.t, lvl.c_vir) == (F(-1, 2), F(3, 2), 0)
    assert dual_levels(lvl).k_w == F(-1, 3)
    assert ribbon_known(lvl)
    tri = coset_triple(lvl)
    assert tri.shifted.pair == (5, 2) and tri.minimal.pair == (5, 3)
    assert tri.k_prime == tri.minimal.k


def test_level_validation():
    with pytest.raises(DomainError):
        AdmissibleLevel(4, 2)
    with pytest.raises(DomainError):
        AdmissibleLevel(1, 3)
    with pytest.raises(DomainError):
        dual_level(-2)
    with pytest.raises(DomainError):
        virasoro_h(0, 1, F(3, 2))


@given(coprime_pairs)
def test_dual_and_coset_relations(p):
    lvl = AdmissibleLevel(*p)
    d = dual_levels(lvl)
    assert (d.ell + 2) * (d.k_w + 1) == 1
    assert level_from_k(lvl.k) == lvl
    assert n2_central_charge(lvl.k) == 3 * lvl.k / (lvl.k + 2)
    assert lvl.c_vir == virasoro_c(lvl.t)
    if not lvl.integral:
        tri = coset_triple(lvl)
        # c(k) + c(1) = c(k+1) + c_vir(k')
        assert lvl.c_sug + 1 == tri.shifted.c_sug + tri.minimal.c_vir


@given(st.fractions(F(1, 9), 10, max_denominator=9), st.integers(1, 5), st.integers(1, 5))
def test_kac_symmetry(t, r, s):
    # h_{r,s}(t) = h_{s,r}(1/t) with the t-convention of the Kac table
    assert virasoro_h(r, s, t) == virasoro_h(s, r, 1 / t)
    assert virasoro_c(t) == virasoro_c(1 / t)


# -- algebras ---------------------------------------------------------------

half = st.integers(-4, 4).map(lambda n: F(2 * n + 1, 2))
integer = st.integers(-4, 4).map(F)


def _jacobi_zero(alg, x, y, z):
    lin, central = alg.jacobi_defect(x, y, z)
    return not lin and central == 0


@given(st.sampled_from(["T", "J", "G+", "G-"]), st.sampled_from(["T", "J", "G+", "G-"]),
       st.sampled_from(["T", "J", "G+", "G-"]), st.data())
def test_n2_jacobi(a, b, c, data):
    alg = n2_algebra(F(3, 7))
    mode = lambda g: data.draw(half if g.startswith("G") else integer)
    assert _jacobi_zero(alg, (a, mode(a)), (b, mode(b)), (c, mode(c)))


@given(integer, integer, integer)
def test_virasoro_jacobi(m, n, p):
    alg = virasoro_algebra(F(-22, 5))
    assert _jacobi_zero(alg, ("L", m), ("L", n), ("L", p))


def test_free_field_brackets():
    alg = direct_sum("ff", heisenberg_algebra(F(3)), fermion_algebra())
    assert alg.commutator(("X", F(2)), ("X", F(-2))) == ({}, F(6))
    assert alg.commutator(("psi+", F(1, 2)), ("psi-", F(-1, 2))) == ({}, F(1))
    assert alg.commutator(("X", F(1)), ("psi+", F(-1, 2))) == ({}, F(0))


# -- field modes on a Verma module ----------------------------------------

def _explicit_LL(V, n, vec):
    """:LL:_n = sum_{k<=-2} L_k L_{n-k} + sum_{k>=-1} L_{n-k} L_k on a finite-level vector."""
    out = {}
    depth = max(sum(p) for p in vec) + abs(n) + 2
    for k in range(-depth - 2, depth + 3):
        if k <= -2:
            w = V.apply_vec(k, V.apply_vec(n - k, vec))
        else:
            w = V.apply_vec(n - k, V.apply_vec(k, vec))
        out = vadd(out, w)
    return out


@pytest.mark.parametrize("n", [-3, -2, 0, 1, 2])
def test_normal_ordered_product_modes(n):
    V = verma(F(1, 2), F(1, 16))
    eng = ModeEngine(V)
    L = Gen("L", 2)
    vec = {(2, 1): F(1), (3,): F(-2)}
    assert eng.mode(NOP(L, L), n, vec) == _explicit_LL(V, n, vec)
    # derivative: (dL)_n = -(n + 2) L_n
    expect = {k: -(n + 2) * c for k, c in V.apply_vec(n, vec).items() if n != -2}
    assert eng.mode(Deriv(L), n, vec) == expect

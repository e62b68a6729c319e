from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from admsl2.levels import DomainError
from admsl2.n2 import (N2ModeOp, c_ell, ff_apply, gminus_factor_check, heisenberg_norm,
                       lambda_tau, monomial, p_factor, p_root, top_data, top_vector,
                       verify_relations)

ells = st.fractions(-6, 6, max_denominator=9).filter(lambda x: x not in (0, -2))
rats = st.fractions(-5, 5, max_denominator=11)


@given(ells, rats)
def test_tau_is_an_involution(ell, lam):
    assert lambda_tau(ell, lambda_tau(ell, lam)) == lam


@given(ells, rats, st.integers(1, 4))
def test_p_root(ell, lam, r):
    assert p_factor(r, ell, p_root(r, ell, lam), lam) == 0


@given(ells)
def test_central_charges(ell):
    assert c_ell(ell) == 1 - 6 * (ell + 1) ** 2 / (ell + 2)
    assert heisenberg_norm(ell) == -8 * (ell + 2) / ell ** 2


def test_bad_ell():
    for ell in (0, -2):
        with pytest.raises(DomainError):
            c_ell(ell)


@given(ells, rats, rats)
@settings(max_examples=30, deadline=None)
def test_top_data_closed_forms(ell, h, lam):
    d = top_data(ell, h, lam)
    assert d.delta == h - F(1, 2) - ell ** 2 * lam ** 2 / (16 * (ell + 2)) - ell * lam / 4
    assert d.mu == -ell * lam / (2 * (ell + 2)) - 1
    assert d.delta_symmetric and d.mu_sum == 0


def test_gplus_is_the_fermion():
    ell, h, lam = F(-1, 2), F(2, 7), F(1, 5)
    z = top_vector(ell, h, lam)
    out = ff_apply(N2ModeOp("Gplus", F(-1, 2)), z)
    assert out == monomial(ell, h, lam, psi_plus=[F(1, 2)])


def test_gminus_on_top():
    ell, h, lam = F(1, 3), F(1, 2), F(1, 7)
    z = top_vector(ell, h, lam)
    out = ff_apply(N2ModeOp("Gminus", F(-1, 2)), z)
    expect = monomial(ell, h, lam, psi_minus=[F(1, 2)], coeff=2 * p_factor(1, ell, h, lam) / (ell + 2))
    assert out == expect


def test_mode_labels():
    assert N2ModeOp("Gplus", F(1, 2), "standard").freefield_index() == F(3, 2)
    assert N2ModeOp("Gminus", F(1, 2), "standard").freefield_index() == F(-1, 2)
    with pytest.raises(DomainError):
        N2ModeOp("Gplus", 1)
    with pytest.raises(DomainError):
        N2ModeOp("T", F(1, 2))


def test_factor_check_needs_ladder():
    with pytest.raises(DomainError):
        gminus_factor_check(F(1, 3), 0, 0, [F(3, 2)])


def test_relations_low_level():
    rep = verify_relations(F(2, 3), F(-1, 4), F(3, 5), 1)
    assert rep.ok and rep.checked > 0
    assert rep.central_charge == F(3, 4)
    rep = verify_relations(F(-1, 2), 0, F(1, 5), 1, "simple")
    assert rep.ok

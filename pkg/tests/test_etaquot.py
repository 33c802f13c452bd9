from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from overpart.arith import QuadChar
from overpart.etaquot import (
    EtaQuotient,
    congruence_to_bound,
    cuspation,
    gh_check,
    martin_orders,
    sturm_bound,
)
from overpart.heckeops import op_U, sign_twist
from overpart.qseries import HorizonError, Ring, overpartition_series, phi_st, theta_phi


def test_eta_quotient_invariants():
    eq = EtaQuotient(16, {1: 6, 2: 9, 4: 0})
    assert eq.exps == {1: 6, 2: 9}
    assert eq.weight_num == 15 and eq.offset24 == 24
    with pytest.raises(ValueError):
        EtaQuotient(6, {4: 1})


def test_gh_check_examples():
    assert tuple(gh_check(EtaQuotient(16, {1: 6, 2: 9}))) == (True, True, False, None)
    c1, c2, c3, chi = gh_check(EtaQuotient(36, {6: 4}))
    assert (c1, c2, c3) == (True, True, True) and chi.is_trivial
    res = gh_check(EtaQuotient(2, {1: 8, 2: 8}))
    assert res.holds and res.character == QuadChar(1)


def test_gh_character_nontrivial():
    # eta(z)^2 eta(2z)^... weight 1 example: (-1)^1 * 2^1 -> D = -2
    res = gh_check(EtaQuotient(8, {1: 1, 2: 1}))
    assert res.character == QuadChar(-2)


def test_martin_orders_known_values():
    r = martin_orders(EtaQuotient(2, {1: 8, 2: 8}))
    assert [c.order for c in r.cusps] == [1, 1]
    for m, at_zero in ((3, 1), (7, 6), (11, 4)):
        mp = m % 8
        eq = EtaQuotient(2, {1: (2 * mp - 8) * m - 2, 2: (16 - mp) * m + 1})
        r = martin_orders(eq)
        assert r.order_at(2) == m and r.order_at(1) == at_zero
    r = martin_orders(EtaQuotient(36, {6: 4}))
    assert all(c.order24 == 24 for c in r.cusps) and r.cuspidal
    assert len(r.cusps) == 9 and sum(c.classes for c in r.cusps) == 12


def test_martin_representatives_are_deterministic():
    r = martin_orders(EtaQuotient(12, {2: 2, 6: 2}))
    assert [(c.d, c.c) for c in r.cusps] == [(1, 1), (2, 1), (3, 1), (4, 1), (6, 1), (12, 1)]


EXPONENTS = st.dictionaries(st.sampled_from([1, 2, 3, 4, 6, 12]), st.integers(-6, 12), min_size=1, max_size=4)


@given(EXPONENTS)
@settings(max_examples=60, derandomize=True, deadline=None)
def test_leading_exponent_matches_order_at_infinity(exps):
    eq = EtaQuotient(12, exps)
    if not eq.exps:
        return
    order = martin_orders(eq).order_at(12)
    assert order == Fraction(eq.offset24, 24)
    s = eq.series(upto=max(order, 0) + 5) if eq.offset24 % 24 == 0 else None
    if s is not None:
        lead = s.normalize()
        assert Fraction(lead.offset24, 24) == order


def test_sturm_bound_values_and_monotonicity():
    assert sturm_bound(28, 144) == 336
    assert sturm_bound(89, 32) == 178
    assert sturm_bound(109, 32) == 218
    for k in range(1, 40):
        assert sturm_bound(k + 1, 32) >= sturm_bound(k, 32)
        assert sturm_bound(k, 64) >= sturm_bound(k, 32)
    with pytest.raises(ValueError):
        sturm_bound(5, 0)


def test_congruence_to_bound():
    r3 = Ring.mod(3)
    lhs = op_U(overpartition_series(upto=1503, ring=r3), 3)
    rhs = sign_twist(theta_phi(upto=501, ring=r3) ** 5)
    rep = congruence_to_bound(lhs, rhs, 3, 500)
    assert rep.passed and rep.tested_count == 501
    assert congruence_to_bound(rhs, rhs, 3, 100).passed
    bad = congruence_to_bound(rhs, theta_phi(upto=501, ring=r3), 3, 10)
    # phi^5(-q) and phi(q) agree mod 3 at q^1 (-10 = 2), first differ at q^2 (40 vs 0)
    assert not bad.passed and bad.failures[0] == (2, 1)
    with pytest.raises(HorizonError):
        congruence_to_bound(rhs, rhs, 3, 600)


def test_sturm_mod7_congruence():
    r7 = Ring.mod(7)
    lhs = sign_twist(op_U(overpartition_series(upto=7 * 178, ring=r7), 7))
    rhs = theta_phi(upto=178, ring=r7) ** 5 - phi_st(1, 4, upto=178, ring=r7).scale(2)
    assert congruence_to_bound(lhs, rhs, 7, 178).passed


def test_cuspation_preserves_non_multiples():
    m = 13
    f = op_U(overpartition_series(upto=13 * 1000, ring=Ring.mod(m)), m)
    g, k_num, level = cuspation(f, m, 4, 77)
    assert all(g[n] == f[n] for n in range(1001) if n % m)
    assert all(g[n] == 0 for n in range(0, 1001, m * m))
    assert k_num == 2 * 77 + 169 and level == 4 * 4 * 169


def test_cuspation_weights_and_levels():
    f3 = overpartition_series(100, Ring.mod(3))
    _, k_num, level = cuspation(f3, 3, 4, 10)
    assert k_num == 20 + 25 and level == 144
    f5 = overpartition_series(100, Ring.mod(5))
    assert cuspation(f5, 5, 4, 25)[2] == 400
    with pytest.raises(ValueError):
        cuspation(f5, 2, 4, 25)
    with pytest.raises(ValueError):
        cuspation(overpartition_series(100), 5, 4, 25)


def test_gh_certificate_kinds():
    assert gh_check(EtaQuotient(2, {1: 8, 2: 8})).certificate == "formula-backed"
    # weight 15/2 source of the lift: integral-weight criteria cannot apply
    assert gh_check(EtaQuotient(16, {1: 6, 2: 9})).certificate == "table-backed"
    assert gh_check(EtaQuotient(8, {1: 1, 2: 1})).certificate is None

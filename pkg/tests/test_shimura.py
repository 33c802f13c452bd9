from fractions import Fraction

import pytest

from overpart.arith import QuadChar, is_prime, kronecker
from overpart.heckeops import HalfIntWeight, eigencheck
from overpart.qseries import HorizonError, QSeries, Ring, eta_quotient_series, theta_phi
from overpart.shimura import (
    BETA_BASIS,
    LIFT_SOURCE,
    LIFT_VECTOR,
    LiftParams,
    basis_decompose,
    beta_basis_series,
    cooper_consistency,
    lift_series,
    mod3_relation_check,
    restrict_coprime_uv,
    restrict_residues,
    shimura_A,
)


@pytest.fixture(scope="module")
def b():
    return eta_quotient_series(LIFT_SOURCE, upto=3600)


def test_source_expansion(b):
    assert [b[n] for n in range(6)] == [0, 1, -6, 0, 64, -84]


def test_lift_params():
    p = LiftParams()
    assert [p.psi(d) for d in range(1, 8)] == [1, 0, -1, 0, 1, 0, -1]
    with pytest.raises(ValueError):
        LiftParams(t=4)
    with pytest.raises(ValueError):
        LiftParams(lam=0)


def test_A_small_values(b):
    p = LiftParams()
    assert shimura_A(b, p, 1) == 1
    got = [shimura_A(b, p, n) for n in range(1, 12)]
    assert got == [1, 64, -1836, -4096, 3990, -117504, -433432, 262144, 1776573, 255360, 1619772]


def test_A_at_primes_both_paths(b):
    p = LiftParams()
    w = HalfIntWeight(7, QuadChar(4), 16)
    for Q in range(3, 31):
        if not is_prime(Q):
            continue
        closed = b[Q * Q] + kronecker(-1, Q) * Q**6
        assert shimura_A(b, p, Q) == closed
        if Q <= 7:
            assert eigencheck(b, Q, w, 5) == closed


def test_A_vanishes_mod3_on_5_mod_6(b):
    p = LiftParams()
    assert shimura_A(b, p, 5) % 3 == 0
    assert all(shimura_A(b, p, n) % 3 == 0 for n in range(5, 61, 6))


def test_A_accepts_callable_and_residues(b):
    p = LiftParams()
    assert shimura_A(lambda k: b[k], p, 6) == shimura_A(b, p, 6)
    b3 = b.reduce_mod(3)
    assert shimura_A(b3, p, 7) == shimura_A(b, p, 7) % 3


def test_A_horizon_shortfall():
    short = eta_quotient_series(LIFT_SOURCE, upto=20)
    with pytest.raises(HorizonError):
        shimura_A(short, LiftParams(), 5)


def test_restrict_residues():
    ones = QSeries([1] * 40)
    assert restrict_residues(ones, range(6), 6) == ones
    r = restrict_residues(ones, {1, 5}, 6)
    assert [n for n in range(40) if r[n]] == [n for n in range(40) if n % 6 in (1, 5)]


def test_restrict_paths_agree_on_lift():
    lift = lift_series(60)
    a = restrict_residues(lift, {1, 5}, 6)
    c = restrict_coprime_uv(lift, 6)
    assert a.agrees_with(c, 60)


def test_basis_decompose_lift_vector():
    lift = lift_series(30)
    vec = basis_decompose(lift, beta_basis_series(30), 30)
    assert tuple(vec) == LIFT_VECTOR
    vec3 = basis_decompose(lift_series(30, Ring.mod(3)), beta_basis_series(30, Ring.mod(3)), 30)
    assert vec3 == [1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0]


def test_basis_decompose_recombines():
    basis = beta_basis_series(30)
    assert basis_decompose(basis[2], basis, 30) == [0, 0, 1] + [0] * 8
    target = basis[0].scale(3) - basis[6] + basis[10].scale(5)
    vec = basis_decompose(target, basis, 30)
    total = QSeries([0] * 31)
    for c, g in zip(vec, basis):
        total = total + g.scale(int(c))
    assert total.agrees_with(target, 30)


def test_basis_decompose_rational_and_absent():
    phi = theta_phi(upto=20)
    basis = [phi.scale(2), (phi**3)]
    vec = basis_decompose(phi, basis, 20)
    assert vec == [Fraction(1, 2), 0]
    assert basis_decompose(phi**5, basis, 20) is None


def test_basis_decompose_degenerate():
    phi = theta_phi(upto=20)
    with pytest.raises(ValueError):
        basis_decompose(phi, [phi, phi.scale(3)], 20)


def test_mod3_relation():
    assert mod3_relation_check(10).passed
    rep = mod3_relation_check(60)
    assert rep.passed and rep.tested_count == 61
    eta = eta_quotient_series({6: 4}, upto=60)
    assert all(eta[n] == 0 for n in range(61) if n % 6 != 1)


@pytest.mark.long
def test_mod3_relation_full_sturm_bound():
    rep = mod3_relation_check(336)
    assert rep.passed and rep.tested_count == 337


@pytest.mark.parametrize("Q", [3, 5, 7, 11])
def test_cooper_matrix_structure(Q):
    ok, beta, M = cooper_consistency(Q)
    assert ok
    assert M[0][0] == Q**7 + 1 and M[1][0] == 0 and M[2][0] == 0
    # the combination phi^9 - 2 phi_{5,4} is an eigenvector for alpha
    row = [M[0][j] - 2 * M[1][j] for j in range(3)]
    assert row == [Q**7 + 1, -2 * (Q**7 + 1), 0]


def test_beta_basis_leading_exponents():
    assert [sum(d * r for d, r in e.items()) // 24 for e in BETA_BASIS] == list(range(1, 12))

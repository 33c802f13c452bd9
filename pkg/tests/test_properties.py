"""Randomized operator laws, restriction paths and cache round trips (fixed seed)."""

import numpy as np
from hypothesis import given, settings, strategies as st

from overpart.heckeops import op_U, op_V, sign_twist
from overpart.qseries import QSeries, Ring, read_cache, write_cache
from overpart.shimura import restrict_coprime_uv, restrict_residues

PROFILE = settings(max_examples=100, derandomize=True, deadline=None)

coeff_lists = st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=120)
small = st.integers(1, 7)


def _on_common(a, b):
    top = min(a.horizon, b.horizon)
    return a[0 : top + 1], b[0 : top + 1]


@given(coeff_lists, small)
@PROFILE
def test_U_after_V_is_identity(c, j):
    f = QSeries(c)
    assert op_U(op_V(f, j), j) == f


@given(coeff_lists, small, small)
@PROFILE
def test_U_composes(c, i, j):
    f = QSeries(c)
    a, b = _on_common(op_U(op_U(f, i), j), op_U(f, i * j))
    assert a == b


@given(coeff_lists, small, small)
@PROFILE
def test_V_composes(c, i, j):
    f = QSeries(c)
    a, b = _on_common(op_V(op_V(f, i), j), op_V(f, i * j))
    assert a == b


@given(coeff_lists, small)
@PROFILE
def test_U_V_keep_multiples(c, j):
    f = QSeries(c)
    g = op_V(op_U(f, j), j)
    assert all(g[n] == (f[n] if n % j == 0 else 0) for n in range(g.horizon + 1))


@given(coeff_lists)
@PROFILE
def test_sign_twist_via_U2_V2(c):
    # f(-q) = 2 f|U(2)|V(2) - f
    f = QSeries(c)
    a, b = _on_common(sign_twist(f), op_V(op_U(f, 2), 2).scale(2) - f)
    assert a == b


@given(coeff_lists)
@PROFILE
def test_sign_twist_involution(c):
    f = QSeries(c)
    assert sign_twist(sign_twist(f)) == f


@given(coeff_lists, st.sampled_from([2, 3, 5, 6, 10, 15, 30]))
@PROFILE
def test_restrict_paths_agree(c, M):
    f = QSeries(c)
    units = {r for r in range(M) if np.gcd(r, M) == 1}
    a, b = _on_common(restrict_residues(f, units, M), restrict_coprime_uv(f, M))
    assert a == b


@given(coeff_lists, st.sampled_from([3, 7, 13]), st.sampled_from([3, 6, 12]))
@PROFILE
def test_restrict_paths_agree_mod(c, m, M):
    f = QSeries(c, ring=Ring.mod(m))
    units = {r for r in range(M) if np.gcd(r, M) == 1}
    a, b = _on_common(restrict_residues(f, units, M), restrict_coprime_uv(f, M))
    assert a == b


@given(st.lists(st.integers(0, 250), min_size=0, max_size=300), st.sampled_from([3, 13, 251]), st.integers(-48, 48))
@PROFILE
def test_cache_roundtrip_byte_exact(c, m, offset24):
    import os
    import tempfile

    f = QSeries(c, offset24, Ring.mod(m)) if c else QSeries([0], offset24, Ring.mod(m))
    with tempfile.TemporaryDirectory() as d:
        p1, p2 = os.path.join(d, "a.qser"), os.path.join(d, "b.qser")
        write_cache(f, p1)
        g = read_cache(p1)
        write_cache(g, p2)
        with open(p1, "rb") as x, open(p2, "rb") as y:
            assert x.read() == y.read()
        assert g.offset24 == f.offset24 and g.ring == f.ring
        assert g.coefficients() == f.coefficients()

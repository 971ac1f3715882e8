from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from k3walls.cones import SearchRegion, movable_walls, nef_walls
from k3walls.hilbert import (EQUALS_MOVABLE, HilbSetup, ParallelWallError, gamma_of_wall,
                             movable_hilb, nef_hilb_n2, walls_table)
from k3walls.quadratic import is_square

F = Fraction

TABLE_ROWS = [
    (F(0), (0, 0, -1), 0, 1, "divisorial contraction"),
    (F(1, 4), (1, -1, 2), -2, 4, "flop"),
    (F(2, 7), (1, -1, 1), 0, 5, "flop"),
    (F(1, 3), (1, -1, 0), 2, 6, "flop"),
    (F(6, 17), (2, -3, 5), -2, 7, "fake wall"),
    (F(4, 11), (1, -2, 5), -2, 1, "flop"),
    (F(3, 8), (-1, 3, -10), -2, 4, "flop"),
    (F(2, 5), (1, -2, 4), 0, 2, "divisorial contraction"),
]


def test_walls_table_d1_n7():
    rows = walls_table(1, 7)
    got = [(r.gamma, r.a, r.a_square, r.pairing, r.label) for r in rows]
    assert got == TABLE_ROWS


def test_gamma_of_wall():
    S = HilbSetup(1, 7)
    assert gamma_of_wall(S, (2, -3, 5)) == F(6, 17)
    assert gamma_of_wall(S, (0, 0, -1)) == 0
    with pytest.raises(ParallelWallError):
        gamma_of_wall(S, S.v)


def test_setup_classes():
    S = HilbSetup(3, 4)
    L = S.lattice
    assert L.square(S.v) == 6
    assert L.pairing(S.v, S.H) == 0 and L.pairing(S.v, S.B) == 0
    assert L.square(S.B) == -6
    assert S.q(F(1, 2)) == L.square(S.divisor(F(1, 2)))
    with pytest.raises(ValueError):
        HilbSetup(0, 3)


def test_movable_examples():
    m = movable_hilb(1, 7)
    assert (m.case, m.gamma, m.witness, m.pell) == (3, F(2, 5), (1, -2, 4), (5, 2))
    m = movable_hilb(4, 2)
    assert m.case == 1 and m.gamma == 2
    for n in range(3, 51):
        m = movable_hilb(n - 2, n)
        assert m.case == 2 and m.gamma == F(n - 2, n - 1)
        assert m.witness == (1, -1, n - 1)


def test_movable_case_three_with_negative_solution():
    # every positive solution of X^2 - 7 Y^2 = 1 has X = 1 mod 7
    m = movable_hilb(1, 8)
    assert m.case == 3 and m.gamma == F(3, 8)
    S = HilbSetup(1, 8)
    assert S.lattice.square(m.witness) == 0 and S.lattice.pairing(S.v, m.witness) == 2


def test_case_one_isotropic():
    for d in range(1, 21):
        for n in range(2, 11):
            if not is_square(d * (n - 1)):
                continue
            m = movable_hilb(d, n)
            k, h = m.gamma.numerator, m.gamma.denominator
            S = HilbSetup(d, n)
            D = tuple(h * x - k * y for x, y in zip(S.H, S.B))
            assert S.lattice.square(D) == 0


def test_nef_n2_examples():
    b = nef_hilb_n2(31)
    assert b.gamma == F(3658, 657)
    assert b.spherical == (329, -59, 328)
    assert b.pell == (657, 59)
    assert nef_hilb_n2(2) == EQUALS_MOVABLE
    b = nef_hilb_n2(1)
    assert b.gamma == F(2, 3) and b.spherical == (2, -1, 1)


def _region(S, lo, hi):
    return SearchRegion([S.divisor(lo), S.divisor(hi)])


def _mov_limit(S):
    # largest Gamma keeping H~ - Gamma B strictly positive, approximately
    return F(isqrt(S.d * 10 ** 8 // (S.n - 1)), 10 ** 4)


@pytest.mark.parametrize("d", range(1, 7))
@pytest.mark.parametrize("n", range(2, 7))
def test_movable_boundary_matches_generic_scan(d, n):
    S = HilbSetup(d, n)
    m = movable_hilb(d, n)
    if m.case == 1:
        return
    lim = _mov_limit(S)
    assert lim > m.gamma
    hi = min(m.gamma * F(101, 100), (m.gamma + lim) / 2)
    cone = movable_walls(S.lattice, S.v, _region(S, F(0), hi), S.divisor(m.gamma / 2))
    gammas = sorted(gamma_of_wall(S, w.witness) for w in cone.walls)
    assert gammas[0] == 0
    assert gammas[1] == m.gamma


def test_nef_walls_match_table_d1_n7():
    S = HilbSetup(1, 7)
    cone = nef_walls(S.lattice, S.v, _region(S, F(0), F(2, 5)), S.divisor(F(1, 5)))
    got = sorted(gamma_of_wall(S, w.witness) for w in cone.walls)
    expected = [r[0] for r in TABLE_ROWS if r[4] != "fake wall"]
    assert got == expected


@pytest.mark.parametrize("d", [1, 3, 5, 6, 7, 10, 31])
def test_nef_n2_matches_generic_scan(d):
    S = HilbSetup(d, 2)
    b = nef_hilb_n2(d)
    mov = movable_hilb(d, 2)
    ample = S.divisor(F(1, 10 ** 6))
    top = mov.gamma if mov.case != 1 else mov.gamma * F(999, 1000)
    if b == EQUALS_MOVABLE:
        cone = nef_walls(S.lattice, S.v, _region(S, F(1, 10 ** 6), top), ample)
        assert all(gamma_of_wall(S, w.witness) >= mov.gamma for w in cone.walls)
    else:
        cone = nef_walls(S.lattice, S.v, _region(S, F(1, 10 ** 6), b.gamma), ample)
        got = [gamma_of_wall(S, w.witness) for w in cone.walls]
        assert min(got) == b.gamma


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 15), st.integers(2, 9))
def test_table_rows_are_consistent(d, n):
    S = HilbSetup(d, n)
    rows = walls_table(d, n)
    mov = movable_hilb(d, n)
    assert rows[0].gamma == 0
    assert [r.gamma for r in rows] == sorted({r.gamma for r in rows})
    for r in rows:
        assert S.lattice.square(r.a) == r.a_square >= -2
        assert S.lattice.pairing(S.v, r.a) == r.pairing
        assert gamma_of_wall(S, r.a) == r.gamma <= mov.gamma

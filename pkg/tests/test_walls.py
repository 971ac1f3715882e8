import pytest
from hypothesis import given, settings, strategies as st

from k3walls.lattice import LatticeError, mukai_from_ns
from k3walls.quadratic import BinaryForm
from k3walls.walls import (NotHyperbolic, Orientation, TotallySemistable, WallKind, WallLattice,
                           classify, effective_cone, has_positive_sum_decomposition,
                           make_wall_lattice, minimal_class, orbit_list)

L1 = mukai_from_ns([[2]])
V7 = (1, 0, -6)

# (a, kind, totally semistable, label) for the d = 1, n = 7 walls
D1_N7_WALLS = [
    ((0, 0, -1), WallKind.HILBERT_CHOW, "for all orientations", "divisorial contraction"),
    ((1, -1, 2), WallKind.FLOPPING, "for some orientation", "flop"),
    ((1, -1, 1), WallKind.FLOPPING, "no", "flop"),
    ((1, -1, 0), WallKind.FLOPPING, "no", "flop"),
    ((2, -3, 5), WallKind.NO_CONTRACTION, "for some orientation", "fake wall"),
    ((1, -2, 5), WallKind.FLOPPING, "for some orientation", "flop"),
    ((-1, 3, -10), WallKind.FLOPPING, "for some orientation", "flop"),
    ((1, -2, 4), WallKind.LI_GIESEKER_UHLENBECK, "for some orientation", "divisorial contraction"),
]


def test_make_wall_lattice_examples():
    H = make_wall_lattice(L1, V7, (2, -3, 5))
    assert H.gram2 == BinaryForm(12, 7, -2)
    assert H.v_coords == (1, 0)
    H = make_wall_lattice(L1, V7, (0, 0, 1))
    assert H.gram2 == BinaryForm(12, -1, 0)
    assert isinstance(make_wall_lattice(L1, (1, 0, -1), (0, 1, 0)), NotHyperbolic)
    with pytest.raises(LatticeError):
        make_wall_lattice(L1, V7, (2, 0, -12))


@pytest.mark.parametrize("a,kind,ts,label", D1_N7_WALLS)
def test_classify_table_rows(a, kind, ts, label):
    cl = classify(make_wall_lattice(L1, V7, a))
    assert cl.kind is kind
    assert cl.totally_semistable.value == ts
    assert cl.label == label


def test_witnesses_reverify():
    for a, *_ in D1_N7_WALLS:
        H = make_wall_lattice(L1, V7, a)
        _check_witnesses(H, classify(H))


def _check_witnesses(H, cl):
    Q, vv = H.gram2, H.v_square
    w = cl.witnesses
    if "brill_noether" in w:
        (s,) = w["brill_noether"]
        assert Q(*s) == -2 and H.pair_v(s) == 0
    if "hilbert_chow" in w:
        (x,) = w["hilbert_chow"]
        assert Q(*x) == 0 and H.pair_v(x) == 1
    if "li_gieseker_uhlenbeck" in w:
        (x,) = w["li_gieseker_uhlenbeck"]
        assert Q(*x) == 0 and H.pair_v(x) == 2
    if "positive_decomposition" in w:
        a, b = w["positive_decomposition"]
        assert (a[0] + b[0], a[1] + b[1]) == H.v_coords
        assert Q(*a) >= 0 and Q(*b) >= 0 and H.pair_v(a) > 0 and H.pair_v(b) > 0
    if "flopping_spherical" in w:
        (s,) = w["flopping_spherical"]
        assert Q(*s) == -2 and 0 < H.pair_v(s) <= vv // 2
    if "totally_semistable_spherical" in w:
        (s,) = w["totally_semistable_spherical"]
        assert Q(*s) == -2 and H.pair_v(s) < 0


def test_positive_decomposition_examples():
    H = make_wall_lattice(L1, V7, (1, -1, 0))
    a, b = has_positive_sum_decomposition(H)
    assert {H.to_ambient(a), H.to_ambient(b)} == {(1, -1, 0), (0, 1, -6)}
    # v^2 = 2: a split forces two isotropic parts, so it fails without isotropic classes
    H = make_wall_lattice(L1, (1, 0, -1), (1, 1, 2))
    assert not H.gram2.has_isotropic
    assert has_positive_sum_decomposition(H) is None
    H = make_wall_lattice(L1, (1, 0, -1), (0, 0, -1))
    a, b = has_positive_sum_decomposition(H)
    assert H.gram2(*a) == H.gram2(*b) == 0
    assert has_positive_sum_decomposition(WallLattice.from_gram([[-2, 3], [3, -2]], (1, 1))) is None


def test_effective_cone_examples():
    H = WallLattice.from_gram([[-2, 3], [3, -2]], (1, 1))
    C = effective_cone(H)
    assert sorted(r.vector for r in C.rays) == [(0, 1), (1, 0)]
    H = WallLattice.from_gram([[12, -1], [-1, 0]], (1, 0))
    C = effective_cone(H)
    vecs = {r.vector: r.kind for r in C.rays}
    assert vecs[(0, 1)] == "isotropic" if (0, 1) in vecs else vecs[(0, -1)] == "isotropic"
    H = WallLattice.from_gram([[-4, 60], [60, 4]], (3, 2))
    C = effective_cone(H, Orientation.MINUS)
    assert C.irrational_boundary


def test_minimal_class_and_orbit():
    H = WallLattice.from_gram([[-2, 3], [3, -2]], (1, 1))
    C = effective_cone(H)
    v0, word = minimal_class(H, (2, 1), C)
    assert v0 == (1, 1)
    u = v0
    for s in word:
        u = H.reflect(s, u)
    assert u == (2, 1)
    assert minimal_class(H, v0, C) == (v0, [])
    orb = orbit_list(H, v0, C, 3)
    assert orb == [(13, 5), (5, 2), (2, 1), (1, 1), (1, 2), (2, 5), (5, 13)]
    assert orbit_list(H, v0, C, 0) == [v0]
    assert len({H.gram2(*p) for p in orb}) == 1
    # HC lattice: v is already minimal
    H = WallLattice.from_gram([[12, -1], [-1, 0]], (1, 0))
    assert minimal_class(H, (1, 0), effective_cone(H)) == ((1, 0), [])


def test_classify_rejects_non_hyperbolic():
    with pytest.raises(LatticeError):
        classify(make_wall_lattice(L1, (1, 0, -1), (0, 1, 0)))
    with pytest.raises(LatticeError):
        WallLattice.from_gram([[2, 0], [0, 2]], (1, 0))


_GENS = [((0, -1), (1, 0)), ((1, 1), (0, 1)), ((1, -1), (0, 1)), ((-1, 0), (0, -1)),
         ((0, 1), (1, 0))]


def _mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def _word(ws):
    M = ((1, 0), (0, 1))
    for i in ws:
        M = _mul(M, _GENS[i])
    return (M[0][0], M[0][1], M[1][0], M[1][1])


unimodular = st.lists(st.integers(0, len(_GENS) - 1), max_size=8).map(_word)


@settings(max_examples=50 * len(D1_N7_WALLS), deadline=None)
@given(st.sampled_from(D1_N7_WALLS), unimodular)
def test_kind_is_invariant_under_change_of_basis(row, m):
    a, kind, ts, _ = row
    H = make_wall_lattice(L1, V7, a)
    p, q, r, s = m
    Q2 = H.gram2.transform(((p, q), (r, s)))
    det = p * s - q * r
    x, y = H.v_coords
    # coordinates of v in the new basis: M^{-1} v
    vx, vy = det * (s * x - q * y), det * (-r * x + p * y)
    H2 = WallLattice.from_gram(Q2.gram, (vx, vy))
    cl = classify(H2)
    assert cl.kind is kind
    assert cl.totally_semistable.value == ts
    _check_witnesses(H2, cl)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10, 10), st.integers(-10, 10), st.integers(-10, 10),
       st.integers(-3, 3), st.integers(1, 4))
def test_random_walls_have_verifiable_witnesses(a, b, c, x, y):
    if b * b - a * c <= 0:
        return
    v = (x, y)
    Q = BinaryForm(a, b, c)
    if Q(*v) <= 0 or __import__("math").gcd(x, y) != 1:
        return
    H = WallLattice.from_gram([[a, b], [b, c]], v)
    cl = classify(H)
    _check_witnesses(H, cl)
    if cl.kind is WallKind.HILBERT_CHOW:
        assert cl.totally_semistable is TotallySemistable.FOR_ALL_ORIENTATIONS

import random

import pytest
from hypothesis import given, settings, strategies as st

from k3walls.flops import (PartitionError, PositivePartition, part_pool, positive_partitions,
                           refines, strata_components, strata_poset, two_part_strata)
from k3walls.lattice import LatticeError
from k3walls.quadratic import BinaryForm
from k3walls.walls import WallLattice
from oracles import positive_partitions_brute


def isolated_lattice(m, M):
    return WallLattice.from_gram([[-4, 2 * M], [2 * M, 4]], (m, 2))


def connected_lattice(m, M):
    return WallLattice.from_gram([[2, M], [M, 2]], (1, m - 1))


def test_isolated_partitions():
    H = isolated_lattice(3, 30)
    parts = positive_partitions(H, strict=True)
    nontrivial = {P.parts for P in parts if len(P) > 1}
    assert nontrivial == {PositivePartition(((0, 1), (3, 1))).parts,
                          PositivePartition(((1, 1), (2, 1))).parts}
    assert PositivePartition(((3, 2),)) in parts


def test_isolated_codims():
    H = isolated_lattice(3, 30)
    codims = {x["partition"].parts: x["codim"] for x in two_part_strata(H, strict=True)}
    assert codims[PositivePartition(((0, 1), (3, 1))).parts] == 2 * 30 * 3 + 4 - 1


@pytest.mark.parametrize("m", [3, 5, 7])
def test_isolated_components(m):
    s = strata_components(isolated_lattice(m, 10 * m), strict=True)
    assert s.connected == s.irreducible == (m + 1) // 2
    assert all(len(c) == 1 for c in s.components)


def test_connected_single_component():
    H = connected_lattice(3, 10)
    s = strata_components(H)
    assert s.connected == 1
    q = PositivePartition(((1, 0), (0, 1), (0, 1)))
    assert s.common_refinements == (q,)
    assert all(refines(q, P) for P in s.maximal)
    # k = 0 gives a zero part, so only m - 1 two-part strata exist
    assert len(two_part_strata(H)) == 2


def test_no_nontrivial_partitions():
    H = WallLattice.from_gram([[-2, 3], [3, -2]], (1, 1))
    assert positive_partitions(H) == [PositivePartition(((1, 1),))]
    s = strata_components(H)
    assert (s.irreducible, s.connected, s.components) == (0, 0, ())


def test_strict_mode_rejects_special_classes():
    assert positive_partitions(connected_lattice(3, 10), strict=True)
    with pytest.raises(PartitionError):
        positive_partitions(WallLattice.from_gram([[12, -1], [-1, 0]], (1, 0)), strict=True)
    with pytest.raises(PartitionError):
        positive_partitions(WallLattice.from_gram([[-2, 3], [3, -2]], (1, 1)), strict=True)
    with pytest.raises(LatticeError):
        positive_partitions(WallLattice.from_gram([[-2, 3], [3, -2]], (1, 0)))


def test_poset_shape():
    H = connected_lattice(4, 10)
    poset = strata_poset(H)
    top = poset.top
    n = len(poset.nodes)
    # [v] is the unique maximum
    assert all(refines(poset.nodes[i], poset.nodes[top]) for i in range(n))
    less = {(i, j) for i in range(n) for j in range(n) if i != j and refines(poset.nodes[i], poset.nodes[j])}
    for (i, j) in less:
        assert (j, i) not in less
        for k in range(n):
            if (j, k) in less:
                assert (i, k) in less
    assert all(c >= 1 for c in poset.codim.values())


def _random_case(rng):
    while True:
        a, b, c = rng.randint(-6, 6), rng.randint(-12, 12), rng.randint(-6, 6)
        if b * b - a * c <= 0:
            continue
        x, y = rng.randint(0, 4), rng.randint(-4, 4)
        Q = BinaryForm(a, b, c)
        if (x, y) != (0, 0) and 0 < Q(x, y) <= 20 and __import__("math").gcd(x, y) == 1:
            return [[a, b], [b, c]], (x, y)


def test_partitions_match_brute_force_random():
    rng = random.Random(2024)
    for _ in range(50):
        gram, v = _random_case(rng)
        H = WallLattice.from_gram(gram, v)
        got = {P.parts for P in positive_partitions(H, v)}
        got = {tuple(sorted(p)) for p in got}
        assert got == positive_partitions_brute(gram, v, 30), (gram, v)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_partition_invariants(seed):
    gram, v = _random_case(random.Random(seed))
    H = WallLattice.from_gram(gram, v)
    Q = H.gram2
    for P in positive_partitions(H, v):
        assert P.total == v
        for u in P.parts:
            assert Q(*u) >= 0 and H.pair_v(u) > 0
    for x in two_part_strata(H, v):
        a, b = x["partition"].parts
        assert x["codim"] >= 0
        # strict Cauchy-Schwarz: (a, b)^2 > a^2 b^2
        assert (x["codim"] + 1) ** 2 > Q(*a) * Q(*b)
        if Q(*a) * Q(*b) >= 4:  # e.g. both squares >= 2, as in even lattices
            assert x["codim"] >= 2
    assert set(part_pool(H, v)) >= {u for P in positive_partitions(H, v) for u in P.parts}

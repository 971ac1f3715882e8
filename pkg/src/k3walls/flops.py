"""Stratification of the exceptional locus of a flopping wall.

Points of the locus are indexed by unordered partitions of ``v`` into
positive classes of the wall lattice; a two-part stratum ``[a1, a2]`` has
codimension ``(a1, a2) - 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .lattice import LatticeError
from .quadratic import orbit_representatives
from .walls import Point, WallLattice

log = logging.getLogger(__name__)


class PartitionError(LatticeError):
    pass


def _slope_key(u: Point):
    # parts ordered by slope y/x (vertical last), then lexicographically
    x, y = u
    return (Fraction(y, x) if x else Fraction(10 ** 30) * (1 if y > 0 else -1), u)


@dataclass(frozen=True, order=True)
class PositivePartition:
    parts: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted((tuple(p) for p in self.parts),
                                                      key=_slope_key)))

    def __len__(self):
        return len(self.parts)

    @property
    def total(self) -> Point:
        return (sum(p[0] for p in self.parts), sum(p[1] for p in self.parts))


def _is_positive(H: WallLattice, u: Point) -> bool:
    return H.gram2(*u) >= 0 and H.pair_v(u) > 0


def part_pool(H: WallLattice, v: Point) -> list[Point]:
    """Positive ``u`` with ``v - u`` positive or zero."""
    out = []
    for t in range(1, H.pair(v, v) + 1):
        for u in H.level_range(t, 0):
            rest = (v[0] - u[0], v[1] - u[1])
            if rest == (0, 0) or _is_positive(H, rest):
                out.append(u)
    return sorted(out, key=_slope_key)


def _check(H: WallLattice, v: Point, strict: bool):
    v = tuple(v)
    if not _is_positive(H, v):
        raise PartitionError(f"v={v} is not a positive class of the wall lattice")
    if H.gram2.has_isotropic:
        msg = "wall lattice has isotropic classes"
    elif orbit_representatives(H.gram2, -2).reps:
        msg = "wall lattice has spherical classes"
    else:
        msg = None
    if msg:
        if strict:
            raise PartitionError(msg)
        log.warning("%s; strata interpretation not asserted", msg)
    return v


def positive_partitions(H: WallLattice, v: Point | None = None, max_parts: int | None = None,
                        strict: bool = False) -> list[PositivePartition]:
    """Every partition of ``v`` into at most ``max_parts`` positive classes."""
    v = _check(H, v if v is not None else H.v, strict)
    pool = part_pool(H, v)
    index = {u: i for i, u in enumerate(pool)}
    out: list[PositivePartition] = []

    def rec(rest: Point, start: int, acc: list):
        if rest == (0, 0):
            out.append(PositivePartition(tuple(acc)))
            return
        if max_parts is not None and len(acc) >= max_parts:
            return
        for i in range(start, len(pool)):
            u = pool[i]
            r = (rest[0] - u[0], rest[1] - u[1])
            if r == (0, 0) or (r in index and _is_positive(H, r)):
                acc.append(u)
                rec(r, i, acc)
                acc.pop()

    rec(v, 0, [])
    return sorted(set(out), key=lambda P: (len(P), [_slope_key(p) for p in P.parts]))


def refines(P: PositivePartition, Q: PositivePartition) -> bool:
    """True if the parts of ``P`` can be grouped into the parts of ``Q``."""
    if P.total != Q.total or len(P) < len(Q):
        return False
    targets = list(Q.parts)

    def rec(i: int, sums: list) -> bool:
        if i == len(P.parts):
            return all(s == t for s, t in zip(sums, targets))
        p = P.parts[i]
        tried = set()
        for j, t in enumerate(targets):
            key = (t, sums[j])
            if key in tried:
                continue
            tried.add(key)
            s = (sums[j][0] + p[0], sums[j][1] + p[1])
            # remaining budget of target j must stay reachable by positive parts
            if s == t or (t[0] - s[0], t[1] - s[1]) in reach:
                sums[j] = s
                if rec(i + 1, sums):
                    return True
                sums[j] = (s[0] - p[0], s[1] - p[1])
        return False

    reach = _subsums(P.parts)
    return rec(0, [(0, 0)] * len(targets))


def _subsums(parts) -> set:
    sums = {(0, 0)}
    for p in parts:
        sums |= {(s[0] + p[0], s[1] + p[1]) for s in sums}
    return sums


@dataclass
class StrataPoset:
    nodes: list[PositivePartition]
    edges: list[tuple[int, int]] = field(default_factory=list)  # (finer, coarser) covering pairs
    codim: dict[int, int] = field(default_factory=dict)

    @property
    def top(self) -> int:
        return next(i for i, P in enumerate(self.nodes) if len(P) == 1)


def strata_poset(H: WallLattice, v: Point | None = None, strict: bool = False) -> StrataPoset:
    nodes = positive_partitions(H, v, strict=strict)
    n = len(nodes)
    less = {(i, j) for i in range(n) for j in range(n)
            if i != j and refines(nodes[i], nodes[j])}
    edges = [(i, j) for (i, j) in sorted(less)
             if not any((i, k) in less and (k, j) in less for k in range(n))]
    codim = {i: H.pair(*P.parts) - 1 for i, P in enumerate(nodes) if len(P) == 2}
    return StrataPoset(nodes, edges, codim)


def two_part_strata(H: WallLattice, v: Point | None = None, strict: bool = False) -> list[dict]:
    return [{"partition": P, "codim": H.pair(*P.parts) - 1}
            for P in positive_partitions(H, v, max_parts=2, strict=strict) if len(P) == 2]


@dataclass(frozen=True)
class ComponentSummary:
    irreducible: int
    connected: int
    maximal: tuple[PositivePartition, ...]
    components: tuple[tuple[PositivePartition, ...], ...]
    common_refinements: tuple[PositivePartition | None, ...]


def strata_components(H: WallLattice, v: Point | None = None, strict: bool = False) -> ComponentSummary:
    """Irreducible components are the maximal nontrivial strata; connected
    components come from the refinement graph on nontrivial partitions."""
    poset = strata_poset(H, v, strict=strict)
    top = poset.top
    nontrivial = [i for i in range(len(poset.nodes)) if i != top]
    adj = {i: set() for i in nontrivial}
    for i, j in poset.edges:
        if j != top:
            adj[i].add(j)
            adj[j].add(i)
    maximal = [i for i in nontrivial if not any(a == i and b != top for a, b in poset.edges)]
    seen, comps = set(), []
    for i in nontrivial:
        if i in seen:
            continue
        stack, comp = [i], []
        seen.add(i)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x] - seen:
                seen.add(y)
                stack.append(y)
        comps.append(sorted(comp))
    nodes = poset.nodes
    common = []
    for comp in comps:
        tops = [i for i in comp if i in maximal]
        shared = [i for i in comp if all(i == m or refines(nodes[i], nodes[m]) for m in tops)]
        # the coarsest common refinement, if any
        shared.sort(key=lambda i: (len(nodes[i]), nodes[i]))
        common.append(nodes[shared[0]] if shared else None)
    return ComponentSummary(
        irreducible=len(maximal), connected=len(comps),
        maximal=tuple(nodes[i] for i in maximal),
        components=tuple(tuple(nodes[i] for i in c) for c in comps),
        common_refinements=tuple(common))

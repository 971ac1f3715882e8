"""Integer lattices with an even symmetric bilinear form.

Vectors are plain tuples of Python ints; a :class:`Lattice` only carries the
Gram matrix (and optional basis labels).  Everything here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]
MukaiVector = Vector  # alias used in signatures for readability


class LatticeError(ValueError):
    """Raised when an input violates a lattice-level precondition."""


def as_vector(u: Iterable[int]) -> Vector:
    out = tuple(int(x) for x in u)
    return out


def content(u: Sequence[int]) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    g = 0
    for x in u:
        g = gcd(g, x)
    return g


def is_primitive(u: Sequence[int]) -> bool:
    return content(u) == 1


def primitive_part(u: Sequence[int]) -> Vector:
    g = content(u)
    if g == 0:
        raise LatticeError("zero vector has no primitive part")
    return tuple(x // g for x in u)


def _matrix(rows: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in r) for r in rows)


@dataclass(frozen=True)
class Lattice:
    """A free abelian group ``Z^rank`` with Gram matrix ``gram``.

    >>> L = mukai_from_ns([[2]])
    >>> L.pairing((1, 0, -6), (1, -1, 2))
    4
    """

    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    even: bool = field(default=False, compare=False)

    def __post_init__(self):
        g = _matrix(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0:
            raise LatticeError("lattice must have positive rank")
        if any(len(r) != n for r in g):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError("Gram matrix must be symmetric")
        if self.even and any(g[i][i] % 2 for i in range(n)):
            raise LatticeError("Gram matrix has an odd diagonal entry (lattice not even)")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise LatticeError("labels must match the rank")
            object.__setattr__(self, "labels", labels)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def check(self, u: Sequence[int]) -> Vector:
        u = as_vector(u)
        if len(u) != self.rank:
            raise LatticeError(f"vector {u} has length {len(u)}, lattice rank is {self.rank}")
        return u

    def pairing(self, u: Sequence, w: Sequence) -> int:
        if len(u) != self.rank or len(w) != self.rank:
            raise LatticeError(
                f"dimension mismatch: lengths {len(u)}, {len(w)} vs rank {self.rank}")
        g = self.gram
        total = 0
        for i, ui in enumerate(u):
            if ui:
                row = g[i]
                total += ui * sum(row[j] * wj for j, wj in enumerate(w) if wj)
        return total

    def square(self, u: Sequence) -> int:
        return self.pairing(u, u)

    def gram_of(self, basis: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
        """Gram matrix of the form restricted to ``basis``."""
        return tuple(tuple(self.pairing(b, c) for c in basis) for b in basis)

    def linear_form(self, v: Sequence[int]) -> Vector:
        """Coefficients of ``u -> (u, v)``."""
        return tuple(sum(self.gram[i][j] * v[j] for j in range(self.rank))
                     for i in range(self.rank))


def pairing(L: Lattice, u, w) -> int:
    return L.pairing(u, w)


def square(L: Lattice, u) -> int:
    return L.pairing(u, u)


def mukai_from_ns(ns_gram: Sequence[Sequence[int]]) -> Lattice:
    """Mukai lattice ``Z + NS + Z`` with coordinates ``(r, c_1..c_rho, s)``.

    The pairing is ``c.N.c' - r s' - s r'``.
    """
    N = _matrix(ns_gram)
    rho = len(N)
    if rho == 0 or any(len(r) != rho for r in N):
        raise LatticeError("NS Gram matrix must be square and nonempty")
    for i in range(rho):
        if N[i][i] % 2:
            raise LatticeError("NS Gram matrix must be even")
        for j in range(i):
            if N[i][j] != N[j][i]:
                raise LatticeError("NS Gram matrix must be symmetric")
    n = rho + 2
    g = [[0] * n for _ in range(n)]
    g[0][n - 1] = g[n - 1][0] = -1
    for i in range(rho):
        for j in range(rho):
            g[i + 1][j + 1] = N[i][j]
    labels = ("r",) + tuple(f"c{i + 1}" for i in range(rho)) + ("s",)
    return Lattice(g, labels, even=True)


def signature(L: Lattice | Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """Inertia ``(n_plus, n_minus, n_zero)`` by congruence diagonalization over Q."""
    gram = L.gram if isinstance(L, Lattice) else _matrix(L)
    A = [[Fraction(x) for x in row] for row in gram]
    n = len(A)
    pos = neg = 0
    active = list(range(n))
    while active:
        i = next((k for k in active if A[k][k] != 0), None)
        if i is None:
            pair = next(((p, q) for p in active for q in active
                         if p != q and A[p][q] != 0), None)
            if pair is None:
                break
            p, q = pair
            # replace e_p by e_p + e_q; new diagonal 2 A[p][q] != 0
            for k in range(n):
                A[p][k] += A[q][k]
            for k in range(n):
                A[k][p] += A[k][q]
            i = p
        piv = A[i][i]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for k in active:
            f = A[k][i] / piv
            if f:
                for j in active:
                    A[k][j] -= f * A[i][j]
                A[k][i] = Fraction(0)
        for k in active:
            A[i][k] = Fraction(0)
    return pos, neg, n - pos - neg


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return ``(D, U, V, Vinv)`` with ``U M V = D`` diagonal, ``U, V`` unimodular.

    Diagonal entries are non-negative and each divides the next.
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):  # col_dst += k * col_src
        for r in A:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]
        # inverse: row_src of Vinv -= k * row_dst
        Vi[src] = [a - k * b for a, b in zip(Vi[src], Vi[dst])]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V, Vi


def _rank_of(D) -> int:
    return sum(1 for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i])


def elementary_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    D = smith_normal_form(M)[0]
    return [D[i][i] for i in range(_rank_of(D))]


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Basis of ``{x in Z^n : R x = 0}`` (automatically saturated)."""
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    D, _, V, _ = smith_normal_form(rows)
    r = _rank_of(D)
    return [tuple(V[i][j] for i in range(n)) for j in range(r, n)]


@dataclass(frozen=True)
class Sublattice:
    """A sublattice given by a basis of ambient vectors."""

    ambient: Lattice
    basis: tuple[Vector, ...]
    restricted_gram: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_saturated(self) -> bool:
        return all(e == 1 for e in elementary_divisors(self.basis))

    def coordinates(self, u: Sequence[int]) -> Vector:
        """Coordinates of ``u`` in ``basis``; raises if ``u`` is not in the sublattice."""
        c = solve_in_span(self.basis, u)
        if c is None or any(x.denominator != 1 for x in c):
            raise LatticeError(f"{tuple(u)} is not in the sublattice")
        return tuple(int(x) for x in c)

    def embed(self, coords: Sequence) -> tuple:
        """Ambient vector with the given (possibly rational) coordinates."""
        out = [0] * self.ambient.rank
        for c, b in zip(coords, self.basis):
            for i, bi in enumerate(b):
                out[i] += c * bi
        return tuple(out)


def solve_in_span(basis: Sequence[Sequence[int]], u: Sequence[int]):
    """Rational ``c`` with ``sum c_i basis_i = u``, or None if ``u`` is not in the span."""
    k = len(basis)
    n = len(u)
    # augmented system: columns are basis vectors
    A = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(u[i])] for i in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        p = next((r for r in range(row, n) if A[r][col] != 0), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        pv = A[row][col]
        A[row] = [x / pv for x in A[row]]
        for r in range(n):
            if r != row and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
    if any(A[r][k] != 0 for r in range(row, n)):
        return None
    if len(pivots) < k:
        raise LatticeError("basis vectors are linearly dependent")
    c = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        c[col] = A[r][k]
    return tuple(c)


def saturate(L: Lattice, vectors: Sequence[Sequence[int]]) -> Sublattice:
    """Primitive closure ``(Q-span of vectors) ∩ Z^n`` as a :class:`Sublattice`."""
    vecs = [L.check(v) for v in vectors]
    if not vecs or all(not any(v) for v in vecs):
        raise LatticeError("cannot saturate a zero span")
    D, _, _, Vi = smith_normal_form(vecs)
    r = _rank_of(D)
    basis = tuple(tuple(Vi[i]) for i in range(r))
    return Sublattice(L, basis, L.gram_of(basis))


def vperp_basis(L: Lattice, v: Sequence[int]) -> Sublattice:
    """The orthogonal complement ``v^⊥`` with its restricted form."""
    v = L.check(v)
    if not is_primitive(v):
        raise LatticeError(f"v={v} must be primitive")
    basis = tuple(hermite_rows(integer_kernel([L.linear_form(v)], L.rank)))
    return Sublattice(L, basis, L.gram_of(basis))


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[Vector]:
    """Row-style Hermite normal form of a full-rank list of vectors (same Z-span)."""
    A = [list(v) for v in vectors]
    m = len(A)
    n = len(A[0]) if m else 0
    row = 0
    for col in range(n):
        if row == m:
            break
        while True:
            nz = [r for r in range(row, m) if A[r][col]]
            if not nz:
                break
            p = min(nz, key=lambda r: abs(A[r][col]))
            A[row], A[p] = A[p], A[row]
            others = [r for r in range(row + 1, m) if A[r][col]]
            if not others:
                break
            for r in others:
                q = A[r][col] // A[row][col]
                A[r] = [a - q * b for a, b in zip(A[r], A[row])]
        if row < m and A[row][col]:
            if A[row][col] < 0:
                A[row] = [-x for x in A[row]]
            for r in range(row):
                q = A[r][col] // A[row][col]
                A[r] = [a - q * b for a, b in zip(A[r], A[row])]
            row += 1
    return [tuple(r) for r in A if any(r)]


def reflect(L: Lattice, s: Sequence[int], u: Sequence[int]) -> Vector:
    """Reflection ``u -> u + (u, s) s`` in a spherical class ``s``."""
    if L.square(s) != -2:
        raise LatticeError(f"reflection needs s^2 = -2, got {L.square(s)}")
    k = L.pairing(u, s)
    return tuple(ui + k * si for ui, si in zip(u, s))

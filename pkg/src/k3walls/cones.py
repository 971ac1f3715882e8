"""Birational cones of ``M(v)`` computed inside ``v^⊥``.

Divisor classes on the moduli space are identified with classes in
``v^⊥`` (so the Mukai morphism is the identity on coordinates) and curve
classes with orthogonal projections ``a0 = a - ((v, a) / v^2) v``.

Walls accumulate at the boundary of the positive cone, so every
enumeration here is complete only inside a :class:`SearchRegion`: a cone
spanned by finitely many strictly positive classes of ``v^⊥``.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Sequence

from .lattice import (Lattice, LatticeError, Sublattice, content, is_primitive,
                      smith_normal_form, solve_in_span, vperp_basis)
from .quadratic import BinaryForm, isotropic_primitive
from .walls import NotHyperbolic, classify, make_wall_lattice

log = logging.getLogger(__name__)
if os.environ.get("K3WALLS_VERBOSE") == "1":  # pragma: no cover - env dependent
    logging.basicConfig(level=logging.DEBUG)

RationalVector = tuple  # tuple of Fraction


def _frac_vec(u) -> RationalVector:
    return tuple(Fraction(x) for x in u)


def _pair(L: Lattice, u, w):
    return sum(u[i] * L.gram[i][j] * w[j]
               for i in range(L.rank) if u[i] for j in range(L.rank) if w[j])


def _check_v(L: Lattice, v) -> tuple:
    v = L.check(v)
    if not is_primitive(v):
        raise LatticeError(f"v={v} must be primitive")
    if L.square(v) <= 0:
        raise LatticeError("v must have positive square")
    return v


def project_to_vperp(L: Lattice, v, a) -> RationalVector:
    """``a - ((v, a) / v^2) v``."""
    vv = L.square(v)
    if vv <= 0:
        raise LatticeError("v must have positive square")
    k = Fraction(L.pairing(v, a), vv)
    return tuple(Fraction(ai) - k * vi for ai, vi in zip(a, v))


def primitive_direction(u) -> tuple[int, ...]:
    """The primitive integral vector on the ray of a rational vector."""
    u = _frac_vec(u)
    den = 1
    for x in u:
        den = den * x.denominator // gcd(den, x.denominator)
    w = [int(x * den) for x in u]
    g = content(w)
    if g == 0:
        raise LatticeError("zero vector has no direction")
    return tuple(x // g for x in w)


@dataclass(frozen=True)
class SearchRegion:
    """Cone spanned by finitely many strictly positive classes of ``v^⊥``."""

    rays: tuple

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(_frac_vec(r) for r in self.rays))
        if not self.rays:
            raise LatticeError("a search region needs at least one ray")

    def validate(self, L: Lattice, v, ample):
        for D in self.rays:
            if _pair(L, D, v) != 0:
                raise LatticeError(f"region ray {D} is not in v-perp")
            if _pair(L, D, D) <= 0:
                raise LatticeError(f"region ray {D} is not strictly positive")
            if _pair(L, D, ample) <= 0:
                raise LatticeError(f"region ray {D} is not on the ample side")


@dataclass(frozen=True)
class WallRecord:
    normal: tuple[int, ...]          # primitive, in v^⊥, (normal, ample) > 0
    witness: tuple[int, ...]
    witness_square: int
    witness_pairing: int
    kind: str
    totally_semistable: str


@dataclass(frozen=True)
class ConeDescription:
    ambient: Sublattice
    kind: str
    walls: tuple[WallRecord, ...] = ()
    generators: tuple = ()
    provenance: tuple = ()
    complete: bool = True
    includes_positive_cone: bool = True

    def normals(self) -> set:
        return {w.normal for w in self.walls}


def _inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        p = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[p] = A[p], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _particular(L: Lattice, v, t: int):
    """An integral ``a`` with ``(v, a) = t``, or None."""
    g = L.linear_form(v)
    D, U, V, _ = smith_normal_form([g])
    e = D[0][0]
    if e == 0 or t % e:
        return None
    # g V = (e, 0, ...) after the row sign from U
    s = U[0][0]
    k = t // e * s
    return tuple(V[i][0] * k for i in range(L.rank))


@dataclass
class _Frame:
    """Data shared by all enumerations for one ``(L, v, ample)``."""

    L: Lattice
    v: tuple
    ample: RationalVector
    perp: Sublattice = field(init=False)
    hodge: list = field(init=False)
    hodge_inv: list = field(init=False)

    def __post_init__(self):
        L, v, A = self.L, self.v, self.ample
        if _pair(L, A, v) != 0:
            raise LatticeError("ample class must lie in v-perp")
        AA = _pair(L, A, A)
        if AA <= 0:
            raise LatticeError("ample class must be strictly positive")
        self.perp = vperp_basis(L, v)
        G = self.perp.restricted_gram
        ca = solve_in_span(self.perp.basis, A)
        ga = [sum(G[i][j] * ca[j] for j in range(len(ca))) for i in range(len(ca))]
        k = len(G)
        self.hodge = [[2 * ga[i] * ga[j] / AA - G[i][j] for j in range(k)] for i in range(k)]
        self.hodge_inv = _inverse(self.hodge)

    def gamma2(self, region: SearchRegion) -> Fraction:
        L, A = self.L, self.ample
        AA = _pair(L, A, A)
        return max(Fraction(_pair(L, D, A)) ** 2 / (_pair(L, D, D) * AA) for D in region.rays)

    def classes(self, t: int, radius: Fraction) -> Iterator[tuple[int, ...]]:
        """Integral ``a`` with ``(v, a) = t`` whose projection has Hodge norm^2 <= radius."""
        L, v = self.L, self.v
        at = _particular(L, v, t)
        if at is None:
            return
        c = solve_in_span(self.perp.basis, project_to_vperp(L, v, at))
        ranges = []
        for i in range(len(c)):
            b2 = radius * self.hodge_inv[i][i]
            b = isqrt(math.floor(b2)) + 1
            ranges.append(range(math.floor(-c[i] - b), math.ceil(-c[i] + b) + 1))
        log.debug("t=%s: coordinate box %s", t, [(r.start, r.stop - 1) for r in ranges])
        basis = self.perp.basis
        for y in itertools.product(*ranges):
            a = list(at)
            for yi, p in zip(y, basis):
                if yi:
                    for j, pj in enumerate(p):
                        a[j] += yi * pj
            yield tuple(a)


def _meets(L: Lattice, a0, region: SearchRegion) -> bool:
    vals = [_pair(L, a0, D) for D in region.rays]
    return min(vals) <= 0 <= max(vals)


def _oriented_normal(L: Lattice, v, a, ample) -> tuple[int, ...]:
    vv = L.square(v)
    t = L.pairing(v, a)
    n = primitive_direction([vv * ai - t * vi for ai, vi in zip(a, v)])
    if _pair(L, n, ample) < 0:
        n = tuple(-x for x in n)
    return n


def _witness_key(a):
    return (max(abs(x) for x in a), a[0] < 0, a)


def _radius(frame: _Frame, region: SearchRegion, vv: int) -> Fraction:
    g2 = frame.gamma2(region)
    R = (2 * g2 - 1) * (2 + Fraction(vv, 4))
    log.debug("Hodge bound: gamma^2=%s, |a0|_A^2 <= %s", g2, R)
    return R


def _scan(L, v, region, ample, levels):
    """Collect classes ``a`` (per level ``t`` with an allowed square predicate)
    whose hyperplane in ``v^⊥`` meets the region."""
    v = _check_v(L, v)
    ample = _frac_vec(ample)
    region.validate(L, v, ample)
    frame = _Frame(L, v, ample)
    vv = L.square(v)
    R = _radius(frame, region, vv)
    found = []
    for t, ok in levels:
        for a in frame.classes(t, R):
            a2 = L.square(a)
            if not ok(a2) or a2 * vv >= t * t:
                continue
            a0 = project_to_vperp(L, v, a)
            if _meets(L, a0, region):
                found.append(a)
    return frame, found


def _walls_from(L, v, ample, classes) -> tuple[WallRecord, ...]:
    best: dict[tuple, tuple] = {}
    for a in classes:
        n = _oriented_normal(L, v, a, ample)
        if n not in best or _witness_key(a) < _witness_key(best[n]):
            best[n] = a
    out = []
    for n, a in sorted(best.items()):
        H = make_wall_lattice(L, v, a)
        cl = classify(H)
        out.append(WallRecord(n, a, L.square(a), L.pairing(v, a), cl.kind.value,
                              cl.totally_semistable.value))
    return tuple(out)


def nef_walls(L: Lattice, v, region: SearchRegion, ample) -> ConeDescription:
    """Hyperplanes ``v^⊥ ∩ a^⊥`` meeting ``region`` for ``a^2 >= -2``, ``0 <= (v, a) <= v^2/2``.

    Completeness: hyperbolicity of ``<v, a>`` gives ``a0^2 in [-2 - v^2/4, 0)``;
    if ``a0^⊥`` contains a class ``D`` of the region then
    ``|a0|_A^2 <= (2 gamma^2 - 1) |a0^2|`` with ``gamma = (D, A) / sqrt(D^2 A^2)``,
    which bounds the coordinates of ``a0``.
    """
    vv = L.square(v)
    levels = [(t, lambda a2: a2 >= -2) for t in range(0, vv // 2 + 1)]
    frame, found = _scan(L, v, region, ample, levels)
    return ConeDescription(frame.perp, "nef", _walls_from(L, tuple(v), _frac_vec(ample), found))


def movable_walls(L: Lattice, v, region: SearchRegion, ample) -> ConeDescription:
    """Walls from spherical ``s ∈ v^⊥`` and isotropic ``w`` with ``(w, v) ∈ {1, 2}``."""
    levels = [(0, lambda a2: a2 == -2), (1, lambda a2: a2 == 0), (2, lambda a2: a2 == 0)]
    frame, found = _scan(L, v, region, ample, levels)
    return ConeDescription(frame.perp, "movable", _walls_from(L, tuple(v), _frac_vec(ample), found))


def mori_generators(L: Lattice, v, region: SearchRegion, ample) -> ConeDescription:
    """Curve classes ``a0`` (projections) dual to the nef walls met by ``region``."""
    vv = L.square(v)
    levels = [(t, lambda a2: a2 >= -2) for t in range(0, vv // 2 + 1)]
    frame, found = _scan(L, v, region, ample, levels)
    ample = _frac_vec(ample)
    gens: dict[tuple, tuple] = {}
    for a in found:
        a0 = project_to_vperp(L, v, a)
        if _pair(L, a0, ample) < 0:
            a0 = tuple(-x for x in a0)
        key = primitive_direction(a0)
        if key not in gens or _witness_key(a) < _witness_key(gens[key][1]):
            gens[key] = (a0, a)
    items = sorted(gens.items())
    return ConeDescription(frame.perp, "mori", (),
                           tuple(g[0] for _, g in items), tuple(g[1] for _, g in items))


def exceptional_sources(L: Lattice, v, ample, norm_bound: int = 200) -> list[tuple]:
    """Pairs ``(D, a)``: ``a`` spherical in ``v^⊥`` with ``D = ±a``, or ``a``
    isotropic with ``(v, a) ∈ {1, 2}`` and ``D = ±(v^2 a - (v, a) v)``.

    The sign of ``D`` makes ``(D, ample) >= 0``; ``a`` is listed as found.
    Only classes with ``|a0|_A^2 <= norm_bound`` are enumerated.
    """
    v = _check_v(L, v)
    ample = _frac_vec(ample)
    frame = _Frame(L, v, ample)
    vv = L.square(v)
    out = []
    for t, target in ((0, -2), (1, 0), (2, 0)):
        for a in frame.classes(t, Fraction(norm_bound)):
            if L.square(a) != target:
                continue
            if t == 0:
                if _pair(L, a, ample) < 0 or (_pair(L, a, ample) == 0 and a < tuple(-x for x in a)):
                    a = tuple(-x for x in a)
                D = a
            else:
                D = tuple(vv * ai - t * vi for ai, vi in zip(a, v))
                if _pair(L, D, ample) < 0:
                    D = tuple(-x for x in D)
            out.append((D, a))
    return sorted(set(out))


def effective_generators(L: Lattice, v, ample, norm_bound: int = 200) -> ConeDescription:
    """Exceptional generators of the effective cone, one per ray.

    See :func:`exceptional_sources`; the list is infinite in general, hence
    flagged incomplete unless ``v^⊥`` has rank one.
    """
    gens: dict[tuple, tuple] = {}
    for D, a in exceptional_sources(L, v, ample, norm_bound):
        key = primitive_direction(D)
        if key not in gens or _witness_key(a) < _witness_key(gens[key][1]):
            gens[key] = (D, a)
    items = sorted(gens.values())
    perp = vperp_basis(L, v)
    return ConeDescription(perp, "effective", (), tuple(D for D, _ in items),
                           tuple(a for _, a in items), complete=perp.rank <= 1)


# ---------------------------------------------------------------------------
# Hassett-Tschinkel bound and witnesses


def ht_bound_check(L: Lattice, v, a) -> tuple[Fraction, bool]:
    """``(a0^2, a0^2 >= -(n + 3) / 2)`` with ``2n = v^2 + 2``."""
    vv = L.square(v)
    t = L.pairing(v, a)
    if L.square(a) < -2 or 2 * abs(t) > vv:
        raise LatticeError("need a^2 >= -2 and |(v, a)| <= v^2/2")
    q = Fraction(L.square(a)) - Fraction(t * t, vv)
    n = Fraction(vv + 2, 2)
    return q, q >= -(n + 3) / 2


def ht_witness(L: Lattice, v, a0):
    """An integral ``a = a0 + (k / v^2) v`` with ``|k| <= n - 1`` and
    ``k^2 >= v^2 (-2 - a0^2)``, or None."""
    vv = L.square(v)
    a0 = _frac_vec(a0)
    if _pair(L, a0, v) != 0:
        raise LatticeError("a0 must lie in v-perp")
    q = _pair(L, a0, a0)
    n = (vv + 2) // 2
    for k in sorted(range(-(n - 1), n), key=lambda k: (abs(k), -k)):
        if k * k < vv * (-2 - q):
            continue
        a = [x + Fraction(k, vv) * vi for x, vi in zip(a0, v)]
        if all(x.denominator == 1 for x in a):
            return tuple(int(x) for x in a)
    return None


# ---------------------------------------------------------------------------
# Weyl chamber descent


def weyl_map_to_movable(L: Lattice, v, D, exceptional: Sequence):
    """Reflect ``D`` until ``(D, E) >= 0`` for every listed exceptional class.

    Returns ``(D', word)`` where ``word`` lists the classes reflected in, in
    order; ``rho_E(D) = D - 2 ((D, E) / E^2) E``.
    """
    D = _frac_vec(D)
    if _pair(L, D, D) <= 0:
        raise LatticeError("D must be strictly positive")
    if _pair(L, D, v) != 0:
        raise LatticeError("D must lie in v-perp")
    Es = [tuple(E) for E in exceptional]
    for E in Es:
        if L.square(E) >= 0:
            raise LatticeError(f"exceptional class {E} must have negative square")
    word = []
    for _ in range(100000):
        worst, score = None, 0
        for E in Es:
            p = _pair(L, D, E)
            if p < 0:
                s = Fraction(p) ** 2 / -L.square(E)
                if s > score:
                    worst, score = E, s
        if worst is None:
            return D, word
        k = 2 * Fraction(_pair(L, D, worst), L.square(worst))
        D = tuple(x - k * e for x, e in zip(D, worst))
        word.append(worst)
    raise ArithmeticError("Weyl descent did not terminate")  # pragma: no cover


# ---------------------------------------------------------------------------
# Lagrangian fibrations


@dataclass(frozen=True)
class FibrationClasses:
    classes: tuple
    complete: bool

    def __bool__(self):
        return bool(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)


def fibration_classes(L: Lattice, v, bound: int = 20) -> FibrationClasses:
    """Primitive isotropic classes of ``v^⊥`` (up to sign).

    For ``rank v^⊥ = 2`` the answer is exact (one class per rational null
    ray); otherwise all primitive solutions with coordinates ``<= bound``
    in a basis of ``v^⊥`` are returned and the result is flagged incomplete.
    """
    v = _check_v(L, v)
    P = vperp_basis(L, v)
    G = P.restricted_gram
    if P.rank == 1:
        return FibrationClasses((P.basis[0],) if G[0][0] == 0 else (), True)
    if P.rank == 2:
        rays = isotropic_primitive(BinaryForm.from_gram(G))
        out = tuple(P.embed(r) for r in rays)
        return FibrationClasses(out, True)
    out = set()
    k = P.rank
    for y in itertools.product(range(-bound, bound + 1), repeat=k):
        if not any(y) or content(y) != 1:
            continue
        first = next(x for x in y if x)
        if first < 0:
            continue
        if sum(y[i] * G[i][j] * y[j] for i in range(k) for j in range(k)) == 0:
            out.add(P.embed(y))
    return FibrationClasses(tuple(sorted(out)), False)


# ---------------------------------------------------------------------------
# central charges


@dataclass(frozen=True)
class CentralChargeVector:
    """``Omega = re + i im`` in the Mukai lattice tensored with Q."""

    re: RationalVector
    im: RationalVector

    def __post_init__(self):
        object.__setattr__(self, "re", _frac_vec(self.re))
        object.__setattr__(self, "im", _frac_vec(self.im))

    def scale(self, x, y=0) -> "CentralChargeVector":
        """Multiply by the complex number ``x + i y``."""
        x, y = Fraction(x), Fraction(y)
        return CentralChargeVector(tuple(x * r - y * i for r, i in zip(self.re, self.im)),
                                   tuple(y * r + x * i for r, i in zip(self.re, self.im)))


def central_charge_to_divisor(L: Lattice, v, omega: CentralChargeVector) -> RationalVector:
    """``Im(Omega / -(Omega, v))``, a rational class in ``v^⊥``."""
    p = _pair(L, omega.re, v)
    q = _pair(L, omega.im, v)
    den = p * p + q * q
    if den == 0:
        raise ZeroDivisionError("(Omega, v) = 0: central charge is singular on v")
    return tuple((q * r - p * i) / den for r, i in zip(omega.re, omega.im))

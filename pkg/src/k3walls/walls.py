"""Rank-two wall lattices and the classification of walls.

A potential wall is encoded by the saturated rank-two sublattice ``H``
spanned by ``v`` and one more class ``a``.  All computations take place in
coordinates of a basis of ``H``; the ambient vectors are recovered through
:meth:`WallLattice.to_ambient`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .lattice import Lattice, LatticeError, Sublattice, content, saturate
from .quadratic import (BinaryForm, Point, apply, inverse, isotropic_primitive,
                        orbit_representatives, _finite_solutions)


def _det(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _neg(p: Point) -> Point:
    return (-p[0], -p[1])


@dataclass(frozen=True)
class NotHyperbolic:
    """Returned when ``span(v, a)`` is not of signature (1, 1); such classes never give walls."""

    gram2: BinaryForm


@dataclass(frozen=True)
class WallLattice:
    sublattice: Sublattice
    gram2: BinaryForm
    v_coords: Point

    @classmethod
    def from_gram(cls, gram: Sequence[Sequence[int]], v: Sequence[int]) -> "WallLattice":
        """An abstract rank-two lattice, with ``v`` given in its coordinates."""
        L = Lattice(gram)
        if L.rank != 2:
            raise LatticeError("a wall lattice has rank two")
        sub = Sublattice(L, ((1, 0), (0, 1)), L.gram)
        H = cls(sub, BinaryForm.from_gram(gram), (int(v[0]), int(v[1])))
        H._validate()
        return H

    def _validate(self):
        if not self.gram2.is_hyperbolic:
            raise LatticeError(f"wall lattice {self.gram2.gram} is not hyperbolic")
        if content(self.v_coords) != 1:
            raise LatticeError(f"v={self.v_coords} is not primitive in H")
        if self.gram2(*self.v_coords) <= 0:
            raise LatticeError("v must have positive square")

    @property
    def v(self) -> Point:
        return self.v_coords

    @property
    def v_square(self) -> int:
        return self.gram2(*self.v_coords)

    def pair(self, p, q):
        return self.gram2.pair(p, q)

    def pair_v(self, p):
        return self.gram2.pair(self.v_coords, p)

    def to_ambient(self, p: Sequence[int]) -> tuple:
        return self.sublattice.embed(p)

    def from_ambient(self, u: Sequence[int]) -> Point:
        c = self.sublattice.coordinates(u)
        return (c[0], c[1])

    def reflect(self, s: Point, p: Point) -> Point:
        if self.gram2(*s) != -2:
            raise LatticeError("reflection needs a spherical class")
        k = self.pair(p, s)
        return (p[0] + k * s[0], p[1] + k * s[1])

    def vperp_direction(self) -> Point:
        """Primitive generator ``n0`` of ``v^⊥ ∩ H``, with ``det(v, n0) > 0``."""
        Q, (v0, v1) = self.gram2, self.v_coords
        x, y = -(Q.b * v0 + Q.c * v1), Q.a * v0 + Q.b * v1
        g = gcd(x, y)
        n0 = (x // g, y // g)
        return n0 if _det(self.v_coords, n0) > 0 else _neg(n0)

    def classes_with_pairing(self, t: int):
        """``(p, n0)`` such that ``{u : (u, v) = t} = {p + k n0}``, or None if empty."""
        Q, (v0, v1) = self.gram2, self.v_coords
        al, be = Q.a * v0 + Q.b * v1, Q.b * v0 + Q.c * v1
        g = gcd(al, be)
        if t % g:
            return None
        al, be, tg = al // g, be // g, t // g
        # extended gcd for al x + be y = tg
        x0, y0 = _bezout(al, be)
        return (x0 * tg, y0 * tg), self.vperp_direction()

    def solve_square_on_level(self, t: int, target: int) -> list[Point]:
        """All classes ``u`` with ``(u, v) = t`` and ``u^2 = target`` (finitely many)."""
        line = self.classes_with_pairing(t)
        if line is None:
            return []
        p, n0 = line
        # Q(p + k n0) = A k^2 + 2 B k + C
        A, B, C = self.gram2(*n0), self.pair(p, n0), self.gram2(*p) - target
        out = []
        disc = B * B - A * C
        if disc < 0:
            return []
        r = isqrt(disc)
        if r * r != disc:
            return []
        for num in {-B + r, -B - r}:
            if num % A == 0:
                k = num // A
                out.append((p[0] + k * n0[0], p[1] + k * n0[1]))
        return sorted(out)

    def level_range(self, t: int, min_square: int) -> list[Point]:
        """All classes ``u`` with ``(u, v) = t`` and ``u^2 >= min_square``."""
        line = self.classes_with_pairing(t)
        if line is None:
            return []
        p, n0 = line
        A, B, C = self.gram2(*n0), self.pair(p, n0), self.gram2(*p) - min_square
        # A < 0: A k^2 + 2 B k + C >= 0 on a bounded interval
        disc = B * B - A * C
        if disc < 0:
            return []
        r = isqrt(disc)
        lo = Fraction(-B + r + 1, A) - 1
        hi = Fraction(-B - r - 1, A) + 1
        lo, hi = min(lo, hi), max(lo, hi)
        out = []
        for k in range(int(lo) - 1, int(hi) + 2):
            u = (p[0] + k * n0[0], p[1] + k * n0[1])
            if self.gram2(*u) >= min_square:
                out.append(u)
        return out


def _bezout(a: int, b: int) -> tuple[int, int]:
    """``(x, y)`` with ``a x + b y = gcd(a, b)`` (here the gcd is 1)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        x0, y0 = -x0, -y0
    return x0, y0


def make_wall_lattice(L: Lattice, v: Sequence[int], a: Sequence[int]):
    """The saturation of ``span(v, a)``, in a basis ``(v, u)`` with ``a = x v + y u``, ``0 <= x < y``.

    >>> from k3walls.lattice import mukai_from_ns
    >>> make_wall_lattice(mukai_from_ns([[2]]), (1, 0, -6), (2, -3, 5)).gram2
    BinaryForm(a=12, b=7, c=-2)
    """
    v, a = L.check(v), L.check(a)
    if content(v) != 1:
        raise LatticeError(f"v={v} must be primitive")
    if L.square(v) <= 0:
        raise LatticeError("v must have positive square")
    if all(v[i] * a[j] == v[j] * a[i] for i in range(L.rank) for j in range(L.rank)):
        raise LatticeError("a is proportional to v")
    S = saturate(L, [v, a])
    cv = S.coordinates(v)
    ca = S.coordinates(a)
    # complete v to a basis (v, u0) of S
    p, q = cv
    x, y = _bezout(p, q)           # p x + q y = 1
    u0 = (-y, x)                   # det([[p, -y], [q, x]]) = 1
    beta = _det(cv, ca)            # a = alpha v + beta u0
    alpha = _det(ca, u0)           # since det(v, u0) = 1
    sgn = 1 if beta > 0 else -1
    m = abs(beta)
    t = alpha // m
    # u = sgn*u0 + t v, so that a = (alpha - m t) v + m u
    u_sub = (sgn * u0[0] + t * p, sgn * u0[1] + t * q)
    basis = (v, S.embed(u_sub))
    sub = Sublattice(L, basis, L.gram_of(basis))
    form = BinaryForm.from_gram(sub.restricted_gram)
    if not form.is_hyperbolic:
        return NotHyperbolic(form)
    return WallLattice(sub, form, (1, 0))


# ---------------------------------------------------------------------------
# effective cone


class Orientation(str, Enum):
    """Which side of ``v^⊥ ∩ H`` carries the kernel of the central charge.

    ``PLUS`` makes the generator of ``v^⊥ ∩ H`` counterclockwise from ``v``
    effective, ``MINUS`` its negative.
    """

    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class Ray:
    vector: Point | None     # None for an irrational boundary direction
    kind: str                # "spherical", "isotropic" or "irrational"


@dataclass(frozen=True)
class EffectiveCone:
    """Cone in ``H ⊗ R`` spanned by the positive cone and effective spherical classes.

    ``rays`` is ``(clockwise ray, counterclockwise ray)`` as seen from ``v``.
    """

    rays: tuple[Ray, Ray]
    orientation: str
    kernel: Point

    @property
    def irrational_boundary(self) -> bool:
        return any(r.kind == "irrational" for r in self.rays)

    def spherical_rays(self) -> list[Point]:
        return [r.vector for r in self.rays if r.kind == "spherical"]

    @classmethod
    def from_rays(cls, H: WallLattice, r1: Point, r2: Point) -> "EffectiveCone":
        """Cone with explicitly given lattice rays (ordered automatically)."""
        v = H.v_coords
        cw, ccw = (r1, r2) if _det(v, r1) < 0 else (r2, r1)
        kind = lambda r: "spherical" if H.gram2(*r) == -2 else "isotropic"
        return cls((Ray(cw, kind(cw)), Ray(ccw, kind(ccw))), "explicit", H.vperp_direction())


def _is_effective(H: WallLattice, u: Point, ell: Point, delta: int) -> bool:
    """Effectivity with kernel direction ``ell`` (tie broken by ``delta``)."""
    v = H.v_coords
    s = _sign(_det(v, ell))
    h = s * _det(u, ell)
    if h:
        return h > 0
    return delta * _det(v, u) > 0


def _sphericals_all(H: WallLattice):
    """Sphericals as a finite list, or ``(reps, T)`` for the infinite case."""
    Q = H.gram2
    if Q.has_isotropic:
        return _finite_solutions(Q, -2), None
    orb = orbit_representatives(Q, -2)
    return list(orb.reps), orb.generator


def _extreme_spherical(H: WallLattice, ell: Point, delta: int, side: int) -> Point | None:
    """Effective spherical on the ``side`` (+1 ccw, -1 cw) of ``v`` closest to the kernel line."""
    v = H.v_coords
    on_side = lambda u: side * _det(v, u) > 0
    ok = lambda u: on_side(u) and _is_effective(H, u, ell, delta)
    # "farther" from v in the rotation direction
    farther = lambda u, w: side * _det(w, u) > 0
    pts, T = _sphericals_all(H)
    best = None
    if T is None:
        for u in pts:
            if ok(u) and (best is None or farther(u, best)):
                best = u
        return best
    Ti = inverse(T)
    for p in pts:
        start = p if on_side(p) else _neg(p)
        step = T if side * _det(start, apply(T, start)) > 0 else Ti
        back = Ti if step is T else T
        cur = start
        if ok(cur):
            while True:
                nxt = apply(step, cur)
                if not ok(nxt):
                    break
                cur = nxt
        else:
            # effective points accumulate at the null ray behind us
            while not ok(cur):
                cur = apply(back, cur)
        if best is None or farther(cur, best):
            best = cur
    return best


def _null_ray(H: WallLattice, side: int) -> Ray:
    v = H.v_coords
    for r in isotropic_primitive(H.gram2):
        for w in (r, _neg(r)):
            if side * _det(v, w) > 0 and H.pair_v(w) > 0:
                return Ray(w, "isotropic")
    return Ray(None, "irrational")


def effective_cone(H: WallLattice, orientation: str | Orientation = Orientation.PLUS,
                   kernel: Point | None = None) -> EffectiveCone:
    """Effective cone of ``H`` for a kernel direction of the central charge.

    By default the kernel sits next to ``v^⊥ ∩ H`` on the side selected by
    ``orientation``; an explicit negative ``kernel`` direction may be given.
    """
    orientation = Orientation(orientation)
    delta = 1 if orientation is Orientation.PLUS else -1
    ell = H.vperp_direction() if kernel is None else tuple(kernel)
    if kernel is not None and H.gram2(*ell) >= 0:
        raise LatticeError("kernel direction must be negative")
    rays = []
    for side in (-1, 1):
        s = _extreme_spherical(H, ell, delta, side)
        rays.append(Ray(s, "spherical") if s is not None else _null_ray(H, side))
    return EffectiveCone((rays[0], rays[1]), orientation.value, ell)


# ---------------------------------------------------------------------------
# minimal classes and orbits


def minimal_class(H: WallLattice, v: Point, C: EffectiveCone):
    """Reflect ``v`` into the chamber where it pairs non-negatively with the effective sphericals.

    Returns ``(v0, word)``; applying the reflections in ``word`` to ``v0``
    in order gives back ``v``.
    """
    walls = C.spherical_rays()
    cur, applied = tuple(v), []
    changed = True
    while changed:
        changed = False
        for s in walls:
            if H.pair(cur, s) < 0:
                cur = H.reflect(s, cur)
                applied.append(s)
                changed = True
    return cur, list(reversed(applied))


def orbit_list(H: WallLattice, v0: Point, C: EffectiveCone, count: int) -> list[Point]:
    """Orbit elements ``v_{-count} .. v_count`` of the minimal class, in slope order.

    With fewer than two spherical rays the group is finite and the list is
    truncated accordingly.
    """
    s_ray, t_ray = C.rays
    out_neg, out_pos = [], []
    if s_ray.kind == "spherical" and t_ray.kind == "spherical":
        s, t = s_ray.vector, t_ray.vector
        # s_0 = s, s_{-1} = rho_s(t), s_{k-1} = rho_{s_k}(s_{k+1})
        ss = {0: s, -1: H.reflect(s, t)}
        tt = {1: t, 2: H.reflect(t, s)}
        for k in range(-1, -count, -1):
            ss[k - 1] = H.reflect(ss[k], ss[k + 1])
        for k in range(2, count):
            tt[k + 1] = H.reflect(tt[k], tt[k - 1])
        cur = v0
        for i in range(1, count + 1):
            cur = H.reflect(tt[i], cur)
            out_pos.append(cur)
        cur = v0
        for i in range(-1, -count - 1, -1):
            cur = H.reflect(ss[i + 1], cur)
            out_neg.append(cur)
    elif count:
        for ray, bucket in ((s_ray, out_neg), (t_ray, out_pos)):
            if ray.kind == "spherical":
                bucket.append(H.reflect(ray.vector, v0))
    return list(reversed(out_neg)) + [tuple(v0)] + out_pos


# ---------------------------------------------------------------------------
# classification


class WallKind(str, Enum):
    BRILL_NOETHER = "Brill-Noether"
    HILBERT_CHOW = "Hilbert-Chow"
    LI_GIESEKER_UHLENBECK = "Li-Gieseker-Uhlenbeck"
    FLOPPING = "flopping"
    NO_CONTRACTION = "no contraction"

    @property
    def divisorial(self) -> bool:
        return self in (WallKind.BRILL_NOETHER, WallKind.HILBERT_CHOW,
                        WallKind.LI_GIESEKER_UHLENBECK)


class TotallySemistable(str, Enum):
    NO = "no"
    FOR_SOME_ORIENTATION = "for some orientation"
    FOR_ALL_ORIENTATIONS = "for all orientations"


@dataclass(frozen=True)
class WallClassification:
    kind: WallKind
    totally_semistable: TotallySemistable
    witnesses: dict = field(default_factory=dict)   # name -> tuple of H-coordinate classes

    @property
    def label(self) -> str:
        if self.kind.divisorial:
            return "divisorial contraction"
        if self.kind is WallKind.FLOPPING:
            return "flop"
        if self.totally_semistable is not TotallySemistable.NO:
            return "fake wall"
        return "not a wall"


def has_positive_sum_decomposition(H: WallLattice, v: Point | None = None):
    """A pair ``(a, b)`` of positive classes with ``a + b = v``, or None.

    The search is complete: for ``t = (v, a)`` in ``1 .. v^2 - 1`` the
    classes with ``a^2 >= 0`` on that level form a bounded segment.
    """
    v = tuple(v) if v is not None else H.v_coords
    if v != H.v_coords:
        H = WallLattice(H.sublattice, H.gram2, v)
    vv = H.v_square
    for t in range(1, vv // 2 + 1):
        for a in H.level_range(t, 0):
            b = (v[0] - a[0], v[1] - a[1])
            if H.gram2(*b) >= 0 and H.pair_v(b) > 0:
                return a, b
    return None


def _ts_spherical(H: WallLattice) -> Point | None:
    """A spherical ``s`` with ``(s, v) < 0``, of least ``|(s, v)|``; None if none exists."""
    pts, T = _sphericals_all(H)
    cands = []
    for p in pts:
        cands.append(p)
        if T is not None:
            cands += [apply(T, p), apply(inverse(T), p)]
    vals = [abs(H.pair_v(p)) for p in cands if H.pair_v(p)]
    if not vals:
        return None
    for t in range(1, min(vals) + 1):
        sols = H.solve_square_on_level(-t, -2)
        if sols:
            return sols[0]
    raise AssertionError("unreachable: a spherical class was found above")


def classify(H: WallLattice, v: Point | None = None) -> WallClassification:
    """Decide the type of the potential wall associated to ``H``.

    Conditions are tested in the order Brill-Noether, Hilbert-Chow,
    Li-Gieseker-Uhlenbeck, flopping; every condition that holds leaves a
    witness, and ``kind`` is the first one.
    """
    if isinstance(H, NotHyperbolic):
        raise LatticeError("classify needs a hyperbolic wall lattice")
    if v is not None and tuple(v) != H.v_coords:
        H = WallLattice(H.sublattice, H.gram2, tuple(v))
    H._validate()
    Q, vv = H.gram2, H.v_square
    wit: dict[str, tuple] = {}
    kinds = []
    n0 = H.vperp_direction()
    if Q(*n0) == -2:
        wit["brill_noether"] = (n0,)
        kinds.append(WallKind.BRILL_NOETHER)
    iso = []
    for r in isotropic_primitive(Q):
        w = r if H.pair_v(r) > 0 else _neg(r)
        iso.append(w)
    for w in sorted(iso):
        if H.pair_v(w) == 1:
            wit.setdefault("hilbert_chow", (w,))
            kinds.append(WallKind.HILBERT_CHOW)
        elif H.pair_v(w) == 2:
            wit.setdefault("li_gieseker_uhlenbeck", (w,))
            kinds.append(WallKind.LI_GIESEKER_UHLENBECK)
    dec = has_positive_sum_decomposition(H)
    if dec is not None:
        wit["positive_decomposition"] = dec
        kinds.append(WallKind.FLOPPING)
    for t in range(1, vv // 2 + 1):
        sols = H.solve_square_on_level(t, -2)
        if sols:
            wit["flopping_spherical"] = (sols[0],)
            kinds.append(WallKind.FLOPPING)
            break
    order = list(WallKind)
    kind = min(kinds, key=order.index) if kinds else WallKind.NO_CONTRACTION
    if "hilbert_chow" in wit:
        ts = TotallySemistable.FOR_ALL_ORIENTATIONS
    else:
        s = _ts_spherical(H)
        if s is not None:
            wit["totally_semistable_spherical"] = (s,)
            ts = TotallySemistable.FOR_SOME_ORIENTATION
        else:
            ts = TotallySemistable.NO
    return WallClassification(kind, ts, wit)

"""Binary quadratic forms and the Diophantine problems attached to them.

A form is stored through its Gram matrix ``[[a, b], [b, c]]``, so that
``Q(x, y) = a x^2 + 2 b x y + c y^2`` and ``disc = 4 (b^2 - a c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd, isqrt
from typing import Iterator, Sequence

Point = tuple[int, int]
Matrix2 = tuple[tuple[int, int], tuple[int, int]]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _det(p: Sequence, q: Sequence):
    return p[0] * q[1] - p[1] * q[0]


@dataclass(frozen=True)
class BinaryForm:
    a: int
    b: int
    c: int

    @classmethod
    def from_gram(cls, gram: Sequence[Sequence[int]]) -> "BinaryForm":
        if gram[0][1] != gram[1][0]:
            raise ValueError("Gram matrix must be symmetric")
        return cls(int(gram[0][0]), int(gram[0][1]), int(gram[1][1]))

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y

    def pair(self, p: Sequence, q: Sequence):
        return (self.a * p[0] * q[0] + self.b * (p[0] * q[1] + p[1] * q[0])
                + self.c * p[1] * q[1])

    @property
    def gram(self) -> Matrix2:
        return ((self.a, self.b), (self.b, self.c))

    @property
    def det(self) -> int:
        return self.a * self.c - self.b * self.b

    @property
    def disc(self) -> int:
        return 4 * (self.b * self.b - self.a * self.c)

    @property
    def is_hyperbolic(self) -> bool:
        return self.disc > 0

    @property
    def has_isotropic(self) -> bool:
        """True when some nonzero integral vector has Q = 0."""
        return is_square(self.disc)

    def transform(self, M: Sequence[Sequence[int]]) -> "BinaryForm":
        """The form ``p -> Q(M p)``, i.e. Gram ``M^T G M``."""
        (p, q), (r, s) = M
        e1, e2 = (p, r), (q, s)
        return BinaryForm(self.pair(e1, e1), self.pair(e1, e2), self.pair(e2, e2))


@dataclass(frozen=True)
class PellSolution:
    x: int
    y: int
    D: int
    N: int = 1
    minimal: bool = True

    def __post_init__(self):
        if self.x * self.x - self.D * self.y * self.y != self.N:
            raise ValueError("not a solution")


def pell_fundamental(D: int) -> PellSolution:
    """Smallest positive solution of ``x^2 - D y^2 = 1`` via the continued fraction of ``sqrt(D)``.

    >>> pell_fundamental(61).x
    1766319049
    """
    if D <= 0 or is_square(D):
        raise ValueError(f"D={D} must be a positive non-square")
    a0 = isqrt(D)
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - D * q * q != 1:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return PellSolution(p, q, D)


def _unit4(delta: int) -> tuple[int, int]:
    """Smallest ``(t, u)`` with ``u > 0`` and ``t^2 - delta u^2 = 4``."""
    pell = pell_fundamental(delta)
    if delta % 4 == 1:
        # an odd solution, if any, cubes to the fundamental unit of Z[sqrt(delta)]
        limit = int(round((2 * pell.x) ** (1.0 / 3.0))) + 3
        for u in range(1, limit):
            t2 = delta * u * u + 4
            if is_square(t2):
                return isqrt(t2), u
    if delta % 4 == 0:
        p = pell_fundamental(delta // 4) if not is_square(delta // 4) else None
        if p is not None:
            return 2 * p.x, p.y
    return 2 * pell.x, 2 * pell.y


def automorph_generator(Q: BinaryForm) -> Matrix2:
    """Generator of the proper automorphism group of an indefinite form.

    Built from the fundamental solution of ``t^2 - Delta u^2 = 4`` for the
    primitive form; acts on column vectors ``(x, y)``.
    """
    if not Q.is_hyperbolic or Q.has_isotropic:
        raise ValueError("automorphism group is infinite cyclic only for hyperbolic "
                         "forms with non-square discriminant")
    A, B, C = Q.a, 2 * Q.b, Q.c
    g = gcd(gcd(A, B), C)
    A, B, C = A // g, B // g, C // g
    t, u = _unit4(B * B - 4 * A * C)
    return (((t - B * u) // 2, -C * u), (A * u, (t + B * u) // 2))


def apply(M: Matrix2, p: Sequence[int]) -> Point:
    return (M[0][0] * p[0] + M[0][1] * p[1], M[1][0] * p[0] + M[1][1] * p[1])


def inverse(M: Matrix2) -> Matrix2:
    (p, q), (r, s) = M
    det = p * s - q * r
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return ((s * det, -q * det), (-r * det, p * det))


# ---------------------------------------------------------------------------
# generalized Pell equations


def _nagell_window(D: int, N: int, t: int, u: int) -> tuple[int, int]:
    """Range of ``y`` containing a representative of every class of
    ``X^2 - D y^2 = N`` under the unit ``t + u sqrt(D)``."""
    if N > 0:
        lo = 0
        hi = isqrt(u * u * N // (2 * (t + 1))) + 1
    else:
        lo = isqrt(-N // D)
        hi = isqrt(u * u * (-N) // (2 * (t - 1))) + 1
    return lo, hi


def _pqa(P: int, Q: int, D: int) -> Iterator[tuple[int, int, int, int]]:
    """Continued fraction of ``(P + sqrt D) / Q``: yields ``(i, G_{i-1}, B_{i-1}, Q_i)``.

    Stops after the first repeated state, i.e. after one full period.
    """
    s = isqrt(D)
    G2, G1 = -P, Q
    B2, B1 = 1, 0
    seen = set()
    i = 0
    while (P, Q) not in seen:
        seen.add((P, Q))
        if i:
            yield i, G1, B1, Q
        a = (P + s) // Q if Q > 0 else -((P + s) // (-Q)) - 1
        G2, G1 = G1, a * G1 + G2
        B2, B1 = B1, a * B1 + B2
        P = a * Q - P
        Q = (D - P * P) // Q
        i += 1
    yield i, G1, B1, Q


def _negative_pell(D: int) -> tuple[int, int] | None:
    """Fundamental solution of ``x^2 - D y^2 = -1`` if it exists."""
    for i, G, B, Q in _pqa(0, 1, D):
        if G * G - D * B * B == -1:
            return G, B
    return None


def solve_pell_classes(D: int, N: int) -> list[Point]:
    """Fundamental solutions of ``X^2 - D y^2 = N``, one per class.

    Uses the Lagrange-Matthews-Mollin reduction to continued fractions of
    ``(z + sqrt D) / |m|`` with ``z^2 = D mod m`` and ``N = f^2 m``.
    """
    if D <= 0 or is_square(D):
        raise ValueError("D must be a positive non-square")
    if N == 0:
        return []
    neg = None
    out = set()
    f = 1
    while f * f <= abs(N):
        if N % (f * f) == 0:
            m = N // (f * f)
            am = abs(m)
            for z in range(-((am - 1) // 2), am // 2 + 1):
                if (z * z - D) % am:
                    continue
                for i, r, s, Q in _pqa(z, am, D):
                    if Q in (1, -1):
                        if r * r - D * s * s == m:
                            out.add((f * r, f * s) if s >= 0 else (-f * r, -f * s))
                        else:
                            if neg is None:
                                neg = _negative_pell(D) or (0, 0)
                            t, u = neg
                            if (t, u) != (0, 0):
                                X, Y = r * t + s * D * u, r * u + s * t
                                out.add((f * X, f * Y))
                        break
        f += 1
    return sorted(out)


def _pell_classes_bruteforce(D: int, N: int) -> list[Point]:
    """Every solution in the classical window; used to cross-check."""
    pell = pell_fundamental(D)
    lo, hi = _nagell_window(D, N, pell.x, pell.y)
    out = []
    for y in range(lo, hi + 1):
        r = N + D * y * y
        if is_square(r):
            X = isqrt(r)
            out.extend({(X, y), (-X, y)})
    return out


# ---------------------------------------------------------------------------
# representations


def _solve_y(Q: BinaryForm, x: int, n: int) -> list[int]:
    """All integers ``y`` with ``Q(x, y) = n``.  Raises if every ``y`` works."""
    a, b, c = Q.a, Q.b, Q.c
    k = a * x * x - n
    if c == 0:
        lin = 2 * b * x
        if lin == 0:
            if k == 0:
                raise OverflowError("every y is a solution")
            return []
        return [-k // lin] if k % lin == 0 else []
    # c y^2 + 2 b x y + k = 0
    quarter = b * b * x * x - c * k
    if quarter < 0 or not is_square(quarter):
        return []
    r = isqrt(quarter)
    ys = set()
    for num in (-b * x + r, -b * x - r):
        if num % c == 0:
            ys.add(num // c)
    return sorted(ys)


def _all_in_box(Q: BinaryForm, n: int, bound: int) -> list[Point]:
    out = []
    for x in range(-bound, bound + 1):
        try:
            ys = _solve_y(Q, x, n)
        except OverflowError:
            ys = range(-bound, bound + 1)
        out.extend((x, y) for y in ys if -bound <= y <= bound)
    return out


def _swapped(Q: BinaryForm) -> BinaryForm:
    return BinaryForm(Q.c, Q.b, Q.a)


def _divisors(m: int) -> list[int]:
    m = abs(m)
    small = [k for k in range(1, isqrt(m) + 1) if m % k == 0]
    return sorted(set(small + [m // k for k in small]))


def _finite_solutions(Q: BinaryForm, n: int) -> list[Point]:
    """Complete solution set when it is finite (definite, or split with n != 0)."""
    a, b, c = Q.a, Q.b, Q.c
    if Q.disc < 0:
        # a Q = (a x + b y)^2 + det y^2 with det > 0
        det = Q.det
        if a * n < 0:
            return []
        ymax = isqrt(a * n // det) + 1
        out = []
        for y in range(-ymax, ymax + 1):
            out.extend((x, y) for x in _solve_y(_swapped(Q), y, n))
        return sorted(set(out))
    if n == 0:
        raise ValueError("infinitely many representations of 0")
    if a == 0 and c == 0:
        out = []
        if b == 0 or n % (2 * b):
            return []
        m = n // (2 * b)
        for dv in _divisors(m):
            for s in (1, -1):
                out.append((s * dv, m // (s * dv)))
        return sorted(out)
    if a == 0:
        return sorted((x, y) for y, x in _finite_solutions(_swapped(Q), n))
    e = isqrt(b * b - a * c)
    if e == 0:
        raise ValueError("degenerate form: solutions lie on lines")
    out = set()
    for dv in _divisors(a * n):
        for L1 in (dv, -dv):
            L2 = a * n // L1
            # L1 = a x + (b - e) y, L2 = a x + (b + e) y
            if (L2 - L1) % (2 * e):
                continue
            y = (L2 - L1) // (2 * e)
            num = L1 - (b - e) * y
            if num % a == 0:
                out.add((num // a, y))
    return sorted(out)


def _line_minimal_positive(Q: BinaryForm, n: int) -> list[Point]:
    """Minimal positive solution for a rank-one form, ``a Q = (a x + b y)^2``."""
    swap = Q.a == 0
    a, b = (Q.c, Q.b) if swap else (Q.a, Q.b)
    if a * n < 0 or not is_square(a * n):
        return []
    r = isqrt(a * n)
    cands = []
    for m in {r, -r}:
        # points of a u + b w = m, where (u, w) = (y, x) if swapped
        g = gcd(a, b)
        if m % g:
            continue
        a1, b1, m1 = a // g, b // g, m // g
        # particular solution of a1 u + b1 w = m1
        if b1 == 0:
            u0, w0, du, dw = m1 // a1, 0, 0, 1
        else:
            inv = pow(a1, -1, abs(b1)) if abs(b1) > 1 else 0
            u0 = (m1 * inv) % abs(b1) if abs(b1) > 1 else 0
            w0 = (m1 - a1 * u0) // b1
            du, dw = b1, -a1
        x0, y0, dx, dy = (w0, u0, dw, du) if swap else (u0, w0, du, dw)
        pt = _min_positive_on_param(x0, y0, dx, dy)
        if pt is not None:
            cands.append(pt)
    return [min(cands)] if cands else []


def _min_positive_on_param(x0, y0, dx, dy):
    """Least ``(x, y)`` with ``x, y > 0`` on ``(x0 + dx t, y0 + dy t)``, t integer."""
    lo, hi = None, None  # integer bounds on t

    def restrict(c0, dc):
        nonlocal lo, hi
        # need c0 + dc t > 0
        if dc == 0:
            return c0 > 0
        if dc > 0:
            t = (-c0) // dc + 1
            lo = t if lo is None else max(lo, t)
        else:
            t = (c0 - 1) // (-dc)
            hi = t if hi is None else min(hi, t)
        return True

    if not (restrict(x0, dx) and restrict(y0, dy)):
        return None
    if lo is not None and hi is not None and lo > hi:
        return None
    # x (then y) is monotone in t; take the end of the interval where it is least
    grow = dx if dx else dy
    t = lo if grow > 0 else hi
    return (x0 + dx * t, y0 + dy * t)


@dataclass(frozen=True)
class Orbits:
    """Solutions of ``Q = n`` up to the cyclic group generated by ``generator``."""

    reps: tuple[Point, ...]
    generator: Matrix2

    def orbit(self, p: Point, steps: int) -> list[Point]:
        out = [p]
        fwd, back = p, p
        Ti = inverse(self.generator)
        for _ in range(steps):
            fwd = apply(self.generator, fwd)
            back = apply(Ti, back)
            out.extend([fwd, back])
        return out


def _walk(T: Matrix2, p: Point) -> Iterator[Point]:
    """Orbit points ``T^j p`` for ``j >= 1`` until ``|x|`` and ``|y|`` both grow.

    Along an orbit of a hyperbolic automorphism each coordinate is
    ``A l^j + B l^-j``, so its absolute value is unimodal in ``j``; once both
    are strictly increasing they stay so.
    """
    prev = p
    while True:
        cur = apply(T, prev)
        yield cur
        if abs(cur[0]) > abs(prev[0]) and abs(cur[1]) > abs(prev[1]):
            return
        prev = cur


def _canonical(T: Matrix2, Ti: Matrix2, p: Point) -> Point:
    """Orbit representative with the smallest ``(|x|+|y|, x, y)``: walk downhill."""
    key = lambda q: (abs(q[0]) + abs(q[1]), q)
    best = p
    for M in (T, Ti):
        cur = p
        while True:
            nxt = apply(M, cur)
            if key(nxt) < key(cur):
                cur = nxt
                if key(cur) < key(best):
                    best = cur
            else:
                break
    return best


def orbit_representatives(Q: BinaryForm, n: int) -> Orbits:
    """Finitely many solutions of ``Q = n`` meeting every orbit of the automorphism group."""
    T = automorph_generator(Q)
    if n == 0:
        return Orbits((), T)
    swap = Q.a == 0
    F = _swapped(Q) if swap else Q
    a, b = F.a, F.b
    D = b * b - a * F.c
    pell = pell_fundamental(D)
    t, u = pell.x, pell.y
    # order of the unit modulo a, so that its power preserves integrality of x
    period, M = 1, (t, u)
    mod = abs(a)
    while mod > 1 and not (M[0] % mod == 1 and M[1] % mod == 0):
        M = (M[0] * t + D * M[1] * u, M[0] * u + M[1] * t)
        period += 1
    found = set()
    for X, y in solve_pell_classes(D, a * n):
        for sgn in (1, -1):
            P = (sgn * X, sgn * y)
            for _ in range(period):
                num = P[0] - b * P[1]
                if num % a == 0:
                    found.add((P[1], num // a) if swap else (num // a, P[1]))
                P = (t * P[0] + D * u * P[1], u * P[0] + t * P[1])
            P = (sgn * X, sgn * y)
            for _ in range(period):
                P = (t * P[0] - D * u * P[1], -u * P[0] + t * P[1])
                num = P[0] - b * P[1]
                if num % a == 0:
                    found.add((P[1], num // a) if swap else (num // a, P[1]))
    Ti = inverse(T)
    reps = sorted({_canonical(T, Ti, p) for p in found})
    return Orbits(tuple(reps), T)


def _minimal_positive_hyperbolic(Q: BinaryForm, n: int) -> list[Point]:
    orbits = orbit_representatives(Q, n)
    T = orbits.generator
    Ti = inverse(T)
    best = None
    for p in orbits.reps:
        for start in (p, (-p[0], -p[1])):
            for M in (T, Ti):
                for q in [start, *_walk(M, start)]:
                    if q[0] > 0 and q[1] > 0 and (best is None or q < best):
                        best = q
    return [best] if best else []


def represent(Q: BinaryForm, n: int, mode: str = "minimal_positive",
              bound: int | None = None):
    """Solve ``Q(x, y) = n``.

    ``mode`` is ``"minimal_positive"`` (a list with the solution of least
    ``x > 0``, then least ``y > 0``, or empty), ``"all_in_box"`` (every
    solution with ``|x|, |y| <= bound``) or ``"orbit_representatives"``
    (an :class:`Orbits` value).

    >>> represent(BinaryForm(1, 0, -124), 5)
    [(657, 59)]
    """
    if mode == "all_in_box":
        if bound is None or bound < 0:
            raise ValueError("all_in_box needs a non-negative bound")
        return _all_in_box(Q, n, bound)
    if mode == "orbit_representatives":
        return orbit_representatives(Q, n)
    if mode != "minimal_positive":
        raise ValueError(f"unknown mode {mode!r}")
    if Q.a == Q.b == Q.c == 0:
        return [(1, 1)] if n == 0 else []
    if n == 0:
        rays = [r if r[0] >= 0 else (-r[0], -r[1]) for r in isotropic_primitive(Q)]
        pos = sorted(r for r in rays if r[0] > 0 and r[1] > 0)
        return pos[:1]
    if Q.disc == 0:
        return _line_minimal_positive(Q, n)
    if Q.disc > 0 and not Q.has_isotropic:
        return _minimal_positive_hyperbolic(Q, n)
    pos = [p for p in _finite_solutions(Q, n) if p[0] > 0 and p[1] > 0]
    return [min(pos)] if pos else []


def _normalize_ray(x: int, y: int) -> Point:
    g = gcd(x, y)
    x, y = x // g, y // g
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    return (x, y)


def isotropic_primitive(Q: BinaryForm) -> list[Point]:
    """Primitive generators of the rational isotropic lines, first nonzero coordinate positive."""
    a, b, c = Q.a, Q.b, Q.c
    if a == b == c == 0:
        return [(1, 0), (0, 1)]
    if not Q.has_isotropic:
        return []
    rays = set()
    if a == 0:
        rays.add((1, 0))
        if (c, -2 * b) != (0, 0):
            rays.add(_normalize_ray(c, -2 * b))
    else:
        e = isqrt(b * b - a * c)
        for s in (e, -e):
            rays.add(_normalize_ray(-b + s, a))
    return sorted(rays)


# ---------------------------------------------------------------------------
# spherical classes


def _positive_vector(Q: BinaryForm) -> Point:
    for p in [(1, 0), (0, 1), (1, 1), (1, -1)]:
        if Q(*p) > 0:
            return p
    # the positive cone is an open sector, so some small vector lies in it
    for k in range(2, 10 ** 6):
        for p in [(k, 1), (1, k), (k, -1), (1, -k)]:
            if Q(*p) > 0:
                return p
    raise ValueError("form has no positive vector")


def slope_sort(Q: BinaryForm, points: Sequence[Point]) -> list[Point]:
    """Sort negative vectors by branch, then by angle within the branch."""
    p0 = _positive_vector(Q)

    def cmp(u, w):
        bu, bw = _sign(_det(p0, u)), _sign(_det(p0, w))
        if bu != bw:
            return -1 if bu > bw else 1
        return -_sign(_det(u, w))

    return sorted(points, key=cmp_to_key(cmp))


def in_sector(p: Sequence, r1: Sequence, r2: Sequence) -> bool:
    """Is ``p`` in the closed cone spanned by ``r1`` and ``r2`` (angle < pi)?"""
    d = _det(r1, r2)
    if d == 0:
        return _det(r1, p) == 0 and (r1[0] * p[0] + r1[1] * p[1]) > 0
    return _sign(_det(r1, p)) * _sign(d) >= 0 and _sign(_det(p, r2)) * _sign(d) >= 0


def _sector_bound(Q: BinaryForm, r1: Sequence, r2: Sequence) -> int | None:
    """Coordinate bound for ``Q = -2`` points in the sector, if ``Q < 0`` on it."""
    f = lambda lam: Q.pair([(1 - lam) * r1[0] + lam * r2[0], (1 - lam) * r1[1] + lam * r2[1]],
                           [(1 - lam) * r1[0] + lam * r2[0], (1 - lam) * r1[1] + lam * r2[1]])
    q0, q1, qh = Fraction(f(0)), Fraction(f(1)), f(Fraction(1, 2))
    # Q along the segment is quadratic: q(l) = q0 + beta l + alpha l^2
    alpha = 2 * (q0 + q1) - 4 * qh
    beta = q1 - q0 - alpha
    cands = [q0, q1]
    if alpha != 0:
        lv = -beta / (2 * alpha)
        if 0 < lv < 1:
            cands.append(q0 + beta * lv + alpha * lv * lv)
    qmax = max(cands)
    if qmax >= 0:
        return None
    m = max(abs(x) for x in (*r1, *r2))
    # |point| <= m * sqrt(2 / |Q(direction)|)
    return int(m * (isqrt(int(2 / -qmax) + 1) + 1)) + 1


def spherical_enumerate(Q: BinaryForm, bound: int | None = None,
                        sector: tuple[Sequence, Sequence] | None = None) -> list[Point]:
    """All ``(x, y)`` with ``Q = -2`` in a box ``|x|, |y| <= bound`` and/or a sector.

    Hyperbolic forms with non-square discriminant are handled by walking the
    automorphism orbits; other forms by finite enumeration.
    """
    if bound is None and sector is not None:
        bound = _sector_bound(Q, *sector)
    if bound is None:
        if Q.disc < 0 or (Q.is_hyperbolic and Q.has_isotropic):
            pts = _finite_solutions(Q, -2)
        else:
            raise ValueError("an unbounded window: give a box bound or a sector inside Q < 0")
    elif Q.is_hyperbolic and not Q.has_isotropic:
        orbits = orbit_representatives(Q, -2)
        T, Ti = orbits.generator, inverse(orbits.generator)
        inside = lambda p: abs(p[0]) <= bound and abs(p[1]) <= bound
        pts = set()
        for p in orbits.reps:
            for start in (p, (-p[0], -p[1])):
                if inside(start):
                    pts.add(start)
                for M in (T, Ti):
                    prev = start
                    while True:
                        cur = apply(M, prev)
                        if inside(cur):
                            pts.add(cur)
                        elif ((abs(cur[0]) > bound and abs(cur[0]) > abs(prev[0]))
                              or (abs(cur[1]) > bound and abs(cur[1]) > abs(prev[1]))):
                            break
                        prev = cur
    elif Q.disc < 0 or (Q.is_hyperbolic and Q.has_isotropic):
        pts = [p for p in _finite_solutions(Q, -2) if abs(p[0]) <= bound and abs(p[1]) <= bound]
    else:
        pts = _all_in_box(Q, -2, bound)
    if sector is not None:
        pts = [p for p in pts if in_sector(p, *sector)]
    pts = list(set(pts))
    if Q.is_hyperbolic:
        return slope_sort(Q, pts)
    return sorted(pts)

"""Closed forms for Hilbert schemes of points on a K3 of Picard rank one.

Here ``NS(X) = Z H`` with ``H^2 = 2d`` and ``v = (1, 0, 1 - n)``.  Divisors
on the moduli space are written ``H~ - Gamma B`` with

* ``H~ = (0, -1, 0)`` and
* ``B = (-1, 0, 1 - n)``,

both in ``v^⊥``.  A class ``a = (r, c, s)`` cuts out the ray with
``Gamma = -2 d c / (s + (n - 1) r)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt

from .lattice import Lattice, mukai_from_ns
from .quadratic import BinaryForm, is_square, pell_fundamental, represent
from .walls import (NotHyperbolic, WallClassification, classify, make_wall_lattice)


class ParallelWallError(ValueError):
    """The wall is parallel to the family of rays ``H~ - Gamma B``."""


@dataclass(frozen=True)
class HilbSetup:
    d: int
    n: int

    def __post_init__(self):
        if self.d < 1 or self.n < 2:
            raise ValueError("need d >= 1 and n >= 2")

    @cached_property
    def lattice(self) -> Lattice:
        return mukai_from_ns([[2 * self.d]])

    @property
    def v(self) -> tuple[int, int, int]:
        return (1, 0, 1 - self.n)

    @property
    def H(self) -> tuple[int, int, int]:
        return (0, -1, 0)

    @property
    def B(self) -> tuple[int, int, int]:
        return (-1, 0, 1 - self.n)

    def divisor(self, gamma) -> tuple:
        """``H~ - gamma B`` as a (rational) Mukai vector."""
        g = Fraction(gamma)
        return (g, -1, g * (self.n - 1))

    def q(self, gamma) -> Fraction:
        """Beauville-Bogomolov square of ``H~ - gamma B``."""
        return 2 * self.d - 2 * (self.n - 1) * Fraction(gamma) ** 2


def gamma_of_wall(setup: HilbSetup, a) -> Fraction:
    """The ``Gamma`` with ``(H~ - Gamma B, a) = 0``.

    >>> gamma_of_wall(HilbSetup(1, 7), (2, -3, 5))
    Fraction(6, 17)
    """
    r, c, s = a
    den = s + (setup.n - 1) * r
    if den == 0:
        raise ParallelWallError(f"the wall of {tuple(a)} is parallel to the ray family")
    return Fraction(-2 * setup.d * c, den)


@dataclass(frozen=True)
class MovableBoundary:
    case: int
    gamma: Fraction
    witness: tuple          # isotropic ray (case 1), spherical (case 2) or isotropic (case 3)
    pell: tuple[int, int] | None = None


def movable_hilb(d: int, n: int) -> MovableBoundary:
    """Second boundary ray of the movable cone of ``Hilb^n``."""
    m = d * (n - 1)
    if is_square(m):
        # d / (n - 1) = (k / h)^2
        root = isqrt(m)
        g = gcd(root, n - 1)
        k, h = root // g, (n - 1) // g
        return MovableBoundary(1, Fraction(k, h), (k, -h, k * (n - 1)))
    sol = represent(BinaryForm(n - 1, 0, -d), 1)
    if sol:
        X, Y = sol[0]
        return MovableBoundary(2, Fraction(d * Y, X * (n - 1)), (X, -Y, (n - 1) * X), (X, Y))
    D = d * (n - 1)
    pell = pell_fundamental(D)
    t, u = pell.x, pell.y
    X, Y = t, u
    # (X, Y) and (-X, -Y) give the same ratio; some power has X = 1 mod (n-1)
    for _ in range(2 * (n - 1) ** 2 + 2):
        if (X + 1) % (n - 1) == 0:
            break
        if (X - 1) % (n - 1) == 0:
            X, Y = -X, -Y
            break
        X, Y = t * X + D * u * Y, u * X + t * Y
    else:  # pragma: no cover - excluded by the case analysis
        raise ArithmeticError(f"no admissible solution of X^2 - {D} Y^2 = 1")
    if (X + 1) % (2 * (n - 1)) == 0 and Y % 2 == 0 and (X - 1) % 2 == 0:
        w = ((X + 1) // (2 * (n - 1)), -(Y // 2), (X - 1) // 2)
    else:
        w = ((X + 1) // (n - 1), -Y, X - 1)
    return MovableBoundary(3, Fraction(d * Y, X), w, (X, Y))


EQUALS_MOVABLE = "equals_movable"


@dataclass(frozen=True)
class NefBoundary:
    gamma: Fraction
    spherical: tuple[int, int, int]
    pell: tuple[int, int]


def nef_hilb_n2(d: int):
    """Nef boundary of ``Hilb^2``: a :class:`NefBoundary` or ``EQUALS_MOVABLE``.

    The flopping class comes from the least positive solution of
    ``X^2 - 4 d Y^2 = 5`` and gives ``Gamma = 2 d Y / X``.
    """
    sol = represent(BinaryForm(1, 0, -4 * d), 5)
    if not sol:
        return EQUALS_MOVABLE
    X, Y = sol[0]
    gamma = Fraction(2 * d * Y, X)
    if gamma >= movable_hilb(d, 2).gamma:
        return EQUALS_MOVABLE
    return NefBoundary(gamma, ((X + 1) // 2, -Y, (X - 1) // 2), (X, Y))


# ---------------------------------------------------------------------------
# wall tables


@dataclass(frozen=True)
class WallRow:
    gamma: Fraction
    a: tuple[int, int, int]
    a_square: int
    pairing: int
    classification: WallClassification

    @property
    def label(self) -> str:
        return self.classification.label


def _candidates(setup: HilbSetup, t: int, gmax: Fraction, case1: bool):
    """Classes ``a`` with ``(v, a) = t``, ``a^2 >= -2``, hyperbolic ``<v, a>``, ``0 <= Gamma <= gmax``.

    Writing ``x = s + (n-1) r = 2(n-1) r - t``, the condition ``a^2 >= -2``
    reads ``x^2 - 4 d (n-1) c^2 <= 4(n-1) + t^2`` while ``Gamma <= gmax``
    gives ``2 d |c| <= gmax |x|``; together these bound ``|x|``.
    """
    d, n = setup.d, setup.n
    L, v = setup.lattice, setup.v
    rhs = 4 * (n - 1) + t * t
    if case1:
        xmax = rhs
    else:
        coef = 1 - gmax * gmax * (n - 1) / d      # > 0 when gmax is interior
        xmax = isqrt(int(rhs / coef) + 1) + 1
    vv = L.square(v)
    for x in range(-xmax, xmax + 1):
        if (x + t) % (2 * (n - 1)):
            continue
        r = (x + t) // (2 * (n - 1))
        s = (n - 1) * r - t
        if x == 0:
            cs = [0]
        else:
            cmax = int(gmax * abs(x) / (2 * d))
            low = x * x - rhs
            cmin = 0 if low <= 0 else isqrt(low // (4 * d * (n - 1)))
            sign = -1 if x > 0 else 1
            cs = [sign * c for c in range(max(cmin - 1, 0), cmax + 1)]
        for c in cs:
            a = (r, c, s)
            a2 = L.square(a)
            if a2 < -2 or a2 * vv >= t * t:
                continue
            if c == 0 and x == 0:
                continue
            yield a


def _canonical_witness(cands, pairing, flop_range):
    """Pick a printable witness for one hyperplane.

    Preference: pairing inside the flop range, then smallest max-norm,
    then non-negative rank, then lexicographic order.
    """
    return min(cands, key=lambda a: (pairing(a) > flop_range, max(abs(x) for x in a),
                                     a[0] < 0, a))


def walls_table(d: int, n: int, fake_window: int = 1) -> list[WallRow]:
    """All walls with ``0 <= Gamma <= Gamma_mov``, sorted by ``Gamma``.

    Candidates are classes with ``a^2 >= -2`` and
    ``0 <= (v, a) <= v^2/2 + fake_window``; the extra window beyond the
    flop range catches fake walls of small pairing.  Rows whose lattice
    is not a wall are omitted.
    """
    setup = HilbSetup(d, n)
    mov = movable_hilb(d, n)
    gmax = mov.gamma
    L, v = setup.lattice, setup.v
    vv = L.square(v)
    by_gamma: dict[Fraction, list] = {}
    for t in range(0, vv // 2 + fake_window + 1):
        for a in _candidates(setup, t, gmax, mov.case == 1):
            try:
                g = gamma_of_wall(setup, a)
            except ParallelWallError:
                continue
            if g < 0 or g > gmax or (mov.case == 1 and g == gmax):
                continue
            by_gamma.setdefault(g, []).append(a)
    rows = []
    for g in sorted(by_gamma):
        a = _canonical_witness(by_gamma[g], lambda u: L.pairing(v, u), vv // 2)
        H = make_wall_lattice(L, v, a)
        if isinstance(H, NotHyperbolic):  # pragma: no cover - filtered above
            continue
        cl = classify(H)
        if cl.label == "not a wall":
            continue
        rows.append(WallRow(g, a, L.square(a), L.pairing(v, a), cl))
    return rows

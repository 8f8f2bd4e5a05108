"""Intersection theory and cones of the (1,1,1,1) divisor X in (P^1)^4.

Divisor classes on X are written by their type ``(a1, a2, a3, a4)`` in the
basis pulled back from the four P^1 factors.  The generators are

* ``Y1..Y4``: fibers of the four projections, type ``e_i`` (nef cone rays);
* ``S123..S234``: exceptional divisors of the contractions to (P^1)^3,
  type ``-1`` in the missing slot and ``1`` elsewhere;
* ``l123..l234``: rulings of ``S_ijk``, recorded only by their pairing
  with the ``Y_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from . import linalg
from .exactnum import Poly2, U, as_rational, fmt_rational, integrate_interval

Coord = Union[Fraction, Poly2]

INDICES = (1, 2, 3, 4)
TRIPLES = tuple(itertools.combinations(INDICES, 3))


def _coerce(x) -> Coord:
    if isinstance(x, Poly2):
        return x.constant_value() if x.is_constant() else x
    return as_rational(x)


@dataclass(frozen=True)
class MultiDegree:
    """Divisor class of type ``(a1, a2, a3, a4)``; entries exact or polynomial in u."""

    coords: tuple[Coord, Coord, Coord, Coord]

    def __init__(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, Poly2)):
            coords = tuple(coords[0])
        if len(coords) != 4:
            raise ValueError("a multidegree has exactly four entries")
        object.__setattr__(self, "coords", tuple(_coerce(c) for c in coords))

    def __getitem__(self, i: int) -> Coord:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other: MultiDegree) -> MultiDegree:
        return MultiDegree(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: MultiDegree) -> MultiDegree:
        return MultiDegree(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> MultiDegree:
        return MultiDegree(*(-a for a in self))

    def __mul__(self, c) -> MultiDegree:
        return MultiDegree(*(c * a for a in self))

    __rmul__ = __mul__

    def is_numeric(self) -> bool:
        return all(isinstance(a, Fraction) for a in self)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    def at(self, u) -> MultiDegree:
        """Specialise polynomial entries at a rational value of u."""
        return MultiDegree(*(a.eval_at(u) if isinstance(a, Poly2) else a for a in self))

    def permuted(self, perm: Sequence[int]) -> MultiDegree:
        return MultiDegree(*(self.coords[p] for p in perm))

    def __str__(self) -> str:
        return "(" + ", ".join(fmt_rational(a) if isinstance(a, Fraction) else str(a) for a in self) + ")"


ANTICANONICAL = MultiDegree(1, 1, 1, 1)
ZERO = MultiDegree(0, 0, 0, 0)


def fiber_class(i: int) -> MultiDegree:
    return MultiDegree(*(int(k == i) for k in INDICES))


def exceptional_class(triple: Iterable[int]) -> MultiDegree:
    triple = tuple(triple)
    return MultiDegree(*(1 if k in triple else -1 for k in INDICES))


def ruling_profile(triple: Iterable[int]) -> tuple[int, int, int, int]:
    """Intersection numbers ``(Y_1.l, ..., Y_4.l)`` of the ruling ``l_ijk``."""
    triple = tuple(triple)
    return tuple(int(k not in triple) for k in INDICES)


def complement(idx: Iterable[int]) -> tuple[int, ...]:
    idx = set(idx)
    return tuple(k for k in INDICES if k not in idx)


@dataclass(frozen=True)
class NamedGenerator:
    """A named cone generator: a divisor class or a curve's intersection profile."""

    tag: str
    class_: MultiDegree | None = None
    profile: tuple[int, int, int, int] | None = None

    @property
    def is_divisor(self) -> bool:
        return self.class_ is not None

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(int(ch) for ch in self.tag[1:])

    def __str__(self) -> str:
        return self.tag


def generator(tag: str) -> NamedGenerator:
    """Look up ``"Y1"``, ``"S234"``, ``"l123"`` and so on."""
    kind, digits = tag[:1], tag[1:]
    try:
        idx = tuple(int(d) for d in digits)
    except ValueError:
        raise KeyError(tag) from None
    if kind == "Y" and len(idx) == 1 and idx[0] in INDICES:
        return NamedGenerator(tag, class_=fiber_class(idx[0]))
    if kind in ("S", "l") and idx in TRIPLES:
        if kind == "S":
            return NamedGenerator(tag, class_=exceptional_class(idx))
        return NamedGenerator(tag, profile=ruling_profile(idx))
    raise KeyError(f"unknown generator {tag!r}")


DIVISOR_GENERATORS = tuple(
    [generator(f"Y{i}") for i in INDICES] + [generator("S" + "".join(map(str, t))) for t in TRIPLES]
)
CURVE_GENERATORS = tuple(generator("l" + "".join(map(str, t))) for t in TRIPLES)


def quad_product(d1: MultiDegree, d2: MultiDegree, d3: MultiDegree, d4: MultiDegree) -> Coord:
    """Intersection of four divisor classes on (P^1)^4.

    Since ``H_i^2 = 0`` and ``H_1 H_2 H_3 H_4 = 1`` this is the permanent
    of the 4x4 matrix whose rows are the four types.
    """
    rows = (d1, d2, d3, d4)
    total: Coord = Fraction(0)
    for perm in itertools.permutations(range(4)):
        term: Coord = Fraction(1)
        for row, col in zip(rows, perm):
            term = term * row[col]
        total = total + term
    return _coerce(total)


def triple_on_X(d1: MultiDegree, d2: MultiDegree, d3: MultiDegree) -> Coord:
    """Triple intersection on X, i.e. against the class of X itself."""
    return quad_product(d1, d2, d3, ANTICANONICAL)


def volume(d: MultiDegree) -> Coord:
    """``d^3`` on X; equals the volume when ``d`` is nef."""
    return triple_on_X(d, d, d)


def curve_degree(d: MultiDegree, profile: Sequence[int]) -> Coord:
    """Pairing of a divisor with a curve given by its profile against the Y_i."""
    return _coerce(sum((a * p for a, p in zip(d, profile)), Fraction(0)))


def is_nef(d: MultiDegree) -> bool:
    _require_numeric(d)
    return all(a >= 0 for a in d)


def _require_numeric(d: MultiDegree) -> None:
    if not d.is_numeric():
        raise ValueError(f"class {d} has non-constant entries; specialise u first")


@cache
def pseff_facets() -> tuple[tuple[Fraction, ...], ...]:
    """Inward normals of the facets of the cone spanned by the eight divisor generators.

    Each candidate normal is orthogonal to three independent generators;
    it is kept if every generator lies on its non-negative side.
    """
    gens = [g.class_.coords for g in DIVISOR_GENERATORS]
    facets: set[tuple[Fraction, ...]] = set()
    for trio in itertools.combinations(gens, 3):
        if linalg.rank(trio) < 3:
            continue
        (normal,) = linalg.nullspace(trio)
        for sign in (1, -1):
            n = [sign * x for x in normal]
            if all(sum(a * b for a, b in zip(n, g)) >= 0 for g in gens):
                facets.add(_primitive(n))
    return tuple(sorted(facets))


def _primitive(vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = gcd(*ints) or 1
    return tuple(Fraction(x // g) for x in ints)


def is_pseff(d: MultiDegree) -> bool:
    """Membership in the pseudo-effective cone via its facet inequalities."""
    _require_numeric(d)
    return all(sum(f * a for f, a in zip(facet, d)) >= 0 for facet in pseff_facets())


@cache
def _basis_inverses() -> tuple[list[list[Fraction]], ...]:
    gens = [g.class_.coords for g in DIVISOR_GENERATORS]
    out = []
    for basis in itertools.combinations(gens, 4):
        cols = [[basis[j][i] for j in range(4)] for i in range(4)]
        try:
            out.append(linalg.inverse(cols))
        except ZeroDivisionError:
            continue
    return tuple(out)


def is_pseff_enumerate(d: MultiDegree) -> bool:
    """Brute-force membership: try every basis of four generators.

    By Caratheodory a class in the cone is a non-negative combination of
    some linearly independent set of generators, which extends to a basis
    with zero coefficients.
    """
    _require_numeric(d)
    for inv in _basis_inverses():
        if all(sum(r * x for r, x in zip(row, d)) >= 0 for row in inv):
            return True
    return False


def _threshold(bounds: Iterable[tuple[Fraction, Fraction]]) -> Fraction:
    # each (lhs, rhs) encodes lhs - x * rhs >= 0
    best = None
    for lhs, rhs in bounds:
        if rhs > 0:
            cand = lhs / rhs
            best = cand if best is None else min(best, cand)
        elif rhs == 0 and lhs < 0:
            return Fraction(0)
    if best is None:
        raise ValueError("threshold is unbounded")
    return max(best, Fraction(0))


def nef_threshold(L: MultiDegree, F: MultiDegree) -> Fraction:
    """``sup { x >= 0 : L - x F nef }``."""
    _require_numeric(L)
    _require_numeric(F)
    if F.is_zero():
        raise ValueError("threshold of the zero class is undefined")
    return _threshold(zip(L, F))


def pseff_threshold(L: MultiDegree, F: MultiDegree) -> Fraction:
    """``sup { x >= 0 : L - x F pseudo-effective }``."""
    _require_numeric(L)
    _require_numeric(F)
    if F.is_zero():
        raise ValueError("threshold of the zero class is undefined")
    dot = lambda f, d: sum(a * b for a, b in zip(f, d))  # noqa: E731
    return _threshold((dot(f, L), dot(f, F)) for f in pseff_facets())


class ZariskiError(RuntimeError):
    """A claimed Zariski decomposition failed validation."""


@dataclass(frozen=True)
class ThreefoldChamber:
    u_lo: Fraction
    u_hi: Fraction
    positive: MultiDegree
    negative: dict[str, Poly2] = field(default_factory=dict)

    def volume(self) -> Poly2:
        return Poly2.coerce(volume(self.positive))


@dataclass(frozen=True)
class ThreefoldZariski:
    divisor: str
    chambers: tuple[ThreefoldChamber, ...]

    def chamber_at(self, u) -> ThreefoldChamber:
        u = as_rational(u)
        for ch in self.chambers:
            if ch.u_lo <= u <= ch.u_hi:
                return ch
        raise ValueError(f"u = {u} is outside the pseudo-effective range")


def _validate_chamber(ch: ThreefoldChamber) -> None:
    for u in (ch.u_lo, ch.u_hi):
        p = ch.positive.at(u)
        if not is_nef(p):
            raise ZariskiError(f"P({u}) = {p} is not nef")
        for tag, coeff in ch.negative.items():
            if coeff.eval_at(u) < 0:
                raise ZariskiError(f"negative coefficient of {tag} at u = {u}")
    for tag in ch.negative:
        if not tag.startswith("S"):
            raise ZariskiError(f"negative part may only involve S_ijk, got {tag}")
        ruling = ruling_profile(generator(tag).indices)
        if Poly2.coerce(curve_degree(ch.positive, ruling)) != 0:
            raise ZariskiError(f"P is not trivial on the rulings of {tag}")


def zariski_threefold(F: NamedGenerator | str) -> ThreefoldZariski:
    """Zariski chambers of ``-K_X - u Y_i`` for ``0 <= u <= `` pseff threshold.

    The first wall is the nef threshold.  Past it, the rulings ``l`` with
    ``P . l < 0`` single out the exceptional divisors to subtract, each with
    the coefficient that makes ``P`` trivial on its rulings.
    """
    if isinstance(F, str):
        F = generator(F)
    if not (F.is_divisor and F.tag.startswith("Y")):
        raise ValueError("zariski_threefold expects a fiber class Y_i")
    Y = F.class_
    u_nef = nef_threshold(ANTICANONICAL, Y)
    u_eff = pseff_threshold(ANTICANONICAL, Y)
    D = ANTICANONICAL - U * Y
    chambers = [ThreefoldChamber(Fraction(0), u_nef, D, {})]
    if u_eff > u_nef:
        probe = D.at((u_nef + u_eff) / 2)
        negative: dict[str, Poly2] = {}
        P = D
        for trio in TRIPLES:
            ruling = ruling_profile(trio)
            if curve_degree(probe, ruling) < 0:
                S = exceptional_class(trio)
                c = Poly2.coerce(curve_degree(D, ruling)) / curve_degree(S, ruling)
                negative["S" + "".join(map(str, trio))] = c
                P = P - c * S
        chambers.append(ThreefoldChamber(u_nef, u_eff, P, negative))
    for ch in chambers:
        _validate_chamber(ch)
    return ThreefoldZariski(F.tag, tuple(chambers))


def chambers_for(F: NamedGenerator | str) -> tuple[ThreefoldChamber, ...]:
    if isinstance(F, str):
        F = generator(F)
    if not F.is_divisor:
        raise ValueError(f"{F.tag} is a curve, not a divisor")
    if F.tag.startswith("Y"):
        return zariski_threefold(F).chambers
    u_nef = nef_threshold(ANTICANONICAL, F.class_)
    u_eff = pseff_threshold(ANTICANONICAL, F.class_)
    if u_nef != u_eff:
        raise NotImplementedError(f"no Zariski chambers available for {F.tag}")
    ch = ThreefoldChamber(Fraction(0), u_nef, ANTICANONICAL - U * F.class_, {})
    _validate_chamber(ch)
    return (ch,)


def expected_vanishing_partials(F: NamedGenerator | str) -> list[Fraction]:
    """``(1/(-K)^3) * int vol`` over each Zariski chamber of ``-K_X - uF``."""
    vol_k = as_rational(volume(ANTICANONICAL))
    return [integrate_interval(ch.volume(), ch.u_lo, ch.u_hi) / vol_k for ch in chambers_for(F)]


def S_X(F: NamedGenerator | str) -> Fraction:
    """Expected vanishing order of a prime divisor on X."""
    return sum(expected_vanishing_partials(F), Fraction(0))


def beta(F: NamedGenerator | str) -> Fraction:
    # A_X(F) = 1 for a prime divisor on X
    return 1 - S_X(F)

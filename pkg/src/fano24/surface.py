"""Sextic del Pezzo fiber lattices and parametric Zariski decomposition.

A :class:`DPLattice` fixes a basis, a Gram matrix and the finitely many
negative curves.  Zariski decompositions are computed by growing the
negative support (all curves with negative pairing are added each round,
then the coefficients are re-solved from scratch).  Over a parameter
region the same procedure is run at an interior sample point and the
validity conditions of the resulting support, which are affine in
``(u, v)``, cut the region into chambers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .ambient import MultiDegree, ZariskiError
from .exactnum import Poly2, Region, Scalar, as_rational, fmt_rational

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class DPLattice:
    """Numerical lattice of a del Pezzo fiber.

    ``classes`` names every class the computations refer to (negative
    curves, flag curves, C').  ``effective_extra`` lists effective classes
    of non-negative square that, together with the negative curves, span
    the effective cone; nefness is tested against both.  ``hyperplanes``
    gives the restrictions of the second, third and fourth factor
    hyperplanes when they are expressible in the basis.
    """

    name: str
    curve_names: tuple[str, ...]
    gram: tuple[Vector, ...]
    anticanonical: Vector
    classes: Mapping[str, Vector]
    negative_curves: tuple[str, ...]
    effective_extra: tuple[str, ...] = ()
    hyperplanes: tuple[str, str, str] | None = None

    def __post_init__(self):
        n = len(self.curve_names)
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ValueError("gram matrix has the wrong shape")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(n)):
            raise ValueError("gram matrix is not symmetric")
        if self.pair(self.anticanonical, self.anticanonical) != 6:
            raise ValueError("anticanonical degree must be 6")
        for e in self.negative_curves:
            vec = self.classes[e]
            if self.pair(vec, vec) >= 0:
                raise ValueError(f"{e} is not a negative curve")
            if self.pair(vec, self.anticanonical) != 1:
                raise ValueError(f"{e} does not have anticanonical degree 1")

    @property
    def rank(self) -> int:
        return len(self.curve_names)

    def vector(self, name: str) -> Vector:
        if name == "-K":
            return self.anticanonical
        return self.classes[name]

    def cls(self, name: str) -> SurfaceClass:
        return SurfaceClass(tuple(Poly2.const(x) for x in self.vector(name)), self.name)

    @property
    def anticanonical_class(self) -> SurfaceClass:
        return self.cls("-K")

    def pair(self, a: Sequence, b: Sequence):
        total = Fraction(0)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                g = self.gram[i][j]
                if g:
                    total = total + ai * g * bj
        return total

    def effective_generators(self) -> tuple[str, ...]:
        return self.negative_curves + self.effective_extra

    def support_gram(self, support: Iterable[str]) -> list[list[Fraction]]:
        vecs = [self.vector(e) for e in support]
        return [[self.pair(a, b) for b in vecs] for a in vecs]

    def to_table(self) -> str:
        """Plain-text dump of the exact lattice data."""
        w = max(len(n) for n in self.curve_names)
        lines = [f"lattice {self.name} (rank {self.rank})", "basis: " + " ".join(self.curve_names), "gram:"]
        for name, row in zip(self.curve_names, self.gram):
            lines.append(f"  {name:>{w}}: " + " ".join(f"{fmt_rational(x):>5}" for x in row))
        lines.append("-K = " + _fmt_vec(self.anticanonical))
        lines.append("negative curves:")
        for e in self.negative_curves:
            lines.append(f"  {e} = {_fmt_vec(self.classes[e])}")
        others = [k for k in self.classes if k not in self.negative_curves]
        if others:
            lines.append("other classes:")
            for k in others:
                lines.append(f"  {k} = {_fmt_vec(self.classes[k])}")
        return "\n".join(lines)


def _fmt_vec(vec: Sequence) -> str:
    return "(" + ", ".join(fmt_rational(x) for x in vec) + ")"


def _vec(*xs) -> Vector:
    return tuple(Fraction(x) for x in xs)


SMOOTH = DPLattice(
    name="SMOOTH",
    curve_names=("L", "e1", "e2", "e3"),
    gram=(_vec(1, 0, 0, 0), _vec(0, -1, 0, 0), _vec(0, 0, -1, 0), _vec(0, 0, 0, -1)),
    anticanonical=_vec(3, -1, -1, -1),
    classes={
        # hexagon of (-1)-curves, listed cyclically
        "e1": _vec(0, 1, 0, 0),
        "L-e1-e2": _vec(1, -1, -1, 0),
        "e2": _vec(0, 0, 1, 0),
        "L-e2-e3": _vec(1, 0, -1, -1),
        "e3": _vec(0, 0, 0, 1),
        "L-e1-e3": _vec(1, -1, 0, -1),
        # conic bundle fibers = restrictions of the other three factor hyperplanes
        "L-e1": _vec(1, -1, 0, 0),
        "L-e2": _vec(1, 0, -1, 0),
        "L-e3": _vec(1, 0, 0, -1),
        "C'": _vec(3, -1, -1, -1),
    },
    negative_curves=("e1", "L-e1-e2", "e2", "L-e2-e3", "e3", "L-e1-e3"),
    hyperplanes=("L-e1", "L-e2", "L-e3"),
)

# Basis (-K, Z, E1).  E1 passes through the A1 point, hence E1^2 = -1/2.
# The Gram matrix is degenerate: -K = 2Z + 2E1 numerically.
SING = DPLattice(
    name="SING",
    curve_names=("-K", "Z", "E1"),
    gram=(_vec(6, 2, 1), _vec(2, 0, 1), (Fraction(1), Fraction(1), Fraction(-1, 2))),
    anticanonical=_vec(1, 0, 0),
    classes={"Z": _vec(0, 1, 0), "E1": _vec(0, 0, 1), "C'": _vec(1, 0, 0)},
    negative_curves=("E1",),
    effective_extra=("Z",),
)

PRESETS = {"SMOOTH": SMOOTH, "SING": SING}


@dataclass(frozen=True)
class SurfaceClass:
    """Class on a fiber lattice with coefficients polynomial in (u, v)."""

    coords: tuple[Poly2, ...]
    lattice: str

    def _check(self, other: SurfaceClass) -> None:
        if not isinstance(other, SurfaceClass):
            raise TypeError(f"expected SurfaceClass, got {type(other).__name__}")
        if other.lattice != self.lattice:
            raise ValueError(f"lattice mismatch: {self.lattice} vs {other.lattice}")

    def __add__(self, other: SurfaceClass) -> SurfaceClass:
        self._check(other)
        return SurfaceClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __sub__(self, other: SurfaceClass) -> SurfaceClass:
        self._check(other)
        return SurfaceClass(tuple(a - b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __neg__(self) -> SurfaceClass:
        return SurfaceClass(tuple(-a for a in self.coords), self.lattice)

    def __mul__(self, c: Poly2 | Scalar) -> SurfaceClass:
        return SurfaceClass(tuple(Poly2.coerce(c) * a for a in self.coords), self.lattice)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coords)

    def is_affine(self) -> bool:
        return all(a.is_affine() for a in self.coords)

    def at(self, u: Scalar, v: Scalar) -> Vector:
        return tuple(a.eval_at(u, v) for a in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.coords) + ")"


def intersect(a: SurfaceClass, b: SurfaceClass, lattice: DPLattice | None = None) -> Poly2:
    """``a^T G b`` as a polynomial in (u, v)."""
    a._check(b)
    lattice = lattice or PRESETS[a.lattice]
    if lattice.name != a.lattice:
        raise ValueError(f"lattice mismatch: {a.lattice} vs {lattice.name}")
    total = Poly2()
    for i, ai in enumerate(a.coords):
        for j, bj in enumerate(b.coords):
            g = lattice.gram[i][j]
            if g and not ai.is_zero() and not bj.is_zero():
                total = total + ai * bj * g
    return total


def restrict_to_fiber(d: MultiDegree, lattice: DPLattice) -> SurfaceClass:
    """Restriction of a class of type (a1, a2, a3, a4) to a fiber of the first projection.

    Uses the hyperplane classes when the lattice provides them; otherwise
    only classes with ``a2 = a3 = a4 = a`` are supported, which restrict
    to ``a * (-K_Y)``.
    """
    a2, a3, a4 = (Poly2.coerce(x) for x in d.coords[1:])
    if lattice.hyperplanes is not None:
        out = None
        for coeff, name in zip((a2, a3, a4), lattice.hyperplanes):
            term = coeff * lattice.cls(name)
            out = term if out is None else out + term
        return out
    if not (a2 == a3 == a4):
        raise ValueError(f"lattice {lattice.name} cannot restrict the asymmetric class {d}")
    return a2 * lattice.anticanonical_class


# --------------------------------------------------------------------------
# pointwise decomposition


class Germ:
    """``a + b*eps`` for an infinitesimal ``eps > 0``; ordered lexicographically."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a, self.b = Fraction(a), Fraction(b)

    def __add__(self, o):
        o = o if isinstance(o, Germ) else Germ(o)
        return Germ(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = o if isinstance(o, Germ) else Germ(o)
        return Germ(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return Germ(o) - self

    def __neg__(self):
        return Germ(-self.a, -self.b)

    def __mul__(self, c):
        if isinstance(c, Germ):
            raise TypeError("germs only scale by rationals")
        return Germ(self.a * c, self.b * c)

    __rmul__ = __mul__

    def _key(self):
        return (self.a, self.b)

    def __lt__(self, o):
        o = o if isinstance(o, Germ) else Germ(o)
        return self._key() < o._key()

    def __le__(self, o):
        o = o if isinstance(o, Germ) else Germ(o)
        return self._key() <= o._key()

    def __gt__(self, o):
        o = o if isinstance(o, Germ) else Germ(o)
        return self._key() > o._key()

    def __ge__(self, o):
        o = o if isinstance(o, Germ) else Germ(o)
        return self._key() >= o._key()

    def __eq__(self, o):
        o = o if isinstance(o, Germ) else Germ(o)
        return self._key() == o._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Germ({self.a}, {self.b})"


@dataclass(frozen=True)
class PointDecomposition:
    support: tuple[str, ...]
    coefficients: dict[str, object]
    positive: tuple
    pseudo_effective: bool

    def volume(self, lattice: DPLattice):
        if not self.pseudo_effective:
            return Fraction(0)
        return lattice.pair(self.positive, self.positive)


def _solve_support(D: Sequence, support: tuple[str, ...], lattice: DPLattice) -> dict[str, object]:
    if not support:
        return {}
    inv = linalg.inverse(lattice.support_gram(support))
    rhs = [lattice.pair(D, lattice.vector(e)) for e in support]
    return {
        e: sum((inv[i][k] * rhs[k] for k in range(len(support))), Fraction(0))
        for i, e in enumerate(support)
    }


def _subtract(D: Sequence, coeffs: Mapping[str, object], lattice: DPLattice) -> tuple:
    P = list(D)
    for e, c in coeffs.items():
        P = [p - c * x for p, x in zip(P, lattice.vector(e))]
    return tuple(P)


def grow_support(D: Sequence, lattice: DPLattice) -> PointDecomposition:
    """Exact Zariski decomposition of one numeric class.

    Entries of ``D`` may be :class:`Fraction` or :class:`Germ`.  A class
    that is not pseudo-effective is reported with ``pseudo_effective``
    false: it shows up as a positive part of negative anticanonical
    degree, a support that is not negative definite, or a positive part
    that fails nefness against ``effective_extra``.
    """
    neg = lattice.negative_curves
    K = lattice.anticanonical
    not_pseff = PointDecomposition((), {}, tuple(D), False)
    support: tuple[str, ...] = ()
    for _ in range(len(neg) + 1):
        coeffs = _solve_support(D, support, lattice)
        P = _subtract(D, coeffs, lattice)
        if lattice.pair(P, K) < 0:
            return not_pseff
        new = [e for e in neg if e not in support and lattice.pair(P, lattice.vector(e)) < 0]
        if not new:
            break
        support = tuple(e for e in neg if e in support or e in new)
        if not linalg.is_negative_definite(lattice.support_gram(support)):
            return not_pseff
    else:
        raise ZariskiError("support growth did not terminate; check the lattice data")
    if any(c < 0 for c in coeffs.values()):
        return not_pseff
    if any(lattice.pair(P, lattice.vector(g)) < 0 for g in lattice.effective_extra):
        return not_pseff
    return PointDecomposition(support, coeffs, P, True)


def zariski_at(D: SurfaceClass, lattice: DPLattice, u: Scalar, v: Scalar) -> PointDecomposition:
    return grow_support(D.at(u, v), lattice)


def pseff_threshold(base: Sequence, direction: Sequence, lattice: DPLattice) -> Fraction:
    """``sup { t >= 0 : base - t * direction pseudo-effective }``, exactly.

    Walks along t chamber by chamber.  At each breakpoint the support just
    to the right is found by running the decomposition on the germ
    ``base - (t + eps) direction``; the walk stops when that germ is not
    pseudo-effective.
    """
    base = tuple(as_rational(x) for x in base)
    direction = tuple(as_rational(x) for x in direction)
    if not grow_support(base, lattice).pseudo_effective:
        raise ValueError("base class is not pseudo-effective")
    t = Fraction(0)
    for _ in range(4 * (len(lattice.negative_curves) + len(lattice.effective_extra)) + 8):
        germ = tuple(Germ(b - t * d, -d) for b, d in zip(base, direction))
        res = grow_support(germ, lattice)
        if not res.pseudo_effective:
            return t
        # affine data along the ray for this support
        c0 = _solve_support(base, res.support, lattice)
        c1 = _solve_support(direction, res.support, lattice)
        p0 = _subtract(base, c0, lattice)
        p1 = _subtract(direction, c1, lattice)
        # each watched quantity is a0 - t * a1 and must stay >= 0
        watched = [(c0[e], c1[e]) for e in res.support]
        for g in lattice.effective_generators():
            if g not in res.support:
                vec = lattice.vector(g)
                watched.append((lattice.pair(p0, vec), lattice.pair(p1, vec)))
        watched.append((lattice.pair(p0, lattice.anticanonical), lattice.pair(p1, lattice.anticanonical)))
        roots = [a0 / a1 for a0, a1 in watched if a1 > 0 and a0 / a1 > t]
        if not roots:
            raise ValueError("pseudo-effective threshold is unbounded")
        t = min(roots)
    raise ZariskiError("threshold walk did not terminate")


# --------------------------------------------------------------------------
# chambers over a parameter region


@dataclass(frozen=True)
class SurfaceChamber:
    region: Region
    support: tuple[str, ...]
    positive: SurfaceClass
    negative: dict[str, Poly2] = field(default_factory=dict)

    def volume(self, lattice: DPLattice) -> Poly2:
        return intersect(self.positive, self.positive, lattice)

    def describe(self) -> str:
        if not self.negative:
            neg = "0"
        else:
            neg = " + ".join(f"({c})*{e}" for e, c in self.negative.items())
        return f"[{self.region}]  N = {neg}"


@dataclass(frozen=True)
class SurfaceZariski:
    divisor: SurfaceClass
    lattice: DPLattice
    domain: Region
    chambers: tuple[SurfaceChamber, ...]

    def chamber_at(self, u: Scalar, v: Scalar) -> SurfaceChamber:
        for ch in self.chambers:
            if ch.region.contains(u, v):
                return ch
        raise ValueError(f"({u}, {v}) is not covered by any chamber")

    def walls(self) -> list[tuple[SurfaceChamber, SurfaceChamber, list[tuple[Fraction, Fraction]]]]:
        """Pairs of chambers sharing an edge, with sample points on that edge."""
        out = []
        for i, a in enumerate(self.chambers):
            for b in self.chambers[i + 1:]:
                pts = _shared_edge_points(a.region, b.region)
                if pts:
                    out.append((a, b, pts))
        return out


def _shared_edge_points(a: Region, b: Region) -> list[tuple[Fraction, Fraction]]:
    pts = []
    lo, hi = max(a.u_lo, b.u_lo), min(a.u_hi, b.u_hi)
    if lo < hi:
        for top, bottom in ((a.v_hi, b.v_lo), (b.v_hi, a.v_lo)):
            if top == bottom:
                for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
                    u = lo + t * (hi - lo)
                    pts.append((u, top.eval_at(u)))
    for ua, ub in ((a.u_hi, b.u_lo), (b.u_hi, a.u_lo)):
        if ua == ub:
            first, second = (a, b) if ua == a.u_hi else (b, a)
            lo_v = max(first.v_lo.eval_at(ua), second.v_lo.eval_at(ua))
            hi_v = min(first.v_hi.eval_at(ua), second.v_hi.eval_at(ua))
            if lo_v < hi_v:
                pts.extend((ua, lo_v + t * (hi_v - lo_v)) for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)))
    return pts


def _symbolic_support(D: SurfaceClass, support: tuple[str, ...], lattice: DPLattice):
    if not support:
        return {}, D
    inv = linalg.inverse(lattice.support_gram(support))
    rhs = [intersect(D, lattice.cls(e), lattice) for e in support]
    coeffs = {}
    P = D
    for i, e in enumerate(support):
        c = Poly2()
        for k in range(len(support)):
            c = c + rhs[k] * inv[i][k]
        coeffs[e] = c
        P = P - c * lattice.cls(e)
    return coeffs, P


def _conditions(D: SurfaceClass, support, lattice):
    coeffs, P = _symbolic_support(D, support, lattice)
    conds = [(f"coefficient of {e}", c) for e, c in coeffs.items()]
    for g in lattice.effective_generators():
        if g not in support:
            conds.append((f"P.{g}", intersect(P, lattice.cls(g), lattice)))
    conds.append(("P.(-K)", intersect(P, lattice.anticanonical_class, lattice)))
    return coeffs, P, conds


def zariski_surface(D: SurfaceClass, lattice: DPLattice, region: Region, max_steps: int = 1000) -> SurfaceZariski:
    """Chambered Zariski decomposition of an affine family over ``region``.

    ``D`` must be pseudo-effective on the whole region (big on its
    interior).  Every emitted chamber is re-validated at its vertices.
    """
    if D.lattice != lattice.name:
        raise ValueError(f"lattice mismatch: {D.lattice} vs {lattice.name}")
    if D.is_zero():
        return SurfaceZariski(D, lattice, region, ())
    if not D.is_affine():
        raise ValueError("divisor coefficients must be affine in (u, v)")
    todo = [region]
    done: list[SurfaceChamber] = []
    for _ in range(max_steps):
        if not todo:
            break
        r = todo.pop()
        u0, v0 = r.interior_point()
        point = zariski_at(D, lattice, u0, v0)
        if not point.pseudo_effective:
            raise ZariskiError(f"divisor is not pseudo-effective at (u, v) = ({u0}, {v0})")
        coeffs, P, conds = _conditions(D, point.support, lattice)
        violated = next(
            (f for _, f in conds if any(f.eval_at(*vx) < 0 for vx in r.vertices())), None
        )
        if violated is None:
            done.append(SurfaceChamber(r, point.support, P, coeffs))
        else:
            pieces = r.split_by(violated)
            if len(pieces) < 2:
                raise ZariskiError(f"wall {violated} does not cut region {r}")
            todo.extend(pieces)
    else:
        raise ZariskiError("chamber subdivision did not terminate")
    chambers = _merge(done)
    chambers.sort(key=lambda ch: (ch.region.u_lo, ch.region.interior_point()[1]))
    result = SurfaceZariski(D, lattice, region, tuple(chambers))
    validate(result)
    return result


def _merge(chambers: list[SurfaceChamber]) -> list[SurfaceChamber]:
    chambers = list(chambers)
    merged = True
    while merged:
        merged = False
        for i, a in enumerate(chambers):
            for j, b in enumerate(chambers):
                if i == j or a.support != b.support:
                    continue
                ra, rb = a.region, b.region
                new = None
                if ra.u_lo == rb.u_lo and ra.u_hi == rb.u_hi and ra.v_hi == rb.v_lo:
                    new = Region(ra.u_lo, ra.u_hi, ra.v_lo, rb.v_hi)
                elif ra.u_hi == rb.u_lo and ra.v_lo == rb.v_lo and ra.v_hi == rb.v_hi:
                    new = Region(ra.u_lo, rb.u_hi, ra.v_lo, ra.v_hi)
                if new is not None:
                    chambers = [c for k, c in enumerate(chambers) if k not in (i, j)]
                    chambers.append(SurfaceChamber(new, a.support, a.positive, a.negative))
                    merged = True
                    break
            if merged:
                break
    return chambers


def validate(result: SurfaceZariski) -> None:
    """Check every chamber: orthogonality, nefness, positivity and definiteness."""
    lat = result.lattice
    for ch in result.chambers:
        verts = ch.region.vertices()
        for e in ch.support:
            if intersect(ch.positive, lat.cls(e), lat) != 0:
                raise ZariskiError(f"P.{e} is not identically zero on {ch.region}")
            if any(ch.negative[e].eval_at(*vx) < 0 for vx in verts):
                raise ZariskiError(f"negative coefficient of {e} on {ch.region}")
        for g in lat.effective_generators():
            f = intersect(ch.positive, lat.cls(g), lat)
            if any(f.eval_at(*vx) < 0 for vx in verts):
                raise ZariskiError(f"P is not nef against {g} on {ch.region}")
        if ch.support and not linalg.is_negative_definite(lat.support_gram(ch.support)):
            raise ZariskiError(f"support {ch.support} is not negative definite")
        recon = ch.positive
        for e, c in ch.negative.items():
            recon = recon + c * lat.cls(e)
        if recon != result.divisor:
            raise ZariskiError("P + N does not reproduce the divisor")


@dataclass(frozen=True)
class PiecewiseVolume:
    """Volume ``P^2`` per chamber; zero where the class is not pseudo-effective."""

    decomposition: SurfaceZariski
    pieces: tuple[tuple[Region, Poly2], ...]

    def __call__(self, u: Scalar, v: Scalar) -> Fraction:
        for region, vol in self.pieces:
            if region.contains(u, v):
                return vol.eval_at(u, v)
        dec = self.decomposition
        return zariski_at(dec.divisor, dec.lattice, u, v).volume(dec.lattice)


def vol_surface(D: SurfaceClass, lattice: DPLattice, region: Region) -> PiecewiseVolume:
    dec = zariski_surface(D, lattice, region)
    return PiecewiseVolume(dec, tuple((ch.region, ch.volume(lattice)) for ch in dec.chambers))


# --------------------------------------------------------------------------
# independent floating-point oracle


def numeric_zariski_oracle(D: Sequence[float], lattice: DPLattice, tol: float = 1e-12) -> tuple[float, dict[str, float]]:
    """Floating-point Zariski decomposition at a single point.

    Written against numpy only, sharing no code with the exact path.
    Returns ``(volume, negative-part coefficients)``; a class that is not
    pseudo-effective gives ``(0.0, {})``.
    """
    G = np.array([[float(x) for x in row] for row in lattice.gram])
    d = np.asarray([float(x) for x in D])
    curves = list(lattice.negative_curves)
    M = np.array([[float(x) for x in lattice.vector(e)] for e in curves]).reshape(len(curves), -1)
    K = np.array([float(x) for x in lattice.anticanonical])
    extra = np.array([[float(x) for x in lattice.vector(g)] for g in lattice.effective_extra]).reshape(-1, len(d))
    active = np.zeros(len(curves), dtype=bool)
    coeffs = np.zeros(0)
    p = d.copy()
    for _ in range(len(curves) + 1):
        if p @ G @ K < -tol:
            return 0.0, {}
        pair = M @ G @ p
        new = (pair < -tol) & ~active
        if not new.any():
            break
        active |= new
        Ms = M[active]
        Gs = Ms @ G @ Ms.T
        if np.linalg.eigvalsh(Gs).max() >= -tol:
            return 0.0, {}
        coeffs = np.linalg.solve(Gs, Ms @ G @ d)
        p = d - coeffs @ Ms
    if (coeffs < -tol).any() or (extra @ G @ p < -tol).any():
        return 0.0, {}
    names = [e for e, a in zip(curves, active) if a]
    return float(p @ G @ p), dict(zip(names, (float(c) for c in coeffs)))

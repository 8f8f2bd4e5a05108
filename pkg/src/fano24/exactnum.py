"""Exact scalars, bivariate polynomials in (u, v) and chamber integration.

Scalars are :class:`fractions.Fraction`, which is already canonical after
every operation.  :class:`Poly2` is a sparse polynomial in the two
parameters ``u`` and ``v``; :class:`Region` is a chamber
``u_lo <= u <= u_hi, v_lo(u) <= v <= v_hi(u)`` with affine v-bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

Rational = Fraction
Scalar = Union[int, Fraction]


def as_rational(x: Scalar | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def fmt_rational(x: Scalar) -> str:
    """Render ``p/q`` with the denominator dropped when it is 1."""
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Poly2:
    """Sparse polynomial in u and v with rational coefficients.

    Terms are stored as ``{(i, j): c}`` for ``c * u**i * v**j``; zero
    coefficients are never stored and iteration is lexicographic in
    ``(i, j)``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            c = as_rational(c)
            if c:
                clean[(int(i), int(j))] = clean.get((int(i), int(j)), Fraction(0)) + c
        self._terms = {k: clean[k] for k in sorted(clean) if clean[k]}
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c: Scalar) -> Poly2:
        return cls({(0, 0): c})

    @classmethod
    def coerce(cls, x: Poly2 | Scalar) -> Poly2:
        if isinstance(x, Poly2):
            return x
        return cls.const(x)

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0, 0), Fraction(0))

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def degree(self) -> int:
        return max((i + j for i, j in self._terms), default=0)

    def degree_u(self) -> int:
        return max((i for i, _ in self._terms), default=0)

    def degree_v(self) -> int:
        return max((j for _, j in self._terms), default=0)

    def depends_on_v(self) -> bool:
        return any(j for _, j in self._terms)

    def is_affine(self) -> bool:
        return self.degree() <= 1

    # ring operations
    def __add__(self, other: Poly2 | Scalar) -> Poly2:
        if not isinstance(other, (Poly2, int, Fraction)):
            return NotImplemented
        other = Poly2.coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self) -> Poly2:
        return Poly2({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Poly2 | Scalar) -> Poly2:
        if not isinstance(other, (Poly2, int, Fraction)):
            return NotImplemented
        return self + (-Poly2.coerce(other))

    def __rsub__(self, other: Scalar) -> Poly2:
        return Poly2.coerce(other) - self

    def __mul__(self, other: Poly2 | Scalar) -> Poly2:
        if isinstance(other, (int, Fraction)):
            return Poly2({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, Poly2):
            return NotImplemented
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return Poly2(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> Poly2:
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / as_rational(other))

    def __pow__(self, n: int) -> Poly2:
        if n < 0:
            raise ValueError("negative power")
        result = Poly2.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # evaluation and calculus
    def eval_at(self, u: Scalar, v: Scalar = 0) -> Fraction:
        u, v = as_rational(u), as_rational(v)
        return sum((c * u**i * v**j for (i, j), c in self._terms.items()), Fraction(0))

    def eval_float(self, u, v=0.0):
        """Floating-point evaluation; ``u`` and ``v`` may be numpy arrays."""
        total = 0.0
        for (i, j), c in self._terms.items():
            total = total + float(c) * (u**i) * (v**j)
        return total

    def subs_v(self, q: Poly2) -> Poly2:
        """Substitute ``v := q``; ``q`` must not involve ``v``."""
        if q.depends_on_v():
            raise ValueError("substituted expression must be a polynomial in u only")
        out = Poly2()
        powers = [Poly2.const(1)]
        for (i, j), c in self._terms.items():
            while len(powers) <= j:
                powers.append(powers[-1] * q)
            out = out + Poly2({(i, 0): c}) * powers[j]
        return out

    def antiderivative_v(self) -> Poly2:
        return Poly2({(i, j + 1): c / (j + 1) for (i, j), c in self._terms.items()})

    def antiderivative_u(self) -> Poly2:
        return Poly2({(i + 1, j): c / (i + 1) for (i, j), c in self._terms.items()})

    def __repr__(self) -> str:
        return f"Poly2({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for (i, j), c in self._terms.items():
            mono = []
            if i:
                mono.append("u" if i == 1 else f"u^{i}")
            if j:
                mono.append("v" if j == 1 else f"v^{j}")
            mag = abs(c)
            if mono:
                body = "*".join(mono) if mag == 1 else f"{fmt_rational(mag)}*" + "*".join(mono)
            else:
                body = fmt_rational(mag)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)


U = Poly2({(1, 0): 1})
V = Poly2({(0, 1): 1})


def add(p: Poly2 | Scalar, q: Poly2 | Scalar) -> Poly2:
    return Poly2.coerce(p) + q


def mul(p: Poly2 | Scalar, q: Poly2 | Scalar) -> Poly2:
    return Poly2.coerce(p) * q


def scale(p: Poly2 | Scalar, c: Scalar) -> Poly2:
    return Poly2.coerce(p) * as_rational(c)


def eval_at(p: Poly2 | Scalar, u: Scalar, v: Scalar) -> Fraction:
    return Poly2.coerce(p).eval_at(u, v)


def _affine_in_u(p: Poly2 | Scalar, what: str) -> Poly2:
    p = Poly2.coerce(p)
    if p.depends_on_v() or p.degree_u() > 1:
        raise ValueError(f"{what} must be an affine function of u, got {p}")
    return p


@dataclass(frozen=True)
class Region:
    """Chamber ``u_lo <= u <= u_hi``, ``v_lo(u) <= v <= v_hi(u)``.

    The v-bounds are affine in u, so each region is a convex polygon with
    at most four vertices and pointwise checks of affine functions only
    need those vertices.
    """

    u_lo: Fraction
    u_hi: Fraction
    v_lo: Poly2
    v_hi: Poly2

    def __init__(self, u_lo: Scalar, u_hi: Scalar, v_lo: Poly2 | Scalar, v_hi: Poly2 | Scalar):
        u_lo, u_hi = as_rational(u_lo), as_rational(u_hi)
        v_lo = _affine_in_u(v_lo, "v_lo")
        v_hi = _affine_in_u(v_hi, "v_hi")
        if u_lo > u_hi:
            raise ValueError(f"empty u-interval [{u_lo}, {u_hi}]")
        for u in (u_lo, u_hi):
            if v_lo.eval_at(u) > v_hi.eval_at(u):
                raise ValueError(f"v_lo > v_hi at u = {u}")
        object.__setattr__(self, "u_lo", u_lo)
        object.__setattr__(self, "u_hi", u_hi)
        object.__setattr__(self, "v_lo", v_lo)
        object.__setattr__(self, "v_hi", v_hi)

    def __str__(self) -> str:
        return (
            f"{fmt_rational(self.u_lo)} <= u <= {fmt_rational(self.u_hi)}, "
            f"{self.v_lo} <= v <= {self.v_hi}"
        )

    def vertices(self) -> list[tuple[Fraction, Fraction]]:
        out: list[tuple[Fraction, Fraction]] = []
        for u in (self.u_lo, self.u_hi):
            for b in (self.v_lo, self.v_hi):
                pt = (u, b.eval_at(u))
                if pt not in out:
                    out.append(pt)
        return out

    def interior_point(self) -> tuple[Fraction, Fraction]:
        um = (self.u_lo + self.u_hi) / 2
        return um, (self.v_lo.eval_at(um) + self.v_hi.eval_at(um)) / 2

    def is_degenerate(self) -> bool:
        return self.u_lo == self.u_hi or all(
            self.v_lo.eval_at(u) == self.v_hi.eval_at(u) for u in (self.u_lo, self.u_hi)
        )

    def area(self) -> Fraction:
        return integrate_region(Poly2.const(1), self)

    def contains(self, u: Scalar, v: Scalar) -> bool:
        u, v = as_rational(u), as_rational(v)
        return self.u_lo <= u <= self.u_hi and self.v_lo.eval_at(u) <= v <= self.v_hi.eval_at(u)

    def contains_float(self, u: float, v: float, tol: float = 1e-12) -> bool:
        return (
            self.u_lo - tol <= u <= self.u_hi + tol
            and self.v_lo.eval_float(u) - tol <= v <= self.v_hi.eval_float(u) + tol
        )

    def split_u(self, cuts: Iterable[Fraction]) -> list[Region]:
        pts = sorted({self.u_lo, self.u_hi, *(c for c in cuts if self.u_lo < c < self.u_hi)})
        return [Region(a, b, self.v_lo, self.v_hi) for a, b in zip(pts, pts[1:])]

    def split_by(self, f: Poly2) -> list[Region]:
        """Cut along the line ``f = 0`` (``f`` affine in u, v).

        Returns non-degenerate pieces on each of which ``f`` has constant
        sign.  The region itself is returned if the line misses its interior.
        """
        f = Poly2.coerce(f)
        if not f.is_affine():
            raise ValueError(f"wall {f} is not affine")
        a, bu, bv = f.coeff(0, 0), f.coeff(1, 0), f.coeff(0, 1)
        if bv == 0:
            if bu == 0:
                return [self]
            pieces = self.split_u([-a / bu])
        else:
            wall = Poly2({(0, 0): -a / bv, (1, 0): -bu / bv})
            cuts = [_crossing(wall, self.v_lo), _crossing(wall, self.v_hi)]
            pieces = []
            for piece in self.split_u(c for c in cuts if c is not None):
                um = (piece.u_lo + piece.u_hi) / 2
                w, lo, hi = wall.eval_at(um), piece.v_lo.eval_at(um), piece.v_hi.eval_at(um)
                if lo < w < hi:
                    pieces.append(Region(piece.u_lo, piece.u_hi, piece.v_lo, wall))
                    pieces.append(Region(piece.u_lo, piece.u_hi, wall, piece.v_hi))
                else:
                    pieces.append(piece)
        return [p for p in pieces if not p.is_degenerate()]

    def intersect(self, other: Region) -> list[Region]:
        lo, hi = max(self.u_lo, other.u_lo), min(self.u_hi, other.u_hi)
        if lo >= hi:
            return []
        cuts = [_crossing(self.v_lo, other.v_lo), _crossing(self.v_hi, other.v_hi),
                _crossing(self.v_lo, other.v_hi), _crossing(self.v_hi, other.v_lo)]
        pts = sorted({lo, hi, *(c for c in cuts if c is not None and lo < c < hi)})
        out = []
        for a, b in zip(pts, pts[1:]):
            m = (a + b) / 2
            vlo = self.v_lo if self.v_lo.eval_at(m) >= other.v_lo.eval_at(m) else other.v_lo
            vhi = self.v_hi if self.v_hi.eval_at(m) <= other.v_hi.eval_at(m) else other.v_hi
            if vlo.eval_at(m) < vhi.eval_at(m):
                out.append(Region(a, b, vlo, vhi))
        return out


def _crossing(p: Poly2, q: Poly2) -> Fraction | None:
    """u where two affine functions of u agree, or None if parallel."""
    d = p - q
    slope = d.coeff(1, 0)
    if slope == 0:
        return None
    return -d.coeff(0, 0) / slope


def integrate_region(p: Poly2 | Scalar, r: Region) -> Fraction:
    """Exact double integral of ``p`` over ``r`` (v inner, u outer)."""
    inner = Poly2.coerce(p).antiderivative_v()
    in_u = inner.subs_v(r.v_hi) - inner.subs_v(r.v_lo)
    return integrate_interval(in_u, r.u_lo, r.u_hi)


def integrate_interval(p: Poly2 | Scalar, lo: Scalar, hi: Scalar) -> Fraction:
    """Exact integral over ``lo <= u <= hi`` of a polynomial in u only."""
    p = Poly2.coerce(p)
    if p.depends_on_v():
        raise ValueError("integrand still depends on v")
    prim = p.antiderivative_u()
    return prim.eval_at(hi) - prim.eval_at(lo)


def midpoint_integral(p: Poly2 | Scalar, r: Region, n: int = 200) -> float:
    """Floating-point midpoint rule on an ``n x n`` grid mapped onto ``r``.

    Independent check on :func:`integrate_region`; never used in the
    exact path.
    """
    p = Poly2.coerce(p)
    u0, u1 = float(r.u_lo), float(r.u_hi)
    hu = (u1 - u0) / n
    us = u0 + (np.arange(n) + 0.5) * hu
    lo, hi = r.v_lo.eval_float(us), r.v_hi.eval_float(us)
    lo = np.broadcast_to(lo, us.shape)
    hi = np.broadcast_to(hi, us.shape)
    frac = (np.arange(n) + 0.5) / n
    vs = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    uu = np.broadcast_to(us[:, None], vs.shape)
    vals = np.broadcast_to(p.eval_float(uu, vs), vs.shape)
    weights = hu * (hi - lo)[:, None] / n
    return float(np.sum(vals * weights))

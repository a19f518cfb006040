"""Chow-operator arithmetic on a smooth cone complex.

Classes are elements of the Stanley-Reisner presentation: rational linear
combinations of monomials in the ray variables, with every monomial whose
ray-support is not a cone reduced to zero. Pullback and pushforward along a
stellar subdivision step implement the blowup formulas for a two-ray center.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .conecx import ConeComplex, PLFunction, SubdivisionStep

__all__ = [
    "Monomial",
    "ChowClass",
    "reduce",
    "multiply",
    "divisor_of_pl",
    "pullback",
    "pushforward",
    "truncate",
    "serialize",
]

Monomial = tuple[tuple[str, int], ...]
"""Sorted tuple of (ray id, exponent >= 1); the unit monomial is ()."""


def _norm_monomial(exps: Mapping[str, int]) -> Monomial:
    return tuple(sorted((r, int(e)) for r, e in exps.items() if e))


def _is_normal(m: tuple) -> bool:
    # already sorted with positive int exponents, so normalization is a no-op
    prev = ""
    for r, e in m:
        if type(e) is not int or e <= 0 or r <= prev:
            return False
        prev = r
    return True


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    # merge of two sorted exponent tuples
    if not a:
        return b
    if not b:
        return a
    out: list[tuple[str, int]] = []
    i, j, la, lb = 0, 0, len(a), len(b)
    while i < la and j < lb:
        ra, ea = a[i]
        rb, eb = b[j]
        if ra == rb:
            out.append((ra, ea + eb))
            i += 1
            j += 1
        elif ra < rb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_key(m: Monomial) -> tuple:
    return (_mono_degree(m), m)


@dataclass(frozen=True)
class ChowClass:
    """A reduced Stanley-Reisner element attached to its complex."""

    complex: ConeComplex
    terms: tuple[tuple[Monomial, Fraction], ...]

    def coeff(self, exps: Mapping[str, int]) -> Fraction:
        key = _norm_monomial(exps)
        for m, c in self.terms:
            if m == key:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({_mono_degree(m) for m, _ in self.terms}))

    def __add__(self, other: "ChowClass") -> "ChowClass":
        _check_same_complex(self, other)
        return reduce(list(self.terms) + list(other.terms), self.complex)

    def __sub__(self, other: "ChowClass") -> "ChowClass":
        return self + other.scale(Fraction(-1))

    def __mul__(self, other: "ChowClass") -> "ChowClass":
        return multiply(self, other)

    def scale(self, factor: Fraction | int) -> "ChowClass":
        f = Fraction(factor)
        return ChowClass(
            self.complex,
            tuple((m, c * f) for m, c in self.terms if c * f != 0),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.complex == other.complex and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.complex.ray_ids, self.terms))


def _check_same_complex(a: ChowClass, b: ChowClass) -> None:
    if a.complex != b.complex:
        raise ValueError("classes live on different complexes")


def reduce(
    terms: Iterable[tuple[Monomial | Mapping[str, int], Fraction | int]],
    c: ConeComplex,
) -> ChowClass:
    """Stanley-Reisner reduction: kill non-cone monomials, merge, drop zeros."""
    cone_set = c._cone_set()
    acc: dict[Monomial, Fraction] = {}
    for mono, coeff in terms:
        if type(mono) is tuple and _is_normal(mono):
            m = mono
        elif isinstance(mono, Mapping):
            m = _norm_monomial(mono)
        else:
            m = _norm_monomial(dict(mono))
        if tuple(r for r, _ in m) not in cone_set:
            continue
        prev = acc.get(m)
        acc[m] = coeff if prev is None else prev + coeff
    return _finish(acc, c)


def _finish(acc: Mapping[Monomial, Fraction], c: ConeComplex) -> ChowClass:
    cleaned = tuple(
        (m, v if type(v) is Fraction else Fraction(v))
        for m, v in sorted(acc.items(), key=lambda kv: _mono_key(kv[0]))
        if v
    )
    return ChowClass(c, cleaned)


def zero(c: ConeComplex) -> ChowClass:
    return ChowClass(c, ())


def unit(c: ConeComplex) -> ChowClass:
    return reduce([((), 1)], c)


def ray_class(c: ConeComplex, ray_id: str) -> ChowClass:
    return reduce([({ray_id: 1}, 1)], c)


def stratum_class(c: ConeComplex, cone: Iterable[str]) -> ChowClass:
    """Class of a stratum closure: the square-free monomial on the cone's rays."""
    return reduce([({r: 1 for r in cone}, 1)], c)


def multiply(a: ChowClass, b: ChowClass) -> ChowClass:
    """Product of classes: polynomial product followed by reduction."""
    _check_same_complex(a, b)
    cones = a.complex._cone_supports()
    bt = [(m2, c2, frozenset(r for r, _ in m2)) for m2, c2 in b.terms]
    acc: dict[Monomial, Fraction] = {}
    for m1, c1 in a.terms:
        f1 = frozenset(r for r, _ in m1)
        for m2, c2, f2 in bt:
            # support of the product is the union, so dead pairs are cheap
            # to skip before any exponent merging happens
            if f1 | f2 not in cones:
                continue
            m = _mono_mul(m1, m2)
            cf = c1 * c2
            prev = acc.get(m)
            acc[m] = cf if prev is None else prev + cf
    return _finish(acc, a.complex)


def divisor_of_pl(f: PLFunction, c: ConeComplex) -> ChowClass:
    """Degree-1 class of a PL function: sum over rays of f(u_rho) x_rho."""
    terms = []
    for rid in c.ray_ids:
        terms.append(({rid: 1}, f.get(rid)))
    return reduce(terms, c)


def pullback(a: ChowClass, step: SubdivisionStep) -> ChowClass:
    """Pull a class back along a subdivision step.

    The ring morphism sends x_rho to x_rho + x_e for the two center rays and
    fixes every other ray variable.
    """
    if a.complex != step.pre:
        raise ValueError("class does not live on the step's source complex")
    r1, r2 = step.center
    e = step.new_ray
    out: list[tuple[Monomial, Fraction]] = []
    for mono, coeff in a.terms:
        hit = False
        for r, _ in mono:
            if r == r1 or r == r2:
                hit = True
                break
        if not hit:
            # no center ray in sight: the morphism fixes every variable here,
            # and the support is a surviving cone downstairs
            out.append((mono, coeff))
            continue
        expanded: list[tuple[dict[str, int], Fraction]] = [({}, coeff)]
        for ray, exp in mono:
            if ray in (r1, r2):
                nxt: list[tuple[dict[str, int], Fraction]] = []
                for base, cf in expanded:
                    for i in range(exp + 1):
                        exps = dict(base)
                        if exp - i:
                            exps[ray] = exps.get(ray, 0) + exp - i
                        if i:
                            exps[e] = exps.get(e, 0) + i
                        nxt.append((exps, cf * comb(exp, i)))
                expanded = nxt
            else:
                for base, _ in expanded:
                    base[ray] = base.get(ray, 0) + exp
        out.extend((_norm_monomial(exps), cf) for exps, cf in expanded)
    return reduce(out, step.post)


def _h_complete(deg: int, r1: str, r2: str) -> list[Monomial]:
    """Monomials of the complete homogeneous symmetric polynomial h_deg(x_r1, x_r2)."""
    return [
        _norm_monomial({r1: t, r2: deg - t})
        for t in range(deg + 1)
    ]


def pushforward(a: ChowClass, step: SubdivisionStep) -> ChowClass:
    """Push a class forward along a subdivision step.

    Rewrites the class as a polynomial in the exceptional variable with
    pulled-back coefficients via x_rho = pullback(x_rho) - x_e on the center
    rays, then applies the blowup pushforward of each exceptional power:
    degree 0 is the identity, degree 1 dies, and degree j >= 2 contributes
    -h_(j-2)(x_r1, x_r2) x_r1 x_r2.
    """
    if a.complex != step.post:
        raise ValueError("class does not live on the step's refined complex")
    r1, r2 = step.center
    e = step.new_ray
    affected = {r1, r2, e}
    out: list[tuple[Monomial, Fraction]] = []
    staged: dict[tuple[Monomial, int], Fraction] = {}
    for mono, coeff in a.terms:
        hit = False
        for r, _ in mono:
            if r in affected:
                hit = True
                break
        if not hit:
            # the monomial avoids the center and the exceptional ray, and its
            # support survives the blowdown, so the term passes through as is
            out.append((mono, coeff))
            continue
        exps = dict(mono)
        a1 = exps.pop(r1, 0)
        a2 = exps.pop(r2, 0)
        ae = exps.pop(e, 0)
        base = _norm_monomial(exps)
        for i1 in range(a1 + 1):
            for i2 in range(a2 + 1):
                j = ae + i1 + i2
                down = dict(base)
                if a1 - i1:
                    down[r1] = down.get(r1, 0) + a1 - i1
                if a2 - i2:
                    down[r2] = down.get(r2, 0) + a2 - i2
                scale = comb(a1, i1) * comb(a2, i2) * (-1) ** (i1 + i2)
                cf = coeff * scale
                key = (_norm_monomial(down), j)
                prev = staged.get(key)
                staged[key] = cf if prev is None else prev + cf
    for (down, j), cf in staged.items():
        if cf == 0:
            continue
        if j == 0:
            out.append((down, cf))
        elif j == 1:
            continue
        else:
            exc = _norm_monomial({r1: 1, r2: 1})
            for hm in _h_complete(j - 2, r1, r2):
                out.append((_mono_mul(down, _mono_mul(hm, exc)), -cf))
    return reduce(out, step.pre)


def truncate(a: ChowClass, degree: int) -> ChowClass:
    """Homogeneous part of the given codimension."""
    return ChowClass(
        a.complex,
        tuple((m, c) for m, c in a.terms if _mono_degree(m) == degree),
    )


def serialize(a: ChowClass) -> list[dict]:
    """Deterministic JSON form: graded-lex sorted monomials, "num/den" coefficients."""
    out = []
    for mono, coeff in a.terms:
        out.append(
            {
                "monomial": {r: e for r, e in mono},
                "coeff": f"{coeff.numerator}/{coeff.denominator}",
            }
        )
    return out

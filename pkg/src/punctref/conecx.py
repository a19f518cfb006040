"""Smooth cone complexes: face-closed simplicial bookkeeping, stellar
subdivision at two-ray centers, and piecewise-linear functions on rays.

A complex is either abstract-smooth (every cone declared unimodular on its
rays) or embedded (rays carry primitive integer vectors and unimodularity is
verified). All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence

import sympy
import sympy.matrices.normalforms

__all__ = [
    "Ray",
    "ConeComplex",
    "PLFunction",
    "SubdivisionStep",
    "build_complex",
    "validate_complex",
    "star_subdivide",
    "pl_function",
    "pl_pullback",
]


@dataclass(frozen=True)
class Ray:
    """A ray of a cone complex: canonical id plus optional primitive vector."""

    id: str
    primitive: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("ray id must be a nonempty string")
        if self.primitive is not None:
            object.__setattr__(self, "primitive", tuple(int(x) for x in self.primitive))


def _sorted_cone(rays: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(rays))


@dataclass(frozen=True)
class ConeComplex:
    """A face-closed simplicial cone complex on named rays.

    ``cones`` holds every cone (including the empty cone and all faces) as a
    sorted tuple of ray ids, ordered by (dimension, lex). ``labels`` maps a
    cone to an optional display label such as "W12".
    """

    rays: tuple[Ray, ...]
    cones: tuple[tuple[str, ...], ...]
    labels: tuple[tuple[tuple[str, ...], str], ...] = ()

    @property
    def mode(self) -> str:
        if self.rays and all(r.primitive is not None for r in self.rays):
            return "embedded"
        return "abstract-smooth"

    @property
    def ray_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.rays)

    def ray(self, ray_id: str) -> Ray:
        for r in self.rays:
            if r.id == ray_id:
                return r
        raise KeyError(f"no ray {ray_id!r} in complex")

    def _cone_set(self) -> frozenset:
        cached = self.__dict__.get("_cone_set_cache")
        if cached is None:
            cached = frozenset(self.cones)
            self.__dict__["_cone_set_cache"] = cached
        return cached

    def _cone_supports(self) -> frozenset:
        cached = self.__dict__.get("_cone_supports_cache")
        if cached is None:
            cached = frozenset(frozenset(cone) for cone in self.cones)
            self.__dict__["_cone_supports_cache"] = cached
        return cached

    def has_cone(self, support: Iterable[str]) -> bool:
        return _sorted_cone(support) in self._cone_set()

    def maximal_cones(self) -> tuple[tuple[str, ...], ...]:
        cached = self.__dict__.get("_maximal_cache")
        if cached is None:
            # longest first: every strict superset of a cone is longer, and by
            # induction is itself below some already-confirmed maximal cone
            maximal: list[tuple[str, ...]] = []
            max_sets: list[frozenset] = []
            for c in sorted(self.cones, key=len, reverse=True):
                cs = frozenset(c)
                if not any(cs < s for s in max_sets):
                    maximal.append(c)
                    max_sets.append(cs)
            maximal.sort(key=lambda c: (len(c), c))
            cached = tuple(maximal)
            self.__dict__["_maximal_cache"] = cached
        return cached

    def label_of(self, cone: Iterable[str]) -> Optional[str]:
        key = _sorted_cone(cone)
        for c, lab in self.labels:
            if c == key:
                return lab
        return None

    def dim(self) -> int:
        return max((len(c) for c in self.cones), default=0)


def _face_closure(cones: Iterable[Iterable[str]]) -> tuple[tuple[str, ...], ...]:
    closed: set[tuple[str, ...]] = {()}
    for cone in cones:
        base = _sorted_cone(cone)
        n = len(base)
        for mask in range(1 << n):
            face = tuple(base[i] for i in range(n) if mask >> i & 1)
            closed.add(face)
    return tuple(sorted(closed, key=lambda c: (len(c), c)))


def build_complex(
    rays: Sequence[Ray | str | Mapping],
    cones: Iterable[Iterable[str]],
    labels: Optional[Mapping[frozenset, str]] = None,
) -> ConeComplex:
    """Construct a face-closed complex from rays and generating cones.

    Rays may be Ray objects, bare id strings, or mappings with keys
    ``id`` and optional ``primitive``. Raises ValueError on malformed input;
    mathematical violations are left to validate_complex.
    """
    norm_rays: list[Ray] = []
    for r in rays:
        if isinstance(r, Ray):
            norm_rays.append(r)
        elif isinstance(r, str):
            norm_rays.append(Ray(r))
        elif isinstance(r, Mapping):
            prim = r.get("primitive")
            norm_rays.append(Ray(r["id"], tuple(prim) if prim is not None else None))
        else:
            raise ValueError(f"cannot interpret ray {r!r}")
    norm_rays.sort(key=lambda r: r.id)
    ids = [r.id for r in norm_rays]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate ray ids")
    id_set = set(ids)
    gen = [list(c) for c in cones]
    for c in gen:
        unknown = [x for x in c if x not in id_set]
        if unknown:
            raise ValueError(f"cone {c} uses unknown rays {unknown}")
        if len(set(c)) != len(c):
            raise ValueError(f"cone {c} repeats a ray")
    all_cones = _face_closure(gen + [[i] for i in ids])
    norm_labels: tuple[tuple[tuple[str, ...], str], ...] = ()
    if labels:
        norm_labels = tuple(
            sorted((_sorted_cone(k), v) for k, v in labels.items())
        )
    return ConeComplex(tuple(norm_rays), all_cones, norm_labels)


def _is_unimodular(vectors: Sequence[tuple[int, ...]]) -> bool:
    """True if the integer vectors span a unimodular simplicial cone."""
    if not vectors:
        return True
    m = sympy.Matrix([list(v) for v in vectors])
    if m.rank() != len(vectors):
        return False
    snf = sympy.matrices.normalforms.smith_normal_form(m.T)
    divisors = [snf[i, i] for i in range(len(vectors))]
    return all(abs(d) == 1 for d in divisors)


def validate_complex(c: ConeComplex) -> dict:
    """Check the complex invariants; violations are data, not exceptions.

    Returns {"ok": bool, "violations": [str, ...]}.
    """
    violations: list[str] = []
    ids = [r.id for r in c.rays]
    if len(set(ids)) != len(ids):
        violations.append("duplicate ray ids")
    id_set = set(ids)
    cone_set = set(c.cones)
    if () not in cone_set:
        violations.append("missing empty cone")
    for cone in c.cones:
        if tuple(sorted(cone)) != cone:
            violations.append(f"cone {cone} not canonically sorted")
        if len(set(cone)) != len(cone):
            violations.append(f"cone {cone} repeats a ray")
        for x in cone:
            if x not in id_set:
                violations.append(f"cone {cone} uses unknown ray {x}")
        for i in range(len(cone)):
            face = cone[:i] + cone[i + 1 :]
            if face not in cone_set:
                violations.append(
                    f"not face-closed: cone {cone} lacks face {face}"
                )
    if len(cone_set) != len(c.cones):
        violations.append("duplicate cones")
    with_prim = [r for r in c.rays if r.primitive is not None]
    if with_prim and len(with_prim) != len(c.rays):
        missing = [r.id for r in c.rays if r.primitive is None]
        violations.append(f"mixed mode: rays without primitives {missing}")
    if c.mode == "embedded":
        dims = {len(r.primitive) for r in c.rays}  # type: ignore[arg-type]
        if len(dims) > 1:
            violations.append("primitive vectors of mixed ambient dimension")
        else:
            for r in c.rays:
                assert r.primitive is not None
                g = gcd(*(abs(x) for x in r.primitive)) if any(r.primitive) else 0
                if g != 1:
                    violations.append(f"ray {r.id} primitive {r.primitive} not primitive")
            prim = {r.id: r.primitive for r in c.rays}
            for cone in c.cones:
                if len(cone) < 2:
                    continue
                vecs = [prim[x] for x in cone]
                if not _is_unimodular(vecs):  # type: ignore[arg-type]
                    violations.append(f"cone {cone} not unimodular")
    return {"ok": not violations, "violations": violations}


@dataclass(frozen=True)
class SubdivisionStep:
    """One stellar subdivision at a two-ray center.

    Carries references to the complexes before and after the step so that
    pullback and pushforward need no further context.
    """

    center: tuple[str, str]
    new_ray: str
    pre: ConeComplex = field(repr=False)
    post: ConeComplex = field(repr=False)


def star_subdivide(
    c: ConeComplex,
    center: Iterable[str],
    new_ray: Optional[str] = None,
) -> tuple[ConeComplex, SubdivisionStep]:
    """Stellar subdivision at a two-ray center.

    Every cone containing both center rays is replaced by the star pattern on
    the new ray; all other cones survive unchanged. In embedded mode the new
    primitive is the sum of the center primitives.
    """
    ctr = _sorted_cone(center)
    if len(ctr) != 2:
        raise ValueError(f"center must be a two-ray set, got {ctr}")
    if not c.has_cone(ctr):
        raise ValueError(f"center {ctr} is not a cone of the complex")
    r1, r2 = ctr
    if new_ray is None:
        k = 0
        existing = set(c.ray_ids)
        while f"e{k}" in existing:
            k += 1
        new_ray = f"e{k}"
    if new_ray in set(c.ray_ids):
        raise ValueError(f"new ray id {new_ray!r} already present")
    prim: Optional[tuple[int, ...]] = None
    if c.mode == "embedded":
        p1 = c.ray(r1).primitive
        p2 = c.ray(r2).primitive
        assert p1 is not None and p2 is not None
        prim = tuple(a + b for a, b in zip(p1, p2))
    new_rays = sorted(list(c.rays) + [Ray(new_ray, prim)], key=lambda r: r.id)
    # the closure transforms cone by cone, so no re-closing is needed: a cone
    # through the center contributes its two replacement children plus its
    # center-stripped extension by the new ray, everything else survives
    new_cones: set[tuple[str, ...]] = set()
    for cone in c.cones:
        s = set(cone)
        if r1 in s and r2 in s:
            new_cones.add(_sorted_cone((s - {r1}) | {new_ray}))
            new_cones.add(_sorted_cone((s - {r2}) | {new_ray}))
            new_cones.add(_sorted_cone((s - {r1, r2}) | {new_ray}))
        else:
            new_cones.add(cone)
    post = ConeComplex(
        tuple(new_rays),
        tuple(sorted(new_cones, key=lambda t: (len(t), t))),
        c.labels,
    )
    new_max: set[tuple[str, ...]] = set()
    for cone in c.maximal_cones():
        s = set(cone)
        if r1 in s and r2 in s:
            new_max.add(_sorted_cone((s - {r1}) | {new_ray}))
            new_max.add(_sorted_cone((s - {r2}) | {new_ray}))
        else:
            new_max.add(cone)
    post.__dict__["_maximal_cache"] = tuple(
        sorted(new_max, key=lambda t: (len(t), t))
    )
    step = SubdivisionStep(center=(r1, r2), new_ray=new_ray, pre=c, post=post)
    return post, step


@dataclass(frozen=True)
class PLFunction:
    """Integer-or-rational values on rays, one linear function per cone."""

    values: tuple[tuple[str, Fraction], ...]

    def _map(self) -> dict[str, Fraction]:
        m = self.__dict__.get("_map_cache")
        if m is None:
            m = dict(self.values)
            self.__dict__["_map_cache"] = m
        return m

    def value(self, ray_id: str) -> Fraction:
        try:
            return self._map()[ray_id]
        except KeyError:
            raise KeyError(f"PL function has no value on ray {ray_id!r}") from None

    def get(self, ray_id: str, default: Fraction = Fraction(0)) -> Fraction:
        return self._map().get(ray_id, default)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.values)

    @property
    def nonnegative(self) -> bool:
        return all(v >= 0 for _, v in self.values)


def pl_function(values: Mapping[str, int | Fraction]) -> PLFunction:
    """Build a PL function from a ray-to-value mapping."""
    items = tuple(sorted((k, Fraction(v)) for k, v in values.items()))
    return PLFunction(items)


def pl_pullback(f: PLFunction, step: SubdivisionStep) -> PLFunction:
    """Pull a PL function back along a subdivision step.

    Old rays keep their values; the new ray receives the sum of the center
    values, the value of the original function at the sum of primitives.
    """
    r1, r2 = step.center
    vals = f.as_dict()
    vals[step.new_ray] = f.get(r1) + f.get(r2)
    return pl_function(vals)

"""Finitely supported elements of the free space over a finite metric space.

An element is a rational linear combination of evaluation functionals
delta(p); the base point never carries a coefficient because delta(base) is
the zero functional.  On a finite space the evaluation functionals at the
non-base points form a basis, so representations are unique and the support
is literally the key set of the canonical coefficient mapping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, combinations
from typing import Iterable, Mapping

from .errors import EmptyFamily, SpaceMismatch, UnknownLabel
from .metric import PointedMetricSpace
from .rationals import as_fraction


@dataclass(frozen=True)
class FreeElement:
    """Sparse element sum_p a_p delta(p) with exact rational coefficients.

    `items` is sorted by point index, stores no zero coefficient, and never
    contains the base point.  Use :func:`canonicalize` (or the arithmetic
    operators) instead of constructing instances directly.
    """

    space: PointedMetricSpace
    items: tuple[tuple[int, Fraction], ...]

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self.items)

    def coeff(self, p: int) -> Fraction:
        for idx, value in self.items:
            if idx == p:
                return value
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.items

    def pair(self, f) -> Fraction:
        """Duality pairing <mu, f> = sum_p a_p f(p).

        Works against any function-like object exposing `values` indexed by
        point; for weight functions this is the same formula because
        delta(base) = 0 keeps the base value out of the sum.
        """
        if not _same_space(self.space, f.space):
            raise SpaceMismatch("pairing requires a function over the same space")
        values = f.values
        return sum((a * values[p] for p, a in self.items), Fraction(0))

    def _binop(self, other: "FreeElement", sign: int) -> "FreeElement":
        if not isinstance(other, FreeElement):
            return NotImplemented
        if not _same_space(self.space, other.space):
            raise SpaceMismatch("elements over different spaces never interoperate")
        acc = dict(self.items)
        for p, a in other.items:
            acc[p] = acc.get(p, Fraction(0)) + sign * a
        return canonicalize(self.space, acc)

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return FreeElement(self.space, tuple((p, -a) for p, a in self.items))

    def __mul__(self, scalar):
        c = as_fraction(scalar)
        if c == 0:
            return FreeElement(self.space, ())
        return FreeElement(self.space, tuple((p, c * a) for p, a in self.items))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        c = as_fraction(scalar)
        return self * (Fraction(1) / c)


@dataclass(frozen=True)
class Molecule:
    """An ordered pair of distinct points naming (delta(p)-delta(q))/d(p,q)."""

    p: int
    q: int

    def as_element(self, space: PointedMetricSpace) -> FreeElement:
        scale = Fraction(1) / space.d(self.p, self.q)
        return canonicalize(space, {self.p: scale, self.q: -scale})


def _same_space(a: PointedMetricSpace, b: PointedMetricSpace) -> bool:
    """Identity first (hot path), structural equality as the fallback."""
    return a is b or a == b


def canonicalize(space: PointedMetricSpace, raw: Mapping) -> FreeElement:
    """Build a FreeElement from a point -> rational mapping.

    Keys may be point indices or labels.  Zero coefficients are dropped and
    so is any coefficient on the base point (delta(base) = 0).
    """
    acc: dict[int, Fraction] = {}
    for key, value in raw.items():
        if isinstance(key, int) and not isinstance(key, bool):
            if not (0 <= key < space.n):
                raise UnknownLabel(key)
            idx = key
        else:
            idx = space.index(key)
        acc[idx] = acc.get(idx, Fraction(0)) + as_fraction(value)
    items = tuple(
        sorted((p, a) for p, a in acc.items() if a != 0 and p != space.base)
    )
    return FreeElement(space=space, items=items)


def zero(space: PointedMetricSpace) -> FreeElement:
    return FreeElement(space, ())


def delta(space: PointedMetricSpace, p: int) -> FreeElement:
    """The evaluation functional at a point."""
    return canonicalize(space, {p: 1})


def support(mu: FreeElement) -> frozenset[int]:
    """Support of mu: the key set of its canonical coefficient mapping."""
    return frozenset(p for p, _ in mu.items)


def support_by_functionals(mu: FreeElement) -> frozenset[int]:
    """Independent route to the support via bump-function pairings.

    A point p != base belongs to the support iff the nonnegative bump equal
    to 1 at p and 0 elsewhere (always Lipschitz on a finite space) pairs
    nontrivially with mu.
    """
    from .functions import point_bump

    space = mu.space
    found = []
    for p in space.nonbase_points():
        if mu.pair(point_bump(space, p)) != 0:
            found.append(p)
    return frozenset(found)


def is_positive(mu: FreeElement) -> bool:
    """Whether mu pairs nonnegatively with every nonnegative function.

    On a finite space this is equivalent to coefficientwise nonnegativity:
    a negative coefficient at p is exposed by the nonnegative bump at p.
    """
    return all(a > 0 for _, a in mu.items)


def order_leq(mu: FreeElement, lam: FreeElement) -> bool:
    """The partial order: mu <= lam iff lam - mu is positive."""
    if not _same_space(mu.space, lam.space):
        raise SpaceMismatch("order comparison requires a common space")
    return is_positive(lam - mu)


def subspace_membership(mu: FreeElement, K: Iterable[int]) -> bool:
    """Whether mu lies in the coordinate subspace spanned by delta(K).

    Equivalent formulations (checked as property tests): support(mu) is
    contained in K up to the base point, and mu cannot distinguish
    functions that agree on K.
    """
    allowed = set(K) | {mu.space.base}
    return support(mu) <= allowed


def intersection_property_check(
    space: PointedMetricSpace, Ks: Iterable[Iterable[int]]
) -> bool:
    """Finite-scale intersection property for coordinate subspaces.

    Compares, as sets of admissible support patterns, the intersection of
    the subspaces spanned by each K_i against the subspace spanned by the
    intersection of the K_i.  Always true; returning the comparison keeps
    the two sides honest.
    """
    family = [frozenset(K) for K in Ks]
    if not family:
        raise EmptyFamily("the subset family must be nonempty")

    allowed_each = [(K | {space.base}) - {space.base} for K in family]

    inter = family[0]
    for K in family[1:]:
        inter = inter & K
    allowed_inter = (inter | {space.base}) - {space.base}

    points = sorted(set(space.nonbase_points()))
    if len(points) <= 16:
        # exhaustive comparison of the admissible support patterns
        def patterns(allowed: frozenset[int] | set[int]) -> set[frozenset[int]]:
            allowed = sorted(allowed)
            return {
                frozenset(c)
                for c in chain.from_iterable(
                    combinations(allowed, k) for k in range(len(allowed) + 1)
                )
            }

        lhs = patterns(allowed_each[0])
        for allowed in allowed_each[1:]:
            lhs &= patterns(allowed)
        return lhs == patterns(allowed_inter)

    lhs_points = set(points)
    for allowed in allowed_each:
        lhs_points &= set(allowed)
    return lhs_points == set(allowed_inter)

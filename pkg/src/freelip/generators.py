"""Seeded random generation of spaces, elements and functions.

Everything is driven by an explicit random.Random instance and produces
exact rational data, so a fixed seed reproduces the whole corpus bit for
bit.  Random spaces are built as shortest-path closures of random positive
edge weights; the closure process creates plenty of tight triangles, which
is what makes nontrivial metric segments (and hence non-extreme molecules)
common in the corpus.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .elements import FreeElement, canonicalize
from .functions import (
    LipFunction,
    WeightFunction,
    lip_constant,
    lip_function,
    weight_function,
)
from .metric import PointedMetricSpace, line_space, space_from_points, validate_space


def random_rational(rng: random.Random, max_num: int = 9, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_space(rng: random.Random, n: int) -> PointedMetricSpace:
    """Random n-point space: metric closure of random positive weights."""
    if n == 1:
        return validate_space([[0]])
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = random_rational(rng, max_num=12, max_den=3)
    # Floyd-Warshall closure keeps symmetry and positivity
    for k in range(n):
        for i in range(n):
            for j in range(n):
                through = w[i][k] + w[k][j]
                if i != j and through < w[i][j]:
                    w[i][j] = through
    return validate_space(w)


def random_line_subset(rng: random.Random, n: int) -> PointedMetricSpace:
    """n distinct rationals on the line; segments are usually nontrivial."""
    coords: set[Fraction] = set()
    while len(coords) < n:
        coords.add(Fraction(rng.randint(0, 4 * n), rng.randint(1, 3)))
    return space_from_points(sorted(coords))


def uniform_space(n: int, c=Fraction(1)) -> PointedMetricSpace:
    """All distances equal; every segment is trivial."""
    d = [[Fraction(0) if i == j else Fraction(c) for j in range(n)] for i in range(n)]
    return validate_space(d)


def random_corpus(
    seed: int, count: int, min_n: int, max_n: int
) -> list[PointedMetricSpace]:
    """Deterministic mixed corpus of validated spaces."""
    rng = random.Random(seed)
    spaces = []
    for i in range(count):
        n = rng.randint(min_n, max_n)
        kind = i % 4
        if kind == 0 and n >= 2:
            spaces.append(random_line_subset(rng, n))
        elif kind == 1:
            spaces.append(uniform_space(n, random_rational(rng)))
        elif kind == 2 and n >= 2:
            spaces.append(line_space(n, step=random_rational(rng)))
        else:
            spaces.append(random_space(rng, n))
    return spaces


def random_subset(
    rng: random.Random, space: PointedMetricSpace, allow_empty: bool = True
) -> frozenset[int]:
    points = list(space.points())
    k = rng.randint(0 if allow_empty else 1, len(points))
    return frozenset(rng.sample(points, k))


def random_positive_element(
    rng: random.Random,
    space: PointedMetricSpace,
    max_support: int | None = None,
    min_support: int = 1,
) -> FreeElement:
    """Positive element with random support; zero on a one-point space."""
    candidates = list(space.nonbase_points())
    if not candidates:
        return canonicalize(space, {})
    cap = len(candidates) if max_support is None else min(max_support, len(candidates))
    lo = min(min_support, cap)
    supp = rng.sample(candidates, rng.randint(lo, cap))
    return canonicalize(space, {p: random_rational(rng) for p in supp})


def random_element(
    rng: random.Random, space: PointedMetricSpace, max_support: int | None = None
) -> FreeElement:
    """Signed element with random support."""
    candidates = list(space.nonbase_points())
    if not candidates:
        return canonicalize(space, {})
    cap = len(candidates) if max_support is None else min(max_support, len(candidates))
    supp = rng.sample(candidates, rng.randint(1, cap))
    return canonicalize(
        space, {p: rng.choice((1, -1)) * random_rational(rng) for p in supp}
    )


def random_lip0(
    rng: random.Random, space: PointedMetricSpace, unit_ball: bool = False
) -> LipFunction:
    """Random function vanishing at the base, optionally scaled into the ball."""
    values = [
        Fraction(0)
        if x == space.base
        else rng.choice((1, -1, 1)) * random_rational(rng)
        for x in range(space.n)
    ]
    f = lip_function(space, values)
    if unit_ball:
        L = lip_constant(f)
        if L > 1:
            f = lip_function(space, [v / L for v in f.values])
    return f


def random_nonneg_lip0(rng: random.Random, space: PointedMetricSpace) -> LipFunction:
    values = [
        Fraction(0) if x == space.base else rng.choice((0, 1)) * random_rational(rng)
        for x in range(space.n)
    ]
    return lip_function(space, values)


def random_weight(
    rng: random.Random, space: PointedMetricSpace, nonneg: bool = False
) -> WeightFunction:
    """Random weight; roughly half the points get weight zero."""
    signs = (1,) if nonneg else (1, -1)
    values = [
        rng.choice(signs) * random_rational(rng) if rng.random() < 0.6 else Fraction(0)
        for _ in range(space.n)
    ]
    return weight_function(space, values)

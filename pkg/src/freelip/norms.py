"""Exact free-norm computation by linear-programming duality.

The norm of an element is computed twice, by two different exact LPs:

* dual route: maximize the pairing over the 1-Lipschitz unit ball,
* primal route: minimum-cost transportation of the coefficient masses,
  converted into a molecule decomposition of matching total weight.

Both LPs are formulated on the support of the element plus the base point;
the dual witness is then extended to the whole space by McShane extension.
This loses nothing: pairings only see values on the support, a shortest
route between support points never improves by detouring through other
points (triangle inequality), and the extension preserves the Lipschitz
constant.  Every certificate re-verifies its claimed identities, and the
two routes must agree exactly (zero duality gap) or an assertion fires.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import lp
from .elements import FreeElement, Molecule, is_positive, support, zero
from .errors import (
    EmptyFace,
    InternalVerificationFailure,
    NotInUnitBall,
    NotPositive,
    ZeroElement,
)
from .functions import (
    LipFunction,
    distance_to_base,
    lip_constant,
    lip_function,
    mcshane_extend,
    partial_function,
)
from .metric import PointedMetricSpace

_ZERO = Fraction(0)


@dataclass(frozen=True)
class DualCertificate:
    """Norm value together with a norming 1-Lipschitz function."""

    value: Fraction
    witness: LipFunction


@dataclass(frozen=True)
class PrimalCertificate:
    """Norm value together with a molecule decomposition attaining it."""

    value: Fraction
    decomposition: tuple[tuple[Molecule, Fraction], ...]


@dataclass(frozen=True)
class NormCertificate:
    """Both halves of a norm computation, certified against each other."""

    value: Fraction
    dual_witness: LipFunction
    primal_witness: tuple[tuple[Molecule, Fraction], ...]


@dataclass(frozen=True)
class FaceReport:
    """The face of the unit ball normed by a given function.

    The unit ball is the convex hull of the molecules, so the face is the
    convex hull of the molecules at which the function attains slope one.
    """

    norming_function: LipFunction
    tight_molecules: tuple[Molecule, ...]
    is_unique_normer: bool
    face_dimension: int
    sample_distinct_normer: FreeElement | None


@dataclass(frozen=True)
class NormersReport:
    """Affine description of the set of norming functions of an element.

    `fixed_values` lists the function values forced on every normer;
    `shared_tight_pairs` lists the slope-one constraints active across the
    entire optimal face of the dual LP over the whole space.
    """

    value: Fraction
    witness: LipFunction
    fixed_values: dict[int, Fraction]
    shared_tight_pairs: frozenset[tuple[int, int]]


def _nodes(mu: FreeElement, restrict: bool) -> list[int]:
    if restrict:
        return sorted(support(mu) | {mu.space.base})
    return list(range(mu.space.n))


def _dual_rows(space: PointedMetricSpace, nodes: Sequence[int]):
    """Slope constraints f(x) - f(y) <= d(x,y) over ordered node pairs."""
    base = space.base
    var_of = {p: i for i, p in enumerate(q for q in nodes if q != base)}
    nvars = len(var_of)
    rows = []
    for x in nodes:
        for y in nodes:
            if x == y:
                continue
            coeffs = [_ZERO] * nvars
            if x != base:
                coeffs[var_of[x]] += 1
            if y != base:
                coeffs[var_of[y]] -= 1
            rows.append((coeffs, lp.LEQ, space.d(x, y)))
    return var_of, rows


def free_norm_dual(mu: FreeElement, restrict: bool = True) -> DualCertificate:
    """Norm via the dual LP: maximize <mu, f> over the 1-Lipschitz ball.

    Returns the exact optimum and a norming function on the whole space.
    """
    space = mu.space
    if mu.is_zero():
        return DualCertificate(_ZERO, lip_function(space, [0] * space.n))
    nodes = _nodes(mu, restrict)
    var_of, rows = _dual_rows(space, nodes)
    objective = [_ZERO] * len(var_of)
    for p, a in mu.items:
        objective[var_of[p]] = a
    sol = lp.maximize(objective, rows, free=range(len(var_of))).require_optimal()

    partial = partial_function(
        space, {p: sol.x[i] for p, i in var_of.items()}
    )
    witness = mcshane_extend(partial)
    if lip_constant(witness) > 1 or mu.pair(witness) != sol.value:
        raise InternalVerificationFailure("dual witness failed verification")
    return DualCertificate(sol.value, witness)


def free_norm_primal(mu: FreeElement, restrict: bool = True) -> PrimalCertificate:
    """Norm via the primal LP: minimum-cost transport of the coefficients.

    One nonnegative flow variable per ordered node pair; the net divergence
    at every non-base node must equal its coefficient (the base point
    absorbs the residual).  The optimal flow is returned as a molecule
    decomposition whose weights sum to the norm.
    """
    space = mu.space
    if mu.is_zero():
        return PrimalCertificate(_ZERO, ())
    nodes = _nodes(mu, restrict)
    base = space.base
    arcs = [(x, y) for x in nodes for y in nodes if x != y]
    arc_of = {a: i for i, a in enumerate(arcs)}
    cost = [space.d(x, y) for x, y in arcs]
    coeffs = mu.coeffs
    rows = []
    for p in nodes:
        if p == base:
            continue
        row = [_ZERO] * len(arcs)
        for y in nodes:
            if y == p:
                continue
            row[arc_of[(p, y)]] += 1
            row[arc_of[(y, p)]] -= 1
        rows.append((row, lp.EQ, coeffs.get(p, _ZERO)))
    sol = lp.minimize(cost, rows).require_optimal()

    decomposition = []
    rebuilt = zero(space)
    total = _ZERO
    for (x, y), flow in zip(arcs, sol.x):
        if flow != 0:
            mol = Molecule(x, y)
            weight = flow * space.d(x, y)
            decomposition.append((mol, weight))
            rebuilt = rebuilt + mol.as_element(space) * weight
            total += abs(weight)
    if rebuilt != mu or total != sol.value:
        raise InternalVerificationFailure("primal decomposition failed verification")
    return PrimalCertificate(sol.value, tuple(decomposition))


def norm_certificate(mu: FreeElement) -> NormCertificate:
    """Run both norm routes and certify that they agree exactly."""
    dual = free_norm_dual(mu)
    primal = free_norm_primal(mu)
    if dual.value != primal.value:
        raise InternalVerificationFailure(
            f"duality gap: dual {dual.value} != primal {primal.value}"
        )
    return NormCertificate(dual.value, dual.witness, primal.decomposition)


def free_norm(mu: FreeElement) -> Fraction:
    """Just the norm value (dual route)."""
    return free_norm_dual(mu).value


def positive_norm(mu: FreeElement) -> Fraction:
    """Norm of a positive element: pair against the distance-to-base function.

    Cross-checked against the dual LP on every call.
    """
    if not is_positive(mu):
        raise NotPositive("positive_norm requires a positive element")
    base = mu.space.base
    value = sum((a * mu.space.d(p, base) for p, a in mu.items), _ZERO)
    if value != free_norm_dual(mu).value:
        raise InternalVerificationFailure("positive-element norm formula disagrees with LP")
    return value


def _molecule_vector(space: PointedMetricSpace, mol: Molecule) -> tuple[Fraction, ...]:
    coeffs = mol.as_element(space).coeffs
    return tuple(coeffs.get(p, _ZERO) for p in space.nonbase_points())


def _rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    rows = [list(r) for r in rows]
    m, n = len(rows), len(rows[0])
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for i in range(rank + 1, m):
            if rows[i][col] != 0:
                f = rows[i][col] / prow[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rank += 1
        if rank == m:
            break
    return rank


def norming_face(f: LipFunction, nominal: Molecule | None = None) -> FaceReport:
    """Describe the unit-ball face {mu : <mu, f> = 1} for a 1-Lipschitz f.

    The tight molecules are scanned exhaustively; the face is their convex
    hull and its affine dimension is computed by exact rank.  `nominal`
    names the molecule a caller expects to be normed, so the sample
    distinct normer (present iff the face is not a single point) can be
    chosen different from it.
    """
    space = f.space
    if lip_constant(f) > 1:
        raise NotInUnitBall("norming_face requires Lipschitz constant at most 1")
    tight = [
        Molecule(x, y)
        for x, y in space.ordered_pairs()
        if f.values[x] - f.values[y] == space.d(x, y)
    ]
    if not tight:
        raise EmptyFace("no unit-ball element attains pairing 1 with this function")

    vectors = [_molecule_vector(space, mol) for mol in tight]
    first = vectors[0]
    diffs = [[a - b for a, b in zip(v, first)] for v in vectors[1:]]
    dimension = _rank(diffs)
    unique = len(tight) == 1

    sample = None
    if not unique:
        fallback = nominal if nominal is not None else tight[0]
        for mol in tight:
            if (mol.p, mol.q) != (fallback.p, fallback.q):
                sample = mol.as_element(space)
                break
    if unique != (dimension == 0):
        raise InternalVerificationFailure("face dimension disagrees with uniqueness")
    return FaceReport(
        norming_function=f,
        tight_molecules=tuple(tight),
        is_unique_normer=unique,
        face_dimension=dimension,
        sample_distinct_normer=sample,
    )


def normers_of(mu: FreeElement) -> NormersReport:
    """Affine description of every norming function of a nonzero element.

    Works over the whole space: computes the norm, then pins down which
    function values and which slope-one constraints are shared by all
    optima of the dual LP (via one auxiliary LP per candidate).
    For a positive element the values on the support are asserted to be
    the distances to the base point.
    """
    if mu.is_zero():
        raise ZeroElement("every function norms the zero element")
    space = mu.space
    nodes = list(range(space.n))
    var_of, rows = _dual_rows(space, nodes)
    nvars = len(var_of)
    objective = [_ZERO] * nvars
    for p, a in mu.items:
        objective[var_of[p]] = a
    sol = lp.maximize(objective, rows, free=range(nvars)).require_optimal()
    value = sol.value
    face_rows = rows + [(objective, lp.EQ, value)]

    witness = lip_function(space, {p: sol.x[i] for p, i in var_of.items()})

    fixed: dict[int, Fraction] = {}
    for p, i in var_of.items():
        probe = [_ZERO] * nvars
        probe[i] = Fraction(1)
        hi = lp.maximize(probe, face_rows, free=range(nvars)).require_optimal()
        lo = lp.minimize(probe, face_rows, free=range(nvars)).require_optimal()
        if hi.value == lo.value:
            fixed[p] = hi.value

    shared = []
    for x, y in space.ordered_pairs():
        fx = witness.values[x]
        fy = witness.values[y]
        if fx - fy != space.d(x, y):
            continue  # not tight at one optimum, so not tight on the face
        probe = [_ZERO] * nvars
        if x != space.base:
            probe[var_of[x]] += 1
        if y != space.base:
            probe[var_of[y]] -= 1
        lo = lp.minimize(probe, face_rows, free=range(nvars)).require_optimal()
        if lo.value == space.d(x, y):
            shared.append((x, y))

    if is_positive(mu):
        rho = distance_to_base(space)
        for p in support(mu):
            if fixed.get(p) != rho.values[p]:
                raise InternalVerificationFailure(
                    "a normer of a positive element may deviate from d(., base) on the support"
                )
    return NormersReport(
        value=value,
        witness=witness,
        fixed_values=fixed,
        shared_tight_pairs=frozenset(shared),
    )

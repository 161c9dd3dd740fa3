"""Certification of extremal structure in the free-space unit balls.

Three families of results are certified constructively:

* a molecule is an exposed point of the unit ball exactly when its metric
  segment is trivial, with the exposing function exhibited; otherwise an
  exact midpoint decomposition through an interior segment point is built;
* the extreme points of the positive unit ball are the normalized
  evaluation functionals, with a constructive split of everything else;
* a positive element plus a finite perturbation that is an extreme point
  must itself be a molecule; non-extremality is witnessed by an explicit
  weighted perturbation verified through the norm engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .elements import (
    FreeElement,
    Molecule,
    delta,
    is_positive,
    support,
    zero,
)
from .errors import (
    DegeneratePair,
    InternalVerificationFailure,
    NotNormalized,
    NotOneLipschitzOnDomain,
    NotPositive,
    SingletonSupport,
)
from .functions import (
    LipFunction,
    PartialFunction,
    WeightFunction,
    bump,
    mcshane_extend,
    partial_function,
    partial_lip_constant,
    pointwise_product,
    scale_weight,
    weight_element,
    weight_sum,
)
from .metric import PointedMetricSpace
from . import lp
from .norms import (
    FaceReport,
    free_norm_dual,
    norm_certificate,
    norming_face,
    positive_norm,
)

_ZERO = Fraction(0)

EXPOSED = "Exposed"
NOT_EXTREME = "NotExtreme"


@dataclass(frozen=True)
class ExposednessVerdict:
    """Outcome of classifying a molecule against the segment criterion.

    On a finite space the trichotomy extreme / exposed / neither collapses:
    the molecule is exposed iff its segment is trivial, and otherwise it is
    not even extreme, witnessed by `counterexample_decomposition`, two
    distinct unit-ball elements averaging to the molecule.
    """

    molecule: Molecule
    segment_trivial: bool
    exposing_function: LipFunction | None
    face: FaceReport
    verdict: str
    counterexample_decomposition: tuple[FreeElement, FreeElement] | None


@dataclass(frozen=True)
class PerturbationWitness:
    """Constructive certificate that lam + mu is not an extreme point.

    `v` is a nonzero weighted copy of lam with lam +- v both positive,
    orthogonal to the extension of the optimal partial function, and
    norm-preserving: ||lam +- v + mu|| = ||lam + mu|| exactly.
    """

    lam: FreeElement
    mu: FreeElement
    f_star: PartialFunction
    K: frozenset[int]
    chosen_points: tuple[int, int, int]
    c: tuple[Fraction, Fraction, Fraction]
    h: WeightFunction
    v: FreeElement


def classify_molecule(space: PointedMetricSpace, p: int, q: int) -> ExposednessVerdict:
    """Classify the molecule (p, q) as exposed or not extreme.

    The segment decides; both branches carry exact certification.  The
    exposed branch checks that the canonical norming function has a
    singleton norming face equal to the molecule itself; the other branch
    builds the midpoint decomposition through an interior segment point
    and verifies both halves have norm one.
    """
    if p == q:
        raise DegeneratePair(f"molecule endpoints coincide: {p}")
    from .functions import molecule_norming_function

    seg = space.segment(p, q)
    mol = Molecule(p, q)
    f = molecule_norming_function(space, p, q)
    face = norming_face(f, nominal=mol)

    if seg.is_trivial():
        if not face.is_unique_normer or face.tight_molecules != (mol,):
            raise InternalVerificationFailure(
                "trivial segment but the norming face is not the molecule alone"
            )
        return ExposednessVerdict(
            molecule=mol,
            segment_trivial=True,
            exposing_function=f,
            face=face,
            verdict=EXPOSED,
            counterexample_decomposition=None,
        )

    interior = sorted(seg.members - {p, q}, key=lambda i: space.labels[i])
    x = interior[0]
    t = space.d(p, x) / space.d(p, q)
    first = Molecule(p, x).as_element(space)
    second = Molecule(x, q).as_element(space)
    # midpoint form of the convex combination t*first + (1-t)*second
    if 2 * t <= 1:
        u = first * (2 * t) + second * (1 - 2 * t)
        w = second
    else:
        u = first
        w = first * (2 * t - 1) + second * (2 - 2 * t)
    target = mol.as_element(space)
    if u == w or (u + w) * Fraction(1, 2) != target:
        raise InternalVerificationFailure("midpoint decomposition does not average back")
    for half in (u, w):
        if norm_certificate(half).value != 1:
            raise InternalVerificationFailure("midpoint half does not have norm one")
    return ExposednessVerdict(
        molecule=mol,
        segment_trivial=False,
        exposing_function=None,
        face=face,
        verdict=NOT_EXTREME,
        counterexample_decomposition=(u, w),
    )


def normers_support_check(space: PointedMetricSpace, p: int, q: int) -> bool:
    """Every unit-ball element norming the molecule function sits in the segment.

    The norming face is the convex hull of the tight molecules, so it is
    enough that every tight molecule has both endpoints inside the metric
    segment of (p, q).
    """
    from .functions import molecule_norming_function

    seg = space.segment(p, q)
    face = norming_face(molecule_norming_function(space, p, q), nominal=Molecule(p, q))
    return all(
        mol.p in seg.members and mol.q in seg.members for mol in face.tight_molecules
    )


def positive_ball_extremes(space: PointedMetricSpace) -> list[FreeElement]:
    """Extreme points of the positive unit ball: 0 and delta(x)/d(x, base).

    Each returned element is verified to be a vertex of the positive ball,
    which in coefficient coordinates is the scaled simplex
    {a >= 0 : sum a_p d(p, base) <= 1}: the active constraints at the
    claimed vertex must have full rank.
    """
    base = space.base
    out = [zero(space)]
    for x in space.nonbase_points():
        out.append(delta(space, x) / space.d(x, base))
    for element in out:
        if not _is_positive_ball_vertex(element):
            raise InternalVerificationFailure(
                "claimed extreme point is not a vertex of the positive ball"
            )
    return out


def _is_positive_ball_vertex(element: FreeElement) -> bool:
    """Exact active-constraint rank test in coefficient coordinates."""
    space = element.space
    points = space.nonbase_points()
    dim = len(points)
    if dim == 0:
        return element.is_zero()
    coeffs = element.coeffs
    if any(a < 0 for a in coeffs.values()):
        return False
    budget = sum(coeffs.get(p, _ZERO) * space.d(p, space.base) for p in points)
    if budget > 1:
        return False
    active = []
    for i, p in enumerate(points):
        if coeffs.get(p, _ZERO) == 0:
            row = [_ZERO] * dim
            row[i] = Fraction(1)
            active.append(row)
    if budget == 1:
        active.append([space.d(p, space.base) for p in points])
    from .norms import _rank

    return _rank(active) == dim


def split_positive(
    mu: FreeElement, a: int | None = None, b: int | None = None
) -> tuple[FreeElement, FreeElement, Fraction]:
    """Write a norm-one positive element as a nontrivial positive convex combination.

    Weights mu by a plateau bump that is 1 near the support point a and 0
    near b (radius d(a,b)/3), producing mu1 + mu2 = mu with both halves
    positive and nonzero.  Returns (mu1/t, mu2/(1-t), t) where t = ||mu1||;
    positive norms are additive, so t + ||mu2|| = 1 exactly.
    """
    if not is_positive(mu):
        raise NotPositive("split_positive requires a positive element")
    supp = sorted(support(mu), key=lambda i: mu.space.labels[i])
    if len(supp) < 2:
        raise SingletonSupport("split_positive requires at least two support points")
    if positive_norm(mu) != 1:
        raise NotNormalized("split_positive requires a norm-one element")
    if a is None or b is None:
        a, b = supp[0], supp[1]
    space = mu.space
    r = space.d(a, b) / 3
    h = bump(space, space.ball(a, r), r)
    mu1 = weight_element(mu, h)
    mu2 = mu - mu1
    if mu1.is_zero() or mu2.is_zero():
        raise InternalVerificationFailure("bump split produced a trivial half")
    if not (is_positive(mu1) and is_positive(mu2)):
        raise InternalVerificationFailure("bump split produced a non-positive half")
    t = positive_norm(mu1)
    if t + positive_norm(mu2) != 1:
        raise InternalVerificationFailure("positive norms failed to add up")
    if mu1 / t * t + mu2 / (1 - t) * (1 - t) != mu:
        raise InternalVerificationFailure("split does not reconstruct the element")
    return (mu1 / t, mu2 / (1 - t), t)


# ---------------------------------------------------------------------------
# McShane-extension machinery for almost-positive elements


def extended_pairing(
    lam: FreeElement, mu: FreeElement, f: PartialFunction
) -> Fraction:
    """Pair mu + lam against the McShane extension of a partial function."""
    if partial_lip_constant(f) > 1:
        raise NotOneLipschitzOnDomain(
            "extended_pairing requires a 1-Lipschitz partial function"
        )
    return (mu + lam).pair(mcshane_extend(f))


def maximize_extended_pairing(
    lam: FreeElement, mu: FreeElement
) -> tuple[PartialFunction, Fraction]:
    """Maximize f -> <mu + lam, extension of f> over the 1-Lipschitz ball on S.

    S is the support of mu plus the base point.  Variables are the values
    of f on S and one extension value per support point of lam off S; the
    latter are bounded above by every f(q) + d(q, x), which is tight at the
    optimum because the lam coefficients are nonnegative.  The optimum is
    asserted to equal the norm of mu + lam.
    """
    if not is_positive(lam):
        raise NotPositive("the unperturbed part must be positive")
    space = lam.space
    base = space.base
    S = sorted(support(mu) | {base})
    f_points = [p for p in S if p != base]
    t_points = sorted(support(lam) - set(S))
    nf, nt = len(f_points), len(t_points)
    nvars = nf + nt

    if nvars == 0:
        f_star = partial_function(space, {base: 0})
        value = _ZERO
        total = mu + lam  # == 0 here: mu supported on S = {base} means mu == 0
        if free_norm_dual(total).value != value:
            raise InternalVerificationFailure("degenerate pairing maximization is off")
        return f_star, value

    var_f = {p: i for i, p in enumerate(f_points)}
    var_t = {x: nf + i for i, x in enumerate(t_points)}

    rows = []
    for i, x in enumerate(S):
        for y in S[i + 1 :]:
            row = [_ZERO] * nvars
            if x != base:
                row[var_f[x]] += 1
            if y != base:
                row[var_f[y]] -= 1
            rows.append((row, lp.LEQ, space.d(x, y)))
            rows.append(([-v for v in row], lp.LEQ, space.d(x, y)))
    for x in t_points:
        for q in S:
            row = [_ZERO] * nvars
            row[var_t[x]] += 1
            if q != base:
                row[var_f[q]] -= 1
            rows.append((row, lp.LEQ, space.d(q, x)))

    total = mu + lam
    objective = [_ZERO] * nvars
    for p, a in total.items:
        if p in var_f:
            objective[var_f[p]] = a
    for x in t_points:
        objective[var_t[x]] = lam.coeff(x)

    sol = lp.maximize(objective, rows, free=range(nvars)).require_optimal()
    f_star = partial_function(space, {p: sol.x[var_f[p]] for p in f_points})
    value = sol.value
    if free_norm_dual(total).value != value:
        raise InternalVerificationFailure(
            "maximized extended pairing does not equal the norm"
        )
    return f_star, value


def attainment_partition(
    space: PointedMetricSpace, f: PartialFunction
) -> dict[frozenset[int], frozenset[int]]:
    """Partition points by where the McShane infimum is attained.

    Each x is assigned the set K(x) of domain points achieving
    min_q f(q) + d(q, x); the cells keyed by K(x) are disjoint and cover
    the space.
    """
    if partial_lip_constant(f) > 1:
        raise NotOneLipschitzOnDomain(
            "attainment_partition requires a 1-Lipschitz partial function"
        )
    vals = f.values
    cells: dict[frozenset[int], set[int]] = {}
    for x in range(space.n):
        best = min(vals[q] + space.d(q, x) for q in f.domain)
        K = frozenset(q for q in f.domain if vals[q] + space.d(q, x) == best)
        cells.setdefault(K, set()).add(x)
    return {K: frozenset(xs) for K, xs in cells.items()}


def _kernel_vector(u: tuple[Fraction, ...], w: tuple[Fraction, ...]):
    """Nonzero integer-free rational solution of u.c = 0, w.c = 0 in R^3."""
    cross = (
        u[1] * w[2] - u[2] * w[1],
        u[2] * w[0] - u[0] * w[2],
        u[0] * w[1] - u[1] * w[0],
    )
    if any(v != 0 for v in cross):
        return cross
    # rows are parallel; u has strictly positive entries here
    return (u[1], -u[0], _ZERO)


def almost_positive_witness(
    lam: FreeElement, mu: FreeElement
) -> PerturbationWitness | None:
    """Build a non-extremality witness for lam + mu, if the structure permits.

    Pipeline: maximize the extended pairing to get an optimal partial
    function on S = supp(mu) + base; partition the space by attainment of
    its McShane extension; select the smallest cell meeting supp(lam) in at
    least three points (absent selection means no witness, which is the
    needed outcome when lam + mu is extreme); place singleton bumps at the
    first three such points, solve the 2x3 homogeneous system making the
    weighted element both mass- and pairing-orthogonal, and verify every
    claimed identity through the norm engine.
    """
    if not is_positive(lam):
        raise NotPositive("the unperturbed part must be positive")
    space = lam.space
    base = space.base

    f_star, _ = maximize_extended_pairing(lam, mu)
    S = set(f_star.domain)
    extension = mcshane_extend(f_star)
    cells = attainment_partition(space, f_star)

    lam_support = support(lam)
    candidates = []
    for K, cell in cells.items():
        hits = sorted(cell & lam_support, key=lambda i: space.labels[i])
        if len(hits) >= 3:
            candidates.append((len(K), sorted(space.labels[q] for q in K), K, hits))
    if not candidates:
        return None
    candidates.sort(key=lambda item: (item[0], item[1]))
    _, _, K, hits = candidates[0]
    p1, p2, p3 = hits[:3]

    fvals = f_star.values
    outside = sorted(S - set(K))
    if outside:
        eps = min(
            (fvals[qp] + space.d(pi, qp)) - (fvals[q] + space.d(pi, q))
            for q in K
            for qp in outside
            for pi in (p1, p2, p3)
        ) / 4
    else:
        eps = min(
            space.d(x, y) for x in range(space.n) for y in range(x + 1, space.n)
        ) / 2
    if eps <= 0:
        raise InternalVerificationFailure("attainment margin must be positive")

    # shrink the bump radius until the three balls are singletons
    gaps = [
        space.distance_to_set(pi, [x for x in range(space.n) if x != pi])
        for pi in (p1, p2, p3)
    ]
    r = min([eps] + gaps) / 2
    bumps = [bump(space, [pi], r) for pi in (p1, p2, p3)]
    for pi, hi in zip((p1, p2, p3), bumps):
        if hi.support != {pi}:
            raise InternalVerificationFailure("bump radius failed to isolate its point")

    u = tuple(lam.pair(hi) for hi in bumps)
    w = tuple(lam.pair(pointwise_product(hi, extension)) for hi in bumps)
    if any(v <= 0 for v in u):
        raise InternalVerificationFailure("bump masses must be strictly positive")
    c_raw = _kernel_vector(u, w)
    scale = max(abs(v) for v in c_raw)
    c = tuple(v / scale for v in c_raw)

    h = weight_sum(*(scale_weight(hi, ci) for hi, ci in zip(bumps, c)))
    v = weight_element(lam, h)

    _verify_witness(lam, mu, extension, h, v)
    return PerturbationWitness(
        lam=lam,
        mu=mu,
        f_star=f_star,
        K=frozenset(K),
        chosen_points=(p1, p2, p3),
        c=c,
        h=h,
        v=v,
    )


def _verify_witness(
    lam: FreeElement,
    mu: FreeElement,
    extension: LipFunction,
    h: WeightFunction,
    v: FreeElement,
) -> None:
    if v.is_zero():
        raise InternalVerificationFailure("witness perturbation is zero")
    if not (is_positive(lam + v) and is_positive(lam - v)):
        raise InternalVerificationFailure("witness breaks positivity of lam +- v")
    if v.pair(extension) != 0:
        raise InternalVerificationFailure("witness is not orthogonal to the extension")
    if lam.pair(h) != 0:
        raise InternalVerificationFailure("weight carries nonzero mass against lam")
    if lam.pair(pointwise_product(h, extension)) != 0:
        raise InternalVerificationFailure("weighted extension pairing is nonzero")
    reference = norm_certificate(lam + mu).value
    plus = norm_certificate(lam + mu + v).value
    minus = norm_certificate(lam + mu - v).value
    if not (reference == plus == minus):
        raise InternalVerificationFailure(
            f"perturbation changed the norm: {reference} vs {plus}/{minus}"
        )

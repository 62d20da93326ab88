"""Halfspace description of the type polytope, at desk scale.

Given the finite set of 0/1 type vectors, this module computes a complete
irredundant description of their convex hull as affine-hull equations plus
facet-defining inequalities, converts each facet gradient into a trial
sequence via the certificate pipeline, and offers the resulting description
as an independent membership oracle.

The hull is never full dimensional in coordinate space (each block's entries
sum to one), so the affine hull is computed first by exact row reduction of
vertex differences; facets are then enumerated inside the hull with the
double description method over exact rationals: start from a simplicial cone
spanned by the first affinely independent vertices and insert the remaining
vertices one at a time, maintaining the extreme rays of the dual cone with a
combinatorial adjacency test.

Vertex-to-halfspace conversion blows up quickly in general, so hard caps on
coordinates and vertex counts refuse anything beyond desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import _kernels
from .certificate import decompose_to_trials, integerize, positivize
from .errors import CapExceeded, EnumerationCancelled, LayoutMismatch
from .model import (
    IndexLayout,
    RationalTypeSet,
    StochasticChoiceVector,
    TrialSequence,
    inner,
)

MAX_FACET_COORDINATES = 24
MAX_FACET_TYPES = 5000


@dataclass(frozen=True)
class AffineEquation:
    """inner(coefficients, x) == constant for every point of the hull."""

    coefficients: tuple[int, ...]
    constant: int


@dataclass(frozen=True)
class FacetInequality:
    """inner(normal, x) <= offset for every point of the hull, tight on a facet."""

    normal: tuple[int, ...]
    offset: int


@dataclass(frozen=True)
class HRepresentation:
    """Equations plus facets; together they cut out exactly the hull."""

    layout: IndexLayout
    dimension: int
    equations: tuple[AffineEquation, ...]
    facets: tuple[FacetInequality, ...]


def _primitive(vec: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Positive rescaling to integer entries with gcd 1 (zero vector allowed)."""
    fracs = [Fraction(v) for v in vec]
    if not any(fracs):
        return tuple(0 for _ in fracs)
    denom = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * denom) for f in fracs]
    g = math.gcd(*ints)
    return tuple(v // g for v in ints)


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    if not rows:
        return [], []
    n = len(rows[0])
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(n):
        pivot_row = next(
            (i for i in range(rank, len(mat)) if mat[i][col] != 0), None
        )
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        inv = 1 / mat[rank][col]
        if inv != 1:
            mat[rank] = [v * inv for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                _kernels.sub_scaled(mat[i], mat[rank], mat[i][col])
        pivots.append(col)
        rank += 1
    return mat[:rank], pivots


def _invert(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    reduced, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise AssertionError("matrix is singular")
    return [row[n:] for row in reduced]


def _affine_hull(
    vertices: list[tuple[int, ...]],
) -> tuple[list[list[Fraction]], list[int], list[int]]:
    """Row-reduced basis of the hull's direction space, its pivot and free columns."""
    base = vertices[0]
    diffs = [
        [Fraction(v[i] - base[i]) for i in range(len(base))] for v in vertices[1:]
    ]
    basis, pivots = _rref(diffs)
    free = [c for c in range(len(base)) if c not in pivots]
    return basis, pivots, free


def _equations(
    basis: list[list[Fraction]],
    pivots: list[int],
    free: list[int],
    base: tuple[int, ...],
) -> tuple[AffineEquation, ...]:
    """One equation per free column; sign fixed so the first nonzero entry is positive."""
    n = len(base)
    eqs = []
    for f in free:
        coeff = [Fraction(0)] * n
        coeff[f] = Fraction(1)
        for k, p in enumerate(pivots):
            coeff[p] = -basis[k][f]
        ints = list(_primitive(coeff))
        first = next(v for v in ints if v)
        if first < 0:
            ints = [-v for v in ints]
        const = _kernels.dot(ints, base)
        eqs.append(AffineEquation(tuple(ints), int(const)))
    eqs.sort(key=lambda e: (e.coefficients, e.constant))
    return tuple(eqs)


def _double_description(
    points: list[tuple[int, ...]],
    should_cancel: Callable[[], bool] | None,
) -> list[tuple[int, ...]]:
    """Extreme rays of {y : y . (p, 1) >= 0 for all points p}.

    Each ray corresponds to one facet of the (full-dimensional) hull of the
    points. Points are inserted in list order; the starting simplicial cone
    uses the first affinely independent ones.
    """
    dim = len(points[0]) + 1
    generators = [tuple(p) + (1,) for p in points]

    # Greedy prefix of dim linearly independent generators.
    chosen: list[int] = []
    elim: list[list[Fraction]] = []
    for idx, g in enumerate(generators):
        candidate = elim + [[Fraction(v) for v in g]]
        reduced, _ = _rref(candidate)
        if len(reduced) > len(elim):
            chosen.append(idx)
            elim = reduced
        if len(chosen) == dim:
            break
    if len(chosen) < dim:
        raise AssertionError("points do not affinely span their space")

    g_matrix = [[Fraction(v) for v in generators[i]] for i in chosen]
    inverse = _invert(g_matrix)
    rays = [_primitive([inverse[r][c] for r in range(dim)]) for c in range(dim)]

    # Exact zero sets (bitmask over processed inequalities) drive the
    # combinatorial adjacency test; they are always computed by evaluation
    # because combinations can be accidentally tight on old inequalities.
    processed = [generators[i] for i in chosen]

    def tight_mask(ray: tuple[int, ...]) -> int:
        mask = 0
        for q, gen in enumerate(processed):
            if _kernels.dot(gen, ray) == 0:
                mask |= 1 << q
        return mask

    masks = [tight_mask(r) for r in rays]

    chosen_set = set(chosen)
    for idx, g in enumerate(generators):
        if idx in chosen_set:
            continue
        if should_cancel is not None and should_cancel():
            raise EnumerationCancelled("facet enumeration cancelled")
        position = len(processed)
        values = [_kernels.dot(g, r) for r in rays]
        plus = [k for k, v in enumerate(values) if v > 0]
        minus = [k for k, v in enumerate(values) if v < 0]
        for k, v in enumerate(values):
            if v == 0:
                masks[k] |= 1 << position
        processed.append(g)
        if not minus:
            continue
        new_rays: list[tuple[int, ...]] = []
        for kp in plus:
            for km in minus:
                common = masks[kp] & masks[km]
                adjacent = True
                for other in range(len(rays)):
                    if other != kp and other != km and masks[other] & common == common:
                        adjacent = False
                        break
                if adjacent:
                    new_rays.append(
                        _primitive(
                            _kernels.combine(values[kp], rays[km], -values[km], rays[kp])
                        )
                    )
        keep = [k for k, v in enumerate(values) if v >= 0]
        rays = [rays[k] for k in keep] + new_rays
        masks = [masks[k] for k in keep] + [tight_mask(r) for r in new_rays]
    return rays


def enumerate_facets(
    type_set: RationalTypeSet,
    max_coordinates: int = MAX_FACET_COORDINATES,
    max_types: int = MAX_FACET_TYPES,
    should_cancel: Callable[[], bool] | None = None,
) -> HRepresentation:
    """Complete irredundant halfspace description of the hull of the type set.

    Output order is deterministic: equations and facets are sorted on their
    integer coefficient vectors. ``should_cancel`` is polled between vertex
    insertions so long enumerations can be abandoned cooperatively.
    """
    layout = type_set.layout
    n = layout.coordinate_count
    if n > max_coordinates or len(type_set) > max_types:
        raise CapExceeded(
            f"vertex-to-halfspace conversion is computationally prohibitive in "
            f"general; refusing {len(type_set)} vertices in {n} coordinates "
            f"(caps: {max_types} vertices, {max_coordinates} coordinates)"
        )
    vertices = [t.bits for t in type_set.types]
    base = vertices[0]
    basis, pivots, free = _affine_hull(vertices)
    equations = _equations(basis, pivots, free, base)
    dim = len(pivots)
    if dim == 0:
        return HRepresentation(layout, 0, equations, ())

    # Hull coordinates: the pivot-column entries of (vertex - base).
    points = [tuple(v[p] - base[p] for p in pivots) for v in vertices]
    rays = _double_description(points, should_cancel)

    facets = []
    for ray in rays:
        # Rays bound the hull from below (ray . (w, 1) >= 0); facets are
        # stated as upper bounds, so the lifted normal flips sign. Recomputing
        # the offset as the max over vertices absorbs both the base-point
        # shift and the gcd rescaling, and is tight by construction.
        normal = [0] * n
        for k, p in enumerate(pivots):
            normal[p] = -ray[k]
        normal = list(_primitive(normal))
        offset = max(_kernels.dot(normal, v) for v in vertices)
        facets.append(FacetInequality(tuple(normal), int(offset)))
    facets.sort(key=lambda f: (f.normal, f.offset))
    return HRepresentation(layout, dim, equations, tuple(facets))


def facet_membership_oracle(pi: StochasticChoiceVector, hrep: HRepresentation) -> bool:
    """True iff the data satisfies every equation and facet inequality."""
    if pi.layout != hrep.layout:
        raise LayoutMismatch("choice data and halfspace description disagree on layout")
    for eq in hrep.equations:
        if inner(eq.coefficients, pi.values) != eq.constant:
            return False
    for facet in hrep.facets:
        if inner(facet.normal, pi.values) > facet.offset:
            return False
    return True


def essential_sequences(
    hrep: HRepresentation, layout: IndexLayout
) -> tuple[TrialSequence, ...]:
    """One trial sequence per facet, via the shift/scale/decompose pipeline.

    Checking the axiom on exactly these sequences is equivalent to checking
    every facet inequality, hence (for data satisfying the hull equations) to
    membership itself.
    """
    if layout != hrep.layout:
        raise LayoutMismatch("halfspace description does not match layout")
    sequences = []
    for facet in hrep.facets:
        aggregate = integerize(positivize(facet.normal))
        sequences.append(decompose_to_trials(aggregate, layout, "canonical"))
    return tuple(sequences)

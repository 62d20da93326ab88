"""Exact membership of choice data in the convex hull of a type set.

``test_membership`` decides whether observed choice probabilities are a
mixture of admissible types. It either returns an explicit mixing
distribution reproducing the data coordinate for coordinate, or a separating
vector that strictly separates the data from every type. The decision is a
rational LP feasibility problem: find nonnegative weights, summing to one,
whose type combination equals the data; the Farkas multipliers of the
infeasible case are exactly a separating functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

from .errors import LayoutMismatch, ValidationError
from .exactlp import FeasiblePoint, solve_equality_feasibility
from .model import (
    ChoiceTypeVector,
    IndexLayout,
    RationalTypeSet,
    StochasticChoiceVector,
    inner,
    max_over_types,
)


@dataclass(frozen=True)
class MixingDistribution:
    """Positive rational weights on types that reproduce the observed data.

    Weights are kept in the type set's canonical order and sum to exactly 1.
    """

    layout: IndexLayout
    weights: tuple[tuple[ChoiceTypeVector, Fraction], ...]

    @property
    def support_size(self) -> int:
        return len(self.weights)

    def as_dict(self) -> dict[ChoiceTypeVector, Fraction]:
        return dict(self.weights)

    @cached_property
    def mixture(self) -> tuple[Fraction, ...]:
        """The combined vector sum(weight * type), computed exactly."""
        acc = [Fraction(0)] * self.layout.coordinate_count
        for t, w in self.weights:
            for i in t.chosen:
                acc[i] += w
        return tuple(acc)


@dataclass(frozen=True)
class SeparatingVector:
    """An integer functional valuing the data strictly above every type.

    ``gap`` is inner(direction, data) - max over types of
    inner(direction, type); it is strictly positive.
    """

    direction: tuple[int, ...]
    gap: Fraction


Verdict = Union[MixingDistribution, SeparatingVector]


def _normalize_direction(values: tuple[Fraction, ...]) -> tuple[int, ...]:
    """Scale a rational vector to integers with gcd 1 (direction preserved)."""
    denom = math.lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * denom) for v in values]
    g = math.gcd(*ints) if any(ints) else 1
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def test_membership(
    pi: StochasticChoiceVector, type_set: RationalTypeSet
) -> MixingDistribution | SeparatingVector:
    """Decide pi in co(types) exactly.

    Returns a MixingDistribution when the data is rationalizable, otherwise a
    SeparatingVector with strictly positive gap. Exactly one of the two is
    possible for valid inputs.
    """
    if pi.layout != type_set.layout:
        raise LayoutMismatch("choice data and type set use different layouts")
    types = type_set.types
    n_coords = pi.layout.coordinate_count

    if len(types) == 1:
        only = types[0]
        if tuple(pi.values) == tuple(Fraction(b) for b in only.bits):
            return MixingDistribution(pi.layout, ((only, Fraction(1)),))
        # Deterministic separator: sign pattern of the first differing coordinate.
        i = next(k for k in range(n_coords) if pi.values[k] != only.bits[k])
        sign = 1 if pi.values[i] > only.bits[i] else -1
        direction = tuple(sign if k == i else 0 for k in range(n_coords))
        gap = sign * (pi.values[i] - only.bits[i])
        return SeparatingVector(direction, gap)

    rows = [[t.bits[i] for t in types] for i in range(n_coords)]
    rows.append([1] * len(types))
    rhs = list(pi.values) + [Fraction(1)]
    result = solve_equality_feasibility(rows, rhs)

    if isinstance(result, FeasiblePoint):
        weights = tuple(
            (types[k], w) for k, w in enumerate(result.x) if w != 0
        )
        return MixingDistribution(pi.layout, weights)

    direction = _normalize_direction(result.y[:n_coords])
    best, _ = max_over_types(direction, type_set)
    gap = inner(direction, pi.values) - best
    if gap <= 0:
        raise AssertionError("infeasible system produced a non-separating direction")
    return SeparatingVector(direction, gap)


def reduce_support(dist: MixingDistribution) -> MixingDistribution:
    """Rebuild the distribution on a basic solution of the equality system.

    The result reproduces the same mixture with support of at most
    coordinates - problems + 1 types, and is a fixed point of this operation:
    a support whose type columns are linearly independent determines its
    weights uniquely.
    """
    support = [t for t, _ in dist.weights]
    target = dist.mixture
    n_coords = dist.layout.coordinate_count
    rows = [[t.bits[i] for t in support] for i in range(n_coords)]
    rows.append([1] * len(support))
    rhs = list(target) + [Fraction(1)]
    result = solve_equality_feasibility(rows, rhs)
    if not isinstance(result, FeasiblePoint):
        raise ValidationError("distribution does not reproduce its own mixture")
    weights = tuple((support[k], w) for k, w in enumerate(result.x) if w != 0)
    return MixingDistribution(dist.layout, weights)

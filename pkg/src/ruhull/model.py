"""Exact vector encoding of stochastic choice instances.

An instance fixes a finite universe of alternatives and an ordered list of
choice problems (nonempty subsets of the universe; repeats are allowed and
occupy distinct blocks). Each problem contributes one block of coordinates,
one per member, members in universe order, problems in the given order.
Everything downstream works on vectors over these coordinates:

* stochastic choice data: one exact probability distribution per block,
* choice types: 0/1 vectors selecting exactly one member per block,
* trials: 0/1 query vectors supported inside a single block.

Probabilities are ``fractions.Fraction`` end to end; nothing in this package
ever rounds through floating point. All types are immutable after
construction and all operations are pure functions, so concurrent use needs
no locking.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

from . import _kernels
from .errors import LayoutMismatch, ValidationError

Rational = Union[int, Fraction]


def to_rational(value, where: str = "value") -> Fraction:
    """Coerce an int or Fraction to Fraction; floats are rejected (inexact)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    raise ValidationError(
        f"{where} must be an int or Fraction, got {type(value).__name__}"
    )


@dataclass(frozen=True)
class ChoiceUniverse:
    """Ordered tuple of distinct alternative labels.

    The order is fixed at construction; every coordinate in every layout
    derived from this universe refers back to it.
    """

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValidationError("universe must contain at least one alternative")
        seen = set()
        for pos, label in enumerate(self.labels):
            if not isinstance(label, str) or not label:
                raise ValidationError(
                    f"universe label at position {pos} must be a nonempty string"
                )
            if label in seen:
                raise ValidationError(f"duplicate universe label {label!r}")
            seen.add(label)

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown label {label!r}") from None


@dataclass(frozen=True)
class ChoiceProblem:
    """A choice problem: strictly increasing universe indices (canonical order)."""

    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise ValidationError("choice problem must be nonempty")
        if self.members[0] < 0:
            raise ValidationError(f"negative universe index {self.members[0]}")
        for a, b in zip(self.members, self.members[1:]):
            if a == b:
                raise ValidationError(f"duplicate member index {a} in problem")
            if a > b:
                raise ValidationError(
                    "problem members must be listed in universe order"
                )

    @property
    def size(self) -> int:
        return len(self.members)


def problem_from_labels(universe: ChoiceUniverse, labels: Iterable[str]) -> ChoiceProblem:
    """Build a problem from labels; order is normalized to universe order."""
    indices = []
    for label in labels:
        idx = universe.index(label)
        if idx in indices:
            raise ValidationError(f"duplicate label {label!r} in problem")
        indices.append(idx)
    return ChoiceProblem(tuple(sorted(indices)))


@dataclass(frozen=True)
class IndexLayout:
    """Flat coordinate space: one block per problem, one coordinate per member."""

    universe: ChoiceUniverse
    problems: tuple[ChoiceProblem, ...]
    block_offsets: tuple[int, ...]

    @property
    def problem_count(self) -> int:
        return len(self.problems)

    @property
    def coordinate_count(self) -> int:
        last = self.problems[-1]
        return self.block_offsets[-1] + last.size

    def block_range(self, problem_index: int) -> range:
        start = self.block_offsets[problem_index]
        return range(start, start + self.problems[problem_index].size)

    def block_of(self, coordinate: int) -> int:
        if not 0 <= coordinate < self.coordinate_count:
            raise ValidationError(f"coordinate {coordinate} out of range")
        return bisect_right(self.block_offsets, coordinate) - 1

    def coordinate(self, problem_index: int, universe_index: int) -> int:
        problem = self.problems[problem_index]
        try:
            pos = problem.members.index(universe_index)
        except ValueError:
            raise ValidationError(
                f"universe index {universe_index} not in problem {problem_index}"
            ) from None
        return self.block_offsets[problem_index] + pos

    def coordinate_info(self, coordinate: int) -> tuple[int, str]:
        """Return (problem index, alternative label) for a coordinate."""
        j = self.block_of(coordinate)
        member = self.problems[j].members[coordinate - self.block_offsets[j]]
        return j, self.universe.labels[member]


def build_layout(
    universe: ChoiceUniverse, problems: Sequence[ChoiceProblem]
) -> IndexLayout:
    """Assign coordinates: problems in the given order, members in universe order."""
    if not problems:
        raise ValidationError("empty problem list")
    offsets = []
    total = 0
    for j, problem in enumerate(problems):
        if problem.members[-1] >= universe.size:
            raise ValidationError(
                f"problem {j} references universe index {problem.members[-1]} "
                f"but the universe has only {universe.size} alternatives"
            )
        offsets.append(total)
        total += problem.size
    return IndexLayout(universe, tuple(problems), tuple(offsets))


@dataclass(frozen=True)
class StochasticChoiceVector:
    """Observed choice probabilities, one exact distribution per block."""

    layout: IndexLayout
    values: tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


def validate_pi(values: Sequence[Rational], layout: IndexLayout) -> StochasticChoiceVector:
    """Validate and freeze a stochastic choice vector.

    Entries must be exact rationals (ints or Fractions), nonnegative, and each
    block must sum to exactly 1. Entries are preserved bit for bit.
    """
    n = layout.coordinate_count
    if len(values) != n:
        raise ValidationError(f"expected {n} probabilities, got {len(values)}")
    vals = []
    for i, v in enumerate(values):
        f = to_rational(v, where=f"probability at coordinate {i}")
        if f < 0:
            raise ValidationError(f"negative probability {f} at coordinate {i}")
        vals.append(f)
    for j in range(layout.problem_count):
        block = layout.block_range(j)
        s = sum((vals[i] for i in block), Fraction(0))
        if s != 1:
            raise ValidationError(f"probabilities in problem {j} sum to {s}, not 1")
    return StochasticChoiceVector(layout, tuple(vals))


@dataclass(frozen=True)
class ChoiceTypeVector:
    """A nonstochastic choice function: exactly one 1 per block.

    ``chosen`` caches the selected coordinate of each block; it is derived
    from ``bits`` and excluded from equality and hashing.
    """

    bits: tuple[int, ...]
    chosen: tuple[int, ...] = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.bits)


def make_type_vector(bits: Sequence[int], layout: IndexLayout) -> ChoiceTypeVector:
    n = layout.coordinate_count
    if len(bits) != n:
        raise ValidationError(f"type vector has length {len(bits)}, expected {n}")
    clean = []
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValidationError(f"type vector entry at coordinate {i} is not 0/1")
        clean.append(int(b))
    chosen = []
    for j in range(layout.problem_count):
        ones = [i for i in layout.block_range(j) if clean[i]]
        if len(ones) != 1:
            raise ValidationError(
                f"type vector selects {len(ones)} alternatives in problem {j}, "
                "expected exactly one"
            )
        chosen.append(ones[0])
    return ChoiceTypeVector(tuple(clean), tuple(chosen))


@dataclass(frozen=True)
class RationalTypeSet:
    """The finite set of admissible choice types, canonically ordered.

    Types are distinct and sorted lexicographically on their bit vectors, so
    enumeration order (and hence tie-breaking in ``max_over_types``) is
    deterministic across runs.
    """

    layout: IndexLayout
    types: tuple[ChoiceTypeVector, ...]

    def __len__(self) -> int:
        return len(self.types)

    @cached_property
    def supports(self) -> tuple[tuple[int, ...], ...]:
        return tuple(t.chosen for t in self.types)


def make_type_set(
    rows: Iterable[Sequence[int] | ChoiceTypeVector], layout: IndexLayout
) -> RationalTypeSet:
    """Validate, deduplicate and canonically sort a collection of type vectors."""
    seen: dict[tuple[int, ...], ChoiceTypeVector] = {}
    count = 0
    for row in rows:
        count += 1
        t = row if isinstance(row, ChoiceTypeVector) else make_type_vector(row, layout)
        seen.setdefault(t.bits, t)
    if count == 0:
        raise ValidationError("a type set must contain at least one type")
    ordered = tuple(seen[b] for b in sorted(seen))
    return RationalTypeSet(layout, ordered)


@dataclass(frozen=True)
class Trial:
    """A 0/1 query vector whose support lies inside one problem block."""

    bits: tuple[int, ...]
    block: int = field(compare=False)

    def __len__(self) -> int:
        return len(self.bits)


def make_trial(bits: Sequence[int], layout: IndexLayout) -> Trial:
    n = layout.coordinate_count
    if len(bits) != n:
        raise ValidationError(f"trial has length {len(bits)}, expected {n}")
    support = [i for i, b in enumerate(bits) if b]
    if not support:
        raise ValidationError("trial must query at least one alternative")
    for i in support:
        if bits[i] != 1:
            raise ValidationError(f"trial entry at coordinate {i} is not 0/1")
    block = layout.block_of(support[0])
    if layout.block_of(support[-1]) != block:
        raise ValidationError("trial support spans more than one problem block")
    return Trial(tuple(int(b) for b in bits), block)


def trial_for_members(
    layout: IndexLayout, problem_index: int, universe_indices: Iterable[int]
) -> Trial:
    """Trial querying the given alternatives of one problem."""
    bits = [0] * layout.coordinate_count
    for u in universe_indices:
        bits[layout.coordinate(problem_index, u)] = 1
    return make_trial(bits, layout)


@dataclass(frozen=True)
class TrialSequence:
    """A finite multiset of trials together with its componentwise sum.

    Only the aggregate matters to every check in this package; the trials are
    kept so certificates can be replayed literally.
    """

    trials: tuple[Trial, ...]
    aggregate: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.trials)


def make_trial_sequence(trials: Iterable[Trial], layout: IndexLayout) -> TrialSequence:
    trials = tuple(trials)
    agg = [0] * layout.coordinate_count
    for t in trials:
        if len(t.bits) != layout.coordinate_count:
            raise LayoutMismatch("trial length does not match layout")
        for i, b in enumerate(t.bits):
            if b:
                agg[i] += b
    return TrialSequence(trials, tuple(agg))


def _as_vector(x) -> Sequence[Rational]:
    if isinstance(x, StochasticChoiceVector):
        return x.values
    if isinstance(x, ChoiceTypeVector):
        return x.bits
    if isinstance(x, Trial):
        return x.bits
    if isinstance(x, TrialSequence):
        return x.aggregate
    return x


def inner(t, v) -> Rational:
    """Exact inner product; accepts raw sequences or the vector types above."""
    a = _as_vector(t)
    b = _as_vector(v)
    if len(a) != len(b):
        raise LayoutMismatch(f"vector lengths differ: {len(a)} vs {len(b)}")
    return _kernels.dot(a, b)


def max_over_types(t, type_set: RationalTypeSet) -> tuple[Rational, ChoiceTypeVector]:
    """Exact max of inner(t, R) over the type set, with its first maximizer.

    Ties are broken by the canonical (lexicographic) order of the type set.
    """
    vec = _as_vector(t)
    if len(vec) != type_set.layout.coordinate_count:
        raise LayoutMismatch(
            f"vector length {len(vec)} does not match layout "
            f"({type_set.layout.coordinate_count} coordinates)"
        )
    best, at = _kernels.best_support(vec, type_set.supports)
    return best, type_set.types[at]


class ArspResult(NamedTuple):
    lhs: Rational
    rhs: Rational
    holds: bool


def arsp_check(
    sequence: TrialSequence,
    pi: StochasticChoiceVector,
    type_set: RationalTypeSet,
) -> ArspResult:
    """Check one trial sequence against the revealed-preference inequality.

    lhs is the total choice probability the sequence collects under ``pi``;
    rhs is the best total any single type achieves. The sequence passes when
    lhs <= rhs. Depends on the sequence only through its aggregate, so it is
    invariant under reordering the trial multiset.
    """
    if pi.layout != type_set.layout:
        raise LayoutMismatch("choice data and type set use different layouts")
    if len(sequence.aggregate) != pi.layout.coordinate_count:
        raise LayoutMismatch("trial sequence does not match layout")
    if not sequence.trials:
        return ArspResult(Fraction(0), Fraction(0), True)
    lhs = inner(sequence.aggregate, pi.values)
    rhs, _ = max_over_types(sequence.aggregate, type_set)
    return ArspResult(lhs, rhs, lhs <= rhs)

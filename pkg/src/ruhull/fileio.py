"""Instance files, result reports, and exact re-verification.

Instances are JSON trees with explicit keys::

    {
      "universe":      ["a", "b", "c"],
      "problems":      [["a", "b"], ["a", "c"], ["b", "c"]],
      "probabilities": [["1", "0"], ["0", "1"], ["1", "0"]],
      "types":         "linear-orders",
      "set_valued":    false
    }

Probabilities are rational strings ("1/2" and "0.5" both parse to the exact
rational 1/2); JSON floats are rejected because they are not exact. For
set-valued instances each problem's probabilities form a map from subsets
(labels joined by commas, "" for the empty set) to rational strings, and
``types`` may also be "weak-orders". Explicit ``types`` rows are 0/1 vectors
over the instance's effective layout (the lifted one when set-valued).

Reports embed a digest of the canonicalized instance so that ``verify`` can
detect mismatched pairs, and serialize all rationals as "p/q" strings. Report
output is deterministic: identical instances and flags produce byte-identical
reports (wall-clock timing is emitted separately on stderr by the CLI).
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .certificate import CheckOutcome, decide, integerize, positivize
from .enumeration import (
    correspondence_types_from_linear_orders,
    correspondence_types_from_weak_orders,
    types_from_explicit,
    types_from_linear_orders,
)
from .errors import InstanceParseError, ValidationError
from .lifting import (
    LiftedLayout,
    check_restricted_arsp,
    lift_layout,
    lift_set_valued_data,
    singleton_choice_data,
)
from .model import (
    ChoiceProblem,
    ChoiceUniverse,
    IndexLayout,
    RationalTypeSet,
    StochasticChoiceVector,
    Trial,
    build_layout,
    inner,
    make_trial_sequence,
    make_type_set,
    max_over_types,
    problem_from_labels,
    validate_pi,
)

REPORT_FORMAT = "ruhull-report-v1"


def parse_rational(value: Any, location: str) -> Fraction:
    """Parse "3/10", "0.3" or an int to an exact rational; floats are rejected."""
    if isinstance(value, bool):
        raise InstanceParseError("expected a rational, got a boolean", location)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InstanceParseError(
            "floats are not exact; write the value as a string like \"3/10\"",
            location,
        )
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceParseError(f"malformed rational {value!r}: {exc}", location)
    raise InstanceParseError(
        f"expected a rational string, got {type(value).__name__}", location
    )


@dataclass(frozen=True)
class Instance:
    """A parsed, validated instance with its effective layout and type set.

    For set-valued instances the effective data and types live on the lifted
    layout; otherwise on the base layout. ``digest`` is a sha256 over the
    canonicalized instance tree.
    """

    universe: ChoiceUniverse
    problems: tuple[ChoiceProblem, ...]
    set_valued: bool
    types_spec: Any
    base_pi: StochasticChoiceVector | None
    lifted: LiftedLayout | None
    pi: StochasticChoiceVector
    type_set: RationalTypeSet
    digest: str

    @property
    def layout(self) -> IndexLayout:
        return self.pi.layout


def _canonical_tree(
    universe: ChoiceUniverse,
    problems: Sequence[ChoiceProblem],
    set_valued: bool,
    probabilities_canon: Any,
    types_canon: Any,
) -> dict:
    return {
        "universe": list(universe.labels),
        "problems": [
            [universe.labels[m] for m in p.members] for p in problems
        ],
        "probabilities": probabilities_canon,
        "types": types_canon,
        "set_valued": set_valued,
    }


def _digest(tree: dict) -> str:
    blob = json.dumps(tree, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _parse_labels(obj: Any, location: str) -> list[str]:
    if not isinstance(obj, list) or not all(isinstance(x, str) for x in obj):
        raise InstanceParseError("expected a list of label strings", location)
    return obj


def parse_instance(text: str, source: str = "instance") -> Instance:
    """Parse and validate an instance from JSON text; errors carry positions."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(
            f"invalid JSON: {exc.msg}", f"{source}:{exc.lineno}:{exc.colno}"
        )
    return parse_instance_dict(obj, source)


def parse_instance_dict(obj: Any, source: str = "instance") -> Instance:
    if not isinstance(obj, dict):
        raise InstanceParseError("instance must be a JSON object", source)
    known = {"universe", "problems", "probabilities", "types", "set_valued"}
    for key in obj:
        if key not in known:
            raise InstanceParseError(f"unknown key {key!r}", source)
    for key in ("universe", "problems", "probabilities", "types"):
        if key not in obj:
            raise InstanceParseError(f"missing key {key!r}", source)

    set_valued = obj.get("set_valued", False)
    if not isinstance(set_valued, bool):
        raise InstanceParseError("must be true or false", f"{source}.set_valued")

    try:
        universe = ChoiceUniverse(tuple(_parse_labels(obj["universe"], f"{source}.universe")))
    except ValidationError as exc:
        raise InstanceParseError(str(exc), f"{source}.universe")
    if set_valued and any("," in lbl for lbl in universe.labels):
        raise InstanceParseError(
            "labels must not contain commas in set-valued instances "
            "(they key subset maps)",
            f"{source}.universe",
        )

    if not isinstance(obj["problems"], list) or not obj["problems"]:
        raise InstanceParseError("expected a nonempty list", f"{source}.problems")
    problems = []
    for j, raw in enumerate(obj["problems"]):
        loc = f"{source}.problems[{j}]"
        labels = _parse_labels(raw, loc)
        try:
            problems.append(problem_from_labels(universe, labels))
        except ValidationError as exc:
            raise InstanceParseError(str(exc), loc)
    problems = tuple(problems)

    if set_valued:
        return _parse_set_valued(obj, universe, problems, source)
    return _parse_singleton(obj, universe, problems, source)


def _parse_singleton(
    obj: dict, universe: ChoiceUniverse, problems: tuple[ChoiceProblem, ...], source: str
) -> Instance:
    layout = build_layout(universe, problems)
    raw_probs = obj["probabilities"]
    if not isinstance(raw_probs, list) or len(raw_probs) != len(problems):
        raise InstanceParseError(
            f"expected one probability list per problem ({len(problems)})",
            f"{source}.probabilities",
        )
    values: list[Fraction] = []
    canon: list[list[str]] = []
    for j, row in enumerate(raw_probs):
        loc = f"{source}.probabilities[{j}]"
        if not isinstance(row, list) or len(row) != problems[j].size:
            raise InstanceParseError(
                f"expected {problems[j].size} entries aligned with problem {j}", loc
            )
        parsed = [parse_rational(v, f"{loc}[{k}]") for k, v in enumerate(row)]
        values.extend(parsed)
        canon.append([str(v) for v in parsed])
    try:
        pi = validate_pi(values, layout)
    except ValidationError as exc:
        raise InstanceParseError(str(exc), f"{source}.probabilities")

    types_spec, type_set = _parse_types(
        obj["types"], f"{source}.types", layout, set_valued=False,
        universe=universe, problems=problems, lifted=None,
    )
    digest = _digest(
        _canonical_tree(universe, problems, False, canon, types_spec)
    )
    return Instance(
        universe=universe,
        problems=problems,
        set_valued=False,
        types_spec=types_spec,
        base_pi=pi,
        lifted=None,
        pi=pi,
        type_set=type_set,
        digest=digest,
    )


def _parse_set_valued(
    obj: dict, universe: ChoiceUniverse, problems: tuple[ChoiceProblem, ...], source: str
) -> Instance:
    lifted = lift_layout(universe, problems)
    raw_probs = obj["probabilities"]
    if not isinstance(raw_probs, list) or len(raw_probs) != len(problems):
        raise InstanceParseError(
            f"expected one subset map per problem ({len(problems)})",
            f"{source}.probabilities",
        )
    observations = []
    canon: list[dict[str, str]] = []
    for j, mapping in enumerate(raw_probs):
        loc = f"{source}.probabilities[{j}]"
        if not isinstance(mapping, dict):
            raise InstanceParseError(
                "set-valued instances map subsets to probabilities", loc
            )
        per_problem = {}
        canon_row = {}
        for key, raw_value in mapping.items():
            key_loc = f"{loc}[{key!r}]"
            labels = tuple(key.split(",")) if key else ()
            for lbl in labels:
                if lbl not in universe.labels:
                    raise InstanceParseError(f"unknown label {lbl!r}", key_loc)
            value = parse_rational(raw_value, key_loc)
            subset = tuple(sorted(universe.index(lbl) for lbl in labels))
            if len(set(subset)) != len(subset):
                raise InstanceParseError("subset key repeats a label", key_loc)
            member_set = set(problems[j].members)
            if not set(subset) <= member_set:
                raise InstanceParseError(
                    f"{{{key}}} is not a subset of problem {j}", key_loc
                )
            canon_key = ",".join(universe.labels[i] for i in subset)
            if canon_key in per_problem:
                raise InstanceParseError("duplicate subset key", key_loc)
            per_problem[canon_key] = (labels, value)
            if value != 0:
                canon_row[canon_key] = str(value)
        observations.append({labels: v for labels, v in per_problem.values()})
        canon.append(dict(sorted(canon_row.items())))
    try:
        pi = lift_set_valued_data(observations, lifted)
    except ValidationError as exc:
        raise InstanceParseError(str(exc), f"{source}.probabilities")

    types_spec, type_set = _parse_types(
        obj["types"], f"{source}.types", lifted.layout, set_valued=True,
        universe=universe, problems=problems, lifted=lifted,
    )
    digest = _digest(_canonical_tree(universe, problems, True, canon, types_spec))
    return Instance(
        universe=universe,
        problems=problems,
        set_valued=True,
        types_spec=types_spec,
        base_pi=None,
        lifted=lifted,
        pi=pi,
        type_set=type_set,
        digest=digest,
    )


def _parse_types(
    raw: Any,
    location: str,
    layout: IndexLayout,
    set_valued: bool,
    universe: ChoiceUniverse,
    problems: tuple[ChoiceProblem, ...],
    lifted: LiftedLayout | None,
) -> tuple[Any, RationalTypeSet]:
    if raw == "linear-orders":
        if set_valued:
            assert lifted is not None
            return raw, correspondence_types_from_linear_orders(universe, problems, lifted)
        return raw, types_from_linear_orders(layout)
    if raw == "weak-orders":
        if not set_valued:
            raise InstanceParseError(
                '"weak-orders" types require a set-valued instance', location
            )
        assert lifted is not None
        return raw, correspondence_types_from_weak_orders(universe, problems, lifted)
    if isinstance(raw, str):
        raise InstanceParseError(
            f'unknown types keyword {raw!r}; use "linear-orders", "weak-orders" '
            "or explicit 0/1 rows",
            location,
        )
    if not isinstance(raw, list) or not raw:
        raise InstanceParseError("expected a keyword or a nonempty list of rows", location)
    rows = []
    for r, row in enumerate(raw):
        if not isinstance(row, list) or not all(
            isinstance(b, int) and not isinstance(b, bool) and b in (0, 1) for b in row
        ):
            raise InstanceParseError("expected a row of 0/1 entries", f"{location}[{r}]")
        rows.append(row)
    try:
        type_set = types_from_explicit(rows, layout)
    except ValidationError as exc:
        raise InstanceParseError(str(exc), location)
    canon_rows = sorted({tuple(t.bits) for t in type_set.types})
    return [list(r) for r in canon_rows], type_set


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_instance(text, source=path)


def lifted_view(instance: Instance) -> tuple[LiftedLayout, StochasticChoiceVector, RationalTypeSet]:
    """The instance re-expressed on the lifted layout (identity if set-valued)."""
    if instance.set_valued:
        assert instance.lifted is not None
        return instance.lifted, instance.pi, instance.type_set
    lifted = lift_layout(instance.universe, instance.problems)
    pi = singleton_choice_data(instance.pi, lifted)
    if instance.types_spec == "linear-orders":
        type_set = correspondence_types_from_linear_orders(
            instance.universe, instance.problems, lifted
        )
    else:
        rows = []
        for t in instance.type_set.types:
            bits = [0] * lifted.layout.coordinate_count
            for j in range(instance.layout.problem_count):
                coord = t.chosen[j] - instance.layout.block_offsets[j]
                member = instance.layout.problems[j].members[coord]
                bits[lifted.coordinate_for_subset(j, (member,))] = 1
            rows.append(bits)
        type_set = make_type_set(rows, lifted.layout)
    return lifted, pi, type_set


@dataclass(frozen=True)
class ResultReport:
    """Outcome of one check: machine-verifiable, deterministically serialized."""

    instance: Instance
    layout: IndexLayout  # the layout the decision ran on (lifted when applicable)
    flags: dict
    outcome: CheckOutcome
    restricted_holds: bool | None
    lifted_used: bool
    elapsed_seconds: float

    @property
    def verdict(self) -> str:
        return "rationalizable" if self.outcome.rationalizable else "not-rationalizable"

    def to_structured(self) -> dict:
        out: dict[str, Any] = {
            "format": REPORT_FORMAT,
            "command": "check",
            "flags": dict(sorted(self.flags.items())),
            "instance_digest": self.instance.digest,
            "lifted": self.lifted_used,
            "verdict": self.verdict,
        }
        if self.outcome.mixture is not None:
            out["mixture"] = {
                "weights": [
                    {"weight": str(w), "type": list(t.bits)}
                    for t, w in self.outcome.mixture.weights
                ]
            }
        else:
            cert = self.outcome.certificate
            assert cert is not None
            out["certificate"] = {
                "separating": list(cert.separating.direction),
                "gap": str(cert.separating.gap),
                "positivized": [str(v) for v in cert.positivized],
                "integer_aggregate": list(cert.integer_aggregate),
                "trials": _trials_tree(cert.trials.trials, self.layout),
                "lhs": str(cert.lhs),
                "rhs": str(cert.rhs),
            }
        if self.restricted_holds is not None:
            out["restricted_arsp"] = {"holds": self.restricted_holds}
        return out

    def to_text(self) -> str:
        lines = [
            f"verdict: {self.verdict}",
            f"instance digest: {self.instance.digest}",
        ]
        if self.lifted_used:
            lines.append("layout: power-set lifted")
        if self.restricted_holds is not None:
            axiom = "holds" if self.restricted_holds else "violated"
            garsp = "holds" if self.outcome.rationalizable else "violated"
            lines.append(f"restricted axiom: {axiom}; GARSP: {garsp}")
        if self.outcome.mixture is not None:
            mix = self.outcome.mixture
            lines.append(f"mixture over {mix.support_size} type(s):")
            for t, w in mix.weights:
                lines.append(f"  weight {w} on {_describe_type(t, self.layout)}")
        else:
            cert = self.outcome.certificate
            assert cert is not None
            lines.append(f"separating vector: {list(cert.separating.direction)}")
            lines.append(f"gap: {cert.separating.gap}")
            lines.append(f"integer aggregate: {list(cert.integer_aggregate)}")
            n_trials = len(cert.trials)
            lines.append(f"trial sequence ({n_trials} trial{'s' if n_trials != 1 else ''}):")
            for trial_line in _describe_trials(cert.trials.trials, self.layout):
                lines.append(f"  {trial_line}")
            lines.append(f"lhs: {cert.lhs}")
            lines.append(f"rhs: {cert.rhs}")
        return "\n".join(lines) + "\n"


def _describe_type(t, layout: IndexLayout) -> str:
    picks = []
    for j in range(layout.problem_count):
        _, label = layout.coordinate_info(t.chosen[j])
        picks.append(label)
    return " | ".join(picks)


def _trials_tree(trials: Sequence[Trial], layout: IndexLayout) -> list[dict]:
    out = []
    for t in trials:
        support = [i for i, b in enumerate(t.bits) if b]
        out.append(
            {
                "problem": t.block + 1,
                "members": [layout.coordinate_info(i)[1] for i in support],
                "coordinates": [i + 1 for i in support],
            }
        )
    return out


def _describe_trials(trials: Sequence[Trial], layout: IndexLayout) -> list[str]:
    lines = []
    for t in trials:
        labels = [layout.coordinate_info(i)[1] for i, b in enumerate(t.bits) if b]
        lines.append(f"problem {t.block + 1} query {{{','.join(labels)}}}")
    return lines


def run_check(
    instance: Instance,
    mode: str = "compressed",
    restricted: bool = False,
) -> ResultReport:
    """Decide rationalizability end to end; optionally also the restricted axiom."""
    start = time.monotonic()
    restricted_holds: bool | None = None
    lifted_used = instance.set_valued or restricted
    if restricted:
        lifted, pi, type_set = lifted_view(instance)
        restricted_holds = check_restricted_arsp(pi, type_set, lifted)
        outcome = decide(pi, type_set, mode)
        layout = lifted.layout
    else:
        outcome = decide(instance.pi, instance.type_set, mode)
        layout = instance.layout
    elapsed = time.monotonic() - start
    return ResultReport(
        instance=instance,
        layout=layout,
        flags={"mode": mode, "restricted_arsp": restricted},
        outcome=outcome,
        restricted_holds=restricted_holds,
        lifted_used=lifted_used,
        elapsed_seconds=elapsed,
    )


def run_verify(instance: Instance, report: dict) -> tuple[bool, list[str]]:
    """Exactly re-validate a structured check report against an instance.

    Returns (verified, failure messages). Every claim in the report is
    recomputed with exact arithmetic: digests, mixture reconstruction,
    certificate pipeline stages, and the strict violation itself.
    """
    failures: list[str] = []
    if not isinstance(report, dict):
        return False, ["report is not a JSON object"]
    if report.get("format") != REPORT_FORMAT:
        failures.append(f"unknown report format {report.get('format')!r}")
        return False, failures
    if report.get("instance_digest") != instance.digest:
        failures.append(
            "digest mismatch: report was produced from a different instance"
        )
        return False, failures

    lifted_used = bool(report.get("lifted", False))
    if lifted_used and not instance.set_valued:
        lifted, pi, type_set = lifted_view(instance)
    else:
        lifted = instance.lifted
        pi = instance.pi
        type_set = instance.type_set
    layout = pi.layout

    verdict = report.get("verdict")
    if verdict == "rationalizable":
        mixture = report.get("mixture")
        if not isinstance(mixture, dict) or "weights" not in mixture:
            return False, ["rationalizable report lacks a mixture"]
        total = Fraction(0)
        combined = [Fraction(0)] * layout.coordinate_count
        known = {t.bits: t for t in type_set.types}
        for k, item in enumerate(mixture["weights"]):
            try:
                weight = Fraction(str(item["weight"]))
            except (KeyError, ValueError, ZeroDivisionError, TypeError):
                failures.append(f"mixture entry {k}: malformed weight")
                continue
            bits = tuple(item.get("type", ()))
            if bits not in known:
                failures.append(f"mixture entry {k}: type is not in the admissible set")
                continue
            if weight <= 0:
                failures.append(f"mixture entry {k}: weight {weight} is not positive")
            total += weight
            for i, b in enumerate(bits):
                if b:
                    combined[i] += weight
        if total != 1:
            failures.append(f"mixture weights sum to {total}, not 1")
        if tuple(combined) != tuple(pi.values):
            failures.append("mixture does not reconstruct the observed probabilities")
    elif verdict == "not-rationalizable":
        cert = report.get("certificate")
        if not isinstance(cert, dict):
            return False, ["non-rationalizable report lacks a certificate"]
        try:
            separating = tuple(int(v) for v in cert["separating"])
            claimed_gap = Fraction(str(cert["gap"]))
            claimed_pos = tuple(Fraction(str(v)) for v in cert["positivized"])
            aggregate = tuple(int(v) for v in cert["integer_aggregate"])
            lhs = Fraction(str(cert["lhs"]))
            rhs = Fraction(str(cert["rhs"]))
            trial_items = cert["trials"]
        except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
            return False, [f"malformed certificate: {exc}"]
        if len(separating) != layout.coordinate_count:
            return False, ["certificate separating vector has the wrong length"]
        best, _ = max_over_types(separating, type_set)
        gap = inner(separating, pi.values) - best
        if gap != claimed_gap:
            failures.append(f"separating gap is {gap}, report claims {claimed_gap}")
        if gap <= 0:
            failures.append("separating vector does not separate")
        if positivize(separating) != claimed_pos:
            failures.append("positivized vector does not match the pipeline")
        if integerize(claimed_pos) != aggregate:
            failures.append("integer aggregate does not match the pipeline")
        trials = []
        rebuilt = [0] * layout.coordinate_count
        for k, item in enumerate(trial_items):
            try:
                problem = int(item["problem"]) - 1
                coords = [int(c) - 1 for c in item["coordinates"]]
                members = [str(x) for x in item.get("members", ())]
            except (KeyError, ValueError, TypeError):
                failures.append(f"trial {k}: malformed")
                continue
            if not coords or not all(
                0 <= c < layout.coordinate_count for c in coords
            ):
                failures.append(f"trial {k}: coordinates out of range")
                continue
            blocks = {layout.block_of(c) for c in coords}
            if blocks != {problem}:
                failures.append(f"trial {k}: support is not inside problem {problem + 1}")
                continue
            if members and members != [layout.coordinate_info(c)[1] for c in coords]:
                failures.append(f"trial {k}: member labels disagree with coordinates")
                continue
            for c in coords:
                rebuilt[c] += 1
            bits = tuple(1 if i in set(coords) else 0 for i in range(layout.coordinate_count))
            trials.append(Trial(bits, problem))
        if tuple(rebuilt) != aggregate:
            failures.append("trials do not aggregate to the integer aggregate")
        if trials:
            sequence = make_trial_sequence(trials, layout)
            check_lhs = inner(sequence.aggregate, pi.values)
            check_rhs, _ = max_over_types(sequence.aggregate, type_set)
            if check_lhs != lhs:
                failures.append(f"lhs is {check_lhs}, report claims {lhs}")
            if check_rhs != rhs:
                failures.append(f"rhs is {check_rhs}, report claims {rhs}")
            if not check_lhs > check_rhs:
                failures.append("trial sequence does not strictly violate the axiom")
        else:
            failures.append("certificate contains no trials")
    else:
        return False, [f"unknown verdict {verdict!r}"]

    if "restricted_arsp" in report:
        if lifted is None:
            failures.append("restricted-axiom claim on an instance that was not lifted")
        else:
            actual = check_restricted_arsp(pi, type_set, lifted)
            claimed = report["restricted_arsp"].get("holds")
            if actual != claimed:
                failures.append(
                    f"restricted axiom recomputes to {actual}, report claims {claimed}"
                )
    return not failures, failures


def lifted_instance_tree(instance: Instance) -> dict:
    """The lifted instance as a plain (singleton-choice) instance tree."""
    lifted, pi, type_set = lifted_view(instance)
    layout = lifted.layout
    probabilities = []
    for j in range(layout.problem_count):
        probabilities.append([str(pi.values[i]) for i in layout.block_range(j)])
    return {
        "universe": list(layout.universe.labels),
        "problems": [
            [layout.universe.labels[m] for m in p.members] for p in layout.problems
        ],
        "probabilities": probabilities,
        "types": [list(t.bits) for t in type_set.types],
        "set_valued": False,
    }

"""Finite traces, Kripke structures and their file formats."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .formula import LABEL_PATTERN

__all__ = [
    "LabelSet",
    "Trace",
    "KripkeStructure",
    "RunCheck",
    "TraceFormatError",
    "InvalidRunError",
    "make_label_set",
    "validate_run",
    "induce_trace",
    "load_trace",
    "save_trace",
    "dump_trace",
    "parse_trace",
    "load_kripke",
    "parse_kripke",
    "load_run",
    "read_listing",
    "parse_listing",
    "derive_labels",
    "load_aliases",
]

LabelSet = frozenset


class TraceFormatError(ValueError):
    """Malformed trace, run or Kripke data.  ``where`` locates the fault."""

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class InvalidRunError(ValueError):
    def __init__(self, check: "RunCheck"):
        self.check = check
        super().__init__(check.reason)


def make_label_set(labels: Iterable[str], where: str | None = None) -> LabelSet:
    """Validate labels and freeze them.  Duplicates are an error."""
    labels = list(labels)
    for i, label in enumerate(labels):
        if not isinstance(label, str) or not LABEL_PATTERN.fullmatch(label):
            loc = f"{where}[{i}]" if where else None
            raise TraceFormatError(f"invalid label {label!r}", loc)
    result = frozenset(labels)
    if len(result) != len(labels):
        seen, dupes = set(), set()
        for label in labels:
            (dupes if label in seen else seen).add(label)
        raise TraceFormatError(f"duplicate label(s) {sorted(dupes)}", where)
    return result


@dataclass(frozen=True)
class Trace:
    """Label sets ``L_T0 ... L_Tf``; ``steps[i]`` holds time ``start_time + i``."""

    steps: tuple[LabelSet, ...]
    start_time: int = 0
    end_time: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        steps = tuple(s if isinstance(s, frozenset) else make_label_set(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise TraceFormatError("a trace needs at least one step")
        if not isinstance(self.start_time, int) or self.start_time < 0:
            raise TraceFormatError(f"start_time must be a non-negative integer, got {self.start_time!r}")
        object.__setattr__(self, "end_time", self.start_time + len(steps) - 1)

    @classmethod
    def from_lists(cls, steps: Iterable[Iterable[str]], start_time: int = 0) -> "Trace":
        return cls(tuple(make_label_set(s, f"steps[{i}]") for i, s in enumerate(steps)), start_time)

    @property
    def times(self) -> range:
        return range(self.start_time, self.end_time + 1)

    def __len__(self) -> int:
        return len(self.steps)

    def __contains__(self, t: int) -> bool:
        return self.start_time <= t <= self.end_time

    def labels_at(self, t: int) -> LabelSet:
        if t not in self:
            raise IndexError(f"time {t} outside trace [{self.start_time}, {self.end_time}]")
        return self.steps[t - self.start_time]

    def holds(self, label: str, t: int) -> bool:
        return label in self.steps[t - self.start_time]

    def suffix(self, t0: int) -> "Trace":
        if t0 not in self:
            raise IndexError(f"suffix start {t0} outside trace [{self.start_time}, {self.end_time}]")
        return Trace(self.steps[t0 - self.start_time:], t0)

    def vocabulary(self) -> frozenset[str]:
        return frozenset().union(*self.steps)

    def replace_step(self, t: int, labels: Iterable[str]) -> "Trace":
        steps = list(self.steps)
        steps[t - self.start_time] = make_label_set(labels)
        return Trace(tuple(steps), self.start_time)


# -- Kripke structures ----------------------------------------------------


@dataclass(frozen=True)
class RunCheck:
    valid: bool
    index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class KripkeStructure:
    states: frozenset[str]
    initial: frozenset[str]
    transitions: frozenset[tuple[str, str]]
    labels: Mapping[str, LabelSet] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "transitions", frozenset(tuple(p) for p in self.transitions))
        object.__setattr__(
            self, "labels", {s: make_label_set(ls, f"labels[{s!r}]") for s, ls in self.labels.items()}
        )
        if not self.states:
            raise TraceFormatError("a Kripke structure needs at least one state")
        if not self.initial <= self.states:
            raise TraceFormatError(f"initial states not in S: {sorted(self.initial - self.states)}")
        for src, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise TraceFormatError(f"transition ({src!r}, {dst!r}) leaves the state set")
        missing = self.states - set(self.labels)
        if missing:
            raise TraceFormatError(f"labeling is not total; unlabeled: {sorted(missing)}")
        extra = set(self.labels) - self.states
        if extra:
            raise TraceFormatError(f"labels given for unknown states: {sorted(extra)}")
        stuck = self.states - {src for src, _ in self.transitions}
        if stuck:
            raise TraceFormatError(f"states without an outgoing transition: {sorted(stuck)}")

    def successors(self, state: str) -> frozenset[str]:
        return frozenset(dst for src, dst in self.transitions if src == state)


def validate_run(k: KripkeStructure, run: Sequence[str]) -> RunCheck:
    """Check ``run[0]`` is initial and each consecutive pair is a transition.

    Unknown state ids raise :class:`TraceFormatError` rather than producing
    an invalid verdict.
    """
    if not run:
        raise TraceFormatError("a run needs at least one state")
    for i, state in enumerate(run):
        if state not in k.states:
            raise TraceFormatError(f"unknown state {state!r}", f"run[{i}]")
    if run[0] not in k.initial:
        return RunCheck(False, 0, f"run[0] = {run[0]!r} is not an initial state")
    for i in range(1, len(run)):
        if (run[i - 1], run[i]) not in k.transitions:
            return RunCheck(False, i, f"no transition {run[i - 1]!r} -> {run[i]!r} (run[{i}])")
    return RunCheck(True)


def induce_trace(k: KripkeStructure, run: Sequence[str], start_time: int = 0) -> Trace:
    check = validate_run(k, run)
    if not check:
        raise InvalidRunError(check)
    return Trace(tuple(k.labels[s] for s in run), start_time)


# -- JSON formats ---------------------------------------------------------


def _json_load(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None


def parse_trace(text: str, source: str = "<trace>") -> Trace:
    data = _json_load(text, source)
    if not isinstance(data, dict):
        raise TraceFormatError("expected an object with 'start_time' and 'steps'", source)
    unknown = set(data) - {"start_time", "steps"}
    if unknown:
        raise TraceFormatError(f"unknown field(s) {sorted(unknown)}", source)
    start = data.get("start_time", 0)
    if not isinstance(start, int) or isinstance(start, bool) or start < 0:
        raise TraceFormatError("must be a non-negative integer", f"{source}: start_time")
    steps = data.get("steps")
    if not isinstance(steps, list):
        raise TraceFormatError("must be a list of label lists", f"{source}: steps")
    if not steps:
        raise TraceFormatError("trace has zero steps", f"{source}: steps")
    parsed = []
    for i, step in enumerate(steps):
        if not isinstance(step, list):
            raise TraceFormatError("must be a list of labels", f"{source}: steps[{i}]")
        parsed.append(make_label_set(step, f"{source}: steps[{i}]"))
    return Trace(tuple(parsed), start)


def dump_trace(trace: Trace) -> str:
    """Canonical JSON: labels sorted, one step per line."""
    lines = [json.dumps(sorted(step)) for step in trace.steps]
    body = ",\n    ".join(lines)
    return f'{{\n  "start_time": {trace.start_time},\n  "steps": [\n    {body}\n  ]\n}}\n'


def load_trace(path: str | Path) -> Trace:
    path = Path(path)
    return parse_trace(path.read_text(encoding="utf-8"), str(path))


def save_trace(trace: Trace, path: str | Path) -> None:
    Path(path).write_text(dump_trace(trace), encoding="utf-8")


def parse_kripke(text: str, source: str = "<kripke>") -> KripkeStructure:
    data = _json_load(text, source)
    if not isinstance(data, dict):
        raise TraceFormatError("expected a JSON object", source)
    for key in ("states", "initial", "transitions", "labels"):
        if key not in data:
            raise TraceFormatError(f"missing field {key!r}", source)
    states, initial, transitions, labels = (
        data["states"], data["initial"], data["transitions"], data["labels"],
    )
    if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
        raise TraceFormatError("must be a list of state ids", f"{source}: states")
    if not isinstance(initial, list) or not all(isinstance(s, str) for s in initial):
        raise TraceFormatError("must be a list of state ids", f"{source}: initial")
    if not isinstance(transitions, list):
        raise TraceFormatError("must be a list of [from, to] pairs", f"{source}: transitions")
    for i, pair in enumerate(transitions):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(s, str) for s in pair)):
            raise TraceFormatError("must be a [from, to] pair", f"{source}: transitions[{i}]")
    if not isinstance(labels, dict):
        raise TraceFormatError("must map state ids to label lists", f"{source}: labels")
    for state, ls in labels.items():
        if not isinstance(ls, list):
            raise TraceFormatError("must be a list of labels", f"{source}: labels[{state!r}]")
    try:
        return KripkeStructure(
            frozenset(states),
            frozenset(initial),
            frozenset(tuple(p) for p in transitions),
            labels,
        )
    except TraceFormatError as exc:
        raise TraceFormatError(str(exc), source) from None


def load_kripke(path: str | Path) -> KripkeStructure:
    path = Path(path)
    return parse_kripke(path.read_text(encoding="utf-8"), str(path))


def load_run(path: str | Path) -> tuple[list[str], int]:
    """Run file: a JSON list of state ids, or ``{"start_time": t, "run": [...]}``."""
    path = Path(path)
    data = _json_load(path.read_text(encoding="utf-8"), str(path))
    start = 0
    if isinstance(data, dict):
        start = data.get("start_time", 0)
        data = data.get("run")
    if not isinstance(data, list) or not all(isinstance(s, str) for s in data):
        raise TraceFormatError("expected a list of state ids", str(path))
    if not isinstance(start, int) or start < 0:
        raise TraceFormatError("start_time must be a non-negative integer", str(path))
    return data, start


# -- listing format -------------------------------------------------------

_LISTING_LINE = re.compile(r"^\(\s*(?P<time>[^)]*?)\s*\)\s*(?P<labels>.*)$")


def parse_listing(
    text: str,
    source: str = "<listing>",
    *,
    allow_gaps: bool = False,
    gap_fill: str | Iterable[str] = "hold",
) -> Trace:
    """Read ``(t)<TAB>label, label, ...`` lines.

    ``(...)`` marks elided steps; their count follows from the next numbered
    line.  Gaps are refused unless ``allow_gaps`` is set, in which case each
    elided step is filled with ``gap_fill``: either ``"hold"`` (repeat the
    previous listed step) or an explicit collection of labels.  A ``(t')``
    line takes the next time index.
    """
    entries: list[tuple[int | None, LabelSet | None, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("\\par"):
            line = line[4:].strip()
        if not line or line.startswith("#"):
            continue
        m = _LISTING_LINE.match(line)
        if not m:
            raise TraceFormatError("expected '(<t>) labels'", f"{source}:{lineno}")
        stamp = m.group("time")
        if stamp == "...":
            if m.group("labels").strip():
                raise TraceFormatError("gap marker takes no labels", f"{source}:{lineno}")
            entries.append((None, None, lineno))
            continue
        if stamp in ("t'", "t’", "\\mathbf{t'}", "$\\mathbf{t'}$"):
            t = -1
        else:
            try:
                t = int(stamp)
            except ValueError:
                raise TraceFormatError(f"bad time stamp {stamp!r}", f"{source}:{lineno}") from None
        labels = [p.strip() for p in m.group("labels").split(",") if p.strip()]
        entries.append((t, make_label_set(labels, f"{source}:{lineno}"), lineno))

    if not entries:
        raise TraceFormatError("listing has zero steps", source)
    if entries[0][1] is None:
        raise TraceFormatError("listing cannot start with a gap", f"{source}:{entries[0][2]}")
    if entries[-1][1] is None:
        raise TraceFormatError("listing cannot end with a gap", f"{source}:{entries[-1][2]}")
    if entries[0][0] == -1:
        raise TraceFormatError("first step needs an explicit time", f"{source}:{entries[0][2]}")

    fill: LabelSet | None = None
    if gap_fill != "hold":
        fill = make_label_set(gap_fill, "gap_fill")

    start = entries[0][0]
    steps: list[LabelSet] = []
    pending_gap: int | None = None
    for t, labels, lineno in entries:
        if labels is None:
            if not allow_gaps:
                raise TraceFormatError("elided steps '(...)' need allow_gaps", f"{source}:{lineno}")
            pending_gap = lineno
            continue
        expected = start + len(steps)
        if t == -1:
            if pending_gap is not None:
                raise TraceFormatError("a (t') step cannot follow a gap", f"{source}:{lineno}")
            t = expected
        if pending_gap is not None:
            if t <= expected:
                raise TraceFormatError(f"gap closes at {t}, but next time is {expected}", f"{source}:{lineno}")
            held = steps[-1] if fill is None else fill
            steps.extend([held] * (t - expected))
            pending_gap = None
        elif t != expected:
            raise TraceFormatError(f"expected time {expected}, got {t}", f"{source}:{lineno}")
        steps.append(labels)
    return Trace(tuple(steps), start)


def read_listing(path: str | Path, **kwargs) -> Trace:
    path = Path(path)
    return parse_listing(path.read_text(encoding="utf-8"), str(path), **kwargs)


# -- label derivation -----------------------------------------------------


def derive_labels(trace: Trace, aliases: Mapping[str, Iterable[str]]) -> Trace:
    """Add label ``name`` at every step holding any of ``aliases[name]``."""
    sources = {name: frozenset(srcs) for name, srcs in aliases.items()}
    make_label_set(sources, "aliases")
    steps = []
    for step in trace.steps:
        extra = {name for name, srcs in sources.items() if step & srcs}
        steps.append(step | extra)
    return Trace(tuple(steps), trace.start_time)


def load_aliases(path: str | Path) -> dict[str, list[str]]:
    path = Path(path)
    data = _json_load(path.read_text(encoding="utf-8"), str(path))
    if not isinstance(data, dict) or not all(
        isinstance(v, list) and all(isinstance(s, str) for s in v) for v in data.values()
    ):
        raise TraceFormatError("expected {derived_label: [source_label, ...]}", str(path))
    return data

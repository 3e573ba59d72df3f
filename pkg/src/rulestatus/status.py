"""Status timesets for every node of a rule, for every suffix start.

Each operator kind has a module mapping the children's timesets to the
node's own.  A module only ever asks whether a child is violated on a given
suffix, so the engine evaluates a whole node (all suffix starts) before
moving to its parent.

Operation count: each module invocation at one ``t0`` costs one unit per
child suffix position it examines (at least one).  Non-looping modules cost
one; looping modules (F, G, U, W, R, M) cost ``t' - t0 + 1`` where ``t'`` is
the position the loop stopped at.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .formula import FormulaNode, FormulaTree, OperatorKind, format_address, parse_address, UnknownAddressError
from .timeset import EMPTY, Timeset
from .trace import Trace

__all__ = [
    "Status",
    "TimesetQuad",
    "StatusTable",
    "OpCounter",
    "EngineError",
    "MODULES",
    "assess",
    "node_quads",
    "quad_invariant_errors",
    "complexity_bound",
]


class Status(enum.Enum):
    ACTIVE = "active"
    SATISFIED = "satisfied"
    INACTIVE = "inactive"
    VIOLATED = "violated"


class EngineError(RuntimeError):
    """Sequencing or consistency failure inside the engine."""


@dataclass(frozen=True, slots=True)
class TimesetQuad:
    t0: int
    tau_a: Timeset
    tau_s: Timeset
    tau_i: Timeset
    tau_v: Timeset
    violated: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "violated", bool(self.tau_v))

    def membership(self, t: int) -> frozenset[Status]:
        out = set()
        if t in self.tau_a:
            out.add(Status.ACTIVE)
        if t in self.tau_s:
            out.add(Status.SATISFIED)
        if t in self.tau_i:
            out.add(Status.INACTIVE)
        if t in self.tau_v:
            out.add(Status.VIOLATED)
        return frozenset(out)

    def exclusive_status(self, t: int) -> Status:
        """The one of active / inactive / violated holding at ``t``."""
        if t in self.tau_v:
            return Status.VIOLATED
        if t in self.tau_a:
            return Status.ACTIVE
        if t in self.tau_i:
            return Status.INACTIVE
        raise ValueError(f"time {t} is outside the suffix starting at {self.t0}")

    def timesets(self) -> dict[Status, Timeset]:
        return {
            Status.ACTIVE: self.tau_a,
            Status.SATISFIED: self.tau_s,
            Status.INACTIVE: self.tau_i,
            Status.VIOLATED: self.tau_v,
        }

    def describe(self, omit_empty: bool = True) -> str:
        parts = []
        for name, ts in (("a", self.tau_a), ("s", self.tau_s), ("i", self.tau_i), ("v", self.tau_v)):
            if ts or not omit_empty:
                parts.append(f"tau_{name}={ts}")
        return ", ".join(parts)

    def to_json(self) -> dict:
        return {
            "t0": self.t0,
            "tau_a": self.tau_a.to_json(),
            "tau_s": self.tau_s.to_json(),
            "tau_i": self.tau_i.to_json(),
            "tau_v": self.tau_v.to_json(),
        }


def quad_invariant_errors(quad: TimesetQuad, end_time: int) -> list[str]:
    """Structural checks every quad must pass; empty list when sound."""
    errors = []
    t0 = quad.t0
    if quad.tau_v:
        if quad.tau_v.spans != ((t0, end_time),):
            errors.append(f"tau_v={quad.tau_v} is neither empty nor the whole suffix {{{t0}..{end_time}}}")
        if quad.tau_a or quad.tau_s or quad.tau_i:
            errors.append("violated quad has non-empty active/satisfied/inactive sets")
        return errors
    # Active and inactive spans must tile the suffix window exactly.
    spans = sorted(quad.tau_a.spans + quad.tau_i.spans)
    expect = t0
    for lo, hi in spans:
        if lo != expect:
            errors.append(f"tau_a={quad.tau_a} and tau_i={quad.tau_i} do not partition {{{t0}..{end_time}}}")
            break
        expect = hi + 1
    else:
        if expect != end_time + 1:
            errors.append(f"tau_a={quad.tau_a} and tau_i={quad.tau_i} do not partition {{{t0}..{end_time}}}")
    # Satisfied exactly where active and (last step or not active next).
    frontier = tuple((hi, hi) for _, hi in quad.tau_a.spans)
    if quad.tau_s.spans != frontier:
        errors.append(f"tau_s={quad.tau_s} but the active frontier is {Timeset(frontier)}")
    return errors


class OpCounter:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


# -- quad constructors ----------------------------------------------------


@lru_cache(maxsize=8192)
def _violated(t0: int, tf: int) -> TimesetQuad:
    return TimesetQuad(t0, EMPTY, EMPTY, EMPTY, Timeset.span(t0, tf))


@lru_cache(maxsize=8192)
def _active_through(t0: int, last: int, tf: int) -> TimesetQuad:
    """Active on ``{t0..last}``, satisfied at ``last``, inactive after."""
    return TimesetQuad(t0, Timeset.span(t0, last), Timeset.point(last), Timeset.span(last + 1, tf), EMPTY)


@lru_cache(maxsize=8192)
def _untriggered(t0: int, tf: int) -> TimesetQuad:
    return TimesetQuad(t0, EMPTY, EMPTY, Timeset.span(t0, tf), EMPTY)


def _tick(counter: OpCounter | None, n: int = 1) -> None:
    if counter is not None:
        counter.count += n


ChildQuads = Sequence[Sequence[TimesetQuad]]


# -- logical modules ------------------------------------------------------


def module_ap(trace: Trace, t0: int, node: FormulaNode, child_quads: ChildQuads = (), counter=None) -> TimesetQuad:
    _tick(counter)
    tf = trace.end_time
    if node.label in trace.steps[t0 - trace.start_time]:
        return _active_through(t0, t0, tf)
    return _violated(t0, tf)


def module_not(trace, t0, node, child_quads, counter=None):
    _tick(counter)
    tf = trace.end_time
    (child,) = child_quads
    if not child[t0 - trace.start_time].violated:
        return _violated(t0, tf)
    return _active_through(t0, t0, tf)


def module_or(trace, t0, node, child_quads, counter=None):
    _tick(counter)
    tf = trace.end_time
    k = t0 - trace.start_time
    left, right = child_quads
    if left[k].violated and right[k].violated:
        return _violated(t0, tf)
    return _active_through(t0, t0, tf)


def module_and(trace, t0, node, child_quads, counter=None):
    _tick(counter)
    tf = trace.end_time
    k = t0 - trace.start_time
    left, right = child_quads
    if left[k].violated or right[k].violated:
        return _violated(t0, tf)
    return _active_through(t0, t0, tf)


def module_implies(trace, t0, node, child_quads, counter=None):
    _tick(counter)
    tf = trace.end_time
    k = t0 - trace.start_time
    antecedent, consequent = child_quads
    if antecedent[k].violated:
        return _untriggered(t0, tf)
    if consequent[k].violated:
        return _violated(t0, tf)
    return _active_through(t0, t0, tf)


# -- temporal modules -----------------------------------------------------


def module_next(trace, t0, node, child_quads, counter=None):
    _tick(counter)
    tf = trace.end_time
    # No successor suffix at the last step: X is false there.
    if t0 == tf:
        return _violated(t0, tf)
    (child,) = child_quads
    if not child[t0 + 1 - trace.start_time].violated:
        return _active_through(t0, t0 + 1, tf)
    return _violated(t0, tf)


def module_eventual(trace, t0, node, child_quads, counter=None):
    base, tf = trace.start_time, trace.end_time
    (child,) = child_quads
    t = t0
    while True:
        if not child[t - base].violated:
            _tick(counter, t - t0 + 1)
            return _active_through(t0, t, tf)
        if t == tf:
            _tick(counter, t - t0 + 1)
            return _violated(t0, tf)
        t += 1


def module_global(trace, t0, node, child_quads, counter=None):
    base, tf = trace.start_time, trace.end_time
    (child,) = child_quads
    t = t0
    while True:
        if child[t - base].violated:
            _tick(counter, t - t0 + 1)
            return _violated(t0, tf)
        if t == tf:
            _tick(counter, t - t0 + 1)
            return _active_through(t0, tf, tf)
        t += 1


def _scan_until(child_quads, base, t0, tf):
    """Advance while the right child fails and the left child holds."""
    left, right = child_quads
    t = t0
    while right[t - base].violated and not left[t - base].violated and t < tf:
        t += 1
    return t, left[t - base].violated, right[t - base].violated


def _scan_release(child_quads, base, t0, tf):
    """Advance while the right child holds and the left child fails."""
    left, right = child_quads
    t = t0
    while left[t - base].violated and not right[t - base].violated and t < tf:
        t += 1
    return t, left[t - base].violated, right[t - base].violated


def module_until(trace, t0, node, child_quads, counter=None):
    base, tf = trace.start_time, trace.end_time
    t, _, right_v = _scan_until(child_quads, base, t0, tf)
    _tick(counter, t - t0 + 1)
    if not right_v:
        return _active_through(t0, t, tf)
    return _violated(t0, tf)


def module_weak_until(trace, t0, node, child_quads, counter=None):
    base, tf = trace.start_time, trace.end_time
    t, left_v, right_v = _scan_until(child_quads, base, t0, tf)
    _tick(counter, t - t0 + 1)
    if not right_v:
        return _active_through(t0, t, tf)
    if left_v:
        return _violated(t0, tf)
    return _active_through(t0, tf, tf)


def module_strong_release(trace, t0, node, child_quads, counter=None):
    base, tf = trace.start_time, trace.end_time
    t, left_v, right_v = _scan_release(child_quads, base, t0, tf)
    _tick(counter, t - t0 + 1)
    if not left_v and not right_v:
        return _active_through(t0, t, tf)
    return _violated(t0, tf)


def module_release(trace, t0, node, child_quads, counter=None):
    base, tf = trace.start_time, trace.end_time
    t, left_v, right_v = _scan_release(child_quads, base, t0, tf)
    _tick(counter, t - t0 + 1)
    if not left_v and not right_v:
        return _active_through(t0, t, tf)
    if right_v:
        return _violated(t0, tf)
    return _active_through(t0, tf, tf)


Module = Callable[..., TimesetQuad]

MODULES: dict[OperatorKind, Module] = {
    OperatorKind.AP: module_ap,
    OperatorKind.NOT: module_not,
    OperatorKind.AND: module_and,
    OperatorKind.OR: module_or,
    OperatorKind.IMPLIES: module_implies,
    OperatorKind.NEXT: module_next,
    OperatorKind.EVENTUAL: module_eventual,
    OperatorKind.GLOBAL: module_global,
    OperatorKind.UNTIL: module_until,
    OperatorKind.WEAK_UNTIL: module_weak_until,
    OperatorKind.RELEASE: module_release,
    OperatorKind.STRONG_RELEASE: module_strong_release,
}


def node_quads(
    node: FormulaNode,
    trace: Trace,
    child_quads: ChildQuads = (),
    counter: OpCounter | None = None,
) -> tuple[TimesetQuad, ...]:
    """Run ``node``'s module for every suffix start of ``trace``."""
    if len(child_quads) != node.kind.arity:
        raise EngineError(f"node {node.path or '<root>'} needs quads for {node.kind.arity} child(ren)")
    for quads in child_quads:
        if len(quads) != len(trace):
            raise EngineError(f"child quads of node {node.path or '<root>'} do not cover the trace")
    module = MODULES[node.kind]
    return tuple(module(trace, t0, node, child_quads, counter) for t0 in trace.times)


# -- the engine -----------------------------------------------------------


class _QuadView(Mapping):
    """Read-only ``(address, t0) -> TimesetQuad`` view over a table."""

    def __init__(self, by_node: dict[str, tuple[TimesetQuad, ...]], start: int):
        self._by_node = by_node
        self._start = start

    def __getitem__(self, key):
        address, t0 = key
        quads = self._by_node[format_address(parse_address(address))]
        i = t0 - self._start
        if not 0 <= i < len(quads):
            raise KeyError(key)
        return quads[i]

    def __iter__(self):
        for address, quads in self._by_node.items():
            for q in quads:
                yield (address, q.t0)

    def __len__(self):
        return sum(len(q) for q in self._by_node.values())


@dataclass(frozen=True)
class StatusTable:
    tree: FormulaTree
    trace: Trace
    by_node: dict[str, tuple[TimesetQuad, ...]]
    op_count: int
    ap_invocations: int

    @property
    def quads(self) -> Mapping[tuple[str, int], TimesetQuad]:
        return _QuadView(self.by_node, self.trace.start_time)

    def quad(self, address: str | tuple[int, ...] = "", t0: int | None = None) -> TimesetQuad:
        key = format_address(parse_address(address))
        if key not in self.by_node:
            raise UnknownAddressError(key)
        if t0 is None:
            t0 = self.trace.start_time
        if t0 not in self.trace:
            raise IndexError(f"t0={t0} outside trace [{self.trace.start_time}, {self.trace.end_time}]")
        return self.by_node[key][t0 - self.trace.start_time]

    def node_quads(self, address: str | tuple[int, ...] = "") -> tuple[TimesetQuad, ...]:
        key = format_address(parse_address(address))
        if key not in self.by_node:
            raise UnknownAddressError(key)
        return self.by_node[key]

    def iter_quads(self) -> Iterator[tuple[FormulaNode, TimesetQuad]]:
        for node in self.tree.nodes():
            for q in self.by_node[node.path]:
                yield node, q

    @property
    def bound(self) -> int:
        return complexity_bound(self.tree, self.trace)


def complexity_bound(tree: FormulaTree, trace: Trace) -> int:
    """``2^(L+1) * |trace|^2`` with ``L`` the tree depth (root at level 0)."""
    return 2 ** (tree.depth + 1) * len(trace) ** 2


def assess(tree: FormulaTree, trace: Trace, *, check: bool = True) -> StatusTable:
    """Compute every node's quads for every suffix start.

    Leaves are evaluated once per distinct label and shared; every other node
    is evaluated after all of its children.  With ``check`` set, each quad is
    verified against the structural invariants.
    """
    counter = OpCounter()
    by_node: dict[str, tuple[TimesetQuad, ...]] = {}
    by_label: dict[str, tuple[TimesetQuad, ...]] = {}
    ap_invocations = 0
    verified: set[TimesetQuad] = set()
    for node in tree.root.postorder():
        if node.kind is OperatorKind.AP:
            quads = by_label.get(node.label)
            if quads is None:
                quads = node_quads(node, trace, (), counter)
                ap_invocations += len(quads)
                by_label[node.label] = quads
        else:
            try:
                children = [by_node[c.path] for c in node.children]
            except KeyError as exc:
                raise EngineError(f"child {exc.args[0]!r} evaluated after its parent") from None
            quads = node_quads(node, trace, children, counter)
        if check:
            for q in set(quads) - verified:
                verified.add(q)
                errors = quad_invariant_errors(q, trace.end_time)
                if errors:
                    raise EngineError(f"node {node.path or '<root>'} t0={q.t0}: " + "; ".join(errors))
        by_node[node.path] = quads
    return StatusTable(tree, trace, by_node, counter.count, ap_invocations)

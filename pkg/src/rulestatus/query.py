"""Point queries against a :class:`StatusTable` and the interest heuristic."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from .formula import OperatorKind, node_at
from .status import Status, StatusTable

__all__ = [
    "QueryResult",
    "QueryError",
    "query_status",
    "interesting_times",
    "scan_globals",
    "render_sentence",
    "STATUS_ORDER",
    "non_global_rules",
]

log = logging.getLogger(__name__)

STATUS_ORDER = (Status.ACTIVE, Status.SATISFIED, Status.INACTIVE, Status.VIOLATED)

# Sentence pieces; the full sentence is "<subject> is <phrase> (at t*=<t>)".
_PHRASES = {
    frozenset({Status.ACTIVE}): "active",
    frozenset({Status.ACTIVE, Status.SATISFIED}): "active and satisfied",
    frozenset({Status.INACTIVE}): "inactive",
    frozenset({Status.VIOLATED}): "violated",
}


class QueryError(ValueError):
    """Bad address or time range in a query."""


def _subject(rule: int | None, node: str) -> str:
    if rule is None:
        return f"Node {node}" if node else "Rule"
    return f"Rule {rule}.{node}" if node else f"Rule {rule}"


def render_sentence(rule: int | None, node: str, status: frozenset[Status], t: int) -> str:
    """E.g. ``Rule 3.1.2 is active and satisfied (at t*=5)``."""
    return f"{_subject(rule, node)} is {_PHRASES[status]} (at t*={t})"


@dataclass(frozen=True)
class QueryResult:
    rule: int | None
    node: str
    t0: int
    t: int
    status: tuple[Status, ...]
    text: str

    @property
    def membership(self) -> dict[Status, bool]:
        return {s: s in self.status for s in STATUS_ORDER}

    @property
    def satisfied(self) -> bool:
        return Status.SATISFIED in self.status

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "node": self.node,
            "t0": self.t0,
            "t": self.t,
            "status": [s.value for s in self.status],
            "text": self.text,
        }

    @classmethod
    def from_json(cls, data: dict) -> "QueryResult":
        return cls(
            data["rule"],
            data["node"],
            data["t0"],
            data["t"],
            tuple(Status(s) for s in data["status"]),
            data["text"],
        )


def _resolve(table: StatusTable, address) -> str:
    try:
        return node_at(table.tree, address).path
    except KeyError as exc:
        raise QueryError(str(exc)) from None


def query_status(
    table: StatusTable, address: str | tuple[int, ...], t0: int, t: int, rule: int | None = None
) -> QueryResult:
    """Status of node ``address`` at time ``t`` on the suffix from ``t0``."""
    path = _resolve(table, address)
    trace = table.trace
    if t0 not in trace:
        raise QueryError(f"t0={t0} outside trace [{trace.start_time}, {trace.end_time}]")
    if t not in trace:
        raise QueryError(f"t={t} outside trace [{trace.start_time}, {trace.end_time}]")
    if t < t0:
        raise QueryError(f"t={t} precedes suffix start t0={t0}")
    members = table.quad(path, t0).membership(t)
    status = tuple(s for s in STATUS_ORDER if s in members)
    return QueryResult(rule, path, t0, t, status, render_sentence(rule, path, members, t))


def interesting_times(table: StatusTable, address: str | tuple[int, ...] = "") -> tuple[int, ...]:
    """Suffix starts where the node's diagonal status turns active or violated.

    The diagonal status at ``t0`` is the status of time ``t0`` on the suffix
    from ``t0``.  The first start is reported when it is already active or
    violated.
    """
    path = _resolve(table, address)
    found = []
    previous = None
    for quad in table.node_quads(path):
        current = quad.exclusive_status(quad.t0)
        if current in (Status.ACTIVE, Status.VIOLATED) and current != previous:
            found.append(quad.t0)
        previous = current
    return tuple(found)


def scan_globals(
    tables: Sequence[StatusTable], t: int, *, only_satisfied: bool = True
) -> list[tuple[int, QueryResult]]:
    """Query the argument of every ``G`` rule at ``t0 = t``.

    ``tables`` are in rule order and numbered from 1.  Rules whose root is not
    ``G`` are skipped and logged.
    """
    hits = []
    for index, table in enumerate(tables, 1):
        if table.tree.root.kind is not OperatorKind.GLOBAL:
            log.info("rule %d skipped: root is %s, not G", index, table.tree.root.kind.name)
            continue
        result = query_status(table, "1", t, t, rule=index)
        if result.satisfied or not only_satisfied:
            hits.append((index, result))
    return hits


def non_global_rules(tables: Sequence[StatusTable]) -> list[int]:
    return [i for i, tab in enumerate(tables, 1) if tab.tree.root.kind is not OperatorKind.GLOBAL]


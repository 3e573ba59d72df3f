"""Brute-force finite-trace LTL truth, written straight from the quantifier
definitions.  Used as an oracle for the status engine, so it favours being
obviously right over being fast.
"""

from __future__ import annotations

from typing import Callable

from .formula import FormulaNode, FormulaTree, OperatorKind
from .trace import Trace

__all__ = ["evaluate", "satisfies", "truth_vector", "truth_table"]

K = OperatorKind

# sat(child_index, t) -> does child ``child_index`` hold on the suffix from t?
ChildTruth = Callable[[int, int], bool]


def satisfies(trace: Trace, t0: int, node: FormulaNode, sat: ChildTruth) -> bool:
    """Truth of ``node`` at ``t0`` given a way to evaluate its children."""
    tf = trace.end_time
    kind = node.kind
    if kind is K.AP:
        return node.label in trace.labels_at(t0)
    if kind is K.NOT:
        return not sat(0, t0)
    if kind is K.AND:
        return sat(0, t0) and sat(1, t0)
    if kind is K.OR:
        return sat(0, t0) or sat(1, t0)
    if kind is K.IMPLIES:
        return not sat(0, t0) or sat(1, t0)
    if kind is K.NEXT:
        return t0 < tf and sat(0, t0 + 1)
    if kind is K.EVENTUAL:
        return any(sat(0, i) for i in range(t0, tf + 1))
    if kind is K.GLOBAL:
        return all(sat(0, i) for i in range(t0, tf + 1))
    if kind is K.UNTIL:
        return _until(t0, tf, sat)
    if kind is K.WEAK_UNTIL:
        return _until(t0, tf, sat) or all(sat(0, i) for i in range(t0, tf + 1))
    if kind is K.RELEASE:
        # k ranges over the suffix only: t0 <= k < i.
        return all(
            sat(1, i) or any(sat(0, k) for k in range(t0, i))
            for i in range(t0, tf + 1)
        )
    if kind is K.STRONG_RELEASE:
        return any(
            sat(0, i) and sat(1, i) and all(sat(1, k) for k in range(t0, i))
            for i in range(t0, tf + 1)
        )
    raise ValueError(f"unsupported operator {kind}")


def _until(t0: int, tf: int, sat: ChildTruth) -> bool:
    return any(
        sat(1, i) and all(sat(0, k) for k in range(t0, i))
        for i in range(t0, tf + 1)
    )


def evaluate(trace: Trace, t0: int, node: FormulaNode | FormulaTree) -> bool:
    """Does the suffix of ``trace`` from ``t0`` satisfy ``node``?"""
    if isinstance(node, FormulaTree):
        node = node.root
    if t0 not in trace:
        raise IndexError(f"t0={t0} outside trace [{trace.start_time}, {trace.end_time}]")
    children = node.children
    return satisfies(trace, t0, node, lambda j, t: evaluate(trace, t, children[j]))


def truth_vector(trace: Trace, node: FormulaNode | FormulaTree) -> tuple[bool, ...]:
    return tuple(evaluate(trace, t0, node) for t0 in trace.times)


def truth_table(trace: Trace, tree: FormulaTree) -> dict[str, tuple[bool, ...]]:
    """Truth of every node at every suffix start, children evaluated first.

    Same clauses as :func:`evaluate`; child results are looked up instead of
    recomputed, which keeps long traces tractable.
    """
    base = trace.start_time
    table: dict[str, tuple[bool, ...]] = {}
    for node in tree.root.postorder():
        kids = [table[c.path] for c in node.children]
        sat = lambda j, t, kids=kids: kids[j][t - base]  # noqa: E731
        table[node.path] = tuple(satisfies(trace, t0, node, sat) for t0 in trace.times)
    return table

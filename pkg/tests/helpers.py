"""Generators and a second, independent truth oracle shared by the tests."""

import itertools
import random

from rulestatus.formula import FormulaNode, OperatorKind as K, as_tree
from rulestatus.trace import Trace

UNARY = (K.NOT, K.NEXT, K.EVENTUAL, K.GLOBAL)
BINARY = (K.AND, K.OR, K.IMPLIES, K.UNTIL, K.WEAK_UNTIL, K.RELEASE, K.STRONG_RELEASE)


def dp_truth(node, trace):
    """Truth per suffix start via one-step unfolding, computed backwards from Tf.

    Deliberately shares nothing with the quantifier clauses in semantics.py.
    """
    return dp_combine(node, trace, [dp_truth(c, trace) for c in node.children])


def dp_combine(node, trace, kids):
    """``node``'s truth vector from its children's vectors."""
    n = len(trace)
    out = [False] * n
    k = node.kind
    for i in reversed(range(n)):
        last = i == n - 1
        nxt = False if last else out[i + 1]
        if k is K.AP:
            v = node.label in trace.steps[i]
        elif k is K.NOT:
            v = not kids[0][i]
        elif k is K.AND:
            v = kids[0][i] and kids[1][i]
        elif k is K.OR:
            v = kids[0][i] or kids[1][i]
        elif k is K.IMPLIES:
            v = (not kids[0][i]) or kids[1][i]
        elif k is K.NEXT:
            v = not last and kids[0][i + 1]
        elif k is K.EVENTUAL:
            v = kids[0][i] or nxt
        elif k is K.GLOBAL:
            v = kids[0][i] and (last or nxt)
        elif k is K.UNTIL:
            v = kids[1][i] or (kids[0][i] and nxt)
        elif k is K.WEAK_UNTIL:
            v = kids[1][i] or (kids[0][i] and (last or nxt))
        elif k is K.RELEASE:
            v = kids[1][i] and (kids[0][i] or last or nxt)
        elif k is K.STRONG_RELEASE:
            v = kids[1][i] and (kids[0][i] or nxt)
        else:
            raise AssertionError(k)
        out[i] = v
    return tuple(out)


def ap(label):
    return FormulaNode((), K.AP, (), label)


def grow(prev, labels=("a", "b")):
    """All formulas one level above ``prev`` (plus the bare labels)."""
    out = [ap(x) for x in labels]
    out += [FormulaNode((), kind, (c,)) for kind in UNARY for c in prev]
    out += [FormulaNode((), kind, (l, r)) for kind in BINARY for l in prev for r in prev]
    return out


def formula_levels(levels, labels=("a", "b")):
    """Formula sets by level count: level 1 is the labels themselves."""
    found, prev = [], []
    for _ in range(levels):
        prev = grow(prev, labels)
        found.append(prev)
    return found


def all_traces(max_len, labels=("a", "b")):
    subsets = [frozenset(c) for r in range(len(labels) + 1) for c in itertools.combinations(labels, r)]
    return [Trace(steps) for n in range(1, max_len + 1) for steps in itertools.product(subsets, repeat=n)]


def random_node(rng, levels, labels=("a", "b", "c")):
    if levels <= 1 or rng.random() < 0.25:
        return ap(rng.choice(labels))
    if rng.random() < 0.35:
        return FormulaNode((), rng.choice(UNARY), (random_node(rng, levels - 1, labels),))
    kind = rng.choice(BINARY)
    return FormulaNode((), kind, (random_node(rng, levels - 1, labels), random_node(rng, levels - 1, labels)))


def random_tree(rng, levels, labels=("a", "b", "c")):
    return as_tree(random_node(rng, levels, labels))


def random_trace(rng, max_len=8, labels=("a", "b", "c")):
    n = rng.randint(1, max_len)
    steps = tuple(frozenset(x for x in labels if rng.random() < 0.5) for _ in range(n))
    return Trace(steps, rng.randint(0, 3))


def instances(seed, count, levels=4, max_len=8):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_tree(rng, levels), random_trace(rng, max_len)

"""
Writing your own rules and traces
=================================

A short tour of the pieces: parse a rule, build a trace, assess it, and
cross-check the result against the brute-force evaluator.
"""

from rulestatus import Trace, assess, evaluate, parse_formula, query_status
from rulestatus.trace import dump_trace, parse_listing

###############################################################################
# Rules are plain text.  ``->`` binds weakest, then ``&``/``|``, then the
# binary temporal operators ``U W R M``; ``! X F G`` bind tightest.
rule = parse_formula("G(request -> F grant)")
for node in rule.nodes():
    print(f"  {node.path or '<root>':6} {node.kind.name:9} {node}")

###############################################################################
# A trace is a list of label sets.  Here a request at 1 is granted at 3, and
# a second request at 5 is never granted.
trace = Trace.from_lists([[], ["request"], [], ["grant"], [], ["request"], []])
table = assess(rule, trace)

###############################################################################
# The root is violated from the start (the last request goes unanswered).
# The argument tells the more useful story, suffix by suffix.
print("root:", table.quad("", 0).describe())
for t0 in (1, 2, 4, 5):
    q = table.quad("1", t0)
    print(f"  t0={t0}: {q.describe()}")
print(query_status(table, "1", 1, 2).text)
print(query_status(table, "1", 5, 5).text)

###############################################################################
# Violation flags always agree with the direct evaluator.
for node in rule.nodes():
    for q in table.node_quads(node.path):
        assert q.violated != evaluate(trace, q.t0, node)
print("oracle agrees")

###############################################################################
# Listings are a friendlier way to write traces by hand, and convert to the
# JSON trace format.
listing = """\
(0)\tidle
(1)\trequest
(...)
(4)\tgrant
"""
print(dump_trace(parse_listing(listing, allow_gaps=True)))

"""
Muddy yard: which rules matter while walking indoors
=====================================================

A robot moves around a small yard and into a house.  Four rules govern it:
get outside at some point, wash up if it ever comes inside, never come in
muddy without wiping first, and never walk into a wall.  We replay one
observed walk and ask what each rule is doing at each step.
"""

from rulestatus import assess, fixtures, interesting_times, query_status
from rulestatus.trace import validate_run

###############################################################################
# The yard is a Kripke structure: seven cells, moves between neighbours.
# A run is only meaningful if every move is allowed.
yard = fixtures.muddy_yard_kripke()
run = fixtures.muddy_yard_run()
print("run:", " ".join(run))
print("valid:", bool(validate_run(yard, run)))
print("s1 -> s5 allowed:", bool(validate_run(yard, ["s1", "s5"])))

###############################################################################
# Each cell carries labels, so the run induces a trace of label sets.
trace = fixtures.muddy_yard_trace()
for t in trace.times:
    print(f"  t={t:2d}  {sorted(trace.labels_at(t))}")

###############################################################################
# Assess every rule on the whole trace.  The root timesets at t0 = 0 say
# when each rule is active, when it is satisfied, and when it stops mattering.
rules = fixtures.muddy_yard_rules()
tables = [assess(rule, trace) for rule in rules]
for i, tab in enumerate(tables, 1):
    print(f"Rule {i}: {tab.tree.source_text}")
    print("   ", tab.quad("", 0).describe())

###############################################################################
# Rules 1 and 2 are settled at once: the robot starts outside, and the
# implication in rule 2 holds immediately.  At step 3 both are inactive.
for i in (1, 2):
    print(query_status(tables[i - 1], "", 0, 3, rule=i).text)

###############################################################################
# Rule 3 is always active, which is not very informative on its own.  The
# interesting part is its argument: the implication "if muddy, don't go in
# until wiped".  The heuristic points at the suffix where it switches on.
rule3 = tables[2]
print("interesting suffix starts:", interesting_times(rule3, "1"))

###############################################################################
# From t0 = 2 the robot is muddy, so the "stay out until wiped" part is on
# until it is wiped at step 5.
print(rule3.quad("1", 2).describe())
print(rule3.quad("1.2", 2).describe())
print(query_status(rule3, "1.2", 2, 5, rule=3).text)
print(query_status(rule3, "1.2", 2, 7, rule=3).text)

###############################################################################
# The engine's work stays under the quadratic bound for every rule.
for i, tab in enumerate(tables, 1):
    print(f"Rule {i}: {tab.op_count} operations (bound {tab.bound})")

"""
Autonomous vehicle: explaining a lane change
=============================================

Three trips by a simulated car, each with a left lane change at step 34.
Twenty-one driving rules are in force.  Rather than reading all of them, we
ask which rules had their trigger satisfied at the moment of the change.
"""

from rulestatus import assess, fixtures, interesting_times
from rulestatus.query import scan_globals

T = fixtures.AV_QUERY_TIME

###############################################################################
# The trip data is a listing with elided stretches.  Elided steps repeat the
# step before them.  A few rule labels are spelled differently from the data
# (``want-left-turn`` against ``want-turn-left``), so an alias map adds them.
rules = fixtures.av_rules()
print(len(rules), "rules; aliases:", fixtures.av_aliases())

trip1 = fixtures.av_trace(1)
print(f"trip 1 covers t={trip1.start_time}..{trip1.end_time}")
print("step 34:", sorted(fixtures.av_trace(1, raw=True).labels_at(T)))


def explain(trip, t):
    tables = [assess(r, fixtures.av_trace(trip)) for r in rules]
    print(f"\ntrip {trip}, t={t}")
    for index, result in scan_globals(tables, t):
        print(f"  {result.text}:  {rules[index - 1].node_at('1')}")
    return tables


###############################################################################
# Trip 1: the car wants to turn left near an intersection, slows for the
# turn, and is low on gas (so it must not reach the goal before refuelling).
tables = explain(1, T)

###############################################################################
# The gas-low rule first switched on at step 32, when the warning appeared.
print("gas-low rule, interesting starts:", interesting_times(tables[2], "1"))

###############################################################################
# Trip 2: a construction zone forces a merge to the left.
explain(2, T)

###############################################################################
# Trip 3: following too closely.  The rule that demands a lane change on the
# next step shows up one step earlier.
explain(3, T)
explain(3, T - 1)

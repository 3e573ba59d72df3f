import json
import logging

import pytest

from rulestatus.formula import parse_formula
from rulestatus.query import (
    QueryError,
    QueryResult,
    interesting_times,
    query_status,
    render_sentence,
    scan_globals,
)
from rulestatus.status import Status, assess
from rulestatus.trace import Trace

from helpers import instances

A, S, I, V = Status.ACTIVE, Status.SATISFIED, Status.INACTIVE, Status.VIOLATED


def test_rule_one_inactive_at_three(muddy_tables):
    for rule in (1, 2):
        result = query_status(muddy_tables[rule - 1], "", 0, 3, rule=rule)
        assert result.status == (I,)
        assert result.text == f"Rule {rule} is inactive (at t*=3)"


def test_weak_until_node_sentence(muddy_tables):
    result = query_status(muddy_tables[2], "1.2", 2, 5, rule=3)
    assert result.status == (A, S)
    assert result.satisfied
    assert result.text == "Rule 3.1.2 is active and satisfied (at t*=5)"


def test_satisfied_global_at_last_step(muddy_tables):
    result = query_status(muddy_tables[3], "", 11, 11, rule=4)
    assert result.status == (A, S)


def test_violated_sentence(muddy_tables):
    result = query_status(muddy_tables[0], "", 10, 10, rule=1)
    assert result.status == (V,)
    assert result.text == "Rule 1 is violated (at t*=10)"
    assert render_sentence(None, "2", frozenset({A}), 4) == "Node 2 is active (at t*=4)"


@pytest.mark.parametrize("address, t0, t", [("", 0, 12), ("", 3, 2), ("", -1, 0), ("9", 0, 0), ("1.x", 0, 0)])
def test_query_errors(muddy_tables, address, t0, t):
    with pytest.raises(QueryError):
        query_status(muddy_tables[0], address, t0, t)


def test_query_is_pure(muddy_tables):
    first = query_status(muddy_tables[2], "1", 2, 4, rule=3)
    assert query_status(muddy_tables[2], "1", 2, 4, rule=3) == first


def test_json_round_trip(muddy_tables):
    result = query_status(muddy_tables[2], "1.2", 2, 5, rule=3)
    data = json.loads(json.dumps(result.to_json()))
    assert data == {
        "rule": 3,
        "node": "1.2",
        "t0": 2,
        "t": 5,
        "status": ["active", "satisfied"],
        "text": "Rule 3.1.2 is active and satisfied (at t*=5)",
    }
    assert QueryResult.from_json(data) == result


def test_membership_vector(muddy_tables):
    result = query_status(muddy_tables[2], "1.2", 2, 7, rule=3)
    assert result.membership == {A: False, S: False, I: True, V: False}


# -- heuristic ----------------------------------------------------------------------


def test_muddy_rule_three_interest(muddy_tables):
    assert interesting_times(muddy_tables[2], "1") == (2,)


def test_always_violated_reports_start():
    trace = Trace.from_lists([[], [], []], 3)
    tab = assess(parse_formula("a"), trace)
    assert interesting_times(tab) == (3,)


def test_av_gas_low_interest(av_tables):
    assert 32 in interesting_times(av_tables[1][2], "1")


def test_heuristic_properties():
    for tree, trace in instances(99, 300):
        tab = assess(tree, trace)
        for node in tree.nodes():
            diag = {q.t0: q.exclusive_status(q.t0) for q in tab.node_quads(node.path)}
            found = interesting_times(tab, node.path)
            assert list(found) == sorted(found)
            for t0 in found:
                assert diag[t0] is not I
                if t0 > trace.start_time:
                    assert diag[t0] != diag[t0 - 1]
            # and nothing is missed
            for t0, s in diag.items():
                prev = diag.get(t0 - 1)
                if s in (A, V) and s != prev:
                    assert t0 in found


# -- scans ----------------------------------------------------------------------


def test_scan_rho1(av_tables):
    assert [i for i, _ in scan_globals(av_tables[1], 34)] == [1, 2, 3]


def test_scan_rho2(av_tables):
    assert [i for i, _ in scan_globals(av_tables[2], 34)] == [5, 7]


def test_scan_rho3(av_tables):
    assert [i for i, _ in scan_globals(av_tables[3], 34)] == [8]
    assert 9 in [i for i, _ in scan_globals(av_tables[3], 33)]


def test_scan_results_are_first_arguments(av_tables):
    for index, result in scan_globals(av_tables[2], 34):
        assert result.node == "1" and result.t0 == result.t == 34
        assert result.text.startswith(f"Rule {index}.1 is active and satisfied")


def test_scan_all_and_skips(av_tables, caplog):
    with caplog.at_level(logging.INFO, logger="rulestatus.query"):
        every = scan_globals(av_tables[1], 34, only_satisfied=False)
    assert [i for i, _ in every] == [i for i in range(1, 22) if i != 4]
    assert "rule 4 skipped" in caplog.text


def test_scan_empty():
    assert scan_globals([], 0) == []

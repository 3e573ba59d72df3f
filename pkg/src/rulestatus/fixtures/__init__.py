"""Bundled example data.

Muddy yard: a Kripke structure over seven states (``s1`` grass, ``s2`` mud,
``s3`` mat, ``s4`` floor, ``s5`` sink, ``s6`` wall, ``s7`` door) and six
labels (``a1`` outside, ``a2`` inside, ``a3`` muddy, ``a4`` wiped, ``a5``
washed, ``a6`` impassable), an observed run, and four rules.  Moves are
allowed between adjacent cells and in place; every state is initial.

Autonomous vehicle: 21 rules and three trip listings sampled around the
lane change at ``t' = 34``.  Elided listing steps repeat the previous listed
step.  The rules use a few labels the trip data spells differently; the
alias map derives them (``want-left-turn`` from ``want-turn-left`` and so on).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..formula import FormulaTree, load_rules
from ..trace import (
    KripkeStructure,
    Trace,
    derive_labels,
    induce_trace,
    load_aliases,
    load_kripke,
    load_run,
    read_listing,
)

__all__ = [
    "path",
    "muddy_yard_kripke",
    "muddy_yard_run",
    "muddy_yard_trace",
    "muddy_yard_rules",
    "av_rules",
    "av_aliases",
    "av_trace",
    "AV_QUERY_TIME",
]

AV_QUERY_TIME = 34


def path(name: str) -> Path:
    return Path(str(resources.files(__package__).joinpath(name)))


def muddy_yard_kripke() -> KripkeStructure:
    return load_kripke(path("muddy_yard_kripke.json"))


def muddy_yard_run() -> list[str]:
    return load_run(path("muddy_yard_run.json"))[0]


def muddy_yard_trace() -> Trace:
    return induce_trace(muddy_yard_kripke(), muddy_yard_run(), 0)


def muddy_yard_rules() -> list[FormulaTree]:
    return load_rules(path("muddy_yard_rules.txt"))


def av_rules() -> list[FormulaTree]:
    return load_rules(path("av_rules.txt"))


def av_aliases() -> dict[str, list[str]]:
    return load_aliases(path("av_aliases.json"))


def av_trace(trip: int, *, raw: bool = False) -> Trace:
    """Trip ``1``-``3``; ``raw`` skips the alias labels."""
    trace = read_listing(path(f"av_rho{trip}.txt"), allow_gaps=True, gap_fill="hold")
    if raw:
        return trace
    return derive_labels(trace, av_aliases())

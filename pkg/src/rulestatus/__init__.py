"""Pointwise rule status (active, satisfied, inactive, violated) for LTL
rules and all their sub-formulas over finite traces."""

from .formula import (
    FormulaNode,
    FormulaSyntaxError,
    FormulaTree,
    OperatorKind,
    as_tree,
    load_rules,
    node_at,
    parse_formula,
    parse_rules,
    precondition,
    serialize,
)
from .query import QueryError, QueryResult, interesting_times, query_status, scan_globals
from .semantics import evaluate, truth_table
from .status import Status, StatusTable, TimesetQuad, assess, complexity_bound
from .timeset import Timeset
from .trace import (
    KripkeStructure,
    Trace,
    TraceFormatError,
    induce_trace,
    load_kripke,
    load_trace,
    parse_listing,
    read_listing,
    save_trace,
    validate_run,
)

__version__ = "0.1.0"

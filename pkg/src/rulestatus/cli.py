"""``rsa`` command line: assess rules over a trace and answer status queries.

Exit codes: 0 success, 2 input error, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import cmd
import json
import shlex
import sys
from dataclasses import dataclass, field
from typing import Sequence, TextIO

from .formula import FormulaSyntaxError, FormulaTree, RuleFileError, load_rules, node_at
from .query import QueryError, interesting_times, non_global_rules, query_status, scan_globals
from .semantics import truth_table
from .status import EngineError, StatusTable, assess
from .trace import (
    InvalidRunError,
    Trace,
    TraceFormatError,
    derive_labels,
    dump_trace,
    induce_trace,
    load_aliases,
    load_kripke,
    load_run,
    load_trace,
    read_listing,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3

_INPUT_ERRORS = (OSError, FormulaSyntaxError, RuleFileError, TraceFormatError, InvalidRunError)


class UsageError(Exception):
    """Bad command arguments inside a session."""


class OracleMismatch(Exception):
    pass


@dataclass
class SessionConfig:
    rules: str
    trace: str | None = None
    listing: str | None = None
    kripke: str | None = None
    run: str | None = None
    start_time: int | None = None
    aliases: str | None = None
    allow_gaps: bool = False
    format: str = "text"
    oracle_check: bool = False
    script: str | None = None

    def __post_init__(self):
        sources = [self.trace is not None, self.listing is not None, self.kripke is not None or self.run is not None]
        if sum(sources) != 1:
            raise UsageError("give exactly one of --trace, --listing, or --kripke with --run")
        if (self.kripke is None) != (self.run is None):
            raise UsageError("--kripke and --run go together")


@dataclass
class Session:
    config: SessionConfig
    rules: list[FormulaTree]
    trace: Trace
    tables: list[StatusTable] = field(default_factory=list)

    @classmethod
    def open(cls, config: SessionConfig) -> "Session":
        rules = load_rules(config.rules)
        if config.trace is not None:
            trace = load_trace(config.trace)
        elif config.listing is not None:
            trace = read_listing(config.listing, allow_gaps=config.allow_gaps)
        else:
            k = load_kripke(config.kripke)
            run, start = load_run(config.run)
            trace = induce_trace(k, run, start)
        if config.start_time is not None:
            trace = Trace(trace.steps, config.start_time)
        if config.aliases is not None:
            trace = derive_labels(trace, load_aliases(config.aliases))
        session = cls(config, rules, trace)
        session.tables = [assess(rule, trace) for rule in rules]
        if config.oracle_check:
            session.oracle_check()
        return session

    def oracle_check(self) -> None:
        for index, table in enumerate(self.tables, 1):
            truth = truth_table(self.trace, table.tree)
            for node in table.tree.nodes():
                for quad, holds in zip(table.by_node[node.path], truth[node.path]):
                    if quad.violated == holds:
                        raise OracleMismatch(
                            f"rule {index} node {node.path or '<root>'} t0={quad.t0}: engine says "
                            f"{'violated' if quad.violated else 'not violated'}, oracle says "
                            f"{'true' if holds else 'false'}"
                        )

    def table(self, rule: str | int) -> StatusTable:
        try:
            index = int(rule)
        except ValueError:
            raise UsageError(f"rule must be a number, got {rule!r}") from None
        if not 1 <= index <= len(self.tables):
            raise UsageError(f"rule {index} out of range 1..{len(self.tables)}")
        return self.tables[index - 1]


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {text!r}") from None


def _node(text: str) -> str:
    return "" if text in ("-", "root", '""', "''") else text


# -- reports ----------------------------------------------------------------


def assess_report(session: Session) -> dict:
    trace = session.trace
    rules = []
    for index, table in enumerate(session.tables, 1):
        root = table.quad("", trace.start_time)
        rules.append(
            {
                "rule": index,
                "formula": table.tree.source_text,
                "root": root.to_json(),
                "interesting": list(interesting_times(table, "")),
                "op_count": table.op_count,
            }
        )
    return {
        "trace": {"start_time": trace.start_time, "end_time": trace.end_time, "steps": len(trace)},
        "oracle_check": "passed" if session.config.oracle_check else None,
        "rules": rules,
    }


def format_assess_text(session: Session) -> str:
    trace = session.trace
    lines = [f"trace: t={trace.start_time}..{trace.end_time} ({len(trace)} steps)"]
    if session.config.oracle_check:
        lines.append("oracle check: passed")
    for index, table in enumerate(session.tables, 1):
        root = table.quad("", trace.start_time)
        tau_star = ",".join(str(t) for t in interesting_times(table, ""))
        lines.append(f"Rule {index}: {table.tree.source_text}")
        lines.append(f"  t0={trace.start_time}: {root.describe()}")
        lines.append(f"  tau*={{{tau_star}}}")
    return "\n".join(lines)


# -- interactive / scripted commands -----------------------------------------


class Commands:
    """Shared by the REPL and query scripts; each method returns output text."""

    def __init__(self, session: Session, fmt: str = "text"):
        self.session = session
        self.fmt = fmt

    def _emit(self, payload, text: str) -> str:
        return json.dumps(payload) if self.fmt == "json" else text

    def query(self, args: Sequence[str]) -> str:
        if len(args) != 4:
            raise UsageError("usage: query <rule> <node> <t0> <t>")
        rule, node, t0, t = args
        table = self.session.table(rule)
        result = query_status(table, _node(node), _int(t0, "t0"), _int(t, "t"), rule=int(rule))
        return self._emit(result.to_json(), result.text)

    def tau(self, args: Sequence[str]) -> str:
        if len(args) != 3:
            raise UsageError("usage: tau <rule> <node> <t0>")
        rule, node, t0 = args
        table = self.session.table(rule)
        path = node_at(table.tree, _node(node)).path
        t0 = _int(t0, "t0")
        if t0 not in table.trace:
            raise QueryError(f"t0={t0} outside trace [{table.trace.start_time}, {table.trace.end_time}]")
        quad = table.quad(path, t0)
        name = f"Rule {rule}.{path}" if path else f"Rule {rule}"
        payload = {"rule": int(rule), "node": path, **quad.to_json()}
        return self._emit(payload, f"{name} t0={t0}: {quad.describe(omit_empty=False)}")

    def scan(self, args: Sequence[str]) -> str:
        show_all = "--all" in args
        rest = [a for a in args if a != "--all"]
        if len(rest) != 1:
            raise UsageError("usage: scan <t> [--all]")
        t = _int(rest[0], "t")
        if t not in self.session.trace:
            raise QueryError(f"t={t} outside trace [{self.session.trace.start_time}, {self.session.trace.end_time}]")
        hits = scan_globals(self.session.tables, t, only_satisfied=not show_all)
        skipped = non_global_rules(self.session.tables)
        if self.fmt == "json":
            return json.dumps({"t": t, "results": [r.to_json() for _, r in hits], "skipped": skipped})
        lines = [f"{r.text}: {self.session.tables[i - 1].tree.node_at('1')}" for i, r in hits]
        if not hits:
            lines.append("(no matching rules)")
        for i in skipped:
            lines.append(f"note: rule {i} skipped (root is not G)")
        return "\n".join(lines)

    def interesting(self, args: Sequence[str]) -> str:
        if len(args) not in (1, 2):
            raise UsageError("usage: interesting <rule> [node]")
        table = self.session.table(args[0])
        node = _node(args[1]) if len(args) == 2 else ""
        path = node_at(table.tree, node).path
        times = interesting_times(table, path)
        name = f"Rule {args[0]}.{path}" if path else f"Rule {args[0]}"
        payload = {"rule": int(args[0]), "node": path, "interesting": list(times)}
        return self._emit(payload, f"{name}: tau*={{{','.join(map(str, times))}}}")

    def rules(self, args: Sequence[str]) -> str:
        lines = [f"{i}: {tab.tree.source_text}" for i, tab in enumerate(self.session.tables, 1)]
        return "\n".join(lines) if lines else "(no rules)"

    def run_line(self, line: str) -> str | None:
        parts = shlex.split(line, comments=True)
        if not parts:
            return None
        name, args = parts[0], parts[1:]
        handler = getattr(self, name, None) if name in ("query", "tau", "scan", "interesting", "rules") else None
        if handler is None:
            raise UsageError(f"unknown command {name!r}")
        return handler(args)


class Repl(cmd.Cmd):
    intro = "rule status REPL; 'help' lists commands, 'quit' leaves."
    prompt = "rsa> "

    def __init__(self, commands: Commands, stdin: TextIO | None = None, stdout: TextIO | None = None):
        super().__init__(stdin=stdin, stdout=stdout)
        if stdin is not None:
            self.use_rawinput = False
        self.commands = commands

    def _run(self, name: str, arg: str) -> None:
        try:
            out = self.commands.run_line(f"{name} {arg}")
        except (UsageError, QueryError, KeyError) as exc:
            self.stdout.write(f"error: {exc}\n")
            return
        if out:
            self.stdout.write(out + "\n")

    def do_query(self, arg):
        """query <rule> <node> <t0> <t>: status of a node at t on the suffix from t0"""
        self._run("query", arg)

    def do_tau(self, arg):
        """tau <rule> <node> <t0>: all four timesets of a node"""
        self._run("tau", arg)

    def do_scan(self, arg):
        """scan <t> [--all]: satisfied arguments of all G rules at t0 = t"""
        self._run("scan", arg)

    def do_interesting(self, arg):
        """interesting <rule> [node]: suffix starts where the node turns active or violated"""
        self._run("interesting", arg)

    def do_rules(self, arg):
        """rules: list the loaded rules"""
        self._run("rules", arg)

    def do_quit(self, arg):
        """quit: leave the REPL"""
        return True

    do_exit = do_quit
    do_EOF = do_quit

    def emptyline(self):
        pass

    def default(self, line):
        self.stdout.write(f"error: unknown command {line.split()[0]!r}\n")


# -- argument parsing -----------------------------------------------------------


def _add_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rules", required=True, help="rule file, one LTL rule per line")
    p.add_argument("--trace", help="trace JSON file")
    p.add_argument("--listing", help="trace in '(t) label, ...' listing form")
    p.add_argument("--allow-gaps", action="store_true", help="fill '(...)' listing gaps with the previous step")
    p.add_argument("--kripke", help="Kripke structure JSON (with --run)")
    p.add_argument("--run", help="run JSON: list of state ids")
    p.add_argument("--start-time", type=int, help="override the trace start time")
    p.add_argument("--aliases", help="JSON map of derived labels to source labels")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--oracle-check", action="store_true", help="cross-check every violation flag against the brute-force evaluator")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsa", description="Pointwise status of LTL rules over finite traces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assess", help="report root timesets and tau* for every rule")
    _add_inputs(p)

    p = sub.add_parser("query", help="answer one query or a script of queries")
    _add_inputs(p)
    p.add_argument("--script", help="file of REPL commands to run in batch")
    p.add_argument("query", nargs="*", metavar="RULE NODE T0 T", help="rule index, node address, t0, t")

    p = sub.add_parser("repl", help="interactive query loop")
    _add_inputs(p)

    p = sub.add_parser("convert", help="listing -> trace JSON")
    p.add_argument("--from-listing", required=True, metavar="FILE")
    p.add_argument("--allow-gaps", action="store_true", help="accept '(...)' elisions")
    p.add_argument("--gap-fill", default="hold", help="'hold' (repeat previous step) or comma-separated labels")
    p.add_argument("-o", "--output", help="write here instead of stdout")
    return parser


def _config(ns: argparse.Namespace) -> SessionConfig:
    return SessionConfig(
        rules=ns.rules,
        trace=ns.trace,
        listing=ns.listing,
        kripke=ns.kripke,
        run=ns.run,
        start_time=ns.start_time,
        aliases=ns.aliases,
        allow_gaps=ns.allow_gaps,
        format=ns.format,
        oracle_check=ns.oracle_check,
        script=getattr(ns, "script", None),
    )


def _convert(ns, out: TextIO) -> int:
    fill = "hold" if ns.gap_fill == "hold" else [s.strip() for s in ns.gap_fill.split(",") if s.strip()]
    trace = read_listing(ns.from_listing, allow_gaps=ns.allow_gaps, gap_fill=fill)
    text = dump_trace(trace)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def main(argv: Sequence[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    try:
        if ns.command == "convert":
            return _convert(ns, stdout)
        config = _config(ns)
        session = Session.open(config)
    except UsageError as exc:
        stderr.write(f"rsa: {exc}\n")
        return EXIT_INPUT
    except _INPUT_ERRORS as exc:
        stderr.write(f"rsa: {exc}\n")
        return EXIT_INPUT
    except (OracleMismatch, EngineError) as exc:
        stderr.write(f"rsa: internal consistency failure: {exc}\n")
        return EXIT_INTERNAL

    commands = Commands(session, config.format)
    if ns.command == "assess":
        if config.format == "json":
            stdout.write(json.dumps(assess_report(session), indent=2) + "\n")
        else:
            stdout.write(format_assess_text(session) + "\n")
        return EXIT_OK

    if ns.command == "repl":
        Repl(commands, stdin=None if stdin is sys.stdin else stdin, stdout=stdout).cmdloop()
        return EXIT_OK

    # query
    lines = []
    if ns.query:
        lines.append(shlex.join(["query", *ns.query]))
    if config.script:
        try:
            with open(config.script, encoding="utf-8") as fh:
                lines.extend(fh.read().splitlines())
        except OSError as exc:
            stderr.write(f"rsa: {exc}\n")
            return EXIT_INPUT
    if not lines:
        stderr.write("rsa: query needs RULE NODE T0 T or --script\n")
        return EXIT_INPUT
    for lineno, line in enumerate(lines, 1):
        try:
            out = commands.run_line(line)
        except (UsageError, QueryError, KeyError) as exc:
            where = f"{config.script}:{lineno}: " if config.script and not ns.query else ""
            stderr.write(f"rsa: {where}{exc}\n")
            return EXIT_INPUT
        if out:
            stdout.write(out + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

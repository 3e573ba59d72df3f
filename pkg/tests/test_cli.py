import io
import json
import shutil
import subprocess

import pytest

from rulestatus import cli, fixtures
from rulestatus.trace import load_trace, parse_trace

MUDDY = [
    "--rules", str(fixtures.path("muddy_yard_rules.txt")),
    "--kripke", str(fixtures.path("muddy_yard_kripke.json")),
    "--run", str(fixtures.path("muddy_yard_run.json")),
]


def av(trip):
    return [
        "--rules", str(fixtures.path("av_rules.txt")),
        "--listing", str(fixtures.path(f"av_rho{trip}.txt")),
        "--allow-gaps",
        "--aliases", str(fixtures.path("av_aliases.json")),
    ]


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_assess_text():
    code, out, _ = run("assess", *MUDDY, "--oracle-check")
    assert code == 0
    lines = out.splitlines()
    assert "oracle check: passed" in lines
    i = lines.index("Rule 1: F a1")
    assert lines[i + 1] == "  t0=0: tau_a={0}, tau_s={0}, tau_i={1..11}"
    i = lines.index("Rule 3: G(a3 -> (!a2 W a4))")
    assert lines[i + 1] == "  t0=0: tau_a={0..11}, tau_s={11}"


def test_assess_json():
    code, out, _ = run("assess", *MUDDY, "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["trace"] == {"start_time": 0, "end_time": 11, "steps": 12}
    r1, _, r3, _ = report["rules"]
    assert r1["root"] == {"t0": 0, "tau_a": [[0, 0]], "tau_s": [[0, 0]], "tau_i": [[1, 11]], "tau_v": []}
    assert r3["root"]["tau_a"] == [[0, 11]] and r3["root"]["tau_s"] == [[11, 11]]
    assert json.loads(json.dumps(report)) == report


def test_assess_from_trace_file():
    code, out, _ = run("assess", "--rules", MUDDY[1], "--trace", str(fixtures.path("muddy_yard_trace.json")))
    assert code == 0 and "Rule 4: G(!a6)" in out


def test_assess_av_gas_low():
    code, out, _ = run("query", *av(1), "--oracle-check", "3", "1", "34", "34")
    assert code == 0
    assert out.strip() == "Rule 3.1 is active and satisfied (at t*=34)"


def test_empty_rules(tmp_path):
    empty = tmp_path / "none.txt"
    empty.write_text("# nothing\n")
    code, out, _ = run("assess", "--rules", str(empty), *MUDDY[2:], "--format", "json")
    assert code == 0
    assert json.loads(out)["rules"] == []


def test_query_single():
    code, out, _ = run("query", *MUDDY, "3", "1.2", "2", "5")
    assert code == 0
    assert "active and satisfied" in out


def test_query_json():
    code, out, _ = run("query", *MUDDY, "--format", "json", "3", "1.2", "2", "5")
    assert json.loads(out)["status"] == ["active", "satisfied"]


def test_query_range_error():
    code, _, err = run("query", *MUDDY, "1", "", "0", "12")
    assert code == 2
    assert "outside trace" in err


def test_query_script(tmp_path):
    script = tmp_path / "q.txt"
    script.write_text("# muddy yard\nquery 3 1.2 2 5\ntau 3 1 2\ninteresting 3 1\nrules\n")
    code, out, _ = run("query", *MUDDY, "--script", str(script))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Rule 3.1.2 is active and satisfied (at t*=5)"
    assert lines[1] == "Rule 3.1 t0=2: tau_a={2}, tau_s={2}, tau_i={3..11}, tau_v={}"
    assert lines[2] == "Rule 3.1: tau*={2}"
    assert lines[3] == "1: F a1"


def test_query_script_error_stops(tmp_path):
    script = tmp_path / "q.txt"
    script.write_text("query 3 1.2 2 5\nquery 3 9 0 0\nquery 1 - 0 0\n")
    code, out, err = run("query", *MUDDY, "--script", str(script))
    assert code == 2
    assert out.count("\n") == 1
    assert "q.txt:2" in err


def test_scan_commands(tmp_path):
    script = tmp_path / "scan.txt"
    script.write_text("scan 34\n")
    code, out, _ = run("query", *av(2), "--script", str(script))
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("Rule 5.1 is active and satisfied (at t*=34)")
    assert lines[1].startswith("Rule 7.1 is active and satisfied (at t*=34)")
    assert lines[2] == "note: rule 4 skipped (root is not G)"


def test_scan_json(tmp_path):
    script = tmp_path / "scan.txt"
    script.write_text("scan 33\n")
    code, out, _ = run("query", *av(3), "--format", "json", "--script", str(script))
    data = json.loads(out)
    assert 9 in [r["rule"] for r in data["results"]]
    assert data["skipped"] == [4]


def test_repl_session():
    session = "rules\nquery 3 1.2 2 5\nquery 9 1 0 0\nfrobnicate\nscan 99\ninteresting 3 1\nquit\n"
    code, out, _ = run("repl", *MUDDY, stdin=session)
    assert code == 0
    assert "Rule 3.1.2 is active and satisfied (at t*=5)" in out
    assert "error: rule 9 out of range 1..4" in out
    assert "error: unknown command 'frobnicate'" in out
    assert "error: t=99 outside trace" in out
    assert "Rule 3.1: tau*={2}" in out


def test_repl_ends_on_eof():
    code, out, _ = run("repl", *MUDDY, stdin="tau 1 - 0\n")
    assert code == 0
    assert "Rule 1 t0=0" in out


def test_convert(tmp_path):
    dest = tmp_path / "rho1.json"
    code, _, _ = run("convert", "--from-listing", str(fixtures.path("av_rho1.txt")), "--allow-gaps", "-o", str(dest))
    assert code == 0
    assert load_trace(dest) == fixtures.av_trace(1, raw=True)


def test_convert_to_stdout_with_fill():
    code, out, _ = run(
        "convert", "--from-listing", str(fixtures.path("av_rho1.txt")), "--allow-gaps", "--gap-fill", "quiet"
    )
    assert code == 0
    trace = parse_trace(out)
    assert trace.labels_at(2) == {"quiet"}


def test_convert_rejects_gaps():
    code, _, err = run("convert", "--from-listing", str(fixtures.path("av_rho1.txt")))
    assert code == 2 and "allow_gaps" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["assess", "--rules", MUDDY[1]],
        ["assess", *MUDDY, "--trace", "x.json"],
        ["assess", "--rules", MUDDY[1], "--kripke", MUDDY[3]],
        ["assess", "--rules", "/nonexistent", "--trace", MUDDY[3]],
        ["assess", "--rules", MUDDY[1], "--trace", MUDDY[3]],
        ["bogus"],
        ["query", *MUDDY],
        ["query", *MUDDY, "x", "", "0", "0"],
    ],
)
def test_input_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_bad_rule_file(tmp_path):
    rules = tmp_path / "r.txt"
    rules.write_text("F a1\nG (a2\n")
    code, _, err = run("assess", "--rules", str(rules), *MUDDY[2:])
    assert code == 2 and "r.txt:2" in err


def test_oracle_mismatch_exit_3(monkeypatch):
    def lying(trace, tree):
        return {node.path: tuple(True for _ in trace.times) for node in tree.nodes()}

    monkeypatch.setattr(cli, "truth_table", lying)
    code, _, err = run("assess", *MUDDY, "--oracle-check")
    assert code == 3
    assert "internal consistency failure" in err


def test_help_exits_0():
    assert run("--help")[0] == 0


@pytest.mark.skipif(shutil.which("rsa") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["rsa", "query", *MUDDY, "3", "1.2", "2", "5"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "Rule 3.1.2 is active and satisfied (at t*=5)"

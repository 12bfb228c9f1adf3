"""End-to-end command line behavior, including exit codes and figures."""

import json
from pathlib import Path

from corestack.cli import main

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"
GUARD = str(PROGRAMS / "length_guard.core")
PATTERN = str(PROGRAMS / "length_pattern.core")
SWAPPED = str(PROGRAMS / "length_pattern_swapped.core")


def test_run_guard_program_on_nil(capsys):
    assert main(["run", GUARD, "--arg", "[]"]) == 0
    assert capsys.readouterr().out.strip() == "<1>"


def test_run_guard_program_on_zero(capsys):
    assert main(["run", GUARD, "--arg", "0"]) == 0
    assert capsys.readouterr().out.strip() == "<2>"


def test_run_list_argument(capsys):
    assert main(["run", GUARD, "--arg", "[1,2]"]) == 0
    assert capsys.readouterr().out.strip() == "<2>"


def test_run_out_of_fuel(tmp_path, capsys):
    loop = tmp_path / "loop.core"
    loop.write_text("letrec 'f'/0 = fun() -> apply 'f'/0() in apply 'f'/0()")
    assert main(["run", str(loop), "--fuel", "100"]) == 2


def test_run_stuck(tmp_path):
    bad = tmp_path / "stuck.core"
    bad.write_text("let <X,Y> = <1> in X")
    assert main(["run", str(bad)]) == 3


def test_run_exception_still_completes(tmp_path, capsys):
    f = tmp_path / "exc.core"
    f.write_text("call 'erlang':'length'(0)")
    assert main(["run", str(f)]) == 0
    assert capsys.readouterr().out.strip() == "{'error','badarg',0}^X"


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.core"
    bad.write_text("let <X> = in X")
    assert main(["run", str(bad)]) == 65
    assert "line" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    assert main(["run"]) == 64
    assert main(["frobnicate"]) == 64
    assert main(["run", GUARD, "--arg", "letrec"]) == 65
    assert main(["run", "/nonexistent/path.core"]) == 64


def test_entry_selection(tmp_path, capsys):
    f = tmp_path / "two.core"
    f.write_text("'a'/0 = fun() -> 1 'b'/0 = fun() -> 2")
    assert main(["run", str(f)]) == 0
    assert capsys.readouterr().out.strip() == "<2>"
    assert main(["run", str(f), "--entry", "a/0"]) == 0
    assert capsys.readouterr().out.strip() == "<1>"


def test_trace_text_format(capsys):
    assert main(["trace", GUARD, "--arg", "[]"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    rows = [line.split("\t") for line in lines]
    assert all(len(row) == 4 for row in rows)
    assert rows[-1][1] == "Final"
    assert rows[-1][3] == "<1>"
    rules = [row[1] for row in rows]
    assert "SCase" in rules and "PParams" in rules


def test_trace_json_schema(capsys):
    assert main(["trace", GUARD, "--arg", "0", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    steps = [row["step"] for row in rows]
    assert steps == sorted(steps) and len(set(steps)) == len(steps)
    for row in rows:
        assert set(row) == {"step", "rule", "stack_depth", "redex_text"}
        assert isinstance(row["step"], int)
        assert isinstance(row["rule"], str)
        assert isinstance(row["stack_depth"], int)
        assert isinstance(row["redex_text"], str)
    assert rows[-1]["rule"] == "Final"
    assert rows[-1]["redex_text"] == "<2>"


def test_trace_plot_writes_figure(tmp_path, capsys):
    out = tmp_path / "trace.png"
    assert main(["trace", GUARD, "--arg", "[]", "--plot", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 0


def test_equiv_refactoring_pair(capsys):
    code = main(["equiv", GUARD, PATTERN, "--fuel", "20000", "--stacks", "8", "--substs", "6"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["verdict"] == "equivalent"
    assert report["trials"] > 0


def test_equiv_detects_mutation(tmp_path, capsys):
    out = tmp_path / "verdict.png"
    code = main(
        [
            "equiv", GUARD, SWAPPED,
            "--fuel", "20000", "--stacks", "6", "--substs", "6",
            "--plot", str(out),
        ]
    )
    report = json.loads(capsys.readouterr().out)
    assert code == 1
    assert report["verdict"] == "inequivalent"
    assert "witness" in report
    assert out.exists() and out.stat().st_size > 0


def test_equiv_unknown_exit_code(tmp_path, capsys):
    loop = tmp_path / "loop.core"
    loop.write_text("letrec 'f'/0 = fun() -> apply 'f'/0() in apply 'f'/0()")
    value = tmp_path / "value.core"
    value.write_text("'ok'")
    code = main(["equiv", str(value), str(loop), "--fuel", "200", "--stacks", "2", "--substs", "2"])
    report = json.loads(capsys.readouterr().out)
    assert code == 2
    assert report["verdict"] == "unknown"
    assert report["reason"] == "fuel"


def test_equiv_free_names(tmp_path, capsys):
    a = tmp_path / "a.core"
    a.write_text("call 'erlang':'+'(X, 0)")
    b = tmp_path / "b.core"
    b.write_text("X")
    code = main(["equiv", str(a), str(b), "--free", "X", "--fuel", "5000"])
    report = json.loads(capsys.readouterr().out)
    # X may be bound to non-integers, where the addition raises instead
    assert code == 1
    assert report["verdict"] == "inequivalent"


def test_equiv_mismatched_params_rejected(tmp_path, capsys):
    a = tmp_path / "a.core"
    a.write_text("'f'/1 = fun(_0) -> _0")
    b = tmp_path / "b.core"
    b.write_text("'f'/1 = fun(_1) -> _1")
    assert main(["equiv", str(a), str(b)]) == 64


def test_check_golden_suite(capsys):
    assert main(["check", "--suite", "golden"]) == 0
    out = capsys.readouterr().out
    assert "golden-nil" in out and "golden-badarg" in out

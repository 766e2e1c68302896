import json

import pytest

from syscons.cli import main, run

SYM = "forall x. forall y. R(x,y) -> R(y,x)"
ANTISYM = "forall x. forall y. R(x,y) & R(y,x) -> x = y"

FIXTURES = ["span.sys", "span_semantic.sys", "discrete.sys", "community.sys"]


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("command", ["validate", "consequence", "fuse", "sys-consequence"])
def test_commands_succeed_and_are_byte_identical(fixtures, name, command):
    first = run([command, fixtures(name)])
    second = run([command, fixtures(name)])
    assert first[0] == 0, first[2]
    assert first == second
    assert "bound: 3" in first[1]


def test_json_format_is_parseable(fixtures):
    code, out, _ = run(["fuse", fixtures("span.sys"), "--format", "json"])
    rep = json.loads(out)
    assert code == 0
    assert rep["institution"] == "folf" and rep["bound"] == 3
    assert len(rep["fusion theory"]) == 3


def test_fuse_span_lists_equivalence_axioms(fixtures):
    code, out, _ = run(["fuse", fixtures("span.sys"), "--format", "json"])
    theory = json.loads(out)["fusion theory"]
    assert any("R(x,x)" in s for s in theory)
    assert any("R(y,x)" in s for s in theory)
    assert any("R(x,z)" in s for s in theory)


def test_span_workflow(fixtures, tmp_path):
    out_file = tmp_path / "span_closed.sys"
    code, _, err = run(["sys-consequence", fixtures("span.sys"), "--out", str(out_file)])
    assert code == 0, err
    code, out, _ = run(["entails", str(out_file), "--node", "refl_node", "--sentence", SYM])
    assert code == 0 and "holds: true" in out
    code, out, _ = run(["entails", str(out_file), "--node", "refl_node", "--sentence", ANTISYM])
    assert code == 1 and "counter-model: carrier 2" in out


def test_entails_on_raw_span_gives_first_counter_model(fixtures):
    code, out, _ = run(["entails", fixtures("span.sys"), "--node", "refl_node", "--sentence", SYM])
    assert code == 1
    assert "counter-model: carrier 2; R=[(0, 0), (0, 1), (1, 1)]" in out


def test_validate_community(fixtures):
    code, out, _ = run(["validate", fixtures("community.sys")])
    assert code == 0
    assert "status: ok" in out and "edges verified: 11" in out


def test_order(fixtures, tmp_path):
    closed = tmp_path / "closed.sys"
    run(["sys-consequence", fixtures("span.sys"), "--out", str(closed)])
    assert run(["order", fixtures("span.sys"), "--against", str(closed)])[0] == 0
    raw = json.loads(closed.read_text())
    raw["nodes"]["refl_node"]["theory"].append(ANTISYM)
    raw["nodes"]["preorder_node"]["theory"].append(ANTISYM)
    raw["nodes"]["refsym_node"]["theory"].append(ANTISYM)
    stronger = tmp_path / "stronger.sys"
    stronger.write_text(json.dumps(raw))
    code, out, _ = run(["order", fixtures("span.sys"), "--against", str(stronger)])
    assert code == 1 and "system entails: false" in out


def test_sound_flow(fixtures, tmp_path):
    code, out, _ = run(["sys-consequence", fixtures("span_semantic.sys"), "--sound"])
    assert code == 0 and "flow: sound" in out
    assert run(["sys-consequence", fixtures("span.sys"), "--sound"])[0] == 2
    raw = json.loads(open(fixtures("discrete.sys")).read())
    raw["nodes"]["left"]["theory"] = ["|- a"]
    unsound = tmp_path / "unsound.sys"
    unsound.write_text(json.dumps(raw))
    code, out, _ = run(["sys-consequence", str(unsound), "--sound"])
    assert code == 1 and "unsound nodes:" in out and "left" in out


@pytest.mark.parametrize("argv", [
    ["validate"],
    ["validate", "/nonexistent.sys"],
    ["entails", "span"],
    ["bogus", "x"],
    ["validate", "x", "--bound", "0"],
])
def test_input_errors_exit_2(fixtures, argv):
    argv = [fixtures("span.sys") if a == "span" else a for a in argv]
    code, out, err = run(argv)
    assert code == 2
    assert err


def test_broken_fixture_exit_2(fixtures):
    code, _, err = run(["validate", fixtures("broken_infomorphism.sys")])
    assert code == 2 and "instance 'x2', type 'a'" in err


def test_unknown_node(fixtures):
    code, _, err = run(["entails", fixtures("span.sys"), "--node", "nope", "--sentence", SYM])
    assert code == 2 and "unknown node" in err


def test_bound_flag_is_reported(fixtures):
    code, out, _ = run(["consequence", fixtures("span.sys"), "--bound", "2", "--node", "refl_node"])
    assert code == 0 and "bound: 2" in out


def test_timing_only_on_request(fixtures):
    assert "elapsed" not in run(["validate", fixtures("discrete.sys")])[1]
    assert "elapsed seconds" in run(["validate", fixtures("discrete.sys"), "--timing"])[1]


def test_search_witness_reports(tmp_path):
    out_file = tmp_path / "w.sys"
    code, out, _ = run(["search-witness", "--seed", "0", "--trials", "200", "--out", str(out_file)])
    assert code == 0
    assert "status: found" in out
    assert json.loads(out_file.read_text())["institution"] == "if"


def test_main_writes_streams(fixtures, capsys):
    assert main(["validate", fixtures("discrete.sys")]) == 0
    assert "status: ok" in capsys.readouterr().out


def test_console_script_installed(fixtures):
    import shutil
    import subprocess

    exe = shutil.which("syscons")
    assert exe is not None
    proc = subprocess.run([exe, "validate", fixtures("discrete.sys")], capture_output=True, text=True)
    assert proc.returncode == 0 and "status: ok" in proc.stdout

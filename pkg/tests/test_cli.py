from pathlib import Path

import pytest

from apa_minsky.cli import main

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"
TRANSFER = str(PROGRAMS / "transfer.mm")
LOOP = str(PROGRAMS / "loop.mm")
HALTED = str(PROGRAMS / "halted.mm")


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_transfer(capsys):
    code, out, _ = call(capsys, "run", TRANSFER, "--n1", "0", "--n2", "3")
    assert code == 0
    lines = [line for line in out.splitlines() if line.strip()[:1].isdigit()]
    assert len(lines) == 8
    assert "(qf,3,0)" in lines[-1]


def test_run_loop_exhausts(capsys):
    code, out, _ = call(capsys, "run", LOOP, "--max-steps", "10")
    assert code == 2 and "budget-exhausted" in out


def test_malformed_program(tmp_path, capsys):
    bad = tmp_path / "bad.mm"
    bad.write_text("states q0 qf\ninit q0\nhalt qf\nq0 frobnicate\n")
    code, _, err = call(capsys, "run", str(bad))
    assert code == 1 and "line 4" in err


def test_invalid_machine_and_bad_option(tmp_path, capsys):
    bad = tmp_path / "bad.mm"
    bad.write_text("states q0 q1 qf\ninit q0\nhalt qf\nq0 inc 1 -> qf\n")
    code, _, err = call(capsys, "check", str(bad))
    assert code == 1 and "q1" in err
    with pytest.raises(SystemExit) as exc:
        main(["run", TRANSFER, "--n1", "-1"])
    assert exc.value.code == 1


def test_check_transfer(capsys):
    code, out, _ = call(capsys, "check", TRANSFER, "--n2", "3")
    assert code == 0
    assert out.strip() == "confirmed, k=7, apa=14"


def test_check_loop_unknown(capsys):
    code, out, _ = call(capsys, "check", LOOP, "--max-steps", "20")
    assert code == 2 and out.startswith("unknown")


def test_check_keyvalue_is_stable(capsys):
    first = call(capsys, "check", TRANSFER, "--n2", "3", "--format", "keyvalue")
    second = call(capsys, "check", TRANSFER, "--n2", "3", "--format", "keyvalue")
    assert first == second
    assert "verdict=confirmed\nk=7\napa=14\n" in first[1]


def test_encode_listing(capsys):
    code, out, _ = call(capsys, "encode", TRANSFER, "--bound", "0")
    assert code == 0
    sections = {}
    current = None
    for line in out.splitlines():
        if line.startswith("# family"):
            current = int(line.split()[-1])
            sections[current] = []
        elif current and line.startswith("convert"):
            sections[current].append(line)
    assert len(sections[1]) == 2
    assert sections[6] and not sections[3] and not sections[5]


def test_encode_halted_machine(capsys):
    code, out, _ = call(capsys, "encode", HALTED, "--n1", "2")
    init = [line for line in out.splitlines() if line.startswith("init")]
    assert init == ["init c1.2 c2.0 q.q0"]


def test_encode_output_parses_as_framework(tmp_path, capsys):
    _, out, _ = call(capsys, "encode", TRANSFER, "--bound", "1")
    path = tmp_path / "enc.apa"
    path.write_text(out)
    code, out, _ = call(capsys, "semantics", str(path))
    assert code == 0 and "admissible:" in out


def test_simulate_halted_machine(capsys, tmp_path):
    fig = tmp_path / "trace.png"
    code, out, _ = call(capsys, "simulate", HALTED, "--figure", str(fig))
    assert code == 0 and "0 machine steps, 0 APA transitions" in out
    assert fig.stat().st_size > 0


def test_simulate_keyvalue(capsys):
    code, out, _ = call(capsys, "simulate", TRANSFER, "--n2", "2", "--format", "keyvalue")
    kv = dict(line.split("=", 1) for line in out.splitlines())
    assert code == 0
    assert kv["minsky_steps"] == "5" and kv["apa_transitions"] == "10"


def test_audit_outputs(capsys, tmp_path):
    fig = tmp_path / "audit.png"
    code, out, _ = call(capsys, "audit", TRANSFER, "--n2", "1", "--depth", "3", "--figure", str(fig))
    assert code == 0 and "config" in out and "mid" in out and out.strip().endswith("ok")
    assert fig.stat().st_size > 0
    code, out, _ = call(capsys, "audit", TRANSFER, "--n2", "1", "--depth", "3", "--format", "keyvalue")
    kv = dict(line.split("=", 1) for line in out.splitlines())
    assert kv["verdict"] == "ok"
    assert int(kv["config"]) + int(kv["mid"]) + int(kv["foreign"]) == int(kv["states"])
    code, out, _ = call(capsys, "audit", TRANSFER, "--depth", "2", "--format", "dot")
    assert out.startswith("digraph") and "palegreen" in out and "lightblue" in out


def write(tmp_path, text):
    p = tmp_path / "fw.apa"
    p.write_text(text)
    return str(p)


def test_semantics_examples(tmp_path, capsys):
    code, out, _ = call(capsys, "semantics", write(tmp_path, "init\n"))
    assert code == 0 and "admissible: ∅" in out
    code, out, _ = call(capsys, "semantics", write(tmp_path, "arg a b\nattack a b\ninit a b\n"))
    assert "admissible: ∅, {a}" in out
    code, out, _ = call(capsys, "semantics", write(tmp_path, "arg a b\ninit a b\n"))
    assert "complete: {a, b}" in out
    code, out, _ = call(capsys, "semantics", write(tmp_path, "arg a b\nattack a b\ninit a b\n"), "--state", "a")
    assert "state: {a}" in out and "complete: {a}" in out


def test_semantics_size_exceeded(tmp_path, capsys):
    code, _, err = call(capsys, "semantics", write(tmp_path, "arg a b c\ninit a b c\n"), "--bound", "2")
    assert code == 3 and "bound" in err


def test_semantics_unknown_state_argument(tmp_path, capsys):
    code, _, err = call(capsys, "semantics", write(tmp_path, "arg a\ninit a\n"), "--state", "zz")
    assert code == 1


def test_dot_command(tmp_path, capsys):
    code, out, _ = call(capsys, "dot", write(tmp_path, "arg a b\ninduce a -> b\ninit a\n"), "--framework")
    assert code == 0 and '"{a}"' in out and '"{a, b}"' in out
    code, out, _ = call(capsys, "dot", HALTED)
    assert out.count("label=") == 1

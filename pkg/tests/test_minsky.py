import random

import pytest

from apa_minsky.minsky import (
    Configuration,
    MinskyMachine,
    ProgramError,
    dump_program,
    halts,
    parse_program,
    run,
    step,
    validate,
)

from generators import HALTED, LOOP, TRANSFER, random_deterministic_machine, random_machine

TRANSFER_TEXT = """\
# move counter 2 into counter 1
states q0 q1 qf
init q0
halt qf
q0 test 2 zero -> qf dec -> q1
q1 inc 1 -> q0
"""


def machine(*specs):
    return MinskyMachine.build(["q1", "q2", "q3"], specs, "q1", "q3")


def test_validate():
    assert validate(HALTED) == []
    assert validate(TRANSFER) == []
    lacking = MinskyMachine.build(["q0", "q1", "qf"], [("q0", 1, "qf", None)], "q0", "qf")
    assert any("'q1' has no instruction" in p for p in validate(lacking))
    from_halt = MinskyMachine.build(["q0", "qf"], [("q0", 1, "qf", None), ("qf", 1, "q0", None)], "q0", "qf")
    assert any("halting state" in p for p in validate(from_halt))
    undeclared = MinskyMachine.build(["q0", "qf"], [("q0", 1, "zz", None)], "q0", "qf")
    assert any("'zz'" in p for p in validate(undeclared))


def test_step_cases():
    m = machine(("q1", 1, "q2", None), ("q2", 1, "q2", "q3"))
    assert step(m, Configuration("q1", 5, 2)) == {("q2", 6, 2)}
    m = machine(("q1", 1, "q2", "q3"), ("q2", 1, "q3", None))
    assert step(m, Configuration("q1", 3, 2)) == {("q3", 2, 2)}
    assert step(m, Configuration("q1", 0, 2)) == {("q2", 0, 2)}
    m = machine(("q1", 2, "q2", None), ("q2", 2, "q3", "q1"))
    assert step(m, Configuration("q1", 5, 2)) == {("q2", 5, 3)}
    assert step(m, Configuration("q2", 5, 3)) == {("q1", 5, 2)}
    assert step(m, Configuration("q2", 5, 0)) == {("q3", 5, 0)}
    assert step(m, Configuration("q3", 1, 1)) == frozenset()


def test_run_halted_start():
    t = run(HALTED, Configuration("q0", 4, 1), 10)
    assert t.configs == [("q0", 4, 1)] and t.halted and t.steps == 0


def test_transfer_machine_halts_in_seven_steps():
    m = parse_program(TRANSFER_TEXT)
    t = run(m, Configuration("q0", 0, 3))
    assert t.halted and t.steps == 7
    assert t.configs[-1] == ("qf", 3, 0)
    assert halts(m, Configuration("q0", 0, 3)) == (7, ("qf", 3, 0))


@pytest.mark.parametrize("n2", range(6))
def test_transfer_step_count(n2):
    assert halts(TRANSFER, Configuration("q0", 0, n2)).steps == 2 * n2 + 1


def test_loop_machine_exhausts_budget():
    t = run(LOOP, Configuration("q0", 0, 0), 10)
    assert t.status == "budget-exhausted" and t.steps == 10
    assert halts(LOOP, Configuration("q0", 0, 0), 100) is None
    assert run(LOOP, Configuration("q0", 0, 0), 10, "all").status == "budget-exhausted"


def test_all_strategy_finds_shortest_halting_path():
    m = MinskyMachine.build(
        ["q0", "a", "qf"],
        [("q0", 1, "a", None), ("a", 1, "a", None), ("a", 2, "qf", None)],
        "q0", "qf",
    )
    assert run(m, Configuration("q0", 0, 0), 20).status == "budget-exhausted"
    t = run(m, Configuration("q0", 0, 0), 20, "all")
    assert t.halted and t.steps == 2
    assert halts(m, Configuration("q0", 0, 0)).steps == 2


def test_parse_round_trip_and_errors():
    m = parse_program(TRANSFER_TEXT)
    assert parse_program(dump_program(m)) == m
    with pytest.raises(ProgramError, match="line 3"):
        parse_program("states q0 qf\ninit q0\nq0 inc 3 -> qf\nhalt qf\n")
    with pytest.raises(ProgramError, match="line 2"):
        parse_program("states q0\nq0 jump q1\n")


def test_counters_never_negative_and_step_empty_only_at_halt():
    rng = random.Random(11)
    for _ in range(100):
        m = random_machine(rng)
        assert validate(m) == []
        t = run(m, Configuration(m.q0, rng.randint(0, 3), rng.randint(0, 3)), 30)
        for c in t.configs:
            assert c.n1 >= 0 and c.n2 >= 0
            assert (step(m, c) == frozenset()) == (c.q == m.qf)


def test_deterministic_strategies_agree():
    rng = random.Random(5)
    for _ in range(100):
        m = random_deterministic_machine(rng)
        c0 = Configuration(m.q0, rng.randint(0, 3), rng.randint(0, 3))
        first = run(m, c0, 25)
        for c in first.configs:
            assert len(step(m, c)) <= 1
        if first.halted:
            assert run(m, c0, 25, "all").configs == first.configs


def test_zero_branch_leaves_counters():
    m = machine(("q1", 2, "q2", "q3"), ("q2", 1, "q3", None))
    (nxt,) = step(m, Configuration("q1", 4, 0))
    assert (nxt.n1, nxt.n2) == (4, 0)

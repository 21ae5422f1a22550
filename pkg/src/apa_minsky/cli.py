"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 budget exhausted, 3 size bound
exceeded, 4 simulation falsified.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import core, minsky, semantics
from .encoder import InvalidMachine, encode, rule_instances
from .report import audit_pairs, audit_to_dot, graph_to_dot, keyvalue, plot_audit, plot_trace
from .simulate import MissingTriple, NotApplicable, SimulationFailure, audit, halting_equivalence, simulate

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_SIZE, EXIT_FALSIFIED = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _load_machine(path: str) -> minsky.MinskyMachine:
    try:
        m = minsky.parse_program(Path(path).read_text())
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except minsky.ProgramError as exc:
        raise InputError(f"{path}: {exc}") from exc
    problems = minsky.validate(m)
    if problems:
        raise InputError(f"{path}: invalid machine:\n  " + "\n  ".join(problems))
    return m


def _load_framework(path: str) -> core.Framework:
    try:
        return core.parse_framework(Path(path).read_text())
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _start(m, args) -> minsky.Configuration:
    return minsky.Configuration(m.q0, args.n1, args.n2)


def cmd_run(args) -> int:
    m = _load_machine(args.program)
    trace = minsky.run(m, _start(m, args), args.max_steps, args.strategy)
    if args.format == "keyvalue":
        pairs = [("status", trace.status), ("steps", trace.steps), ("final", trace.configs[-1])]
        pairs += [(f"config.{k}", c) for k, c in enumerate(trace.configs)]
        sys.stdout.write(keyvalue(pairs))
    else:
        for k, c in enumerate(trace.configs):
            via = f"  [{trace.instructions[k - 1]}]" if k else ""
            print(f"{k:>5} {c}{via}")
        print(f"{trace.status} after {trace.steps} steps")
    return EXIT_OK if trace.halted else EXIT_BUDGET


def cmd_encode(args) -> int:
    m = _load_machine(args.program)
    ef = encode(m, args.n1, args.n2)
    families = rule_instances(ef, args.bound)
    names = set(ef.framework.initial)
    for triples in families.values():
        for t in triples:
            names.update((t.source, t.target, t.result))
    out = [f"# machine: {len(m.states)} states, {len(m.instructions)} instructions"]
    out += [f"# I.{x.index} = {x}" for x in m.instructions]
    out.append(f"# counter arguments materialized up to {args.bound}")
    out += [f"arg {a}" for a in sorted(names)]
    out.append(" ".join(["init"] + [str(a) for a in sorted(ef.framework.initial)]))
    for fam in range(1, 7):
        out.append(f"# family {fam}")
        out += [f"convert {t}" for t in core.sorted_triples(families[fam])]
    print("\n".join(out))
    return EXIT_OK


def cmd_simulate(args) -> int:
    m = _load_machine(args.program)
    ef = encode(m, args.n1, args.n2)
    gt = simulate(ef, _start(m, args), args.max_steps, args.strategy, check_successors=True)
    if args.figure:
        plot_trace(gt, args.figure)
    if args.format == "keyvalue":
        pairs = [
            ("status", gt.status),
            ("minsky_steps", len(gt.minsky_trace) - 1),
            ("apa_transitions", gt.transitions),
            ("final", gt.minsky_trace[-1]),
        ]
        pairs += [(f"apa.{k}", core.state_label(s)) for k, s in enumerate(gt.apa_trace)]
        sys.stdout.write(keyvalue(pairs))
    else:
        print(f"{gt.minsky_trace[0]}  {core.state_label(gt.apa_trace[0])}")
        for k, g in enumerate(gt.pairing, start=1):
            print(f"  [{g.instruction}]")
            print(f"    fire {core.gamma_label(g.first)}")
            print(f"      -> {core.state_label(g.mid)}")
            print(f"    fire {core.gamma_label(g.second)}")
            print(f"{gt.minsky_trace[k]}  {core.state_label(g.next)}")
        print(f"{gt.status}: {len(gt.minsky_trace) - 1} machine steps, {gt.transitions} APA transitions")
    return EXIT_OK if gt.status == "halted" else EXIT_BUDGET


def cmd_audit(args) -> int:
    m = _load_machine(args.program)
    ef = encode(m, args.n1, args.n2)
    report = audit(ef, _start(m, args), args.depth, args.state_cap, args.budget)
    if args.figure:
        plot_audit(report, args.figure)
    if args.format == "dot":
        sys.stdout.writelines(audit_to_dot(report))
    elif args.format == "keyvalue":
        sys.stdout.write(keyvalue(audit_pairs(report)))
    else:
        print(f"explored {report.states} states, {report.edges} transitions"
              f" ({'complete' if report.complete else 'bounded'})")
        for name in ("config", "mid", "foreign"):
            print(f"  {name:<8}{report.counts.get(name, 0)}")
        print(f"configurations not reached by the machine within {args.depth} steps: {len(report.unmatched)}")
        for c in report.unmatched[:20]:
            print(f"  {c}")
        if report.overflows:
            print(f"states with too many enabled persuasions: {len(report.overflows)}")
        for s in report.halting_violations:
            print(f"HALTING STATE HAS SUCCESSORS: {core.state_label(s)}")
        print("ok" if report.ok else "falsified")
    return EXIT_OK if report.ok else EXIT_FALSIFIED


def cmd_check(args) -> int:
    m = _load_machine(args.program)
    ef = encode(m, args.n1, args.n2)
    verdict = halting_equivalence(ef, _start(m, args), args.max_steps, check_successors=True)
    if args.format == "keyvalue":
        sys.stdout.write(keyvalue([
            ("verdict", verdict.status),
            ("k", verdict.steps if verdict.steps is not None else ""),
            ("apa", verdict.apa_transitions if verdict.apa_transitions is not None else ""),
            ("final", verdict.final or ""),
        ]))
    elif verdict.status == "confirmed":
        print(f"confirmed, k={verdict.steps}, apa={verdict.apa_transitions}")
    else:
        print(f"unknown, no halting run within {args.max_steps} steps")
    return EXIT_OK if verdict.status == "confirmed" else EXIT_BUDGET


def _set_label(S) -> str:
    return "∅" if not S else core.state_label(S)


def cmd_semantics(args) -> int:
    fw = _load_framework(args.framework)
    if args.state is None:
        state = fw.initial
    else:
        state = frozenset(core.Argument.opaque(n) for n in args.state)
        unknown = sorted(str(a) for a in state if not fw.universe(a))
        if unknown:
            raise InputError(f"unknown arguments in --state: {', '.join(unknown)}")
    try:
        adm = semantics.enumerate_admissible(fw, state, args.bound)
        comp = semantics.enumerate_complete(fw, state, args.bound)
    except semantics.SizeExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    if args.format == "keyvalue":
        sys.stdout.write(keyvalue([
            ("state", core.state_label(state)),
            ("admissible", ";".join(core.state_label(S) for S in adm)),
            ("complete", ";".join(core.state_label(S) for S in comp)),
        ]))
    else:
        print(f"state: {core.state_label(state)}")
        print("admissible: " + ", ".join(_set_label(S) for S in adm))
        print("complete: " + (", ".join(_set_label(S) for S in comp) or "(none)"))
    return EXIT_OK


def cmd_dot(args) -> int:
    if args.framework:
        fw = _load_framework(args.input)
    else:
        m = _load_machine(args.input)
        fw = encode(m, args.n1, args.n2).framework
    g = core.reachable(fw, (), max_states=args.state_cap, max_depth=args.depth, budget=args.budget)
    sys.stdout.writelines(graph_to_dot(g))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="apa-minsky",
        description="Minsky machines, their APA encoding, and simulation checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def machine_cmd(name, func, help, formats=("text", "keyvalue")):
        p = sub.add_parser(name, help=help)
        p.add_argument("program", help="Minsky program file")
        p.add_argument("--n1", type=_natural, default=0, help="initial value of counter 1")
        p.add_argument("--n2", type=_natural, default=0, help="initial value of counter 2")
        p.add_argument("--format", choices=formats, default="text")
        p.set_defaults(func=func)
        return p

    p = machine_cmd("run", cmd_run, "run the machine")
    p.add_argument("--max-steps", type=_positive, default=10_000)
    p.add_argument("--strategy", choices=("first", "all"), default="first")

    p = machine_cmd("encode", cmd_encode, "list the APA encoding", formats=("text",))
    p.add_argument("--bound", type=_natural, default=3, help="largest counter value to materialize")

    p = machine_cmd("simulate", cmd_simulate, "replay a run as APA transitions")
    p.add_argument("--max-steps", type=_positive, default=10_000)
    p.add_argument("--strategy", choices=("first", "all"), default="first")
    p.add_argument("--figure", help="write a counter plot to this file")

    p = machine_cmd("audit", cmd_audit, "explore and classify all APA states", formats=("text", "keyvalue", "dot"))
    p.add_argument("--depth", type=_positive, default=64)
    p.add_argument("--state-cap", type=_positive, default=100_000)
    p.add_argument("--budget", type=_positive, default=core.DEFAULT_SUBSET_BUDGET)
    p.add_argument("--figure", help="write a states-per-depth plot to this file")

    p = machine_cmd("check", cmd_check, "check halting is matched by the APA run")
    p.add_argument("--max-steps", type=_positive, default=10_000)

    p = sub.add_parser("semantics", help="enumerate admissible and complete sets")
    p.add_argument("framework", help="APA framework file")
    p.add_argument("--state", nargs="*", help="visible arguments (default: the init line)")
    p.add_argument("--bound", type=_positive, default=semantics.DEFAULT_SIZE_BOUND)
    p.add_argument("--format", choices=("text", "keyvalue"), default="text")
    p.set_defaults(func=cmd_semantics)

    p = sub.add_parser("dot", help="export the reachable state graph as DOT")
    p.add_argument("input", help="Minsky program, or framework file with --framework")
    p.add_argument("--framework", action="store_true", help="input is an APA framework file")
    p.add_argument("--n1", type=_natural, default=0)
    p.add_argument("--n2", type=_natural, default=0)
    p.add_argument("--depth", type=_positive, default=64)
    p.add_argument("--state-cap", type=_positive, default=100_000)
    p.add_argument("--budget", type=_positive, default=core.DEFAULT_SUBSET_BUDGET)
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidMachine) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SimulationFailure, MissingTriple, NotApplicable) as exc:
        print(f"FALSIFIED: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED


if __name__ == "__main__":
    sys.exit(main())

"""Text, key=value, DOT and figure output for graphs, traces and audits."""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Optional

from .core import StateGraph, gamma_label, state_label

CLASS_COLORS = {"config": "palegreen", "mid": "lightblue", "foreign": "lightsalmon"}


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def graph_to_dot(g: StateGraph, color: Optional[Callable[[frozenset], str]] = None) -> Iterator[str]:
    """Yield the lines of a DOT digraph for an explored state graph.

    Nodes are labelled with their sorted visible sets and edges with the
    persuasions that fired.  ``color`` maps a state to a fill colour.
    """
    ids = {s: f"s{k}" for k, s in enumerate(g.depth)}
    yield "digraph apa {\n"
    yield "  node [shape=box, style=filled, fillcolor=white, fontname=monospace];\n"
    for s, ident in ids.items():
        attrs = [f"label={_quote(state_label(s))}"]
        if s == g.initial:
            attrs.append("peripheries=2")
        if color is not None:
            attrs.append(f"fillcolor={_quote(color(s))}")
        if s in g.errors:
            attrs.append('color="red"')
        yield f"  {ident} [{', '.join(attrs)}];\n"
    for a, gamma, b in g.edges:
        yield f"  {ids[a]} -> {ids[b]} [label={_quote(gamma_label(gamma))}];\n"
    yield "}\n"


def audit_to_dot(report) -> Iterator[str]:
    from .simulate import class_name
    return graph_to_dot(report.graph, lambda s: CLASS_COLORS[class_name(report.classes[s])])


def keyvalue(pairs: Iterable[tuple[str, object]]) -> str:
    return "".join(f"{k}={v}\n" for k, v in pairs)


def audit_pairs(report) -> list[tuple[str, object]]:
    pairs = [
        ("states", report.states),
        ("edges", report.edges),
        ("complete", str(report.complete).lower()),
        ("config", report.counts.get("config", 0)),
        ("mid", report.counts.get("mid", 0)),
        ("foreign", report.counts.get("foreign", 0)),
        ("unmatched", len(report.unmatched)),
        ("out_of_range", len(report.out_of_range)),
        ("overflows", len(report.overflows)),
        ("halting_violations", len(report.halting_violations)),
        ("verdict", "ok" if report.ok else "falsified"),
    ]
    pairs += [(f"unmatched.{k}", c) for k, c in enumerate(report.unmatched)]
    pairs += [(f"foreign.{k}", state_label(s)) for k, (s, _) in enumerate(report.foreign)]
    return pairs


def plot_audit(report, path: str) -> None:
    """Stacked bar chart of explored states per BFS depth, split by class."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    depths = sorted(report.by_depth)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    bottom = [0] * len(depths)
    for name in ("config", "mid", "foreign"):
        heights = [report.by_depth[d].get(name, 0) for d in depths]
        ax.bar(depths, heights, bottom=bottom, label=name, color=CLASS_COLORS[name], edgecolor="grey")
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xlabel("transitions from initial state")
    ax.set_ylabel("states")
    ax.set_title("APA states by depth")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_trace(gt, path: str) -> None:
    """Counter values along a guided simulation, one point per machine step."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    steps = range(len(gt.minsky_trace))
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.step(steps, [c.n1 for c in gt.minsky_trace], where="post", label="counter 1")
    ax.step(steps, [c.n2 for c in gt.minsky_trace], where="post", label="counter 2")
    ax.set_xlabel("machine step (2 APA transitions each)")
    ax.set_ylabel("value")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)

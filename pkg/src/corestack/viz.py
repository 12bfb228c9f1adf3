"""Figure rendering for trace and equivalence reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

from collections import Counter

import matplotlib.pyplot as plt

from .equiv import EquivVerdict
from .machine import Completed


def render_trace_figure(records, outcome, path: str) -> None:
    """Stack depth over the run plus rule frequencies, written to a file."""
    depths = [len(r.config.stack) for r in records]
    if isinstance(outcome, Completed):
        depths.append(0)
    counts = Counter(r.rule for r in records)

    fig, (ax_depth, ax_rules) = plt.subplots(
        2, 1, figsize=(8, 6), gridspec_kw={"height_ratios": [2, 3]}
    )
    ax_depth.step(range(len(depths)), depths, where="post")
    ax_depth.set_xlabel("step")
    ax_depth.set_ylabel("stack depth")
    ax_depth.set_title(
        f"evaluation trace ({len(records)} steps, "
        f"{'completed' if isinstance(outcome, Completed) else type(outcome).__name__})"
    )

    rules = sorted(counts, key=counts.get, reverse=True)
    ax_rules.barh(range(len(rules)), [counts[r] for r in rules])
    ax_rules.set_yticks(range(len(rules)))
    ax_rules.set_yticklabels(rules, fontsize=7)
    ax_rules.invert_yaxis()
    ax_rules.set_xlabel("applications")
    ax_rules.set_title("rule frequency")

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_equiv_figure(verdict: EquivVerdict, path: str) -> None:
    """Trial outcome tallies and the verdict, written to a file."""
    inequivalent = 1 if verdict.inequivalent else 0
    passes = verdict.trials - verdict.unknown_trials - inequivalent
    labels = ["pass", "unknown", "inequivalent"]
    values = [passes, verdict.unknown_trials, inequivalent]
    colors = ["#4c9f70", "#d9a441", "#c23b22"]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(labels, values, color=colors)
    for idx, value in enumerate(values):
        ax.text(idx, value, str(value), ha="center", va="bottom")
    ax.set_ylabel("trials")
    ax.set_title(
        f"verdict: {verdict.kind} "
        f"({verdict.trials} trials, seed {verdict.seed}, fuel {verdict.fuel})"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

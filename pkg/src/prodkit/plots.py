"""Figure rendering for CLI reports.

Figures go to files next to the textual output; stdout stays text-only so
reports remain byte-identical across runs.
"""

from __future__ import annotations

from typing import Sequence

from .congruences import Congruence, con_leq


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_congruence_lattice(cons: Sequence[Congruence], path: str) -> None:
    """Hasse diagram of a congruence list, nodes labelled by list index."""
    plt = _pyplot()
    m = len(cons)
    below = [[i != j and con_leq(cons[i], cons[j]) for j in range(m)] for i in range(m)]
    covers = [
        (i, j)
        for i in range(m)
        for j in range(m)
        if below[i][j] and not any(below[i][k] and below[k][j] for k in range(m))
    ]
    # layer by number of classes (finer congruences lower)
    levels = sorted({c.num_classes for c in cons}, reverse=True)
    level_of = {nc: y for y, nc in enumerate(levels)}
    slots: dict[int, int] = {}
    pos = {}
    for i, c in enumerate(cons):
        y = level_of[c.num_classes]
        x = slots.get(y, 0)
        slots[y] = x + 1
        pos[i] = (x, y)
    width = max(x for x, _ in pos.values()) + 1
    fig, ax = plt.subplots(figsize=(max(4, width * 1.2), max(3, len(levels) * 1.0)))
    for i, j in covers:
        ax.plot(
            [pos[i][0], pos[j][0]], [pos[i][1], pos[j][1]],
            color="gray", linewidth=1, zorder=1,
        )
    for i, (x, y) in pos.items():
        ax.scatter([x], [y], s=420, color="#4878d0", zorder=2)
        ax.annotate(
            str(i), (x, y), color="white", ha="center", va="center", zorder=3
        )
    ax.set_title(f"congruence lattice ({m} congruences)")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_closure_growth(sizes: Sequence[int], path: str, title: str = "closure growth") -> None:
    """Closure size per round as a simple line plot."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(range(len(sizes)), sizes, marker="o")
    ax.set_xlabel("round")
    ax.set_ylabel("elements")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

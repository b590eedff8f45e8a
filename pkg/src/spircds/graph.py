"""Colored bipartite graphs of query pairs.

Left nodes are database 1's queries, right nodes database 2's, and an edge
(x, y) colored k says the pair (x, y) retrieves message k. Colors above K
are dummy messages: pairs no strategy uses, kept so that a graph built from
a modular construction is complete.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx

from .scheme import Pair, Scheme

Edge = tuple[str, str, int]

PALETTE = ("red", "gold", "green", "blue", "purple", "orange", "cyan", "magenta", "brown", "pink")


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ColoredBipartiteGraph:
    left: tuple[str, ...]
    right: tuple[str, ...]
    edges: frozenset[Edge]
    K: int
    name: str = "graph"

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "edges", frozenset(self.edges))
        ls, rs = set(self.left), set(self.right)
        if len(ls) != len(self.left) or len(rs) != len(self.right):
            raise GraphError("duplicate node label")
        seen: dict[Pair, int] = {}
        for x, y, color in self.edges:
            if x not in ls or y not in rs:
                raise GraphError(f"edge {x}-{y} leaves the node sets")
            if (x, y) in seen:
                raise GraphError(f"ambiguous edge color at {x}:{y}: {seen[x, y]} and {color}")
            if color < 1:
                raise GraphError(f"invalid color {color}")
            seen[x, y] = color
        used = {c for _, _, c in self.edges}
        unused = [k for k in range(1, self.K + 1) if k not in used]
        if self.edges and unused:
            raise GraphError(f"real color {unused[0]} has no edge")

    def real_edges(self) -> list[Edge]:
        return [e for e in self.edges if e[2] <= self.K]

    def dummy_edges(self) -> list[Edge]:
        return [e for e in self.edges if e[2] > self.K]

    def color_counts(self) -> Counter:
        return Counter(c for _, _, c in self.edges)

    def sorted_edges(self) -> list[Edge]:
        li = {l: i for i, l in enumerate(self.left)}
        ri = {r: i for i, r in enumerate(self.right)}
        return sorted(self.edges, key=lambda e: (li[e[0]], ri[e[1]]))

    def recolored(self, x: str, y: str, color: int) -> "ColoredBipartiteGraph":
        old = [e for e in self.edges if e[:2] == (x, y)]
        if not old:
            raise GraphError(f"no edge {x}:{y}")
        return ColoredBipartiteGraph(
            self.left, self.right, (self.edges - set(old)) | {(x, y, color)}, self.K, self.name
        )


def graph_from_scheme(
    s: Scheme, dummy: Mapping[Pair, int] | None = None
) -> ColoredBipartiteGraph:
    """One edge per strategy pair, colored by its message index.

    ``dummy`` optionally colors pairs the strategy never uses (for instance
    the dummy pairs of :func:`spircds.cdms.modular_conditions`).
    """
    colors: dict[Pair, int] = {}
    for k, pairs in enumerate(s.strategy.pairs, start=1):
        for p in pairs:
            if p in colors and colors[p] != k:
                raise GraphError(f"ambiguous edge color at {p[0]}:{p[1]}: {colors[p]} and {k}")
            colors[p] = k
    for p, j in (dummy or {}).items():
        if p in colors:
            raise GraphError(f"dummy pair {p[0]}:{p[1]} is used by index {colors[p]}")
        if j <= s.K:
            raise GraphError(f"dummy color {j} must exceed K={s.K}")
        colors[p] = j
    return ColoredBipartiteGraph(
        s.strategy.space_x,
        s.strategy.space_y,
        frozenset((x, y, c) for (x, y), c in colors.items()),
        s.K,
        s.name,
    )


@dataclass
class RegularityReport:
    """Per-node real-color counts that are not all equal."""

    offending: dict[str, dict[int, int]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.offending

    def __bool__(self) -> bool:
        return self.passed


def validate_regularity(g: ColoredBipartiteGraph) -> RegularityReport:
    """At every node each real color must be incident equally often."""
    counts: dict[str, Counter] = {n: Counter() for n in g.left + g.right}
    for x, y, c in g.real_edges():
        counts[x][c] += 1
        counts[y][c] += 1
    report = RegularityReport()
    for node in g.left + g.right:
        per_color = {k: counts[node][k] for k in range(1, g.K + 1)}
        if len(set(per_color.values())) > 1:
            report.offending[node] = per_color
    return report


def to_networkx(g: ColoredBipartiteGraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(g.left, side=0)
    G.add_nodes_from(g.right, side=1)
    for x, y, c in g.edges:
        G.add_edge(x, y, color=c)
    return G


def color_isomorphic(g1: ColoredBipartiteGraph, g2: ColoredBipartiteGraph) -> bool:
    """Isomorphic by a side- and color-preserving node bijection."""
    if g1.K != g2.K or g1.color_counts() != g2.color_counts():
        return False
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        to_networkx(g1),
        to_networkx(g2),
        node_match=lambda a, b: a["side"] == b["side"],
        edge_match=lambda a, b: a["color"] == b["color"],
    )
    return matcher.is_isomorphic()


def _color_name(c: int, K: int) -> str:
    return PALETTE[(c - 1) % len(PALETTE)] if c <= K else "gray"


def export_dot(g: ColoredBipartiteGraph) -> str:
    """Graphviz text; nodes and edges in label order so output is stable."""
    lines = [f'graph "{g.name}" {{', "  rankdir=LR;"]
    if g.left:
        lines.append("  { rank=same; " + " ".join(f'"{n}";' for n in g.left) + " }")
    if g.right:
        lines.append("  { rank=same; " + " ".join(f'"{n}";' for n in g.right) + " }")
    for x, y, c in g.sorted_edges():
        style = "" if c <= g.K else ", style=dashed"
        kind = "W" if c <= g.K else "dummy "
        lines.append(f'  "{x}" -- "{y}" [color="{_color_name(c, g.K)}", label="{kind}{c}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"

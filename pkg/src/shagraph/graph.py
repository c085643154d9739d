"""Reduction graphs, spanning-tree gauges and free fundamental group data.

The reduction graph is bipartite: one vertex per marked point, one per
component, and one edge per branch.  Every edge is oriented from its point
vertex (left) to its component vertex (right); that convention is used by
the cover normalization and the double-coset action alike.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass

import networkx as nx

from .errors import ModelError
from .model import ClosedFiberModel, require_valid


@dataclass(frozen=True)
class ReductionGraph:
    point_vertices: tuple[str, ...]
    component_vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]  # (point, component, branch index)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.point_vertices + self.component_vertices

    @property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def oriented_edges(self) -> list[tuple[int, int]]:
        """Edges as ``(left, right)`` vertex indices, in edge order."""
        idx = self.vertex_index
        return [(idx[p], idx[c]) for p, c, _ in self.edges]

    def fingerprint(self) -> str:
        payload = json.dumps([list(self.point_vertices), list(self.component_vertices), [list(e) for e in self.edges]])
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def to_json(self) -> dict:
        return {
            "point_vertices": list(self.point_vertices),
            "component_vertices": list(self.component_vertices),
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReductionGraph":
        return cls(
            tuple(data["point_vertices"]),
            tuple(data["component_vertices"]),
            tuple((p, c, int(k)) for p, c, k in data["edges"]),
        )


@dataclass(frozen=True)
class GaugeData:
    """Breadth-first spanning tree and the cotree edges generating pi_1.

    ``parent_edge`` maps each non-root vertex index to the tree edge through
    which it was first reached.
    """

    root: str
    tree_edges: tuple[int, ...]
    cotree_edges: tuple[int, ...]
    order: tuple[int, ...]  # vertex indices in BFS order
    parent_edge: dict

    @property
    def rank(self) -> int:
        return len(self.cotree_edges)


def from_model(model: ClosedFiberModel) -> ReductionGraph:
    require_valid(model)
    edges = []
    for p in model.points:
        for q, c, b in model.incidences:
            if q == p:
                edges.extend((p, c, k) for k in range(b))
    return ReductionGraph(model.points, model.components, tuple(edges))


def cycle_rank(graph: ReductionGraph) -> int:
    return len(graph.edges) - len(graph.vertices) + 1


def is_tree(graph: ReductionGraph) -> bool:
    return cycle_rank(graph) == 0


def is_bipartite(graph: ReductionGraph) -> bool:
    pts = set(graph.point_vertices)
    comps = set(graph.component_vertices)
    return all(p in pts and c in comps for p, c, _ in graph.edges)


def spanning_gauge(graph: ReductionGraph) -> GaugeData:
    nv = len(graph.vertices)
    incident: list[list[int]] = [[] for _ in range(nv)]
    for e, (l, r) in enumerate(graph.oriented_edges()):
        incident[l].append(e)
        incident[r].append(e)
    oriented = graph.oriented_edges()

    seen = [False] * nv
    seen[0] = True
    queue, order, parent, tree = deque([0]), [0], {}, set()
    while queue:
        v = queue.popleft()
        for e in incident[v]:
            l, r = oriented[e]
            w = r if l == v else l
            if not seen[w]:
                seen[w] = True
                parent[w] = e
                tree.add(e)
                order.append(w)
                queue.append(w)
    if not all(seen):
        raise ModelError("disconnected-graph", "reduction graph is not connected")
    cotree = tuple(e for e in range(len(oriented)) if e not in tree)
    return GaugeData(graph.vertices[0], tuple(sorted(tree)), cotree, tuple(order), parent)


def fundamental_cycle(graph: ReductionGraph, gauge: GaugeData, cotree_edge: int) -> list[tuple[int, int]]:
    """The loop of a free generator as a list of ``(edge, +1|-1)`` steps.

    Starts at the root, walks the tree to the left end of ``cotree_edge``,
    crosses it left to right and walks the tree back.
    """
    oriented = graph.oriented_edges()

    def path_from_root(v):
        steps = []
        while v in gauge.parent_edge:
            e = gauge.parent_edge[v]
            l, r = oriented[e]
            steps.append((e, +1 if v == r else -1))
            v = l if v == r else r
        return steps[::-1]

    l, r = oriented[cotree_edge]
    back = [(e, -s) for e, s in reversed(path_from_root(r))]
    return path_from_root(l) + [(cotree_edge, +1)] + back


def classical_graph(model: ClosedFiberModel) -> tuple[nx.MultiGraph, bool]:
    """Components as vertices, nodes as edges; plus the rank-equality check."""
    require_valid(model)
    g = nx.MultiGraph()
    g.add_nodes_from(model.components)
    by_point = model.branches
    for p in model.points:
        arms = by_point[p]
        if sum(arms.values()) != 2:
            raise ModelError("not-nodal", f"point {p!r} is not an ordinary double point")
        ends = [c for c, b in arms.items() for _ in range(b)]
        g.add_edge(ends[0], ends[1], key=p)
    classical_rank = g.number_of_edges() - g.number_of_nodes() + nx.number_connected_components(g)
    return g, classical_rank == cycle_rank(from_model(model))


def to_dot(graph: ReductionGraph) -> str:
    def q(s):
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = ["graph reduction {"]
    for v in graph.point_vertices:
        lines.append(f"  {q(v)} [shape=circle];")
    for v in graph.component_vertices:
        lines.append(f"  {q(v)} [shape=box];")
    for p, c, k in graph.edges:
        lines.append(f"  {q(p)} -- {q(c)} [label={q(str(k))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

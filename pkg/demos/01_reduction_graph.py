"""Reduction graphs of a few closed-fiber models."""
from pathlib import Path

from shagraph import model, graph

here = Path(__file__).parent / "models"

# a rational curve with one node: one point, two branches on the same component
nodal = model.parse_model((here / "nodal.sg").read_text())
g = graph.from_model(nodal)
print("vertices:", g.vertices)
print("edges:", g.edges)
print("cycle rank:", graph.cycle_rank(g))

# the spanning tree fixes a gauge; cotree edges are the free generators of pi_1
gauge = graph.spanning_gauge(g)
print("root:", gauge.root, "tree:", gauge.tree_edges, "cotree:", gauge.cotree_edges)
for e in gauge.cotree_edges:
    print("loop for edge", e, "->", graph.fundamental_cycle(g, gauge, e))

# the chain is a tree; the loop and theta configurations are not
for name in ["tree", "loop2", "theta"]:
    m = model.parse_model((here / f"{name}.sg").read_text())
    print(f"{name:6s} rank {graph.cycle_rank(graph.from_model(m))}")

# blowing up the node or marking an extra point does not change the rank
for m in (model.blowup(nodal, "Q"), model.refine(nodal, "C")):
    print(model.serialize_model(m).strip().replace("\n", " | "))
    print("  rank", graph.cycle_rank(graph.from_model(m)))

print(graph.to_dot(g))

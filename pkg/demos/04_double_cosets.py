"""Simultaneous factorization and the double-coset space."""
from shagraph import graph, groups, model, mv

nodal = graph.from_model(model.parse_model("component C\npoint Q on C:2"))
C2 = groups.build_group("C2")
system = mv.FactorizationSystem.from_graph(nodal, C2)
print("orbits:", mv.coboundary_orbits(system))
for t in [(0, 0), (0, 1), (1, 0), (1, 1)]:
    print(t, "factorizes" if mv.factorizes(system, t) else "does not factorize")

# with full vertex groups the orbit count equals the obstruction set size
S3 = groups.build_group("S3")
theta = graph.from_model(model.parse_model("component C\npoint Q on C:3"))
print("theta over S3:", mv.FactorizationSystem.from_graph(theta, S3).orbit_count, "orbits")

# shrinking a vertex group splits orbits
H = groups.subgroup(S3, [S3.labels.index("213")])
small = mv.FactorizationSystem.from_graph(nodal, S3, {"Q": H})
print("nodal over S3 with <(1 2)> at Q:", small.orbit_count, "orbits, sizes", small.orbit_sizes())

"""Passing to a quotient of the component group."""
from shagraph import graph, groups, model, mv, sha

S3 = groups.build_group("S3")
A3 = groups.subgroup(S3, [S3.labels.index("231")])

# 1 -> A3 -> S3 -> C2 -> 1 over the nodal curve
rep = sha.quotient_sequence_check(1, S3, A3)
print("sizes", rep.sizes, "exact", rep.exact, "first map", rep.first_map)
print("first map injective:", rep.first_map_injective)

# the map on orbits is a bijection exactly when tuples with the same image share an orbit
nodal = graph.from_model(model.parse_model("component C\npoint Q on C:2"))
r = mv.trans_factor_check(mv.FactorizationSystem.from_graph(nodal, S3), A3)
print("bijective", r.bijective, "lifts factor", r.lifts_factor, "orbit counts", r.orbit_counts)
print("two tuples with equal image in different orbits:", r.counterexample_ii)

# over a tree both sides hold for every normal subgroup
tree = graph.from_model(model.parse_model("component C1\ncomponent C2\npoint Q on C1:1 C2:1"))
D4 = groups.build_group("D4")
for N in groups.normal_subgroups(D4):
    r = mv.trans_factor_check(mv.FactorizationSystem.from_graph(tree, D4), N)
    print(f"D4 / order {N.order}: bijective {r.bijective}, lifts {r.lifts_factor}")

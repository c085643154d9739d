"""Finite covers of the reduction graph, up to isomorphism."""
from math import factorial

from shagraph import covers, groups

# degree 2 covers of a rank 2 graph
for c in covers.enumerate_covers(2, 2):
    print(c.images, "connected" if covers.is_connected(c) else "split")

# connected classes grow like the subgroup counts of the free group
for n in range(1, 5):
    conn = covers.enumerate_covers(2, n, connected_only=True)
    transitive = sum(factorial(n) // covers.stabilizer_order(c) for c in conn)
    print(f"degree {n}: {len(conn)} connected classes, {transitive} transitive tuples")

# regular covers built from a surjection onto S3 are Galois
S3 = groups.build_group("S3")
gens = [S3.labels.index("213"), S3.labels.index("231")]
reg = covers.from_hom(S3, gens)
print("regular cover degree", reg.degree, "deck group order", covers.is_galois(reg).order)

# the cover on cosets of a non-normal subgroup is not
H = groups.subgroup(S3, [S3.labels.index("213")])
cos = covers.coset_cover(S3, H, gens)
print("coset cover degree", cos.degree, "galois:", covers.is_galois(cos) is not None)
print("regular cover dominates coset cover:", covers.dominates(reg, cos) is not None)

"""Obstruction sets as tuples up to simultaneous conjugation."""
from shagraph import groups, sha

S3 = groups.build_group("S3")
print("S3 elements (one-line notation):", S3.labels)
print("conjugacy classes:", groups.conjugacy_classes(S3))

for r in range(4):
    s = sha.compute_sha(r, S3)
    print(f"rank {r}: {s.size} classes, Burnside count {sha.sha_count_burnside(r, S3)}")

# over the nodal curve there are three classes: identity, a transposition, a 3-cycle
s = sha.compute_sha(1, S3)
print(s.labelled())

# abelian groups give a group structure on the set
C2 = groups.build_group("C2")
s = sha.compute_sha(2, C2)
print("C2 rank 2 reps:", s.representatives, "product(1,2) =", s.product(1, 2))

# the Witt kernel is (Z/2)^r and matches the C2 classes
for r in range(4):
    w = sha.witt_kernel(r)
    print(f"witt kernel rank {r}: order {w.order}, match {sha.witt_sha_match(r)}")

"""Obstruction sets for rational groups with a given component group.

For a rational group the obstruction set depends only on the finite
component group and on the reduction graph, and equals the set of
homomorphisms from the free group pi_1 of the graph into the component
group, up to conjugation.  With a fixed free basis such a homomorphism is
just an ``r``-tuple of elements, so everything reduces to tuples up to
simultaneous conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GroupError, check_states
from .graph import ReductionGraph, cycle_rank
from .groups import (
    FiniteGroup,
    Subgroup,
    canonical_codes,
    canonical_tuple,
    count_tuple_classes,
    cyclic,
    decode,
    quotient,
)


def _rank(graph) -> int:
    return graph if isinstance(graph, int) else cycle_rank(graph)


def _fingerprint(graph):
    return None if isinstance(graph, int) else graph.fingerprint()


@dataclass(frozen=True)
class ShaSet:
    """Canonical representatives, one per conjugation orbit of ``G^r``.

    The all-identity tuple is the base point and always comes first.
    """

    group: FiniteGroup
    rank: int
    representatives: tuple[tuple[int, ...], ...]
    graph_fingerprint: str | None = None
    pointed_index: int = 0

    @property
    def size(self) -> int:
        return len(self.representatives)

    def __len__(self):
        return self.size

    def index(self, tup) -> int:
        """Position of the class containing ``tup``."""
        return self._positions[canonical_tuple(self.group, tup)]

    @cached_property
    def _positions(self):
        return {t: i for i, t in enumerate(self.representatives)}

    def product(self, i: int, j: int) -> int:
        """Componentwise product of two classes; only for abelian groups."""
        if not self.group.is_abelian():
            raise GroupError("not-abelian", "classes only multiply for commutative groups")
        a, b = self.representatives[i], self.representatives[j]
        return self.index(tuple(self.group.mul(x, y) for x, y in zip(a, b)))

    def labelled(self) -> list[list[str]]:
        return [[self.group.labels[x] for x in t] for t in self.representatives]


def compute_sha(graph: ReductionGraph | int, G: FiniteGroup, max_states=None) -> ShaSet:
    r = _rank(graph)
    reps = np.unique(canonical_codes(G, r, max_states))
    rows = [tuple(int(x) for x in row) for row in decode(reps, G.order, r)]
    # code 0 is the identity tuple, so it is already first
    return ShaSet(G, r, tuple(rows), _fingerprint(graph))


def sha_count_burnside(graph: ReductionGraph | int, G: FiniteGroup) -> int:
    """Orbit count by Burnside: (1/|G|) * sum over g of |C(g)|^r."""
    return count_tuple_classes(G, _rank(graph))


def is_lgp_trivial(graph: ReductionGraph | int, G: FiniteGroup) -> bool:
    return G.order == 1 or _rank(graph) == 0


@dataclass(frozen=True)
class WittKernelReport:
    rank: int
    order: int
    representatives: tuple[tuple[int, ...], ...]
    note: str = "each class is represented by a binary quadratic form"


def witt_kernel(graph: ReductionGraph | int) -> WittKernelReport:
    """Kernel of the Witt-group local-global map: Hom(pi_1, Z/2) = (Z/2)^r."""
    r = _rank(graph)
    reps = tuple(tuple(int(x) for x in row) for row in decode(np.arange(2**r), 2, r))
    return WittKernelReport(r, 2**r, reps)


def witt_sha_match(graph: ReductionGraph | int) -> bool:
    """Element-for-element agreement of the Witt kernel with Sha(C2)."""
    sha = compute_sha(graph, cyclic(2))
    return witt_kernel(graph).representatives == sha.representatives


# -- the quotient sequence ---------------------------------------------------


@dataclass
class Assertion:
    holds: bool
    witness: object = None


@dataclass
class ExactnessReport:
    """Exactness of Sha(N) -> Sha(G) -> Sha(G/N) as pointed sets."""

    sizes: tuple[int, int, int]
    trivial_kernel: Assertion
    image_is_kernel: Assertion
    surjective: Assertion
    first_map: list[int] = field(default_factory=list)
    second_map: list[int] = field(default_factory=list)
    first_map_injective: bool = False

    @property
    def exact(self) -> bool:
        return self.trivial_kernel.holds and self.image_is_kernel.holds and self.surjective.holds


def quotient_sequence_check(graph: ReductionGraph | int, G: FiniteGroup, N: Subgroup, max_states=None) -> ExactnessReport:
    """Check the three pointed-set exactness assertions literally.

    Trivial kernel is tested as "only the base point maps to the base point",
    never as injectivity; injectivity of the first map is reported
    separately.
    """
    if not N.is_normal:
        raise GroupError("not-normal", "the quotient sequence needs a normal subgroup")
    r = _rank(graph)
    Nbar, proj = quotient(G, N)
    Ngrp, emb = N.as_group()
    for grp in (Ngrp, G, Nbar):
        check_states(grp.order**r, max_states)

    sha_n = compute_sha(r, Ngrp, max_states)
    sha_g = compute_sha(r, G, max_states)
    sha_q = compute_sha(r, Nbar, max_states)

    first = [sha_g.index(tuple(int(emb[x]) for x in t)) for t in sha_n.representatives]
    second = [sha_q.index(tuple(int(proj[x]) for x in t)) for t in sha_g.representatives]

    base_n, base_g, base_q = 0, 0, 0
    bad = [i for i, j in enumerate(first) if j == base_g and i != base_n]
    trivial_kernel = Assertion(not bad, sha_n.representatives[bad[0]] if bad else None)

    image = set(first)
    kernel = {i for i, j in enumerate(second) if j == base_q}
    diff = sorted(image ^ kernel)
    image_is_kernel = Assertion(not diff, sha_g.representatives[diff[0]] if diff else sorted(kernel))

    missed = sorted(set(range(sha_q.size)) - set(second))
    surjective = Assertion(not missed, sha_q.representatives[missed[0]] if missed else None)

    return ExactnessReport(
        (sha_n.size, sha_g.size, sha_q.size),
        trivial_kernel,
        image_is_kernel,
        surjective,
        first,
        second,
        len(set(first)) == len(first),
    )

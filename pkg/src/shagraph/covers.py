"""Finite covers of a reduction graph as permutation monodromy.

Sheets are numbered ``0..n-1`` internally and ``1..n`` in JSON.  A
permutation is a tuple in 0-based one-line notation.

Raw data assigns to every incident (vertex, edge) pair a permutation
``sigma[v, e]`` carrying the sheets over ``v`` to the sheets over ``e``.
Renumbering the sheets of each vertex and each edge changes
``sigma[v, e]`` to ``tau_e^-1 . sigma[v, e] . tau_v`` (function
composition).  Crossing edge ``e`` from its point end ``P`` to its
component end ``U`` acts by ``sigma[U, e]^-1 . sigma[P, e]``; fixing the
spanning tree to act trivially leaves one permutation per cotree edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

import numpy as np

from .errors import GroupError, ShagraphError, check_states
from .graph import GaugeData, ReductionGraph, cycle_rank, spanning_gauge
from .groups import FiniteGroup, canonical_codes, decode, generates, perm_group, symmetric

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(f: Perm, g: Perm) -> Perm:
    """Function composition ``f . g`` (apply ``g`` first)."""
    return tuple(f[x] for x in g)


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _check_perm(p, n):
    if sorted(p) != list(range(n)):
        raise ShagraphError("degree-mismatch", f"{p} is not a permutation of degree {n}")


@dataclass(frozen=True)
class RawCoverData:
    graph: ReductionGraph
    degree: int
    sigma: dict = field(hash=False)  # (vertex id, edge index) -> Perm

    def __post_init__(self):
        incident = set()
        for e, (p, c, _) in enumerate(self.graph.edges):
            incident |= {(p, e), (c, e)}
        if set(self.sigma) != incident:
            raise ShagraphError("bad-cover-data", "need exactly one permutation per incident (vertex, edge) pair")
        for p in self.sigma.values():
            if len(p) != self.degree:
                raise ShagraphError("degree-mismatch", f"permutation {p} has degree {len(p)}, expected {self.degree}")
            _check_perm(p, self.degree)

    def renumber(self, tau_vertex: dict, tau_edge: dict) -> "RawCoverData":
        """Apply sheet renumberings; missing entries mean the identity."""
        ident = identity(self.degree)
        sigma = {}
        for (v, e), s in self.sigma.items():
            sigma[v, e] = compose(invert(tau_edge.get(e, ident)), compose(s, tau_vertex.get(v, ident)))
        return RawCoverData(self.graph, self.degree, sigma)


@dataclass(frozen=True)
class MonodromyTuple:
    """Degree plus one permutation per free generator.

    ``fingerprint`` identifies the graph and gauge the generators come from;
    None means an abstract free group of rank ``len(images)``.
    """

    degree: int
    images: tuple[Perm, ...]
    fingerprint: str | None = None

    @property
    def rank(self) -> int:
        return len(self.images)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "images": [[x + 1 for x in p] for p in self.images],
            "graph_fingerprint": self.fingerprint,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MonodromyTuple":
        n = int(data["degree"])
        images = tuple(tuple(int(x) - 1 for x in p) for p in data["images"])
        for p in images:
            _check_perm(p, n)
        return cls(n, images, data.get("graph_fingerprint"))


def _same_base(a: MonodromyTuple, b: MonodromyTuple):
    if a.rank != b.rank or a.fingerprint != b.fingerprint:
        raise ShagraphError("graph-mismatch", "covers live over different graphs")


# -- normalization ---------------------------------------------------------


def transitions(raw: RawCoverData) -> list[Perm]:
    """Per-edge transition from point sheets to component sheets."""
    out = []
    for e, (p, c, _) in enumerate(raw.graph.edges):
        out.append(compose(invert(raw.sigma[c, e]), raw.sigma[p, e]))
    return out


def gauge_fix(raw: RawCoverData, gauge: GaugeData | None = None) -> tuple[Perm, ...]:
    """Cotree transitions after making every tree edge trivial (not canonicalized)."""
    graph = raw.graph
    gauge = gauge or spanning_gauge(graph)
    n = raw.degree
    oriented = graph.oriented_edges()
    trans = transitions(raw)
    tau = {gauge.order[0]: identity(n)}
    for v in gauge.order[1:]:
        e = gauge.parent_edge[v]
        l, r = oriented[e]
        if v == r:  # tau_U = t . tau_P
            tau[v] = compose(trans[e], tau[l])
        else:  # tau_P = t^-1 . tau_U
            tau[v] = compose(invert(trans[e]), tau[r])
    images = []
    for e in gauge.cotree_edges:
        l, r = oriented[e]
        images.append(compose(invert(tau[r]), compose(trans[e], tau[l])))
    return tuple(images)


def normalize(raw: RawCoverData) -> MonodromyTuple:
    """Canonical monodromy tuple of raw cover data.

    Constant on renumbering classes: the gauge-fixed tuple is determined up
    to simultaneous conjugation, and the lexicographically least conjugate is
    returned.
    """
    images = gauge_fix(raw)
    return MonodromyTuple(raw.degree, canonical_form(images, raw.degree), raw.graph.fingerprint())


@lru_cache(maxsize=16)
def _all_perms(n: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    inv = np.argsort(perms, axis=1)
    return perms, inv


def canonical_form(images, n: int) -> tuple[Perm, ...]:
    """Lexicographically least simultaneous conjugate ``tau . g . tau^-1``.

    Exhaustive over all ``n!`` relabelings, vectorized.
    """
    images = [tuple(p) for p in images]
    if not images or n <= 1:
        return tuple(images)
    perms, inv = _all_perms(n)
    rows = np.arange(len(perms))[:, None]
    blocks = []
    for g in images:
        g = np.asarray(g, dtype=np.int64)
        # (tau g tau^-1)(j) = tau[g[tau^-1[j]]]
        blocks.append(perms[rows, g[inv]])
    cand = np.concatenate(blocks, axis=1)
    best = cand[np.lexsort(cand.T[::-1])[0]]
    return tuple(tuple(int(x) for x in best[i * n:(i + 1) * n]) for i in range(len(images)))


def canonicalize(cover: MonodromyTuple) -> MonodromyTuple:
    return MonodromyTuple(cover.degree, canonical_form(cover.images, cover.degree), cover.fingerprint)


# -- connectivity and components ---------------------------------------------


def orbits(cover: MonodromyTuple) -> list[list[int]]:
    n = cover.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in cover.images:
        for i, j in enumerate(g):
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def is_connected(cover: MonodromyTuple) -> bool:
    return len(orbits(cover)) == 1


def connected_components(cover: MonodromyTuple) -> list[MonodromyTuple]:
    out = []
    for orb in orbits(cover):
        pos = {x: i for i, x in enumerate(orb)}
        images = tuple(tuple(pos[g[x]] for x in orb) for g in cover.images)
        out.append(MonodromyTuple(len(orb), images, cover.fingerprint))
    return out


# -- equivariant maps --------------------------------------------------------


def _equivariant_map(a: MonodromyTuple, b: MonodromyTuple, injective: bool, fiber: int | None):
    """Search phi: sheets(a) -> sheets(b) with phi . g_i = h_i . phi.

    Each orbit of ``a`` is handled by choosing the image of its least sheet
    and propagating; backtracking covers the choices across orbits.
    """
    n, m = a.degree, b.degree
    gens = [(g, h) for g, h in zip(a.images, b.images)]
    ginv = [invert(g) for g in a.images]
    hinv = [invert(h) for h in b.images]
    orbs = orbits(a)
    phi = [-1] * n
    load = [0] * m

    def assign(start, target):
        stack = [(start, target)]
        placed = []
        ok = True
        while stack:
            x, y = stack.pop()
            if phi[x] >= 0:
                if phi[x] != y:
                    ok = False
                    break
                continue
            if injective and load[y]:
                ok = False
                break
            if fiber is not None and load[y] >= fiber:
                ok = False
                break
            phi[x] = y
            load[y] += 1
            placed.append(x)
            for i, (g, h) in enumerate(gens):
                stack.append((g[x], h[y]))
                stack.append((ginv[i][x], hinv[i][y]))
        if not ok:
            for x in placed:
                load[phi[x]] -= 1
                phi[x] = -1
        return ok, placed

    def search(k):
        if k == len(orbs):
            return True
        start = orbs[k][0]
        for y in range(m):
            ok, placed = assign(start, y)
            if ok:
                if search(k + 1):
                    return True
                for x in placed:
                    load[phi[x]] -= 1
                    phi[x] = -1
        return False

    if search(0):
        return tuple(phi)
    return None


def are_isomorphic(a: MonodromyTuple, b: MonodromyTuple) -> Perm | None:
    """A relabeling ``tau`` with ``tau . g_i . tau^-1 = h_i`` for all i, or None."""
    _same_base(a, b)
    if a.degree != b.degree:
        return None
    return _equivariant_map(a, b, injective=True, fiber=1)


def dominates(upper: MonodromyTuple, lower: MonodromyTuple) -> tuple[int, ...] | None:
    """A balanced equivariant surjection from ``upper`` onto ``lower``, or None."""
    _same_base(upper, lower)
    n, m = upper.degree, lower.degree
    if n % m:
        return None
    return _equivariant_map(upper, lower, injective=False, fiber=n // m)


def fiber_product(a: MonodromyTuple, b: MonodromyTuple) -> MonodromyTuple:
    """Componentwise action on pairs; sheet ``(x, y)`` is numbered ``x*m + y``."""
    _same_base(a, b)
    m = b.degree
    images = tuple(
        tuple(g[x] * m + h[y] for x in range(a.degree) for y in range(m))
        for g, h in zip(a.images, b.images)
    )
    return MonodromyTuple(a.degree * m, images, a.fingerprint)


def product_projections(n: int, m: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(k // m for k in range(n * m)), tuple(k % m for k in range(n * m))


# -- group-theoretic covers ------------------------------------------------


def from_hom(G: FiniteGroup, images, fingerprint: str | None = None) -> MonodromyTuple:
    """Right-regular cover of degree |G|: sheet ``x`` goes to ``x * g``."""
    perms = tuple(tuple(int(v) for v in G.table[:, int(g)]) for g in images)
    return MonodromyTuple(G.order, perms, fingerprint)


def coset_cover(G: FiniteGroup, H, images, fingerprint: str | None = None) -> MonodromyTuple:
    """Action on right cosets ``Hx`` of a subgroup, ordered by least member."""
    members = list(H.elements)
    coset_min = G.table[members, :].min(axis=0)  # least element of Hx
    reps, label = np.unique(coset_min, return_inverse=True)
    perms = tuple(tuple(int(label[G.table[r, int(g)]]) for r in reps) for g in images)
    return MonodromyTuple(len(reps), perms, fingerprint)


def monodromy_group(cover: MonodromyTuple, max_order: int | None = None) -> FiniteGroup:
    return perm_group(cover.images or [identity(cover.degree)], max_order)


def is_galois(cover: MonodromyTuple, max_order: int | None = None) -> FiniteGroup | None:
    """Deck group of a connected Galois cover, or None.

    Transitive with monodromy group of order equal to the degree means the
    action is regular; the deck group is then isomorphic to that image.
    """
    if not is_connected(cover):
        raise ShagraphError("not-connected", "Galois detection needs a connected cover")
    try:
        # a regular image has exactly `degree` elements; stop the closure past that
        M = perm_group(cover.images or [identity(cover.degree)], max_order=cover.degree)
    except GroupError:
        return None
    return M if M.order == cover.degree else None


# -- enumeration -------------------------------------------------------------


def enumerate_covers(graph_or_rank, n: int, connected_only: bool = False, max_states=None) -> list[MonodromyTuple]:
    """One canonical tuple per isomorphism class of degree-``n`` covers.

    Accepts a :class:`ReductionGraph` or a bare rank.  Tuples are sorted
    lexicographically; the canonical tuple of a class is its least member.
    """
    if n < 1:
        raise ShagraphError("bad-degree", "degree must be at least 1")
    if isinstance(graph_or_rank, ReductionGraph):
        r, fp = cycle_rank(graph_or_rank), graph_or_rank.fingerprint()
    else:
        r, fp = int(graph_or_rank), None
    check_states(factorial(n) ** r, max_states)
    Sn = symmetric(n, max_order=factorial(n))
    reps = np.unique(canonical_codes(Sn, r, max_states))
    out = []
    for row in decode(reps, Sn.order, r):
        cover = MonodromyTuple(n, tuple(Sn.perms[int(x)] for x in row), fp)
        if connected_only and not is_connected(cover):
            continue
        out.append(cover)
    return out


def stabilizer_order(cover: MonodromyTuple) -> int:
    """Number of relabelings fixing the tuple (centralizer in S_n)."""
    n = cover.degree
    if not cover.images:
        return factorial(n)
    perms, inv = _all_perms(n)
    rows = np.arange(len(perms))[:, None]
    fixed = np.ones(len(perms), dtype=bool)
    for g in cover.images:
        g = np.asarray(g)
        fixed &= (perms[rows, g[inv]] == g).all(axis=1)
    return int(fixed.sum())


def images_generate(G: FiniteGroup, images) -> bool:
    return generates(G, images)

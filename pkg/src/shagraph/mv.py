"""Finite model of the Mayer-Vietoris coboundary.

A factorization system is a connected oriented multigraph, one ambient
finite group ``G`` shared by every edge, and a subgroup of ``G`` at every
vertex.  Tuples of edge elements ``(g_k)`` are acted on by tuples of vertex
elements ``(u_v)`` through

    g_k  ->  u_r^-1 * g_k * u_l        for every edge k = (l, r)

and the orbits of this action are the fibers of the coboundary map, i.e.
the points of the double-coset space.  Tuples are encoded as integers in
base ``|G|`` with the first edge most significant, so the least code of an
orbit is its lexicographically least tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import GroupError, ShagraphError, check_states
from .graph import ReductionGraph
from .groups import FiniteGroup, Subgroup, decode, encode, quotient, subgroup


class FactorizationSystem:
    def __init__(self, vertices, triples, G: FiniteGroup, vertex_subgroups=None, max_states=None):
        self.vertices = tuple(vertices)
        self.triples = tuple((int(l), int(r)) for l, r in triples)
        self.group = G
        nv = len(self.vertices)
        for l, r in self.triples:
            if not (0 <= l < nv and 0 <= r < nv):
                raise ShagraphError("bad-system", f"edge ({l}, {r}) refers to a missing vertex")
        if vertex_subgroups is None:
            full = subgroup(G, range(G.order))
            vertex_subgroups = [full] * nv
        elif isinstance(vertex_subgroups, dict):
            full = subgroup(G, range(G.order))
            vertex_subgroups = [vertex_subgroups.get(v, full) for v in self.vertices]
        self.vertex_subgroups = list(vertex_subgroups)
        if len(self.vertex_subgroups) != nv:
            raise ShagraphError("bad-system", "one subgroup per vertex required")
        for H in self.vertex_subgroups:
            if not isinstance(H, Subgroup) or H.group is not G:
                raise ShagraphError("bad-system", "vertex subgroups must be subgroups of the edge group")
        self.max_states = max_states
        if not _connected(nv, self.triples):
            raise ShagraphError("bad-system", "the underlying graph must be connected")

    @classmethod
    def from_graph(cls, graph: ReductionGraph, G: FiniteGroup, vertex_subgroups=None, max_states=None):
        """Orientation: point vertex on the left, component vertex on the right."""
        return cls(graph.vertices, graph.oriented_edges(), G, vertex_subgroups, max_states)

    @property
    def edge_count(self) -> int:
        return len(self.triples)

    def fingerprint(self) -> str:
        import hashlib
        import json

        payload = json.dumps([
            list(self.vertices), [list(t) for t in self.triples], self.group.name,
            [list(H.elements) for H in self.vertex_subgroups],
        ])
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def encode(self, tup) -> int:
        tup = np.asarray(tup, dtype=np.int64)
        if tup.shape != (self.edge_count,) or tup.size and (tup.min() < 0 or tup.max() >= self.group.order):
            raise ShagraphError("bad-tuple", f"expected {self.edge_count} elements of the edge group")
        return int(encode(tup, self.group.order)) if tup.size else 0

    def decode(self, code: int) -> tuple[int, ...]:
        return tuple(int(x) for x in decode(code, self.group.order, self.edge_count))

    def act(self, tup, u) -> tuple[int, ...]:
        """``g_k -> u_r^-1 g_k u_l`` with ``u`` indexed by vertex."""
        G = self.group
        return tuple(G.word(G.inv(u[r]), g, u[l]) for g, (l, r) in zip(tup, self.triples))

    @cached_property
    def orbit_labels(self) -> np.ndarray:
        """Orbit index of every tuple code; orbits numbered by least member."""
        G, E = self.group, self.edge_count
        n = G.order
        total = n**E
        check_states(total, self.max_states)
        codes = np.arange(total, dtype=np.int64)
        digits = decode(codes, n, E)
        rows, cols = [], []
        for v, H in enumerate(self.vertex_subgroups):
            left = [k for k, (l, _) in enumerate(self.triples) if l == v]
            right = [k for k, (_, r) in enumerate(self.triples) if r == v]
            if not left and not right:
                continue
            for s in _generators(H):
                moved = digits.copy()
                # u_v = s at vertex v, identity elsewhere
                for k in right:
                    moved[:, k] = G.table[G.inverse[s], moved[:, k]]
                for k in left:
                    moved[:, k] = G.table[moved[:, k], s]
                rows.append(codes)
                cols.append(encode(moved, n))
        if rows:
            r = np.concatenate(rows)
            c = np.concatenate(cols)
        else:
            r = c = np.zeros(0, dtype=np.int64)
        adj = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(total, total))
        _, comp = connected_components(adj, directed=False)
        # relabel components by least member; codes are scanned in increasing order
        _, first = np.unique(comp, return_index=True)
        order = np.argsort(first)
        relabel = np.empty_like(order)
        relabel[order] = np.arange(len(order))
        return relabel[comp]

    @property
    def orbit_count(self) -> int:
        return int(self.orbit_labels.max()) + 1

    def orbits(self) -> list[list[tuple[int, ...]]]:
        labels = self.orbit_labels
        out = [[] for _ in range(self.orbit_count)]
        for code, lab in enumerate(labels.tolist()):
            out[lab].append(self.decode(code))
        return out

    def orbit_sizes(self) -> list[int]:
        return np.bincount(self.orbit_labels).tolist()

    @property
    def pointed_orbit_size(self) -> int:
        return int((self.orbit_labels == 0).sum())

    def quotient_system(self, N: Subgroup) -> tuple["FactorizationSystem", np.ndarray]:
        """The same graph over ``G/N`` with the projected vertex subgroups."""
        Q, proj = quotient(self.group, N)
        subs = [subgroup(Q, sorted({int(proj[x]) for x in H.elements})) for H in self.vertex_subgroups]
        return FactorizationSystem(self.vertices, self.triples, Q, subs, self.max_states), proj


def _generators(H: Subgroup) -> list[int]:
    """A small generating set, greedily picked in element order."""
    G = H.group
    gens, span = [], {0}
    for x in H.elements:
        if x not in span:
            gens.append(x)
            span = set(subgroup(G, gens).elements)
            if len(span) == H.order:
                break
    return gens


def _connected(nv, triples) -> bool:
    if nv == 0:
        return False
    adj = [[] for _ in range(nv)]
    for l, r in triples:
        adj[l].append(r)
        adj[r].append(l)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == nv


def coboundary_orbits(sys: FactorizationSystem) -> list[list[tuple[int, ...]]]:
    return sys.orbits()


def factorizes(sys: FactorizationSystem, t) -> bool:
    """True iff ``t_k = u_r^-1 u_l`` for some vertex elements ``u``."""
    return bool(sys.orbit_labels[sys.encode(t)] == 0)


def same_fiber(sys: FactorizationSystem, t, t2) -> bool:
    labels = sys.orbit_labels
    return bool(labels[sys.encode(t)] == labels[sys.encode(t2)])


@dataclass
class TransFactorReport:
    bijective: bool  # side (i)
    lifts_factor: bool  # side (ii)
    counterexample_i: object = None
    counterexample_ii: object = None
    orbit_counts: tuple[int, int] = (0, 0)

    @property
    def agree(self) -> bool:
        return self.bijective == self.lifts_factor


def trans_factor_check(sys: FactorizationSystem, N: Subgroup) -> TransFactorReport:
    """Evaluate both sides of the bijectivity criterion independently.

    Side (i): the map from orbits over ``G`` to orbits over ``G/N`` is a
    bijection.  Side (ii): any two tuples with the same image in ``G/N`` lie
    in one orbit over ``G``.
    """
    if not N.is_normal:
        raise GroupError("not-normal", "need a normal subgroup")
    qsys, proj = sys.quotient_system(N)
    G_labels = sys.orbit_labels
    Q_labels = qsys.orbit_labels
    n, E = sys.group.order, sys.edge_count
    digits = decode(np.arange(n**E, dtype=np.int64), n, E)
    image_codes = encode(proj[digits], qsys.group.order) if E else np.zeros(1, dtype=np.int64)

    # (i) induced map on orbits; orbit a starts at least code ``least[a]``
    _, least = np.unique(G_labels, return_index=True)
    induced = np.asarray(Q_labels[image_codes[least]])
    if (Q_labels[image_codes] != induced[G_labels]).any():
        raise AssertionError("coboundary orbits do not map to orbits")  # cannot happen
    hit, first_a = np.unique(induced, return_index=True)
    injective = len(hit) == len(induced)
    surjective = len(hit) == qsys.orbit_count
    cx_i = None
    if not injective:
        a = int(np.flatnonzero(first_a[np.searchsorted(hit, induced)] != np.arange(len(induced)))[0])
        b = int(first_a[np.searchsorted(hit, induced[a])])
        cx_i = (sys.decode(int(least[b])), sys.decode(int(least[a])))
    elif not surjective:
        missing = int(np.setdiff1d(np.arange(qsys.orbit_count), hit)[0])
        cx_i = qsys.decode(int(np.flatnonzero(Q_labels == missing)[0]))
    bijective = injective and surjective

    # (ii) every pair with equal image is in one fiber
    _, first_img, inv_img = np.unique(image_codes, return_index=True, return_inverse=True)
    anchor = first_img[inv_img]
    bad = np.flatnonzero(G_labels[anchor] != G_labels)
    cx_ii = (sys.decode(int(anchor[bad[0]])), sys.decode(int(bad[0]))) if len(bad) else None
    return TransFactorReport(bijective, cx_ii is None, cx_i, cx_ii, (sys.orbit_count, qsys.orbit_count))

"""Finite groups as dense multiplication tables.

Elements are the integers ``0..n-1`` with ``0`` the identity; ``table[a, b]``
is the index of the product ``a*b``.  Permutation groups use the
left-to-right convention: ``p*q`` means apply ``p`` first, then ``q``, so
``(p*q)[i] == q[p[i]]`` in 0-based one-line notation.

Group specs::

    C<n>          cyclic, elements ordered by exponent
    D<n>          dihedral of order 2n: r^0..r^(n-1), then r^0 s..r^(n-1) s
    S<n>          symmetric, elements in lexicographic one-line order
    AxB[xC...]    direct product, elements lexicographic by factor
    perm:<gens>   generated by cycle-notation permutations, e.g.
                  perm:(1 2)(3 4),(1 3); BFS closure from the identity
    table:<rows>  explicit table, rows ';'-separated, entries ','-separated
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from functools import cached_property

import numpy as np

from .errors import DEFAULT_MAX_ORDER, GroupError, check_states

EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 64


class FiniteGroup:
    def __init__(self, table, labels=None, name=None, perms=None, check=True):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise GroupError("not-a-group", "multiplication table must be square and non-empty")
        self.table = table
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        self.perms = perms
        if check:
            problem = group_axiom_violation(table)
            if problem:
                raise GroupError("not-a-group", problem)
        self.inverse = np.argmax(table == 0, axis=1)
        self.table.setflags(write=False)
        self.inverse.setflags(write=False)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self):
        return self.order

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def word(self, *elements):
        acc = 0
        for x in elements:
            acc = int(self.table[acc, x])
        return acc

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def conjugation(self) -> np.ndarray:
        """``conjugation[h, x] = h^-1 x h``."""
        n = self.order
        dtype = np.int16 if n < 2**15 else np.int32
        left = self.table[self.inverse]  # left[h, x] = h^-1 x
        out = self.table[left, np.arange(n)[:, None]]
        return out.astype(dtype)

    @cached_property
    def centralizer_orders(self) -> np.ndarray:
        return (self.table == self.table.T).sum(axis=0)

    def element_of_perm(self, perm) -> int:
        if self.perms is None:
            raise GroupError("no-permutations", f"{self!r} has no permutation representation")
        return self._perm_index[tuple(perm)]

    @cached_property
    def _perm_index(self):
        return {tuple(p): i for i, p in enumerate(self.perms)}


def group_axiom_violation(table: np.ndarray) -> str | None:
    """Describe the first failed group axiom, or None."""
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        return "table entries out of range"
    ar = np.arange(n)
    if not (np.array_equal(table[0], ar) and np.array_equal(table[:, 0], ar)):
        return "element 0 is not a two-sided identity"
    # Latin square: every row and column is a permutation
    srt = np.sort(table, axis=1)
    if not (srt == ar).all() or not (np.sort(table, axis=0) == ar[:, None]).all():
        return "some element has no inverse"
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        a, b, c = np.meshgrid(ar, ar, ar, indexing="ij")
        ok = table[table[a, b], c] == table[a, table[b, c]]
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, 20_000))
        ok = table[table[a, b], c] == table[a, table[b, c]]
    if not ok.all():
        return "multiplication is not associative"
    return None


# -- constructors ------------------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("malformed-spec", "cyclic order must be positive")
    ar = np.arange(n)
    labels = ["e"] + [f"a^{k}" if k > 1 else "a" for k in range(1, n)]
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, labels, f"C{n}", check=False)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``; index ``e*n + k`` is ``r^k s^e``."""
    if n < 1:
        raise GroupError("malformed-spec", "dihedral parameter must be positive")
    idx = np.arange(2 * n)
    k, e = idx % n, idx // n
    k1, e1 = k[:, None], e[:, None]
    k2, e2 = k[None, :], e[None, :]
    kk = (k1 + np.where(e1 == 1, -k2, k2)) % n
    ee = (e1 + e2) % 2
    labels = []
    for i in range(2 * n):
        rot = "e" if k[i] == 0 else ("r" if k[i] == 1 else f"r^{k[i]}")
        labels.append(rot if e[i] == 0 else ("s" if k[i] == 0 else f"{rot} s"))
    return FiniteGroup(ee * n + kk, labels, f"D{n}", check=False)


def symmetric(n: int, max_order: int | None = None) -> FiniteGroup:
    if n < 1:
        raise GroupError("malformed-spec", "symmetric degree must be positive")
    size = 1
    for k in range(2, n + 1):
        size *= k
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if size > cap:
        raise GroupError("order-cap-exceeded", f"S{n} has order {size} > cap {cap}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(size, n)
    table = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        table[a] = _lex_rank(perms[:, perms[a]])  # row b holds (a*b) = perm_b[perm_a[i]]
    labels = ["".join(str(x + 1) for x in p) for p in perms]
    return FiniteGroup(table, labels, f"S{n}", perms=[tuple(int(x) for x in p) for p in perms], check=False)


def _lex_rank(rows: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each row, a permutation of ``0..n-1``."""
    m, n = rows.shape
    rank = np.zeros(m, dtype=np.int64)
    fact = 1
    for i in range(n - 1, -1, -1):
        smaller = (rows[:, i + 1:] < rows[:, i:i + 1]).sum(axis=1)
        rank += smaller * fact
        fact *= n - i
    return rank


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    g = factors[0]
    for h in factors[1:]:
        m = h.order
        table = g.table[:, None, :, None] * m + h.table[None, :, None, :]
        table = table.reshape(g.order * m, g.order * m)
        labels = [f"({a},{b})" for a in g.labels for b in h.labels]
        g = FiniteGroup(table, labels, f"{g.name}x{h.name}", check=False)
    return g


def parse_permutation(text: str, degree: int | None = None) -> tuple[int, ...]:
    """Cycle notation with 1-based points, e.g. ``(1 2)(3 4)`` or ``()``."""
    text = text.strip()
    if not re.fullmatch(r"(\(\s*(\d+([\s,]+\d+)*)?\s*\))+", text):
        raise GroupError("malformed-spec", f"bad cycle notation {text!r}")
    cycles = [[int(x) - 1 for x in re.split(r"[\s,]+", c.strip()) if x] for c in re.findall(r"\(([^)]*)\)", text)]
    points = [x for c in cycles for x in c]
    if any(x < 0 for x in points):
        raise GroupError("malformed-spec", "points are numbered from 1")
    d = max([degree or 0] + [x + 1 for x in points])
    perm = list(range(d))
    used = set()
    for c in cycles:
        if len(set(c)) != len(c) or used & set(c):
            raise GroupError("malformed-spec", f"cycles in {text!r} are not disjoint")
        used |= set(c)
        for a, b in zip(c, c[1:] + c[:1]):
            perm[a] = b
    return tuple(perm)


def format_cycles(perm) -> str:
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = perm[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def perm_group(generators, max_order: int | None = None, name=None) -> FiniteGroup:
    """Closure of permutation generators by BFS from the identity.

    Elements are discovered in BFS order, multiplying each dequeued element
    on the right by the generators in the order given.
    """
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    gens = [tuple(g) for g in generators]
    degree = max([len(g) for g in gens] + [1])
    gens = [g + tuple(range(len(g), degree)) for g in gens]
    ident = tuple(range(degree))
    index = {ident: 0}
    elements = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)  # x then g
            if y not in index:
                if len(elements) >= cap:
                    raise GroupError("order-cap-exceeded", f"closure exceeds order cap {cap}")
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    perms = np.array(elements, dtype=np.int64)
    table = np.empty((len(elements), len(elements)), dtype=np.int64)
    for a in range(len(elements)):
        prods = perms[:, perms[a]]
        table[a] = [index[tuple(row)] for row in prods.tolist()]
    labels = [format_cycles(p) for p in elements]
    return FiniteGroup(table, labels, name, perms=elements, check=False)


def from_table(rows, name=None) -> FiniteGroup:
    return FiniteGroup(np.asarray(rows), name=name, check=True)


_FAMILY = re.compile(r"([CSD])(\d+)")


def build_group(spec: str, max_order: int | None = None) -> FiniteGroup:
    """Construct a group from a spec string (see module docstring)."""
    spec = spec.strip()
    if spec.startswith("perm:"):
        body = spec[5:]
        pieces = _split_top_level(body)
        if not pieces or not all(pieces):
            raise GroupError("malformed-spec", f"no generators in {spec!r}")
        gens = [parse_permutation(p) for p in pieces]
        return perm_group(gens, max_order, name=spec)
    if spec.startswith("table:"):
        try:
            rows = [[int(x) for x in row.split(",")] for row in spec[6:].split(";")]
        except ValueError as exc:
            raise GroupError("malformed-spec", f"bad table entry: {exc}") from None
        if any(len(r) != len(rows) for r in rows):
            raise GroupError("malformed-spec", "table must be square")
        return from_table(rows, name=spec)
    factors = spec.split("x")
    groups = []
    for f in factors:
        m = _FAMILY.fullmatch(f.strip())
        if m is None:
            raise GroupError("malformed-spec", f"cannot parse group spec {spec!r}")
        kind, n = m.group(1), int(m.group(2))
        if kind == "C":
            groups.append(cyclic(n))
        elif kind == "D":
            groups.append(dihedral(n))
        else:
            groups.append(symmetric(n, max_order))
    order = int(np.prod([g.order for g in groups]))
    cap = DEFAULT_MAX_ORDER if max_order is None else max_order
    if order > cap:
        raise GroupError("order-cap-exceeded", f"order {order} exceeds cap {cap}")
    g = direct_product(*groups) if len(groups) > 1 else groups[0]
    g.name = spec
    return g


def _split_top_level(body: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    return out


# -- subgroups -------------------------------------------------------------


class Subgroup:
    def __init__(self, group: FiniteGroup, elements):
        self.group = group
        self.elements = tuple(sorted(int(x) for x in elements))
        members = np.zeros(group.order, dtype=bool)
        members[list(self.elements)] = True
        self.mask = members
        conj = group.conjugation[:, list(self.elements)]
        self.is_normal = bool(members[conj].all())

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x):
        return bool(self.mask[x])

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.group is self.group and other.elements == self.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order}, normal={self.is_normal})"

    def as_group(self) -> tuple[FiniteGroup, np.ndarray]:
        """The subgroup as a group in its own right, with its embedding.

        Elements keep their relative order, so the identity stays at 0.
        """
        emb = np.array(self.elements, dtype=np.int64)
        pos = np.full(self.group.order, -1, dtype=np.int64)
        pos[emb] = np.arange(len(emb))
        table = pos[self.group.table[np.ix_(emb, emb)]]
        labels = [self.group.labels[i] for i in emb]
        perms = [self.group.perms[i] for i in emb] if self.group.perms else None
        return FiniteGroup(table, labels, f"<{self.group.name}>", perms=perms, check=False), emb


def closure(G: FiniteGroup, gens) -> list[int]:
    gens = [int(g) for g in gens]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.table[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def subgroup(G: FiniteGroup, gens=()) -> Subgroup:
    for g in gens:
        if not 0 <= int(g) < G.order:
            raise GroupError("bad-element", f"{g} is not an element of {G!r}")
    return Subgroup(G, closure(G, gens))


def generates(G: FiniteGroup, elements) -> bool:
    return len(closure(G, elements)) == G.order


def centralizer(G: FiniteGroup, g: int) -> Subgroup:
    members = np.flatnonzero(G.table[:, g] == G.table[g, :])
    return Subgroup(G, members)


def conjugacy_classes(G: FiniteGroup) -> list[list[int]]:
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in range(G.order):
        if not seen[g]:
            cls = np.unique(G.conjugation[:, g])
            seen[cls] = True
            classes.append([int(x) for x in cls])
    return classes


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, np.ndarray]:
    """Quotient group and projection; cosets are ordered by least member."""
    if not N.is_normal:
        raise GroupError("not-normal", "quotient requires a normal subgroup")
    members = list(N.elements)
    coset_min = G.table[:, members].min(axis=1)  # least element of gN
    reps, projection = np.unique(coset_min, return_inverse=True)
    table = projection[G.table[np.ix_(reps, reps)]]
    labels = [G.labels[r] + ("N" if N.order > 1 else "") for r in reps]
    H = FiniteGroup(table, labels, f"{G.name}/N", check=False)
    return H, projection.astype(np.int64)


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, via normal closures of unions of classes."""
    classes = conjugacy_classes(G)
    found = {}
    frontier = [frozenset([0])]
    seen_sets = set(frontier)
    while frontier:
        nxt = []
        for s in frontier:
            h = subgroup(G, sorted(s))
            found[h.elements] = h
            for cls in classes:
                if cls[0] not in h:
                    t = frozenset(closure(G, sorted(set(h.elements) | set(cls))))
                    if t not in seen_sets:
                        seen_sets.add(t)
                        nxt.append(t)
        frontier = nxt
    return [found[k] for k in sorted(found, key=lambda e: (len(e), e))]


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, by closing cyclic subgroups under joins (small groups only)."""
    cyclics = {tuple(closure(G, [g])) for g in range(G.order)}
    found = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        nxt = set()
        for a in frontier:
            for c in cyclics:
                j = tuple(closure(G, sorted(set(a) | set(c))))
                if j not in found:
                    found.add(j)
                    nxt.add(j)
        frontier = nxt
    return [Subgroup(G, e) for e in sorted(found, key=lambda e: (len(e), e))]


# -- tuples up to simultaneous conjugation ----------------------------------


def encode(tuples: np.ndarray, n: int) -> np.ndarray:
    """Lexicographic integer codes of rows over ``0..n-1``."""
    r = tuples.shape[-1]
    weights = n ** np.arange(r - 1, -1, -1, dtype=np.int64)
    return (tuples.astype(np.int64) * weights).sum(axis=-1)


def decode(codes, n: int, r: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    weights = n ** np.arange(r - 1, -1, -1, dtype=np.int64)
    return (codes[..., None] // weights) % n


def canonical_codes(G: FiniteGroup, r: int, max_states=None) -> np.ndarray:
    """Canonical code of every tuple in ``G^r`` under simultaneous conjugation.

    The canonical tuple of an orbit is its lexicographically least member;
    entry ``c`` of the result is the code of the canonical form of the tuple
    with code ``c``.
    """
    n = G.order
    total = n**r
    check_states(total, max_states)
    digits = decode(np.arange(total, dtype=np.int64), n, r)
    best = np.arange(total, dtype=np.int64)
    conj = G.conjugation
    weights = n ** np.arange(r - 1, -1, -1, dtype=np.int64)
    for h in range(1, n):
        if r == 0:
            break
        cand = (conj[h][digits].astype(np.int64) * weights).sum(axis=1)
        np.minimum(best, cand, out=best)
    return best


def tuple_class_representatives(G: FiniteGroup, r: int, max_states=None) -> list[tuple[int, ...]]:
    """Lexicographically least tuple of every conjugation orbit, sorted."""
    reps = np.unique(canonical_codes(G, r, max_states))
    return [tuple(int(x) for x in row) for row in decode(reps, G.order, r)]


def canonical_tuple(G: FiniteGroup, tup) -> tuple[int, ...]:
    tup = np.asarray(tup, dtype=np.int64)
    if tup.size == 0:
        return ()
    conj = G.conjugation[:, tup]  # (n, r) all conjugates
    best = conj[np.lexsort(conj.T[::-1])[0]]
    return tuple(int(x) for x in best)


def count_tuple_classes(G: FiniteGroup, r: int) -> int:
    """Burnside count of conjugation orbits on ``G^r``: mean of |C(g)|^r."""
    total = sum(int(c) ** r for c in G.centralizer_orders)
    count, rem = divmod(total, G.order)
    assert rem == 0
    return count

"""Combinatorial closed-fiber models: parsing, validation, refinement, blow-up.

A model lists the irreducible components of the closed fiber, a finite set of
marked closed points, and for every marked point the number of analytic
branches it has on each component.  Every marked point must be listed, in
particular every point where the fiber is not unibranched; the tool has no
way of checking this and says so with a ``hyp-unverifiable`` warning.

The text format is line oriented::

    # a rational nodal curve
    component C
    point Q on C:2
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ModelError

IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_IDENT_RE = re.compile(IDENT)
_TOKEN_RE = re.compile(r"\S+")
_BRANCH_RE = re.compile(rf"({IDENT}):(\S*)")


@dataclass(frozen=True)
class ClosedFiberModel:
    """Components, marked points and branch multiplicities.

    ``incidences`` holds one ``(point, component, count)`` triple per
    nonzero multiplicity, grouped by point in point order and, within a
    point, in the order the branches were written.
    """

    components: tuple[str, ...]
    points: tuple[str, ...]
    incidences: tuple[tuple[str, str, int], ...] = ()

    @classmethod
    def build(cls, components, points) -> "ClosedFiberModel":
        """Build from components and a ``{point: {component: count}}`` mapping."""
        incidences = []
        for p, branches in points.items():
            for c, b in branches.items():
                if b:
                    incidences.append((p, c, int(b)))
        return cls(tuple(components), tuple(points), tuple(incidences))

    @property
    def branches(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {p: {} for p in self.points}
        for p, c, b in self.incidences:
            out.setdefault(p, {})[c] = b
        return out

    def branch_count(self, point: str, component: str) -> int:
        for p, c, b in self.incidences:
            if p == point and c == component:
                return b
        return 0

    def total_branches(self, point: str) -> int:
        return sum(b for p, _, b in self.incidences if p == point)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    location: str | None = None


@dataclass(frozen=True)
class Diagnostics:
    items: tuple[Diagnostic, ...] = field(default_factory=tuple)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.items if d.severity == "error"]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.items if d.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> list[str]:
        return [d.code for d in self.items]

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


# -- parsing ---------------------------------------------------------------


def parse_model(text: str) -> ClosedFiberModel:
    """Parse model source text.

    Raises :class:`ModelError` with codes ``syntax``, ``duplicate-identifier``,
    ``nonpositive-count`` or ``undeclared-component``; line and column are
    1-based.
    """
    components: list[str] = []
    points: list[str] = []
    incidences: list[tuple[str, str, int]] = []
    seen: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN_RE.finditer(line)]
        if not tokens:
            continue
        keyword, kcol = tokens[0]

        def ident(tok, col, what):
            if not _IDENT_RE.fullmatch(tok):
                raise ModelError("syntax", f"invalid {what} identifier {tok!r}", lineno, col)
            if tok in seen:
                raise ModelError("duplicate-identifier", f"{tok!r} already declared", lineno, col)
            seen.add(tok)
            return tok

        if keyword == "component":
            if len(tokens) != 2:
                col = tokens[2][1] if len(tokens) > 2 else len(line) + 1
                raise ModelError("syntax", "expected: component <ident>", lineno, col)
            components.append(ident(*tokens[1], "component"))
        elif keyword == "point":
            if len(tokens) < 4 or tokens[2][0] != "on":
                col = tokens[2][1] if len(tokens) > 2 else len(line) + 1
                raise ModelError("syntax", "expected: point <ident> on <comp>:<count> ...", lineno, col)
            name = ident(*tokens[1], "point")
            on_this_point: set[str] = set()
            for tok, col in tokens[3:]:
                m = _BRANCH_RE.fullmatch(tok)
                if m is None:
                    raise ModelError("syntax", f"expected <comp>:<count>, got {tok!r}", lineno, col)
                comp, count = m.group(1), m.group(2)
                ccol = col + len(comp) + 1
                if not re.fullmatch(r"[+-]?\d+", count):
                    raise ModelError("syntax", f"count must be a decimal integer, got {count!r}", lineno, ccol)
                if int(count) <= 0:
                    raise ModelError("nonpositive-count", f"branch count {count} must be positive", lineno, ccol)
                if comp not in components:
                    raise ModelError("undeclared-component", f"component {comp!r} is not declared", lineno, col)
                if comp in on_this_point:
                    raise ModelError("duplicate-identifier", f"{comp!r} listed twice for point {name!r}", lineno, col)
                on_this_point.add(comp)
                incidences.append((name, comp, int(count)))
            points.append(name)
        else:
            raise ModelError("syntax", f"unknown keyword {keyword!r}", lineno, kcol)

    return ClosedFiberModel(tuple(components), tuple(points), tuple(incidences))


def serialize_model(model: ClosedFiberModel) -> str:
    lines = [f"component {c}" for c in model.components]
    by_point = model.branches
    for p in model.points:
        branches = " ".join(f"{c}:{b}" for c, b in by_point.get(p, {}).items())
        lines.append(f"point {p} on {branches}" if branches else f"point {p} on")
    return "\n".join(lines) + "\n"


# -- validation ------------------------------------------------------------

HYP_WARNING = Diagnostic(
    "warning",
    "hyp-unverifiable",
    "the marked points are assumed to include every point where the fiber is "
    "not unibranched; unlisted singular points cannot be detected",
)


def validate(model: ClosedFiberModel) -> Diagnostics:
    """Check internal consistency; never raises."""
    out: list[Diagnostic] = []
    comps, pts = set(model.components), set(model.points)

    for ident in set(model.components) & set(model.points):
        out.append(Diagnostic("error", "duplicate-identifier", f"{ident!r} is both a point and a component", ident))
    for seq, what in ((model.components, "component"), (model.points, "point")):
        if len(set(seq)) != len(seq):
            out.append(Diagnostic("error", "duplicate-identifier", f"repeated {what} identifier"))

    for p, c, b in model.incidences:
        if p not in pts:
            out.append(Diagnostic("error", "undeclared-point", f"branch data for unknown point {p!r}", p))
        if c not in comps:
            out.append(Diagnostic("error", "undeclared-component", f"point {p!r} lies on unknown component {c!r}", p))
        if b < 0:
            out.append(Diagnostic("error", "negative-count", f"b({p},{c}) = {b}", p))

    for p in model.points:
        if model.total_branches(p) < 1:
            out.append(Diagnostic("error", "point-without-branch", f"point {p!r} has no branches", p))
    carried = {c for _, c, b in model.incidences if b >= 1}
    for c in model.components:
        if c not in carried:
            out.append(Diagnostic("error", "component-without-point", f"component {c!r} carries no marked point", c))

    if model.components and not _incidence_connected(model):
        out.append(Diagnostic("error", "disconnected-fiber", "the closed fiber is not connected"))
    if not model.components:
        out.append(Diagnostic("error", "empty-model", "no components declared"))

    out.append(HYP_WARNING)
    return Diagnostics(tuple(out))


def _incidence_connected(model: ClosedFiberModel) -> bool:
    adj: dict[str, set[str]] = {v: set() for v in (*model.points, *model.components)}
    for p, c, b in model.incidences:
        if b >= 1 and p in adj and c in adj:
            adj[p].add(c)
            adj[c].add(p)
    if not adj:
        return True
    start = next(iter(adj))
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def require_valid(model: ClosedFiberModel) -> None:
    errors = validate(model).errors
    if errors:
        first = errors[0]
        raise ModelError(first.code, first.message)


# -- transformations -------------------------------------------------------


def _fresh_prime(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base + "'"
    while name in taken:
        name += "'"
    return name


def _fresh_exceptional(taken: Iterable[str]) -> str:
    taken = set(taken)
    k = 1
    while f"E{k}" in taken:
        k += 1
    return f"E{k}"


def _names(model: ClosedFiberModel) -> set[str]:
    return set(model.components) | set(model.points)


def refine(model: ClosedFiberModel, component: str) -> ClosedFiberModel:
    """Mark one more smooth point on ``component``.

    The new point is named ``Q'`` (more primes if taken) and has a single
    branch on ``component``; it becomes a leaf of the reduction graph.
    """
    if component not in model.components:
        raise ModelError("unknown-component", f"no component {component!r}")
    new = _fresh_prime("Q", _names(model))
    return ClosedFiberModel(
        model.components,
        model.points + (new,),
        model.incidences + ((new, component, 1),),
    )


def blowup(model: ClosedFiberModel, point: str) -> ClosedFiberModel:
    """Blow up a smooth or normal-crossing marked point.

    A smooth point (one branch) is replaced by a point joining its component
    to a new exceptional component.  A normal crossing (two branches of
    multiplicity one, on one component or on two) is replaced by two points,
    each joining the exceptional component to one of the original branches.
    Anything else raises ``unsupported-singularity``.
    """
    if point not in model.points:
        raise ModelError("unknown-point", f"no point {point!r}")
    arms = [(c, b) for p, c, b in model.incidences if p == point and b > 0]
    total = sum(b for _, b in arms)
    if total == 1:
        carriers = [arms[0][0]]
    elif total == 2 and all(b in (1, 2) for _, b in arms):
        # self-node: two branches on the same component
        carriers = [arms[0][0], arms[0][0]] if len(arms) == 1 else [arms[0][0], arms[1][0]]
    else:
        raise ModelError(
            "unsupported-singularity",
            f"point {point!r} has {total} branches; only smooth points and ordinary double points can be blown up",
        )

    names = _names(model) - {point}
    exc = _fresh_exceptional(names)
    names.add(exc)
    new_points, new_incidences = [], []
    for carrier in carriers:
        q = _fresh_prime(point, names)
        names.add(q)
        new_points.append(q)
        new_incidences += [(q, carrier, 1), (q, exc, 1)]

    points, incidences = [], []
    for p in model.points:
        points.extend(new_points if p == point else [p])
    for inc in model.incidences:
        if inc[0] == point:
            if not new_incidences:
                continue
            incidences.extend(new_incidences)
            new_incidences = []
        else:
            incidences.append(inc)
    return ClosedFiberModel(model.components + (exc,), tuple(points), tuple(incidences))


def blowup_shape(model: ClosedFiberModel, point: str) -> str | None:
    """``"smooth"``, ``"node"`` or None when ``point`` cannot be blown up."""
    arms = [b for p, _, b in model.incidences if p == point and b > 0]
    if sum(arms) == 1:
        return "smooth"
    if sum(arms) == 2:
        return "node"
    return None


# -- random models ---------------------------------------------------------


def random_model(rng: random.Random, max_components: int = 4, max_points: int = 5, max_branch: int = 2) -> ClosedFiberModel:
    """A random valid model; connectivity is forced by a random spanning tree."""
    nc = rng.randint(1, max_components)
    comps = [f"C{i + 1}" for i in range(nc)]
    pts: dict[str, dict[str, int]] = {}

    # glue components along a random tree, one point per tree edge
    for i in range(1, nc):
        j = rng.randrange(i)
        pts[f"P{len(pts) + 1}"] = {comps[j]: 1, comps[i]: 1}
    if not pts:
        pts["P1"] = {comps[0]: rng.randint(1, max_branch)}
    extra = rng.randint(0, max(0, max_points - len(pts)))
    for _ in range(extra):
        k = rng.randint(1, min(2, nc))
        chosen = rng.sample(comps, k)
        pts[f"P{len(pts) + 1}"] = {c: rng.randint(1, max_branch) for c in chosen}
    return ClosedFiberModel.build(comps, pts)

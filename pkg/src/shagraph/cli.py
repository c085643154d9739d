"""``shagraph`` command line.

Exit status 0 on success, 1 on domain errors or failed cross-checks, 2 on
usage errors.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import covers, graph as graphs, groups, model as models, mv, sha
from .errors import DEFAULT_MAX_ORDER, ShagraphError, max_states

CHECKS = ("double-coset", "quotient-exactness", "trans-factor", "homotopy")
DEFAULT_SEED = 20240101


@dataclass
class RunConfig:
    subcommand: str
    model_path: str | None = None
    model_text: str | None = None
    groups: list[str] = field(default_factory=list)
    degree: int | None = None
    connected_only: bool = False
    format: str = "json"
    max_states: int | None = None
    max_order: int = DEFAULT_MAX_ORDER
    check: str | None = None
    seed: int = DEFAULT_SEED
    samples: int = 50
    normal: str | None = None
    point: str | None = None
    component: str | None = None

    def __post_init__(self):
        if self.max_states is not None and self.max_states <= 0:
            raise ValueError("state cap must be positive")
        if self.max_order <= 0:
            raise ValueError("order cap must be positive")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--model", dest="model_path", help="model file (.sg), '-' for stdin")
    src.add_argument("--model-text", help="inline model source")
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--max-states", type=int, help="enumeration cap (overrides SHAGRAPH_MAX_STATES)")
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="cap for permutation closures")

    p = argparse.ArgumentParser(prog="shagraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("graph", parents=[common], help="reduction graph")
    sub.add_parser("pi1", parents=[common], help="free generators of pi_1")
    c = sub.add_parser("covers", parents=[common], help="covers of given degree up to isomorphism")
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--connected", dest="connected_only", action="store_true")
    s = sub.add_parser("sha", parents=[common], help="obstruction set for a component group")
    s.add_argument("--group", dest="groups", action="append", required=True)
    sub.add_parser("witt-kernel", parents=[common], help="kernel of the Witt-group local-global map")
    b = sub.add_parser("blowup", parents=[common], help="blow up a marked point")
    b.add_argument("--point", required=True)
    r = sub.add_parser("refine", parents=[common], help="mark an extra smooth point")
    r.add_argument("--component", required=True)
    v = sub.add_parser("verify", parents=[common], help="cross-checks")
    v.add_argument("check", choices=CHECKS)
    v.add_argument("--group", dest="groups", action="append", default=[])
    v.add_argument("--normal", help="normal subgroup: 'center', 'derived' or comma-separated generators")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--samples", type=int, default=50)
    return p


def _load_model(cfg: RunConfig) -> models.ClosedFiberModel:
    if cfg.model_text is not None:
        text = cfg.model_text.replace("\\n", "\n")
    elif cfg.model_path == "-":
        text = sys.stdin.read()
    elif cfg.model_path:
        text = Path(cfg.model_path).read_text(encoding="utf-8")
    else:
        raise ShagraphError("no-model", "a model is required (--model or --model-text)")
    model = models.parse_model(text)
    diags = models.validate(model)
    for d in diags:
        print(f"{d.severity}: {d.code}: {d.message}", file=sys.stderr)
    models.require_valid(model)
    return model


def _group(cfg: RunConfig, i: int = 0, default: str | None = None) -> tuple[str, groups.FiniteGroup]:
    spec = cfg.groups[i] if len(cfg.groups) > i else default
    if spec is None:
        raise ShagraphError("no-group", "a group spec is required (--group)")
    return spec, groups.build_group(spec, cfg.max_order)


def _element(G: groups.FiniteGroup, token: str) -> int:
    token = token.strip()
    if token in G.labels:
        return G.labels.index(token)
    try:
        x = int(token)
    except ValueError:
        raise ShagraphError("bad-element", f"{token!r} is neither an element label nor an index") from None
    if not 0 <= x < G.order:
        raise ShagraphError("bad-element", f"element index {x} out of range")
    return x


def _normal_subgroup(G: groups.FiniteGroup, text: str | None) -> groups.Subgroup:
    if text is None or text == "center":
        return groups.subgroup(G, [g for g in range(G.order) if G.centralizer_orders[g] == G.order])
    if text == "derived":
        comm = {G.word(G.inv(a), G.inv(b), a, b) for a in range(G.order) for b in range(G.order)}
        return groups.subgroup(G, sorted(comm))
    gens = [_element(G, t) for t in groups._split_top_level(text)] if text else []
    N = groups.subgroup(G, gens)
    if not N.is_normal:
        raise ShagraphError("not-normal", f"subgroup generated by {text!r} is not normal")
    return N


# -- subcommands -------------------------------------------------------------


def cmd_graph(cfg):
    g = graphs.from_model(_load_model(cfg))
    if cfg.format == "dot":
        return graphs.to_dot(g)
    return {
        "kind": "graph",
        "graph_fingerprint": g.fingerprint(),
        **g.to_json(),
        "vertex_count": len(g.vertices),
        "edge_count": len(g.edges),
        "rank": graphs.cycle_rank(g),
        "is_tree": graphs.is_tree(g),
    }


def cmd_pi1(cfg):
    g = graphs.from_model(_load_model(cfg))
    gauge = graphs.spanning_gauge(g)
    return {
        "kind": "pi1",
        "graph_fingerprint": g.fingerprint(),
        "rank": gauge.rank,
        "root": gauge.root,
        "tree_edges": list(gauge.tree_edges),
        "generators": [
            {"edge": e, "triple": list(g.edges[e]), "loop": [[k, s] for k, s in graphs.fundamental_cycle(g, gauge, e)]}
            for e in gauge.cotree_edges
        ],
    }


def cmd_covers(cfg):
    g = graphs.from_model(_load_model(cfg))
    found = covers.enumerate_covers(g, cfg.degree, cfg.connected_only, cfg.max_states)
    return {
        "kind": "covers",
        "graph_fingerprint": g.fingerprint(),
        "rank": graphs.cycle_rank(g),
        "degree": cfg.degree,
        "connected_only": cfg.connected_only,
        "count": len(found),
        "classes": [
            {"images": c.to_json()["images"], "connected": covers.is_connected(c)} for c in found
        ],
    }


def cmd_sha(cfg):
    g = graphs.from_model(_load_model(cfg))
    spec, G = _group(cfg)
    s = sha.compute_sha(g, G, cfg.max_states)
    return {
        "kind": "sha",
        "graph_fingerprint": g.fingerprint(),
        "group_spec": spec,
        "group_order": G.order,
        "rank": s.rank,
        "size": s.size,
        "representatives": s.labelled(),
        "pointed_index": s.pointed_index,
        "oracle_count": sha.sha_count_burnside(g, G),
        "criteria": {"trivial": sha.is_lgp_trivial(g, G)},
    }


def cmd_witt_kernel(cfg):
    g = graphs.from_model(_load_model(cfg))
    w = sha.witt_kernel(g)
    return {
        "kind": "witt-kernel",
        "graph_fingerprint": g.fingerprint(),
        "rank": w.rank,
        "order": w.order,
        "representatives": [list(t) for t in w.representatives],
        "trivial": w.order == 1,
        "note": w.note,
    }


def _model_report(kind, before, after):
    gb, ga = graphs.from_model(before), graphs.from_model(after)
    return {
        "kind": kind,
        "model": models.serialize_model(after),
        "rank_before": graphs.cycle_rank(gb),
        "rank_after": graphs.cycle_rank(ga),
        "components": list(after.components),
        "points": list(after.points),
    }


def cmd_blowup(cfg):
    m = _load_model(cfg)
    out = models.blowup(m, cfg.point)
    if cfg.format == "dot":
        return graphs.to_dot(graphs.from_model(out))
    return _model_report("blowup", m, out)


def cmd_refine(cfg):
    m = _load_model(cfg)
    out = models.refine(m, cfg.component)
    if cfg.format == "dot":
        return graphs.to_dot(graphs.from_model(out))
    return _model_report("refine", m, out)


def cmd_verify(cfg):
    check = cfg.check
    if check == "homotopy":
        return _verify_homotopy(cfg)
    g = graphs.from_model(_load_model(cfg))
    spec, G = _group(cfg)
    report = {"kind": "verify", "check": check, "graph_fingerprint": g.fingerprint(), "group_spec": spec}
    if check == "double-coset":
        system = mv.FactorizationSystem.from_graph(g, G, max_states=cfg.max_states)
        s = sha.compute_sha(g, G, cfg.max_states)
        report.update(
            orbits=system.orbit_count,
            sha=s.size,
            pointed_orbit_size=system.pointed_orbit_size,
            passed=system.orbit_count == s.size,
        )
    elif check == "quotient-exactness":
        N = _normal_subgroup(G, cfg.normal)
        rep = sha.quotient_sequence_check(g, G, N, cfg.max_states)
        report.update(
            normal_subgroup=list(N.elements),
            sizes=list(rep.sizes),
            trivial_kernel=rep.trivial_kernel.holds,
            image_equals_kernel=rep.image_is_kernel.holds,
            surjective=rep.surjective.holds,
            first_map_injective=rep.first_map_injective,
            passed=rep.exact,
        )
    else:
        N = _normal_subgroup(G, cfg.normal)
        system = mv.FactorizationSystem.from_graph(g, G, max_states=cfg.max_states)
        rep = mv.trans_factor_check(system, N)
        report.update(
            normal_subgroup=list(N.elements),
            bijective=rep.bijective,
            lifts_factor=rep.lifts_factor,
            orbit_counts=list(rep.orbit_counts),
            passed=rep.agree,
        )
    return report


def _verify_homotopy(cfg):
    specs = cfg.groups or ["C2", "S3"]
    gs = [(s, groups.build_group(s, cfg.max_order)) for s in specs]
    if cfg.model_path or cfg.model_text is not None:
        samples = [_load_model(cfg)]
    else:
        rng = random.Random(cfg.seed)
        samples = [models.random_model(rng, max_components=3, max_points=3) for _ in range(cfg.samples)]
    failures = []
    checked = 0
    for m in samples:
        variants = [models.refine(m, c) for c in m.components]
        variants += [models.blowup(m, p) for p in m.points if models.blowup_shape(m, p)]
        base = graphs.from_model(m)
        r0 = graphs.cycle_rank(base)
        sizes0 = [sha.compute_sha(base, G, cfg.max_states).size for _, G in gs]
        for v in variants:
            gv = graphs.from_model(v)
            sizes = [sha.compute_sha(gv, G, cfg.max_states).size for _, G in gs]
            checked += 1
            if graphs.cycle_rank(gv) != r0 or sizes != sizes0:
                failures.append(models.serialize_model(v))
    return {
        "kind": "verify",
        "check": "homotopy",
        "group_specs": specs,
        "seed": cfg.seed,
        "models": len(samples),
        "variants_checked": checked,
        "failures": failures[:10],
        "passed": not failures,
    }


COMMANDS = {
    "graph": cmd_graph,
    "pi1": cmd_pi1,
    "covers": cmd_covers,
    "sha": cmd_sha,
    "witt-kernel": cmd_witt_kernel,
    "blowup": cmd_blowup,
    "refine": cmd_refine,
    "verify": cmd_verify,
}


def render_text(data, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for key, value in data.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        elif isinstance(value, str) and "\n" in value:
            lines.append(f"{pad}{key}:")
            lines.extend(f"{pad}  {ln}" for ln in value.rstrip("\n").splitlines())
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  -")
                lines.append(render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {json.dumps(value)}")
    return "\n".join(lines)


def run(argv=None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(**vars(ns))
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    if cfg.format == "dot" and cfg.subcommand not in ("graph", "blowup", "refine"):
        print("usage error: --format dot is only available for graph, blowup and refine", file=sys.stderr)
        return 2
    if cfg.max_states is None:
        cfg.max_states = max_states()
    try:
        result = COMMANDS[cfg.subcommand](cfg)
    except ShagraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, str):
        sys.stdout.write(result)
        return 0
    if cfg.format == "text":
        sys.stdout.write(render_text(result) + "\n")
    else:
        sys.stdout.write(json.dumps(result, indent=2, sort_keys=True) + "\n")
    return 0 if result.get("passed", True) else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

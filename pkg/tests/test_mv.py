import itertools
import random

import pytest

from shagraph.errors import GroupError, ShagraphError, StateCapError
from shagraph.graph import from_model
from shagraph.groups import all_subgroups, build_group, normal_subgroups, subgroup
from shagraph.mv import (
    FactorizationSystem,
    coboundary_orbits,
    factorizes,
    same_fiber,
    trans_factor_check,
)
from shagraph.sha import compute_sha

import oracles
from conftest import NODAL, PATH, chain, rank_model
from shagraph.model import parse_model


def constant(text_or_model, spec):
    m = parse_model(text_or_model) if isinstance(text_or_model, str) else text_or_model
    return FactorizationSystem.from_graph(from_model(m), build_group(spec))


def test_single_edge_one_orbit():
    sys_ = FactorizationSystem(["P", "U"], [(0, 1)], build_group("S3"))
    assert sys_.orbit_count == 1
    assert all(factorizes(sys_, (g,)) for g in range(6))


def test_nodal_c2_orbits():
    sys_ = constant(NODAL, "C2")
    assert coboundary_orbits(sys_) == [[(0, 0), (1, 1)], [(0, 1), (1, 0)]]
    assert sys_.pointed_orbit_size == 2


def test_nodal_c2_factorization():
    sys_ = constant(NODAL, "C2")
    assert factorizes(sys_, (1, 1))
    assert not factorizes(sys_, (0, 1))
    # u at the point vertex = 1, identity at the component: (1,1) = (u_r^-1 u_l, u_r^-1 u_l)
    assert sys_.act((0, 0), [1, 0]) == (1, 1)


def test_nodal_c2_fibers():
    sys_ = constant(NODAL, "C2")
    assert same_fiber(sys_, (0, 0), (0, 0))
    assert same_fiber(sys_, (0, 0), (1, 1))
    assert not same_fiber(sys_, (0, 0), (0, 1))


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("spec", ["C3", "S3", "D4"])
def test_tree_systems_one_orbit(k, spec):
    assert constant(chain(k), spec).orbit_count == 1


@pytest.mark.parametrize("spec", ["C2", "C3", "S3", "D4", "C2xC2"])
@pytest.mark.parametrize("text", [NODAL, PATH, "component C\npoint Q on C:3", "component C1\ncomponent C2\npoint P1 on C1:1 C2:1\npoint P2 on C1:1 C2:1"])
def test_orbits_against_brute_force(spec, text):
    G = build_group(spec)
    g = from_model(parse_model(text))
    sys_ = FactorizationSystem.from_graph(g, G)
    brute = oracles.double_coset_orbits(list(range(G.order)), G.mul, G.inv, g.oriented_edges(), len(g.vertices))
    assert sorted(sorted(o) for o in brute) == [sorted(o) for o in sys_.orbits()]
    assert sys_.orbit_count == compute_sha(g, G).size


def test_orbits_with_proper_vertex_subgroups_against_brute_force():
    G = build_group("S3")
    g = from_model(parse_model(NODAL))
    H = subgroup(G, [G.labels.index("213")])
    full = subgroup(G, range(6))
    sys_ = FactorizationSystem.from_graph(g, G, {"Q": H, "C": full})
    brute = oracles.double_coset_orbits(list(range(6)), G.mul, G.inv, g.oriented_edges(), 2, [list(H.elements), list(range(6))])
    assert sorted(sorted(o) for o in brute) == [sorted(o) for o in sys_.orbits()]


def test_orbits_sorted_by_least_member():
    sys_ = constant("component C\npoint Q on C:3", "S3")
    orbits = sys_.orbits()
    assert [min(o) for o in orbits] == sorted(min(o) for o in orbits)
    assert orbits[0][0] == (0, 0, 0)


@pytest.mark.parametrize("spec", ["S3", "D4", "C4"])
def test_identity_tuple_always_factorizes(spec):
    G = build_group(spec)
    for text in [NODAL, PATH, "component C\npoint Q on C:3"]:
        g = from_model(parse_model(text))
        for H in all_subgroups(G)[:4]:
            sys_ = FactorizationSystem.from_graph(g, G, [H] * len(g.vertices))
            assert factorizes(sys_, (0,) * len(g.edges))


@pytest.mark.parametrize("spec", ["S3", "D4"])
def test_orientation_reversal_invariance(spec):
    G = build_group(spec)
    g = from_model(parse_model("component C\npoint Q on C:3"))
    triples = g.oriented_edges()
    base = FactorizationSystem(g.vertices, triples, G)
    for k in range(len(triples)):
        flipped = list(triples)
        flipped[k] = (triples[k][1], triples[k][0])
        other = FactorizationSystem(g.vertices, flipped, G)
        for orb in base.orbits():
            moved = {t[:k] + (G.inv(t[k]),) + t[k + 1:] for t in orb}
            labels = {int(other.orbit_labels[other.encode(t)]) for t in moved}
            assert len(labels) == 1
        assert other.orbit_count == base.orbit_count


def test_same_fiber_abelian_difference():
    """For abelian G, same fiber iff the difference tuple factorizes."""
    G = build_group("C2xC2")
    sys_ = constant("component C\npoint Q on C:3", "C2xC2")
    for t in itertools.product(range(4), repeat=3):
        for t2 in itertools.product(range(4), repeat=3):
            diff = tuple(G.mul(a, G.inv(b)) for a, b in zip(t, t2))
            assert same_fiber(sys_, t, t2) == factorizes(sys_, diff)
        if t[0] > 0:
            break


def test_state_cap():
    sys_ = FactorizationSystem.from_graph(from_model(rank_model(5)), build_group("S3"), max_states=1000)
    with pytest.raises(StateCapError):
        sys_.orbit_count


def test_bad_tuple():
    sys_ = constant(NODAL, "C2")
    with pytest.raises(ShagraphError):
        factorizes(sys_, (0, 2))
    with pytest.raises(ShagraphError):
        factorizes(sys_, (0,))


def test_disconnected_system_rejected():
    with pytest.raises(ShagraphError):
        FactorizationSystem(["a", "b", "c"], [(0, 1)], build_group("C2"))


# -- trans_factor ------------------------------------------------------------


def test_trans_factor_s3_a3_nodal():
    """Both sides fail here: Sha(S3) has 3 classes over rank 1, Sha(C2) has 2."""
    G = build_group("S3")
    A3 = subgroup(G, [G.labels.index("231")])
    rep = trans_factor_check(FactorizationSystem.from_graph(from_model(parse_model(NODAL)), G), A3)
    assert rep.orbit_counts == (3, 2)
    assert not rep.bijective and not rep.lifts_factor
    assert rep.agree
    a, b = rep.counterexample_ii
    assert a != b


def test_trans_factor_trivial_normal_subgroup():
    G = build_group("D4")
    sys_ = FactorizationSystem.from_graph(from_model(parse_model(NODAL)), G)
    rep = trans_factor_check(sys_, subgroup(G, []))
    assert rep.bijective and rep.lifts_factor


@pytest.mark.parametrize("spec", ["S3", "D4", "C4"])
def test_trans_factor_tree_holds(spec):
    G = build_group(spec)
    sys_ = FactorizationSystem.from_graph(from_model(chain(3)), G)
    for N in normal_subgroups(G):
        rep = trans_factor_check(sys_, N)
        assert rep.bijective and rep.lifts_factor


def test_trans_factor_nonvacuous_with_vertex_subgroups():
    """A proper vertex subgroup makes side (i) hold for a non-trivial quotient."""
    G = build_group("C4")
    N = subgroup(G, [2])
    g = from_model(parse_model(PATH))
    # vertex groups: full at the point, N at both components; every tuple still factorizes
    sys_ = FactorizationSystem.from_graph(g, G, {"C1": N, "C2": N})
    rep = trans_factor_check(sys_, N)
    assert rep.agree and rep.bijective


def test_trans_factor_requires_normal():
    G = build_group("S3")
    with pytest.raises(GroupError):
        trans_factor_check(constant(NODAL, "S3"), subgroup(G, [1]))


def test_trans_factor_random_vertex_subgroups_agree():
    rng = random.Random(3)
    G = build_group("D4")
    subs = all_subgroups(G)
    g = from_model(parse_model("component C1\ncomponent C2\npoint P on C1:2 C2:1"))
    outcomes = set()
    for _ in range(25):
        vs = [rng.choice(subs) for _ in g.vertices]
        sys_ = FactorizationSystem.from_graph(g, G, vs)
        for N in normal_subgroups(G):
            rep = trans_factor_check(sys_, N)
            assert rep.agree
            outcomes.add(rep.bijective)
    assert outcomes == {True, False}

import pytest

from shagraph.errors import GroupError, StateCapError
from shagraph.graph import from_model
from shagraph.groups import build_group, cyclic, normal_subgroups, subgroup
from shagraph.sha import (
    compute_sha,
    is_lgp_trivial,
    quotient_sequence_check,
    sha_count_burnside,
    witt_kernel,
    witt_sha_match,
)

import oracles
from conftest import chain, rank_model


def test_tree_sha_trivial():
    for spec in ["C2", "S3", "D4"]:
        s = compute_sha(from_model(chain(4)), build_group(spec))
        assert s.size == 1 and s.representatives == ((),)


def test_rank1_c2(nodal):
    s = compute_sha(from_model(nodal), build_group("C2"))
    assert s.size == 2
    assert s.representatives == ((0,), (1,))


def test_rank2_s3():
    s = compute_sha(2, build_group("S3"))
    assert s.size == 11
    assert s.representatives[0] == (0, 0)
    assert list(s.representatives) == sorted(s.representatives)


def test_representatives_pairwise_non_conjugate():
    G = build_group("D4")
    s = compute_sha(2, G)
    elems, mul, inv = list(range(8)), G.mul, G.inv
    orbits = oracles.tuple_orbits(elems, mul, inv, 2)
    owner = {t: i for i, o in enumerate(orbits) for t in o}
    assert len({owner[t] for t in s.representatives}) == s.size == len(orbits)


def test_burnside_values():
    assert sha_count_burnside(1, build_group("S3")) == 3
    for r in range(5):
        assert sha_count_burnside(r, build_group("C2")) == 2**r
    assert sha_count_burnside(0, build_group("D4")) == 1


def test_burnside_formula_by_hand():
    # (1/6)(6^2 + 3*2^2 + 2*3^2) = 11
    assert (36 + 3 * 4 + 2 * 9) // 6 == 11 == sha_count_burnside(2, build_group("S3"))


def test_lgp_triviality():
    assert is_lgp_trivial(from_model(chain(3)), build_group("S3"))
    assert is_lgp_trivial(1, build_group("C1"))
    assert not is_lgp_trivial(1, build_group("C2"))


def test_sha_cap():
    with pytest.raises(StateCapError):
        compute_sha(4, build_group("S4"), max_states=1000)


def test_witt_kernel():
    assert witt_kernel(from_model(chain(2))).order == 1
    assert witt_kernel(1).order == 2
    w = witt_kernel(from_model(rank_model(3)))
    assert (w.rank, w.order) == (3, 8)
    assert len(set(w.representatives)) == 8


@pytest.mark.parametrize("r", range(5))
def test_witt_matches_sha_c2(r):
    assert witt_sha_match(r)


def test_abelian_product_structure():
    s = compute_sha(2, cyclic(2))
    # componentwise XOR on the four classes
    assert [[s.product(i, j) for j in range(4)] for i in range(4)] == [
        [0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0],
    ]
    with pytest.raises(GroupError):
        compute_sha(1, build_group("S3")).product(1, 1)


def test_quotient_sequence_s3_a3():
    G = build_group("S3")
    A3 = subgroup(G, [G.labels.index("231")])
    rep = quotient_sequence_check(1, G, A3)
    assert rep.sizes == (3, 3, 2)
    assert rep.exact
    # kernel of Sha(S3) -> Sha(C2): identity class and the 3-cycle class
    s = compute_sha(1, G)
    assert sorted(s.representatives[i] for i in rep.image_is_kernel.witness) == [(0,), (G.labels.index("231"),)]
    # trivial kernel but 2-to-1 onto the image
    assert not rep.first_map_injective
    assert sorted(rep.first_map) == [0, 2, 2]


def test_quotient_sequence_tree():
    G = build_group("D4")
    for N in normal_subgroups(G):
        rep = quotient_sequence_check(0, G, N)
        assert rep.sizes == (1, 1, 1) and rep.exact


def test_quotient_sequence_c4_c2():
    G = build_group("C4")
    rep = quotient_sequence_check(1, G, subgroup(G, [2]))
    assert rep.sizes == (2, 4, 2)
    assert rep.exact
    assert rep.first_map_injective


def test_quotient_sequence_requires_normal():
    G = build_group("S3")
    with pytest.raises(GroupError):
        quotient_sequence_check(1, G, subgroup(G, [1]))


def test_sha_invariant_under_blowup_and_refine(loop2):
    from shagraph.model import blowup, refine

    G = build_group("S3")
    base = compute_sha(from_model(loop2), G).size
    for m in (blowup(loop2, "P1"), refine(loop2, "C2")):
        assert compute_sha(from_model(m), G).size == base


def test_connected_galois_classes_match_surjective_sha_reps():
    """Surjective classes in Hom(F_2, S3)/~ versus connected S3-Galois covers.

    S3 has only inner automorphisms, so distinct classes must give
    non-isomorphic covers.
    """
    import itertools

    from shagraph.covers import are_isomorphic, from_hom, is_connected, is_galois

    G = build_group("S3")
    s = compute_sha(2, G)
    surj = [t for t in s.representatives if subgroup(G, t).order == G.order]
    epis = [t for t in itertools.product(range(6), repeat=2) if subgroup(G, t).order == 6]
    assert len(surj) == len(epis) // G.order == 3
    covers = [from_hom(G, t) for t in surj]
    assert all(is_connected(c) and is_galois(c).order == 6 for c in covers)
    for i, a in enumerate(covers):
        for b in covers[i + 1:]:
            assert are_isomorphic(a, b) is None

from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from mdentropy import lattice as L


def brute(kind, dims, deleted=()):
    return L.matching_counts_bruteforce(L.build_graph(kind, dims, deleted))


def test_path_graph():
    g = L.build_graph("box", (4,))
    assert g.nsites == 4 and len(g.edges) == 3


def test_torus_is_regular():
    g = L.build_graph("torus", (4, 4))
    assert g.nsites == 16 and len(g.edges) == 32
    assert all(g.degree(v) == 4 for v in g.vertices)


def test_punctured_box():
    g = L.build_graph("box", (2, 3), [(1, 1)])
    assert g.kind == "punctured-box"
    assert g.nsites == 5 and len(g.edges) == 5


def test_graph_errors():
    with pytest.raises(L.LatticeError):
        L.build_graph("box", (2, 3), [(3, 1)])
    with pytest.raises(L.LatticeError):
        L.build_graph("torus", (3, 3), [(1, 1)])
    with pytest.raises(L.LatticeError):
        L.build_graph("box", (0, 3))
    with pytest.raises(L.LatticeError):
        L.build_graph("sphere", (3,))


def test_no_duplicate_edges():
    for kind in ("box", "torus"):
        for dims in [(1,), (2,), (2, 2), (3, 2), (2, 2, 2), (3, 3, 1)]:
            g = L.build_graph(kind, dims)
            assert len(set(g.edges)) == len(g.edges)
            assert all(a != b for a, b in g.edges)


def test_bruteforce_examples():
    assert brute("box", (4,)).counts == (1, 3, 1)
    assert brute("box", (2, 2))[2] == 2
    assert brute("box", (2, 3))[3] == 3


def test_transfer_examples():
    assert L.matching_counts_transfer((2, 2))[2] == 2
    assert list(L.matching_counts_transfer((8,)).counts) == [math.comb(8 - l, l) for l in range(5)]
    assert L.matching_counts_transfer((4, 4)).total == brute("box", (4, 4)).total
    assert L.matching_counts_transfer((4, 4))[8] == 36


def test_transfer_punctured_matches_bruteforce():
    for dims, holes in [((2, 3), [(1, 1)]), ((3, 3), [(2, 2)]), ((3, 4), [(1, 1), (3, 4)]),
                        ((2, 2, 3), [(1, 2, 2)])]:
        assert L.matching_counts_transfer(dims, holes) == brute("box", dims, holes)


def test_size_guards():
    with pytest.raises(L.SizeGuardError):
        brute("box", (4, 8))
    with pytest.raises(L.SizeGuardError):
        L.matching_counts_transfer((5, 5, 2))
    with pytest.raises(L.SizeGuardError):
        L.matching_counts_transfer((3, 3), max_cross_section=2)
    assert L.matching_counts_transfer((3, 3), max_cross_section=3).counts[0] == 1
    with pytest.raises(L.SizeGuardError):
        L.matching_counts_bruteforce(L.build_graph("box", (3, 3)), max_sites=8)


def test_entropy_examples():
    assert abs(L.entropy_estimate(brute("box", (4,)), 1) - math.log(3) / 4) < 1e-15
    assert abs(L.entropy_estimate(brute("box", (2, 2)), 2) - math.log(2) / 4) < 1e-15
    assert L.entropy_estimate(brute("box", (3, 3)), 0) == 0
    with pytest.raises(L.InfeasibleError):
        L.entropy_estimate(brute("box", (3, 3)), 5)


def test_box_inside_torus():
    for dims in [(3, 3), (2, 4), (4, 4), (3, 2, 2), (5,)]:
        box, tor = brute("box", dims), brute("torus", dims)
        assert all(box[l] <= tor[l] for l in range(len(box.counts)))


small_dims = st.lists(st.integers(1, 4), min_size=1, max_size=3).filter(lambda d: math.prod(d) <= 16)


@settings(max_examples=40, deadline=None)
@given(small_dims)
def test_table_invariants(dims):
    t = L.matching_counts_transfer(dims)
    assert t.counts[0] == 1
    assert len(t.counts) == t.nsites // 2 + 1
    assert t[len(t.counts)] == 0
    c = t.counts
    assert all(c[l] ** 2 >= c[l - 1] * c[l + 1] for l in range(1, len(c) - 1))
    for perm in set(itertools.permutations(dims)):
        assert L.matching_counts_transfer(perm).counts == c


@settings(max_examples=30, deadline=None)
@given(small_dims, st.data())
def test_transfer_matches_bruteforce_with_holes(dims, data):
    g = L.build_graph("box", dims)
    holes = data.draw(st.lists(st.sampled_from(g.vertices), max_size=3, unique=True))
    assert L.matching_counts_transfer(dims, holes) == brute("box", dims, holes)


def test_json_roundtrip():
    t = L.matching_counts_transfer((2, 2))
    assert t.to_json() == '{"schema": "1", "dims": [2, 2], "kind": "box", "nsites": 4, "counts": {"0": "1", "1": "4", "2": "2"}}'
    assert L.CountTable.from_json(t.to_json()) == t
    p = brute("box", (2, 3), [(1, 1)])
    assert L.CountTable.from_json(p.to_json()) == p


def test_big_integers():
    t = L.matching_counts_transfer((3, 3, 8))
    assert t.total > 2**64


def test_census_examples():
    c = L.profile_census((2, 2), 2)
    assert c.profiles == {((1, 1), (0,)): 1, ((0, 0), (2,)): 1}
    assert L.profile_census((2, 2), 0).profiles == {((0, 0), (0,)): 1}
    assert L.profile_census((2, 3), 3).total == 3


@pytest.mark.parametrize("dims", [(2, 3), (3, 3), (2, 2, 3), (3, 4)])
def test_census_marginals(dims):
    t = L.matching_counts_transfer(dims)
    for ell, count in enumerate(t.counts):
        c = L.profile_census(dims, ell)
        assert c.total == count
        n = dims[-1]
        for h, v in c.profiles:
            assert sum(h) + sum(v) == ell
            for j in range(n):
                left = v[j - 1] if j > 0 else 0
                right = v[j] if j < n - 1 else 0
                assert left + right + 2 * h[j] <= c.cross_section
        assert len(c.profiles) <= c.cross_section ** (2 * n)


def test_census_needs_layers():
    with pytest.raises(L.LatticeError):
        L.profile_census((4,), 1)

from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher
from sympy.combinatorics import Permutation, PermutationGroup

from igusa.schlaefli import (
    DoubleSix,
    IncidentPair,
    SchlaefliConfig,
    compose,
    degree_bookkeeping,
    incident,
    line_labels,
    theorem_d_lemmas,
)


@pytest.fixture(scope="module")
def cfg():
    return SchlaefliConfig()


# ---------------------------------------------------------------------------
# independent model: classes in Z^{1,6}, lines meet iff their product is 1
# ---------------------------------------------------------------------------


def _lattice_class(label: str) -> tuple:
    v = [0] * 7
    idx = [int(ch) for ch in label[1:]]
    if label[0] == "a":
        v[idx[0]] = 1
    elif label[0] == "b":
        v = [2] + [-1] * 6
        v[idx[0]] = 0
    else:
        v[0] = 1
        for i in idx:
            v[i] = -1
    return tuple(v)


def _product(u, v) -> int:
    return u[0] * v[0] - sum(a * b for a, b in zip(u[1:], v[1:]))


def _lattice_graph() -> nx.Graph:
    labels = line_labels()
    G = nx.Graph()
    G.add_nodes_from(labels)
    for l, m in itertools.combinations(labels, 2):
        if _product(_lattice_class(l), _lattice_class(m)) == 1:
            G.add_edge(l, m)
    return G


def test_lattice_classes_are_exceptional():
    for l in line_labels():
        v = _lattice_class(l)
        canonical = (-3,) + (1,) * 6
        assert _product(v, v) == -1 and _product(v, canonical) == -1


def test_incidence_matches_lattice_model(cfg):
    G = _lattice_graph()
    for l, m in itertools.combinations(cfg.labels, 2):
        assert cfg.meets(l, m) == G.has_edge(l, m) == incident(l, m)


def test_intersection_graph_is_strongly_regular():
    G = _lattice_graph()
    assert {d for _, d in G.degree()} == {10}
    for l, m in itertools.combinations(G.nodes, 2):
        common = len(set(G[l]) & set(G[m]))
        assert common == (1 if G.has_edge(l, m) else 5)


# ---------------------------------------------------------------------------
# counts
# ---------------------------------------------------------------------------


def test_neighborhoods(cfg):
    assert len(cfg.labels) == 27
    for l in cfg.labels:
        nb = cfg.neighborhood(l)
        assert (len(nb["incident"]), len(nb["disjoint"])) == (10, 16)


def test_disjoint_pair_counts(cfg):
    assert len(cfg.disjoint_pairs(ordered=True)) == 27 * 16 == 432
    assert len(cfg.disjoint_pairs(ordered=False)) == 216


def test_sixes_against_brute_force(cfg):
    G = nx.complement(_lattice_graph())
    cliques = [c for c in nx.enumerate_all_cliques(G) if len(c) == 6]
    assert len(cliques) == len(cfg.sixes()) == 72
    assert cfg.max_disjoint_set() == max(len(c) for c in nx.find_cliques(G)) == 6


def test_double_sixes(cfg):
    assert len(cfg.double_sixes) == 36
    assert all(cfg.is_double_six(D) for D in cfg.double_sixes)
    assert {len(cfg.double_sixes_containing(l)) for l in cfg.labels} == {16}


def test_own_six_is_disjoint_from_each_line(cfg):
    # all 27 x 16 (line, double six) incidences
    seen = 0
    for l in cfg.labels:
        for D in cfg.double_sixes_containing(l):
            six = D.six1 if l in D.six1 else D.six2
            assert all(m == l or not cfg.meets(l, m) for m in six)
            seen += 1
    assert seen == 27 * 16


def test_double_six_axioms_by_hand(cfg):
    # each line of one six meets exactly the five lines of the other six not opposite it
    for D in cfg.double_sixes:
        for i, l in enumerate(D.six1):
            hits = [j for j, m in enumerate(D.six2) if cfg.meets(l, m)]
            assert hits == [k for k in range(6) if k != i]


def test_classical_double_six_is_found(cfg):
    keys = {D.key() for D in cfg.double_sixes}
    classical = DoubleSix(tuple(f"a{i}" for i in range(1, 7)), tuple(f"b{i}" for i in range(1, 7)))
    assert classical.key() in keys


def test_trios_are_triangles(cfg):
    G = _lattice_graph()
    assert sum(nx.triangles(G).values()) // 3 == len(cfg.trios) == 45
    assert {len(cfg.trios_through(l)) for l in cfg.labels} == {5}


def test_five_lines_lemma(cfg):
    for l, n in cfg.disjoint_pairs(ordered=True):
        five = cfg.five_lines_lemma(l, n)
        assert len(five) == 5
        assert all(cfg.meets(m, n) and not cfg.meets(m, l) for m in five)
        assert not any(cfg.meets(m, k) for m, k in itertools.combinations(five, 2))


def test_five_lines_lemma_needs_disjoint_lines(cfg):
    with pytest.raises(IncidentPair):
        cfg.five_lines_lemma("a1", "b2")


def test_unique_double_six(cfg):
    for l, n in cfg.disjoint_pairs(ordered=True):
        D = cfg.unique_double_six(l, n)
        assert D.side_of(l) is not None and D.side_of(n) is not None
        assert D.side_of(l) != D.side_of(n)
        assert len(cfg.separating_double_sixes(l, n)) == 1


def test_theorem_lemmas(cfg):
    res = theorem_d_lemmas(cfg)
    assert res == {"max_disjoint": 6, "five_five_five": True, "unique_double_six": True}


def test_bookkeeping(cfg):
    d = degree_bookkeeping(cfg)
    assert d["incidences_by_sixes"] == d["incidences_by_lines"] == d["incidences_enumerated"] == 432
    assert d["two_torsion_times_trios"] == 80
    assert d["split"] == (1, 10, 16) and d["split_total"] == 27


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------


def test_automorphism_group_order_by_schreier_sims(cfg):
    G = cfg.automorphism_group
    assert G.order == 51840
    assert G.orbit_sizes == (27, 16, 10, 6, 2)
    oracle = PermutationGroup([Permutation(list(g)) for g in G.generators()])
    assert oracle.order() == 51840


def test_generators_preserve_lattice_incidence(cfg):
    L = _lattice_graph()
    for g in cfg.automorphism_group.generators():
        for l, m in L.edges:
            assert L.has_edge(cfg.labels[g[cfg.index[l]]], cfg.labels[g[cfg.index[m]]])


def test_orbits(cfg):
    G = cfg.automorphism_group
    assert len(G.line_orbit()) == 27
    assert len(G.double_six_orbit()) == 36
    assert len(G.trio_orbit()) == 45


def test_random_elements_act(cfg):
    G = cfg.automorphism_group
    rng = random.Random(0)
    keys = {D.key() for D in cfg.double_sixes}
    for _ in range(20):
        g = G.random_element(rng)
        assert cfg.is_automorphism(g)
        assert all(G.act_double_six(g, D) in keys for D in cfg.double_sixes)


def test_extend_rejects_non_automorphism(cfg):
    i = cfg.index
    # a line meeting a1 cannot be sent to a line skew to the image of a1
    assert cfg.extend({i["a1"]: i["a1"], i["b2"]: i["a2"]}) is None


def test_compose_order():
    g, h = (1, 2, 0), (0, 2, 1)
    assert compose(g, h) == (1, 0, 2)


@pytest.mark.slow
def test_automorphism_count_by_graph_matching():
    G = _lattice_graph()
    assert sum(1 for _ in GraphMatcher(G, G).isomorphisms_iter()) == 51840

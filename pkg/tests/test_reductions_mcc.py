import random

import pytest

from cvckit.core import CapacitatedGraph, GraphFormatError, assign_edges, verify_orientation
from cvckit.oracle import solve_canonical
from cvckit.reductions.mcc import (
    MccInstance,
    TreedepthWitness,
    format_mcc,
    format_witness,
    parse_mcc,
    parse_witness,
    reduce_mcc_td,
    verify_td_witness,
)
from bruteforce import brute_multicolored_clique


def full_pairs(k, n):
    return frozenset(
        frozenset(((i, a), (j, b)))
        for i in range(1, k + 1)
        for j in range(i + 1, k + 1)
        for a in range(1, n + 1)
        for b in range(1, n + 1)
    )


# --- witness verifier --------------------------------------------------------

def test_witness_edgeless_all_roots():
    g = CapacitatedGraph.build(3, [], {1: 0, 2: 0, 3: 0})
    valid, depth = verify_td_witness(g, TreedepthWitness({1: 0, 2: 0, 3: 0}))
    assert valid and depth == 1


def test_witness_path_rooted_in_middle():
    g = CapacitatedGraph.build(3, [(1, 2), (2, 3)], {1: 1, 2: 2, 3: 1})
    valid, depth = verify_td_witness(g, TreedepthWitness({2: 0, 1: 2, 3: 2}))
    assert valid and depth == 2


def test_witness_rejects_unrelated_edge():
    g = CapacitatedGraph.build(2, [(1, 2)], {1: 1, 2: 1})
    valid, _ = verify_td_witness(g, TreedepthWitness({1: 0, 2: 0}))
    assert not valid


def test_witness_rejects_cycle():
    g = CapacitatedGraph.build(2, [(1, 2)], {1: 1, 2: 1})
    valid, _ = verify_td_witness(g, TreedepthWitness({1: 2, 2: 1}))
    assert not valid


def test_witness_file_roundtrip():
    w = TreedepthWitness({1: 0, 2: 1, 3: 1})
    assert parse_witness(format_witness(w)) == w


# --- instance model ----------------------------------------------------------

def test_mcc_rejects_intra_class_edge():
    with pytest.raises(GraphFormatError):
        MccInstance(2, 2, frozenset({frozenset(((1, 1), (1, 2)))}))


def test_mcc_file_roundtrip():
    inst = MccInstance(2, 2, frozenset({frozenset(((1, 1), (2, 2)))}))
    assert parse_mcc(format_mcc(inst)) == inst


# --- construction ------------------------------------------------------------

def test_choice_gadget_count_matches_formula():
    # gamma = 2k(2k-1): 12 instances at k=2
    inst = MccInstance(2, 2, full_pairs(2, 2))
    red = reduce_mcc_td(inst)
    assert len(red.choice_groups) == 2 * 2 * (2 * 2 - 1) == 12
    assert len(red.edge_groups) == 4


def test_budget_formula():
    inst = MccInstance(2, 2, full_pairs(2, 2))
    red = reduce_mcc_td(inst)
    gamma = len(red.choice_groups)
    delta = len(red.meta.forced)
    assert red.budget == 2 * 2 + gamma + delta


def test_witness_valid_and_shallow():
    inst = MccInstance(2, 2, full_pairs(2, 2))
    red = reduce_mcc_td(inst)
    valid, depth = verify_td_witness(red.graph, red.witness)
    assert valid
    assert depth <= 16 * 2  # linear in the class count


def test_capacity_demand_consistency():
    inst = MccInstance(2, 1, full_pairs(2, 1))
    red = reduce_mcc_td(inst)
    g = red.graph
    for v in g.vertices():
        assert 0 <= g.capacity[v] <= g.deg(v)
    for grp in red.choice_groups + red.edge_groups:
        for v in grp:
            assert g.capacity[v] == g.deg(v)


def test_forward_certificate_from_clique():
    # pick a clique, select the canonical vertices, and realize an
    # orientation of size exactly the budget via the edge-assignment check
    inst = MccInstance(2, 2, full_pairs(2, 2))
    red = reduce_mcc_td(inst)
    picks = {1: 1, 2: 2}
    chosen = set(red.meta.forced)
    for cls in (1, 2):
        chosen.update(red.clique_selection[(cls, picks[cls])])
    for key, mapping in red.clique_selection.items():
        if key[0] != "edge":
            continue
        i, ip = key[1]
        chosen.add(mapping[(picks[i], picks[ip])])
    assert len(chosen) == red.budget
    orientation = assign_edges(red.graph, chosen)
    assert orientation is not None
    rep = verify_orientation(red.graph, orientation)
    assert rep.feasible and rep.size == red.budget


def test_reduction_matches_bruteforce():
    rng = random.Random(61)
    for _ in range(6):
        edges = set()
        for a in (1, 2):
            for b in (1, 2):
                if rng.random() < 0.5:
                    edges.add(frozenset(((1, a), (2, b))))
        inst = MccInstance(2, 2, frozenset(edges))
        expected = brute_multicolored_clique(2, 2, frozenset(edges))
        red = reduce_mcc_td(inst)
        got, cert = solve_canonical(red.graph, red.meta, red.budget)
        assert got == expected
        if cert is not None:
            assert verify_orientation(red.graph, cert).feasible


def test_odd_class_count_padding():
    # k = 3 pads to 4 with universal classes; clique question is preserved
    edges = full_pairs(3, 1)
    inst = MccInstance(3, 1, edges)
    red = reduce_mcc_td(inst)
    assert len(red.choice_groups) == 2 * 4 * (2 * 4 - 1)
    got, _ = solve_canonical(red.graph, red.meta, red.budget)
    assert got is True
    inst_no = MccInstance(3, 1, frozenset())
    red_no = reduce_mcc_td(inst_no)
    assert solve_canonical(red_no.graph, red_no.meta, red_no.budget)[0] is False

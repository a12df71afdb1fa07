import math
import random

import pytest

from cvckit.core import (
    CapacitatedGraph,
    CapExceededError,
    StructuralError,
    verify_orientation,
)
from cvckit.oracle import (
    ChoiceGroups,
    format_choice_groups,
    parse_choice_groups,
    solve_canonical,
    solve_exact,
    solve_pruned,
)
from bruteforce import brute_min_orientation


def graph(n, edges, caps):
    return CapacitatedGraph.build(n, edges, caps)


def random_graph(rng, n, p):
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
    g = CapacitatedGraph.build(n, edges, {v: 0 for v in range(1, n + 1)})
    caps = {v: rng.randint(1, g.deg(v)) if g.deg(v) else 0 for v in range(1, n + 1)}
    return CapacitatedGraph.build(n, edges, caps)


# --- solve_exact -----------------------------------------------------------

def test_exact_path_into_middle():
    g = graph(3, [(1, 2), (2, 3)], {1: 1, 2: 2, 3: 1})
    size, cert = solve_exact(g)
    assert size == 1
    assert cert.heads == {(1, 2): 2, (2, 3): 2}


def test_exact_triangle():
    g = graph(3, [(1, 2), (1, 3), (2, 3)], {1: 1, 2: 1, 3: 1})
    assert brute_min_orientation(g)[0] == 3
    size, cert = solve_exact(g)
    assert size == 3 and verify_orientation(g, cert).feasible


def test_exact_edgeless():
    g = graph(4, [], {v: 0 for v in range(1, 5)})
    size, cert = solve_exact(g)
    assert size == 0 and len(cert) == 0


def test_exact_infeasible_instance():
    g = graph(2, [(1, 2)], {1: 0, 2: 0})
    size, cert = solve_exact(g)
    assert size == math.inf and cert is None


def test_exact_refuses_above_cap():
    g = graph(25, [], {v: 0 for v in range(1, 26)})
    with pytest.raises(CapExceededError):
        solve_exact(g)


def test_exact_matches_bruteforce():
    rng = random.Random(42)
    for _ in range(40):
        g = random_graph(rng, rng.randint(2, 6), rng.choice([0.3, 0.6]))
        if len(g.edges) > 12:
            continue
        expected, _ = brute_min_orientation(g)
        got, cert = solve_exact(g)
        assert got == expected
        if cert is not None:
            rep = verify_orientation(g, cert)
            assert rep.feasible and rep.size == got


def test_exact_monotone_under_capacity_increase():
    rng = random.Random(3)
    for _ in range(20):
        g = random_graph(rng, rng.randint(2, 6), 0.5)
        bigger = g.with_capacity([c + 1 for c in g.capacity])
        assert solve_exact(bigger)[0] <= solve_exact(g)[0]


# --- solve_pruned ----------------------------------------------------------

def test_pruned_k2():
    g = graph(2, [(1, 2)], {1: 1, 2: 1})
    assert solve_pruned(g, 0)[0] is False
    yes, cert = solve_pruned(g, 1)
    assert yes and verify_orientation(g, cert).feasible


def test_pruned_forces_star_center():
    # k+1 = 4 pendant leaves on vertex 1 with k = 3
    g = graph(5, [(1, 2), (1, 3), (1, 4), (1, 5)], {1: 4, 2: 1, 3: 1, 4: 1, 5: 1})
    yes, cert = solve_pruned(g, 3)
    assert yes
    assert verify_orientation(g, cert).size <= 3
    assert (solve_exact(g)[0] <= 3) == yes


def test_pruned_agrees_with_exact():
    rng = random.Random(11)
    for _ in range(40):
        g = random_graph(rng, rng.randint(2, 7), 0.5)
        minsize, _ = solve_exact(g)
        for k in range(0, g.n + 1):
            yes, cert = solve_pruned(g, k)
            assert yes == (minsize <= k)
            if yes:
                rep = verify_orientation(g, cert)
                assert rep.feasible and rep.size <= k


def test_pruned_with_leaf_bundles():
    # star vertex over capacity: some pendant edges must land on leaves
    edges = [(1, v) for v in range(2, 8)]
    g = graph(7, edges, {1: 3, **{v: 1 for v in range(2, 8)}})
    minsize, _ = solve_exact(g)
    assert minsize == 4  # vertex 1 plus three leaves
    assert solve_pruned(g, 3)[0] is False
    yes, cert = solve_pruned(g, 4)
    assert yes and verify_orientation(g, cert).size <= 4


# --- solve_canonical -------------------------------------------------------

def test_canonical_single_group():
    g = graph(2, [(1, 2)], {1: 1, 2: 1})
    meta = ChoiceGroups(frozenset(), (frozenset({1, 2}),), frozenset())
    yes, cert = solve_canonical(g, meta, 1)
    assert yes and verify_orientation(g, cert).feasible


def test_canonical_forced_over_budget():
    g = graph(3, [(1, 2), (2, 3)], {1: 1, 2: 2, 3: 1})
    meta = ChoiceGroups(frozenset({1, 2, 3}), (), frozenset())
    assert solve_canonical(g, meta, 2) == (False, None)


def test_canonical_rejects_overlapping_groups():
    g = graph(3, [(1, 2), (2, 3)], {1: 1, 2: 2, 3: 1})
    meta = ChoiceGroups(frozenset({1}), (frozenset({1, 2}),), frozenset())
    with pytest.raises(StructuralError):
        solve_canonical(g, meta, 2)


def test_canonical_free_pool_budget():
    # two forced stars, one optional helper; helper needed only at k >= 3
    g = graph(4, [(1, 2), (1, 3), (1, 4)], {1: 2, 2: 1, 3: 1, 4: 1})
    meta = ChoiceGroups(frozenset({1}), (), frozenset({2, 3, 4}))
    assert solve_canonical(g, meta, 1) == (False, None)
    yes, cert = solve_canonical(g, meta, 2)
    assert yes and verify_orientation(g, cert).size <= 2


def test_canonical_respects_space_restriction():
    # feasible overall, but not with the canonical vertices only
    g = graph(3, [(1, 2), (2, 3)], {1: 1, 2: 0, 3: 1})
    meta = ChoiceGroups(frozenset({2}), (), frozenset())
    assert solve_canonical(g, meta, 3) == (False, None)
    assert solve_exact(g)[0] == 2


def test_canonical_folds_outside_vertices():
    # vertex 3 outside the space: its edge preloads vertex 2
    g = graph(3, [(1, 2), (2, 3)], {1: 1, 2: 2, 3: 1})
    meta = ChoiceGroups(frozenset(), (frozenset({1, 2}),), frozenset())
    yes, cert = solve_canonical(g, meta, 1)
    assert yes
    rep = verify_orientation(g, cert)
    assert rep.feasible and rep.size == 1
    assert cert.heads[(2, 3)] == 2


# --- metadata files --------------------------------------------------------

def test_choice_groups_roundtrip():
    meta = ChoiceGroups(frozenset({1, 2}), (frozenset({3, 4}), frozenset({5})), frozenset({6}))
    parsed = parse_choice_groups(format_choice_groups(meta))
    assert parsed == meta

import random

import pytest

from cvckit.core import (
    CapacitatedGraph,
    GraphFormatError,
    Orientation,
    StructuralError,
    assign_edges,
    format_instance,
    format_orientation,
    normalize_capacities,
    parse_instance,
    parse_orientation,
    verify_orientation,
)
from bruteforce import brute_assignable


def graph(n, edges, caps, budget=None):
    return CapacitatedGraph.build(n, edges, caps, budget)


def random_graph(rng, n, p):
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
    g = CapacitatedGraph.build(n, edges, {v: 0 for v in range(1, n + 1)})
    caps = {v: rng.randint(0, max(g.deg(v), 1)) for v in range(1, n + 1)}
    return CapacitatedGraph.build(n, edges, caps)


# --- construction ----------------------------------------------------------

def test_rejects_loops_and_duplicates():
    with pytest.raises(StructuralError):
        CapacitatedGraph(2, ((1, 1),), (0, 1, 1))
    with pytest.raises(StructuralError):
        CapacitatedGraph(2, ((1, 2), (1, 2)), (0, 1, 1))


def test_build_canonicalizes_edges():
    g = graph(3, [(3, 1), (2, 1)], {1: 1, 2: 1, 3: 1})
    assert g.edges == ((1, 2), (1, 3))
    assert g.deg(1) == 2 and g.neighbors(1) == (2, 3)


# --- normalize_capacities --------------------------------------------------

def test_normalize_clamps_to_degree():
    g = graph(4, [(1, 2), (1, 3), (1, 4)], {1: 7, 2: 1, 3: 1, 4: 1})
    assert normalize_capacities(g).capacity[1] == 3


def test_normalize_keeps_capacity_within_degree():
    g = graph(4, [(1, 2), (1, 3), (1, 4)], {1: 2, 2: 1, 3: 1, 4: 1})
    assert normalize_capacities(g).capacity[1] == 2


def test_normalize_zeroes_isolated():
    g = graph(2, [], {1: 5, 2: 0})
    ng = normalize_capacities(g)
    assert ng.capacity[1] == 0 and ng.capacity[2] == 0


def test_normalize_idempotent_and_preserves_assignability():
    rng = random.Random(7)
    for _ in range(40):
        g = random_graph(rng, rng.randint(2, 6), 0.5)
        ng = normalize_capacities(g)
        assert normalize_capacities(ng) == ng
        for _ in range(4):
            sel = {v for v in range(1, g.n + 1) if rng.random() < 0.5}
            assert (assign_edges(g, sel) is None) == (assign_edges(ng, sel) is None)
            assert (assign_edges(ng, sel) is None) == (not brute_assignable(ng, sel))


# --- verify_orientation ----------------------------------------------------

def test_verify_single_edge():
    g = graph(2, [(1, 2)], {1: 1, 2: 1})
    rep = verify_orientation(g, Orientation({(1, 2): 2}))
    assert rep.feasible and rep.size == 1 and rep.violations == ()


def test_verify_triangle_cyclic():
    g = graph(3, [(1, 2), (1, 3), (2, 3)], {1: 1, 2: 1, 3: 1})
    rep = verify_orientation(g, Orientation({(1, 2): 2, (2, 3): 3, (1, 3): 1}))
    assert rep.feasible and rep.size == 3


def test_verify_triangle_overload():
    g = graph(3, [(1, 2), (1, 3), (2, 3)], {1: 1, 2: 1, 3: 1})
    rep = verify_orientation(g, Orientation({(1, 2): 1, (1, 3): 1, (2, 3): 2}))
    assert not rep.feasible
    assert (1, 2, 1) in rep.violations


def test_verify_rejects_wrong_arc_set():
    g = graph(3, [(1, 2), (2, 3)], {1: 1, 2: 2, 3: 1})
    with pytest.raises(StructuralError):
        verify_orientation(g, Orientation({(1, 2): 2}))


# --- assign_edges ----------------------------------------------------------

def test_assign_star_center():
    g = graph(4, [(1, 2), (1, 3), (1, 4)], {1: 3, 2: 1, 3: 1, 4: 1})
    o = assign_edges(g, {1})
    assert o is not None and all(h == 1 for h in o.heads.values())


def test_assign_star_single_leaf_fails():
    g = graph(4, [(1, 2), (1, 3), (1, 4)], {1: 3, 2: 1, 3: 1, 4: 1})
    assert assign_edges(g, {2}) is None


def test_assign_c4_two_vertices():
    # C4 with capacities (2,1,2,1): the two capacity-2 corners suffice.
    # Expected value frozen from the brute-force orientation enumeration.
    g = graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)], {1: 2, 2: 1, 3: 2, 4: 1})
    assert brute_assignable(g, {1, 3})
    o = assign_edges(g, {1, 3})
    assert o is not None
    rep = verify_orientation(g, o)
    assert rep.feasible and rep.size == 2
    assert set(o.heads.values()) <= {1, 3}


def test_assign_matches_bruteforce_and_is_monotone():
    rng = random.Random(13)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 6), 0.5)
        if len(g.edges) > 12:
            continue
        sel = {v for v in range(1, g.n + 1) if rng.random() < 0.5}
        o = assign_edges(g, sel)
        assert (o is not None) == brute_assignable(g, sel)
        if o is not None:
            rep = verify_orientation(g, o)
            assert rep.feasible
            assert {v for v in range(1, g.n + 1) if o.indegrees(g.n)[v] > 0} <= sel
            bigger = sel | {rng.randint(1, g.n)}
            assert assign_edges(g, bigger) is not None


def test_assign_deterministic():
    g = graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)], {1: 2, 2: 1, 3: 2, 4: 1})
    assert assign_edges(g, {1, 3}) == assign_edges(g, {1, 3})


# --- instance files --------------------------------------------------------

def test_parse_k2():
    g = parse_instance("cvc 2 1\nv 1 1\nv 2 1\ne 1 2\n")
    assert g.n == 2 and g.edges == ((1, 2),) and g.capacity[1] == 1


def test_parse_rejects_loop():
    with pytest.raises(GraphFormatError, match="loop"):
        parse_instance("cvc 1 1\nv 1 1\ne 1 1\n")


def test_parse_rejects_duplicate_edge():
    text = "cvc 2 2\nv 1 1\nv 2 1\ne 1 2\ne 1 2\n"
    with pytest.raises(GraphFormatError, match="duplicate edge"):
        parse_instance(text)


def test_parse_rejects_unknown_vertex():
    with pytest.raises(GraphFormatError, match="unknown vertex"):
        parse_instance("cvc 2 1\nv 1 1\nv 2 1\ne 1 3\n")


def test_parse_reports_line_numbers():
    with pytest.raises(GraphFormatError, match="line 4"):
        parse_instance("cvc 2 1\nv 1 1\nv 2 1\ne 2 2\n")


def test_instance_roundtrip_with_budget():
    g = graph(3, [(1, 2), (2, 3)], {1: 1, 2: 2, 3: 0}, budget=2)
    assert parse_instance(format_instance(g)) == g


def test_orientation_roundtrip():
    g = graph(3, [(1, 2), (2, 3)], {1: 1, 2: 2, 3: 1})
    o = Orientation({(1, 2): 2, (2, 3): 2})
    assert parse_orientation(format_orientation(o), g) == o


def test_orientation_file_rejects_non_edge():
    g = graph(3, [(1, 2)], {1: 1, 2: 1, 3: 0})
    with pytest.raises(StructuralError):
        parse_orientation("a 1 3\n", g)

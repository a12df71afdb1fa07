"""Seeded random instance generators for tests, the CLI, and the benchmark
harness.  Everything is a pure function of its parameters and seed."""

from __future__ import annotations

import random

from .core import CapacitatedGraph
from .cutwidth import LinearArrangement, cutwidth_of


def _capacities(rng: random.Random, n: int, edges) -> dict[int, int]:
    deg = {v: 0 for v in range(1, n + 1)}
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return {v: (rng.randint(1, deg[v]) if deg[v] else 0) for v in range(1, n + 1)}


def gnp(n: int, p: float, seed: int) -> CapacitatedGraph:
    """Erdos-Renyi instance with capacities uniform in [1, deg(v)]."""
    rng = random.Random(("gnp", n, round(p, 6), seed).__repr__())
    edges = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < p
    ]
    return CapacitatedGraph.build(n, edges, _capacities(rng, n, edges))


def sparse_with_fes(n: int, fes: int, seed: int) -> CapacitatedGraph:
    """Connected instance whose feedback edge set has exactly `fes` edges."""
    if n < 2:
        raise ValueError("need at least two vertices")
    max_extra = n * (n - 1) // 2 - (n - 1)
    if fes < 0 or fes > max_extra:
        raise ValueError(f"cannot fit {fes} extra edges on {n} vertices")
    rng = random.Random(("sparse", n, fes, seed).__repr__())
    edges = {(rng.randint(1, v - 1), v) for v in range(2, n + 1)}
    edges = {(min(u, v), max(u, v)) for u, v in edges}
    while len(edges) < n - 1 + fes:
        u = rng.randint(1, n - 1)
        v = rng.randint(u + 1, n)
        edges.add((u, v))
    return CapacitatedGraph.build(n, edges, _capacities(rng, n, sorted(edges)))


def layered_with_ctw(n: int, ctw: int, seed: int, extra: int = 0) -> CapacitatedGraph:
    """Instance whose identity arrangement has cutwidth exactly `ctw`.

    A path keeps every cut at one; a fan of nested edges across the middle
    raises the central cut to exactly the target; optional extra random
    edges are added only where no cut would overflow.
    """
    if ctw < 1:
        raise ValueError("target cutwidth must be at least 1")
    if ctw > 1 and n < 2 * ctw:
        raise ValueError(f"need at least {2 * ctw} vertices for cutwidth {ctw}")
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = random.Random(("layered", n, ctw, seed, extra).__repr__())
    edges = {(v, v + 1) for v in range(1, n)}
    profile = [0] + [1] * (n - 1) + [0]  # profile[i] = edges crossing cut i
    mid = n // 2
    for t in range(1, ctw):  # nested spans; t=0 would repeat the path edge
        u, v = mid - t, mid + 1 + t
        edges.add((u, v))
        for i in range(u, v):
            profile[i] += 1
    tries = 0
    added = 0
    while added < extra and tries < 50 * (extra + 1):
        tries += 1
        u = rng.randint(1, n - 1)
        v = rng.randint(u + 1, min(n, u + max(2, n // 4)))
        if u == v or (u, v) in edges:
            continue
        if any(profile[i] + 1 > ctw for i in range(u, v)):
            continue
        edges.add((u, v))
        for i in range(u, v):
            profile[i] += 1
        added += 1
    g = CapacitatedGraph.build(n, edges, _capacities(rng, n, sorted(edges)))
    assert cutwidth_of(g, LinearArrangement(tuple(range(1, n + 1)))) == ctw
    return g


def random_mcc(k: int, n: int, p: float, seed: int):
    """Random multicolored-clique input: k classes of n vertices, cross
    edges with probability p.  Returns (k, n, cross edge set) with vertices
    as (class, index) pairs."""
    rng = random.Random(("mcc", k, n, round(p, 6), seed).__repr__())
    edges = set()
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            for a in range(1, n + 1):
                for b in range(1, n + 1):
                    if rng.random() < p:
                        edges.add(frozenset(((i, a), (j, b))))
    return k, n, edges

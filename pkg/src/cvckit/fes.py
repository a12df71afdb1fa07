"""Feedback-edge-set solver: guess the non-forest arcs, then solve each tree.

Removing a feedback edge set leaves a spanning forest.  Each of the 2^fes
head assignments for the removed edges turns into per-vertex preloads on
the forest, and the remaining problem decomposes into one rooted-tree DP
per component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


from .core import (
    CapacitatedGraph,
    CapExceededError,
    Edge,
    Orientation,
    normalize_capacities,
)

DEFAULT_FES_CAP = 22
INF = math.inf


def feedback_edge_set(g: CapacitatedGraph) -> tuple[Edge, ...]:
    """Edges outside a deterministic spanning forest (id-ordered union-find)."""
    parent = list(range(g.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    extra = []
    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            extra.append((u, v))
        else:
            parent[max(ru, rv)] = min(ru, rv)
    return tuple(extra)


@dataclass(frozen=True)
class ForestInstance:
    """A forest plus arcs already committed by the feedback-edge guess."""

    graph: CapacitatedGraph  # capacities of the full instance
    forest_edges: tuple[Edge, ...]
    forced_arcs: tuple[tuple[Edge, int], ...]  # (non-forest edge, head)

    def __post_init__(self):
        forest = set(self.forest_edges)
        forced = {e for e, _ in self.forced_arcs}
        if forest | forced != self.graph.edge_set or forest & forced:
            raise ValueError("forest edges and forced arcs must partition E")

    def preload(self) -> list[int]:
        p = [0] * (self.graph.n + 1)
        for _, head in self.forced_arcs:
            p[head] += 1
        return p


def forest_dp(fi: ForestInstance) -> tuple[int | float, Orientation | None]:
    """Exact minimum orientation size of a forest instance.

    Trees are rooted at the smallest id per component and evaluated leaf to
    root.  At each vertex the state is whether the parent edge points in;
    the best set of inward child edges is a prefix of the children sorted
    by cost delta (flipping a child edge inward changes the subtree cost by
    f(child, outward-parent) - f(child, inward-parent); for a fixed count,
    picking the smallest deltas is optimal by exchange).
    """
    g = fi.graph
    n = g.n
    preload = fi.preload()
    cap = g.capacity
    if any(preload[v] > cap[v] for v in range(1, n + 1)):
        return INF, None

    children: list[list[int]] = [[] for _ in range(n + 1)]
    parent_of = [0] * (n + 1)
    roots = []
    seen = [False] * (n + 1)
    adj: list[list[int]] = [[] for _ in range(n + 1)]
    for u, v in fi.forest_edges:
        adj[u].append(v)
        adj[v].append(u)
    order = []
    for root in range(1, n + 1):
        if seen[root]:
            continue
        roots.append(root)
        seen[root] = True
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            for w in sorted(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    parent_of[w] = v
                    children[v].append(w)
                    stack.append(w)

    # f[v] = (cost with parent arc outward, cost with parent arc inward)
    f: list[tuple[int | float, int | float]] = [(0, 0)] * (n + 1)
    plan: dict[tuple[int, int], tuple[int, ...]] = {}  # (v, pin) -> children taken inward

    def solve_vertex(v: int, pin: int) -> int | float:
        room = cap[v] - pin - preload[v]
        if room < 0:
            plan[(v, pin)] = ()
            return INF
        base = 0
        forced_in: list[int] = []  # child edge must point toward v
        flippable: list[tuple[int, int]] = []  # (cost delta when flipped inward, child)
        for c in children[v]:
            up, down = f[c]  # up: edge toward v (child pin 0); down: edge into child
            if down == INF and up == INF:
                plan[(v, pin)] = ()
                return INF
            if down == INF:
                forced_in.append(c)
                base += up
            elif up == INF:
                base += down  # flipping is impossible, keep the edge downward
            else:
                base += down
                flippable.append((up - down, c))
        if len(forced_in) > room:
            plan[(v, pin)] = ()
            return INF
        flippable.sort()
        best: int | float = INF
        best_take = tuple(forced_in)
        running = 0
        for extra in range(0, min(len(flippable), room - len(forced_in)) + 1):
            if extra > 0:
                running += flippable[extra - 1][0]
            occupied = len(forced_in) + extra + pin + preload[v]
            total = base + running + (1 if occupied > 0 else 0)
            if total < best:
                best = total
                best_take = tuple(forced_in) + tuple(c for _, c in flippable[:extra])
        plan[(v, pin)] = best_take
        return best

    for v in reversed(order):
        f[v] = (solve_vertex(v, 0), solve_vertex(v, 1))

    total = sum(f[r][0] for r in roots)
    if total == INF or math.isinf(total):
        return INF, None

    heads = {e: head for e, head in fi.forced_arcs}
    for r in roots:
        stack = [(r, 0)]
        while stack:
            v, pin = stack.pop()
            inward = set(plan[(v, pin)])
            for c in children[v]:
                e = (v, c) if v < c else (c, v)
                if c in inward:
                    heads[e] = v
                    stack.append((c, 0))
                else:
                    heads[e] = c
                    stack.append((c, 1))
    return int(total), Orientation(heads)


def solve_fes(
    g: CapacitatedGraph, *, fes_cap: int = DEFAULT_FES_CAP
) -> tuple[int | float, Orientation | None]:
    """Minimum orientation size via 2^fes guesses over the non-forest arcs.

    Guesses are explored depth-first with two prunes: a preload exceeding
    a capacity kills the branch, and the count of preloaded vertices lower-
    bounds the final size.
    """
    g = normalize_capacities(g)
    extra = feedback_edge_set(g)
    if len(extra) > fes_cap:
        raise CapExceededError(f"feedback edge set {len(extra)} above cap {fes_cap}")
    forest = tuple(e for e in g.edges if e not in set(extra))
    cap = g.capacity

    best: int | float = INF
    best_cert: Orientation | None = None
    preload = [0] * (g.n + 1)

    def positive_count() -> int:
        return sum(1 for v in range(1, g.n + 1) if preload[v] > 0)

    def rec(i: int, chosen: list[int]):
        nonlocal best, best_cert
        if positive_count() >= best:
            return
        if i == len(extra):
            fi = ForestInstance(g, forest, tuple(zip(extra, chosen)))
            value, cert = forest_dp(fi)
            if value < best:
                best, best_cert = value, cert
            return
        u, v = extra[i]
        for head in (u, v):
            if preload[head] + 1 <= cap[head]:
                preload[head] += 1
                chosen.append(head)
                rec(i + 1, chosen)
                chosen.pop()
                preload[head] -= 1

    rec(0, [])
    return best, best_cert

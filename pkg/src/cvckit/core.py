"""Capacitated graph instances, edge orientations, and assignment feasibility.

A problem instance is a simple undirected graph with one non-negative
capacity per vertex and an optional decision budget.  Solvers work on the
orientation view: every edge is directed toward the endpoint that covers
it, a vertex may receive at most its capacity, and the objective counts
vertices with positive in-degree.

All objects here are immutable after construction and every operation is
a pure function of its inputs, so instances can be shared freely across
threads or worker processes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class GraphFormatError(ValueError):
    """Malformed instance or certificate text."""


class StructuralError(ValueError):
    """Structured input violates its contract (wrong arc set, bad groups, ...)."""


class CapExceededError(RuntimeError):
    """An exact search would exceed its configured size cap."""


Edge = tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class CapacitatedGraph:
    """Simple undirected graph with per-vertex capacities.

    Vertices are the contiguous ids 1..n.  Edges are stored as sorted
    (u, v) pairs in lexicographic order; loops and parallel edges are
    rejected.  ``budget`` is the optional decision bound carried by the
    instance file.
    """

    n: int
    edges: tuple[Edge, ...]
    capacity: tuple[int, ...]  # index 0 unused, capacity[v] for v in 1..n
    budget: int | None = None

    def __post_init__(self):
        if self.n < 0:
            raise StructuralError("vertex count must be non-negative")
        if len(self.capacity) != self.n + 1:
            raise StructuralError("capacity table must have one entry per vertex")
        seen = set()
        prev = None
        for u, v in self.edges:
            if u == v:
                raise StructuralError(f"loop at vertex {u}")
            if not (1 <= u < v <= self.n):
                raise StructuralError(f"edge ({u},{v}) out of range or not canonical")
            if (u, v) in seen:
                raise StructuralError(f"duplicate edge ({u},{v})")
            if prev is not None and (u, v) < prev:
                raise StructuralError("edges not in canonical order")
            seen.add((u, v))
            prev = (u, v)

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        capacity: Mapping[int, int] | Sequence[int],
        budget: int | None = None,
    ) -> "CapacitatedGraph":
        """Construct from unordered edge pairs and a capacity map or list."""
        canon = sorted({canonical_edge(u, v) for u, v in edges})
        if isinstance(capacity, Mapping):
            caps = [0] * (n + 1)
            for v, c in capacity.items():
                caps[v] = c
        else:
            caps = list(capacity)
            if len(caps) == n:  # allow 0-based lists
                caps = [0] + caps
        return cls(n, tuple(canon), tuple(caps), budget)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degree(self) -> tuple[int, ...]:
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def deg(self, v: int) -> int:
        return self.degree[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def with_capacity(self, capacity: Sequence[int]) -> "CapacitatedGraph":
        return CapacitatedGraph(self.n, self.edges, tuple(capacity), self.budget)

    def with_budget(self, budget: int | None) -> "CapacitatedGraph":
        return CapacitatedGraph(self.n, self.edges, self.capacity, budget)


class Orientation:
    """One arc per edge of an underlying graph, stored as edge -> head."""

    __slots__ = ("heads",)

    def __init__(self, heads: Mapping[Edge, int]):
        self.heads = dict(heads)

    def arcs(self):
        """Yield (tail, head) pairs."""
        for (u, v), head in self.heads.items():
            yield (v if head == u else u, head)

    def indegrees(self, n: int) -> list[int]:
        indeg = [0] * (n + 1)
        for head in self.heads.values():
            indeg[head] += 1
        return indeg

    def size(self) -> int:
        return len({h for h in self.heads.values()})

    def __len__(self) -> int:
        return len(self.heads)

    def __eq__(self, other) -> bool:
        return isinstance(other, Orientation) and self.heads == other.heads

    def __repr__(self) -> str:
        return f"Orientation({len(self.heads)} arcs)"


@dataclass(frozen=True)
class FeasReport:
    """Outcome of checking an orientation against capacities."""

    feasible: bool
    size: int
    violations: tuple[tuple[int, int, int], ...]  # (vertex, indeg, capacity)


def normalize_capacities(g: CapacitatedGraph) -> CapacitatedGraph:
    """Clamp every capacity into [0, deg(v)]; isolated vertices get 0.

    Answer-preserving for both the decision and the optimization query,
    since no vertex can ever receive more than deg(v) edges.  Idempotent.
    """
    deg = g.degree
    caps = list(g.capacity)
    for v in range(1, g.n + 1):
        caps[v] = min(max(caps[v], 0), deg[v])
    return g.with_capacity(caps)


def verify_orientation(g: CapacitatedGraph, orientation: Orientation) -> FeasReport:
    """Check that an orientation covers exactly E(G) and respects capacities."""
    if set(orientation.heads) != g.edge_set:
        raise StructuralError("orientation arc set does not match the instance edges")
    for (u, v), head in orientation.heads.items():
        if head not in (u, v):
            raise StructuralError(f"arc head {head} not an endpoint of ({u},{v})")
    indeg = orientation.indegrees(g.n)
    violations = tuple(
        (v, indeg[v], g.capacity[v])
        for v in range(1, g.n + 1)
        if indeg[v] > g.capacity[v]
    )
    size = sum(1 for v in range(1, g.n + 1) if indeg[v] > 0)
    return FeasReport(not violations, size, violations)


class _Dinic:
    """Unit-style max flow on a small static network, deterministic."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[int] = []
        self.nxt: list[int] = []
        self.cap: list[int] = []
        self.first = [-1] * n

    def add(self, u: int, v: int, c: int) -> int:
        idx = len(self.head)
        self.head.append(v)
        self.cap.append(c)
        self.nxt.append(self.first[u])
        self.first[u] = idx
        self.head.append(u)
        self.cap.append(0)
        self.nxt.append(self.first[v])
        self.first[v] = idx + 1
        return idx

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        n = self.n
        while True:
            level = [-1] * n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                e = self.first[u]
                while e != -1:
                    v = self.head[e]
                    if self.cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        q.append(v)
                    e = self.nxt[e]
            if level[t] < 0:
                return flow
            it = list(self.first)
            # iterative blocking-flow DFS
            stack = [s]
            path: list[int] = []
            while stack:
                u = stack[-1]
                if u == t:
                    aug = min(self.cap[e] for e in path)
                    for e in path:
                        self.cap[e] -= aug
                        self.cap[e ^ 1] += aug
                    flow += aug
                    # retreat to the first saturated arc
                    for i, e in enumerate(path):
                        if self.cap[e] == 0:
                            del stack[i + 1 :]
                            del path[i:]
                            break
                    continue
                e = it[u]
                advanced = False
                while e != -1:
                    v = self.head[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        it[u] = e
                        stack.append(v)
                        path.append(e)
                        advanced = True
                        break
                    e = self.nxt[e]
                if not advanced:
                    it[u] = -1
                    level[u] = -1
                    stack.pop()
                    if path:
                        path.pop()


def orient_into(
    edges: Sequence[Edge],
    capacity: Sequence[int],
    selected: frozenset[int] | set[int],
) -> dict[Edge, int] | None:
    """Assign each edge a head inside ``selected`` without exceeding capacities.

    Flow network: source -> one node per edge (cap 1), edge -> each of its
    endpoints that lies in ``selected`` (cap 1), vertex -> sink with the
    vertex capacity.  Feasible iff the max flow saturates every edge.
    Returns edge -> head, or None.
    """
    m = len(edges)
    if m == 0:
        return {}
    sel = sorted(selected)
    vid = {v: m + 1 + i for i, v in enumerate(sel)}
    source, sink = 0, m + 1 + len(sel)
    net = _Dinic(sink + 1)
    eout: list[list[tuple[int, int]]] = []  # per edge: (arc index, head vertex)
    for i, (u, v) in enumerate(edges):
        net.add(source, 1 + i, 1)
        arcs = []
        for w in (u, v):
            if w in vid:
                arcs.append((net.add(1 + i, vid[w], 1), w))
        eout.append(arcs)
    for v in sel:
        c = capacity[v]
        if c > 0:
            net.add(vid[v], sink, c)
    if net.max_flow(source, sink) < m:
        return None
    heads: dict[Edge, int] = {}
    for i, (u, v) in enumerate(edges):
        for arc, w in eout[i]:
            if net.cap[arc] == 0:  # saturated: edge assigned to w
                heads[(u, v)] = w
                break
    return heads


def assign_edges(g: CapacitatedGraph, selected: Iterable[int]) -> Orientation | None:
    """Orientation with in-degree 0 outside ``selected`` and capacities
    respected inside, or None when no such orientation exists.

    Deterministic for a fixed input.
    """
    sel = frozenset(selected)
    heads = orient_into(g.edges, g.capacity, sel)
    if heads is None:
        return None
    return Orientation(heads)


# ---------------------------------------------------------------------------
# instance and certificate files

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_instance(text: str) -> CapacitatedGraph:
    """Parse the line-oriented instance format.

    Header ``cvc <n> <m>`` with an optional trailing budget, then ``v <id>
    <capacity>`` for every vertex and ``e <u> <v>`` per edge.  ``#`` starts
    a comment.  Errors carry the offending line number.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise GraphFormatError("empty instance")
    lineno, head = lines[0]
    if head[0] != "cvc" or len(head) not in (3, 4):
        raise GraphFormatError(f"line {lineno}: expected 'cvc <n> <m> [k]'")
    try:
        n, m = int(head[1]), int(head[2])
        budget = int(head[3]) if len(head) == 4 else None
    except ValueError:
        raise GraphFormatError(f"line {lineno}: non-integer header field") from None
    if n < 0 or m < 0 or (budget is not None and budget < 0):
        raise GraphFormatError(f"line {lineno}: negative header field")

    caps = [None] * (n + 1)
    edges: list[Edge] = []
    seen_edges: set[Edge] = set()
    for lineno, parts in lines[1:]:
        kind = parts[0]
        if kind == "v":
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'v <id> <capacity>'")
            try:
                v, c = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer vertex field") from None
            if not 1 <= v <= n:
                raise GraphFormatError(f"line {lineno}: unknown vertex id {v}")
            if caps[v] is not None:
                raise GraphFormatError(f"line {lineno}: duplicate vertex line for {v}")
            if c < 0:
                raise GraphFormatError(f"line {lineno}: negative capacity")
            caps[v] = c
        elif kind == "e":
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'e <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer edge field") from None
            if u == v:
                raise GraphFormatError(f"line {lineno}: loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"line {lineno}: unknown vertex id in edge")
            e = canonical_edge(u, v)
            if e in seen_edges:
                raise GraphFormatError(f"line {lineno}: duplicate edge ({u},{v})")
            seen_edges.add(e)
            edges.append(e)
        else:
            raise GraphFormatError(f"line {lineno}: unknown record '{kind}'")
    missing = [v for v in range(1, n + 1) if caps[v] is None]
    if missing:
        raise GraphFormatError(f"missing capacity line for vertex {missing[0]}")
    if len(edges) != m:
        raise GraphFormatError(f"declared {m} edges, found {len(edges)}")
    return CapacitatedGraph(n, tuple(sorted(edges)), tuple([0] + [int(c) for c in caps[1:]]), budget)


def format_instance(g: CapacitatedGraph) -> str:
    head = f"cvc {g.n} {len(g.edges)}"
    if g.budget is not None:
        head += f" {g.budget}"
    out = [head]
    out.extend(f"v {v} {g.capacity[v]}" for v in range(1, g.n + 1))
    out.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def parse_orientation(text: str, g: CapacitatedGraph) -> Orientation:
    """Parse an ``a <tail> <head>`` certificate against an instance."""
    heads: dict[Edge, int] = {}
    for lineno, parts in _content_lines(text):
        if parts[0] != "a" or len(parts) != 3:
            raise GraphFormatError(f"line {lineno}: expected 'a <tail> <head>'")
        try:
            tail, head = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer arc field") from None
        e = canonical_edge(tail, head)
        if e not in g.edge_set:
            raise StructuralError(f"line {lineno}: arc over a non-edge ({tail},{head})")
        if e in heads:
            raise StructuralError(f"line {lineno}: duplicate arc for edge {e}")
        heads[e] = head
    if len(heads) != len(g.edges):
        raise StructuralError("certificate does not cover every edge")
    return Orientation(heads)


def format_orientation(orientation: Orientation) -> str:
    lines = [f"a {t} {h}" for t, h in sorted(orientation.arcs())]
    return "\n".join(lines) + "\n"

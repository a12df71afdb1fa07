"""Set multicover to capacitated vertex cover.

One element vertex per universe element (forced by a bundle of pendant
leaves), one set vertex per input set with capacity equal to its degree,
and element capacities short by the coverage demand, so each element must
push that many edges onto selected set vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import CapacitatedGraph, GraphFormatError
from ..oracle import ChoiceGroups


@dataclass(frozen=True)
class SmcInstance:
    universe_size: int
    sets: tuple[frozenset[int], ...]
    demand: int
    budget: int

    def __post_init__(self):
        for s in self.sets:
            for x in s:
                if not 1 <= x <= self.universe_size:
                    raise GraphFormatError(f"element {x} outside universe")


@dataclass(frozen=True)
class SmcReduction:
    graph: CapacitatedGraph
    budget: int
    meta: ChoiceGroups
    element_vertices: tuple[int, ...]
    set_vertices: tuple[int, ...]


def reduce_smc(inst: SmcInstance) -> SmcReduction:
    """Emit the derived instance with budget m + k.

    Pendant leaves carry capacity 0, so they can never absorb a pushed
    edge: an element short of coverage stays uncoverable and the
    equivalence holds for degenerate inputs too.  The element vertices
    form a vertex cover of the output by construction.
    """
    m, n = inst.universe_size, len(inst.sets)
    kprime = m + inst.budget
    elements = tuple(range(1, m + 1))
    set_vertices = tuple(range(m + 1, m + n + 1))
    edges = []
    for j, s in enumerate(inst.sets):
        for x in sorted(s):
            edges.append((x, m + 1 + j))
    next_id = m + n + 1
    leaf_caps = {}
    for x in elements:
        for _ in range(kprime + 1):
            edges.append((x, next_id))
            leaf_caps[next_id] = 0
            next_id += 1
    total = next_id - 1
    deg = [0] * (total + 1)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    caps = {}
    for x in elements:
        caps[x] = max(deg[x] - inst.demand, 0)
    for j, u in enumerate(set_vertices):
        caps[u] = deg[u]
    caps.update(leaf_caps)
    graph = CapacitatedGraph.build(total, edges, caps, budget=kprime)
    meta = ChoiceGroups(frozenset(elements), (), frozenset(set_vertices))
    return SmcReduction(graph, kprime, meta, elements, set_vertices)


def parse_smc(text: str) -> SmcInstance:
    """``smc <m> <n> <b> <k>`` then one ``set <j> <elements...>`` per set."""
    header = None
    sets: dict[int, frozenset[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "smc":
            if header is not None or len(parts) != 5:
                raise GraphFormatError(f"line {lineno}: bad smc header")
            try:
                header = tuple(int(x) for x in parts[1:])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer header") from None
        elif parts[0] == "set":
            if header is None:
                raise GraphFormatError(f"line {lineno}: set before header")
            try:
                j = int(parts[1])
                elems = frozenset(int(x) for x in parts[2:])
            except (IndexError, ValueError):
                raise GraphFormatError(f"line {lineno}: bad set line") from None
            if j in sets:
                raise GraphFormatError(f"line {lineno}: duplicate set {j}")
            sets[j] = elems
        else:
            raise GraphFormatError(f"line {lineno}: unknown record '{parts[0]}'")
    if header is None:
        raise GraphFormatError("missing smc header")
    m, n, b, k = header
    if set(sets) != set(range(1, n + 1)):
        raise GraphFormatError(f"expected sets 1..{n}")
    return SmcInstance(m, tuple(sets[j] for j in range(1, n + 1)), b, k)


def format_smc(inst: SmcInstance) -> str:
    out = [f"smc {inst.universe_size} {len(inst.sets)} {inst.demand} {inst.budget}"]
    for j, s in enumerate(inst.sets, start=1):
        out.append(f"set {j} " + " ".join(map(str, sorted(s))))
    return "\n".join(line.rstrip() for line in out) + "\n"

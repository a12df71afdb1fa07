"""Multicolored clique to capacitated vertex cover with shallow structure.

One choice gadget per color class picks a vertex index; a four-way
recursive family of adjacency gadgets checks every ordered class pair at
its base, with copy gadgets transporting the chosen index down the
recursion.  Index transport and adjacency validation both run through
bundles of parallel degree-2 pendant-forced vertices whose bundle sizes
encode the index in unary from both ends.

The same recursion yields an elimination forest: each level's copy
vertices form the separator chain, the four sub-gadgets hang below in
parallel, and everything else is constant-depth, so the witness depth
grows linearly in the class count.
"""

from __future__ import annotations

from dataclasses import dataclass
from ..core import CapacitatedGraph, GraphFormatError
from ..oracle import ChoiceGroups

ClassVertex = tuple[int, int]  # (class, index)


@dataclass(frozen=True)
class MccInstance:
    """k independent classes of n vertices plus cross-class edges.

    Self-adjacency is implicit: the diagonal pairs exist in every class
    without being listed.
    """

    k: int
    n: int
    edges: frozenset[frozenset[ClassVertex]]

    def __post_init__(self):
        for e in self.edges:
            pair = sorted(e)
            if len(pair) != 2:
                raise GraphFormatError("malformed class edge")
            (i, a), (j, b) = pair
            if i == j:
                raise GraphFormatError("classes must be independent sets")
            for cls, idx in pair:
                if not (1 <= cls <= self.k and 1 <= idx <= self.n):
                    raise GraphFormatError(f"vertex ({cls},{idx}) out of range")


@dataclass(frozen=True)
class TreedepthWitness:
    """Elimination forest: parent id per vertex, 0 for roots."""

    parent: dict[int, int]


def verify_td_witness(g: CapacitatedGraph, witness: TreedepthWitness) -> tuple[bool, int]:
    """Valid iff the parent map is a forest over V(G) and every edge joins
    an ancestor-descendant pair.  Returns (valid, depth in vertices)."""
    parent = witness.parent
    if set(parent) != set(g.vertices()):
        return False, 0
    depth: dict[int, int] = {}
    for v in g.vertices():
        chain = []
        on_chain = set()
        x = v
        while x != 0 and x not in depth:
            if x in on_chain:
                return False, 0  # cycle
            if x not in parent:
                return False, 0
            chain.append(x)
            on_chain.add(x)
            x = parent[x]
        base = 0 if x == 0 else depth[x]
        for u in reversed(chain):
            base += 1
            depth[u] = base
    max_depth = max(depth.values(), default=0)
    for u, v in g.edges:
        a, b = (u, v) if depth[u] >= depth[v] else (v, u)
        x = a
        for _ in range(depth[a] - depth[b]):
            x = parent[x]
        if x != b:
            return False, max_depth
    return True, max_depth


def parse_witness(text: str) -> TreedepthWitness:
    parent: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "parent" or len(parts) != 3:
            raise GraphFormatError(f"line {lineno}: expected 'parent <v> <p|0>'")
        try:
            v, p = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer field") from None
        if v in parent:
            raise GraphFormatError(f"line {lineno}: duplicate entry for {v}")
        parent[v] = p
    return TreedepthWitness(parent)


def format_witness(witness: TreedepthWitness) -> str:
    return "\n".join(f"parent {v} {p}" for v, p in sorted(witness.parent.items())) + "\n"


def parse_mcc(text: str) -> MccInstance:
    """``mcc <k> <n>`` then ``class <i> <ids...>`` and ``e <u> <v>`` lines
    over global vertex ids."""
    header = None
    classes: dict[int, list[int]] = {}
    raw_edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "mcc" and len(parts) == 3:
                header = (int(parts[1]), int(parts[2]))
            elif parts[0] == "class":
                classes[int(parts[1])] = [int(x) for x in parts[2:]]
            elif parts[0] == "e" and len(parts) == 3:
                raw_edges.append((int(parts[1]), int(parts[2])))
            else:
                raise GraphFormatError(f"line {lineno}: unknown record")
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer field") from None
    if header is None:
        raise GraphFormatError("missing mcc header")
    k, n = header
    where: dict[int, ClassVertex] = {}
    for i in range(1, k + 1):
        ids = classes.get(i)
        if ids is None or len(ids) != n:
            raise GraphFormatError(f"class {i} must list exactly {n} ids")
        for j, vid in enumerate(ids, start=1):
            if vid in where:
                raise GraphFormatError(f"vertex id {vid} in two classes")
            where[vid] = (i, j)
    edges = set()
    for u, v in raw_edges:
        if u not in where or v not in where:
            raise GraphFormatError(f"edge ({u},{v}) references unknown id")
        edges.add(frozenset((where[u], where[v])))
    return MccInstance(k, n, frozenset(edges))


def format_mcc(inst: MccInstance) -> str:
    out = [f"mcc {inst.k} {inst.n}"]
    gid = lambda cv: (cv[0] - 1) * inst.n + cv[1]
    for i in range(1, inst.k + 1):
        ids = [str((i - 1) * inst.n + j) for j in range(1, inst.n + 1)]
        out.append(f"class {i} " + " ".join(ids))
    for e in sorted(inst.edges, key=lambda e: sorted(gid(cv) for cv in e)):
        a, b = sorted(gid(cv) for cv in e)
        out.append(f"e {a} {b}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class MccReduction:
    graph: CapacitatedGraph
    budget: int
    witness: TreedepthWitness
    meta: ChoiceGroups
    choice_groups: tuple[frozenset[int], ...]
    edge_groups: tuple[frozenset[int], ...]
    clique_selection: dict  # (class, index) -> per-instance chosen vertex ids


class _Builder:
    def __init__(self, n: int):
        self.n = n
        self.next_id = 1
        self.edges: list[tuple[int, int]] = []
        self.demand: dict[int, int] = {}
        self.marked: list[int] = []
        self.parent: dict[int, int] = {}
        self.choice_instances: list[dict] = []
        self.edge_groups: list[tuple[int, frozenset[int], dict]] = []

    def plain(self) -> int:
        v = self.next_id
        self.next_id += 1
        self.demand[v] = 0
        return v

    def marked_vertex(self, dem: int) -> int:
        v = self.next_id
        self.next_id += 1
        self.demand[v] = dem
        self.marked.append(v)
        return v

    def edge(self, u: int, v: int) -> None:
        self.edges.append((u, v) if u < v else (v, u))

    def bundle(self, count: int, a: int, b: int, attach: int) -> None:
        """A `count`-edge: that many parallel pendant-forced degree-2
        vertices between a and b, hanging under `attach` in the witness."""
        for _ in range(count):
            z = self.marked_vertex(1)
            self.edge(z, a)
            self.edge(z, b)
            self.parent[z] = attach

    def choice_instance(self, cls: int) -> dict:
        head = self.marked_vertex(1)
        picks = [self.plain() for _ in range(self.n)]
        for v in picks:
            self.edge(head, v)
        inst = {"class": cls, "head": head, "picks": picks}
        self.choice_instances.append(inst)
        return inst


def _build_gadget(b: _Builder, epair, lo1, hi1, lo2, hi2) -> dict:
    n = b.n
    row = {p: b.choice_instance(p) for p in range(lo1, hi1 + 1)}
    col = {p: b.choice_instance(p) for p in range(lo2, hi2 + 1)}
    if lo1 == hi1 and lo2 == hi2:
        i, ip = lo1, lo2
        ehead = b.marked_vertex(1)
        alpha = b.marked_vertex(n)
        beta = b.marked_vertex(n)
        kappa = b.marked_vertex(n)
        lam = b.marked_vertex(n)
        pair_vertices: dict[tuple[int, int], int] = {}
        for j, jp in epair(i, ip):
            ve = b.plain()
            pair_vertices[(j, jp)] = ve
            b.edge(ehead, ve)
        for j, v in enumerate(row[i]["picks"], start=1):
            b.bundle(j, v, alpha, attach=v)
            b.bundle(n - j, v, beta, attach=v)
        for jp, v in enumerate(col[ip]["picks"], start=1):
            b.bundle(jp, v, kappa, attach=v)
            b.bundle(n - jp, v, lam, attach=v)
        for (j, jp), ve in pair_vertices.items():
            b.bundle(n - j, ve, alpha, attach=ve)
            b.bundle(j, ve, beta, attach=ve)
            b.bundle(n - jp, ve, kappa, attach=ve)
            b.bundle(jp, ve, lam, attach=ve)
        chain = [alpha, beta, kappa, lam, ehead, row[i]["head"], col[ip]["head"]]
        for prev, cur in zip(chain, chain[1:]):
            b.parent[cur] = prev
        bottom = chain[-1]
        for v in row[i]["picks"] + col[ip]["picks"]:
            b.parent[v] = bottom
        for ve in pair_vertices.values():
            b.parent[ve] = bottom
        b.edge_groups.append(((i, ip), frozenset(pair_vertices.values()), pair_vertices))
        return {"row": row, "col": col, "top": chain[0]}

    mid1 = (lo1 + hi1) // 2
    mid2 = (lo2 + hi2) // 2
    subs = [
        _build_gadget(b, epair, lo1, mid1, lo2, mid2),
        _build_gadget(b, epair, lo1, mid1, mid2 + 1, hi2),
        _build_gadget(b, epair, mid1 + 1, hi1, lo2, mid2),
        _build_gadget(b, epair, mid1 + 1, hi1, mid2 + 1, hi2),
    ]
    copy_vertices: list[int] = []

    def copy_gadget(parent_inst: dict, sub_inst: dict) -> None:
        g1 = b.marked_vertex(n)
        g2 = b.marked_vertex(n)
        copy_vertices.extend((g1, g2))
        for j, v in enumerate(parent_inst["picks"], start=1):
            b.bundle(j, v, g1, attach=v)
            b.bundle(n - j, v, g2, attach=v)
        for j, v in enumerate(sub_inst["picks"], start=1):
            b.bundle(n - j, v, g1, attach=v)
            b.bundle(j, v, g2, attach=v)

    for p in range(lo1, hi1 + 1):
        pair = (subs[0], subs[1]) if p <= mid1 else (subs[2], subs[3])
        copy_gadget(row[p], pair[0]["row"][p])
        copy_gadget(row[p], pair[1]["row"][p])
    for p in range(lo2, hi2 + 1):
        pair = (subs[0], subs[2]) if p <= mid2 else (subs[1], subs[3])
        copy_gadget(col[p], pair[0]["col"][p])
        copy_gadget(col[p], pair[1]["col"][p])

    for prev, cur in zip(copy_vertices, copy_vertices[1:]):
        b.parent[cur] = prev
    bottom = copy_vertices[-1]
    for sub in subs:
        b.parent[sub["top"]] = bottom
    for inst in list(row.values()) + list(col.values()):
        b.parent[inst["head"]] = bottom
        for v in inst["picks"]:
            b.parent[v] = inst["head"]
    return {"row": row, "col": col, "top": copy_vertices[0]}


def reduce_mcc_td(inst: MccInstance) -> MccReduction:
    """Emit the derived instance, its budget, a tree-depth witness, and the
    canonical-space metadata (choice groups first, then edge groups)."""
    k, n = inst.k, inst.n
    cross = set(inst.edges)
    kk = 1
    while kk < k:
        kk *= 2
    if kk != k:  # dummy classes adjacent to everything else
        for c in range(k + 1, kk + 1):
            for j in range(1, n + 1):
                for c2 in range(1, kk + 1):
                    if c2 == c:
                        continue
                    for j2 in range(1, n + 1):
                        cross.add(frozenset(((c, j), (c2, j2))))
        k = kk

    def epair(i, ip):
        if i == ip:
            return [(j, j) for j in range(1, n + 1)]
        return sorted(
            (j, jp)
            for j in range(1, n + 1)
            for jp in range(1, n + 1)
            if frozenset(((i, j), (ip, jp))) in cross
        )

    b = _Builder(n)
    root = _build_gadget(b, epair, 1, k, 1, k)
    b.parent[root["top"]] = 0

    gamma = len(b.choice_instances)
    delta = len(b.marked)
    budget = k * k + gamma + delta

    leaf_caps: dict[int, int] = {}
    for v in list(b.marked):
        for _ in range(budget + 1):
            leaf = b.next_id
            b.next_id += 1
            b.edge(v, leaf)
            leaf_caps[leaf] = 1
            b.parent[leaf] = v
    total = b.next_id - 1

    deg = [0] * (total + 1)
    for u, v in b.edges:
        deg[u] += 1
        deg[v] += 1
    caps = dict(leaf_caps)
    for v, dem in b.demand.items():
        caps[v] = max(deg[v] - dem, 0)

    graph = CapacitatedGraph.build(total, b.edges, caps, budget=budget)
    witness = TreedepthWitness(dict(b.parent))

    choice_groups = tuple(frozenset(inst_["picks"]) for inst_ in b.choice_instances)
    edge_groups = tuple(grp for _, grp, _ in b.edge_groups)
    meta = ChoiceGroups(
        frozenset(b.marked), choice_groups + edge_groups, frozenset()
    )
    selection: dict = {}
    for inst_ in b.choice_instances:
        for j, vid in enumerate(inst_["picks"], start=1):
            selection.setdefault((inst_["class"], j), []).append(vid)
    for (pair, _, mapping) in b.edge_groups:
        selection[("edge", pair)] = mapping
    return MccReduction(
        graph, budget, witness, meta, choice_groups, edge_groups, selection
    )

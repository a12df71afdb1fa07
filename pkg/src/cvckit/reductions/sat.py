"""Exactly-one-in-three SAT to capacitated vertex cover, two ways.

The natural-parameter construction groups variables and clauses, picks one
partial assignment per variable group through a choice gadget, and audits
clause satisfaction only through aggregate counts over a detecting family.
The clique-width construction keeps the graph's label structure flat
(complete bipartite clause/literal sides plus selector pairs) and encodes
clause incidence purely through capacities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from ..core import CapacitatedGraph, GraphFormatError, StructuralError
from ..detecting import DetectingFamily, is_detecting
from ..oracle import ChoiceGroups
from .cliquewidth import CliquewidthExpression

Literal = tuple[int, bool]  # (variable, positive?)


@dataclass(frozen=True)
class Cnf1in3:
    """CNF with exactly three distinct variables per clause; the query is
    an assignment making exactly one literal true per clause."""

    num_vars: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        for clause in self.clauses:
            vs = [v for v, _ in clause]
            if len(set(vs)) != 3:
                raise GraphFormatError("clauses need three distinct variables")
            if any(not 1 <= v <= self.num_vars for v in vs):
                raise GraphFormatError("clause variable out of range")

    def occurrences(self, var: int) -> int:
        return sum(1 for clause in self.clauses for v, _ in clause if v == var)

    def within_degree_bound(self, limit: int = 4) -> bool:
        return all(self.occurrences(v) <= limit for v in range(1, self.num_vars + 1))


def parse_dimacs(text: str) -> Cnf1in3:
    num_vars = None
    declared = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "cnf":
                raise GraphFormatError(f"line {lineno}: expected 'p cnf <n> <m>'")
            num_vars, declared = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise GraphFormatError(f"line {lineno}: clause before header")
        try:
            lits = [int(x) for x in parts]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer literal") from None
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if len(lits) != 3:
            raise GraphFormatError(f"line {lineno}: expected exactly 3 literals")
        clauses.append(tuple((abs(x), x > 0) for x in lits))
    if num_vars is None:
        raise GraphFormatError("missing 'p cnf' header")
    if declared is not None and declared != len(clauses):
        raise GraphFormatError(f"declared {declared} clauses, found {len(clauses)}")
    return Cnf1in3(num_vars, tuple(clauses))


def format_dimacs(psi: Cnf1in3) -> str:
    out = [f"p cnf {psi.num_vars} {len(psi.clauses)}"]
    for clause in psi.clauses:
        out.append(" ".join(str(v if pos else -v) for v, pos in clause) + " 0")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# grouping

@dataclass(frozen=True)
class Grouping:
    variable_groups: tuple[tuple[int, ...], ...]
    clause_groups: tuple[tuple[int, ...], ...]  # clause indices, 0-based


def verify_grouping(psi: Cnf1in3, grouping: Grouping) -> bool:
    """Check the partition property: for each variable group and clause
    group, at most one occurrence of the group's variables in total."""
    vs = sorted(v for grp in grouping.variable_groups for v in grp)
    if vs != list(range(1, psi.num_vars + 1)):
        return False
    cs = sorted(c for grp in grouping.clause_groups for c in grp)
    if cs != list(range(len(psi.clauses))):
        return False
    for vgroup in grouping.variable_groups:
        vset = set(vgroup)
        for cgroup in grouping.clause_groups:
            occ = sum(
                1
                for c in cgroup
                for v, _ in psi.clauses[c]
                if v in vset
            )
            if occ > 1:
                return False
    return True


def group_formula(psi: Cnf1in3, mode: str = "trivial") -> Grouping:
    """Partition variables and clauses so every pair of groups shares at
    most one occurrence.

    trivial: singleton groups on both sides, always valid since clause
    variables are distinct.  greedy: pack clause groups from clauses with
    pairwise-disjoint variable sets, then pack variable groups avoiding
    pairs that co-occur in a clause group; verified, with fallback to
    trivial if packing ever fails the check.
    """
    m = len(psi.clauses)
    trivial = Grouping(
        tuple((v,) for v in range(1, psi.num_vars + 1)),
        tuple((c,) for c in range(m)),
    )
    if mode == "trivial":
        return trivial
    if mode != "greedy":
        raise ValueError(f"unknown mode '{mode}'")

    clause_target = max(1, math.isqrt(max(m, 1)))
    cgroups: list[list[int]] = []
    cvars: list[set[int]] = []
    for c in range(m):
        vs = {v for v, _ in psi.clauses[c]}
        placed = False
        for gi, grp in enumerate(cgroups):
            if len(grp) < clause_target and not (cvars[gi] & vs):
                grp.append(c)
                cvars[gi] |= vs
                placed = True
                break
        if not placed:
            cgroups.append([c])
            cvars.append(set(vs))

    conflicts: dict[int, set[int]] = {v: set() for v in range(1, psi.num_vars + 1)}
    for gi, grp in enumerate(cgroups):
        vs = sorted(cvars[gi])
        for i, a in enumerate(vs):
            for b in vs[i + 1 :]:
                conflicts[a].add(b)
                conflicts[b].add(a)
    var_target = max(1, int(math.log2(psi.num_vars)) if psi.num_vars > 1 else 1)
    vgroups: list[list[int]] = []
    for v in range(1, psi.num_vars + 1):
        placed = False
        for grp in vgroups:
            if len(grp) < var_target and not (conflicts[v] & set(grp)):
                grp.append(v)
                placed = True
                break
        if not placed:
            vgroups.append([v])
    grouping = Grouping(
        tuple(tuple(grp) for grp in vgroups),
        tuple(tuple(grp) for grp in cgroups),
    )
    if not verify_grouping(psi, grouping):
        return trivial
    return grouping


# ---------------------------------------------------------------------------
# natural-parameter reduction

@dataclass(frozen=True)
class NaturalReduction:
    graph: CapacitatedGraph
    budget: int
    meta: ChoiceGroups
    grouping: Grouping
    families: tuple[DetectingFamily, ...]
    assignment_of: dict  # assignment-vertex id -> (group index, {var: bool})
    choice_heads: tuple[int, ...]  # one per variable group
    test_pairs: tuple[tuple[int, int, int], ...]  # (a, a-complement, set size)


def reduce_sat_natural(
    psi: Cnf1in3, grouping: Grouping, families: tuple[DetectingFamily, ...] | list
) -> NaturalReduction:
    """Choice gadget per variable group, one aggregate-test vertex pair per
    detecting set; capacities are derived from the actual degrees rather
    than any closed-form count, so arbitrary verified groupings work."""
    if not verify_grouping(psi, grouping):
        raise StructuralError("grouping fails the one-occurrence property")
    if len(families) != len(grouping.clause_groups):
        raise StructuralError("need one detecting family per clause group")
    for fam, cgroup in zip(families, grouping.clause_groups):
        if fam.universe_size != len(cgroup) or fam.d != 4:
            raise StructuralError("family universe/d does not match its clause group")
        if not is_detecting(fam.universe_size, fam.sets, fam.d):
            raise StructuralError("family failed detecting verification")

    n_v = len(grouping.variable_groups)
    total_sets = sum(len(f.sets) for f in families)
    k = 2 * n_v + 2 * total_sets

    next_id = 1
    choice_heads: list[int] = []  # u_p ids
    assignment_ids: list[list[int]] = []  # per group
    assignment_of: dict[int, tuple[int, dict[int, bool]]] = {}
    edges: list[tuple[int, int]] = []
    for p, vgroup in enumerate(grouping.variable_groups):
        u_p = next_id
        next_id += 1
        choice_heads.append(u_p)
        ids = []
        for bits in product((False, True), repeat=len(vgroup)):
            vid = next_id
            next_id += 1
            ids.append(vid)
            assignment_of[vid] = (p, dict(zip(vgroup, bits)))
            edges.append((u_p, vid))
        assignment_ids.append(ids)
    all_assignment = [vid for ids in assignment_ids for vid in ids]

    # occurrence of a variable group inside a clause group: at most one
    # (clause index, literal) by the grouping property
    occurrence: dict[tuple[int, int], tuple[int, Literal]] = {}
    for p, vgroup in enumerate(grouping.variable_groups):
        vset = set(vgroup)
        for i, cgroup in enumerate(grouping.clause_groups):
            for c in cgroup:
                for lit in psi.clauses[c]:
                    if lit[0] in vset:
                        occurrence[(p, i)] = (c, lit)

    test_pairs: list[tuple[int, int, int]] = []  # (a id, a' id, |detecting set|)
    for i, (fam, cgroup) in enumerate(zip(families, grouping.clause_groups)):
        for subset in fam.sets:
            clause_ids = {cgroup[x - 1] for x in subset}
            a_id = next_id
            next_id += 1
            a_mate = next_id
            next_id += 1
            test_pairs.append((a_id, a_mate, len(subset)))
            satisfied: set[int] = set()
            for p in range(n_v):
                occ = occurrence.get((p, i))
                if occ is None or occ[0] not in clause_ids:
                    continue
                _, (var, positive) = occ
                for vid in assignment_ids[p]:
                    if assignment_of[vid][1][var] == positive:
                        satisfied.add(vid)
            for vid in all_assignment:
                target = a_id if vid in satisfied else a_mate
                edges.append((min(target, vid), max(target, vid)))

    marked = choice_heads + [x for pair in test_pairs for x in pair[:2]]
    leaf_caps = {}
    for v in marked:
        for _ in range(k + 1):
            edges.append((v, next_id))
            leaf_caps[next_id] = 1
            next_id += 1
    total = next_id - 1

    deg = [0] * (total + 1)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    caps: dict[int, int] = dict(leaf_caps)
    for u_p in choice_heads:
        caps[u_p] = deg[u_p] - 1
    for vid in all_assignment:
        caps[vid] = deg[vid]
    for a_id, a_mate, size in test_pairs:
        caps[a_id] = min(max(deg[a_id] - size, 0), deg[a_id])
        caps[a_mate] = min(max(deg[a_mate] - (n_v - size), 0), deg[a_mate])

    graph = CapacitatedGraph.build(total, edges, caps, budget=k)
    meta = ChoiceGroups(
        frozenset(marked),
        tuple(frozenset(ids) for ids in assignment_ids),
        frozenset(),
    )
    return NaturalReduction(
        graph,
        k,
        meta,
        grouping,
        tuple(families),
        assignment_of,
        tuple(choice_heads),
        tuple(test_pairs),
    )


# ---------------------------------------------------------------------------
# clique-width reduction

@dataclass(frozen=True)
class CwReduction:
    graph: CapacitatedGraph
    budget: int
    expression: CliquewidthExpression
    meta: ChoiceGroups
    selector_of: dict  # variable -> (v_i id, negated id)


def reduce_sat_cw(psi: Cnf1in3) -> CwReduction:
    """Flat-label construction: positive and negative clause/literal sides
    as complete bipartite blocks, one selector pair per variable, every
    non-selector vertex pinned by a leaf bundle, budget 8m + n.

    Vertex ids follow the build script, so the emitted expression
    introduces ids in increasing order.
    """
    n, m = psi.num_vars, len(psi.clauses)
    k = 8 * m + n

    next_id = 1
    edges: list[tuple[int, int]] = []
    demand: dict[int, int] = {}
    leaf_caps: dict[int, int] = {}
    ops: list[tuple] = []

    def fresh() -> int:
        nonlocal next_id
        v = next_id
        next_id += 1
        return v

    def intro_marked(label: int, dem: int) -> int:
        v = fresh()
        demand[v] = dem
        ops.append(("intro", v, label))
        for _ in range(k + 1):
            leaf = fresh()
            leaf_caps[leaf] = 1
            ops.append(("intro", leaf, 5))
            edges.append((v, leaf))
        ops.append(("join", label, 5))
        ops.append(("relabel", 5, 6))
        return v

    # literal occurrences by selector: (clause index, side) lists
    pos_lists: dict[int, list[tuple[int, str]]] = {v: [] for v in range(1, n + 1)}
    neg_lists: dict[int, list[tuple[int, str]]] = {v: [] for v in range(1, n + 1)}
    for j, clause in enumerate(psi.clauses):
        for var, positive in clause:
            if positive:
                pos_lists[var].append((j, "+"))
                neg_lists[var].append((j, "-"))
            else:
                pos_lists[var].append((j, "-"))
                neg_lists[var].append((j, "+"))
    # pos_lists[v]: occurrences whose literal vertex neighbors v_i
    #   literal x_i   -> positive copy attaches to v_i, negative copy to the negation
    #   literal !x_i  -> negative copy attaches to v_i, positive copy to the negation

    lit_plus: dict[tuple[int, int], int] = {}  # (clause, var) -> positive copy id
    lit_minus: dict[tuple[int, int], int] = {}
    selector_of: dict[int, tuple[int, int]] = {}

    for var in range(1, n + 1):
        v_id = fresh()
        demand[v_id] = 0
        ops.append(("intro", v_id, 3))
        for j, side in sorted(pos_lists[var]):
            lit = intro_marked(4, j + 1)
            (lit_plus if side == "+" else lit_minus)[(j, var)] = lit
            edges.append((v_id, lit))
            ops.append(("join", 3, 4))
            ops.append(("relabel", 4, 1 if side == "+" else 2))
        bar_id = fresh()
        demand[bar_id] = 0
        ops.append(("intro", bar_id, 4))
        edges.append((v_id, bar_id))
        ops.append(("join", 3, 4))
        ops.append(("relabel", 3, 6))
        for j, side in sorted(neg_lists[var]):
            lit = intro_marked(3, j + 1)
            (lit_plus if side == "+" else lit_minus)[(j, var)] = lit
            edges.append((bar_id, lit))
            ops.append(("join", 4, 3))
            ops.append(("relabel", 3, 1 if side == "+" else 2))
        ops.append(("relabel", 4, 6))
        selector_of[var] = (v_id, bar_id)

    clause_plus = []
    clause_minus = []
    for j in range(m):
        c = intro_marked(3, 3 * j + 1)
        clause_plus.append(c)
        for lit in sorted(lit_plus.values()):
            edges.append((min(c, lit), max(c, lit)))
        ops.append(("join", 3, 1))
        ops.append(("relabel", 3, 6))
    for j in range(m):
        c = intro_marked(3, 3 * j + 2)
        clause_minus.append(c)
        for lit in sorted(lit_minus.values()):
            edges.append((min(c, lit), max(c, lit)))
        ops.append(("join", 3, 2))
        ops.append(("relabel", 3, 6))

    total = next_id - 1
    deg = [0] * (total + 1)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    caps = dict(leaf_caps)
    for v, dem in demand.items():
        caps[v] = max(deg[v] - dem, 0)

    graph = CapacitatedGraph.build(total, edges, caps, budget=k)
    marked = frozenset(list(lit_plus.values()) + list(lit_minus.values()) + clause_plus + clause_minus)
    groups = tuple(frozenset(selector_of[v]) for v in range(1, n + 1))
    meta = ChoiceGroups(marked, groups, frozenset())
    return CwReduction(graph, k, CliquewidthExpression(tuple(ops)), meta, selector_of)

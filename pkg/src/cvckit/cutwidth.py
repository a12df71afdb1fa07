"""Dynamic programming over a linear arrangement, one table per cut.

A state at cut i is a direction assignment for the edges crossing the cut,
so each layer holds exactly 2^{|crossing set|} values: the minimum number
of already-placed vertices with positive in-degree, over orientations that
agree with the assignment and respect capacities on the placed prefix.

The layer transition first fixes the directions of the edges that survive
from the previous cut, then buckets predecessors by how many edges enter
the new vertex from the left, so one layer costs time proportional to
2^{|prev cut|} + 2^{|cut|} times a small polynomial instead of the naive
product of both table sizes.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .core import (
    CapacitatedGraph,
    CapExceededError,
    Edge,
    GraphFormatError,
    Orientation,
    StructuralError,
    normalize_capacities,
)

INF = math.inf
MAX_CUT_BITS = 26  # table-size guard: one layer may hold at most 2^26 entries
DEFAULT_EXACT_ARRANGEMENT_CAP = 16


@dataclass(frozen=True)
class LinearArrangement:
    """A vertex ordering; order[i] is the vertex at position i+1."""

    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(1, len(self.order) + 1)):
            raise StructuralError("arrangement is not a permutation of 1..n")

    @cached_property
    def position(self) -> tuple[int, ...]:
        pos = [0] * (len(self.order) + 1)
        for i, v in enumerate(self.order, start=1):
            pos[v] = i
        return tuple(pos)

    def __len__(self) -> int:
        return len(self.order)


def parse_arrangement(text: str) -> LinearArrangement:
    tokens: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens or tokens[0] != "arrangement":
        raise GraphFormatError("expected 'arrangement <n>' header")
    try:
        n = int(tokens[1])
        ids = [int(t) for t in tokens[2:]]
    except (IndexError, ValueError):
        raise GraphFormatError("malformed arrangement file") from None
    if len(ids) != n:
        raise GraphFormatError(f"arrangement declares {n} vertices, lists {len(ids)}")
    return LinearArrangement(tuple(ids))


def format_arrangement(arr: LinearArrangement) -> str:
    return f"arrangement {len(arr)}\n" + "\n".join(map(str, arr.order)) + "\n"


def cut_edges(g: CapacitatedGraph, arr: LinearArrangement, i: int) -> list[tuple[int, int]]:
    """Edges crossing the cut after position i, as (left, right) pairs in
    canonical order (by position of the left, then the right endpoint)."""
    if not 0 <= i <= g.n:
        raise StructuralError(f"cut index {i} out of range")
    pos = arr.position
    out = []
    for u, v in g.edges:
        pu, pv = pos[u], pos[v]
        if pu > pv:
            u, v, pu, pv = v, u, pv, pu
        if pu <= i < pv:
            out.append((pu, pv, u, v))
    out.sort()
    return [(u, v) for _, _, u, v in out]


def cutwidth_of(g: CapacitatedGraph, arr: LinearArrangement) -> int:
    """Maximum number of edges crossing any prefix cut."""
    pos = arr.position
    diff = [0] * (g.n + 2)
    for u, v in g.edges:
        lo, hi = sorted((pos[u], pos[v]))
        diff[lo] += 1
        diff[hi] -= 1
    best = cur = 0
    for i in range(1, g.n + 1):
        cur += diff[i]
        best = max(best, cur)
    return best


@dataclass(frozen=True)
class CutSignature:
    """Direction assignment for the edges crossing one cut.

    bits[e] = 1 means the e-th crossing edge points left-to-right.
    """

    cut_index: int
    edges: tuple[tuple[int, int], ...]
    bits: tuple[int, ...]

    @classmethod
    def from_int(cls, cut_index: int, edges: Sequence[tuple[int, int]], value: int) -> "CutSignature":
        k = len(edges)
        bits = tuple((value >> (k - 1 - e)) & 1 for e in range(k))
        return cls(cut_index, tuple(edges), bits)


class DpLayer:
    """One DP table: every direction assignment of the cut's edges.

    Values are stored in a flat array indexed by the signature integer
    (edge 0 at the most significant bit, so integer order is lexicographic
    bit order); -1 encodes "no feasible orientation", exposed as math.inf.
    """

    __slots__ = ("cut_index", "edges", "values", "preds", "work")

    def __init__(self, cut_index, edges, values, preds, work=0):
        self.cut_index = cut_index
        self.edges = tuple(edges)
        self.values = values
        self.preds = preds
        self.work = work

    @property
    def table_size(self) -> int:
        return len(self.values)

    @property
    def table(self) -> dict[tuple[int, ...], int | float]:
        k = len(self.edges)
        out = {}
        for sig, val in enumerate(self.values):
            bits = tuple((sig >> (k - 1 - e)) & 1 for e in range(k))
            out[bits] = INF if val < 0 else val
        return out

    def value_of(self, sig: int) -> int | float:
        v = self.values[sig]
        return INF if v < 0 else v


def _scatter_table(width: int, positions: Sequence[int]) -> list[int]:
    """scatter[m] places bit j of m at target bit positions[j]."""
    if width == 0:
        return [0]
    bitvals = [1 << p for p in positions]
    out = [0] * (1 << width)
    for m in range(1, 1 << width):
        low = m & -m
        out[m] = out[m ^ low] | bitvals[low.bit_length() - 1]
    return out


def base_layer() -> DpLayer:
    values = array("q", [0])
    preds = array("q", [-1])
    return DpLayer(0, (), values, preds, 0)


def process_layer(prev: DpLayer, g: CapacitatedGraph, arr: LinearArrangement, i: int) -> DpLayer:
    """Advance the DP across the vertex at position i.

    Splits the previous cut into edges that persist (their direction is
    fixed first), edges ending at the new vertex (bucketed by how many
    point at it), and new edges leaving it (scanned once per target).
    """
    if prev.cut_index != i - 1:
        raise StructuralError("layers must be processed in position order")
    v = arr.order[i - 1]
    cap_v = g.capacity[v]
    cur_edges = cut_edges(g, arr, i)
    if len(cur_edges) > MAX_CUT_BITS or len(prev.edges) > MAX_CUT_BITS:
        raise CapExceededError(f"cut of {len(cur_edges)} edges exceeds the table guard")

    np_ = len(prev.edges)
    nq = len(cur_edges)
    prev_bit = {e: np_ - 1 - idx for idx, e in enumerate(prev.edges)}
    cur_bit = {e: nq - 1 - idx for idx, e in enumerate(cur_edges)}

    common = [e for e in prev.edges if e in cur_bit]
    left_in = [e for e in prev.edges if e not in cur_bit]  # all end at v
    right_out = [e for e in cur_edges if e not in prev_bit]  # all start at v
    nc, nl, nr = len(common), len(left_in), len(right_out)

    tau_prev = _scatter_table(nc, [prev_bit[e] for e in common])
    tau_cur = _scatter_table(nc, [cur_bit[e] for e in common])
    l_scatter = _scatter_table(nl, [prev_bit[e] for e in left_in])
    r_scatter = _scatter_table(nr, [cur_bit[e] for e in right_out])

    pv = prev.values
    values = array("q", [-1]) * (1 << nq) if nq else array("q", [-1])
    preds = array("q", [-1]) * (1 << nq) if nq else array("q", [-1])

    NL, NR = 1 << nl, 1 << nr
    work = 0
    for ti in range(1 << nc):
        tsp = tau_prev[ti]
        tsq = tau_cur[ti]
        bucket_v = [-1] * (nl + 1)
        bucket_s = [-1] * (nl + 1)
        for lm in range(NL):
            sp = tsp | l_scatter[lm]
            val = pv[sp]
            if val < 0:
                continue
            t = lm.bit_count()  # edges entering v from the left
            bv = bucket_v[t]
            if bv < 0 or val < bv or (val == bv and sp < bucket_s[t]):
                bucket_v[t] = val
                bucket_s[t] = sp
        # prefix minima over the bucket index, with the lexicographically
        # smallest predecessor signature breaking ties
        pm_v = [-1] * (nl + 1)
        pm_s = [-1] * (nl + 1)
        run_v, run_s = -1, -1
        for t in range(nl + 1):
            bv, bs = bucket_v[t], bucket_s[t]
            if bv >= 0 and (run_v < 0 or bv < run_v or (bv == run_v and bs < run_s)):
                run_v, run_s = bv, bs
            pm_v[t] = run_v
            pm_s[t] = run_s
        pp_v = [-1] * (nl + 1)  # same, restricted to t >= 1
        pp_s = [-1] * (nl + 1)
        run_v, run_s = -1, -1
        for t in range(1, nl + 1):
            bv, bs = bucket_v[t], bucket_s[t]
            if bv >= 0 and (run_v < 0 or bv < run_v or (bv == run_v and bs < run_s)):
                run_v, run_s = bv, bs
            pp_v[t] = run_v
            pp_s[t] = run_s
        for rm in range(NR):
            b = nr - rm.bit_count()  # edges entering v from the right
            rem = cap_v - b
            if rem < 0:
                continue
            tmax = rem if rem < nl else nl
            if b > 0:
                val = pm_v[tmax]
                if val < 0:
                    continue
                sq = tsq | r_scatter[rm]
                values[sq] = val + 1
                preds[sq] = pm_s[tmax]
            else:
                cand_v, cand_s = bucket_v[0], bucket_s[0]
                alt = pp_v[tmax]
                if alt >= 0:
                    alt += 1
                    if cand_v < 0 or alt < cand_v or (alt == cand_v and pp_s[tmax] < cand_s):
                        cand_v, cand_s = alt, pp_s[tmax]
                if cand_v < 0:
                    continue
                sq = tsq | r_scatter[rm]
                values[sq] = cand_v
                preds[sq] = cand_s
        work += NL + NR + 2 * (nl + 1)
    work += (1 << nc) + NL + NR  # scatter-table construction
    return DpLayer(i, cur_edges, values, preds, work)


def solve_cutdp_detailed(
    g: CapacitatedGraph, arr: LinearArrangement
) -> tuple[int | float, Orientation | None, list[DpLayer]]:
    """Run the full DP and keep every layer for inspection/reconstruction."""
    if len(arr) != g.n:
        raise StructuralError("arrangement size does not match the instance")
    g = normalize_capacities(g)
    layers = [base_layer()]
    for i in range(1, g.n + 1):
        layers.append(process_layer(layers[-1], g, arr, i))
    final = layers[g.n]
    if final.values[0] < 0:
        return INF, None, layers
    minsize = final.values[0]

    heads: dict[Edge, int] = {}
    sig = 0
    for i in range(g.n, 0, -1):
        layer = layers[i]
        v = arr.order[i - 1]
        k = len(layer.edges)
        for idx, (left, right) in enumerate(layer.edges):
            if left == v:  # edge introduced at this layer
                bit = (sig >> (k - 1 - idx)) & 1
                e = (left, right) if left < right else (right, left)
                heads[e] = right if bit else left
        sig = layer.preds[sig]
    return minsize, Orientation(heads), layers


def solve_cutdp(g: CapacitatedGraph, arr: LinearArrangement) -> tuple[int | float, Orientation | None]:
    """Minimum feasible-orientation size along the given arrangement."""
    minsize, cert, _ = solve_cutdp_detailed(g, arr)
    return minsize, cert


# ---------------------------------------------------------------------------
# arrangements

def find_arrangement(
    g: CapacitatedGraph, mode: str = "exact", *, exact_cap: int = DEFAULT_EXACT_ARRANGEMENT_CAP
) -> LinearArrangement:
    """Produce a linear arrangement.

    Exact mode minimizes the cutwidth by subset DP and is capped; heuristic
    mode runs breadth-first placement plus first-improvement reinsertion
    and carries no optimality guarantee.
    """
    if mode == "exact":
        if g.n > exact_cap:
            raise CapExceededError(f"exact arrangement capped at {exact_cap} vertices")
        return _exact_arrangement(g)
    if mode == "heuristic":
        return _heuristic_arrangement(g)
    raise ValueError(f"unknown arrangement mode '{mode}'")


def _exact_arrangement(g: CapacitatedGraph) -> LinearArrangement:
    n = g.n
    if n == 0:
        return LinearArrangement(())
    nbm = [0] * (n + 1)
    for u, v in g.edges:
        nbm[u] |= 1 << (v - 1)
        nbm[v] |= 1 << (u - 1)
    deg = g.degree
    full = (1 << n) - 1
    width = [0] * (1 << n)  # cut size after placing exactly the mask
    best = [0] * (1 << n)  # minimal max-cut over orderings of the mask
    choice = [0] * (1 << n)
    for mask in range(1, 1 << n):
        width_here = None
        bval = None
        pick = 0
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length()
            prevm = mask ^ low
            if width_here is None:
                width_here = width[prevm] + deg[v] - 2 * (nbm[v] & prevm).bit_count()
            cand = best[prevm]
            w = width_here
            cand = cand if cand >= w else w
            if bval is None or cand < bval:
                bval = cand
                pick = v
        width[mask] = width_here
        best[mask] = bval
        choice[mask] = pick
    order = [0] * n
    mask = full
    for i in range(n - 1, -1, -1):
        v = choice[mask]
        order[i] = v
        mask ^= 1 << (v - 1)
    return LinearArrangement(tuple(order))


def _heuristic_arrangement(g: CapacitatedGraph, *, passes: int = 3) -> LinearArrangement:
    n = g.n
    if n == 0:
        return LinearArrangement(())
    # breadth-first start from a minimum-degree vertex, components in id order
    seen = [False] * (n + 1)
    order: list[int] = []
    starts = sorted(range(1, n + 1), key=lambda v: (g.deg(v), v))
    for s in starts:
        if seen[s]:
            continue
        queue = [s]
        seen[s] = True
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in g.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    current = LinearArrangement(tuple(order))
    best_width = cutwidth_of(g, current)
    for _ in range(passes):
        improved = False
        for v in list(current.order):
            base = [w for w in current.order if w != v]
            for slot in range(n):
                cand = LinearArrangement(tuple(base[:slot] + [v] + base[slot:]))
                w = cutwidth_of(g, cand)
                if w < best_width:
                    current, best_width = cand, w
                    improved = True
                    break
            if improved:
                break
        if not improved:
            break
    return current

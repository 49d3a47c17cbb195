"""Optimal suppression when the total graph may have directed edges.

The general problem is NP-complete; this module holds the graph form of the
problem (properties N1/N2), the reduction from hitting set, the conversion of
a graph instance back to a table, and exhaustive solvers for desk-scale sizes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .detection import cells_to_edges, protection_test
from .graph import (
    DisjointSets,
    Edge,
    MixedGraph,
    Orientation,
    components_of,
    connected_components,
    strongly_connected_components,
    suppressed_graph,
    total_graph,
)
from .table import CellRef, Table
from .suppress import SuppressionPlan

Pair = tuple[int, int]  # (A index, B index)


@dataclass(frozen=True)
class GraphInstance:
    """A complete bipartite mixed graph, a suppressed subgraph and a budget."""

    a_labels: tuple[str, ...]
    b_labels: tuple[str, ...]
    orientation: Mapping[Pair, Orientation]
    suppressed: frozenset[Pair]
    budget: int = 0

    def __post_init__(self):
        expected = {(i, j) for i in range(len(self.a_labels)) for j in range(len(self.b_labels))}
        if set(self.orientation) != expected:
            raise ValueError("the total graph must have exactly one edge per (A, B) pair")
        if not self.suppressed <= expected:
            raise ValueError("suppressed edges must belong to the total graph")
        if self.budget < 0:
            raise ValueError("budget must be non-negative")

    @property
    def candidates(self) -> list[Pair]:
        """Edges of the total graph outside the suppressed subgraph, sorted."""
        return sorted(set(self.orientation) - self.suppressed)

    def graph(self, pairs: Iterable[Pair]) -> MixedGraph:
        edges = tuple(Edge(i, j, self.orientation[(i, j)]) for i, j in sorted(pairs))
        return MixedGraph(len(self.a_labels), len(self.b_labels), edges, self.a_labels, self.b_labels)

    def total_graph(self) -> MixedGraph:
        return self.graph(self.orientation)

    def suppressed_graph(self) -> MixedGraph:
        return self.graph(self.suppressed)

    @classmethod
    def from_table(cls, t: Table, budget: int = 0) -> "GraphInstance":
        tg = total_graph(t)
        return cls(
            t.row_labels,
            t.col_labels,
            {(e.row, e.col): e.orientation for e in tg.edges},
            frozenset((c.row, c.col) for c in t.suppressed_cells),
            budget,
        )

    def to_dict(self) -> dict:
        def line(p: Pair) -> str:
            return f"{self.a_labels[p[0]]} {self.orientation[p].value} {self.b_labels[p[1]]}"

        return {
            "rows": list(self.a_labels),
            "cols": list(self.b_labels),
            "total": [line(p) for p in sorted(self.orientation)],
            "suppressed": [line(p) for p in sorted(self.suppressed)],
            "budget": self.budget,
        }


def verify_n1_n2(inst: GraphInstance, p: Iterable[Pair]) -> bool:
    """N1: every component of ``E + P`` is strongly connected.
    N2: the vertices of each component of ``E`` are connected by ``P`` alone."""
    p = {tuple(x) for x in p}
    if p & inst.suppressed:
        raise ValueError("P must avoid the suppressed edges")
    if not p <= set(inst.orientation):
        raise ValueError("P must consist of total-graph edges")
    union = inst.graph(inst.suppressed | p)
    if connected_components(union).as_sets() != strongly_connected_components(union).as_sets():
        return False
    n_a = len(inst.a_labels)
    by_p = components_of(union.n_vertices, ((i, n_a + j) for i, j in p))
    for members in connected_components(inst.suppressed_graph()).groups:
        if len({by_p[v] for v in members}) > 1:
            return False
    return True


def refine(inst: GraphInstance, p: Iterable[Pair]) -> set[Pair]:
    """Edges of ``P`` lying inside a strongly connected component of ``E + P``."""
    p = {tuple(x) for x in p}
    union = inst.graph(inst.suppressed | p)
    sccs = strongly_connected_components(union)
    n_a = len(inst.a_labels)
    return {(i, j) for i, j in p if sccs[i] == sccs[n_a + j]}


class _BitChecker:
    """N1/N2 on bitmasks for the search loop.

    N1 holds iff both endpoints of every edge of ``E + P`` reach each other:
    then every direction-blind component is a single strong component.
    """

    def __init__(self, inst: GraphInstance):
        n_a = len(inst.a_labels)
        self.n = n_a + len(inst.b_labels)
        self.ends = {}
        self.arcs = {}
        for (i, j), o in inst.orientation.items():
            u, v = i, n_a + j
            self.ends[(i, j)] = (u, v)
            arcs = []
            if o is not Orientation.TOWARD_ROW:
                arcs.append((u, v))
            if o is not Orientation.TOWARD_COLUMN:
                arcs.append((v, u))
            self.arcs[(i, j)] = arcs
        self.base = sorted(inst.suppressed)
        self.groups = [m for m in connected_components(inst.suppressed_graph()).groups if len(m) > 1]
        self.in0, self.out0, self.touched0 = self._degrees(self.base)

    def _degrees(self, pairs):
        in_mask = out_mask = touched = 0
        for e in pairs:
            for u, v in self.arcs[e]:
                out_mask |= 1 << u
                in_mask |= 1 << v
            u, v = self.ends[e]
            touched |= 1 << u | 1 << v
        return in_mask, out_mask, touched

    def __call__(self, p: Sequence[Pair]) -> bool:
        in_mask, out_mask, touched = self._degrees(p)
        touched |= self.touched0
        # every vertex on an edge needs a way in and a way out
        if touched & ~((in_mask | self.in0) & (out_mask | self.out0)):
            return False
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in p:
            u, v = self.ends[e]
            parent[find(u)] = find(v)
        for members in self.groups:
            root = find(members[0])
            if any(find(v) != root for v in members[1:]):
                return False
        reach = [1 << v for v in range(self.n)]
        edges = list(self.base) + list(p)
        for e in edges:
            for u, v in self.arcs[e]:
                reach[u] |= 1 << v
        for k in range(self.n):
            bit, rk = 1 << k, reach[k]
            for i in range(self.n):
                if reach[i] & bit:
                    reach[i] |= rk
        for e in edges:
            u, v = self.ends[e]
            if not (reach[u] >> v & 1 and reach[v] >> u & 1):
                return False
        return True


def search_graph_instance(inst: GraphInstance, max_size: int | None = None) -> tuple[Pair, ...] | None:
    """Smallest ``P`` (lexicographically first among the smallest) with N1/N2.

    Sizes below the spanning lower bound are skipped: every component of
    ``E`` with ``c`` vertices needs at least ``c - 1`` edges of ``P``.
    """
    limit = inst.budget if max_size is None else max_size
    cands = inst.candidates
    check = _BitChecker(inst)
    lower = sum(len(m) - 1 for m in check.groups)
    for size in range(lower, min(limit, len(cands)) + 1):
        for p in combinations(cands, size):
            if check(p):
                return p
    return None


# -- table level --------------------------------------------------------------


def exact_min_suppression_mixed(
    t: Table, q: Iterable[tuple[int, int]], budget: int | None = None
) -> SuppressionPlan | None:
    """Minimum set of published cells protecting ``q``, searched by size.

    Any total graph is allowed.  Returns None when nothing within ``budget``
    (default: all published cells) works.
    """
    q = [CellRef(*c) for c in q]
    sg = suppressed_graph(t)
    q_edges = cells_to_edges(sg, q)
    tg = total_graph(t)
    orient = {e.cell: e.orientation for e in tg.edges}
    base = list(sg.edges)
    cands = list(t.published_cells)
    limit = len(cands) if budget is None else min(budget, len(cands))

    # each q edge needs its endpoints joined by non-q edges plus P
    ds = DisjointSets(sg.n_vertices)
    for k in range(len(base)):
        if k not in q_edges:
            ds.union(*sg.endpoints(k))
    lower = sum(ds.union(*sg.endpoints(k)) for k in sorted(q_edges))

    q_index = sorted(q_edges)
    for size in range(lower, limit + 1):
        for p in combinations(cands, size):
            g = MixedGraph(
                t.n_rows, t.n_cols, tuple(base) + tuple(Edge(c.row, c.col, orient[c]) for c in p),
                t.row_labels, t.col_labels,
            )
            report = protection_test(g, q_index)
            if report.protected:
                return SuppressionPlan(tuple(p), "exact", report, {"size": size})
    return None


# -- hitting set ----------------------------------------------------------------


@dataclass(frozen=True)
class HittingSetInstance:
    elements: tuple[str, ...]
    sets: tuple[frozenset[str], ...]
    budget: int = 0

    def __post_init__(self):
        if not self.sets:
            raise ValueError("the family of sets must be nonempty")
        universe = set(self.elements)
        if len(universe) != len(self.elements):
            raise ValueError("duplicate elements")
        for s in self.sets:
            if not s <= universe:
                raise ValueError(f"set {sorted(s)} has elements outside the ground set")
        if self.budget < 0:
            raise ValueError("budget must be non-negative")

    @classmethod
    def from_dict(cls, doc: Mapping) -> "HittingSetInstance":
        return cls(
            tuple(str(x) for x in doc["elements"]),
            tuple(frozenset(str(x) for x in s) for s in doc["sets"]),
            int(doc.get("budget", 0)),
        )

    @classmethod
    def parse(cls, text: str) -> "HittingSetInstance":
        return cls.from_dict(json.loads(text))


def solve_hitting_set(hs: HittingSetInstance) -> set[str] | None:
    """A minimum hitting set if one of size at most the budget exists."""
    for size in range(0, min(hs.budget, len(hs.elements)) + 1):
        for chosen in combinations(hs.elements, size):
            picked = set(chosen)
            if all(s & picked for s in hs.sets):
                return picked
    return None


def reduce_hitting_set(hs: HittingSetInstance) -> GraphInstance:
    """Graph instance that admits a valid ``P`` iff ``hs`` has a hitting set.

    Rows ``a0..aq`` stand for the elements (``a0`` for none), columns
    ``b0..br`` for the sets (``b0`` for none); the budget is ``h + r + 1``.
    """
    q, r = len(hs.elements), len(hs.sets)
    orient: dict[Pair, Orientation] = {(0, 0): Orientation.TOWARD_ROW}  # b0 -> a0
    for j in range(1, r + 1):
        orient[(0, j)] = Orientation.TOWARD_COLUMN  # a0 -> bj
    for i in range(1, q + 1):
        orient[(i, 0)] = Orientation.TOWARD_COLUMN  # ai -> b0
        for j in range(1, r + 1):
            member = hs.elements[i - 1] in hs.sets[j - 1]
            orient[(i, j)] = Orientation.TOWARD_ROW if member else Orientation.TOWARD_COLUMN
    return GraphInstance(
        tuple(f"a{i}" for i in range(q + 1)),
        tuple(f"b{j}" for j in range(r + 1)),
        orient,
        frozenset((0, j) for j in range(1, r + 1)),
        hs.budget + r + 1,
    )


def hitting_set_witness(hs: HittingSetInstance, chosen: Iterable[str]) -> set[Pair]:
    """The edge set built from a hitting set: ``bj -> a(ij)``, ``a(ij) -> b0``
    and ``b0 -> a0``, where ``s(ij)`` is a chosen element of set ``j``."""
    chosen = set(chosen)
    index = {s: i + 1 for i, s in enumerate(hs.elements)}
    p = {(0, 0)}
    for j, s in enumerate(hs.sets, start=1):
        pick = min(index[x] for x in s & chosen)
        p.add((pick, j))
        p.add((pick, 0))
    return p


def graph_to_table(inst: GraphInstance) -> Table:
    """Table whose total and suppressed graphs are those of ``inst``.

    Values are 1, 0 or 2 for undirected, A-to-B and B-to-A edges; every
    bound is ``[0, 2]``.
    """
    value = {Orientation.UNDIRECTED: 1, Orientation.TOWARD_COLUMN: 0, Orientation.TOWARD_ROW: 2}
    grid = [
        [value[inst.orientation[(i, j)]] for j in range(len(inst.b_labels))]
        for i in range(len(inst.a_labels))
    ]
    return Table.from_grid(grid, 0, 2, sorted(inst.suppressed), inst.a_labels, inst.b_labels)


def graph_instance_from_dict(doc: Mapping) -> GraphInstance:
    """Inverse of :meth:`GraphInstance.to_dict`."""
    rows = tuple(str(x) for x in doc["rows"])
    cols = tuple(str(x) for x in doc["cols"])
    ri = {x: i for i, x in enumerate(rows)}
    ci = {x: j for j, x in enumerate(cols)}
    symbols = {o.value: o for o in Orientation}

    def parse(line: str) -> tuple[Pair, Orientation]:
        row, sep, col = line.split()
        return (ri[row], ci[col]), symbols[sep]

    orient = dict(parse(x) for x in doc["total"])
    suppressed = set()
    for line in doc.get("suppressed", []):
        pair, o = parse(line)
        if orient.get(pair) is not o:
            raise ValueError(f"suppressed edge {line!r} disagrees with the total graph")
        suppressed.add(pair)
    return GraphInstance(rows, cols, orient, frozenset(suppressed), int(doc.get("budget", 0)))


def hitting_set_family(max_elements: int, max_sets: int) -> Iterable[tuple[tuple[str, ...], tuple[frozenset[str], ...]]]:
    """Every ground set ``s1..sq`` (q <= max_elements) with every nonempty
    family of at most ``max_sets`` distinct subsets."""
    for q in range(0, max_elements + 1):
        elements = tuple(f"s{i + 1}" for i in range(q))
        subsets = [frozenset(c) for k in range(q + 1) for c in combinations(elements, k)]
        for r in range(1, max_sets + 1):
            for family in combinations(subsets, r):
                yield elements, family


def min_sizes(elements: Sequence[str], family: Sequence[frozenset[str]], max_h: int) -> tuple[int | None, int | None]:
    """Minimum hitting-set size and minimum valid ``|P|`` of the reduced
    instance, each searched only up to the largest budget ``max_h``."""
    hs = HittingSetInstance(tuple(elements), tuple(family), max_h)
    hit = solve_hitting_set(hs)
    inst = reduce_hitting_set(hs)
    p = search_graph_instance(inst)
    return (None if hit is None else len(hit)), (None if p is None else len(p))

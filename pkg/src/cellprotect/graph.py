"""Mixed bipartite graphs of tables and the connectivity machinery shared by
the detection and suppression algorithms.

Vertex ids are stable: rows ``0 .. R-1`` first, then columns ``R .. R+C-1``.
Each edge corresponds to exactly one cell.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .table import Cell, CellRef, Table, TableError, default_col_labels, default_row_labels


class Orientation(enum.Enum):
    UNDIRECTED = "--"
    TOWARD_COLUMN = "->"
    TOWARD_ROW = "<-"


def orientation_of(cell: Cell) -> Orientation:
    """Orientation of a cell's edge from its value relative to its bounds."""
    if cell.value is None:
        raise TableError("orientation needs the cell value; build graphs from a complete table")
    if cell.value == cell.lower:
        return Orientation.TOWARD_COLUMN
    if cell.value == cell.upper:
        return Orientation.TOWARD_ROW
    return Orientation.UNDIRECTED


class Edge(NamedTuple):
    row: int
    col: int
    orientation: Orientation = Orientation.UNDIRECTED

    @property
    def cell(self) -> CellRef:
        return CellRef(self.row, self.col)


@dataclass(frozen=True)
class MixedGraph:
    """Bipartite mixed graph with row vertices on one side and columns on the other."""

    n_rows: int
    n_cols: int
    edges: tuple[Edge, ...]
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.row_labels:
            object.__setattr__(self, "row_labels", default_row_labels(self.n_rows))
        if not self.col_labels:
            object.__setattr__(self, "col_labels", default_col_labels(self.n_cols))
        seen = set()
        for e in self.edges:
            if not (0 <= e.row < self.n_rows and 0 <= e.col < self.n_cols):
                raise ValueError(f"edge {e} outside the vertex sets")
            if e.cell in seen:
                raise ValueError(f"two edges for cell {e.cell}")
            seen.add(e.cell)

    @property
    def n_vertices(self) -> int:
        return self.n_rows + self.n_cols

    def col_vertex(self, col: int) -> int:
        return self.n_rows + col

    def endpoints(self, index: int) -> tuple[int, int]:
        e = self.edges[index]
        return e.row, self.n_rows + e.col

    def is_row(self, v: int) -> bool:
        return v < self.n_rows

    @property
    def is_undirected(self) -> bool:
        return all(e.orientation is Orientation.UNDIRECTED for e in self.edges)

    @cached_property
    def edge_index(self) -> dict[CellRef, int]:
        return {e.cell: k for k, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Direction-blind adjacency: per vertex, ``(neighbour, edge index)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for k, e in enumerate(self.edges):
            u, v = e.row, self.n_rows + e.col
            adj[u].append((v, k))
            adj[v].append((u, k))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def arcs(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Traversable out-arcs per vertex; undirected edges appear both ways."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for k, e in enumerate(self.edges):
            u, v = e.row, self.n_rows + e.col
            if e.orientation is not Orientation.TOWARD_ROW:
                out[u].append((v, k))
            if e.orientation is not Orientation.TOWARD_COLUMN:
                out[v].append((u, k))
        return tuple(tuple(a) for a in out)

    def vertex_label(self, v: int) -> str:
        if v < self.n_rows:
            return f"R{self.row_labels[v]}"
        return f"C{self.col_labels[v - self.n_rows]}"

    def with_edges(self, extra: Iterable[Edge]) -> "MixedGraph":
        return MixedGraph(self.n_rows, self.n_cols, self.edges + tuple(extra), self.row_labels, self.col_labels)


def suppressed_graph(t: Table) -> MixedGraph:
    """One vertex per row and column, one edge per suppressed cell."""
    edges = tuple(Edge(r.row, r.col, orientation_of(t[r])) for r in t.suppressed_cells)
    return MixedGraph(t.n_rows, t.n_cols, edges, t.row_labels, t.col_labels)


def total_graph(t: Table) -> MixedGraph:
    """The complete bipartite mixed graph with one edge per cell."""
    edges = tuple(Edge(r.row, r.col, orientation_of(t[r])) for r in t.refs())
    return MixedGraph(t.n_rows, t.n_cols, edges, t.row_labels, t.col_labels)


def dump_graph(g: MixedGraph) -> str:
    """One ``row <sep> col`` line per edge; ``--``, ``->`` or ``<-``."""
    return "\n".join(
        f"{g.row_labels[e.row]} {e.orientation.value} {g.col_labels[e.col]}" for e in g.edges
    )


# -- partitions -------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """Group id per vertex; ids are numbered by each group's smallest vertex."""

    labels: tuple[int, ...]

    @classmethod
    def from_labels(cls, raw: Sequence[int]) -> "Partition":
        renumber: dict[int, int] = {}
        return cls(tuple(renumber.setdefault(x, len(renumber)) for x in raw))

    def __getitem__(self, v: int) -> int:
        return self.labels[v]

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_groups(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    @cached_property
    def groups(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_groups)]
        for v, g in enumerate(self.labels):
            out[g].append(v)
        return tuple(tuple(g) for g in out)

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(g) for g in self.groups}


class DisjointSets:
    """Union-find over ``0 .. n-1`` with union by rank and path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the classes of ``x`` and ``y``; False if already merged."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True

    def same(self, x: int, y: int) -> bool:
        return self.find(x) == self.find(y)

    def partition(self) -> Partition:
        return Partition.from_labels([self.find(v) for v in range(len(self.parent))])


def components_of(n: int, pairs: Iterable[tuple[int, int]]) -> Partition:
    """Connected components of the undirected graph on ``n`` vertices."""
    ds = DisjointSets(n)
    for u, v in pairs:
        ds.union(u, v)
    return ds.partition()


def connected_components(g: MixedGraph, skip: Iterable[int] = ()) -> Partition:
    """Direction-blind components, optionally ignoring the edges in ``skip``."""
    skipped = set(skip)
    return components_of(
        g.n_vertices, (g.endpoints(k) for k in range(len(g.edges)) if k not in skipped)
    )


def strongly_connected_components(g: MixedGraph) -> Partition:
    """Mutual traversable reachability, via an iterative Tarjan pass."""
    n = g.n_vertices
    arcs = g.arcs
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp = [-1] * n
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            out = arcs[v]
            if i < len(out):
                work[-1] = (v, i + 1)
                w = out[i][0]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return Partition.from_labels(comp)


def reachable(g: MixedGraph, source: int, skip_edge: int | None = None) -> list[bool]:
    """Vertices reachable from ``source`` along traversable arcs."""
    seen = [False] * g.n_vertices
    seen[source] = True
    queue = deque([source])
    arcs = g.arcs
    while queue:
        v = queue.popleft()
        for w, k in arcs[v]:
            if k != skip_edge and not seen[w]:
                seen[w] = True
                queue.append(w)
    return seen


# -- contraction ------------------------------------------------------------


@dataclass(frozen=True)
class ContractedGraph:
    """Super-vertices over a partition of the original vertices.

    ``members[s]`` are the original vertices of super-vertex ``s``, split by
    side in ``rows[s]`` (row ids) and ``cols[s]`` (column ids).
    """

    members: tuple[tuple[int, ...], ...]
    rows: tuple[tuple[int, ...], ...]
    cols: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    of: tuple[int, ...]


def contract(g: MixedGraph, groups: Iterable[Iterable[int]] = ()) -> ContractedGraph:
    """Contract each group into one super-vertex; other vertices stay singletons.

    Parallel edges collapse and edges inside a super-vertex disappear.
    """
    ds = DisjointSets(g.n_vertices)
    seen: set[int] = set()
    for group in groups:
        members = list(group)
        for v in members:
            if v in seen:
                raise ValueError(f"vertex {v} in two groups")
            seen.add(v)
        for v in members[1:]:
            ds.union(members[0], v)
    part = ds.partition()
    members = part.groups
    rows = tuple(tuple(v for v in m if g.is_row(v)) for m in members)
    cols = tuple(tuple(v - g.n_rows for v in m if not g.is_row(v)) for m in members)
    edges = sorted(
        {
            (min(part[u], part[v]), max(part[u], part[v]))
            for u, v in (g.endpoints(k) for k in range(len(g.edges)))
            if part[u] != part[v]
        }
    )
    return ContractedGraph(members, rows, cols, tuple(edges), part.labels)

"""Minimum additional suppression for tables whose total graph is undirected.

The pipeline contracts the suppressed graph into a semi-tripartite instance
(super-vertices of kind ``A``, ``B`` or ``AB`` grouped by component), solves
that instance, and lifts the solution back to published cells:

* free edges first: a maximal forest of the non-protected suppressed edges
  inside every component;
* then edges of the component's bipartite complement, found by a sweep over
  unreached vertices so the complement is never materialised;
* finally a forest between super-vertices of different components.

Two solvers exist.  ``"paper"`` follows the original three-case construction
literally, including its infeasibility verdicts.  ``"exact"`` packs the
components into as many mediator-free trees as possible (good+bad pairs,
good+good pairs, bad triples) and otherwise uses the fewest singleton
mediators; it is optimal and is the default.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .detection import ProtectionReport, cells_to_edges, protection_test, test_total_protection
from .graph import DisjointSets, Edge, MixedGraph, Orientation, connected_components, suppressed_graph, total_graph
from .table import CellRef, Table

A, B, AB = "A", "B", "AB"
PAPER, EXACT = "paper", "exact"
MODES = (PAPER, EXACT)


class InfeasibleError(Exception):
    """No set of published cells achieves total protection.

    ``group`` is the index of a component that cannot be connected.
    """

    def __init__(self, message: str, group: int | None = None):
        super().__init__(message)
        self.group = group


class NotUndirectedError(ValueError):
    """The total graph has directed edges; use :mod:`cellprotect.npc`."""


@dataclass(frozen=True)
class SuperVertex:
    kind: str
    group: int
    rows: tuple[int, ...] = ()
    cols: tuple[int, ...] = ()


@dataclass(frozen=True)
class SemiTripartiteInstance:
    """Contracted instance plus what is needed to lift a solution back.

    ``groups[i]`` lists the super-vertex ids of contracted component ``i``;
    ``forest_cells`` holds the free forest and ``complement_cells`` the
    complement edges that were added to it inside the components.
    """

    vertices: tuple[SuperVertex, ...]
    groups: tuple[tuple[int, ...], ...]
    forest_cells: tuple[CellRef, ...] = ()
    complement_cells: tuple[CellRef, ...] = ()
    liftable: bool = False

    def __post_init__(self):
        # a component with an edge has a row member and a column member
        for gi, grp in enumerate(self.groups):
            sides = {self.vertices[v].kind for v in grp}
            if len(grp) > 1 and AB not in sides and sides != {A, B}:
                raise ValueError(f"component {gi} has members on one side only")

    @classmethod
    def from_kinds(cls, groups: Sequence[Sequence[str]]) -> "SemiTripartiteInstance":
        """Synthetic instance, e.g. ``[["A", "B"], ["AB"]]`` (not liftable)."""
        vertices, out = [], []
        for gi, kinds in enumerate(groups):
            ids = []
            for kind in kinds:
                if kind not in (A, B, AB):
                    raise ValueError(f"unknown kind {kind!r}")
                ids.append(len(vertices))
                vertices.append(SuperVertex(kind, gi))
            out.append(tuple(ids))
        return cls(tuple(vertices), tuple(out))

    def kind(self, v: int) -> str:
        return self.vertices[v].kind

    @property
    def good(self) -> list[int]:
        return [i for i, g in enumerate(self.groups) if len(g) >= 2 and any(self.kind(v) == AB for v in g)]

    @property
    def bad(self) -> list[int]:
        return [i for i, g in enumerate(self.groups) if len(g) >= 2 and all(self.kind(v) != AB for v in g)]

    @property
    def singletons(self) -> list[int]:
        """Super-vertices forming a component on their own (possible mediators)."""
        return [g[0] for g in self.groups if len(g) == 1]

    @property
    def w_g(self) -> int:
        return len(self.good)

    @property
    def w_b(self) -> int:
        return len(self.bad)

    @property
    def d(self) -> int:
        return sum(len(self.groups[i]) for i in self.good + self.bad)

    def of_kind(self, kind: str) -> list[int]:
        return [v for v, sv in enumerate(self.vertices) if sv.kind == kind]

    def stats(self) -> dict:
        return {"w_g": self.w_g, "w_b": self.w_b, "d": self.d}


@dataclass(frozen=True)
class SemiTripartiteSolution:
    edges: tuple[tuple[int, int], ...]
    mode: str
    stats: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class SuppressionPlan:
    cells: tuple[CellRef, ...]
    mode: str
    verification: ProtectionReport | None = None
    stats: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.cells)

    @property
    def verified(self) -> bool:
        return self.verification is not None and self.verification.protected

    def to_dict(self, labelled) -> dict:
        """JSON form; ``labelled`` is anything with row and column labels."""
        return {
            "mode": self.mode,
            "cells": [{"row": labelled.row_labels[c.row], "col": labelled.col_labels[c.col]} for c in self.cells],
            "size": self.size,
            "verified": self.verified,
            "stats": dict(self.stats),
        }


# -- reduction --------------------------------------------------------------


def reduce_graph(g: MixedGraph, q: Iterable[int]) -> SemiTripartiteInstance:
    """Contract the undirected suppressed graph ``g`` for protected edges ``q``.

    Runs in ``O((m + n) alpha)``: one union-find pass for the free forest and
    one complement sweep in which every scanned vertex is either reached (and
    dropped from the unreached pool) or blocked by a protected edge.
    """
    if not g.is_undirected:
        raise NotUndirectedError("the suppressed graph has directed edges")
    q_set = set(q)
    n = g.n_vertices
    comp = connected_components(g)

    ds = DisjointSets(n)
    forest = []
    blocked: dict[int, set[int]] = {}
    for k in range(len(g.edges)):
        u, v = g.endpoints(k)
        if k in q_set:
            blocked.setdefault(u, set()).add(v)
            blocked.setdefault(v, set()).add(u)
        elif ds.union(u, v):
            forest.append(g.edges[k].cell)

    # sweep the complement of q inside each component; any reached pair that
    # joins two free trees is a complement edge (free edges never do)
    complement = []
    empty: set[int] = set()
    for members in comp.groups:
        if len(members) < 2:
            continue
        pools = {
            True: [v for v in reversed(members) if g.is_row(v)],
            False: [v for v in reversed(members) if not g.is_row(v)],
        }
        while pools[True] or pools[False]:
            seed = pools[True].pop() if pools[True] else pools[False].pop()
            queue = deque([seed])
            while queue:
                x = queue.popleft()
                side = not g.is_row(x)
                stop = blocked.get(x, empty)
                keep, reached = [], []
                for y in pools[side]:
                    (keep if y in stop else reached).append(y)
                pools[side] = keep
                # pool is reverse-sorted; visit in increasing id order
                for y in reversed(reached):
                    queue.append(y)
                    if ds.union(x, y):
                        row, col = (x, y) if g.is_row(x) else (y, x)
                        complement.append(CellRef(row, col - g.n_rows))

    trees = ds.partition()
    vertices = []
    groups: list[list[int]] = [[] for _ in range(comp.n_groups)]
    for s, members in enumerate(trees.groups):
        rows = tuple(v for v in members if g.is_row(v))
        cols = tuple(v - g.n_rows for v in members if not g.is_row(v))
        kind = AB if rows and cols else (A if rows else B)
        gi = comp[members[0]]
        vertices.append(SuperVertex(kind, gi, rows, cols))
        groups[gi].append(s)
    return SemiTripartiteInstance(
        tuple(vertices),
        tuple(tuple(x) for x in groups),
        tuple(sorted(forest)),
        tuple(sorted(complement)),
        liftable=True,
    )


def _require_undirected_total(t: Table) -> None:
    if not total_graph(t).is_undirected:
        raise NotUndirectedError("the total graph of the table has directed edges")


def reduce_to_semitripartite(t: Table, q: Iterable[tuple[int, int]]) -> SemiTripartiteInstance:
    _require_undirected_total(t)
    g = suppressed_graph(t)
    return reduce_graph(g, cells_to_edges(g, q))


# -- tree constructions -----------------------------------------------------


def _first(inst, vs: Iterable[int], *kinds: str) -> int | None:
    for v in vs:
        if inst.kind(v) in kinds:
            return v
    return None


def _anchor(inst, kind: str, pool: Sequence[int]) -> int:
    """A vertex of ``pool`` that a vertex of ``kind`` may be joined to."""
    found = _first(inst, pool, AB)
    if found is None:
        if kind == A:
            found = _first(inst, pool, B)
        elif kind == B:
            found = _first(inst, pool, A)
        else:
            found = _first(inst, pool, B, A)
    if found is None:
        raise AssertionError("no compatible anchor")  # guarded by callers
    return found


def _good_tree(inst, good: Sequence[int], others: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    # hub u of the good component takes every other vertex; the rest of the
    # good component hangs off one compatible vertex of the others
    u = _first(inst, good, AB)
    pool = [v for grp in others for v in grp]
    edges = [(u, y) for y in pool]
    edges += [(x, _anchor(inst, inst.kind(x), pool)) for x in good if x != u]
    return edges


def _bad_tree(inst, bads: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Spanning tree over three or more bad components, no mediators."""
    g1, g2, g3 = bads[0], bads[1], bads[2]
    b_star = _first(inst, g1, B)
    a_star = _first(inst, g2, A)
    b3, a3 = _first(inst, g3, B), _first(inst, g3, A)
    edges = []
    for gi, grp in enumerate(bads):
        for v in grp:
            kind = inst.kind(v)
            if kind == A and gi != 0:
                edges.append((b_star, v))
            elif kind == B and v != b_star and gi != 1:
                edges.append((a_star, v))
            elif kind == A:
                edges.append((v, b3))
            elif kind == B and gi == 1:
                edges.append((v, a3))
    return edges


def _two_bad_tree(inst, b1: Sequence[int], b2: Sequence[int], m: int) -> list[tuple[int, int]]:
    kind = inst.kind(m)
    if kind == AB:
        return [(m, v) for v in list(b1) + list(b2)]
    own = kind  # vertices of the mediator's kind need the other bad component
    edges = [(m, v) for v in list(b1) + list(b2) if inst.kind(v) != own]
    other = B if own == A else A
    for here, there in ((b1, b2), (b2, b1)):
        target = _first(inst, there, other)
        edges += [(v, target) for v in here if inst.kind(v) == own]
    return edges


def _hub_tree(inst, grp: Sequence[int], hubs: Sequence[int]) -> list[tuple[int, int]]:
    """Join one component through external singleton hubs."""
    if len(hubs) == 1:
        return [(hubs[0], v) for v in grp]
    ha, hb = (hubs[0], hubs[1]) if inst.kind(hubs[0]) == A else (hubs[1], hubs[0])
    edges = [(ha, hb)]
    edges += [(hb, v) for v in grp if inst.kind(v) == A]
    edges += [(ha, v) for v in grp if inst.kind(v) != A]
    return edges


def _attach(inst, grp: Sequence[int], tree_vertices: Sequence[int]) -> list[tuple[int, int]]:
    return [(v, _anchor(inst, inst.kind(v), tree_vertices)) for v in grp]


def _hubs_for(inst, gi: int, allow_ab: bool = True) -> list[int] | None:
    """Fewest external singletons that connect component ``gi`` on its own."""
    grp = inst.groups[gi]
    singles = [v for v in inst.singletons if inst.vertices[v].group != gi]
    ext = {k: [v for v in singles if inst.kind(v) == k] for k in (A, B, AB)}
    if allow_ab and ext[AB]:
        return [ext[AB][0]]
    has_a = any(inst.kind(v) == A for v in grp)
    has_b = any(inst.kind(v) == B for v in grp)
    if has_a and has_b:
        return [ext[A][0], ext[B][0]] if ext[A] and ext[B] else None
    if has_a:
        return [ext[B][0]] if ext[B] else None
    if has_b:
        return [ext[A][0]] if ext[A] else None
    if ext[A] or ext[B]:
        return [(ext[A] or ext[B])[0]]
    return None


# -- solvers ------------------------------------------------------------------


def _paper(inst: SemiTripartiteInstance) -> list[tuple[int, int]]:
    good, bad, groups = inst.good, inst.bad, inst.groups
    bad_vertices = [v for i in bad for v in groups[i]]
    if not good:
        if not bad:
            return []
        hubs = inst.of_kind(AB)
        if not hubs:
            raise InfeasibleError("no good component and no AB vertex", bad[0])
        return [(hubs[0], v) for v in bad_vertices]

    if len(good) == 1:
        j = groups[good[0]]
        if bad:
            u = _first(inst, j, AB)
            k = groups[bad[0]]
            v1, v2 = _first(inst, k, A), _first(inst, k, B)
            edges = [(v2, x) for x in j if x != u and inst.kind(x) in (A, AB)]
            edges += [(v1, x) for x in j if inst.kind(x) == B]
            edges += [(u, x) for x in bad_vertices]
            return edges
        outside = [v for v in inst.of_kind(AB) if inst.vertices[v].group != good[0]]
        if outside:
            return [(outside[0], x) for x in j]
        hubs = _hubs_for(inst, good[0], allow_ab=False)
        if hubs is None:
            raise InfeasibleError("the only good component has no admissible external hub", good[0])
        return _hub_tree(inst, j, hubs)

    edges = []
    pairs = min(len(good), len(bad))
    for gi, bi in zip(good, bad):
        edges += _good_tree(inst, groups[gi], [groups[bi]])
    u0 = _first(inst, groups[good[0]], AB)
    for bi in bad[pairs:]:
        edges += [(v, u0) for v in groups[bi]]
    rest = good[pairs:]
    for a, b in zip(rest[0::2], rest[1::2]):
        edges += _good_tree(inst, groups[a], [groups[b]])
    if len(rest) % 2:
        last = rest[-1]
        other = good[0] if last != good[0] else good[1]
        hub = _first(inst, groups[other], AB)
        edges += [(v, hub) for v in groups[last]]
    return edges


def _exact(inst: SemiTripartiteInstance) -> list[tuple[int, int]]:
    good, bad, groups = inst.good, inst.bad, inst.groups
    if not good and not bad:
        return []
    trees: list[list[int]] = []  # vertex lists of mediator-free trees
    edges: list[tuple[int, int]] = []

    if good and len(good) + len(bad) >= 2:
        pairs = min(len(good), len(bad))
        for gi, bi in zip(good, bad):
            edges += _good_tree(inst, groups[gi], [groups[bi]])
            trees.append(list(groups[gi]) + list(groups[bi]))
        rest_good, rest_bad = good[pairs:], bad[pairs:]
        for a, b in zip(rest_good[0::2], rest_good[1::2]):
            edges += _good_tree(inst, groups[a], [groups[b]])
            trees.append(list(groups[a]) + list(groups[b]))
        leftover = rest_good[len(rest_good) - len(rest_good) % 2 :]
        leftover += _pack_triples(inst, rest_bad, edges, trees)
    elif not good and len(bad) >= 3:
        leftover = _pack_triples(inst, bad, edges, trees)
    elif not good and len(bad) == 2:
        if not inst.singletons:
            raise InfeasibleError("two bad components and no mediator", bad[0])
        return _two_bad_tree(inst, groups[bad[0]], groups[bad[1]], inst.singletons[0])
    else:  # a single good or a single bad component
        gi = (good or bad)[0]
        hubs = _hubs_for(inst, gi)
        if hubs is None:
            raise InfeasibleError("component has no admissible external hub", gi)
        return _hub_tree(inst, groups[gi], hubs)

    for gi in leftover:
        edges += _attach(inst, groups[gi], trees[0])
    return edges


def _pack_triples(inst, bads: Sequence[int], edges: list, trees: list) -> list[int]:
    groups = inst.groups
    full = len(bads) - len(bads) % 3
    for i in range(0, full, 3):
        chunk = [groups[x] for x in bads[i : i + 3]]
        edges += _bad_tree(inst, chunk)
        trees.append([v for grp in chunk for v in grp])
    return list(bads[full:])


def solve_semitripartite(inst: SemiTripartiteInstance, mode: str = EXACT) -> SemiTripartiteSolution:
    """Fewest semi-tripartite edges connecting every contracted component.

    Raises :class:`InfeasibleError` when no such edge set exists (``exact``) or
    when the literal construction declares so (``paper``).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    raw = _paper(inst) if mode == PAPER else _exact(inst)
    edges = tuple((min(x, y), max(x, y)) for x, y in raw)
    problems = check_semitripartite(inst, edges)
    if problems:
        raise AssertionError(f"{mode} construction produced an invalid forest: {problems}")
    return SemiTripartiteSolution(edges, mode, {**inst.stats(), "size": len(edges)})


def check_semitripartite(inst: SemiTripartiteInstance, edges: Iterable[tuple[int, int]]) -> list[str]:
    """Everything wrong with ``edges`` as a solution for ``inst``."""
    problems = []
    edges = list(edges)
    n = len(inst.vertices)
    if len({(min(e), max(e)) for e in edges}) != len(edges):
        problems.append("repeated edge")
    ds = DisjointSets(n)
    for x, y in edges:
        kx, ky = inst.kind(x), inst.kind(y)
        if kx == ky and kx != AB:
            problems.append(f"{kx}-{ky} edge {x}-{y}")
        if inst.vertices[x].group == inst.vertices[y].group:
            problems.append(f"edge {x}-{y} inside one component")
        if not ds.union(x, y):
            problems.append(f"edge {x}-{y} closes a cycle")
    for gi, grp in enumerate(inst.groups):
        if len({ds.find(v) for v in grp}) > 1:
            problems.append(f"component {gi} not connected")
    return problems


# -- lifting and the table-level entry points -------------------------------


def lift_solution(inst: SemiTripartiteInstance, sol: SemiTripartiteSolution) -> tuple[CellRef, ...]:
    """Published cells realising ``sol``, plus the complement forest edges."""
    if not inst.liftable:
        raise ValueError("instance carries no lift context")
    cells = set(inst.complement_cells)
    for x, y in sol.edges:
        sx, sy = inst.vertices[x], inst.vertices[y]
        if sx.group == sy.group:
            raise AssertionError("solution edge inside a component")
        if sx.rows and sy.cols:
            cell = CellRef(sx.rows[0], sy.cols[0])
        else:
            cell = CellRef(sy.rows[0], sx.cols[0])
        cells.add(cell)
    return tuple(sorted(cells))


def plan_graph(g: MixedGraph, q: Iterable[int], mode: str = EXACT, verify: bool = True) -> SuppressionPlan:
    """Graph-level planner for an undirected suppressed graph whose total
    graph is undirected too (every published pair is an undirected edge)."""
    q = set(q)
    inst = reduce_graph(g, q)
    sol = solve_semitripartite(inst, mode)
    cells = lift_solution(inst, sol)
    report = None
    if verify:
        augmented = g.with_edges(Edge(c.row, c.col, Orientation.UNDIRECTED) for c in cells)
        report = protection_test(augmented, q)
    stats = {**sol.stats, "complement": len(inst.complement_cells)}
    return SuppressionPlan(cells, mode, report, stats)


def optimal_protection_set(t: Table, q: Iterable[tuple[int, int]], mode: str = EXACT) -> SuppressionPlan:
    """Fewest published cells to suppress so that ``q`` becomes totally protected.

    Requires an undirected total graph.  Raises :class:`InfeasibleError` when
    no plan exists (or, in ``paper`` mode, when the construction says so).
    """
    _require_undirected_total(t)
    q = list(q)
    g = suppressed_graph(t)
    plan = plan_graph(g, cells_to_edges(g, q), mode, verify=False)
    report = test_total_protection(t.with_suppressed(plan.cells), q)
    return SuppressionPlan(plan.cells, mode, report, plan.stats)


def divergence_report(instances: Iterable[tuple[Table, Iterable[tuple[int, int]]]]) -> list[dict]:
    """Instances on which the two modes disagree on the plan size.

    An infeasible verdict is reported as ``None``.
    """
    out = []
    for t, q in instances:
        q = frozenset(CellRef(*c) for c in q)
        sizes = {}
        for mode in MODES:
            try:
                sizes[mode] = optimal_protection_set(t, q, mode).size
            except InfeasibleError:
                sizes[mode] = None
        if sizes[PAPER] != sizes[EXACT]:
            out.append({"table": t, "q": q, **sizes})
    return out

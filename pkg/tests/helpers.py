"""Independent checks used across test modules."""

import networkx as nx

from cellprotect.graph import MixedGraph, Orientation


def cycle_edge_indices(g: MixedGraph) -> set[int]:
    """Edges lying on some edge-simple traversable cycle, by enumerating the
    simple cycles of the arc graph with every arc subdivided by its own node
    and discarding cycles that walk an undirected edge both ways."""
    dg = nx.DiGraph()
    for k, e in enumerate(g.edges):
        u, v = ("v", e.row), ("v", g.n_rows + e.col)
        if e.orientation is not Orientation.TOWARD_ROW:
            dg.add_edges_from([(u, ("e", k, 1)), (("e", k, 1), v)])
        if e.orientation is not Orientation.TOWARD_COLUMN:
            dg.add_edges_from([(v, ("e", k, -1)), (("e", k, -1), u)])
    on_cycle = set()
    for cycle in nx.simple_cycles(dg):
        used = [node[1] for node in cycle if node[0] == "e"]
        if len(used) == len(set(used)):
            on_cycle.update(used)
    return on_cycle


def minimal_cut(g: MixedGraph, members, cut_edges) -> bool:
    """``cut_edges`` disconnects ``members`` and no single edge of it is spare."""

    def disconnects(removed):
        inside = set(members)
        adj = {v: [] for v in inside}
        for k, e in enumerate(g.edges):
            u, v = g.endpoints(k)
            if k not in removed and u in inside and v in inside:
                adj[u].append(v)
                adj[v].append(u)
        start = min(inside)
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen != inside

    cut = set(cut_edges)
    return disconnects(cut) and all(not disconnects(cut - {k}) for k in cut)

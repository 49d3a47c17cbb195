import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from cellprotect.graph import (
    DisjointSets,
    Edge,
    MixedGraph,
    Orientation,
    components_of,
    connected_components,
    contract,
    dump_graph,
    strongly_connected_components,
    suppressed_graph,
    total_graph,
)
from cellprotect.table import Table, TableError

U, TC, TR = Orientation.UNDIRECTED, Orientation.TOWARD_COLUMN, Orientation.TOWARD_ROW


def labelled_arcs(g):
    out = set()
    for e in g.edges:
        r, c = f"R{g.row_labels[e.row]}", f"C{g.col_labels[e.col]}"
        out.add((r, e.orientation.value, c))
    return out


def test_fig3_orientations(fig3):
    g = suppressed_graph(fig3)
    assert labelled_arcs(g) == {
        ("R1", "->", "Ca"),
        ("R2", "<-", "Ca"),
        ("R1", "<-", "Cb"),
        ("R2", "<-", "Cb"),
        ("R2", "->", "Cc"),
        ("R3", "->", "Cb"),
        ("R3", "--", "Cc"),
    }


def test_fig2_directed_edges(fig1):
    g = suppressed_graph(fig1)
    directed = {(e.row, e.col, e.orientation) for e in g.edges if e.orientation is not U}
    assert directed == {(1, 2, TR), (2, 2, TR)}


def test_no_suppressed_cells():
    g = suppressed_graph(Table.from_grid([[1, 2], [3, 4]], 0, 9))
    assert g.n_vertices == 4 and g.edges == ()
    assert connected_components(g).n_groups == 4


def test_total_graph_examples(fig3, tk22, fig1):
    g = total_graph(fig3)
    assert len(g.edges) == 9
    orient = {e.cell: e.orientation for e in g.edges}
    assert orient[(0, 2)] is U and orient[(2, 0)] is U
    assert total_graph(tk22).is_undirected
    assert all(e.orientation is U for e in total_graph(fig1).edges if not fig1[e.cell].suppressed)


def test_published_tables_have_no_graph(fig2):
    with pytest.raises(TableError):
        suppressed_graph(fig2)


def test_suppressed_graph_is_subgraph(fig1):
    sub = set(suppressed_graph(fig1).edges)
    assert sub <= set(total_graph(fig1).edges)


def test_fig3_components(fig3):
    g = suppressed_graph(fig3)
    assert [len(c) for c in connected_components(g).groups] == [6]
    assert [len(c) for c in strongly_connected_components(g).groups] == [6]


def test_fig2_components(fig1):
    g = suppressed_graph(fig1)
    assert connected_components(g).n_groups == 1
    sccs = strongly_connected_components(g)
    cc, r6, ci = g.col_vertex(2), 5, g.col_vertex(8)
    assert sccs.groups[sccs[cc]] == (cc,)
    # R6 hangs on the undirected edge (6, i), usable both ways
    assert sccs[r6] == sccs[ci]


def test_dump_format(fig3):
    lines = dump_graph(suppressed_graph(fig3)).splitlines()
    assert lines[0] == "1 -> a" and "2 <- a" in lines and "3 -- c" in lines


def test_bad_edges_rejected():
    with pytest.raises(ValueError):
        MixedGraph(1, 1, (Edge(0, 1),))
    with pytest.raises(ValueError):
        MixedGraph(2, 2, (Edge(0, 0), Edge(0, 0, TR)))


def test_disjoint_sets():
    ds = DisjointSets(5)
    assert ds.union(0, 1) and ds.union(3, 4)
    assert not ds.union(1, 0)
    assert ds.find(ds.find(1)) == ds.find(1)
    assert ds.partition().labels == (0, 0, 1, 2, 2)


def test_contract():
    g = MixedGraph(2, 2, (Edge(0, 0), Edge(0, 1), Edge(1, 1)))
    same = contract(g)
    assert same.members == ((0,), (1,), (2,), (3,))
    assert same.edges == ((0, 2), (0, 3), (1, 3))
    c = contract(g, [[0, 2]])
    assert c.rows[0] == (0,) and c.cols[0] == (0,)
    assert c.edges == ((0, 2), (1, 2))
    with pytest.raises(ValueError):
        contract(g, [[0, 2], [2, 3]])


edge_lists = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.tuples(
            st.just(r),
            st.just(c),
            st.dictionaries(
                st.tuples(st.integers(0, r - 1), st.integers(0, c - 1)),
                st.sampled_from([U, TC, TR]),
                max_size=r * c,
            ),
        )
    )
)


def build(spec):
    r, c, edges = spec
    return MixedGraph(r, c, tuple(Edge(i, j, o) for (i, j), o in sorted(edges.items())))


@settings(max_examples=200, deadline=None)
@given(edge_lists)
def test_scc_matches_networkx(spec):
    g = build(spec)
    dg = nx.DiGraph()
    dg.add_nodes_from(range(g.n_vertices))
    for v, out in enumerate(g.arcs):
        dg.add_edges_from((v, w) for w, _ in out)
    expected = {frozenset(s) for s in nx.strongly_connected_components(dg)}
    assert strongly_connected_components(g).as_sets() == expected


@settings(max_examples=200, deadline=None)
@given(edge_lists)
def test_scc_refines_components(spec):
    g = build(spec)
    cc, scc = connected_components(g), strongly_connected_components(g)
    for group in scc.groups:
        assert len({cc[v] for v in group}) == 1
    if g.is_undirected:
        assert cc == scc


@settings(max_examples=100, deadline=None)
@given(edge_lists, st.data())
def test_contract_preserves_connectivity(spec, data):
    g = build(spec)
    cc = connected_components(g)
    # contract a random set of whole components
    chosen = data.draw(st.lists(st.sampled_from(range(cc.n_groups)), unique=True))
    c = contract(g, [cc.groups[i] for i in chosen])
    part = components_of(len(c.members), c.edges)
    for u in range(g.n_vertices):
        for v in range(g.n_vertices):
            assert (cc[u] == cc[v]) == (part[c.of[u]] == part[c.of[v]])

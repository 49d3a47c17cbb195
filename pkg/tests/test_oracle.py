import pytest
from hypothesis import given, settings, strategies as st

from cellprotect.detection import test_total_protection as check_protection
from cellprotect.graph import Orientation, total_graph
from cellprotect.oracle import (
    MIXED,
    GeneratorConfig,
    OracleLimitError,
    brute_force_min_protection,
    exhaustive_small_instances,
    generate_sparse_graph,
    generate_table,
)
from cellprotect.table import validate


def test_tk22_minimum(tk22):
    plan = brute_force_min_protection(tk22, tk22.suppressed_cells)
    assert plan.size == 5 and plan.verified


def test_fig3_has_no_plan(fig3):
    assert brute_force_min_protection(fig3, fig3.suppressed_cells) is None


def test_protected_q_needs_nothing(fig3):
    assert brute_force_min_protection(fig3, [(0, 0)]).cells == ()


def test_limit(fig1):
    with pytest.raises(OracleLimitError):
        brute_force_min_protection(fig1, [])


def test_generator_is_deterministic():
    cfg = GeneratorConfig(3, 3, 0.5, (0, 9), 7)
    assert generate_table(cfg) == generate_table(cfg)
    assert total_graph(generate_table(cfg)).is_undirected


def test_generator_values_inside_bounds():
    for seed in range(50):
        t = generate_table(GeneratorConfig(4, 4, 0.5, (0, 3), seed, halves=seed % 2 == 0))
        assert all(t[r].lower < t[r].value < t[r].upper for r in t.refs())
        assert validate(t).ok


def test_mixed_mode_hits_bounds():
    t = generate_table(GeneratorConfig(4, 4, 0.5, (0, 9), 3, MIXED, boundary_density=0.5))
    kinds = {e.orientation for e in total_graph(t).edges}
    assert kinds - {Orientation.UNDIRECTED}
    assert validate(t).ok


def test_density_zero():
    assert generate_table(GeneratorConfig(3, 3, 0.0)).suppressed_cells == ()


@pytest.mark.parametrize(
    "cfg",
    [
        GeneratorConfig(density=1.5),
        GeneratorConfig(rows=0),
        GeneratorConfig(value_range=(0, 1)),
        GeneratorConfig(mode="sideways"),
    ],
)
def test_bad_configs(cfg):
    with pytest.raises(ValueError):
        generate_table(cfg)


def test_exhaustive_counts():
    pairs = [(t, q) for t, q in exhaustive_small_instances(2, 2) if t.shape == (2, 2)]
    patterns = {t.suppressed_cells for t, _ in pairs}
    assert len(patterns) == 2**4
    assert len(pairs) == 3**4  # each pattern with all of its q subsets
    assert all(validate(t).ok for t, _ in pairs)


def test_exhaustive_is_deterministic():
    a = [(t.suppressed_cells, sorted(q)) for t, q in exhaustive_small_instances(2, 2, MIXED)]
    b = [(t.suppressed_cells, sorted(q)) for t, q in exhaustive_small_instances(2, 2, MIXED)]
    assert a == b


def test_exhaustive_limit():
    with pytest.raises(OracleLimitError):
        next(exhaustive_small_instances(2, 5))


def test_sparse_graph():
    g = generate_sparse_graph(100, 200, 1)
    assert g.n_vertices == 100 and len(g.edges) == 200 and g.is_undirected
    assert g == generate_sparse_graph(100, 200, 1)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31))
def test_protected_iff_empty_plan(seed):
    t = generate_table(GeneratorConfig(3, 3, 0.6, (0, 4), seed, MIXED, 0.4))
    q = t.suppressed_cells[::2]
    plan = brute_force_min_protection(t, q)
    assert check_protection(t, q).protected == (plan is not None and plan.size == 0)

"""Brute-force ground truth and instance generators.

The protection check here is written independently of :mod:`.detection`:
strong components come from a transitive closure rather than a linear-time
pass, and connectivity from a plain depth-first search.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .detection import test_total_protection
from .graph import Edge, MixedGraph, Orientation, orientation_of
from .suppress import AB, SemiTripartiteInstance, SuppressionPlan
from .table import NEG_INF, POS_INF, Cell, CellRef, Table, TableError

UNDIRECTED_TOTAL, MIXED = "undirected_total", "mixed"


class OracleLimitError(ValueError):
    """The instance is too large for exhaustive search."""


def closure_protected(
    n_rows: int, n_cols: int, edges: Sequence[tuple[int, int, Orientation]], q: Iterable[int]
) -> bool:
    """Both graph conditions for total protection of the edges ``q``."""
    n = n_rows + n_cols
    reach = [1 << v for v in range(n)]
    ends = []
    for row, col, o in edges:
        u, v = row, n_rows + col
        ends.append((u, v))
        if o is not Orientation.TOWARD_ROW:
            reach[u] |= 1 << v
        if o is not Orientation.TOWARD_COLUMN:
            reach[v] |= 1 << u
    for k in range(n):
        bit = 1 << k
        rk = reach[k]
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= rk

    def mutual(u: int, v: int) -> bool:
        return bool(reach[u] >> v & 1) and bool(reach[v] >> u & 1)

    q = set(q)
    if any(not mutual(*ends[k]) for k in q):
        return False
    done = [False] * n
    for start in range(n):
        if done[start]:
            continue
        scc = {v for v in range(n) if mutual(start, v)}
        for v in scc:
            done[v] = True
        adj: dict[int, list[int]] = {v: [] for v in scc}
        for k, (u, v) in enumerate(ends):
            if k not in q and u in scc and v in scc:
                adj[u].append(v)
                adj[v].append(u)
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != scc:
            return False
    return True


def brute_force_min_protection(
    t: Table, q: Iterable[tuple[int, int]], limit: int = 20
) -> SuppressionPlan | None:
    """Smallest, then lexicographically first, set of published cells whose
    suppression makes ``q`` totally protected; None if no set works."""
    q = sorted({CellRef(*c) for c in q})
    published = list(t.published_cells)
    if len(published) > limit:
        raise OracleLimitError(f"{len(published)} published cells exceed the limit of {limit}")
    suppressed = list(t.suppressed_cells)
    position = {c: k for k, c in enumerate(suppressed)}
    for c in q:
        if c not in position:
            raise TableError(f"cell {t.cell_name(c)} is not suppressed")
    base = [(c.row, c.col, orientation_of(t[c])) for c in suppressed]
    extra = {c: (c.row, c.col, orientation_of(t[c])) for c in published}
    q_index = [position[c] for c in q]
    for size in range(len(published) + 1):
        for p in combinations(published, size):
            if closure_protected(t.n_rows, t.n_cols, base + [extra[c] for c in p], q_index):
                report = test_total_protection(t.with_suppressed(p), q)
                return SuppressionPlan(tuple(p), "oracle", report, {"size": size})
    return None


def brute_force_semitripartite(inst: SemiTripartiteInstance, max_pairs: int = 24) -> int | None:
    """Minimum number of semi-tripartite edges connecting every component,
    by exhaustive search over edge sets; None if no edge set works."""
    n = len(inst.vertices)
    kinds = [v.kind for v in inst.vertices]
    group = [v.group for v in inst.vertices]
    pairs = [
        (x, y)
        for x in range(n)
        for y in range(x + 1, n)
        if group[x] != group[y] and (kinds[x] != kinds[y] or kinds[x] == AB)
    ]
    if len(pairs) > max_pairs:
        raise OracleLimitError(f"{len(pairs)} candidate pairs exceed the limit of {max_pairs}")
    need = [g for g in inst.groups if len(g) > 1]
    lower = sum(len(g) - 1 for g in need)
    for size in range(lower, len(pairs) + 1):
        for chosen in combinations(pairs, size):
            parent = list(range(n))

            def find(x: int) -> int:
                while parent[x] != x:
                    x = parent[x]
                return x

            for x, y in chosen:
                parent[find(x)] = find(y)
            if all(len({find(v) for v in g}) == 1 for g in need):
                return size
    return None


# -- generators -----------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorConfig:
    rows: int = 3
    cols: int = 3
    density: float = 0.5
    value_range: tuple[int, int] = (0, 9)
    seed: int = 0
    mode: str = UNDIRECTED_TOTAL
    boundary_density: float = 0.3  # mixed mode: share of cells sitting on a bound
    infinite_density: float = 0.1  # mixed mode: share of infinite bounds
    halves: bool = False  # allow half-integer values


def generate_table(cfg: GeneratorConfig) -> Table:
    """Reproducible random complete table with exactly computed sums."""
    for name in ("density", "boundary_density", "infinite_density"):
        x = getattr(cfg, name)
        if not 0 <= x <= 1:
            raise ValueError(f"{name} must lie in [0, 1], got {x}")
    if cfg.rows < 1 or cfg.cols < 1:
        raise ValueError("a table needs at least one row and one column")
    lo, hi = cfg.value_range
    if cfg.mode == UNDIRECTED_TOTAL and hi - lo < 2:
        raise ValueError("undirected_total needs value_range wider than 2")
    if cfg.mode not in (UNDIRECTED_TOTAL, MIXED):
        raise ValueError(f"unknown mode {cfg.mode!r}")
    rng = random.Random(cfg.seed)
    step = 2 if cfg.halves else 1

    def pick(a: int, b: int) -> Fraction:
        return Fraction(rng.randint(a * step, b * step), step)

    def bound(value: Fraction, sign: int):
        if rng.random() < cfg.infinite_density:
            return POS_INF if sign > 0 else NEG_INF
        return value + sign * rng.randint(1, 3)

    cells = []
    for _ in range(cfg.rows):
        row = []
        for _ in range(cfg.cols):
            hidden = rng.random() < cfg.density
            if cfg.mode == UNDIRECTED_TOTAL:
                row.append(Cell(pick(lo + 1, hi - 1) if step == 1 else _inside(rng, lo, hi), Fraction(lo), Fraction(hi), hidden))
                continue
            v = pick(lo, hi)
            if rng.random() < cfg.boundary_density:
                if rng.random() < 0.5:
                    row.append(Cell(v, v, bound(v, +1), hidden))
                else:
                    row.append(Cell(v, bound(v, -1), v, hidden))
            else:
                row.append(Cell(v, bound(v, -1), bound(v, +1), hidden))
        cells.append(tuple(row))
    return _with_sums(tuple(cells))


def _inside(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(2 * lo + 1, 2 * hi - 1), 2)


def _with_sums(cells: tuple[tuple[Cell, ...], ...]) -> Table:
    from .table import default_col_labels, default_row_labels

    n_rows, n_cols = len(cells), len(cells[0])
    return Table(
        default_row_labels(n_rows),
        default_col_labels(n_cols),
        cells,
        tuple(sum((c.value for c in row), Fraction(0)) for row in cells),
        tuple(sum((cells[i][j].value for i in range(n_rows)), Fraction(0)) for j in range(n_cols)),
    )


def template_table(rows: int, cols: int, template: str = UNDIRECTED_TOTAL) -> Table:
    """Fixed value template with nothing suppressed.

    ``undirected_total``: every value 1 within ``[0, 2]``.  ``mixed``: value
    ``(i + 2j) mod 3`` within ``[0, 2]``, so all three orientations occur.
    """
    if template == UNDIRECTED_TOTAL:
        grid = [[1] * cols for _ in range(rows)]
    elif template == MIXED:
        grid = [[(i + 2 * j) % 3 for j in range(cols)] for i in range(rows)]
    else:
        raise ValueError(f"unknown template {template!r}")
    return Table.from_grid(grid, 0, 2)


def exhaustive_small_instances(
    max_rows: int, max_cols: int, template: str = UNDIRECTED_TOTAL
) -> Iterator[tuple[Table, frozenset[CellRef]]]:
    """Every shape up to ``max_rows x max_cols``, every suppression pattern
    and every protected subset, in canonical order."""
    if max_rows * max_cols > 9:
        raise OracleLimitError("exhaustive enumeration is limited to 9 cells")
    for rows in range(1, max_rows + 1):
        for cols in range(1, max_cols + 1):
            base = template_table(rows, cols, template)
            refs = list(base.refs())
            for mask in range(1 << len(refs)):
                hidden = [r for k, r in enumerate(refs) if mask >> k & 1]
                t = base.with_suppressed(hidden)
                for qmask in range(1 << len(hidden)):
                    yield t, frozenset(r for k, r in enumerate(hidden) if qmask >> k & 1)


def generate_sparse_graph(n: int, m: int, seed: int = 0) -> MixedGraph:
    """Undirected bipartite graph with ``n`` vertices and ``m`` random edges."""
    n_rows = n // 2
    n_cols = n - n_rows
    if m > n_rows * n_cols:
        raise ValueError("more edges than vertex pairs")
    rng = random.Random(seed)
    cells: set[tuple[int, int]] = set()
    while len(cells) < m:
        cells.add((rng.randrange(n_rows), rng.randrange(n_cols)))
    return MixedGraph(n_rows, n_cols, tuple(Edge(i, j) for i, j in sorted(cells)))


def random_labeled_cycle_table(seed: int, max_side: int = 5):
    """A random mixed table together with a random edge-simple cycle of
    suppressed cells, as ``(table, row-col vertex walk)``."""
    rng = random.Random(seed)
    while True:
        rows = rng.randint(2, max_side)
        cols = rng.randint(2, max_side)
        t = generate_table(GeneratorConfig(rows, cols, 0.0, (0, 9), rng.randrange(1 << 30), MIXED))
        k = rng.randint(2, min(rows, cols))
        rs = rng.sample(range(rows), k)
        cs = rng.sample(range(cols), k)
        walk = []
        for i in range(k):
            walk += [rs[i], rows + cs[i]]
        cycle_cells = [(rs[i], cs[i]) for i in range(k)] + [(rs[(i + 1) % k], cs[i]) for i in range(k)]
        extra = [r for r in t.refs() if rng.random() < 0.3]
        return t.with_suppressed(cycle_cells + extra), walk

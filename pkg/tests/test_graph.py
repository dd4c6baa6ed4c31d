"""Oracle-backed tests for the hcp/scc encodings and circuit reductions."""
import itertools
import random

import pytest

from gridloop import (
    CnfBuilder,
    EdgeSpec,
    VertexSpec,
    circuit,
    hcp,
    hcp_grid,
    hcp_grid_k,
    hcp_k,
    make_grid,
    scc,
    scc_grid,
    scc_grid_k,
    scc_k,
    solve_internal,
    subcircuit,
)

from oracles import connected_in_graph, has_ham_cycle_grid, orthogonally_connected


def complete_digraph(b, n):
    vs = [VertexSpec(i, b.new_var()) for i in range(n)]
    es = [
        EdgeSpec(i, j, b.new_var())
        for i in range(n)
        for j in range(n)
        if i != j
    ]
    return vs, es


def force_in(b, vs, members):
    for v in vs:
        b.add_clause([v.in_lit] if v.term in members else [-v.in_lit])


def grid_cells(rows, cols):
    return [(r, c) for r in range(1, rows + 1) for c in range(1, cols + 1)]


# -- hcp ------------------------------------------------------------------

def test_hcp_triangle_all_in():
    b = CnfBuilder()
    vs, es = complete_digraph(b, 3)
    hcp(b, vs, es)
    force_in(b, vs, {0, 1, 2})
    out = solve_internal(b.clauses, b.var_count)
    assert out.is_sat
    succ = {e.src: e.dst for e in es if out.model[e.lit]}
    walk, cur = [0], succ[0]
    while cur != 0:
        walk.append(cur)
        cur = succ[cur]
    assert sorted(walk) == [0, 1, 2]


def test_hcp_missing_return_edge_unsat():
    b = CnfBuilder()
    vs = [VertexSpec(1, b.new_var()), VertexSpec(2, b.new_var())]
    es = [EdgeSpec(1, 2, b.new_var())]
    hcp(b, vs, es)
    force_in(b, vs, {1, 2})
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_hcp_singleton_sat():
    b = CnfBuilder()
    vs = [VertexSpec(1, b.new_var())]
    hcp(b, vs, [])
    b.add_clause([vs[0].in_lit])
    assert solve_internal(b.clauses, b.var_count).is_sat


def test_hcp_empty_forbidden_by_default():
    b = CnfBuilder()
    vs, es = complete_digraph(b, 3)
    hcp(b, vs, es)
    force_in(b, vs, set())
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_hcp_allow_empty():
    b = CnfBuilder()
    vs, es = complete_digraph(b, 3)
    hcp(b, vs, es, allow_empty=True)
    force_in(b, vs, set())
    assert solve_internal(b.clauses, b.var_count).is_sat


def test_hcp_distances_bijection():
    # distance labels in any model are exactly {0..K-1} over the in-vertices
    b = CnfBuilder()
    vs, es = complete_digraph(b, 4)
    hcp(b, vs, es)
    force_in(b, vs, {0, 1, 2, 3})
    out = solve_internal(b.clauses, b.var_count)
    assert out.is_sat
    # distance bits are named dist_<term>_<i>
    by_vertex = {i: [] for i in range(4)}
    for idx, name in b.names.items():
        if name.startswith("dist_"):
            _, term, bit = name.split("_")
            by_vertex[int(term)].append((int(bit), idx))
    values = []
    for term, bits in by_vertex.items():
        v = 0
        for bit, idx in bits:
            if out.model.assignment[idx]:
                v |= 1 << bit
        values.append(v)
    assert sorted(values) == [0, 1, 2, 3]


def test_hcp_k():
    b = CnfBuilder()
    vs, es = complete_digraph(b, 3)
    hcp_k(b, vs, es, 2)
    out = solve_internal(b.clauses, b.var_count)
    assert out.is_sat
    assert sum(1 for v in vs if out.model[v.in_lit]) == 2


def test_hcp_k_zero_unsat():
    b = CnfBuilder()
    vs, es = complete_digraph(b, 3)
    hcp_k(b, vs, es, 0)
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_hcp_k_full_missing_edge_unsat():
    # 4-vertex digraph whose only Hamiltonian cycle needs edge 3->0; drop it
    b = CnfBuilder()
    vs = [VertexSpec(i, b.new_var()) for i in range(4)]
    es = [
        EdgeSpec(src, dst, b.new_var())
        for src, dst in [(0, 1), (1, 2), (2, 3), (3, 2), (2, 1), (1, 0)]
    ]
    hcp_k(b, vs, es, 4)
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_hcp_rejects_bad_input():
    b = CnfBuilder()
    v1, v2 = VertexSpec(1, b.new_var()), VertexSpec(2, b.new_var())
    with pytest.raises(ValueError):
        hcp(b, [v1, VertexSpec(1, b.new_var())], [])
    with pytest.raises(ValueError):
        hcp(b, [v1, v2], [EdgeSpec(1, 1, b.new_var())])
    with pytest.raises(ValueError):
        hcp(b, [v1, v2], [EdgeSpec(1, 3, b.new_var())])
    e = EdgeSpec(1, 2, b.new_var())
    with pytest.raises(ValueError):
        hcp(b, [v1, v2], [e, EdgeSpec(1, 2, b.new_var())])


# -- hcp_grid -------------------------------------------------------------

def test_hcp_grid_2x2_square():
    b = CnfBuilder()
    grid = make_grid(b, 2, 2)
    edges, _ = hcp_grid(b, grid)
    for r, c in grid_cells(2, 2):
        b.add_clause([grid.cell(r, c)])
    out = solve_internal(b.clauses, b.var_count)
    assert out.is_sat
    assert sum(1 for e in edges if out.model[e.lit]) == 4


def test_hcp_grid_3x3_full_unsat():
    # 9-cell cycle impossible: grid graphs are bipartite (no odd cycles)
    b = CnfBuilder()
    grid = make_grid(b, 3, 3)
    hcp_grid(b, grid)
    for r, c in grid_cells(3, 3):
        b.add_clause([grid.cell(r, c)])
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_hcp_grid_1x3_unsat():
    b = CnfBuilder()
    grid = make_grid(b, 1, 3)
    hcp_grid(b, grid)
    for r, c in grid_cells(1, 3):
        b.add_clause([grid.cell(r, c)])
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_hcp_grid_k():
    b = CnfBuilder()
    grid = make_grid(b, 3, 3)
    _, count = hcp_grid_k(b, grid, 8)
    out = solve_internal(b.clauses, b.var_count)
    assert out.is_sat
    assert count.value(out.model.assignment) == 8


def test_hcp_grid_edge_order_deterministic():
    b = CnfBuilder()
    grid = make_grid(b, 2, 2)
    edges, _ = hcp_grid(b, grid)
    # row-major, per cell up/down/left/right filtered to the grid
    assert [(e.src, e.dst) for e in edges[:4]] == [
        ((1, 1), (2, 1)),
        ((1, 1), (1, 2)),
        ((1, 2), (2, 2)),
        ((1, 2), (1, 1)),
    ]


def test_hcp_grid_exhaustive_2x3():
    # every in-subset of a 2x3 grid against brute-force cycle search
    b = CnfBuilder()
    grid = make_grid(b, 2, 3)
    hcp_grid(b, grid)
    cells = grid_cells(2, 3)
    for mask in range(1 << 6):
        subset = {cell for i, cell in enumerate(cells) if mask >> i & 1}
        units = [
            [grid.cell(r, c)] if (r, c) in subset else [-grid.cell(r, c)]
            for r, c in cells
        ]
        got = solve_internal(b.clauses + units, b.var_count).is_sat
        assert got == has_ham_cycle_grid(subset), subset


# -- scc ------------------------------------------------------------------

def test_scc_pair_with_edge():
    b = CnfBuilder()
    vs = [VertexSpec(1, b.new_var()), VertexSpec(2, b.new_var())]
    e = EdgeSpec(1, 2, b.new_var())
    scc(b, vs, [e])
    force_in(b, vs, {1, 2})
    b.add_clause([e.lit])
    assert solve_internal(b.clauses, b.var_count).is_sat


def test_scc_pair_without_edge_unsat():
    b = CnfBuilder()
    vs = [VertexSpec(1, b.new_var()), VertexSpec(2, b.new_var())]
    scc(b, vs, [])
    force_in(b, vs, {1, 2})
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_scc_empty_subgraph_sat():
    b = CnfBuilder()
    vs = [VertexSpec(i, b.new_var()) for i in range(3)]
    scc(b, vs, [EdgeSpec(0, 1, b.new_var()), EdgeSpec(1, 2, b.new_var())])
    force_in(b, vs, set())
    assert solve_internal(b.clauses, b.var_count).is_sat


def test_scc_edge_implies_endpoints():
    b = CnfBuilder()
    vs = [VertexSpec(1, b.new_var()), VertexSpec(2, b.new_var())]
    e = EdgeSpec(1, 2, b.new_var())
    scc(b, vs, [e])
    b.add_clause([e.lit])
    b.add_clause([-vs[0].in_lit])
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_scc_random_graphs_vs_oracle():
    # SAT iff the in-subset is connected in the given graph (edges free)
    rng = random.Random(7)
    for n in range(1, 6):
        pairs = list(itertools.combinations(range(n), 2))
        for _ in range(6):
            edges = [p for p in pairs if rng.random() < 0.5]
            b = CnfBuilder()
            vs = [VertexSpec(i, b.new_var()) for i in range(n)]
            es = [EdgeSpec(a, c, b.new_var()) for a, c in edges]
            scc(b, vs, es)
            for mask in range(1 << n):
                subset = {i for i in range(n) if mask >> i & 1}
                units = [
                    [v.in_lit] if v.term in subset else [-v.in_lit] for v in vs
                ]
                got = solve_internal(b.clauses + units, b.var_count).is_sat
                assert got == connected_in_graph(subset, edges), (edges, subset)


def test_scc_k():
    b = CnfBuilder()
    vs = [VertexSpec(i, b.new_var()) for i in range(4)]
    es = [EdgeSpec(i, i + 1, b.new_var()) for i in range(3)]
    count = scc_k(b, vs, es, 3)
    out = solve_internal(b.clauses, b.var_count)
    assert out.is_sat
    assert count.value(out.model.assignment) == 3


# -- scc_grid -------------------------------------------------------------

def test_scc_grid_diagonal_unsat():
    b = CnfBuilder()
    grid = make_grid(b, 2, 2)
    scc_grid(b, grid)
    b.add_clause([grid.cell(1, 1)])
    b.add_clause([-grid.cell(1, 2)])
    b.add_clause([-grid.cell(2, 1)])
    b.add_clause([grid.cell(2, 2)])
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_scc_grid_single_cell_sat():
    b = CnfBuilder()
    grid = make_grid(b, 2, 2)
    scc_grid(b, grid)
    b.add_clause([grid.cell(1, 1)])
    for r, c in [(1, 2), (2, 1), (2, 2)]:
        b.add_clause([-grid.cell(r, c)])
    assert solve_internal(b.clauses, b.var_count).is_sat


def test_scc_grid_exhaustive_2x3():
    b = CnfBuilder()
    grid = make_grid(b, 2, 3)
    scc_grid(b, grid)
    cells = grid_cells(2, 3)
    for mask in range(1 << 6):
        subset = {cell for i, cell in enumerate(cells) if mask >> i & 1}
        units = [
            [grid.cell(r, c)] if (r, c) in subset else [-grid.cell(r, c)]
            for r, c in cells
        ]
        got = solve_internal(b.clauses + units, b.var_count).is_sat
        assert got == orthogonally_connected(subset), subset


def test_scc_grid_k():
    b = CnfBuilder()
    grid = make_grid(b, 2, 2)
    count = scc_grid_k(b, grid, 3)
    out = solve_internal(b.clauses, b.var_count)
    assert out.is_sat
    assert count.value(out.model.assignment) == 3


# -- circuit / subcircuit -------------------------------------------------

def enumerate_selector_models(b, selectors):
    """All distinct projections onto the selector literals."""
    clauses = list(b.clauses)
    found = []
    while True:
        out = solve_internal(clauses, b.var_count)
        if not out.is_sat:
            return found
        bits = tuple(out.model[s] for s in selectors)
        found.append(bits)
        clauses.append([-s if bit else s for s, bit in zip(selectors, bits)])


def test_circuit_triangle_two_cycles():
    b = CnfBuilder()
    sel = {
        (i, j): b.new_var() for i in range(3) for j in range(3) if i != j
    }
    adjacency = {
        i: [(j, sel[(i, j)]) for j in range(3) if j != i] for i in range(3)
    }
    circuit(b, adjacency)
    models = enumerate_selector_models(b, list(sel.values()))
    assert len(models) == 2  # the two directed Hamiltonian cycles of K3


def test_circuit_two_vertices_unique():
    b = CnfBuilder()
    s12, s21 = b.new_var(), b.new_var()
    circuit(b, {1: [(2, s12)], 2: [(1, s21)]})
    models = enumerate_selector_models(b, [s12, s21])
    assert models == [(True, True)]


def test_circuit_crafted_unsat():
    # vertex 3 only reaches 1, vertices 1 and 2 both require successor 3
    b = CnfBuilder()
    adjacency = {
        1: [(3, b.new_var())],
        2: [(3, b.new_var())],
        3: [(1, b.new_var())],
    }
    circuit(b, adjacency)
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_circuit_rejects_self_loop():
    b = CnfBuilder()
    with pytest.raises(ValueError):
        circuit(b, {1: [(1, b.new_var())]})


def test_subcircuit_all_stay_sat():
    b = CnfBuilder()
    adjacency = {
        1: [(2, b.new_var())],
        2: [(3, b.new_var())],
        3: [(1, b.new_var())],
    }
    stay = subcircuit(b, adjacency)
    for s in stay.values():
        b.add_clause([s])
    assert solve_internal(b.clauses, b.var_count).is_sat


def test_subcircuit_single_nonstay_unsat():
    b = CnfBuilder()
    adjacency = {
        1: [(2, b.new_var())],
        2: [(3, b.new_var())],
        3: [(1, b.new_var())],
    }
    stay = subcircuit(b, adjacency)
    b.add_clause([-stay[1]])
    b.add_clause([stay[2]])
    b.add_clause([stay[3]])
    assert solve_internal(b.clauses, b.var_count).is_unsat


def test_subcircuit_three_cycle_with_stayer():
    b = CnfBuilder()
    sel = {}
    adjacency = {}
    for i in range(1, 5):
        cands = []
        for j in range(1, 5):
            if i != j:
                sel[(i, j)] = b.new_var()
                cands.append((j, sel[(i, j)]))
        adjacency[i] = cands
    stay = subcircuit(b, adjacency)
    b.add_clause([stay[4]])
    for i in (1, 2, 3):
        b.add_clause([-stay[i]])
    out = solve_internal(b.clauses, b.var_count)
    assert out.is_sat
    succ = {i: j for (i, j), s in sel.items() if out.model[s]}
    assert set(succ) == {1, 2, 3}
    walk, cur = [1], succ[1]
    while cur != 1:
        walk.append(cur)
        cur = succ[cur]
    assert sorted(walk) == [1, 2, 3]

"""Graph reachability constraints compiled to CNF.

Two families are provided:

* ``hcp`` — the active directed edges form a single cycle covering exactly
  the in-vertices (distance encoding: a unique start vertex gets distance 0
  and every cycle edge increments the distance, which bans sub-cycles).
* ``scc`` — the in-vertices with their active undirected edges form one
  connected component (tree encoding: a unique root, a parent per non-root
  in-vertex, and distances that strictly decrease toward the root).

Plus the classical ``circuit`` / ``subcircuit`` constraints as reductions
to ``hcp``, and grid variants that synthesize the orthogonal-adjacency
edges of a cell grid.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .cnf import BitVec, CnfBuilder, Lit, UnaryCount, distance_width


@dataclass
class VertexSpec:
    term: Hashable
    in_lit: Lit


@dataclass
class EdgeSpec:
    src: Hashable
    dst: Hashable
    lit: Lit


@dataclass
class GridVars:
    rows: int
    cols: int
    cells: list[list[Lit]]  # cells[r][c], 0-based storage

    def cell(self, r: int, c: int) -> Lit:
        """Cell literal at 1-based (row, col)."""
        return self.cells[r - 1][c - 1]

    def in_bounds(self, r: int, c: int) -> bool:
        return 1 <= r <= self.rows and 1 <= c <= self.cols


def make_grid(builder: CnfBuilder, rows: int, cols: int, prefix: str = "cell") -> GridVars:
    if rows < 1 or cols < 1:
        raise ValueError("grid must be at least 1x1")
    cells = [
        [builder.new_var(f"{prefix}_{r}_{c}") for c in range(1, cols + 1)]
        for r in range(1, rows + 1)
    ]
    return GridVars(rows, cols, cells)


def _check_vertices_edges(vs, es, directed: bool):
    index = {}
    for i, v in enumerate(vs):
        if v.term in index:
            raise ValueError(f"duplicate vertex term {v.term!r}")
        index[v.term] = i
    seen = set()
    for e in es:
        if e.src == e.dst:
            raise ValueError(f"self-loop on {e.src!r}")
        if e.src not in index or e.dst not in index:
            raise ValueError(f"edge ({e.src!r}, {e.dst!r}) references undeclared vertex")
        key = (e.src, e.dst) if directed else frozenset((e.src, e.dst))
        if key in seen:
            raise ValueError(f"duplicate edge ({e.src!r}, {e.dst!r})")
        seen.add(key)
    return index


def _start_chain(builder: CnfBuilder, in_lits: Sequence[Lit]) -> list[Lit]:
    """Literal per vertex: true iff it is the lowest-index in-vertex.

    Prefix-occupancy chain: p_i <-> p_{i-1} or in_i; start_i <-> in_i and
    not p_{i-1}.
    """
    starts = [in_lits[0]]
    p_prev = in_lits[0]
    for in_i in in_lits[1:]:
        starts.append(builder.gate_and([in_i, -p_prev]))
        p_prev = builder.gate_or([p_prev, in_i])
    return starts


def hcp(
    builder: CnfBuilder,
    vs: Sequence[VertexSpec],
    es: Sequence[EdgeSpec],
    allow_empty: bool = False,
) -> UnaryCount:
    """Constrain the active edges to form a single directed cycle covering
    exactly the in-vertices.

    A single in-vertex with no active edges counts as a (degenerate) cycle.
    The empty subgraph is forbidden unless ``allow_empty`` (used by
    ``subcircuit``).  Returns the unary counter over the in-literals.
    """
    index = _check_vertices_edges(vs, es, directed=True)
    n = len(vs)
    in_lits = [v.in_lit for v in vs]

    # active edge -> both endpoints are in
    for e in es:
        builder.add_clause([-e.lit, in_lits[index[e.src]]])
        builder.add_clause([-e.lit, in_lits[index[e.dst]]])

    count = builder.unary_count(in_lits)
    if not allow_empty:
        builder.bound_ge(count, 1)

    # single <-> exactly one in-vertex; then no edges are active and the
    # degree constraints are suspended
    if n == 1:
        single = count.outputs[0]
    else:
        single = builder.gate_and([count.outputs[0], -count.outputs[1]])
    for e in es:
        builder.add_clause([-single, -e.lit])

    outgoing: list[list[Lit]] = [[] for _ in range(n)]
    incoming: list[list[Lit]] = [[] for _ in range(n)]
    for e in es:
        outgoing[index[e.src]].append(e.lit)
        incoming[index[e.dst]].append(e.lit)
    for i in range(n):
        for lits in (outgoing[i], incoming[i]):
            builder.add_clause([single, -in_lits[i]] + lits)
            if len(lits) > 1:
                builder.at_most_one(lits)

    starts = _start_chain(builder, in_lits)
    width = distance_width(n)
    dist = [builder.new_bitvec(width, f"dist_{vs[i].term}") for i in range(n)]
    for d in dist:
        builder.bitvec_le_const(d, n - 1)
    for i in range(n):
        builder.bitvec_eq_const(dist[i], 0, starts[i])

    # active edge (i, j), j not the start -> d_j = d_i + 1
    succ_cache: dict[int, tuple[BitVec, Lit]] = {}
    for e in es:
        i, j = index[e.src], index[e.dst]
        if i not in succ_cache:
            succ_cache[i] = builder.increment(dist[i])
        succ, overflow = succ_cache[i]
        for db, sb in zip(dist[j].bits, succ.bits):
            builder.add_clause([-e.lit, starts[j], -db, sb])
            builder.add_clause([-e.lit, starts[j], db, -sb])
        builder.add_clause([-e.lit, starts[j], -overflow])
    return count


def hcp_k(
    builder: CnfBuilder,
    vs: Sequence[VertexSpec],
    es: Sequence[EdgeSpec],
    k: int,
) -> UnaryCount:
    count = hcp(builder, vs, es)
    builder.fix_count(count, k)
    return count


def grid_graph_edges(builder: CnfBuilder, grid: GridVars) -> list[EdgeSpec]:
    """Directed edges between orthogonally adjacent cells, in row-major,
    direction-stable order (per cell: up, down, left, right)."""
    edges = []
    for r in range(1, grid.rows + 1):
        for c in range(1, grid.cols + 1):
            for r2, c2 in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if grid.in_bounds(r2, c2):
                    lit = builder.new_var(f"edge_{r}_{c}_{r2}_{c2}")
                    edges.append(EdgeSpec((r, c), (r2, c2), lit))
    return edges


def _grid_vertices(grid: GridVars) -> list[VertexSpec]:
    return [
        VertexSpec((r, c), grid.cell(r, c))
        for r in range(1, grid.rows + 1)
        for c in range(1, grid.cols + 1)
    ]


def hcp_grid(builder: CnfBuilder, grid: GridVars) -> tuple[list[EdgeSpec], UnaryCount]:
    """Apply hcp over the grid's cells; returns (edge list, cell counter)."""
    edges = grid_graph_edges(builder, grid)
    count = hcp(builder, _grid_vertices(grid), edges)
    return edges, count


def hcp_grid_k(builder: CnfBuilder, grid: GridVars, k: int) -> tuple[list[EdgeSpec], UnaryCount]:
    edges, count = hcp_grid(builder, grid)
    builder.fix_count(count, k)
    return edges, count


def scc(
    builder: CnfBuilder,
    vs: Sequence[VertexSpec],
    es: Sequence[EdgeSpec],
) -> UnaryCount:
    """Constrain the in-vertices with active undirected edges to form one
    connected component.  Each EdgeSpec is one undirected edge; the reverse
    orientation shares its literal.  The empty subgraph is accepted.
    """
    index = _check_vertices_edges(vs, es, directed=False)
    n = len(vs)
    in_lits = [v.in_lit for v in vs]

    for e in es:
        builder.add_clause([-e.lit, in_lits[index[e.src]]])
        builder.add_clause([-e.lit, in_lits[index[e.dst]]])

    count = builder.unary_count(in_lits)
    roots = _start_chain(builder, in_lits)
    width = distance_width(n)
    dist = [builder.new_bitvec(width, f"sdist_{vs[i].term}") for i in range(n)]
    for d in dist:
        builder.bitvec_le_const(d, n - 1)
    for i in range(n):
        builder.bitvec_eq_const(dist[i], 0, roots[i])

    # parent selection per vertex over its incident edges
    incident: list[list[tuple[Lit, int]]] = [[] for _ in range(n)]
    for e in es:
        i, j = index[e.src], index[e.dst]
        incident[i].append((e.lit, j))
        incident[j].append((e.lit, i))

    succ_cache: dict[int, tuple[BitVec, Lit]] = {}
    for i in range(n):
        parents = []
        for elit, j in incident[i]:
            p = builder.new_var()
            builder.add_clause([-p, elit])
            parents.append(p)
            if j not in succ_cache:
                succ_cache[j] = builder.increment(dist[j])
            succ, overflow = succ_cache[j]
            for db, sb in zip(dist[i].bits, succ.bits):
                builder.add_clause([-p, -db, sb])
                builder.add_clause([-p, db, -sb])
            builder.add_clause([-p, -overflow])
        builder.add_clause([roots[i], -in_lits[i]] + parents)
        if len(parents) > 1:
            builder.at_most_one(parents)
    return count


def scc_k(builder: CnfBuilder, vs, es, k: int) -> UnaryCount:
    count = scc(builder, vs, es)
    builder.fix_count(count, k)
    return count


def scc_grid(builder: CnfBuilder, grid: GridVars) -> UnaryCount:
    """scc over the grid cells, with one undirected edge literal per
    orthogonally adjacent pair, defined as the conjunction of the two cells."""
    es = []
    for r in range(1, grid.rows + 1):
        for c in range(1, grid.cols + 1):
            for r2, c2 in ((r + 1, c), (r, c + 1)):
                if grid.in_bounds(r2, c2):
                    a, b = grid.cell(r, c), grid.cell(r2, c2)
                    g = builder.new_var(f"uedge_{r}_{c}_{r2}_{c2}")
                    builder.add_clause([-g, a])
                    builder.add_clause([-g, b])
                    builder.add_clause([g, -a, -b])
                    es.append(EdgeSpec((r, c), (r2, c2), g))
    return scc(builder, _grid_vertices(grid), es)


def scc_grid_k(builder: CnfBuilder, grid: GridVars, k: int) -> UnaryCount:
    count = scc_grid(builder, grid)
    builder.fix_count(count, k)
    return count


Adjacency = Mapping[Hashable, Sequence[tuple[Hashable, Lit]]]


def circuit(builder: CnfBuilder, adjacency: Adjacency) -> None:
    """All vertices in; exactly one successor selected per vertex; the
    selected edges must form a Hamiltonian cycle."""
    vs = [VertexSpec(t, builder.TRUE) for t in adjacency]
    es = []
    for t, cands in adjacency.items():
        lits = []
        for u, lit in cands:
            if u == t:
                raise ValueError(f"self-loop candidate on {t!r}")
            es.append(EdgeSpec(t, u, lit))
            lits.append(lit)
        if lits:
            builder.exactly_one(lits)
        else:
            builder.add_clause([])
    hcp(builder, vs, es)


def subcircuit(builder: CnfBuilder, adjacency: Adjacency) -> dict[Hashable, Lit]:
    """Each vertex either stays (not in the subgraph) or selects a successor;
    the in-vertices must form a cycle.  The all-stay assignment (empty
    subgraph) is accepted.  Returns the per-vertex stay literals."""
    stay = {t: builder.new_var(f"stay_{t}") for t in adjacency}
    vs = [VertexSpec(t, -stay[t]) for t in adjacency]
    es = []
    for t, cands in adjacency.items():
        lits = [stay[t]]
        for u, lit in cands:
            if u == t:
                raise ValueError(f"self-loop candidate on {t!r}")
            es.append(EdgeSpec(t, u, lit))
            lits.append(lit)
        builder.exactly_one(lits)
    hcp(builder, vs, es, allow_empty=True)
    return stay

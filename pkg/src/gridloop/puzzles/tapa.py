"""Tapa: color cells black/white so the black cells form one orthogonally
connected group with no 2x2 black area, and every clue cell's neighbor ring
contains black blocks of exactly the given sizes, separated by whites."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..cnf import CnfBuilder
from ..graph import GridVars, make_grid, scc_grid

Cell = tuple[int, int]


@dataclass
class TapaInstance:
    n: int
    board: list[list[list[int] | None]]  # clue list (1..4 digits) or None

    def at(self, r: int, c: int):
        return self.board[r - 1][c - 1]

    def clue_cells(self):
        for r in range(1, self.n + 1):
            for c in range(1, self.n + 1):
                if self.board[r - 1][c - 1] is not None:
                    yield r, c


@dataclass
class ColoringSolution:
    black: list[list[int]]  # row-major 0/1

    def is_black(self, r: int, c: int) -> bool:
        return bool(self.black[r - 1][c - 1])


def parse_tapa(text: str) -> TapaInstance:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty instance")
    n = int(lines[0].split()[0])
    rows = lines[1 : n + 1]
    if len(rows) != n:
        raise ValueError(f"expected {n} board rows, found {len(rows)}")
    board: list[list[list[int] | None]] = []
    for ln in rows:
        toks = ln.split()
        if len(toks) != n:
            raise ValueError(f"row has {len(toks)} tokens, expected {n}")
        row: list[list[int] | None] = []
        for tok in toks:
            if tok == ".":
                row.append(None)
            elif tok.isdigit() and 1 <= len(tok) <= 4:
                row.append([int(ch) for ch in tok])
            else:
                raise ValueError(f"bad token {tok!r}")
        board.append(row)
    return TapaInstance(n, board)


def neighbor_ring(n: int, r: int, c: int) -> tuple[list[Cell], bool]:
    """Up-to-8 surrounding cells in clockwise order starting at (r-1, c-1),
    filtered to the grid.  The flag is true iff the ring is full (interior
    cell), in which case block separation wraps around."""
    ring = [
        (r1, c1)
        for r1, c1 in [
            (r - 1, c - 1),
            (r - 1, c),
            (r - 1, c + 1),
            (r, c + 1),
            (r + 1, c + 1),
            (r + 1, c),
            (r + 1, c - 1),
            (r, c - 1),
        ]
        if 1 <= r1 <= n and 1 <= c1 <= n
    ]
    return ring, len(ring) == 8


def findall_layouts(clues: list[int], ring_len: int, circular: bool) -> list[tuple[int, ...]]:
    """All 0/1 layouts over the ring realizing black blocks with the clue
    sizes (order-insensitive), pairwise separated by at least one white.
    Separation applies across the wrap point iff ``circular``."""
    if not clues or any(not 0 <= cl <= 8 for cl in clues):
        raise ValueError(f"bad clue list {clues!r}")
    if ring_len < 1:
        raise ValueError("ring length must be >= 1")
    sizes = [cl for cl in clues if cl > 0]
    if not sizes:
        return [tuple([0] * ring_len)]

    layouts: set[tuple[int, ...]] = set()
    k = len(sizes)
    for perm in set(itertools.permutations(sizes)):
        total = sum(perm)
        if circular:
            if k == 1:
                size = perm[0]
                if size == ring_len:
                    layouts.add(tuple([1] * ring_len))
                elif size < ring_len:
                    for s in range(ring_len):
                        lay = [0] * ring_len
                        for i in range(size):
                            lay[(s + i) % ring_len] = 1
                        layouts.add(tuple(lay))
                continue
            slack = ring_len - total - k  # gaps are 1 + extra slack
            if slack < 0:
                continue
            for s in range(ring_len):
                for extras in _compositions(slack, k):
                    lay = [0] * ring_len
                    pos = s
                    for bi, size in enumerate(perm):
                        for i in range(size):
                            lay[(pos + i) % ring_len] = 1
                        pos += size + 1 + extras[bi]
                    layouts.add(tuple(lay))
        else:
            slack = ring_len - total - (k - 1)
            if slack < 0:
                continue
            # slack distributed over k+1 gaps (leading/trailing may be 0)
            for extras in _compositions(slack, k + 1):
                lay = [0] * ring_len
                pos = extras[0]
                for bi, size in enumerate(perm):
                    for i in range(size):
                        lay[pos + i] = 1
                    pos += size + (1 + extras[bi + 1] if bi < k - 1 else 0)
                layouts.add(tuple(lay))
    return sorted(layouts)


def _compositions(total: int, parts: int):
    """All nonnegative integer tuples of the given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def build_tapa(builder: CnfBuilder, inst: TapaInstance) -> GridVars:
    grid = make_grid(builder, inst.n, inst.n)
    scc_grid(builder, grid)
    for r in range(1, inst.n):
        for c in range(1, inst.n):
            builder.add_clause(
                [
                    -grid.cell(r, c),
                    -grid.cell(r, c + 1),
                    -grid.cell(r + 1, c),
                    -grid.cell(r + 1, c + 1),
                ]
            )
    for r, c in inst.clue_cells():
        builder.add_clause([-grid.cell(r, c)])
        ring, circular = neighbor_ring(inst.n, r, c)
        layouts = findall_layouts(inst.at(r, c), len(ring), circular)
        choices = []
        for lay in layouts:
            lits = [
                grid.cell(r1, c1) if bit else -grid.cell(r1, c1)
                for (r1, c1), bit in zip(ring, lay)
            ]
            choices.append(builder.gate_and(lits))
        builder.add_clause(choices)
    return grid


def decode_coloring(assignment: dict[int, bool], grid: GridVars) -> ColoringSolution:
    return ColoringSolution(
        [
            [1 if assignment[grid.cell(r, c)] else 0 for c in range(1, grid.cols + 1)]
            for r in range(1, grid.rows + 1)
        ]
    )


def _ring_runs(pattern: list[int], circular: bool) -> list[int]:
    """Lengths of maximal 1-runs, merging across the wrap point if circular."""
    if not any(pattern):
        return []
    if circular and all(pattern):
        return [len(pattern)]
    runs = []
    cur = 0
    for bit in pattern:
        if bit:
            cur += 1
        elif cur:
            runs.append(cur)
            cur = 0
    if cur:
        runs.append(cur)
    if circular and pattern[0] and pattern[-1] and len(runs) > 1:
        runs[0] += runs.pop()
    return runs


def verify_tapa(inst: TapaInstance, sol: ColoringSolution) -> str | None:
    """Flood fill for connectivity, 2x2 windows, and per-clue run multisets
    on the neighbor ring.  Returns a reason code on rejection."""
    n = inst.n
    if len(sol.black) != n or any(len(row) != n for row in sol.black):
        return "wrong-grid-size"
    if any(bit not in (0, 1) for row in sol.black for bit in row):
        return "bad-cell-value"
    for r, c in inst.clue_cells():
        if sol.is_black(r, c):
            return "clue-cell-black"
    for r in range(1, n):
        for c in range(1, n):
            if (
                sol.is_black(r, c)
                and sol.is_black(r, c + 1)
                and sol.is_black(r + 1, c)
                and sol.is_black(r + 1, c + 1)
            ):
                return "2x2-black-area"
    blacks = {(r, c) for r in range(1, n + 1) for c in range(1, n + 1) if sol.is_black(r, c)}
    if blacks:
        seen = set()
        stack = [next(iter(blacks))]
        while stack:
            cell = stack.pop()
            if cell in seen:
                continue
            seen.add(cell)
            r, c = cell
            for nb in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if nb in blacks and nb not in seen:
                    stack.append(nb)
        if seen != blacks:
            return "black-not-connected"
    for r, c in inst.clue_cells():
        ring, circular = neighbor_ring(n, r, c)
        pattern = [1 if sol.is_black(r1, c1) else 0 for r1, c1 in ring]
        runs = sorted(_ring_runs(pattern, circular))
        want = sorted(cl for cl in inst.at(r, c) if cl > 0)
        if runs != want:
            return "clue-blocks-mismatch"
    return None

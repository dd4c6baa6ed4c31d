"""Masyu: single loop through all circles; white circles are passed straight
with a turn in the previous and/or next cell, black circles are turned upon
with straight travel through both neighbors."""
from __future__ import annotations

from dataclasses import dataclass

from ..cnf import CnfBuilder, Lit
from ..graph import EdgeSpec, GridVars, hcp_grid, make_grid
from .loops import (
    LoopSolution,
    check_cycle_shape,
    constrain_paths,
    edge_map,
    loop_neighbors,
    straight_at,
)

EMPTY, WHITE, BLACK = ".", "w", "b"


@dataclass
class MasyuInstance:
    n: int
    board: list[list[str]]  # ".", "w", "b"; board[r-1][c-1]

    def at(self, r: int, c: int) -> str:
        return self.board[r - 1][c - 1]


def parse_masyu(text: str) -> MasyuInstance:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty instance")
    n = int(lines[0].split()[0])
    if n < 1:
        raise ValueError("grid size must be >= 1")
    rows = lines[1 : n + 1]
    if len(rows) != n:
        raise ValueError(f"expected {n} board rows, found {len(rows)}")
    board = []
    for ln in rows:
        row = ln.split()[0] if " " in ln.strip() else ln.strip()
        if len(row) != n:
            raise ValueError(f"row {row!r} has length {len(row)}, expected {n}")
        for ch in row:
            if ch not in (EMPTY, WHITE, BLACK):
                raise ValueError(f"bad cell {ch!r}")
        board.append(list(row))
    return MasyuInstance(n, board)


def white_shapes(r: int, c: int) -> list[list[tuple[int, int]]]:
    """The 8 path shapes through a white circle: straight through (r, c) with
    a turn in the previous and/or next cell."""
    return [
        [(r, c - 1), (r, c), (r, c + 1), (r - 1, c + 1)],
        [(r, c - 1), (r, c), (r, c + 1), (r + 1, c + 1)],
        [(r - 1, c - 1), (r, c - 1), (r, c), (r, c + 1)],
        [(r + 1, c - 1), (r, c - 1), (r, c), (r, c + 1)],
        [(r - 1, c - 1), (r - 1, c), (r, c), (r + 1, c)],
        [(r - 1, c + 1), (r - 1, c), (r, c), (r + 1, c)],
        [(r - 1, c), (r, c), (r + 1, c), (r + 1, c - 1)],
        [(r - 1, c), (r, c), (r + 1, c), (r + 1, c + 1)],
    ]


def black_shapes(r: int, c: int) -> list[list[tuple[int, int]]]:
    """Path shapes through a black circle: a turn at (r, c) with straight
    2-cell arms; 4 L-orientations, doubled by direction downstream."""
    return [
        [(r, c - 2), (r, c - 1), (r, c), (r + 1, c), (r + 2, c)],
        [(r, c - 2), (r, c - 1), (r, c), (r - 1, c), (r - 2, c)],
        [(r, c + 2), (r, c + 1), (r, c), (r + 1, c), (r + 2, c)],
        [(r, c + 2), (r, c + 1), (r, c), (r - 1, c), (r - 2, c)],
    ]


def constrain_white_masyu(builder, emap, n, r, c):
    constrain_paths(builder, emap, n, n, white_shapes(r, c))


def constrain_black_masyu(builder, emap, n, r, c):
    constrain_paths(builder, emap, n, n, black_shapes(r, c))


def build_masyu(
    builder: CnfBuilder, inst: MasyuInstance
) -> tuple[GridVars, list[EdgeSpec], dict[tuple[int, int, int, int], Lit]]:
    grid = make_grid(builder, inst.n, inst.n)
    edges, _ = hcp_grid(builder, grid)
    emap = edge_map(edges)
    for r in range(1, inst.n + 1):
        for c in range(1, inst.n + 1):
            mark = inst.at(r, c)
            if mark == EMPTY:
                continue
            builder.add_clause([grid.cell(r, c)])
            if mark == WHITE:
                constrain_white_masyu(builder, emap, inst.n, r, c)
            else:
                constrain_black_masyu(builder, emap, inst.n, r, c)
    return grid, edges, emap


def verify_masyu(inst: MasyuInstance, sol: LoopSolution) -> str | None:
    """Check a solution directly against the puzzle rules (no shared
    constraint code).  Returns a reason code on rejection, None on accept."""
    reason = check_cycle_shape(sol, inst.n, inst.n)
    if reason:
        return reason
    neighbors = loop_neighbors(sol)
    for r in range(1, inst.n + 1):
        for c in range(1, inst.n + 1):
            mark = inst.at(r, c)
            if mark == EMPTY:
                continue
            if (r, c) not in sol.in_cells:
                return "circle-not-on-loop"
            if len(sol.cycle) < 3:
                return "degenerate-loop-at-circle"
            prev, nxt = neighbors[(r, c)]
            if mark == WHITE:
                if not straight_at(prev, (r, c), nxt):
                    return "white-not-straight"
                turns = 0
                for side in (prev, nxt):
                    if side in neighbors:
                        p2, n2 = neighbors[side]
                        if not straight_at(p2, side, n2):
                            turns += 1
                if turns == 0:
                    return "white-no-adjacent-turn"
            else:
                if straight_at(prev, (r, c), nxt):
                    return "black-not-turned"
                for side in (prev, nxt):
                    p2, n2 = neighbors[side]
                    if not straight_at(p2, side, n2):
                        return "black-arm-not-straight"
    return None

"""Compile graph reachability constraints (Hamiltonian cycles, connected
subgraphs) to CNF, solve with a built-in or external SAT solver, optimize
Boolean sums by binary search, and solve four grid loop/coloring puzzles."""

from .cnf import BitVec, CnfBuilder, Lit, UnaryCount, distance_width, parse_dimacs
from .graph import (
    EdgeSpec,
    GridVars,
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
    subcircuit,
)
from .optimize import OptimizeResult, maximize
from .solver import (
    Model,
    SolveOutcome,
    check_model,
    default_solver_command,
    solve_builder,
    solve_external,
    solve_internal,
)

__version__ = "0.1.0"

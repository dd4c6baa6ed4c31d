"""Boolean-sum maximization by binary search over unary-counter bounds.

Each probe is a fresh solver run on the base formula plus a single unit
clause on the counter (possible because the counter outputs are threshold
literals).  The achieved value is read back from the model, which may
exceed the probed bound and saves iterations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cnf import Lit, UnaryCount
from .solver import Model, SolveFn, solve_internal


@dataclass
class OptimizeResult:
    status: str  # "optimal" | "infeasible" | "unknown"
    best_model: Model | None
    best_value: int | None
    solve_calls: int
    certified: bool = False  # an UNSAT probe at best_value + 1 was seen
    reason: str | None = None


def maximize(
    clauses: Sequence[Sequence[Lit]],
    nvars: int,
    objective: UnaryCount,
    solve_fn: SolveFn | None = None,
    lo: int = 0,
    hi: int | None = None,
) -> OptimizeResult:
    """Maximize the number of true objective inputs, bracketing in [lo, hi]."""
    fn = solve_fn or solve_internal
    n = objective.size
    if hi is None:
        hi = n
    if not 0 <= lo <= hi <= n:
        raise ValueError(f"bad bracket [{lo}, {hi}] for objective of size {n}")
    hi_orig = hi
    base = list(clauses)

    def probe(bound: int):
        extra = [[objective.outputs[bound - 1]]] if bound >= 1 else []
        return fn(base + extra, nvars)

    calls = 1
    outcome = probe(lo)
    if outcome.is_unsat:
        return OptimizeResult("infeasible", None, None, calls)
    if not outcome.is_sat:
        return OptimizeResult("unknown", None, None, calls, reason=outcome.reason)

    best_model = outcome.model
    best = objective.value(best_model.assignment)
    lo = best + 1
    last_unsat_bound = None
    while lo <= hi:
        mid = (lo + hi + 1) // 2
        calls += 1
        outcome = probe(mid)
        if outcome.is_sat:
            v = objective.value(outcome.model.assignment)
            if v < mid:
                raise RuntimeError("model violates the probed objective bound")
            best_model, best = outcome.model, v
            lo = v + 1
        elif outcome.is_unsat:
            last_unsat_bound = mid
            hi = mid - 1
        else:
            return OptimizeResult(
                "unknown", best_model, best, calls, reason=outcome.reason
            )
    certified = best == hi_orig or last_unsat_bound == best + 1
    return OptimizeResult("optimal", best_model, best, calls, certified=certified)

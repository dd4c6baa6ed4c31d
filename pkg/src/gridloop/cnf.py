"""CNF construction substrate.

Literals are nonzero DIMACS-style integers: variable ``v`` appears as ``v``
(positive) or ``-v`` (negated).  A :class:`CnfBuilder` owns the variable
counter and the clause list; every encoding in this package writes into one.

Variable 1 is reserved and asserted true so that constants can be used
wherever a literal is expected (``builder.TRUE`` / ``builder.FALSE``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Lit = int


@dataclass
class BitVec:
    """Unsigned integer as a little-endian vector of literals."""

    bits: list[Lit]

    def __post_init__(self):
        if not self.bits:
            raise ValueError("BitVec needs at least one bit")

    @property
    def width(self) -> int:
        return len(self.bits)

    def value(self, assignment: dict[int, bool]) -> int:
        v = 0
        for i, b in enumerate(self.bits):
            if lit_value(b, assignment):
                v |= 1 << i
        return v


@dataclass
class UnaryCount:
    """Monotone threshold outputs: ``outputs[i-1]`` is true iff sum >= i."""

    outputs: list[Lit]

    @property
    def size(self) -> int:
        return len(self.outputs)

    def value(self, assignment: dict[int, bool]) -> int:
        v = 0
        for o in self.outputs:
            if lit_value(o, assignment):
                v += 1
        return v


def lit_value(lit: Lit, assignment: dict[int, bool]) -> bool:
    try:
        v = assignment[abs(lit)]
    except KeyError:
        raise ValueError(f"assignment missing variable {abs(lit)}") from None
    return v if lit > 0 else not v


# At-most-one switches from pairwise to a ladder above this many literals.
_AMO_PAIRWISE_MAX = 6


class CnfBuilder:
    """Fresh-variable allocation and clause storage.

    Single-owner: a builder must not be shared across concurrent tasks.
    """

    def __init__(self):
        self.var_count = 1  # variable 1 is the reserved constant-true
        self.clauses: list[list[Lit]] = [[1]]
        self.unsat = False
        self.names: dict[int, str] = {1: "const_true"}

    TRUE: Lit = 1
    FALSE: Lit = -1

    # -- variables and clauses ------------------------------------------

    def new_var(self, name: str | None = None) -> Lit:
        self.var_count += 1
        if name is not None:
            self.names[self.var_count] = name
        return self.var_count

    def new_vars(self, n: int, prefix: str | None = None) -> list[Lit]:
        if prefix is None:
            return [self.new_var() for _ in range(n)]
        return [self.new_var(f"{prefix}_{i}") for i in range(n)]

    def add_clause(self, lits: Iterable[Lit]) -> None:
        """Append a normalized clause.

        Duplicate literals are removed and tautologies dropped.  An empty
        literal sequence marks the whole formula trivially unsatisfiable.
        """
        out: list[Lit] = []
        seen: set[Lit] = set()
        for l in lits:
            if not isinstance(l, int) or l == 0:
                raise ValueError(f"bad literal {l!r}")
            if abs(l) > self.var_count:
                raise ValueError(f"literal {l} references unallocated variable")
            if -l in seen:
                return  # tautology
            if l not in seen:
                seen.add(l)
                out.append(l)
        if not out:
            self.unsat = True
            return
        self.clauses.append(out)

    # -- Tseitin gates --------------------------------------------------

    def gate_and(self, lits: Sequence[Lit]) -> Lit:
        """Fresh g with g <-> AND(lits).  A single literal is returned as-is."""
        if not lits:
            raise ValueError("gate_and needs at least one literal")
        if len(lits) == 1:
            return lits[0]
        g = self.new_var()
        for l in lits:
            self.add_clause([-g, l])
        self.add_clause([g] + [-l for l in lits])
        return g

    def gate_or(self, lits: Sequence[Lit]) -> Lit:
        if not lits:
            raise ValueError("gate_or needs at least one literal")
        if len(lits) == 1:
            return lits[0]
        g = self.new_var()
        for l in lits:
            self.add_clause([g, -l])
        self.add_clause([-g] + list(lits))
        return g

    def gate_implies(self, a: Lit, b: Lit) -> Lit:
        return self.gate_or([-a, b])

    def gate_iff(self, a: Lit, b: Lit) -> Lit:
        g = self.new_var()
        self.add_clause([-g, -a, b])
        self.add_clause([-g, a, -b])
        self.add_clause([g, a, b])
        self.add_clause([g, -a, -b])
        return g

    def gate_xor(self, a: Lit, b: Lit) -> Lit:
        g = self.new_var()
        self.add_clause([-g, a, b])
        self.add_clause([-g, -a, -b])
        self.add_clause([g, -a, b])
        self.add_clause([g, a, -b])
        return g

    # -- cardinality ----------------------------------------------------

    def at_least_one(self, lits: Sequence[Lit]) -> None:
        if not lits:
            raise ValueError("at_least_one needs at least one literal")
        self.add_clause(lits)

    def at_most_one(self, lits: Sequence[Lit]) -> None:
        if not lits:
            raise ValueError("at_most_one needs at least one literal")
        if len(lits) <= _AMO_PAIRWISE_MAX:
            for i in range(len(lits)):
                for j in range(i + 1, len(lits)):
                    self.add_clause([-lits[i], -lits[j]])
            return
        # sequential ladder: s_i = "some true among lits[0..i]"
        s_prev = lits[0]
        for l in lits[1:]:
            s = self.new_var()
            self.add_clause([-s_prev, s])
            self.add_clause([-l, s])
            self.add_clause([-l, -s_prev])
            s_prev = s

    def exactly_one(self, lits: Sequence[Lit]) -> None:
        self.at_least_one(lits)
        self.at_most_one(lits)

    def unary_count(self, lits: Sequence[Lit]) -> UnaryCount:
        """Totalizer over ``lits``.

        The outputs are fully defined in every model (o_i <-> sum >= i), so
        a single unit clause on an output is a sound sum bound.
        """
        if not lits:
            raise ValueError("unary_count needs at least one literal")

        def build(seg: Sequence[Lit]) -> list[Lit]:
            if len(seg) == 1:
                return [seg[0]]
            mid = len(seg) // 2
            return merge(build(seg[:mid]), build(seg[mid:]))

        def merge(a: list[Lit], b: list[Lit]) -> list[Lit]:
            p, q = len(a), len(b)
            r = self.new_vars(p + q)
            for i in range(p + 1):
                for j in range(q + 1):
                    k = i + j
                    if k >= 1:
                        cl = [r[k - 1]]
                        if i >= 1:
                            cl.append(-a[i - 1])
                        if j >= 1:
                            cl.append(-b[j - 1])
                        self.add_clause(cl)
                    if k <= p + q - 1:
                        cl = [-r[k]]
                        if i < p:
                            cl.append(a[i])
                        if j < q:
                            cl.append(b[j])
                        self.add_clause(cl)
            return r

        return UnaryCount(build(list(lits)))

    def fix_count(self, count: UnaryCount, k: int) -> None:
        n = count.size
        if not 0 <= k <= n:
            raise ValueError(f"count bound {k} out of range 0..{n}")
        if k >= 1:
            self.add_clause([count.outputs[k - 1]])
        if k < n:
            self.add_clause([-count.outputs[k]])

    def bound_ge(self, count: UnaryCount, k: int) -> None:
        n = count.size
        if not 0 <= k <= n:
            raise ValueError(f"count bound {k} out of range 0..{n}")
        if k >= 1:
            self.add_clause([count.outputs[k - 1]])

    def bound_le(self, count: UnaryCount, k: int) -> None:
        n = count.size
        if not 0 <= k <= n:
            raise ValueError(f"count bound {k} out of range 0..{n}")
        if k < n:
            self.add_clause([-count.outputs[k]])

    # -- bit-vector arithmetic ------------------------------------------

    def new_bitvec(self, width: int, prefix: str | None = None) -> BitVec:
        if width < 1:
            raise ValueError("BitVec width must be >= 1")
        return BitVec(self.new_vars(width, prefix))

    def increment(self, x: BitVec) -> tuple[BitVec, Lit]:
        """Ripple increment: returns (x + 1 as fresh bits, overflow literal)."""
        succ: list[Lit] = []
        carry = self.TRUE
        for b in x.bits:
            if carry == self.TRUE:
                succ.append(-b)
                carry = b
            else:
                succ.append(self.gate_xor(b, carry))
                carry = self.gate_and([b, carry])
        return BitVec(succ), carry

    def bitvec_successor(self, x: BitVec, y: BitVec, guard: Lit) -> None:
        """guard -> (y = x + 1); overflow (x all-ones) is banned under guard."""
        if x.width != y.width:
            raise ValueError("bitvec width mismatch")
        succ, overflow = self.increment(x)
        for yb, sb in zip(y.bits, succ.bits):
            self.add_clause([-guard, -yb, sb])
            self.add_clause([-guard, yb, -sb])
        self.add_clause([-guard, -overflow])

    def bitvec_eq_const(self, x: BitVec, c: int, guard: Lit) -> None:
        if not 0 <= c < (1 << x.width):
            raise ValueError(f"constant {c} out of range for width {x.width}")
        for i, b in enumerate(x.bits):
            self.add_clause([-guard, b if (c >> i) & 1 else -b])

    def bitvec_le_const(self, x: BitVec, c: int) -> None:
        """x <= c, unconditionally."""
        if c < 0:
            raise ValueError("bound must be nonnegative")
        if c >= (1 << x.width) - 1:
            return
        ones_above: list[Lit] = []
        for i in reversed(range(x.width)):
            if (c >> i) & 1:
                ones_above.append(-x.bits[i])
            else:
                self.add_clause([-x.bits[i]] + ones_above)

    # -- output ---------------------------------------------------------

    def emit_dimacs(self, sink) -> None:
        """Write the formula in DIMACS CNF to a text sink."""
        if self.unsat:
            sink.write("p cnf 1 2\n1 0\n-1 0\n")
            return
        sink.write(f"p cnf {self.var_count} {len(self.clauses)}\n")
        for cl in self.clauses:
            sink.write(" ".join(str(l) for l in cl) + " 0\n")

    def to_dimacs(self) -> str:
        import io

        buf = io.StringIO()
        self.emit_dimacs(buf)
        return buf.getvalue()

    def emit_varmap(self, sink) -> None:
        """Write 'index name' lines for every named variable."""
        for idx in sorted(self.names):
            sink.write(f"{idx} {self.names[idx]}\n")


def distance_width(n: int) -> int:
    """Bit width for distance labels over n vertices: max(1, ceil(log2 n))."""
    if n < 1:
        raise ValueError("need at least one vertex")
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def parse_dimacs(text: str) -> tuple[int, list[list[Lit]]]:
    """Parse a DIMACS CNF string into (nvars, clauses)."""
    nvars = None
    nclauses = None
    clauses: list[list[Lit]] = []
    cur: list[Lit] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            nvars, nclauses = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(v)
    if cur:
        clauses.append(cur)
    if nvars is None:
        raise ValueError("missing DIMACS header")
    if nclauses is not None and nclauses != len(clauses):
        raise ValueError(f"header declares {nclauses} clauses, found {len(clauses)}")
    return nvars, clauses

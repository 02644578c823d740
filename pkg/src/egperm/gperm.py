"""The extended graph permanent: eligible primes, residues, sequences, sign classes.

A residue at prime p = v_mult*n + 1 is the permanent of 1_{n*v x n*e} (x) M
mod p, where M is the reduced signed incidence matrix (or any unimodular row
representation, e.g. the R10 matrix).  Entries at primes with an odd column
duplication count flip together under edge reorientation; comparisons go
through sequences_match, never raw equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

from .graphcore import (FundamentalSpec, GraphError, Multigraph, duplicate_edges,
                        matrix_fundamental_spec)
from .matmod import (BlockSpec, IntMatrix, MatrixError, permanent_block,
                     permanent_naive, permanent_ryser, _factorials_mod)

NAIVE_LIMIT = 8
RYSER_LIMIT = 26
TAGGING_EDGE_LIMIT = 14


def reduced_incidence(g: Multigraph, special: int) -> IntMatrix:
    """Signed incidence matrix with the special vertex's row deleted.

    +1 at the head of each edge, -1 at the tail; a loop gives a zero column.
    Rows follow increasing vertex index, skipping the special vertex.
    """
    if not (0 <= special < g.vertex_count):
        raise GraphError("special vertex out of range")
    if g.vertex_count < 2:
        raise GraphError("need at least two vertices")
    rows = []
    for v in range(g.vertex_count):
        if v == special:
            continue
        row = []
        for t, h in g.edges:
            if t == h:
                row.append(0)
            elif h == v:
                row.append(1)
            elif t == v:
                row.append(-1)
            else:
                row.append(0)
        rows.append(row)
    return IntMatrix.from_rows(rows)


@dataclass(frozen=True)
class MatrixSource:
    """A reduced matrix whose block expansions define the residue sequence."""
    matrix: IntMatrix
    spec: FundamentalSpec
    label: str
    graph: Multigraph | None = None
    special: int | None = None

    @staticmethod
    def from_graph(g: Multigraph, special: int | None = None, label: str = "graph") -> "MatrixSource":
        if special is None:
            special = g.vertex_count - 1
        m = reduced_incidence(g, special)
        spec = matrix_fundamental_spec(m.rows, m.cols)
        return MatrixSource(m, spec, label, g, special)

    @staticmethod
    def from_matrix(m: IntMatrix, label: str = "matrix") -> "MatrixSource":
        from .matmod import rational_rank
        if rational_rank(m) != m.rows:
            raise MatrixError("matrix source must have full row rank")
        spec = matrix_fundamental_spec(m.rows, m.cols)
        return MatrixSource(m, spec, label)


@dataclass(frozen=True)
class PermSequence:
    source: str
    entries: tuple[tuple[int, int, str], ...]  # (prime, residue, "fixed"|"flippable")

    def primes(self) -> list[int]:
        return [p for p, _, _ in self.entries]

    def as_dict(self) -> dict[int, int]:
        return {p: r for p, r, _ in self.entries}

    def sign_class(self, p: int) -> str:
        for q, _, s in self.entries:
            if q == p:
                return s
        raise KeyError(p)


def _row_order(m: IntMatrix) -> list[int]:
    """Row elimination order keeping the active column frontier small."""
    supports = [set(j for j in range(m.cols) if m.at(i, j) != 0) for i in range(m.rows)]
    order: list[int] = []
    done: set[int] = set()
    touched: set[int] = set()
    while len(order) < m.rows:
        best, best_key = None, None
        for i in range(m.rows):
            if i in done:
                continue
            new = len(supports[i] - touched)
            key = (new, len(supports[i]), i)
            if best_key is None or key < best_key:
                best, best_key = i, key
        order.append(best)
        done.add(best)
        touched |= supports[best]
    return order


def gperm_at_prime(src: MatrixSource, p: int, engine: str = "auto") -> int:
    """Residue of the extended graph permanent at an eligible prime."""
    n = src.spec.n_for(p)  # raises on ineligible or composite p
    spec = BlockSpec(src.matrix, n * src.spec.v_mult, n * src.spec.e_mult)
    dim = spec.expanded_cols()
    if engine == "auto":
        engine = "naive" if dim <= NAIVE_LIMIT else "block"
    if engine == "naive":
        return permanent_naive(spec.expand().mod(p))
    if engine == "ryser":
        if dim > RYSER_LIMIT:
            raise MatrixError(f"expanded dimension {dim} exceeds the ryser guard")
        return permanent_ryser(spec.expand().mod(p), guard=RYSER_LIMIT)
    if engine == "block":
        return permanent_block(spec, p, order=_row_order(src.matrix))
    raise ValueError(f"unknown engine {engine!r}")


def gperm_sequence(src: MatrixSource, max_prime: int, formula=None, workers: int = 1) -> PermSequence:
    """All eligible residues up to max_prime, in prime order.

    When a closed form is supplied it is used for every prime (mixing engines
    within one sequence could flip signs inconsistently at flippable primes);
    otherwise the block engine computes each entry under the canonical
    orientation.
    """
    primes = src.spec.eligible_primes(max_prime)

    def one(p: int) -> int:
        if formula is not None:
            from .closedform import eval_formula
            return eval_formula(formula, p)
        return gperm_at_prime(src, p)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            residues = list(pool.map(one, primes))
    else:
        residues = [one(p) for p in primes]
    entries = tuple(
        (p, r, "flippable" if src.spec.flippable(p) else "fixed")
        for p, r in zip(primes, residues)
    )
    return PermSequence(src.label, entries)


def sequence_from_values(label: str, spec: FundamentalSpec, values: dict[int, int]) -> PermSequence:
    entries = tuple(
        (p, values[p] % p, "flippable" if spec.flippable(p) else "fixed")
        for p in sorted(values)
    )
    return PermSequence(label, entries)


def sequences_match(s1: PermSequence, s2: PermSequence) -> tuple[bool, dict]:
    """Sign-class-aware comparison.

    True when fixed entries agree exactly and one global sign makes every
    flippable entry agree.  The report carries the sign used and any
    mismatching primes.
    """
    if s1.primes() != s2.primes():
        raise ValueError("sequences have different prime support")
    d1, d2 = dict(), dict()
    classes = dict()
    for (p, r1, c1), (_, r2, c2) in zip(s1.entries, s2.entries):
        if c1 != c2:
            raise ValueError(f"sign class disagreement at {p}")
        d1[p], d2[p] = r1, r2
        classes[p] = c1
    fixed_bad = [p for p in d1 if classes[p] == "fixed" and d1[p] % p != d2[p] % p]
    result = {"fixed_mismatches": fixed_bad, "epsilon": None, "flippable_mismatches": []}
    if fixed_bad:
        return False, result
    for eps in (1, -1):
        bad = [p for p in d1 if classes[p] == "flippable" and d1[p] % p != eps * d2[p] % p]
        if not bad:
            result["epsilon"] = eps
            return True, result
    result["flippable_mismatches"] = [
        p for p in d1 if classes[p] == "flippable" and d1[p] % p not in (d2[p] % p, -d2[p] % p)
    ]
    return False, result


# ---------------------------------------------------------------------------
# Tagging oracle
# ---------------------------------------------------------------------------

def tagging_oracle(g: Multigraph, p: int, special: int | None = None) -> int:
    """Independent residue computation by enumerating edge taggings.

    Each edge of the duplicated graph G^[n*e] places one tag at an endpoint;
    every non-special vertex collects exactly p-1 tags, the special vertex
    none.  A tag at the tail contributes -1, at the head +1; the sum of signs
    times (p-1)!^(|V|-1) is the permanent.  Loops cancel pairwise and force 0.
    """
    if special is None:
        special = g.vertex_count - 1
    spec = matrix_fundamental_spec(g.vertex_count - 1, g.edge_count)
    n = spec.n_for(p)
    expanded = duplicate_edges(g, n * spec.e_mult)
    if expanded.edge_count > TAGGING_EDGE_LIMIT:
        raise GraphError(f"tagging oracle guarded at {TAGGING_EDGE_LIMIT} expanded edges")
    quota = [p - 1] * g.vertex_count
    quota[special] = 0
    edges = expanded.edges
    ends_left = [0] * g.vertex_count
    for t, h in edges:
        ends_left[t] += 1
        ends_left[h] += 1
    if any(quota[v] > ends_left[v] for v in range(g.vertex_count)):
        return 0

    total = 0

    def feasible(t: int, h: int) -> bool:
        return quota[t] <= ends_left[t] and quota[h] <= ends_left[h]

    def rec(i: int, sign: int):
        nonlocal total
        if i == len(edges):
            total += sign
            return
        t, h = edges[i]
        ends_left[t] -= 1
        ends_left[h] -= 1
        if quota[h] > 0:  # tag at head: +1 entry
            quota[h] -= 1
            if feasible(t, h):
                rec(i + 1, sign)
            quota[h] += 1
        if quota[t] > 0:  # tag at tail: -1 entry
            quota[t] -= 1
            if feasible(t, h):
                rec(i + 1, -sign)
            quota[t] += 1
        ends_left[t] += 1
        ends_left[h] += 1

    rec(0, 1)
    fact = _factorials_mod(p - 1, p)
    colour = pow(fact[p - 1], g.vertex_count - 1, p)
    return colour * total % p

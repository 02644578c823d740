"""Exact integer/prime-field matrices and the three permanent engines.

Everything is exact: big integers before reduction, eager reduction mod p
inside the engines.  The block engine exploits the 1_{a x b} (x) M structure
by cofactor expansion over row groups with memoization on the remaining
column-class multiplicities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphcore import is_prime


class MatrixError(ValueError):
    pass


class CompositeModulusError(MatrixError):
    """Raised when a permanent residue is requested at a composite modulus."""


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]  # row-major

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise MatrixError("entry count does not match dimensions")

    @staticmethod
    def from_rows(rows: list[list[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if rows else 0
        if any(len(row) != c for row in rows):
            raise MatrixError("ragged rows")
        return IntMatrix(r, c, tuple(x for row in rows for x in row))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols]

    def tolists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([list(self.col(j)) for j in range(self.cols)])

    def mod(self, p: int) -> "ModMatrix":
        return ModMatrix(self.rows, self.cols, p, tuple(x % p for x in self.entries))


@dataclass(frozen=True)
class ModMatrix:
    rows: int
    cols: int
    modulus: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise MatrixError(f"modulus {self.modulus} is not prime")
        if any(not (0 <= x < self.modulus) for x in self.entries):
            raise MatrixError("entries not reduced")

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols]


@dataclass(frozen=True)
class BlockSpec:
    """The block matrix 1_{row_mult x col_mult} (x) base."""
    base: IntMatrix
    row_mult: int
    col_mult: int

    def expanded_rows(self) -> int:
        return self.base.rows * self.row_mult

    def expanded_cols(self) -> int:
        return self.base.cols * self.col_mult

    def is_square(self) -> bool:
        return self.expanded_rows() == self.expanded_cols()

    def expand(self) -> IntMatrix:
        out = []
        for _ in range(self.row_mult):
            for i in range(self.base.rows):
                row = []
                for _ in range(self.col_mult):
                    row.extend(self.base.row(i))
                out.append(row)
        return IntMatrix.from_rows(out)


# ---------------------------------------------------------------------------
# Naive engine (exact, small)
# ---------------------------------------------------------------------------

def permanent_naive(m: IntMatrix | ModMatrix, guard: int = 12) -> int:
    """Exact permanent by row expansion with zero skipping.

    Returns a big integer for IntMatrix, a residue for ModMatrix.
    """
    if m.rows != m.cols:
        raise MatrixError("permanent needs a square matrix")
    if m.rows > guard:
        raise MatrixError(f"naive engine guarded at dimension {guard}")
    n = m.rows
    p = m.modulus if isinstance(m, ModMatrix) else None
    cols_used = [False] * n

    def rec(i: int) -> int:
        if i == n:
            return 1
        total = 0
        base = i * n
        for j in range(n):
            if cols_used[j]:
                continue
            a = m.entries[base + j]
            if a == 0:
                continue
            cols_used[j] = True
            total += a * rec(i + 1)
            cols_used[j] = False
        return total % p if p is not None else total

    return rec(0)


# ---------------------------------------------------------------------------
# Ryser engine (inclusion-exclusion over column subsets, Gray-code order)
# ---------------------------------------------------------------------------

def permanent_ryser(m: ModMatrix, guard: int = 30) -> int:
    """Permanent mod p via Ryser's formula.

    Gray-code subset iteration in pure Python up to 20 columns, a chunked
    numpy sweep beyond that (still exact: all arithmetic mod p in int64).
    """
    if m.rows != m.cols:
        raise MatrixError("permanent needs a square matrix")
    n = m.rows
    if n > guard:
        raise MatrixError(f"ryser engine guarded at dimension {guard}")
    if n == 0:
        return 1 % m.modulus
    if n <= 20:
        return _ryser_gray(m)
    return _ryser_numpy(m)


def _ryser_gray(m: ModMatrix) -> int:
    n, p = m.rows, m.modulus
    cols = [list(m.col(j)) for j in range(n)]
    rowsums = [0] * n
    total = 0
    gray = 0
    for k in range(1, 1 << n):
        bit = (k & -k).bit_length() - 1
        gray ^= 1 << bit
        col = cols[bit]
        if gray & (1 << bit):
            for i in range(n):
                rowsums[i] += col[i]
        else:
            for i in range(n):
                rowsums[i] -= col[i]
        prod = 1
        for s in rowsums:
            prod = prod * s % p
        if bin(gray).count("1") % 2 == n % 2:
            total += prod
        else:
            total -= prod
    return total % p


def _ryser_numpy(m: ModMatrix, low_bits: int = 16) -> int:
    n, p = m.rows, m.modulus
    a = np.array([list(m.row(i)) for i in range(n)], dtype=np.int64)
    lo = min(low_bits, n)
    hi = n - lo
    lowsets = np.arange(1 << lo, dtype=np.int64)
    # rowsums over the low columns for every low subset
    low_bitmat = ((lowsets[:, None] >> np.arange(lo)[None, :]) & 1).astype(np.int64)
    low_sums = low_bitmat @ a[:, :lo].T  # (2^lo, n)
    low_par = np.zeros(1 << lo, dtype=np.int64)
    for b in range(lo):
        low_par ^= (lowsets >> b) & 1
    total = 0
    for hmask in range(1 << hi):
        hsum = np.zeros(n, dtype=np.int64)
        hpar = 0
        for b in range(hi):
            if hmask >> b & 1:
                hsum += a[:, lo + b]
                hpar ^= 1
        rs = (low_sums + hsum[None, :]) % p
        prod = np.ones(1 << lo, dtype=np.int64)
        for j in range(n):
            prod = prod * rs[:, j] % p
        signs = np.where((low_par ^ hpar) % 2 == n % 2, 1, -1)
        total += int((prod * signs).sum() % p)
    return total % p


# ---------------------------------------------------------------------------
# Block engine
# ---------------------------------------------------------------------------

def permanent_block(spec: BlockSpec, p: int, order: list[int] | None = None) -> int:
    """Permanent of 1_{a x b} (x) base, mod prime p.

    Composite moduli raise CompositeModulusError except the one-row base,
    which is computed literally (the two-vertex special case).
    """
    if not spec.is_square():
        raise MatrixError("block spec is not square")
    if not is_prime(p):
        if spec.base.rows == 1:
            total = spec.expanded_cols()
            sign = 1
            for j in range(spec.base.cols):
                sign *= spec.base.at(0, j) ** spec.col_mult
            return sign * math.factorial(total) % p
        raise CompositeModulusError(f"composite modulus {p}: permanent is 0 (flagged)")
    row_mults = [spec.row_mult] * spec.base.rows
    col_mults = [spec.col_mult] * spec.base.cols
    return grouped_permanent(spec.base, row_mults, col_mults, p, order)


def grouped_permanent(base: IntMatrix, row_mults: list[int], col_mults: list[int],
                      p: int, order: list[int] | None = None) -> int:
    """Permanent mod p of the matrix with base row i repeated row_mults[i] times
    and base column j repeated col_mults[j] times.

    Cofactor expansion row-group by row-group; states keyed by the remaining
    column multiplicities.  Identical columns are merged first.
    """
    if sum(row_mults) != sum(col_mults):
        raise MatrixError("grouped permanent requires equal total row and column counts")
    base, col_mults = _merge_identical_columns(base, col_mults)
    r, c = base.rows, base.cols
    if order is None:
        order = list(range(r))
    # a group of >= p identical rows or columns contributes a factor p! == 0
    max_idx = max(row_mults + col_mults, default=0)
    if max_idx >= p:
        return 0
    fact = _factorials_mod(max_idx, p)
    inv_fact = _inverse_factorials(fact, p)

    support = [[j for j in range(c) if base.at(i, j) != 0] for i in range(r)]
    values = [[base.at(i, j) % p for j in range(c)] for i in range(r)]
    # columns whose last incident row (in processing order) is this one must
    # be consumed exactly there; that prunes doomed branches and keeps the
    # memo states small
    closing: list[list[int]] = [[] for _ in range(len(order))]
    seen_cols: set[int] = set()
    for pos in range(len(order) - 1, -1, -1):
        for j in support[order[pos]]:
            if j not in seen_cols:
                closing[pos].append(j)
                seen_cols.add(j)

    memo: dict[tuple[int, tuple[int, ...]], int] = {}

    def rec(pos: int, remaining: tuple[int, ...]) -> int:
        if pos == len(order):
            return 1 if all(x == 0 for x in remaining) else 0
        key = (pos, remaining)
        if key in memo:
            return memo[key]
        i = order[pos]
        need = row_mults[i]
        rem = list(remaining)
        forced_coeff = 1
        for j in closing[pos]:
            k = rem[j]
            if k:
                need -= k
                rem[j] = 0
                forced_coeff = forced_coeff * inv_fact[k] % p * pow(values[i][j], k, p) % p
        cols = [j for j in support[i] if rem[j] > 0]
        total = 0

        def assign(idx: int, left: int, coeff: int):
            nonlocal total
            if idx == len(cols) - 1:
                j = cols[idx]
                if left <= rem[j]:
                    rem[j] -= left
                    sub = rec(pos + 1, tuple(rem))
                    rem[j] += left
                    if sub:
                        term = coeff * inv_fact[left] % p * pow(values[i][j], left, p) % p
                        total = (total + term * sub) % p
                return
            j = cols[idx]
            cap = min(left, rem[j])
            for k in range(cap + 1):
                rem[j] -= k
                assign(idx + 1, left - k, coeff * inv_fact[k] % p * pow(values[i][j], k, p) % p)
                rem[j] += k

        if need >= 0:
            if cols:
                assign(0, need, forced_coeff)
            elif need == 0:
                total = forced_coeff * rec(pos + 1, tuple(rem)) % p
        total = total * fact[row_mults[i]] % p
        memo[key] = total
        return total

    prefactor = 1
    for g in col_mults:
        prefactor = prefactor * fact[g] % p
    return prefactor * rec(0, tuple(col_mults)) % p


def _merge_identical_columns(base: IntMatrix, col_mults: list[int]) -> tuple[IntMatrix, list[int]]:
    seen: dict[tuple[int, ...], int] = {}
    cols: list[tuple[int, ...]] = []
    mults: list[int] = []
    for j in range(base.cols):
        v = base.col(j)
        if v in seen:
            mults[seen[v]] += col_mults[j]
        else:
            seen[v] = len(cols)
            cols.append(v)
            mults.append(col_mults[j])
    merged = IntMatrix.from_rows([[cols[j][i] for j in range(len(cols))] for i in range(base.rows)])
    return merged, mults


def _factorials_mod(n: int, p: int) -> list[int]:
    out = [1] * (n + 1)
    for i in range(1, n + 1):
        out[i] = out[i - 1] * i % p
    return out


def _inverse_factorials(fact: list[int], p: int) -> list[int]:
    out = [1] * len(fact)
    out[-1] = pow(fact[-1], p - 2, p)
    for i in range(len(fact) - 2, -1, -1):
        out[i] = out[i + 1] * (i + 1) % p
    return out


# ---------------------------------------------------------------------------
# Totally-unimodular row reduction to [I | A]
# ---------------------------------------------------------------------------

def row_reduce_unimodular(m: IntMatrix) -> IntMatrix:
    """Reduce m, whose first r columns span, to [I_r | A] and return A.

    Only row swaps, additions of integer multiples, and scalings by -1 are
    used; pivots are always +-1 because incidence-derived matrices are
    totally unimodular.  A is the unique such right block.
    """
    r, c = m.rows, m.cols
    work = [list(m.row(i)) for i in range(r)]
    for j in range(r):
        piv = None
        for i in range(j, r):
            if work[i][j] in (1, -1):
                piv = i
                break
        if piv is None:
            if any(work[i][j] != 0 for i in range(j, r)):
                raise MatrixError("pivot is not a unit: matrix is not totally unimodular")
            raise MatrixError("leading block singular")
        work[j], work[piv] = work[piv], work[j]
        if work[j][j] == -1:
            work[j] = [-x for x in work[j]]
        for i in range(r):
            if i != j and work[i][j] != 0:
                f = work[i][j]
                work[i] = [a - f * b for a, b in zip(work[i], work[j])]
    a = IntMatrix.from_rows([row[r:] for row in work])
    if any(x not in (-1, 0, 1) for x in a.entries):
        raise MatrixError("reduction left the unimodular range")
    return a


def rational_rank(m: IntMatrix) -> int:
    rows = [[Fraction(x) for x in m.row(i)] for i in range(m.rows)]
    lead = 0
    for j in range(m.cols):
        piv = next((i for i in range(lead, len(rows)) if rows[i][j] != 0), None)
        if piv is None:
            continue
        rows[lead], rows[piv] = rows[piv], rows[lead]
        for i in range(len(rows)):
            if i != lead and rows[i][j] != 0:
                f = rows[i][j] / rows[lead][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[lead])]
        lead += 1
    return lead


def same_row_space(m1: IntMatrix, m2: IntMatrix) -> bool:
    """Exact rational row-space comparison (test helper)."""
    if m1.cols != m2.cols:
        return False
    def rref(m: IntMatrix):
        rows = [[Fraction(x) for x in m.row(i)] for i in range(m.rows)]
        lead = 0
        for j in range(m.cols):
            piv = next((i for i in range(lead, len(rows)) if rows[i][j] != 0), None)
            if piv is None:
                continue
            rows[lead], rows[piv] = rows[piv], rows[lead]
            rows[lead] = [x / rows[lead][j] for x in rows[lead]]
            for i in range(len(rows)):
                if i != lead and rows[i][j] != 0:
                    f = rows[i][j]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[lead])]
            lead += 1
        return [tuple(r) for r in rows if any(x != 0 for x in r)]
    return rref(m1) == rref(m2)


# ---------------------------------------------------------------------------
# Matrix file format
# ---------------------------------------------------------------------------

def parse_matrix(text: str) -> IntMatrix:
    """Parse `M <rows> <cols>` followed by rows of space-separated integers."""
    lines = [l.strip() for l in text.splitlines() if l.strip() and not l.startswith("#")]
    if not lines or not lines[0].startswith("M "):
        raise MatrixError("missing M header")
    _, r, c = lines[0].split()
    r, c = int(r), int(c)
    rows = []
    for line in lines[1:1 + r]:
        rows.append([int(x) for x in line.split()])
    m = IntMatrix.from_rows(rows)
    if m.rows != r or m.cols != c:
        raise MatrixError("matrix body does not match header dimensions")
    return m

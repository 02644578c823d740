"""The affine-hypersurface representation of the residue sequence.

The permanent polynomial of the fundamental matrix factors into the
(v-multiplicity)-th powers of row forms; substituting y^v for each variable
after taking the v-th root gives a polynomial whose F_p point count carries
the residue:

    GPerm[p](G) = (-1)^(L+1) * r!^L * [F~]_p   (mod p),  p = r*v + 1.

The (-1)^(L+1) factor is forced by the coefficient-extraction identity
[x1..xN^(p-1)] F^(p-1) = (-1)^(N+1) [F]_p, which verify_chevalley checks
directly on expanded toy polynomials.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graphcore import GraphError, Multigraph, is_prime, matrix_fundamental_spec
from .gperm import MatrixSource, PermSequence, gperm_at_prime, reduced_incidence

POINT_BUDGET = 10 ** 8
_CHUNK = 1 << 15


@dataclass(frozen=True)
class LinearFormProduct:
    """Product of powers of linear forms over L = e_mult*|E| variables."""
    nvars: int
    factors: tuple[tuple[tuple[int, ...], int], ...]  # (coefficient vector, exponent)

    def degree(self) -> int:
        return sum(e for _, e in self.factors)


def permanent_polynomial(g: Multigraph, special: int | None = None) -> LinearFormProduct:
    """F_{G,v'}: one factor per reduced-incidence row, to the power v_mult.

    Variables are edge-major: edge e contributes variables e*e_mult + c.
    """
    if special is None:
        special = g.vertex_count - 1
    m = reduced_incidence(g, special)
    spec = matrix_fundamental_spec(m.rows, m.cols)
    nvars = spec.e_mult * g.edge_count
    factors = []
    for i in range(m.rows):
        coeffs = [0] * nvars
        for e in range(m.cols):
            for c in range(spec.e_mult):
                coeffs[e * spec.e_mult + c] = m.at(i, e)
        factors.append((tuple(coeffs), spec.v_mult))
    return LinearFormProduct(nvars, tuple(factors))


def tilde_point_count(g: Multigraph, special: int | None, p: int,
                      budget: int | None = None) -> int:
    """|{y in F_p^L : F~(y) = 0}| for F~ = prod_i l_i(y^v)."""
    f = permanent_polynomial(g, special)
    spec = matrix_fundamental_spec(g.vertex_count - 1, g.edge_count)
    if p != 2 and (not is_prime(p) or (p - 1) % spec.v_mult != 0):
        raise GraphError(f"prime {p} not 1 mod {spec.v_mult} (and not 2)")
    L = f.nvars
    if p ** L > (budget or POINT_BUDGET):
        raise GraphError(f"{p}^{L} exceeds the point budget")
    power = np.array([pow(v, spec.v_mult, p) for v in range(p)], dtype=np.int64)
    coeff_rows = np.array([c for c, _ in f.factors], dtype=np.int64) % p
    total = 0
    npts = p ** L
    for lo in range(0, npts, _CHUNK):
        hi = min(lo + _CHUNK, npts)
        idx = np.arange(lo, hi, dtype=np.int64)
        powered = np.stack([power[(idx // p ** j) % p] for j in range(L)], axis=1)
        vals = powered @ coeff_rows.T % p
        total += int((vals == 0).any(axis=1).sum())
    return total


@dataclass(frozen=True)
class PointCountIdentity:
    prime: int
    r: int
    L: int
    count: int
    gperm: int
    rhs: int          # (-1)^(L+1) r!^L [F~]_p mod p
    rhs_unsigned: int  # r!^L [F~]_p mod p
    holds: bool


def point_count_identity(g: Multigraph, special: int | None, p: int) -> PointCountIdentity:
    """Check GPerm[p] = (-1)^(L+1) r!^L [F~]_p against the block engine."""
    spec = matrix_fundamental_spec(g.vertex_count - 1, g.edge_count)
    r = spec.n_for(p)
    count = tilde_point_count(g, special, p)
    src = MatrixSource.from_graph(g, special)
    gp = gperm_at_prime(src, p)
    rfac = 1
    for i in range(2, r + 1):
        rfac = rfac * i % p
    unsigned = pow(rfac, spec.L, p) * count % p
    rhs = unsigned if spec.L % 2 == 1 else (-unsigned) % p
    return PointCountIdentity(p, r, spec.L, count, gp, rhs, unsigned, rhs == gp)


def maincor_sign(edge_count: int, r: int) -> int:
    """Sign s with GPerm = s*[F~]_p for phi^4 graphs (L = |E| even).

    |E| = 0 mod 4 gives s = -1 at every prime; |E| = 2 mod 4 gives s = +1 at
    fixed primes (r even) and s = -1 at flippable ones.
    """
    if edge_count % 4 == 0:
        return -1
    return 1 if r % 2 == 0 else -1


# ---------------------------------------------------------------------------
# Chevalley-Warning coefficient identity (toy sizes, expanded polynomials)
# ---------------------------------------------------------------------------

Poly = dict  # monomial exponent tuple -> integer coefficient


def poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = tuple(x + y for x, y in zip(ma, mb))
            out[key] = (out.get(key, 0) + ca * cb) % p
    return {k: v for k, v in out.items() if v}


def poly_count_roots(f: Poly, nvars: int, p: int) -> int:
    count = 0
    for point in itertools.product(range(p), repeat=nvars):
        total = 0
        for mono, coeff in f.items():
            term = coeff
            for x, e in zip(point, mono):
                term = term * pow(x, e, p) % p
            total = (total + term) % p
        if total == 0:
            count += 1
    return count


def verify_chevalley(f: Poly, nvars: int, p: int) -> bool:
    """Coefficient-extraction form of Chevalley-Warning, with its sign.

    Checks [x1..xN^(p-1)] f^(p-1) = (-1)^(N+1) [f]_p (mod p), both sides
    computed independently (expansion vs brute-force count).
    """
    if nvars > 4 or p > 7:
        raise ValueError("toy guard: nvars <= 4 and p <= 7")
    deg = max((sum(m) for m in f), default=0)
    if deg > nvars:
        raise ValueError("degree exceeds variable count: identity out of scope")
    power: Poly = {tuple([0] * nvars): 1}
    for _ in range(p - 1):
        power = poly_mul(power, f, p)
    coeff = power.get(tuple([p - 1] * nvars), 0) % p
    count = poly_count_roots(f, nvars, p)
    return coeff % p == ((-1) ** (nvars + 1)) * count % p


def verify_extension_identity(factors: list[tuple[int, ...]], r: int) -> bool:
    """[x1..x_{rn}] h^[r] = r!^n [(x1..xn)^r] h for products of linear forms."""
    if not factors:
        return True
    n = len(factors[0])
    # left side: extend each factor over r*n variables and expand exactly
    big: dict = {tuple([0] * (r * n)): 1}
    for coeffs in factors:
        ext: dict = {}
        form = {}
        for blk in range(r):
            for j, c in enumerate(coeffs):
                if c:
                    mono = [0] * (r * n)
                    mono[blk * n + j] = 1
                    form[tuple(mono)] = form.get(tuple(mono), 0) + c
        new: dict = {}
        for m1, c1 in big.items():
            for m2, c2 in form.items():
                key = tuple(a + b for a, b in zip(m1, m2))
                new[key] = new.get(key, 0) + c1 * c2
        big = new
    lhs = big.get(tuple([1] * (r * n)), 0)
    # right side: expand h over n variables
    small: dict = {tuple([0] * n): 1}
    for coeffs in factors:
        form = {}
        for j, c in enumerate(coeffs):
            if c:
                mono = [0] * n
                mono[j] = 1
                form[tuple(mono)] = c
        new = {}
        for m1, c1 in small.items():
            for m2, c2 in form.items():
                key = tuple(a + b for a, b in zip(m1, m2))
                new[key] = new.get(key, 0) + c1 * c2
        small = new
    rhs = math.factorial(r) ** n * small.get(tuple([r] * n), 0)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Eta products and modular-form comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple[int, ...]  # c_0..c_N
    truncation: int

    def coeff(self, k: int) -> int:
        if k > self.truncation:
            raise IndexError(f"series truncated at {self.truncation}")
        return self.coeffs[k]

    def mul(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.truncation, other.truncation)
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs[:n + 1]):
            if a == 0:
                continue
            for j in range(0, n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return PowerSeries(tuple(out), n)

    def shift(self, k: int) -> "PowerSeries":
        out = [0] * k + list(self.coeffs)
        return PowerSeries(tuple(out[:self.truncation + 1]), self.truncation)


def euler_function(scale: int, n_trunc: int) -> PowerSeries:
    """prod_{k>=1} (1 - q^(scale*k)) by the pentagonal number theorem."""
    coeffs = [0] * (n_trunc + 1)
    coeffs[0] = 1
    j = 1
    while True:
        placed = False
        for gp in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            k = scale * gp
            if k <= n_trunc:
                coeffs[k] += (-1) ** j
                placed = True
        if not placed:
            break
        j += 1
    return PowerSeries(tuple(coeffs), n_trunc)


def eta_product(terms: list[tuple[int, int]], n_trunc: int) -> PowerSeries:
    """q-expansion of prod eta(m_i z)^(e_i) to order n_trunc.

    The leading power sum(m_i e_i)/24 must be a non-negative integer.
    """
    total = sum(m * e for m, e in terms)
    if total % 24 != 0:
        raise ValueError("sum of multiplier*exponent must be divisible by 24")
    shift = total // 24
    series = PowerSeries(tuple([1] + [0] * n_trunc), n_trunc)
    for m, e in terms:
        base = euler_function(m, n_trunc)
        for _ in range(e):
            series = series.mul(base)
    return series.shift(shift)


def compare_modform(seq: PermSequence, series: PowerSeries, signed: bool = False) -> dict:
    """Per-prime comparison of a_p mod p against the sequence, sign-class aware.

    signed=True negates the series (for forms quoted with a leading minus).
    Fixed entries must agree exactly; flippable entries must agree under one
    global sign.
    """
    primes = seq.primes()
    if series.truncation < max(primes):
        raise ValueError("series truncation is shorter than the prime range")
    residuals = {}
    for p, r, cls in seq.entries:
        a = series.coeff(p) * (-1 if signed else 1)
        residuals[p] = (r % p, a % p, cls)
    for eps in (1, -1):
        ok = all((r == a % q if cls == "fixed" else r == eps * a % q)
                 for q, (r, a, cls) in residuals.items())
        if ok:
            return {"match": True, "epsilon": eps,
                    "rows": [{"prime": q, "sequence": r, "a_p_mod_p": a, "class": cls}
                             for q, (r, a, cls) in residuals.items()]}
    return {"match": False, "epsilon": None,
            "rows": [{"prime": q, "sequence": r, "a_p_mod_p": a, "class": cls}
                     for q, (r, a, cls) in residuals.items()]}


def coefficients_from_csv(text: str) -> dict[int, int]:
    """Parse a `p,a_p` coefficient table."""
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.lower().startswith("p,"):
            continue
        p_s, a_s = line.split(",")
        out[int(p_s)] = int(a_s)
    return out
